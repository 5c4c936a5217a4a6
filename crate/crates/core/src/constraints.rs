//! Generalized Pauli constraint catalogs for three fermions in five to eight
//! orbitals, their evaluation on occupation spectra, selection rules,
//! pinned-subspace projections and derivability between ranks.

use crate::density::{AmplitudeTensor, OccupationSpectrum};
use crate::determinants::{enumerate, Determinant};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp;

/// Δ at or below this counts as pinned.
pub const PINNING_TOLERANCE: f64 = 1e-9;

/// `Δ = bound − Σ κ_i λ_i ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub id: String,
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

impl Constraint {
    fn new(id: impl Into<String>, bound: f64, coeffs: &[f64]) -> Self {
        Self { id: id.into(), coeffs: coeffs.to_vec(), bound }
    }

    pub fn value(&self, lambda: &[f64]) -> f64 {
        self.bound - self.coeffs.iter().zip(lambda).map(|(k, l)| k * l).sum::<f64>()
    }

    /// The same constraint with trailing orbitals dropped (their λ set to 0).
    pub fn truncated(&self, m: usize) -> Self {
        Self { id: self.id.clone(), coeffs: self.coeffs[..m].to_vec(), bound: self.bound }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCatalog {
    pub rank: usize,
    pub constraints: Vec<Constraint>,
    /// Identifiers known to exist but not listed here.
    pub omitted: Vec<String>,
}

impl ConstraintCatalog {
    pub fn for_rank(rank: usize) -> Result<Self> {
        match rank {
            5 => Ok(rank5()),
            6 => Ok(rank6()),
            7 => Ok(rank7()),
            8 => Ok(rank8()),
            _ => Err(Error::InvalidParameter(format!("no constraint catalog for rank {rank}"))),
        }
    }

    pub fn get(&self, id: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    pub fn ids(&self) -> Vec<&str> {
        self.constraints.iter().map(|c| c.id.as_str()).collect()
    }
}

/// Equalities forced on every pure state in ∧³ of a five-dimensional space.
fn rank5() -> ConstraintCatalog {
    ConstraintCatalog {
        rank: 5,
        constraints: vec![
            Constraint::new("1", 1.0, &[1.0, 0.0, 0.0, 0.0, 0.0]),
            Constraint::new("2", 0.0, &[0.0, 1.0, -1.0, 0.0, 0.0]),
            Constraint::new("3", 0.0, &[0.0, 0.0, 0.0, 1.0, -1.0]),
        ],
        omitted: vec![],
    }
}

fn rank6() -> ConstraintCatalog {
    ConstraintCatalog {
        rank: 6,
        constraints: vec![
            Constraint::new("BD1", 1.0, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            Constraint::new("BD2", 1.0, &[0.0, 1.0, 0.0, 0.0, 1.0, 0.0]),
            Constraint::new("BD3", 1.0, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0]),
            Constraint::new("Delta", 0.0, &[0.0, 0.0, 0.0, 1.0, -1.0, -1.0]),
        ],
        omitted: vec![],
    }
}

fn rank7() -> ConstraintCatalog {
    ConstraintCatalog {
        rank: 7,
        constraints: vec![
            Constraint::new("1", 2.0, &[1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0]),
            Constraint::new("2", 2.0, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]),
            Constraint::new("3", 2.0, &[0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0]),
            Constraint::new("4", 2.0, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0]),
        ],
        omitted: vec![],
    }
}

#[rustfmt::skip]
const RANK8_ROWS: [(&str, f64, [f64; 8]); 28] = [
    ("1",  2.0, [ 1.0,  1.0,  0.0,  1.0,  0.0,  0.0,  1.0,  0.0]),
    ("2",  2.0, [ 1.0,  1.0,  0.0,  0.0,  1.0,  1.0,  0.0,  0.0]),
    ("3",  2.0, [ 0.0,  1.0,  1.0,  1.0,  1.0,  0.0,  0.0,  0.0]),
    ("4",  2.0, [ 1.0,  0.0,  1.0,  1.0,  0.0,  1.0,  0.0,  0.0]),
    ("5",  1.0, [ 1.0,  1.0, -1.0,  0.0,  0.0,  0.0,  0.0,  0.0]),
    ("6",  1.0, [ 0.0,  1.0,  0.0,  0.0,  1.0,  0.0, -1.0,  0.0]),
    ("7",  1.0, [ 1.0,  0.0,  0.0,  0.0,  0.0,  1.0, -1.0,  0.0]),
    ("8",  1.0, [ 0.0,  1.0,  0.0,  1.0,  0.0, -1.0,  0.0,  0.0]),
    ("9",  1.0, [ 1.0,  0.0,  0.0,  1.0, -1.0,  0.0,  0.0,  0.0]),
    ("10", 1.0, [ 0.0,  0.0,  1.0,  1.0,  0.0,  0.0, -1.0,  0.0]),
    ("11", 1.0, [ 1.0,  0.0,  0.0,  0.0,  0.0,  0.0,  0.0,  1.0]),
    ("12", 0.0, [ 0.0,  1.0, -1.0,  0.0,  0.0, -1.0, -1.0,  0.0]),
    ("13", 0.0, [ 0.0,  0.0,  0.0,  1.0, -1.0, -1.0, -1.0,  0.0]),
    ("14", 0.0, [ 1.0,  0.0, -1.0,  0.0, -1.0,  0.0, -1.0,  0.0]),
    ("15", 2.0, [ 0.0,  1.0,  1.0,  2.0, -1.0,  0.0, -1.0,  1.0]),
    ("16", 2.0, [ 1.0,  0.0,  1.0,  2.0, -1.0, -1.0,  0.0,  1.0]),
    ("17", 2.0, [ 1.0,  2.0, -1.0,  1.0, -1.0,  0.0,  0.0,  1.0]),
    ("18", 2.0, [ 1.0,  2.0, -1.0,  0.0,  1.0, -1.0,  0.0,  1.0]),
    ("19", 0.0, [ 1.0,  1.0, -2.0, -1.0, -1.0,  0.0,  0.0,  0.0]),
    ("21", 0.0, [ 1.0,  0.0, -1.0, -1.0, -1.0,  0.0,  0.0,  1.0]),
    ("23", 1.0, [ 2.0, -1.0,  0.0,  1.0, -2.0, -1.0,  0.0,  1.0]),
    ("24", 1.0, [ 0.0,  0.0,  1.0,  2.0, -2.0, -1.0, -1.0,  1.0]),
    ("25", 1.0, [ 2.0, -1.0,  0.0, -1.0,  0.0,  1.0, -2.0,  1.0]),
    ("26", 1.0, [ 2.0,  1.0, -2.0, -1.0,  0.0, -1.0,  0.0,  1.0]),
    ("27", 1.0, [ 1.0,  2.0, -2.0,  0.0, -1.0, -1.0,  0.0,  1.0]),
    ("29", 0.0, [-1.0,  0.0,  1.0,  2.0, -3.0, -2.0, -1.0,  1.0]),
    ("30", 0.0, [ 2.0,  1.0, -3.0, -2.0, -1.0, -1.0,  0.0,  1.0]),
    ("31", 0.0, [ 1.0,  2.0, -3.0, -1.0, -2.0, -1.0,  0.0,  1.0]),
];

fn rank8() -> ConstraintCatalog {
    ConstraintCatalog {
        rank: 8,
        constraints: RANK8_ROWS.iter().map(|(id, b, k)| Constraint::new(*id, *b, k)).collect(),
        omitted: vec!["20".into(), "22".into(), "28".into()],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintValue {
    pub id: String,
    pub delta: f64,
    pub pinned: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub rank: usize,
    pub values: Vec<ConstraintValue>,
    /// `λ_r + λ_{7−r} − 1` for r = 1, 2, 3 (rank 6 only).
    pub borland_dennis_residuals: Option<[f64; 3]>,
    /// `Δ/λ₆` for the rank-6 Δ.
    pub quasi_pinning_ratio: Option<f64>,
}

impl ConstraintReport {
    pub fn delta(&self, id: &str) -> Option<f64> {
        self.values.iter().find(|v| v.id == id).map(|v| v.delta)
    }

    pub fn min_delta(&self) -> f64 {
        self.values.iter().map(|v| v.delta).fold(f64::INFINITY, f64::min)
    }

    pub fn pinned_ids(&self) -> Vec<&str> {
        self.values.iter().filter(|v| v.pinned).map(|v| v.id.as_str()).collect()
    }
}

pub fn evaluate(lambda: &[f64], catalog: &ConstraintCatalog) -> Result<ConstraintReport> {
    if lambda.len() != catalog.rank {
        return Err(Error::Dimension(format!(
            "spectrum has {} occupations, catalog is for rank {}",
            lambda.len(),
            catalog.rank
        )));
    }
    let values: Vec<ConstraintValue> = catalog
        .constraints
        .iter()
        .map(|c| {
            let delta = c.value(lambda);
            ConstraintValue { id: c.id.clone(), delta, pinned: delta <= PINNING_TOLERANCE }
        })
        .collect();
    let (bd, ratio) = if catalog.rank == 6 {
        let bd = [lambda[0] + lambda[5] - 1.0, lambda[1] + lambda[4] - 1.0, lambda[2] + lambda[3] - 1.0];
        let delta = values.iter().find(|v| v.id == "Delta").map(|v| v.delta).unwrap_or(f64::NAN);
        (Some(bd), (lambda[5] > 0.0).then(|| delta / lambda[5]))
    } else {
        (None, None)
    };
    Ok(ConstraintReport { rank: catalog.rank, values, borland_dennis_residuals: bd, quasi_pinning_ratio: ratio })
}

pub fn evaluate_spectrum(spectrum: &OccupationSpectrum) -> Result<ConstraintReport> {
    evaluate(&spectrum.values, &ConstraintCatalog::for_rank(spectrum.len())?)
}

/// `λ₁ + λ₂ − λ₃ ≤ 1`; with the Borland–Dennis equalities this is Δ ≥ 0.
pub fn polytope_slack(lambda: &[f64]) -> f64 {
    1.0 + lambda[2] - lambda[0] - lambda[1]
}

fn recognized(rank: usize, saturated: &[&str]) -> bool {
    let has = |id: &str| saturated.contains(&id);
    match rank {
        5 => saturated.len() == 3 && has("1") && has("2") && has("3"),
        6 => !has("Delta") || (has("BD1") && has("BD2") && has("BD3")),
        7 | 8 => has("1"),
        _ => false,
    }
}

/// Natural-orbital determinants compatible with saturating every listed
/// constraint: a saturated `(κ, b)` keeps `[ijk]` only if `κ_i + κ_j + κ_k = b`.
pub fn selection_rule_dets(rank: usize, saturated: &[&str]) -> Result<Vec<Determinant>> {
    let catalog = ConstraintCatalog::for_rank(rank).map_err(|_| Error::UnknownCombination {
        rank,
        detail: "no catalog".into(),
    })?;
    let mut rows = Vec::with_capacity(saturated.len());
    for id in saturated {
        rows.push(catalog.get(id).ok_or_else(|| Error::UnknownCombination {
            rank,
            detail: format!("unknown constraint '{id}'"),
        })?);
    }
    if !recognized(rank, saturated) {
        return Err(Error::UnknownCombination { rank, detail: format!("{saturated:?}") });
    }
    Ok(enumerate(rank)?
        .into_iter()
        .filter(|d| rows.iter().all(|c| (d.0.iter().map(|&i| c.coeffs[i]).sum::<f64>() - c.bound).abs() < 1e-12))
        .collect())
}

/// Sizes of the admissible determinant sets as constraints saturate in turn.
pub fn saturation_sequence(rank: usize) -> Result<Vec<(String, usize)>> {
    let steps: Vec<Vec<&str>> = match rank {
        5 => vec![vec!["1", "2", "3"]],
        6 => vec![vec!["BD1"], vec!["BD1", "BD2"], vec!["BD1", "BD2", "BD3"], vec!["BD1", "BD2", "BD3", "Delta"]],
        7 | 8 => vec![vec!["1"], vec!["1", "2"], vec!["1", "2", "3"], vec!["1", "2", "3", "4"]],
        _ => return Err(Error::UnknownCombination { rank, detail: "no catalog".into() }),
    };
    let mut out = vec![("none".to_string(), enumerate(rank)?.len())];
    for s in steps {
        out.push((s.join("+"), selection_rule_dets(rank, &s)?.len()));
    }
    Ok(out)
}

/// `Σ |c_d|²` over `dets`.
pub fn projection_norm(tensor: &AmplitudeTensor, dets: &[Determinant]) -> f64 {
    dets.iter().map(|d| tensor.amplitude(d).powi(2)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBound {
    pub rank: usize,
    pub xi: f64,
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ProjectionBound {
    pub fn contains(&self, norm: f64) -> bool {
        self.lower - 1e-12 <= norm && norm <= self.upper + 1e-12
    }
}

/// `ξ = 3 − λ₁ − λ₂ − λ₃`.
pub fn xi(lambda: &[f64]) -> f64 {
    3.0 - lambda[0] - lambda[1] - lambda[2]
}

/// Lower and upper bounds on the pinned-subspace projection norm.
///
/// Rank 6: `1 − (1+2ξ)/(1−4ξ)·Δ ≤ ‖PΦ‖² ≤ 1 − Δ/2` for ξ < 1/4.
/// Rank 7: `1 − (1+9ξ)/(1−11ξ)·Δ ≤ ‖P₇Φ‖² ≤ 1 − Δ/2` for ξ < 1/11.
pub fn projection_bounds(lambda: &[f64], rank: usize, delta: f64) -> Result<ProjectionBound> {
    let xi = xi(lambda);
    let (a, b, c) = match rank {
        6 => (2.0, 4.0, 0.25),
        7 => (9.0, 11.0, 1.0 / 11.0),
        _ => return Err(Error::InvalidParameter(format!("projection bounds exist for ranks 6 and 7, not {rank}"))),
    };
    if xi >= c {
        return Err(Error::OutOfDomain { xi, limit: c });
    }
    Ok(ProjectionBound {
        rank,
        xi,
        delta,
        lower: 1.0 - (1.0 + a * xi) / (1.0 - b * xi) * delta,
        upper: 1.0 - 0.5 * delta,
    })
}

/// A non-negative combination proving one inequality from others.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub target: String,
    /// `(generator id, weight)` with non-zero weights.
    pub terms: Vec<(String, f64)>,
    /// Multiplier of `3 − Σλ` (any sign).
    pub trace_multiplier: f64,
    /// Constant slack added to close the identity.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub high: usize,
    pub low: usize,
    pub derived: Vec<Derivation>,
    pub underivable: Vec<String>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.underivable.is_empty()
    }
}

/// Try to write `target` as `Σ y_g·g + t·(3 − Σλ) + s` with `y, s ≥ 0`.
///
/// Generators are the given rows plus the ordering rows `λ_i − λ_{i+1} ≥ 0`
/// and `λ_m ≥ 0`. The identity must hold for every λ ∈ ℝᵐ.
pub fn derive(target: &Constraint, rows: &[Constraint], m: usize) -> Option<Derivation> {
    let mut gens: Vec<Constraint> = rows.to_vec();
    for i in 0..m {
        let mut k = vec![0.0; m];
        k[i] = -1.0;
        if i + 1 < m {
            k[i + 1] = 1.0;
            gens.push(Constraint::new(format!("order{}", i + 1), 0.0, &k));
        } else {
            gens.push(Constraint::new(format!("nonneg{}", i + 1), 0.0, &k));
        }
    }
    let g = gens.len();
    // columns: generators, t+, t−, s; rows: λ coefficients then constant
    let cols = g + 3;
    let mut a = Matrix::zeros(m + 1, cols);
    let mut b = vec![0.0; m + 1];
    for (j, c) in gens.iter().enumerate() {
        for k in 0..m {
            a[(k, j)] = -c.coeffs[k];
        }
        a[(m, j)] = c.bound;
    }
    for k in 0..m {
        a[(k, g)] = -1.0;
        a[(k, g + 1)] = 1.0;
        b[k] = -target.coeffs[k];
    }
    a[(m, g)] = 3.0;
    a[(m, g + 1)] = -3.0;
    a[(m, g + 2)] = 1.0;
    b[m] = target.bound;
    let x = lp::feasible_point(&a, &b)?;
    let terms = gens
        .iter()
        .zip(&x)
        .filter(|(_, w)| **w > 1e-12)
        .map(|(c, w)| (c.id.clone(), *w))
        .collect();
    Some(Derivation { target: target.id.clone(), terms, trace_multiplier: x[g] - x[g + 1], slack: x[g + 2] })
}

/// Check that every rank-`low` constraint follows from the rank-`high`
/// catalog with λ_high = 0.
pub fn catalog_consistency(high: usize, low: usize) -> Result<ConsistencyReport> {
    if high != low + 1 {
        return Err(Error::InvalidParameter(format!("expected consecutive ranks, got {high} and {low}")));
    }
    let hi = ConstraintCatalog::for_rank(high)?;
    let lo = ConstraintCatalog::for_rank(low)?;
    let rows: Vec<Constraint> = hi.constraints.iter().map(|c| c.truncated(low)).collect();
    let mut derived = Vec::new();
    let mut underivable = Vec::new();
    for t in &lo.constraints {
        match derive(t, &rows, low) {
            Some(d) => derived.push(d),
            None => underivable.push(t.id.clone()),
        }
    }
    Ok(ConsistencyReport { high, low, derived, underivable })
}

/// `λ₁ ≤ 1` from the rank-7 catalog alone.
pub fn pauli_bound_from_rank7() -> Option<Derivation> {
    let target = Constraint::new("pauli", 1.0, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    derive(&target, &rank7().constraints, 7)
}

/// Evaluates `Σ y_g·g(λ) + t·(3 − Σλ) + s − target(λ)` for a derivation; zero
/// for every λ when the certificate is valid.
pub fn derivation_residual(d: &Derivation, target: &Constraint, rows: &[Constraint], lambda: &[f64]) -> f64 {
    let m = lambda.len();
    let mut total = d.trace_multiplier * (3.0 - lambda.iter().sum::<f64>()) + d.slack;
    for (id, w) in &d.terms {
        let v = if let Some(c) = rows.iter().find(|c| &c.id == id) {
            c.value(lambda)
        } else if let Some(i) = id.strip_prefix("order") {
            let i: usize = i.parse().expect("index");
            lambda[i - 1] - lambda[i]
        } else if let Some(i) = id.strip_prefix("nonneg") {
            let i: usize = i.parse().expect("index");
            lambda[i - 1]
        } else {
            f64::NAN
        };
        total += w * v;
    }
    debug_assert_eq!(target.coeffs.len(), m);
    total - target.value(lambda)
}
