//! Named radial orbitals, the per-rank spin-orbital sets, Gram–Schmidt
//! orthonormalization and the one-/two-electron integral tables.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadrature::QuadratureOracle;
use crate::radial::{self, RadialFunction, Term};

/// Residual norms below this make Gram–Schmidt fail.
pub const GRAM_SCHMIDT_PIVOT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn sz(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Spin::Up => "up",
            Spin::Down => "dn",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    /// `√(α³/π)·e^{−αr}`
    Kellner,
    /// `Dₙ·√(α³/π)·L²ₙ₋₁(2αr)·e^{−αr}`
    DeltaN,
    Psi3s,
    Psi3p,
    Psi3d,
}

/// Build one of the named normalized radial orbitals.
///
/// `n` is only read for [`FunctionKind::DeltaN`]. The δₙ family uses the
/// associated Laguerre polynomial `L²ₙ₋₁` and `Dₙ = √(2/(n(n+1)))`, which
/// makes δ₁ the Kellner orbital and δ₂ = `√(α³/3π)(3 − 2αr)e^{−αr}`.
pub fn make_function(kind: FunctionKind, n: u32, exponent: f64) -> Result<RadialFunction> {
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {exponent}")));
    }
    let g = exponent;
    match kind {
        FunctionKind::Kellner => RadialFunction::monomial((g.powi(3) / PI).sqrt(), 0, g),
        FunctionKind::DeltaN => {
            if n < 1 {
                return Err(Error::InvalidParameter(format!("delta_n needs n >= 1, got {n}")));
            }
            let d = (2.0 / f64::from(n * (n + 1))).sqrt();
            let prefactor = d * (g.powi(3) / PI).sqrt();
            let coeffs = associated_laguerre(n - 1, 2);
            RadialFunction::new(coeffs.iter().enumerate().map(|(k, c)| Term {
                coeff: prefactor * c * (2.0 * g).powi(k as i32),
                power: k as u32,
                exponent: g,
            }))
        }
        FunctionKind::Psi3s => {
            let c = 0.25 * (g.powi(3) / (2.0 * PI)).sqrt();
            RadialFunction::new([
                Term { coeff: 2.0 * c, power: 0, exponent: g / 2.0 },
                Term { coeff: -c * g, power: 1, exponent: g / 2.0 },
            ])
        }
        FunctionKind::Psi3p => RadialFunction::monomial(0.25 * (g.powi(5) / (6.0 * PI)).sqrt(), 1, g / 2.0),
        FunctionKind::Psi3d => RadialFunction::monomial(0.125 * (g.powi(7) / (45.0 * PI)).sqrt(), 2, g / 2.0),
    }
}

/// Coefficients of `L^ζ_m(x) = Σ_k (−1)^k C(m+ζ, m−k) x^k / k!`, lowest power first.
pub fn associated_laguerre(m: u32, zeta: u32) -> Vec<f64> {
    (0..=m)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m + zeta, m - k) / radial::factorial(k)
        })
        .collect()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankId {
    R3s,
    R3p,
    R3d,
    R5,
    R6a,
    R6b,
    R7,
    R8,
}

impl RankId {
    pub const ALL: [RankId; 8] =
        [RankId::R3s, RankId::R3p, RankId::R3d, RankId::R5, RankId::R6a, RankId::R6b, RankId::R7, RankId::R8];

    /// Number of spin-orbitals M.
    pub fn size(self) -> usize {
        match self {
            RankId::R3s | RankId::R3p | RankId::R3d => 3,
            RankId::R5 => 5,
            RankId::R6a | RankId::R6b => 6,
            RankId::R7 => 7,
            RankId::R8 => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RankId::R3s => "3s",
            RankId::R3p => "3p",
            RankId::R3d => "3d",
            RankId::R5 => "5",
            RankId::R6a => "6a",
            RankId::R6b => "6b",
            RankId::R7 => "7",
            RankId::R8 => "8",
        }
    }
}

impl fmt::Display for RankId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RankId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown rank '{s}' (expected 3s|3p|3d|5|6a|6b|7|8)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    /// Inner (helium-like) exponent.
    pub alpha: f64,
    /// Outer exponent.
    pub gamma: f64,
    pub z: u32,
    pub rank: RankId,
}

impl BasisParams {
    pub fn new(rank: RankId, alpha: f64, gamma: f64, z: u32) -> Result<Self> {
        let p = Self { alpha, gamma, z, rank };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.z == 0 {
            return Err(Error::InvalidParameter("nuclear charge must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbital {
    pub spatial: RadialFunction,
    pub spin: Spin,
    /// Identifies the spatial function, e.g. `delta_2` or `psi3p`. Two
    /// primitives with equal `spatial_label` have identical spatial parts.
    pub spatial_label: String,
    pub normalized: bool,
}

impl SpinOrbital {
    pub fn new(spatial: RadialFunction, spin: Spin, spatial_label: impl Into<String>) -> Self {
        Self { spatial, spin, spatial_label: spatial_label.into(), normalized: true }
    }

    /// e.g. `delta_1_dn`.
    pub fn label(&self) -> String {
        format!("{}_{}", self.spatial_label, self.spin.suffix())
    }
}

/// The ordered primitive spin-orbitals of a rank.
pub fn standard_basis(params: &BasisParams) -> Result<Vec<SpinOrbital>> {
    params.validate()?;
    let (a, g) = (params.alpha, params.gamma);
    let delta = |n: u32, spin: Spin| -> Result<SpinOrbital> {
        Ok(SpinOrbital::new(make_function(FunctionKind::DeltaN, n, a)?, spin, format!("delta_{n}")))
    };
    let outer = |kind: FunctionKind, spin: Spin| -> Result<SpinOrbital> {
        let label = match kind {
            FunctionKind::Psi3s => "psi3s",
            FunctionKind::Psi3p => "psi3p",
            FunctionKind::Psi3d => "psi3d",
            _ => unreachable!(),
        };
        Ok(SpinOrbital::new(make_function(kind, 0, g)?, spin, label))
    };
    let kellner = |spin: Spin| -> Result<SpinOrbital> {
        Ok(SpinOrbital::new(make_function(FunctionKind::Kellner, 0, a)?, spin, "psi1"))
    };
    use Spin::{Down as Dn, Up};

    let rank3 = |kind| -> Result<Vec<SpinOrbital>> { Ok(vec![kellner(Dn)?, kellner(Up)?, outer(kind, Dn)?]) };
    let six = || -> Result<Vec<SpinOrbital>> {
        Ok(vec![delta(1, Up)?, delta(1, Dn)?, outer(FunctionKind::Psi3p, Dn)?, delta(2, Dn)?, delta(2, Up)?])
    };
    match params.rank {
        RankId::R3s => rank3(FunctionKind::Psi3s),
        RankId::R3p => rank3(FunctionKind::Psi3p),
        RankId::R3d => rank3(FunctionKind::Psi3d),
        RankId::R5 => Ok(vec![
            outer(FunctionKind::Psi3p, Dn)?,
            delta(1, Dn)?,
            delta(2, Dn)?,
            delta(1, Up)?,
            delta(2, Up)?,
        ]),
        RankId::R6a => {
            let mut b = six()?;
            b.push(outer(FunctionKind::Psi3p, Up)?);
            Ok(b)
        }
        RankId::R6b => {
            let mut b = six()?;
            b.push(delta(3, Dn)?);
            Ok(b)
        }
        RankId::R7 => {
            let mut b = six()?;
            b.push(delta(3, Dn)?);
            b.push(delta(3, Up)?);
            Ok(b)
        }
        RankId::R8 => {
            let mut b = six()?;
            b.push(delta(3, Dn)?);
            b.push(delta(3, Up)?);
            b.push(delta(4, Dn)?);
            Ok(b)
        }
    }
}

/// Primitive overlap matrix; zero across spin sectors.
pub fn overlap_matrix(primitives: &[SpinOrbital]) -> Matrix {
    let m = primitives.len();
    Matrix::from_fn(m, m, |i, j| {
        if primitives[i].spin == primitives[j].spin {
            radial::overlap(&primitives[i].spatial, &primitives[j].spatial)
        } else {
            0.0
        }
    })
}

/// `φᵢ = Σⱼ Rᵢⱼ ψⱼ`, with the orthonormal orbitals materialized.
#[derive(Debug, Clone)]
pub struct OrthoTransform {
    pub r: Matrix,
    /// Primitive overlap S.
    pub overlap: Matrix,
    pub orbitals: Vec<SpinOrbital>,
}

impl OrthoTransform {
    pub fn size(&self) -> usize {
        self.r.rows()
    }

    pub fn spins(&self) -> Vec<Spin> {
        self.orbitals.iter().map(|o| o.spin).collect()
    }

    /// `R·S·Rᵀ`, which should be the identity.
    pub fn orthonormality(&self) -> Matrix {
        self.r.matmul(&self.overlap).matmul(&self.r.transpose())
    }
}

/// Sequential Gram–Schmidt in listed order, separately per spin sector.
pub fn gram_schmidt(primitives: &[SpinOrbital]) -> Result<OrthoTransform> {
    let m = primitives.len();
    let s = overlap_matrix(primitives);
    let mut r = Matrix::zeros(m, m);
    for i in 0..m {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        // modified Gram–Schmidt against earlier same-spin rows, twice
        for _ in 0..2 {
            for j in 0..i {
                if primitives[j].spin != primitives[i].spin {
                    continue;
                }
                let rj = r.row(j).to_vec();
                let proj = s_inner(&s, &rj, &v);
                for (x, y) in v.iter_mut().zip(&rj) {
                    *x -= proj * y;
                }
            }
        }
        let nrm2 = s_inner(&s, &v, &v);
        let pivot = nrm2.max(0.0).sqrt();
        if pivot < GRAM_SCHMIDT_PIVOT {
            return Err(Error::LinearDependence { index: i, pivot });
        }
        for (j, x) in v.iter().enumerate() {
            r[(i, j)] = x / pivot;
        }
    }
    let orbitals = (0..m)
        .map(|i| {
            let spatial = (0..m)
                .filter(|&j| r[(i, j)] != 0.0)
                .fold(RadialFunction::zero(), |acc, j| acc.add(&primitives[j].spatial.scale(r[(i, j)])));
            SpinOrbital {
                spatial,
                spin: primitives[i].spin,
                spatial_label: format!("phi_{}", i + 1),
                normalized: true,
            }
        })
        .collect();
    Ok(OrthoTransform { r, overlap: s, orbitals })
}

fn s_inner(s: &Matrix, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..b.len() {
            acc += a[i] * s[(i, j)] * b[j];
        }
    }
    acc
}

/// Dense 4-index tensor with `(m n | o p)` layout: m, n belong to electron 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoElectronTensor {
    dim: usize,
    data: Vec<f64>,
}

impl TwoElectronTensor {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim.pow(4)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, m: usize, n: usize, o: usize, p: usize) -> usize {
        ((m * self.dim + n) * self.dim + o) * self.dim + p
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize, o: usize, p: usize) -> f64 {
        self.data[self.idx(m, n, o, p)]
    }

    pub fn set(&mut self, m: usize, n: usize, o: usize, p: usize, v: f64) {
        let i = self.idx(m, n, o, p);
        self.data[i] = v;
    }

    /// `ι = (R ⊗ R ⊗ R ⊗ R) Υ`, one index at a time.
    pub fn transform(&self, r: &Matrix) -> Self {
        let d = self.dim;
        let mut cur = self.clone();
        for slot in 0..4 {
            let mut next = Self::zeros(d);
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            let mut acc = 0.0;
                            for k in 0..d {
                                let w = match slot {
                                    0 => r[(a, k)],
                                    1 => r[(b, k)],
                                    2 => r[(c, k)],
                                    _ => r[(e, k)],
                                };
                                if w == 0.0 {
                                    continue;
                                }
                                acc += w * match slot {
                                    0 => cur.get(k, b, c, e),
                                    1 => cur.get(a, k, c, e),
                                    2 => cur.get(a, b, k, e),
                                    _ => cur.get(a, b, c, k),
                                };
                            }
                            next.set(a, b, c, e, acc);
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Largest deviation from the 8-fold real-integral symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for n in 0..d {
                for o in 0..d {
                    for p in 0..d {
                        let v = self.get(m, n, o, p);
                        for w in [
                            self.get(n, m, o, p),
                            self.get(m, n, p, o),
                            self.get(n, m, p, o),
                            self.get(o, p, m, n),
                            self.get(p, o, m, n),
                            self.get(o, p, n, m),
                            self.get(p, o, n, m),
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn perturbed(&self, eps: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| if *x != 0.0 { x + eps } else { *x }).collect() }
    }
}

/// Kinetic, nuclear-attraction and electron-repulsion tables.
#[derive(Debug, Clone)]
pub struct IntegralTable {
    /// π (orthonormal) or P (primitive).
    pub kinetic: Matrix,
    /// κ / K, without the factor Z.
    pub nuclear: Matrix,
    /// ι / Υ.
    pub eri: TwoElectronTensor,
    pub spins: Vec<Spin>,
}

impl IntegralTable {
    pub fn rank(&self) -> usize {
        self.spins.len()
    }

    /// Core Hamiltonian `π − Z·κ`.
    pub fn core_hamiltonian(&self, z: f64) -> Matrix {
        self.kinetic.sub(&self.nuclear.scale(z))
    }

    /// One-electron transform `R X Rᵀ` and four-index transform of ι.
    pub fn transformed(&self, r: &Matrix) -> Self {
        let rt = r.transpose();
        Self {
            kinetic: r.matmul(&self.kinetic).matmul(&rt),
            nuclear: r.matmul(&self.nuclear).matmul(&rt),
            eri: self.eri.transform(r),
            spins: self.spins.clone(),
        }
    }
}

/// Orthonormal and primitive tables for one basis.
#[derive(Debug, Clone)]
pub struct BasisIntegrals {
    pub primitive: IntegralTable,
    pub orthonormal: IntegralTable,
}

/// Relative tolerance for the optional quadrature cross-check.
pub const QUADRATURE_CHECK_TOL: f64 = 1e-8;

/// Primitive tables K, P, Υ from the closed forms, then κ, π, ι through R.
///
/// Spatial integrals are evaluated once per distinct spatial label and then
/// spread over spin-orbitals with the spin mask applied.
pub fn build_integrals(
    primitives: &[SpinOrbital],
    transform: &OrthoTransform,
    quadrature_check: bool,
) -> Result<BasisIntegrals> {
    let m = primitives.len();
    if transform.size() != m {
        return Err(Error::Dimension(format!("transform is {}x{}, basis has {m} orbitals", transform.size(), transform.size())));
    }
    let mut labels: Vec<&str> = Vec::new();
    let mut spatial_index = Vec::with_capacity(m);
    for p in primitives {
        let idx = labels.iter().position(|l| *l == p.spatial_label).unwrap_or_else(|| {
            labels.push(&p.spatial_label);
            labels.len() - 1
        });
        spatial_index.push(idx);
    }
    let spatial: Vec<&RadialFunction> = labels
        .iter()
        .map(|l| &primitives.iter().find(|p| p.spatial_label == *l).expect("label present").spatial)
        .collect();
    let l = spatial.len();

    let mut kin = Matrix::zeros(l, l);
    let mut nuc = Matrix::zeros(l, l);
    for a in 0..l {
        for b in 0..l {
            kin[(a, b)] = radial::kinetic(spatial[a], spatial[b]);
            nuc[(a, b)] = radial::nuclear(spatial[a], spatial[b]);
        }
    }
    let mut eri_sp = TwoElectronTensor::zeros(l);
    for a in 0..l {
        for b in 0..=a {
            for c in 0..l {
                for d in 0..=c {
                    if a * (a + 1) / 2 + b < c * (c + 1) / 2 + d {
                        continue;
                    }
                    let v = radial::coulomb(spatial[a], spatial[b], spatial[c], spatial[d]);
                    for (i, j, k, q) in [(a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c)] {
                        eri_sp.set(i, j, k, q, v);
                        eri_sp.set(k, q, i, j, v);
                    }
                }
            }
        }
    }

    let spins: Vec<Spin> = primitives.iter().map(|p| p.spin).collect();
    let same = |i: usize, j: usize| spins[i] == spins[j];
    let p_kin = Matrix::from_fn(m, m, |i, j| if same(i, j) { kin[(spatial_index[i], spatial_index[j])] } else { 0.0 });
    let p_nuc = Matrix::from_fn(m, m, |i, j| if same(i, j) { nuc[(spatial_index[i], spatial_index[j])] } else { 0.0 });
    let mut p_eri = TwoElectronTensor::zeros(m);
    for i in 0..m {
        for j in 0..m {
            if !same(i, j) {
                continue;
            }
            for k in 0..m {
                for q in 0..m {
                    if same(k, q) {
                        p_eri.set(i, j, k, q, eri_sp.get(spatial_index[i], spatial_index[j], spatial_index[k], spatial_index[q]));
                    }
                }
            }
        }
    }
    let primitive = IntegralTable { kinetic: p_kin, nuclear: p_nuc, eri: p_eri, spins };
    if quadrature_check {
        self::quadrature_check(primitives, &primitive)?;
    }
    let orthonormal = primitive.transformed(&transform.r);
    Ok(BasisIntegrals { primitive, orthonormal })
}

/// Compares every entry of a primitive spin-orbital table with composite
/// Gauss–Legendre quadrature; returns the number of distinct spatial
/// integrals checked.
///
/// Kinetic entries use `½·4π ∫ f′g′ r² dr` with a five-point derivative,
/// which is independent of the closed-form r²∇² route.
pub fn quadrature_check(primitives: &[SpinOrbital], table: &IntegralTable) -> Result<usize> {
    let m = primitives.len();
    if table.rank() != m {
        return Err(Error::Dimension(format!("table has {} orbitals, basis {m}", table.rank())));
    }
    let q = QuadratureOracle::default();
    let check = |what: String, analytic: f64, numeric: f64| -> Result<()> {
        if (analytic - numeric).abs() > QUADRATURE_CHECK_TOL * analytic.abs().max(1e-3) {
            return Err(Error::QuadratureMismatch { what, analytic, numeric });
        }
        Ok(())
    };
    let label = |i: usize| primitives[i].spatial_label.as_str();
    let f = |i: usize| &primitives[i].spatial;
    let mut one: HashMap<(&str, &str), (f64, f64)> = HashMap::new();
    let mut two: HashMap<[&str; 4], f64> = HashMap::new();
    for i in 0..m {
        for j in 0..m {
            if primitives[i].spin != primitives[j].spin {
                continue;
            }
            let (nuc, kin) = *one.entry((label(i), label(j))).or_insert_with(|| {
                let (fa, fb) = (f(i), f(j));
                (
                    4.0 * PI * q.integrate(|r| fa.evaluate(r) * fb.evaluate(r) * r),
                    0.5 * 4.0 * PI * q.integrate(|r| derivative(fa, r) * derivative(fb, r) * r * r),
                )
            });
            check(format!("K[{},{}]", primitives[i].label(), primitives[j].label()), table.nuclear[(i, j)], nuc)?;
            check(format!("P[{},{}]", primitives[i].label(), primitives[j].label()), table.kinetic[(i, j)], kin)?;
            for k in 0..m {
                for l in 0..m {
                    if primitives[k].spin != primitives[l].spin {
                        continue;
                    }
                    // one quadrature per symmetry class of (ij|kl)
                    let (a, b) = if label(i) <= label(j) { (i, j) } else { (j, i) };
                    let (c, d) = if label(k) <= label(l) { (k, l) } else { (l, k) };
                    let ((a, b), (c, d)) = if (label(a), label(b)) <= (label(c), label(d)) { ((a, b), (c, d)) } else { ((c, d), (a, b)) };
                    let key = [label(a), label(b), label(c), label(d)];
                    let numeric = *two.entry(key).or_insert_with(|| {
                        q.coulomb(|r| f(a).evaluate(r) * f(b).evaluate(r), |r| f(c).evaluate(r) * f(d).evaluate(r))
                    });
                    let what = format!(
                        "ERI[{},{}|{},{}]",
                        primitives[i].label(),
                        primitives[j].label(),
                        primitives[k].label(),
                        primitives[l].label()
                    );
                    check(what, table.eri.get(i, j, k, l), numeric)?;
                }
            }
        }
    }
    Ok(one.len() + two.len())
}

/// Five-point central difference.
fn derivative(f: &RadialFunction, r: f64) -> f64 {
    let h = 1e-3;
    if r < 2.0 * h {
        // one-sided near the origin
        return (-25.0 * f.evaluate(r) + 48.0 * f.evaluate(r + h) - 36.0 * f.evaluate(r + 2.0 * h)
            + 16.0 * f.evaluate(r + 3.0 * h)
            - 3.0 * f.evaluate(r + 4.0 * h))
            / (12.0 * h);
    }
    (f.evaluate(r - 2.0 * h) - 8.0 * f.evaluate(r - h) + 8.0 * f.evaluate(r + h) - f.evaluate(r + 2.0 * h)) / (12.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_matches_printed_polynomials() {
        // L²₁(x) = 3 − x, L¹₁(x) = 2 − x
        assert_eq!(associated_laguerre(1, 2), vec![3.0, -1.0]);
        assert_eq!(associated_laguerre(1, 1), vec![2.0, -1.0]);
        assert_eq!(associated_laguerre(0, 2), vec![1.0]);
    }

    #[test]
    fn kellner_unit_exponent() {
        let f = make_function(FunctionKind::Kellner, 0, 1.0).unwrap();
        assert_eq!(f, RadialFunction::monomial((1.0 / PI).sqrt(), 0, 1.0).unwrap());
    }

    #[test]
    fn delta_two_explicit_form() {
        let a = 2.7;
        let f = make_function(FunctionKind::DeltaN, 2, a).unwrap();
        let c = (a.powi(3) / (3.0 * PI)).sqrt();
        let expected = RadialFunction::new([
            Term { coeff: 3.0 * c, power: 0, exponent: a },
            Term { coeff: -2.0 * a * c, power: 1, exponent: a },
        ])
        .unwrap();
        for (t, e) in f.terms().iter().zip(expected.terms()) {
            assert!((t.coeff - e.coeff).abs() < 1e-14);
            assert_eq!(t.power, e.power);
        }
    }

    #[test]
    fn delta_one_is_kellner() {
        let d1 = make_function(FunctionKind::DeltaN, 1, 2.3).unwrap();
        let k = make_function(FunctionKind::Kellner, 0, 2.3).unwrap();
        assert!((radial::overlap(&d1, &k) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn all_named_functions_normalized() {
        for (kind, n) in [
            (FunctionKind::Kellner, 0),
            (FunctionKind::DeltaN, 1),
            (FunctionKind::DeltaN, 2),
            (FunctionKind::DeltaN, 3),
            (FunctionKind::DeltaN, 4),
            (FunctionKind::Psi3s, 0),
            (FunctionKind::Psi3p, 0),
            (FunctionKind::Psi3d, 0),
        ] {
            let f = make_function(kind, n, 1.7).unwrap();
            assert!((radial::overlap(&f, &f) - 1.0).abs() < 1e-12, "{kind:?} n={n}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_function(FunctionKind::Kellner, 0, 0.0).is_err());
        assert!(make_function(FunctionKind::DeltaN, 0, 1.0).is_err());
        assert!(BasisParams::new(RankId::R5, -1.0, 1.0, 3).is_err());
    }

    #[test]
    fn rank_sizes_and_spin_counts() {
        let count = |r: RankId| {
            let b = standard_basis(&BasisParams::new(r, 2.7, 1.3, 3).unwrap()).unwrap();
            let up = b.iter().filter(|o| o.spin == Spin::Up).count();
            (b.len(), b.len() - up, up)
        };
        assert_eq!(count(RankId::R3p), (3, 2, 1));
        assert_eq!(count(RankId::R5), (5, 3, 2));
        assert_eq!(count(RankId::R6b), (6, 4, 2));
        assert_eq!(count(RankId::R7), (7, 4, 3));
        assert_eq!(count(RankId::R8), (8, 5, 3));
    }

    #[test]
    fn rank_6a_is_spin_restricted() {
        let b = standard_basis(&BasisParams::new(RankId::R6a, 2.7, 1.3, 3).unwrap()).unwrap();
        let mut up: Vec<_> = b.iter().filter(|o| o.spin == Spin::Up).map(|o| o.spatial_label.clone()).collect();
        let mut dn: Vec<_> = b.iter().filter(|o| o.spin == Spin::Down).map(|o| o.spatial_label.clone()).collect();
        up.sort();
        dn.sort();
        assert_eq!(up, dn);
    }

    #[test]
    fn labels_follow_listing() {
        let b = standard_basis(&BasisParams::new(RankId::R6b, 2.7, 1.3, 3).unwrap()).unwrap();
        let labels: Vec<_> = b.iter().map(SpinOrbital::label).collect();
        assert_eq!(labels, ["delta_1_up", "delta_1_dn", "psi3p_dn", "delta_2_dn", "delta_2_up", "delta_3_dn"]);
    }

    #[test]
    fn gram_schmidt_on_orthonormal_input_is_identity() {
        let a = 2.0;
        let prims = vec![
            SpinOrbital::new(make_function(FunctionKind::DeltaN, 1, a).unwrap(), Spin::Up, "delta_1"),
            SpinOrbital::new(make_function(FunctionKind::DeltaN, 2, a).unwrap(), Spin::Up, "delta_2"),
        ];
        let t = gram_schmidt(&prims).unwrap();
        assert!(t.r.sub(&Matrix::identity(2)).max_abs() < 1e-13);
    }

    #[test]
    fn gram_schmidt_rank3_matches_closed_form() {
        let p = BasisParams::new(RankId::R3p, 2.686435, 1.274552, 3).unwrap();
        let prims = standard_basis(&p).unwrap();
        let t = gram_schmidt(&prims).unwrap();
        let s = radial::overlap(&prims[0].spatial, &prims[2].spatial);
        let d = (1.0 - s * s).sqrt();
        assert!((t.r[(2, 0)] + s / d).abs() < 1e-13);
        assert!((t.r[(2, 2)] - 1.0 / d).abs() < 1e-13);
        assert_eq!(t.r[(2, 1)], 0.0);
        assert!((t.r[(0, 0)] - 1.0).abs() < 1e-15 && (t.r[(1, 1)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let f = make_function(FunctionKind::Kellner, 0, 2.0).unwrap();
        let prims = vec![SpinOrbital::new(f.clone(), Spin::Up, "a"), SpinOrbital::new(f, Spin::Up, "b")];
        assert!(matches!(gram_schmidt(&prims), Err(Error::LinearDependence { index: 1, .. })));
    }

    #[test]
    fn transform_is_orthonormal_and_triangular_for_every_rank() {
        for rank in RankId::ALL {
            let prims = standard_basis(&BasisParams::new(rank, 2.71, 1.32, 3).unwrap()).unwrap();
            let t = gram_schmidt(&prims).unwrap();
            let err = t.orthonormality().sub(&Matrix::identity(prims.len())).max_abs();
            assert!(err < 1e-12, "{rank}: {err}");
            for i in 0..prims.len() {
                for j in 0..prims.len() {
                    if j > i || prims[i].spin != prims[j].spin {
                        assert_eq!(t.r[(i, j)], 0.0, "{rank} R[{i},{j}]");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_family_orthonormal_before_gram_schmidt() {
        let a = 2.4;
        let fs: Vec<_> = (1..=4).map(|n| make_function(FunctionKind::DeltaN, n, a).unwrap()).collect();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((radial::overlap(&fs[i], &fs[j]) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spin_mask_and_symmetry_of_tables() {
        let p = BasisParams::new(RankId::R6b, 2.712166, 1.323417, 3).unwrap();
        let prims = standard_basis(&p).unwrap();
        let t = gram_schmidt(&prims).unwrap();
        let ints = build_integrals(&prims, &t, false).unwrap();
        for table in [&ints.primitive, &ints.orthonormal] {
            let m = table.rank();
            for i in 0..m {
                for j in 0..m {
                    if table.spins[i] != table.spins[j] {
                        assert_eq!(table.kinetic[(i, j)], 0.0);
                        assert_eq!(table.nuclear[(i, j)], 0.0);
                        for k in 0..m {
                            for l in 0..m {
                                assert_eq!(table.eri.get(i, j, k, l), 0.0);
                            }
                        }
                    }
                }
            }
            assert!(table.kinetic.asymmetry() < 1e-12);
            assert!(table.nuclear.asymmetry() < 1e-12);
            assert!(table.eri.symmetry_defect() < 1e-12);
        }
    }

    #[test]
    fn rank3_kinetic_diagonal() {
        let alpha = 2.686435;
        let p = BasisParams::new(RankId::R3p, alpha, 1.274552, 3).unwrap();
        let prims = standard_basis(&p).unwrap();
        let t = gram_schmidt(&prims).unwrap();
        let ints = build_integrals(&prims, &t, true).unwrap();
        assert!((ints.orthonormal.kinetic[(0, 0)] - alpha * alpha / 2.0).abs() < 1e-12);
    }
}
