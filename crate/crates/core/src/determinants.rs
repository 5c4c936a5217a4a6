//! Three-electron Slater determinants, the S_z filter, and the doublet
//! subspace obtained by evaluating S² in a spin-closed embedding space.

use std::collections::HashMap;
use std::fmt;

use crate::basis::{OrthoTransform, Spin, SpinOrbital};
use crate::error::{Error, Result};
use crate::linalg::{dot, gram_schmidt_columns, jacobi_eigen, Matrix};
use crate::radial;
use crate::N_ELECTRONS;

/// Singular values of the S² condition below this are treated as zero.
pub const NULL_TOLERANCE: f64 = 1e-6;
/// Singular values between [`NULL_TOLERANCE`] and this make the rank ambiguous.
pub const GAP_TOLERANCE: f64 = 1e-2;

/// Strictly increasing orbital triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Determinant(pub [usize; 3]);

impl Determinant {
    pub fn new(mut orbitals: [usize; 3]) -> Result<Self> {
        orbitals.sort_unstable();
        if orbitals[0] == orbitals[1] || orbitals[1] == orbitals[2] {
            return Err(Error::InvalidParameter(format!("repeated orbital in {orbitals:?}")));
        }
        Ok(Self(orbitals))
    }

    /// From one-based labels, e.g. `from_labels(1, 2, 3)` is `[123]`.
    pub fn from_labels(i: usize, j: usize, k: usize) -> Self {
        Self::new([i - 1, j - 1, k - 1]).expect("distinct labels")
    }

    pub fn orbitals(&self) -> [usize; 3] {
        self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(&p)
    }

    pub fn sz(&self, spins: &[Spin]) -> f64 {
        self.0.iter().map(|&i| spins[i].sz()).sum()
    }
}

impl fmt::Display for Determinant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "[{}{}{}]", a + 1, b + 1, c + 1)
    }
}

/// All `C(m, 3)` triples in lexicographic order.
pub fn enumerate(m: usize) -> Result<Vec<Determinant>> {
    if m < N_ELECTRONS {
        return Err(Error::InvalidParameter(format!("need at least {N_ELECTRONS} orbitals, got {m}")));
    }
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                out.push(Determinant([i, j, k]));
            }
        }
    }
    Ok(out)
}

pub fn sz_filter(dets: &[Determinant], spins: &[Spin], target_sz: f64) -> Vec<Determinant> {
    dets.iter().copied().filter(|d| (d.sz(spins) - target_sz).abs() < 1e-12).collect()
}

/// Sign and result of `a†_to a_from |det⟩`, or `None` if it vanishes.
pub fn excite(det: &[usize], from: usize, to: usize) -> Option<(f64, Vec<usize>)> {
    let pos = det.iter().position(|&x| x == from)?;
    if from != to && det.contains(&to) {
        return None;
    }
    let mut rest: Vec<usize> = det.to_vec();
    rest.remove(pos);
    let ins = rest.iter().filter(|&&x| x < to).count();
    rest.insert(ins, to);
    let sign = if (pos + ins) % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, rest))
}

/// Doublet subspace of an S_z = −1/2 determinant list.
#[derive(Debug, Clone)]
pub struct SpinAdaptedBasis {
    pub determinants: Vec<Determinant>,
    /// Columns are orthonormal doublet vectors over `determinants`.
    pub vectors: Matrix,
    pub closure: ClosureSpace,
    /// Singular values of `(S² − 3/4)·E`, ascending.
    pub singular_values: Vec<f64>,
}

impl SpinAdaptedBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.cols()
    }

    /// Orthogonal projector onto the doublet span, over determinants.
    pub fn projector(&self) -> Matrix {
        self.vectors.matmul(&self.vectors.transpose())
    }

    /// `‖(S² − 3/4)·E·v‖` for a determinant-space vector.
    pub fn s2_residual(&self, v: &[f64]) -> f64 {
        let embedded = self.closure.embedding.matvec(v);
        let s2v = self.closure.s2.matvec(&embedded);
        s2v.iter().zip(&embedded).map(|(a, b)| (a - 0.75 * b).powi(2)).sum::<f64>().sqrt()
    }

    /// `⟨v|S²|v⟩` evaluated in the closure space.
    pub fn s2_expectation(&self, v: &[f64]) -> f64 {
        let embedded = self.closure.embedding.matvec(v);
        dot(&embedded, &self.closure.s2.matvec(&embedded))
    }
}

/// Spin-orbitals built from an orthonormal basis of every spatial function
/// that occurs in either spin sector, each paired with both spins.
///
/// Closure spin-orbital `2p` is χ_p↓ and `2p + 1` is χ_p↑.
#[derive(Debug, Clone)]
pub struct ClosureSpace {
    pub spatial_count: usize,
    /// Expansion of each CI spin-orbital over the closure spin-orbitals.
    pub coefficients: Matrix,
    pub determinants: Vec<Determinant>,
    /// S² over `determinants`.
    pub s2: Matrix,
    /// Closure determinant amplitudes of each CI determinant (3×3 minors).
    pub embedding: Matrix,
}

impl ClosureSpace {
    pub fn build(primitives: &[SpinOrbital], transform: &OrthoTransform, ci_dets: &[Determinant]) -> Result<Self> {
        let m = primitives.len();
        let mut uniq: Vec<usize> = Vec::new();
        let mut idx = Vec::with_capacity(m);
        for (i, p) in primitives.iter().enumerate() {
            match uniq.iter().position(|&u| primitives[u].spatial_label == p.spatial_label) {
                Some(k) => idx.push(k),
                None => {
                    uniq.push(i);
                    idx.push(uniq.len() - 1);
                }
            }
        }
        let l = uniq.len();
        let s = Matrix::from_fn(l, l, |a, b| radial::overlap(&primitives[uniq[a]].spatial, &primitives[uniq[b]].spatial));
        // χ_p = Σ_u c[p][u] f_u by Gram–Schmidt under S
        let mut chi: Vec<Vec<f64>> = Vec::with_capacity(l);
        for a in 0..l {
            let mut v = vec![0.0; l];
            v[a] = 1.0;
            for _ in 0..2 {
                for c in &chi {
                    let proj = dot(c, &s.matvec(&v));
                    for (x, y) in v.iter_mut().zip(c) {
                        *x -= proj * y;
                    }
                }
            }
            let nrm = dot(&v, &s.matvec(&v)).max(0.0).sqrt();
            if nrm < 1e-10 {
                return Err(Error::LinearDependence { index: a, pivot: nrm });
            }
            chi.push(v.iter().map(|x| x / nrm).collect());
        }
        // ⟨χ_p|f_u⟩
        let proj = Matrix::from_fn(l, l, |p, u| dot(&chi[p], &s.column(u)));
        let mut t = Matrix::zeros(m, 2 * l);
        for i in 0..m {
            for j in 0..m {
                let rij = transform.r[(i, j)];
                if rij == 0.0 {
                    continue;
                }
                let offset = usize::from(primitives[j].spin == Spin::Up);
                for p in 0..l {
                    t[(i, 2 * p + offset)] += rij * proj[(p, idx[j])];
                }
            }
        }

        let closure_spins: Vec<Spin> = (0..2 * l).map(|q| if q % 2 == 0 { Spin::Down } else { Spin::Up }).collect();
        let determinants = sz_filter(&enumerate(2 * l)?, &closure_spins, -0.5);
        let s2 = s2_matrix(&determinants, l);
        let embedding = Matrix::from_fn(determinants.len(), ci_dets.len(), |y, x| {
            let rows = ci_dets[x].0;
            let cols = determinants[y].0;
            crate::linalg::det3(&t.submatrix(&rows, &cols))
        });
        Ok(Self { spatial_count: l, coefficients: t, determinants, s2, embedding })
    }
}

/// `S² = S₋S₊ + S_z + S_z²` on S_z = −1/2 closure determinants.
pub fn s2_matrix(dets: &[Determinant], spatial_count: usize) -> Matrix {
    let pos: HashMap<[usize; 3], usize> = dets.iter().enumerate().map(|(i, d)| (d.0, i)).collect();
    let n = dets.len();
    let mut s2 = Matrix::zeros(n, n);
    for (col, d) in dets.iter().enumerate() {
        for p in 0..spatial_count {
            // S₊ term a†_{p↑} a_{p↓}
            let Some((s1, raised)) = excite(&d.0, 2 * p, 2 * p + 1) else { continue };
            for q in 0..spatial_count {
                let Some((s2sign, lowered)) = excite(&raised, 2 * q + 1, 2 * q) else { continue };
                let key = [lowered[0], lowered[1], lowered[2]];
                if let Some(&row) = pos.get(&key) {
                    s2[(row, col)] += s1 * s2sign;
                }
            }
        }
        s2[(col, col)] += -0.25;
    }
    s2
}

/// The doublet subspace of `dets` over the orthonormal orbitals of `transform`.
pub fn spin_adapt(dets: &[Determinant], primitives: &[SpinOrbital], transform: &OrthoTransform) -> Result<SpinAdaptedBasis> {
    let closure = ClosureSpace::build(primitives, transform, dets)?;
    let nc = closure.determinants.len();
    let shifted = closure.s2.sub(&Matrix::identity(nc).scale(0.75));
    let a = shifted.matmul(&closure.embedding);
    let gram = a.transpose().matmul(&a);
    let eig = jacobi_eigen(&gram)?;
    let singular_values: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut null_cols = Vec::new();
    for (k, &sv) in singular_values.iter().enumerate() {
        if sv < NULL_TOLERANCE {
            null_cols.push(eig.vectors.column(k));
        } else if sv < GAP_TOLERANCE {
            return Err(Error::AmbiguousRank { value: sv });
        }
    }
    // deterministic basis: Gram–Schmidt of P·e_i in determinant order
    let n = dets.len();
    let projector = Matrix::from_fn(n, n, |i, j| null_cols.iter().map(|c| c[i] * c[j]).sum());
    let candidates: Vec<Vec<f64>> = (0..n).map(|i| projector.column(i)).collect();
    let mut cols = gram_schmidt_columns(&candidates, 1e-8);
    cols.truncate(null_cols.len());
    if cols.len() != null_cols.len() {
        return Err(Error::AmbiguousRank { value: 0.0 });
    }
    for c in &mut cols {
        let lead = c.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mut vectors = Matrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        vectors.set_column(j, c);
    }
    Ok(SpinAdaptedBasis { determinants: dets.to_vec(), vectors, closure, singular_values })
}
