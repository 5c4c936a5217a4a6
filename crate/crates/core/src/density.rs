//! Reduced density matrices, natural occupations, the natural-orbital
//! amplitude tensor and the particle/hole duality objects.

use std::collections::HashMap;

use crate::basis::Spin;
use crate::ci::CIState;
use crate::determinants::{excite, Determinant};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_columns, jacobi_eigen, Matrix};
use crate::N_ELECTRONS;

/// Eigenvalues closer than this (relative to 1) share a degenerate block.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
/// Channels with λ below this are skipped when forming |ω_j⟩.
pub const CHANNEL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OneBodyRDM {
    pub matrix: Matrix,
    pub spins: Vec<Spin>,
}

impl OneBodyRDM {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn spin_indices(&self, spin: Spin) -> Vec<usize> {
        (0..self.spins.len()).filter(|&i| self.spins[i] == spin).collect()
    }

    pub fn block(&self, spin: Spin) -> Matrix {
        let idx = self.spin_indices(spin);
        self.matrix.submatrix(&idx, &idx)
    }

    pub fn block_trace(&self, spin: Spin) -> f64 {
        self.block(spin).trace()
    }
}

/// `ρ₁[q][p] = ⟨Ψ|a†_q a_p|Ψ⟩` over the orthonormal spin-orbitals.
pub fn one_body_rdm(state: &CIState) -> OneBodyRDM {
    let m = state.orbital_count();
    let pos: HashMap<[usize; 3], usize> = state.determinants.iter().enumerate().map(|(i, d)| (d.0, i)).collect();
    let mut rho = Matrix::zeros(m, m);
    for (x, d) in state.determinants.iter().enumerate() {
        let cx = state.amplitudes[x];
        if cx == 0.0 {
            continue;
        }
        for &p in &d.0 {
            for q in 0..m {
                if let Some((sign, out)) = excite(&d.0, p, q) {
                    if let Some(&y) = pos.get(&[out[0], out[1], out[2]]) {
                        rho[(q, p)] += sign * state.amplitudes[y] * cx;
                    }
                }
            }
        }
    }
    OneBodyRDM { matrix: rho, spins: state.spins.clone() }
}

/// Descending occupations with spin-pure natural orbitals.
#[derive(Debug, Clone)]
pub struct OccupationSpectrum {
    pub values: Vec<f64>,
    /// Column k is natural orbital k over the orthonormal spin-orbitals.
    pub transform: Matrix,
    pub spins: Vec<Spin>,
}

impl OccupationSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-based λ_i.
    pub fn lambda(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// A spectrum with identity transform, for analysing bare occupation vectors.
    pub fn from_values(values: &[f64]) -> Self {
        let m = values.len();
        Self { values: values.to_vec(), transform: Matrix::identity(m), spins: vec![Spin::Down; m] }
    }
}

struct Orbital {
    value: f64,
    spin: Spin,
    index: usize,
    vector: Vec<f64>,
}

/// Per-spin-block diagonalization, merged into one descending spectrum.
///
/// Inside a degenerate block the eigenvectors are replaced by the
/// orthonormalized projections of the original axes with the largest
/// weight in the block. Every column's largest-magnitude entry is positive.
/// Ties in λ are ordered ↓ before ↑, then by position.
pub fn natural_occupations(rdm: &OneBodyRDM) -> Result<OccupationSpectrum> {
    let m = rdm.matrix.rows();
    let mut orbitals: Vec<Orbital> = Vec::with_capacity(m);
    for spin in [Spin::Down, Spin::Up] {
        let idx = rdm.spin_indices(spin);
        if idx.is_empty() {
            continue;
        }
        let block = rdm.matrix.submatrix(&idx, &idx);
        let eig = jacobi_eigen(&block)?;
        let n = idx.len();
        // descending within the block
        let order: Vec<usize> = (0..n).rev().collect();
        let values: Vec<f64> = order.iter().map(|&k| eig.values[k]).collect();
        let mut vectors: Vec<Vec<f64>> = order.iter().map(|&k| eig.vectors.column(k)).collect();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (values[end - 1] - values[end]).abs() <= DEGENERACY_TOLERANCE {
                end += 1;
            }
            if end - start > 1 {
                let fixed = align_degenerate(&vectors[start..end], n);
                vectors.splice(start..end, fixed);
            }
            start = end;
        }
        for (k, v) in vectors.into_iter().enumerate() {
            let mut full = vec![0.0; m];
            let lead = v.iter().copied().fold(0.0_f64, |a, x| if x.abs() > a.abs() + 1e-14 { x } else { a });
            let s = if lead < 0.0 { -1.0 } else { 1.0 };
            for (local, &global) in idx.iter().enumerate() {
                full[global] = s * v[local];
            }
            let index = idx[(0..n).max_by(|&a, &b| full[idx[a]].abs().total_cmp(&full[idx[b]].abs()).then(b.cmp(&a))).unwrap_or(k)];
            orbitals.push(Orbital { value: values[k], spin, index, vector: full });
        }
    }
    orbitals.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut start = 0;
    while start < orbitals.len() {
        let mut end = start + 1;
        while end < orbitals.len() && (orbitals[end - 1].value - orbitals[end].value).abs() <= 1e-12 {
            end += 1;
        }
        orbitals[start..end].sort_by(|a, b| a.spin.cmp(&b.spin).then(a.index.cmp(&b.index)));
        start = end;
    }
    let mut transform = Matrix::zeros(m, m);
    for (k, o) in orbitals.iter().enumerate() {
        transform.set_column(k, &o.vector);
    }
    Ok(OccupationSpectrum {
        values: orbitals.iter().map(|o| o.value).collect(),
        transform,
        spins: orbitals.iter().map(|o| o.spin).collect(),
    })
}

fn align_degenerate(vectors: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let k = vectors.len();
    let project = |axis: usize| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for v in vectors {
            for (o, x) in out.iter_mut().zip(v) {
                *o += v[axis] * x;
            }
        }
        out
    };
    let mut axes: Vec<(usize, f64)> = (0..n).map(|a| (a, vectors.iter().map(|v| v[a] * v[a]).sum())).collect();
    axes.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    let candidates: Vec<Vec<f64>> = axes.iter().map(|&(a, _)| project(a)).collect();
    let mut out = gram_schmidt_columns(&candidates, 1e-8);
    out.truncate(k);
    out
}

/// Antisymmetric amplitudes `c_{ijk}` stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTensor {
    m: usize,
    data: Vec<f64>,
    pub spins: Vec<Spin>,
}

impl AmplitudeTensor {
    pub fn zeros(m: usize, spins: Vec<Spin>) -> Self {
        Self { m, data: vec![0.0; m * m * m], spins }
    }

    pub fn from_state(state: &CIState) -> Self {
        let mut t = Self::zeros(state.orbital_count(), state.spins.clone());
        for (d, &c) in state.determinants.iter().zip(&state.amplitudes) {
            t.set_det(d, c);
        }
        t
    }

    pub fn from_dets(m: usize, spins: Vec<Spin>, entries: &[(Determinant, f64)]) -> Self {
        let mut t = Self::zeros(m, spins);
        for (d, c) in entries {
            t.set_det(d, *c);
        }
        t
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.m + j) * self.m + k]
    }

    /// Writes all six signed permutations.
    pub fn set_det(&mut self, d: &Determinant, c: f64) {
        let [i, j, k] = d.0;
        let m = self.m;
        let mut put = |a: usize, b: usize, e: usize, v: f64| self.data[(a * m + b) * m + e] = v;
        put(i, j, k, c);
        put(j, k, i, c);
        put(k, i, j, c);
        put(j, i, k, -c);
        put(i, k, j, -c);
        put(k, j, i, -c);
    }

    /// `c_{ijk}` for one-based labels, as printed in formulas.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.get(i - 1, j - 1, k - 1)
    }

    pub fn amplitude(&self, d: &Determinant) -> f64 {
        let [i, j, k] = d.0;
        self.get(i, j, k)
    }

    /// Sorted-triple entries.
    pub fn entries(&self) -> Vec<(Determinant, f64)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i + 1..self.m {
                for k in j + 1..self.m {
                    out.push((Determinant([i, j, k]), self.get(i, j, k)));
                }
            }
        }
        out
    }

    pub fn norm_squared(&self) -> f64 {
        self.entries().iter().map(|(_, c)| c * c).sum()
    }

    /// `c′_{abc} = Σ c_{ijk} U_{ia} U_{jb} U_{kc}`.
    pub fn transform(&self, u: &Matrix, spins: Vec<Spin>) -> Self {
        let m = self.m;
        let mut cur = self.data.clone();
        for slot in 0..3 {
            let mut next = vec![0.0; m * m * m];
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let mut acc = 0.0;
                        for i in 0..m {
                            let (w, src) = match slot {
                                0 => (u[(i, a)], (i * m + b) * m + c),
                                1 => (u[(i, b)], (a * m + i) * m + c),
                                _ => (u[(i, c)], (a * m + b) * m + i),
                            };
                            if w != 0.0 {
                                acc += w * cur[src];
                            }
                        }
                        next[(a * m + b) * m + c] = acc;
                    }
                }
            }
            cur = next;
        }
        Self { m, data: cur, spins }
    }

    /// `ρ_{ab} = Σ_{j<k} c_{ajk} c_{bjk}`.
    pub fn one_body(&self) -> Matrix {
        let m = self.m;
        Matrix::from_fn(m, m, |a, b| {
            let mut s = 0.0;
            for j in 0..m {
                for k in j + 1..m {
                    s += self.get(a, j, k) * self.get(b, j, k);
                }
            }
            s
        })
    }

    /// Largest |c| over determinants not in `dets`.
    pub fn max_outside(&self, dets: &[Determinant]) -> f64 {
        self.entries().iter().filter(|(d, _)| !dets.contains(d)).map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }
}

pub fn to_natural_basis(state: &CIState, spectrum: &OccupationSpectrum) -> AmplitudeTensor {
    AmplitudeTensor::from_state(state).transform(&spectrum.transform, spectrum.spins.clone())
}

/// Index of the unordered pair `i < j` among `C(m, 2)` pairs in lexicographic order.
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

#[derive(Debug, Clone)]
pub struct DualityPairs {
    /// `(λ_j, |ω_j⟩)` with ω_j over orbital pairs, for λ_j above threshold.
    pub omegas: Vec<(usize, f64, Vec<f64>)>,
    /// Two-body matrix over pairs, `ρ₂ = C·Cᵀ` with `C_{[ij],m} = c_{ijm}`.
    pub rho2: Matrix,
    pub eta1: Matrix,
    /// Two-hole matrix `⟨a_i a_j a†_l a†_k⟩` over pairs `(i<j), (k<l)`.
    pub eta2: Matrix,
    pub m: usize,
}

impl DualityPairs {
    /// `Σ_j η₂(i j; k j)` with the tensor normalized as half the pair matrix.
    pub fn eta2_contraction(&self) -> Matrix {
        let m = self.m;
        Matrix::from_fn(m, m, |i, k| {
            let mut s = 0.0;
            for j in 0..m {
                if j == i || j == k {
                    continue;
                }
                let (a, sa) = if i < j { (pair_index(m, i, j), 1.0) } else { (pair_index(m, j, i), -1.0) };
                let (b, sb) = if k < j { (pair_index(m, k, j), 1.0) } else { (pair_index(m, j, k), -1.0) };
                s += sa * sb * self.eta2[(a, b)];
            }
            s / 2.0
        })
    }

    /// `((M − N − 1)/2)·η₁`, what the contraction should equal.
    pub fn expected_contraction(&self) -> Matrix {
        self.eta1.scale((self.m as f64 - N_ELECTRONS as f64 - 1.0) / 2.0)
    }

    pub fn eta2_spectrum(&self) -> Result<Vec<f64>> {
        let mut v = jacobi_eigen(&self.eta2)?.values;
        v.reverse();
        Ok(v)
    }

    pub fn rho2_spectrum(&self) -> Result<Vec<f64>> {
        let mut v = jacobi_eigen(&self.rho2)?.values;
        v.reverse();
        Ok(v)
    }
}

/// Two-body and hole objects of `tensor`, usually in the natural basis.
pub fn duality_pairs(tensor: &AmplitudeTensor, spectrum: &OccupationSpectrum) -> Result<DualityPairs> {
    let m = tensor.modes();
    if spectrum.len() != m {
        return Err(Error::Dimension(format!("spectrum has {} entries, tensor {m} modes", spectrum.len())));
    }
    let ps = pairs(m);
    let np = ps.len();
    let mut omegas = Vec::new();
    for j in 0..m {
        let lam = spectrum.values[j];
        if lam <= CHANNEL_THRESHOLD {
            continue;
        }
        let w: Vec<f64> = ps.iter().map(|&(a, b)| tensor.get(j, a, b) / lam.sqrt()).collect();
        omegas.push((j, lam, w));
    }
    let rho2 = Matrix::from_fn(np, np, |x, y| {
        let (i, j) = ps[x];
        let (k, l) = ps[y];
        (0..m).map(|q| tensor.get(i, j, q) * tensor.get(k, l, q)).sum()
    });
    let rho1 = tensor.one_body();
    let eta1 = Matrix::identity(m).sub(&rho1);

    // χ_{kl} = a†_l a†_k |Ψ⟩ as a map from five-orbital sets to amplitudes
    let entries: Vec<(Determinant, f64)> = tensor.entries().into_iter().filter(|(_, c)| *c != 0.0).collect();
    let chis: Vec<HashMap<Vec<usize>, f64>> = ps
        .iter()
        .map(|&(k, l)| {
            let mut out: HashMap<Vec<usize>, f64> = HashMap::new();
            for (d, c) in &entries {
                if let Some((s1, v1)) = create(&d.0, k) {
                    if let Some((s2, v2)) = create(&v1, l) {
                        *out.entry(v2).or_insert(0.0) += s1 * s2 * c;
                    }
                }
            }
            out
        })
        .collect();
    let eta2 = Matrix::from_fn(np, np, |x, y| {
        chis[x].iter().map(|(k, v)| v * chis[y].get(k).copied().unwrap_or(0.0)).sum()
    });
    Ok(DualityPairs { omegas, rho2, eta1, eta2, m })
}

/// `a†_p` on a sorted occupation list.
fn create(occ: &[usize], p: usize) -> Option<(f64, Vec<usize>)> {
    if occ.contains(&p) {
        return None;
    }
    let ins = occ.iter().filter(|&&x| x < p).count();
    let mut out = occ.to_vec();
    out.insert(ins, p);
    Some((if ins % 2 == 0 { 1.0 } else { -1.0 }, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisParams, RankId};

    fn single_det_state(m: usize) -> CIState {
        let spins = vec![Spin::Down; m];
        CIState {
            rank: RankId::R6b,
            params: BasisParams::new(RankId::R6b, 1.0, 1.0, 3).unwrap(),
            determinants: vec![Determinant([0, 1, 2]), Determinant([0, 1, 3])],
            amplitudes: vec![1.0, 0.0],
            energy: 0.0,
            spins,
            doublet_dimension: 1,
            s2_residual: 0.0,
        }
    }

    #[test]
    fn single_determinant_rdm() {
        let rdm = one_body_rdm(&single_det_state(6));
        let expected = Matrix::diagonal(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(rdm.matrix.sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_gives_identity_transform() {
        let rdm = OneBodyRDM { matrix: Matrix::diagonal(&[0.9, 0.8, 0.7, 0.3, 0.2, 0.1]), spins: vec![Spin::Down; 6] };
        let s = natural_occupations(&rdm).unwrap();
        assert_eq!(s.values, vec![0.9, 0.8, 0.7, 0.3, 0.2, 0.1]);
        assert!(s.transform.sub(&Matrix::identity(6)).max_abs() < 1e-15);
    }

    #[test]
    fn ties_put_down_before_up() {
        let rdm = OneBodyRDM {
            matrix: Matrix::diagonal(&[0.5, 0.5, 1.0]),
            spins: vec![Spin::Up, Spin::Down, Spin::Down],
        };
        let s = natural_occupations(&rdm).unwrap();
        assert_eq!(s.spins, vec![Spin::Down, Spin::Down, Spin::Up]);
        assert_eq!(s.transform[(1, 1)], 1.0);
        assert_eq!(s.transform[(0, 2)], 1.0);
    }

    #[test]
    fn degenerate_block_aligns_with_axes() {
        // rotated copy of diag(0.5, 0.5, 0.2) must come back as the axes
        let c = 0.6_f64;
        let s = 0.8_f64;
        let rot = Matrix::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]);
        let d = Matrix::diagonal(&[0.5, 0.5, 0.2]);
        let rho = rot.matmul(&d).matmul(&rot.transpose());
        let spec = natural_occupations(&OneBodyRDM { matrix: rho, spins: vec![Spin::Down; 3] }).unwrap();
        assert!(spec.transform.sub(&Matrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let m = 6;
        for (k, (i, j)) in pairs(m).into_iter().enumerate() {
            assert_eq!(pair_index(m, i, j), k);
        }
    }

    #[test]
    fn identity_transform_keeps_tensor() {
        let spins = vec![Spin::Down; 5];
        let t = AmplitudeTensor::from_dets(5, spins.clone(), &[(Determinant([0, 1, 2]), 0.6), (Determinant([0, 3, 4]), 0.8)]);
        assert_eq!(t.transform(&Matrix::identity(5), spins), t);
        assert_eq!(t.get(2, 1, 0), -0.6);
        assert_eq!(t.c(1, 4, 5), 0.8);
    }

    #[test]
    fn single_det_hole_trace() {
        let m = 6;
        let spins = vec![Spin::Down; m];
        let t = AmplitudeTensor::from_dets(m, spins, &[(Determinant([0, 1, 2]), 1.0)]);
        let spec = OccupationSpectrum::from_values(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let d = duality_pairs(&t, &spec).unwrap();
        assert!((d.eta2.trace() - 3.0).abs() < 1e-14);
        assert!((d.eta1.trace() - 3.0).abs() < 1e-14);
        assert!(d.eta2_contraction().sub(&d.expected_contraction()).max_abs() < 1e-14);
    }
}
