//! Hamiltonian assembly by Slater–Condon rules and the doublet ground state.

use crate::basis::{self, BasisIntegrals, BasisParams, IntegralTable, OrthoTransform, RankId, Spin, SpinOrbital};
use crate::determinants::{self, Determinant, SpinAdaptedBasis};
use crate::error::{Error, Result};
use crate::linalg::{dot, jacobi_eigen, Matrix};
use crate::optimize::{self, NelderMeadOptions, OptimizerTrace};

/// Everything the ground-state solve needs at one parameter point.
#[derive(Debug, Clone)]
pub struct Problem {
    pub params: BasisParams,
    pub primitives: Vec<SpinOrbital>,
    pub transform: OrthoTransform,
    pub integrals: BasisIntegrals,
    pub adapted: SpinAdaptedBasis,
}

impl Problem {
    pub fn build(params: &BasisParams, quadrature_check: bool) -> Result<Self> {
        let primitives = basis::standard_basis(params)?;
        let transform = basis::gram_schmidt(&primitives)?;
        let integrals = basis::build_integrals(&primitives, &transform, quadrature_check)?;
        let spins = transform.spins();
        let dets = determinants::sz_filter(&determinants::enumerate(primitives.len())?, &spins, -0.5);
        let adapted = determinants::spin_adapt(&dets, &primitives, &transform)?;
        Ok(Self { params: *params, primitives, transform, integrals, adapted })
    }

    pub fn spins(&self) -> Vec<Spin> {
        self.transform.spins()
    }

    pub fn hamiltonian(&self) -> Matrix {
        hamiltonian(&self.adapted.determinants, &self.integrals.orthonormal, f64::from(self.params.z))
    }
}

/// Ground state amplitudes over the S_z-filtered determinant list.
#[derive(Debug, Clone)]
pub struct CIState {
    pub rank: RankId,
    pub params: BasisParams,
    pub determinants: Vec<Determinant>,
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    pub spins: Vec<Spin>,
    pub doublet_dimension: usize,
    /// `‖(S² − 3/4)Ψ‖` in the closure space.
    pub s2_residual: f64,
}

impl CIState {
    /// Number of spin-orbitals.
    pub fn orbital_count(&self) -> usize {
        self.spins.len()
    }

    pub fn amplitude(&self, det: &Determinant) -> f64 {
        self.determinants.iter().position(|d| d == det).map_or(0.0, |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        dot(&self.amplitudes, &self.amplitudes).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub state: CIState,
    pub trace: OptimizerTrace,
}

impl SolveResult {
    pub fn energy(&self) -> f64 {
        self.state.energy
    }
}

/// Permutation parity and the reordering of `ket` that lines up its common
/// orbitals with the positions they occupy in `bra`.
fn align(bra: &[usize; 3], ket: &[usize; 3]) -> (f64, [usize; 3]) {
    let mut aligned = [usize::MAX; 3];
    let mut used = [false; 3];
    for i in 0..3 {
        if let Some(j) = ket.iter().position(|&x| x == bra[i]) {
            aligned[i] = ket[j];
            used[j] = true;
        }
    }
    let mut rest = (0..3).filter(|&j| !used[j]).map(|j| ket[j]);
    for slot in aligned.iter_mut() {
        if *slot == usize::MAX {
            *slot = rest.next().expect("three slots");
        }
    }
    let perm: Vec<usize> = aligned.iter().map(|x| ket.iter().position(|y| y == x).expect("member")).collect();
    let mut inversions = 0;
    for a in 0..3 {
        for b in a + 1..3 {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    (if inversions % 2 == 0 { 1.0 } else { -1.0 }, aligned)
}

/// `⟨d₁|H|d₂⟩` with `H = Σᵢ (π − Z·κ)ᵢ + Σ_{i<j} 1/r_{ij}` over orthonormal spin-orbitals.
pub fn slater_condon(d1: &Determinant, d2: &Determinant, integrals: &IntegralTable, z: f64) -> f64 {
    let h = |p: usize, q: usize| integrals.kinetic[(p, q)] - z * integrals.nuclear[(p, q)];
    let g = |m: usize, n: usize, o: usize, p: usize| integrals.eri.get(m, n, o, p);
    let bra = d1.0;
    let (sign, ket) = align(&bra, &d2.0);
    let diff: Vec<usize> = (0..3).filter(|&i| bra[i] != ket[i]).collect();
    match diff.len() {
        0 => {
            let mut e = 0.0;
            for i in 0..3 {
                e += h(bra[i], bra[i]);
                for j in i + 1..3 {
                    e += g(bra[i], bra[i], bra[j], bra[j]) - g(bra[i], bra[j], bra[j], bra[i]);
                }
            }
            e
        }
        1 => {
            let i = diff[0];
            let (p, q) = (bra[i], ket[i]);
            let mut e = h(p, q);
            for k in (0..3).filter(|&k| k != i) {
                let c = bra[k];
                e += g(p, q, c, c) - g(p, c, c, q);
            }
            sign * e
        }
        2 => {
            let (i, j) = (diff[0], diff[1]);
            let (p1, p2, q1, q2) = (bra[i], bra[j], ket[i], ket[j]);
            sign * (g(p1, q1, p2, q2) - g(p1, q2, p2, q1))
        }
        _ => 0.0,
    }
}

pub fn hamiltonian(dets: &[Determinant], integrals: &IntegralTable, z: f64) -> Matrix {
    let n = dets.len();
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = slater_condon(&dets[i], &dets[j], integrals, z);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Lowest doublet eigenpair for a prepared problem.
pub fn ground_state_of(problem: &Problem, h: &Matrix) -> Result<CIState> {
    let q = &problem.adapted.vectors;
    let reduced = q.congruence(h);
    let eig = jacobi_eigen(&reduced)?;
    let mut amplitudes = q.matvec(&eig.vectors.column(0));
    let nrm = dot(&amplitudes, &amplitudes).sqrt();
    amplitudes.iter_mut().for_each(|x| *x /= nrm);
    let lead = amplitudes.iter().copied().fold(0.0_f64, |acc, x| if x.abs() > acc.abs() + 1e-14 { x } else { acc });
    if lead < 0.0 {
        amplitudes.iter_mut().for_each(|x| *x = -*x);
    }
    let energy = dot(&amplitudes, &h.matvec(&amplitudes));
    if (energy - eig.values[0]).abs() > 1e-8 * energy.abs().max(1.0) {
        return Err(Error::NoConvergence(format!(
            "Rayleigh quotient {energy} disagrees with eigenvalue {}",
            eig.values[0]
        )));
    }
    let s2_residual = problem.adapted.s2_residual(&amplitudes);
    Ok(CIState {
        rank: problem.params.rank,
        params: problem.params,
        determinants: problem.adapted.determinants.clone(),
        amplitudes,
        energy,
        spins: problem.spins(),
        doublet_dimension: problem.adapted.dimension(),
        s2_residual,
    })
}

pub fn ground_state(params: &BasisParams) -> Result<CIState> {
    let problem = Problem::build(params, false)?;
    let h = problem.hamiltonian();
    ground_state_of(&problem, &h)
}

/// Initial simplex vertex for nuclear charge `z`; (2.7, 1.3) at Z = 3.
pub fn starting_point(z: u32) -> [f64; 2] {
    let shift = f64::from(z) - 3.0;
    [2.7 + shift, 1.3 + shift]
}

/// Minimize E(α, γ) by Nelder–Mead.
pub fn optimize_screening(rank: RankId, z: u32) -> Result<SolveResult> {
    optimize_screening_with(rank, z, &NelderMeadOptions::default())
}

pub fn optimize_screening_with(rank: RankId, z: u32, options: &NelderMeadOptions) -> Result<SolveResult> {
    BasisParams::new(rank, 1.0, 1.0, z)?;
    let objective = |x: &[f64]| -> f64 {
        BasisParams::new(rank, x[0], x[1], z)
            .and_then(|p| ground_state(&p))
            .map_or(f64::INFINITY, |s| s.energy)
    };
    let outcome = optimize::nelder_mead(objective, &starting_point(z), options);
    let best = BasisParams::new(rank, outcome.point[0], outcome.point[1], z)?;
    let state = ground_state(&best)?;
    if !outcome.trace.converged {
        return Err(Error::NoConvergence(format!(
            "simplex search for rank {rank} at Z = {z} stopped after {} iterations with spread {:.3e} (best E = {:.9}, alpha = {:.6}, gamma = {:.6})",
            outcome.trace.iterations, outcome.trace.final_spread, state.energy, best.alpha, best.gamma
        )));
    }
    Ok(SolveResult { state, trace: outcome.trace })
}
