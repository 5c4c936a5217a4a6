//! One-body, two-body and hole matrices: trace rules, duality, pinned
//! structure and printed matrix fixtures.

use proptest::prelude::*;
use quasipin_core::basis::{BasisParams, RankId, Spin};
use quasipin_core::ci::{ground_state, CIState};
use quasipin_core::constraints::selection_rule_dets;
use quasipin_core::density::{
    duality_pairs, natural_occupations, one_body_rdm, pair_index, to_natural_basis, AmplitudeTensor, OneBodyRDM,
    OccupationSpectrum,
};
use quasipin_core::determinants::{self, Determinant};
use quasipin_core::linalg::{jacobi_eigen, Matrix};

fn solved(rank: RankId, alpha: f64, gamma: f64) -> CIState {
    ground_state(&BasisParams::new(rank, alpha, gamma, 3).unwrap()).unwrap()
}

const PRINTED: [(RankId, f64, f64); 5] = [
    (RankId::R5, 2.711177, 1.304903),
    (RankId::R6a, 2.674424, 1.319161),
    (RankId::R6b, 2.712166, 1.323417),
    (RankId::R7, 2.772402, 1.336274),
    (RankId::R8, 2.767562, 1.331108),
];

fn binom2(n: usize) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// State with the given 1-based determinants and amplitudes, normalized.
fn custom_state(rank: RankId, spins: Vec<Spin>, terms: &[((usize, usize, usize), f64)]) -> CIState {
    let n = terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    CIState {
        rank,
        params: BasisParams::new(rank, 1.0, 1.0, 3).unwrap(),
        determinants: terms.iter().map(|&((i, j, k), _)| Determinant::from_labels(i, j, k)).collect(),
        amplitudes: terms.iter().map(|(_, c)| c / n).collect(),
        energy: 0.0,
        spins,
        doublet_dimension: 0,
        s2_residual: 0.0,
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn check_duality(tensor: &AmplitudeTensor, spectrum: &OccupationSpectrum) {
    let m = tensor.modes();
    let d = duality_pairs(tensor, spectrum).unwrap();
    // nonzero ρ₂ spectrum equals the occupation spectrum
    let rho2 = d.rho2_spectrum().unwrap();
    for (i, &l) in spectrum.values.iter().enumerate() {
        assert!((rho2[i] - l).abs() <= 1e-9, "rho2 eigenvalue {i}: {} vs {l}", rho2[i]);
    }
    assert!(rho2[m..].iter().all(|x| x.abs() <= 1e-9));
    // hole trace rules
    assert!((d.eta1.trace() - (m as f64 - 3.0)).abs() < 1e-10);
    assert!((d.eta2.trace() - binom2(m - 3)).abs() < 1e-10, "Tr eta2 = {}", d.eta2.trace());
    assert!(d.eta2_contraction().sub(&d.expected_contraction()).max_abs() < 1e-10);
    // ω_j are orthonormal eigenvectors of ρ₂
    for (a, (_, la, wa)) in d.omegas.iter().enumerate() {
        let rw = d.rho2.matvec(wa);
        for (x, y) in rw.iter().zip(wa) {
            assert!((x - la * y).abs() < 1e-9);
        }
        for (b, (_, _, wb)) in d.omegas.iter().enumerate() {
            let dot: f64 = wa.iter().zip(wb).map(|(x, y)| x * y).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-8, "<w{a}|w{b}> = {dot}");
        }
    }
}

#[test]
fn trace_rules_and_duality_for_every_rank() {
    for rank in RankId::ALL {
        let s = solved(rank, 2.72, 1.32);
        let rdm = one_body_rdm(&s);
        assert!((rdm.trace() - 3.0).abs() < 1e-12, "rank {rank}");
        assert!((rdm.block_trace(Spin::Down) - 2.0).abs() < 1e-12);
        assert!((rdm.block_trace(Spin::Up) - 1.0).abs() < 1e-12);
        assert!(rdm.matrix.asymmetry() < 1e-14);
        // ρ₁ from the excitation form equals the tensor contraction
        assert!(rdm.matrix.sub(&AmplitudeTensor::from_state(&s).one_body()).max_abs() < 1e-13);
        let spec = natural_occupations(&rdm).unwrap();
        assert!((spec.sum() - 3.0).abs() < 1e-12);
        assert!(spec.values.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        assert!(spec.values.iter().all(|&l| l > -1e-12 && l < 1.0 + 1e-12));
        check_duality(&to_natural_basis(&s, &spec), &spec);
    }
}

#[test]
fn natural_orbitals_diagonalize_rho() {
    for (rank, a, g) in PRINTED {
        let s = solved(rank, a, g);
        let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
        let t = to_natural_basis(&s, &spec);
        assert!(t.one_body().sub(&Matrix::diagonal(&spec.values)).max_abs() < 1e-11, "rank {rank}");
        let u = &spec.transform;
        assert!(u.transpose().matmul(u).sub(&Matrix::identity(u.cols())).max_abs() < 1e-12);
        // spin-pure natural orbitals
        for k in 0..u.cols() {
            for i in 0..u.rows() {
                if s.spins[i] != spec.spins[k] {
                    assert_eq!(u[(i, k)], 0.0);
                }
            }
        }
    }
}

#[test]
fn borland_dennis_identities_rank6() {
    for (rank, a, g) in [PRINTED[1], PRINTED[2]] {
        let s = solved(rank, a, g);
        let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
        for r in 1..=3 {
            let v = spec.lambda(r) + spec.lambda(7 - r);
            assert!((v - 1.0).abs() <= 1e-9, "rank {rank}: lambda{r} + lambda{} = {v}", 7 - r);
        }
    }
}

#[test]
fn rank6_two_hole_spectrum_is_one_minus_lambda() {
    for (rank, a, g) in [PRINTED[1], PRINTED[2]] {
        let s = solved(rank, a, g);
        let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
        let d = duality_pairs(&to_natural_basis(&s, &spec), &spec).unwrap();
        let eta = d.eta2_spectrum().unwrap();
        let want = sorted_desc(spec.values.iter().map(|l| 1.0 - l).collect());
        for (i, w) in want.iter().enumerate() {
            assert!((eta[i] - w).abs() < 1e-9, "rank {rank}: {} vs {w}", eta[i]);
        }
        assert!(eta[6..].iter().all(|x| x.abs() < 1e-9));
    }
}

#[test]
fn rank5_is_pinned_to_two_configurations() {
    let s = solved(RankId::R5, 2.711177, 1.304903);
    let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
    assert!((spec.lambda(1) - 1.0).abs() < 1e-12);
    assert!((spec.lambda(2) - spec.lambda(3)).abs() < 1e-12);
    assert!((spec.lambda(4) - spec.lambda(5)).abs() < 1e-12);
    assert!((spec.lambda(2) + spec.lambda(5) - 1.0).abs() < 1e-12);
    let t = to_natural_basis(&s, &spec);
    let keep = selection_rule_dets(5, &["1", "2", "3"]).unwrap();
    assert_eq!(keep, vec![Determinant::from_labels(1, 2, 3), Determinant::from_labels(1, 4, 5)]);
    assert!(t.max_outside(&keep) < 1e-9);
    let (a, d) = (t.c(1, 2, 3), t.c(1, 4, 5));
    assert!((a * a - spec.lambda(2)).abs() < 1e-10 && (d * d - spec.lambda(4)).abs() < 1e-10);

    // ω₁ = a[23] + d[45]; the rest are single pairs with α₁
    let dp = duality_pairs(&t, &spec).unwrap();
    let m = 5;
    let w1 = &dp.omegas[0].2;
    assert!((w1[pair_index(m, 1, 2)].abs() - a.abs()).abs() < 1e-9);
    assert!((w1[pair_index(m, 3, 4)].abs() - d.abs()).abs() < 1e-9);
    for (j, partner) in [(1, 2), (2, 1), (3, 4), (4, 3)] {
        let w = &dp.omegas.iter().find(|o| o.0 == j).unwrap().2;
        assert!((w[pair_index(m, 0, partner)].abs() - 1.0).abs() < 1e-9, "omega {}", j + 1);
    }
}

#[test]
fn pinned_rank5_two_hole_matrix_is_idempotent() {
    for (a, d) in [(0.9, 0.1), (0.999, 0.036), (0.6, 0.8)] {
        let n = f64::hypot(a, d);
        let t = AmplitudeTensor::from_dets(
            5,
            vec![Spin::Down; 5],
            &[(Determinant::from_labels(1, 2, 3), a / n), (Determinant::from_labels(1, 4, 5), d / n)],
        );
        let spec = natural_occupations(&OneBodyRDM { matrix: t.one_body(), spins: t.spins.clone() }).unwrap();
        let dp = duality_pairs(&t.transform(&spec.transform, spec.spins.clone()), &spec).unwrap();
        let e = &dp.eta2;
        assert!(e.matmul(e).sub(e).max_abs() <= 1e-9);
        assert!((e.trace() - 1.0).abs() < 1e-12);
    }
    // also on the solved rank-5 state
    let s = solved(RankId::R5, 2.711177, 1.304903);
    let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
    let e = duality_pairs(&to_natural_basis(&s, &spec), &spec).unwrap().eta2;
    assert!(e.matmul(&e).sub(&e).max_abs() <= 1e-9);
}

fn rank5_spins() -> Vec<Spin> {
    vec![Spin::Down, Spin::Down, Spin::Down, Spin::Up, Spin::Up]
}

fn rank7_spins() -> Vec<Spin> {
    use Spin::{Down as D, Up as U};
    vec![U, D, D, D, U, D, U]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank5_printed_one_body_matrix(a in -1.0..1.0f64, b in -1.0..1.0f64, d in -1.0..1.0f64, e in -1.0..1.0f64, f in -1.0..1.0f64) {
        prop_assume!(a * a + b * b + d * d + e * e + f * f > 1e-3);
        let s = custom_state(
            RankId::R5,
            rank5_spins(),
            &[((1, 2, 4), a), ((1, 2, 5), b), ((1, 3, 4), b), ((1, 3, 5), d), ((2, 3, 4), e), ((2, 3, 5), f)],
        );
        let n2 = a * a + 2.0 * b * b + d * d + e * e + f * f;
        let (a, b, d, e, f) = (a / n2.sqrt(), b / n2.sqrt(), d / n2.sqrt(), e / n2.sqrt(), f / n2.sqrt());
        let printed = Matrix::from_rows(&[
            vec![a * a + 2.0 * b * b + d * d, b * e + d * f, -a * e - b * f, 0.0, 0.0],
            vec![b * e + d * f, a * a + b * b + e * e + f * f, a * b + b * d, 0.0, 0.0],
            vec![-a * e - b * f, a * b + b * d, b * b + d * d + e * e + f * f, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, a * a + b * b + e * e, a * b + b * d + e * f],
            vec![0.0, 0.0, 0.0, a * b + b * d + e * f, b * b + d * d + f * f],
        ]);
        let rho = one_body_rdm(&s).matrix;
        prop_assert!(rho.sub(&printed).max_abs() < 1e-13);
        prop_assert!((rho.trace() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn rank7_printed_one_body_entries(amps in prop::collection::vec(-1.0..1.0f64, 18)) {
        let up = [1, 5, 7];
        let down = [2, 3, 4, 6];
        let mut terms = Vec::new();
        for &u in &up {
            for x in 0..4 {
                for y in x + 1..4 {
                    let mut t = [u, down[x], down[y]];
                    t.sort_unstable();
                    terms.push(((t[0], t[1], t[2]), amps[terms.len()]));
                }
            }
        }
        prop_assume!(amps.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let s = custom_state(RankId::R7, rank7_spins(), &terms);
        let t = AmplitudeTensor::from_state(&s);
        let c = |l: &str| {
            let d: Vec<usize> = l.chars().map(|ch| ch.to_digit(10).unwrap() as usize).collect();
            t.c(d[0], d[1], d[2])
        };
        let form = |items: &[(f64, &str, &str)]| items.iter().map(|&(sg, x, y)| sg * c(x) * c(y)).sum::<f64>();
        let sq = |items: &[&str]| items.iter().map(|x| c(x) * c(x)).sum::<f64>();
        let rho = one_body_rdm(&s).matrix;
        let r = |i: usize, j: usize| rho[(i - 1, j - 1)];
        // ρ↑ over orbitals {1, 5, 7}
        let checks = [
            (r(1, 1), sq(&["123", "124", "126", "134", "146", "136"])),
            (r(1, 5), form(&[(1.0, "123", "235"), (1.0, "124", "245"), (-1.0, "126", "256"), (1.0, "134", "345"), (-1.0, "136", "356"), (-1.0, "146", "456")])),
            (r(1, 7), form(&[(1.0, "123", "237"), (1.0, "124", "247"), (1.0, "126", "267"), (1.0, "134", "347"), (1.0, "136", "367"), (1.0, "146", "467")])),
            (r(5, 7), form(&[(1.0, "235", "237"), (1.0, "245", "247"), (-1.0, "256", "267"), (1.0, "345", "347"), (-1.0, "356", "367"), (-1.0, "456", "467")])),
            // ρ↓ over orbitals {2, 3, 4, 6}
            (r(2, 3), form(&[(1.0, "124", "134"), (1.0, "126", "136"), (1.0, "245", "345"), (1.0, "247", "347"), (1.0, "256", "356"), (1.0, "267", "367")])),
            (r(2, 4), form(&[(-1.0, "123", "134"), (1.0, "126", "146"), (-1.0, "235", "345"), (-1.0, "237", "347"), (1.0, "256", "456"), (1.0, "267", "467")])),
            (r(2, 6), form(&[(-1.0, "123", "136"), (-1.0, "124", "146"), (1.0, "235", "356"), (-1.0, "237", "367"), (1.0, "245", "456"), (-1.0, "247", "467")])),
            (r(3, 3), sq(&["123", "134", "136", "235", "237", "345", "347", "356", "367"])),
            // printed with −c356·c456; c_{3,5,6} and c_{4,5,6} are both sorted, so the sign is +
            (r(3, 4), form(&[(1.0, "123", "124"), (1.0, "136", "146"), (1.0, "235", "245"), (1.0, "237", "247"), (1.0, "356", "456"), (1.0, "367", "467")])),
            (r(3, 6), form(&[(1.0, "123", "126"), (-1.0, "134", "146"), (-1.0, "235", "256"), (1.0, "237", "267"), (1.0, "345", "456"), (-1.0, "347", "467")])),
            (r(4, 4), sq(&["124", "134", "146", "245", "247", "345", "347", "456", "467"])),
            (r(4, 6), form(&[(1.0, "124", "126"), (1.0, "134", "136"), (-1.0, "245", "256"), (1.0, "247", "267"), (-1.0, "345", "356"), (1.0, "347", "367")])),
            (r(6, 6), sq(&["126", "136", "146", "256", "267", "356", "367", "456", "467"])),
        ];
        for (k, (got, want)) in checks.iter().enumerate() {
            prop_assert!((got - want).abs() < 1e-13, "entry {}: {} vs {}", k, got, want);
        }
        // spin blocks decouple
        for &u in &up {
            for &d in &down {
                prop_assert_eq!(r(u, d), 0.0);
            }
        }
    }
}

fn random_tensor(m: usize, amps: &[f64]) -> AmplitudeTensor {
    let dets = determinants::enumerate(m).unwrap();
    let n = amps.iter().take(dets.len()).map(|x| x * x).sum::<f64>().sqrt();
    let entries: Vec<(Determinant, f64)> = dets.into_iter().zip(amps).map(|(d, c)| (d, c / n)).collect();
    AmplitudeTensor::from_dets(m, vec![Spin::Down; m], &entries)
}

fn spectrum_of(t: &AmplitudeTensor) -> OccupationSpectrum {
    natural_occupations(&OneBodyRDM { matrix: t.one_body(), spins: t.spins.clone() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn duality_on_random_states(m in 4usize..9, amps in prop::collection::vec(-1.0..1.0f64, 56)) {
        prop_assume!(amps.iter().take(m * (m - 1) * (m - 2) / 6).map(|x| x * x).sum::<f64>() > 1e-2);
        let t = random_tensor(m, &amps);
        let spec = spectrum_of(&t);
        prop_assert!((spec.sum() - 3.0).abs() < 1e-12);
        check_duality(&t.transform(&spec.transform, spec.spins.clone()), &spec);
    }

    #[test]
    fn borland_dennis_on_random_rank6_states(amps in prop::collection::vec(-1.0..1.0f64, 20)) {
        prop_assume!(amps.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let t = random_tensor(6, &amps);
        let spec = spectrum_of(&t);
        for r in 1..=3 {
            prop_assert!((spec.lambda(r) + spec.lambda(7 - r) - 1.0).abs() < 1e-9);
        }
        // two-hole spectrum {1 − λ}
        let tn = t.transform(&spec.transform, spec.spins.clone());
        let eta = duality_pairs(&tn, &spec).unwrap().eta2_spectrum().unwrap();
        let want = sorted_desc(spec.values.iter().map(|l| 1.0 - l).collect());
        for i in 0..6 {
            prop_assert!((eta[i] - want[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn occupations_invariant_under_orbital_rotation(amps in prop::collection::vec(-1.0..1.0f64, 35), angles in prop::collection::vec(-3.0..3.0f64, 6)) {
        prop_assume!(amps.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let t = random_tensor(7, &amps);
        // product of Givens rotations
        let mut u = Matrix::identity(7);
        for (k, th) in angles.iter().enumerate() {
            let (i, j) = (k, (k + 3) % 7);
            let g = Matrix::from_fn(7, 7, |a, b| match (a, b) {
                _ if a == i && b == i || a == j && b == j => th.cos(),
                _ if a == i && b == j => -th.sin(),
                _ if a == j && b == i => th.sin(),
                _ if a == b => 1.0,
                _ => 0.0,
            });
            u = u.matmul(&g);
        }
        let l1 = spectrum_of(&t).values;
        let l2 = spectrum_of(&t.transform(&u, t.spins.clone())).values;
        for (x, y) in l1.iter().zip(&l2) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((t.transform(&u, t.spins.clone()).norm_squared() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rho2_eigenvalues_match_direct_diagonalization() {
    let s = solved(RankId::R8, 2.767562, 1.331108);
    let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
    let t = AmplitudeTensor::from_state(&s);
    let d = duality_pairs(&t, &spec).unwrap();
    // the pair matrix does not need the natural basis for its spectrum
    let direct = sorted_desc(jacobi_eigen(&d.rho2).unwrap().values);
    for (i, &l) in spec.values.iter().enumerate() {
        assert!((direct[i] - l).abs() < 1e-9);
    }
}
