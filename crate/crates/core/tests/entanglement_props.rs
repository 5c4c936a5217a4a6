//! T-measure invariance and Jaynes entropy properties.

use proptest::prelude::*;
use quasipin_core::basis::{BasisParams, RankId, Spin};
use quasipin_core::ci::ground_state;
use quasipin_core::density::{natural_occupations, one_body_rdm, to_natural_basis, AmplitudeTensor};
use quasipin_core::determinants::{self, Determinant};
use quasipin_core::entanglement::{jaynes_entropy, t_measure};
use quasipin_core::linalg::Matrix;

fn tensor6(amps: &[f64]) -> AmplitudeTensor {
    let dets = determinants::enumerate(6).unwrap();
    let n = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
    let entries: Vec<(Determinant, f64)> = dets.into_iter().zip(amps).map(|(d, c)| (d, c / n)).collect();
    AmplitudeTensor::from_dets(6, vec![Spin::Down; 6], &entries)
}

fn rotation(angles: &[f64]) -> Matrix {
    let mut u = Matrix::identity(6);
    for (k, th) in angles.iter().enumerate() {
        let (i, j) = (k % 6, (k * 5 + 1) % 6);
        if i == j {
            continue;
        }
        let g = Matrix::from_fn(6, 6, |a, b| {
            if (a == i && b == i) || (a == j && b == j) {
                th.cos()
            } else if a == i && b == j {
                -th.sin()
            } else if a == j && b == i {
                th.sin()
            } else if a == b {
                1.0
            } else {
                0.0
            }
        });
        u = u.matmul(&g);
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t_is_invariant_under_orthogonal_orbital_changes(
        amps in prop::collection::vec(-1.0..1.0f64, 20),
        angles in prop::collection::vec(-3.2..3.2f64, 9),
        reflect in any::<bool>(),
    ) {
        prop_assume!(amps.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let t = tensor6(&amps);
        let mut u = rotation(&angles);
        if reflect {
            // det U = −1 still leaves T fixed since T scales with det²
            u = u.matmul(&Matrix::diagonal(&[-1.0, 1.0, 1.0, 1.0, 1.0, 1.0]));
        }
        let before = t_measure(&t).unwrap().value;
        let after = t_measure(&t.transform(&u, t.spins.clone())).unwrap().value;
        prop_assert!((before - after).abs() < 1e-11, "{} vs {}", before, after);
    }

    #[test]
    fn t_scales_quartically(amps in prop::collection::vec(-1.0..1.0f64, 20), s in 0.1..3.0f64) {
        prop_assume!(amps.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let t = tensor6(&amps);
        let scaled = AmplitudeTensor::from_dets(6, t.spins.clone(), &t.entries().into_iter().map(|(d, c)| (d, s * c)).collect::<Vec<_>>());
        let (a, b) = (t_measure(&t).unwrap().value, t_measure(&scaled).unwrap().value);
        prop_assert!((b - s.powi(4) * a).abs() < 1e-10 * s.powi(4).max(1.0));
    }

    #[test]
    fn biseparable_states_have_zero_t(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, angles in prop::collection::vec(-3.2..3.2f64, 9)) {
        prop_assume!(a * a + b * b + c * c > 1e-2);
        // α₁ ∧ (two-fermion state): never genuinely tripartite
        let t = AmplitudeTensor::from_dets(
            6,
            vec![Spin::Down; 6],
            &[
                (Determinant::from_labels(1, 2, 3), a),
                (Determinant::from_labels(1, 4, 5), b),
                (Determinant::from_labels(1, 2, 6), c),
            ],
        );
        let u = rotation(&angles);
        prop_assert!(t_measure(&t.transform(&u, t.spins.clone())).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn jaynes_entropy_is_additive_over_merged_spectra(
        x in prop::collection::vec(0.0..1.0f64, 1..8),
        y in prop::collection::vec(0.0..1.0f64, 1..8),
    ) {
        let merged: Vec<f64> = x.iter().chain(&y).copied().collect();
        let (ex, ey, em) = (jaynes_entropy(&x), jaynes_entropy(&y), jaynes_entropy(&merged));
        prop_assert!((em.value - ex.value - ey.value).abs() < 1e-12);
        prop_assert!(em.contributions.iter().all(|&c| c >= 0.0));
        // reordering does not matter
        let mut rev = merged.clone();
        rev.reverse();
        prop_assert!((jaynes_entropy(&rev).value - em.value).abs() < 1e-12);
    }
}

#[test]
fn ghz_state_has_unit_t_in_any_frame() {
    let s = 0.5_f64.sqrt();
    let t = AmplitudeTensor::from_dets(
        6,
        vec![Spin::Down; 6],
        &[(Determinant::from_labels(1, 2, 3), s), (Determinant::from_labels(4, 5, 6), s)],
    );
    let u = rotation(&[0.3, -1.1, 2.0, 0.7, 0.1, -0.4, 1.3]);
    assert!((t_measure(&t.transform(&u, t.spins.clone())).unwrap().value - 1.0).abs() < 1e-12);
}

#[test]
fn rank6_states_t_and_entropy() {
    // the 6a spin blocks {δ₁↑, δ₂↑, ψ₃ᵖ↑} ⊗ ∧²{δ₁↓, ψ₃ᵖ↓, δ₂↓} have no GHZ component
    let s = ground_state(&BasisParams::new(RankId::R6a, 2.674424, 1.319161, 3).unwrap()).unwrap();
    let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
    let t_nat = t_measure(&to_natural_basis(&s, &spec)).unwrap();
    let t_raw = t_measure(&AmplitudeTensor::from_state(&s)).unwrap();
    assert!(t_nat.value.abs() <= 1e-12 && t_raw.value.abs() <= 1e-12);

    let s = ground_state(&BasisParams::new(RankId::R6b, 2.712166, 1.323417, 3).unwrap()).unwrap();
    let spec = natural_occupations(&one_body_rdm(&s)).unwrap();
    let t_nat = t_measure(&to_natural_basis(&s, &spec)).unwrap().value;
    let t_raw = t_measure(&AmplitudeTensor::from_state(&s)).unwrap().value;
    assert!((t_nat - t_raw).abs() < 1e-15);
    assert!(t_nat < 0.0 && t_nat.abs() < 1e-4);
    let j = jaynes_entropy(&spec.values);
    let direct: f64 = spec.values.iter().filter(|&&l| l > 0.0).map(|l| -l * l.ln()).sum();
    assert!((j.value - direct).abs() < 1e-15);
}

#[test]
fn t_needs_six_modes() {
    let s = ground_state(&BasisParams::new(RankId::R7, 2.77, 1.33, 3).unwrap()).unwrap();
    assert!(t_measure(&AmplitudeTensor::from_state(&s)).is_err());
}
