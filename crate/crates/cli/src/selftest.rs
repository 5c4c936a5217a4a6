//! Oracle and invariant checks runnable from the command line.

use quasipin_core::basis::{self, BasisParams, IntegralTable, RankId};
use quasipin_core::ci::{self, ground_state, starting_point, Problem};
use quasipin_core::constraints::{catalog_consistency, evaluate_spectrum, pauli_bound_from_rank7};
use quasipin_core::density::{duality_pairs, natural_occupations, one_body_rdm, to_natural_basis};
use quasipin_core::determinants::Determinant;

pub const SUITES: [&str; 5] = ["quadrature", "slater-condon", "duality", "borland-dennis", "catalog"];

/// Size of the fault added to every nonzero primitive integral.
pub const FAULT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { suite, name: name.into(), passed, detail: detail.into() }
    }

    pub fn line(&self) -> String {
        format!("{} {} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.suite, self.name, self.detail)
    }
}

fn reference_params(rank: RankId) -> quasipin_core::Result<BasisParams> {
    let [a, g] = starting_point(3);
    BasisParams::new(rank, a, g, 3)
}

fn perturb(table: &IntegralTable) -> IntegralTable {
    let bump = |m: &quasipin_core::linalg::Matrix| {
        quasipin_core::linalg::Matrix::from_fn(m.rows(), m.cols(), |i, j| if m[(i, j)] != 0.0 { m[(i, j)] + FAULT } else { 0.0 })
    };
    IntegralTable {
        kinetic: bump(&table.kinetic),
        nuclear: bump(&table.nuclear),
        eri: table.eri.perturbed(FAULT),
        spins: table.spins.clone(),
    }
}

fn quadrature(inject_fault: bool) -> Vec<Check> {
    RankId::ALL
        .iter()
        .map(|&rank| {
            let run = || -> quasipin_core::Result<usize> {
                let p = Problem::build(&reference_params(rank)?, false)?;
                let table = if inject_fault { perturb(&p.integrals.primitive) } else { p.integrals.primitive.clone() };
                basis::quadrature_check(&p.primitives, &table)
            };
            match run() {
                Ok(n) => Check::new("quadrature", format!("rank {rank}"), true, format!("{n} integrals within tolerance")),
                Err(e) => Check::new("quadrature", format!("rank {rank}"), false, e.to_string()),
            }
        })
        .collect()
}

fn parity(p: [usize; 3]) -> f64 {
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `⟨D|H|D′⟩` summed over all orderings of the ket's product states.
fn permutation_element(d: &Determinant, e: &Determinant, t: &IntegralTable, z: f64) -> f64 {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let (a, b) = (d.0, e.0);
    let h = |p: usize, q: usize| t.kinetic[(p, q)] - z * t.nuclear[(p, q)];
    let same = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
    PERMS
        .iter()
        .map(|perm| {
            let k = [b[perm[0]], b[perm[1]], b[perm[2]]];
            let mut v = 0.0;
            for i in 0..3 {
                let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                v += h(a[i], k[i]) * same(a[j], k[j]) * same(a[l], k[l]);
            }
            for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                v += t.eri.get(a[i], k[i], a[j], k[j]) * same(a[l], k[l]);
            }
            parity(*perm) * v
        })
        .sum()
}

fn slater_condon() -> Vec<Check> {
    [RankId::R3s, RankId::R3p, RankId::R3d, RankId::R5, RankId::R6a, RankId::R6b]
        .iter()
        .map(|&rank| {
            let run = || -> quasipin_core::Result<f64> {
                let p = Problem::build(&reference_params(rank)?, false)?;
                let dets = &p.adapted.determinants;
                let t = &p.integrals.orthonormal;
                let h = ci::hamiltonian(dets, t, 3.0);
                let mut worst: f64 = 0.0;
                for (i, d) in dets.iter().enumerate() {
                    for (j, e) in dets.iter().enumerate() {
                        worst = worst.max((h[(i, j)] - permutation_element(d, e, t, 3.0)).abs());
                    }
                }
                Ok(worst)
            };
            match run() {
                Ok(w) => Check::new("slater-condon", format!("rank {rank}"), w <= 1e-10, format!("max deviation {w:.3e}")),
                Err(e) => Check::new("slater-condon", format!("rank {rank}"), false, e.to_string()),
            }
        })
        .collect()
}

fn binom2(n: usize) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

fn duality() -> Vec<Check> {
    let mut out = Vec::new();
    for rank in RankId::ALL {
        let run = || -> quasipin_core::Result<(f64, f64)> {
            let s = ground_state(&reference_params(rank)?)?;
            let spec = natural_occupations(&one_body_rdm(&s))?;
            let d = duality_pairs(&to_natural_basis(&s, &spec), &spec)?;
            let m = spec.len();
            let rho2 = d.rho2_spectrum()?;
            let spectral = (0..rho2.len())
                .map(|i| (rho2[i] - spec.values.get(i).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            let traces = (d.eta1.trace() - (m as f64 - 3.0))
                .abs()
                .max((d.eta2.trace() - binom2(m - 3)).abs())
                .max(d.eta2_contraction().sub(&d.expected_contraction()).max_abs());
            Ok((spectral, traces))
        };
        match run() {
            Ok((sp, tr)) => {
                out.push(Check::new("duality", format!("rank {rank} two-body spectrum"), sp <= 1e-9, format!("max deviation {sp:.3e}")));
                out.push(Check::new("duality", format!("rank {rank} hole trace rules"), tr <= 1e-10, format!("max deviation {tr:.3e}")));
            }
            Err(e) => out.push(Check::new("duality", format!("rank {rank}"), false, e.to_string())),
        }
    }
    let idem = || -> quasipin_core::Result<f64> {
        let s = ground_state(&reference_params(RankId::R5)?)?;
        let spec = natural_occupations(&one_body_rdm(&s))?;
        let e = duality_pairs(&to_natural_basis(&s, &spec), &spec)?.eta2;
        Ok(e.matmul(&e).sub(&e).max_abs())
    };
    out.push(match idem() {
        Ok(w) => Check::new("duality", "rank 5 two-hole idempotency", w <= 1e-9, format!("max deviation {w:.3e}")),
        Err(e) => Check::new("duality", "rank 5 two-hole idempotency", false, e.to_string()),
    });
    out
}

fn borland_dennis() -> Vec<Check> {
    [RankId::R6a, RankId::R6b]
        .iter()
        .map(|&rank| {
            let run = || -> quasipin_core::Result<f64> {
                let s = ground_state(&reference_params(rank)?)?;
                let report = evaluate_spectrum(&natural_occupations(&one_body_rdm(&s))?)?;
                Ok(report.borland_dennis_residuals.map_or(f64::INFINITY, |bd| bd.iter().fold(0.0, |a, x| a.max(x.abs()))))
            };
            match run() {
                Ok(w) => Check::new("borland-dennis", format!("rank {rank}"), w <= 1e-9, format!("max residual {w:.3e}")),
                Err(e) => Check::new("borland-dennis", format!("rank {rank}"), false, e.to_string()),
            }
        })
        .collect()
}

fn catalog() -> Vec<Check> {
    let mut out = Vec::new();
    for (high, low) in [(7, 6), (8, 7)] {
        out.push(match catalog_consistency(high, low) {
            Ok(r) => Check::new(
                "catalog",
                format!("rank {high} implies rank {low}"),
                r.is_consistent(),
                format!("{} derived, underivable {:?}", r.derived.len(), r.underivable),
            ),
            Err(e) => Check::new("catalog", format!("rank {high} implies rank {low}"), false, e.to_string()),
        });
    }
    let pauli = pauli_bound_from_rank7();
    out.push(Check::new("catalog", "Pauli bound from rank 7", pauli.is_some(), if pauli.is_some() { "derived" } else { "not derivable" }));
    out
}

/// Suites whose names contain `filter` (all when `None`).
pub fn selected(filter: Option<&str>) -> Vec<&'static str> {
    SUITES.iter().copied().filter(|s| filter.is_none_or(|f| s.contains(f))).collect()
}

pub fn run(suites: &[&str], inject_fault: bool) -> Vec<Check> {
    let mut out = Vec::new();
    for &suite in suites {
        out.extend(match suite {
            "quadrature" => quadrature(inject_fault),
            "slater-condon" => slater_condon(),
            "duality" => duality(),
            "borland-dennis" => borland_dennis(),
            "catalog" => catalog(),
            _ => Vec::new(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_by_substring() {
        assert_eq!(selected(Some("duality")), ["duality"]);
        assert_eq!(selected(None).len(), 5);
        assert!(selected(Some("nothing")).is_empty());
    }

    #[test]
    fn catalog_and_borland_dennis_suites_pass() {
        let checks = run(&["catalog", "borland-dennis"], false);
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn fault_is_detected() {
        let p = Problem::build(&reference_params(RankId::R3s).unwrap(), false).unwrap();
        let bad = perturb(&p.integrals.primitive);
        assert!(basis::quadrature_check(&p.primitives, &bad).is_err());
        assert!(basis::quadrature_check(&p.primitives, &p.integrals.primitive).is_ok());
    }
}
