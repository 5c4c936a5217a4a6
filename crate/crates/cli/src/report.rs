//! The analysis document for one ground state and its JSON/CSV forms.

use serde::{Deserialize, Serialize};

use quasipin_core::constraints::{self, ConstraintCatalog};
use quasipin_core::density::{natural_occupations, one_body_rdm, to_natural_basis};
use quasipin_core::entanglement::{jaynes_entropy, t_measure};
use quasipin_core::{CIState, EXACT_ENERGY, HARTREE_FOCK_ENERGY};

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub id: String,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TMeasureEntry {
    pub value: Option<f64>,
    pub magnitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionEntry {
    pub dets: Vec<String>,
    /// Constraint whose Δ enters the bounds.
    pub constraint: String,
    pub norm: Option<f64>,
    pub xi: Option<f64>,
    /// Absent when ξ is outside the bound's domain.
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEnergies {
    pub exact: f64,
    pub hf: f64,
}

impl Default for ReferenceEnergies {
    fn default() -> Self {
        Self { exact: EXACT_ENERGY, hf: HARTREE_FOCK_ENERGY }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub rank: String,
    pub z: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub energy_hartree: Option<f64>,
    pub doublet_dimension: usize,
    pub occupations: Vec<Option<f64>>,
    pub constraints: Vec<ConstraintEntry>,
    pub borland_dennis_residuals: Option<Vec<Option<f64>>>,
    pub quasi_pinning_ratio: Option<f64>,
    pub t_measure: Option<TMeasureEntry>,
    pub jaynes_entropy: Option<f64>,
    pub projection: Option<ProjectionEntry>,
    pub reference_energies: ReferenceEnergies,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Saturation set whose determinants span the pinned subspace, and the
/// constraint whose Δ bounds the projection onto it.
fn pinned_set(rank: usize) -> Option<(&'static [&'static str], &'static str)> {
    match rank {
        6 => Some((&["BD1", "BD2", "BD3", "Delta"], "Delta")),
        7 => Some((&["1", "2"], "2")),
        _ => None,
    }
}

pub fn analyze(state: &CIState) -> CliResult<ReportDocument> {
    let spectrum = natural_occupations(&one_body_rdm(state))?;
    let m = spectrum.len();
    let tensor = to_natural_basis(state, &spectrum);

    let report = match ConstraintCatalog::for_rank(m) {
        Ok(catalog) => Some(constraints::evaluate(&spectrum.values, &catalog)?),
        Err(_) => None,
    };
    let constraint_entries = report
        .as_ref()
        .map(|r| r.values.iter().map(|v| ConstraintEntry { id: v.id.clone(), delta: finite(v.delta) }).collect())
        .unwrap_or_default();

    let t = if m == 6 {
        let t = t_measure(&tensor)?;
        Some(TMeasureEntry { value: finite(t.value), magnitude: finite(t.magnitude()) })
    } else {
        None
    };

    let projection = match (pinned_set(m), report.as_ref()) {
        (Some((saturated, id)), Some(r)) => {
            let dets = constraints::selection_rule_dets(m, saturated)?;
            let norm = constraints::projection_norm(&tensor, &dets);
            let delta = r.delta(id).unwrap_or(f64::NAN);
            let (lower, upper) = match constraints::projection_bounds(&spectrum.values, m, delta) {
                Ok(b) => (finite(b.lower), finite(b.upper)),
                Err(quasipin_core::Error::OutOfDomain { .. }) => (None, None),
                Err(e) => return Err(e.into()),
            };
            Some(ProjectionEntry {
                dets: dets.iter().map(ToString::to_string).collect(),
                constraint: id.to_string(),
                norm: finite(norm),
                xi: finite(constraints::xi(&spectrum.values)),
                lower_bound: lower,
                upper_bound: upper,
            })
        }
        _ => None,
    };

    Ok(ReportDocument {
        rank: state.rank.to_string(),
        z: state.params.z,
        alpha: state.params.alpha,
        gamma: state.params.gamma,
        energy_hartree: finite(state.energy),
        doublet_dimension: state.doublet_dimension,
        occupations: spectrum.values.iter().map(|&l| finite(l)).collect(),
        constraints: constraint_entries,
        borland_dennis_residuals: report
            .as_ref()
            .and_then(|r| r.borland_dennis_residuals)
            .map(|bd| bd.iter().map(|&x| finite(x)).collect()),
        quasi_pinning_ratio: report.as_ref().and_then(|r| r.quasi_pinning_ratio).and_then(finite),
        t_measure: t,
        jaynes_entropy: finite(jaynes_entropy(&spectrum.values).value),
        projection,
        reference_energies: ReferenceEnergies::default(),
    })
}

impl ReportDocument {
    /// Flattened `(key, value)` pairs for the CSV form; absent values are skipped.
    pub fn rows(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut num = |k: String, v: Option<f64>| {
            if let Some(v) = v {
                out.push((k, v.to_string()));
            }
        };
        num("z".into(), Some(f64::from(self.z)));
        num("alpha".into(), Some(self.alpha));
        num("gamma".into(), Some(self.gamma));
        num("energy_hartree".into(), self.energy_hartree);
        num("doublet_dimension".into(), Some(self.doublet_dimension as f64));
        for (i, l) in self.occupations.iter().enumerate() {
            num(format!("lambda_{}", i + 1), *l);
        }
        for c in &self.constraints {
            num(format!("delta_{}", c.id), c.delta);
        }
        if let Some(bd) = &self.borland_dennis_residuals {
            for (i, x) in bd.iter().enumerate() {
                num(format!("borland_dennis_{}", i + 1), *x);
            }
        }
        num("quasi_pinning_ratio".into(), self.quasi_pinning_ratio);
        if let Some(t) = &self.t_measure {
            num("t_measure".into(), t.value);
            num("t_measure_magnitude".into(), t.magnitude);
        }
        num("jaynes_entropy".into(), self.jaynes_entropy);
        if let Some(p) = &self.projection {
            num("projection_norm".into(), p.norm);
            num("projection_xi".into(), p.xi);
            num("projection_lower_bound".into(), p.lower_bound);
            num("projection_upper_bound".into(), p.upper_bound);
        }
        num("reference_exact".into(), Some(self.reference_energies.exact));
        num("reference_hf".into(), Some(self.reference_energies.hf));
        out.insert(0, ("rank".into(), self.rank.clone()));
        out
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Numerical(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// `key,value` table with a fixed header.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Numerical(e.to_string());
        w.write_record(["key", "value"]).map_err(csv_err)?;
        for (k, v) in self.rows() {
            w.write_record([k, v]).map_err(csv_err)?;
        }
        into_string(w)
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Numerical(e.to_string()))
}
