//! Optimized rank-6 runs across nuclear charges.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quasipin_core::basis::RankId;
use quasipin_core::ci::optimize_screening_with;
use quasipin_core::constraints::evaluate_spectrum;
use quasipin_core::density::{natural_occupations, one_body_rdm};
use quasipin_core::optimize::NelderMeadOptions;

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::report::into_string;

pub const HEADER: [&str; 8] = ["z", "alpha", "gamma", "energy", "delta", "lambda6", "delta_over_lambda6", "error"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZRow {
    pub z: u32,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub energy: Option<f64>,
    pub delta: Option<f64>,
    pub lambda6: Option<f64>,
    pub delta_over_lambda6: Option<f64>,
    pub error: Option<String>,
}

impl ZRow {
    fn failed(z: u32, msg: String) -> Self {
        Self { z, alpha: None, gamma: None, energy: None, delta: None, lambda6: None, delta_over_lambda6: None, error: Some(msg) }
    }
}

fn run_one(rank: RankId, z: u32, options: &NelderMeadOptions) -> ZRow {
    let attempt = || -> quasipin_core::Result<ZRow> {
        let solved = optimize_screening_with(rank, z, options)?;
        let state = &solved.state;
        let spectrum = natural_occupations(&one_body_rdm(state))?;
        let report = evaluate_spectrum(&spectrum)?;
        let delta = report.delta("Delta").unwrap_or(f64::NAN);
        let lambda6 = spectrum.lambda(6);
        let ratio = delta / lambda6;
        let values = [state.params.alpha, state.params.gamma, state.energy, delta, lambda6, ratio];
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(quasipin_core::Error::NoConvergence(format!("non-finite result {bad}")));
        }
        Ok(ZRow {
            z,
            alpha: Some(values[0]),
            gamma: Some(values[1]),
            energy: Some(values[2]),
            delta: Some(delta),
            lambda6: Some(lambda6),
            delta_over_lambda6: Some(ratio),
            error: None,
        })
    };
    attempt().unwrap_or_else(|e| ZRow::failed(z, e.to_string()))
}

/// One row per Z in ascending order. Charges run concurrently.
pub fn scan(rank: RankId, z_min: u32, z_max: u32, options: &NelderMeadOptions) -> Vec<ZRow> {
    (z_min..=z_max).collect::<Vec<_>>().into_par_iter().map(|z| run_one(rank, z, options)).collect()
}

pub fn render(rows: &[ZRow], format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| CliError::Numerical(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Numerical(e.to_string());
            w.write_record(HEADER).map_err(csv_err)?;
            let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for r in rows {
                w.write_record([
                    r.z.to_string(),
                    cell(r.alpha),
                    cell(r.gamma),
                    cell(r.energy),
                    cell(r.delta),
                    cell(r.lambda6),
                    cell(r.delta_over_lambda6),
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            into_string(w)
        }
    }
}
