//! Optimized runs of every rank at Z = 3 collected into the result tables.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use quasipin_core::basis::RankId;
use quasipin_core::ci::optimize_screening_with;
use quasipin_core::constraints::{polytope_slack, saturation_sequence};
use quasipin_core::optimize::NelderMeadOptions;
use quasipin_core::{EXACT_ENERGY, HARTREE_FOCK_ENERGY};

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::report::{analyze, into_string, ConstraintEntry, ReportDocument};

pub const TABLE_Z: u32 = 3;
pub const TABLE1_RANKS: [RankId; 3] = [RankId::R3s, RankId::R3d, RankId::R3p];
pub const TABLE2_RANKS: [RankId; 5] = [RankId::R5, RankId::R6a, RankId::R6b, RankId::R7, RankId::R8];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub label: String,
    pub energy: f64,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationRow {
    pub rank: String,
    pub occupations: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeRow {
    pub rank: String,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub rank: usize,
    pub saturated: String,
    pub determinants: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub table1: Vec<EnergyRow>,
    pub table2: Vec<EnergyRow>,
    pub table3: Vec<OccupationRow>,
    pub table4: Vec<ConstraintEntry>,
    pub polytope: Vec<PolytopeRow>,
    pub dimensions: Vec<DimensionRow>,
}

/// Optimizes each rank in turn and analyzes its ground state.
pub fn run_all(ranks: &[RankId], options: &NelderMeadOptions) -> CliResult<Vec<ReportDocument>> {
    ranks
        .iter()
        .map(|&rank| {
            let solved = optimize_screening_with(rank, TABLE_Z, options)
                .map_err(|e| CliError::Numerical(format!("rank {rank}: {e}")))?;
            analyze(&solved.state)
        })
        .collect()
}

fn energy_row(doc: &ReportDocument) -> CliResult<EnergyRow> {
    Ok(EnergyRow {
        label: doc.rank.clone(),
        energy: doc.energy_hartree.ok_or_else(|| CliError::Numerical(format!("rank {}: no energy", doc.rank)))?,
        alpha: Some(doc.alpha),
        gamma: Some(doc.gamma),
    })
}

fn lambdas(doc: &ReportDocument) -> CliResult<Vec<f64>> {
    doc.occupations
        .iter()
        .map(|l| l.ok_or_else(|| CliError::Numerical(format!("rank {}: non-finite occupation", doc.rank))))
        .collect()
}

impl Tables {
    /// Builds the tables from the reports of all eight ranks.
    pub fn from_reports(docs: &[ReportDocument]) -> CliResult<Self> {
        let find = |rank: RankId| {
            docs.iter()
                .find(|d| d.rank == rank.as_str())
                .ok_or_else(|| CliError::Numerical(format!("rank {rank} missing from the runs")))
        };
        let mut table1 = vec![
            EnergyRow { label: "exact".into(), energy: EXACT_ENERGY, alpha: None, gamma: None },
            EnergyRow { label: "hf".into(), energy: HARTREE_FOCK_ENERGY, alpha: None, gamma: None },
        ];
        for r in TABLE1_RANKS {
            table1.push(energy_row(find(r)?)?);
        }
        let mut table2 = Vec::new();
        let mut table3 = Vec::new();
        let mut polytope = Vec::new();
        for r in TABLE2_RANKS {
            let d = find(r)?;
            table2.push(energy_row(d)?);
            table3.push(OccupationRow { rank: d.rank.clone(), occupations: d.occupations.clone() });
            let l = lambdas(d)?;
            polytope.push(PolytopeRow { rank: d.rank.clone(), lambda1: l[0], lambda2: l[1], lambda3: l[2], delta: polytope_slack(&l) });
        }
        let table4 = find(RankId::R8)?.constraints.clone();
        let mut dimensions = Vec::new();
        for rank in [6, 7, 8] {
            for (saturated, determinants) in saturation_sequence(rank)? {
                dimensions.push(DimensionRow { rank, saturated, determinants });
            }
        }
        Ok(Self { table1, table2, table3, table4, polytope, dimensions })
    }

    /// CSV files keyed by file name, energies at six decimals.
    pub fn csv_files(&self) -> CliResult<Vec<(&'static str, String)>> {
        let csv_err = |e: csv::Error| CliError::Numerical(e.to_string());
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        let energies = |rows: &[EnergyRow], first: &str| -> CliResult<String> {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([first, "energy", "alpha", "gamma"]).map_err(csv_err)?;
            for r in rows {
                w.write_record([r.label.clone(), format!("{:.6}", r.energy), opt(r.alpha), opt(r.gamma)]).map_err(csv_err)?;
            }
            into_string(w)
        };

        let mut t3 = csv::Writer::from_writer(Vec::new());
        t3.write_record(["rank", "lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6", "lambda7", "lambda8"])
            .map_err(csv_err)?;
        for r in &self.table3 {
            let mut rec = vec![r.rank.clone()];
            rec.extend((0..8).map(|i| r.occupations.get(i).copied().flatten().map(|x| x.to_string()).unwrap_or_default()));
            t3.write_record(rec).map_err(csv_err)?;
        }

        let mut t4 = csv::Writer::from_writer(Vec::new());
        t4.write_record(["id", "value"]).map_err(csv_err)?;
        for c in &self.table4 {
            t4.write_record([c.id.clone(), c.delta.map(|x| x.to_string()).unwrap_or_default()]).map_err(csv_err)?;
        }

        let mut poly = csv::Writer::from_writer(Vec::new());
        poly.write_record(["rank", "lambda1", "lambda2", "lambda3", "delta"]).map_err(csv_err)?;
        for p in &self.polytope {
            poly.write_record([p.rank.clone(), p.lambda1.to_string(), p.lambda2.to_string(), p.lambda3.to_string(), p.delta.to_string()])
                .map_err(csv_err)?;
        }

        let mut dims = csv::Writer::from_writer(Vec::new());
        dims.write_record(["rank", "saturated", "determinants"]).map_err(csv_err)?;
        for d in &self.dimensions {
            dims.write_record([d.rank.to_string(), d.saturated.clone(), d.determinants.to_string()]).map_err(csv_err)?;
        }

        Ok(vec![
            ("table1.csv", energies(&self.table1, "label")?),
            ("table2.csv", energies(&self.table2, "rank")?),
            ("table3.csv", into_string(t3)?),
            ("table4.csv", into_string(t4)?),
            ("polytope.csv", into_string(poly)?),
            ("dimensions.csv", into_string(dims)?),
        ])
    }

    pub fn write(&self, dir: &Path, format: Format) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let files = match format {
            Format::Csv => self.csv_files()?,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Numerical(e.to_string()))?;
                s.push('\n');
                vec![("tables.json", s)]
            }
        };
        let mut written = Vec::new();
        for (name, content) in files {
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}
