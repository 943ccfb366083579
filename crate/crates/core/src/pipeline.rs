//! End-to-end run: ingest, normalize, compare, gate, fuzzify, weight, score, rank, validate.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{
    build_comparison, check, ComparisonMatrix, ConsistencyError, ConsistencyMode,
    ConsistencyReport, DerivationRule, IrMode,
};
use crate::extent::{synthetic_extents, weights, ExtentError, SyntheticExtent, WeightVector};
use crate::ingest::{load_csv, DatasetSchema, IngestError, RatingMatrix};
use crate::matrix::{means, normalize, NormalizedMatrix};
use crate::ranking::{
    recompute_scores, score, validate, Aggregation, RankingError, RankingReport,
};
use crate::tfn::{fuzzify, FuzzyComparisonMatrix, ScaleTable, TfnError};

/// Report scale applied in compatibility mode.
pub const PAPER_COMPAT_REPORT_SCALE: f64 = 0.2;
pub const DEFAULT_MSE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    #[default]
    Standard,
    /// Report scores divided by 5.
    PaperCompat,
}

impl ScaleMode {
    pub fn default_report_scale(self) -> f64 {
        match self {
            ScaleMode::Standard => 1.0,
            ScaleMode::PaperCompat => PAPER_COMPAT_REPORT_SCALE,
        }
    }
}

/// Everything a run depends on. Serialized verbatim into the report as `config_echo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schema: Option<PathBuf>,
    pub scale_table: Option<PathBuf>,
    pub scale_mode: ScaleMode,
    pub ir_mode: IrMode,
    pub derivation: DerivationRule,
    pub aggregate: Aggregation,
    pub report_scale: f64,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub mse_tol: f64,
    pub force: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::new(),
            schema: None,
            scale_table: None,
            scale_mode: ScaleMode::Standard,
            ir_mode: IrMode::Standard,
            derivation: DerivationRule::MeanGap,
            aggregate: Aggregation::Mean,
            report_scale: 1.0,
            out_json: None,
            out_csv: None,
            out_svg: None,
            mse_tol: DEFAULT_MSE_TOLERANCE,
            force: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.input.as_os_str().is_empty() {
            return Err(PipelineError::Config("no input file given".into()));
        }
        if !(self.mse_tol > 0.0 && self.mse_tol.is_finite()) {
            return Err(PipelineError::Config(format!(
                "mse tolerance must be > 0, got {}",
                self.mse_tol
            )));
        }
        if !(self.report_scale > 0.0 && self.report_scale.is_finite()) {
            return Err(PipelineError::Config(format!(
                "report scale must be > 0, got {}",
                self.report_scale
            )));
        }
        Ok(())
    }

    /// Consistency settings implied by `ir_mode`.
    pub fn consistency_mode(&self) -> ConsistencyMode {
        match self.ir_mode {
            IrMode::Standard => ConsistencyMode::standard(),
            IrMode::PaperCompat => ConsistencyMode::paper_compat(),
        }
    }

    pub fn load_schema(&self) -> Result<DatasetSchema, PipelineError> {
        Ok(match &self.schema {
            Some(p) => DatasetSchema::from_json_file(p)?,
            None => DatasetSchema::default(),
        })
    }

    pub fn load_scale_table(&self) -> Result<ScaleTable, PipelineError> {
        match &self.scale_table {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
                Ok(ScaleTable::from_json(&text)?)
            }
            None => Ok(ScaleTable::default()),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("[config] {0}")]
    Config(String),
    #[error("[ingest] {0}")]
    Ingest(#[from] IngestError),
    #[error("[consistency] {0}")]
    Consistency(#[from] ConsistencyError),
    #[error("[fuzzify] {0}")]
    Tfn(#[from] TfnError),
    #[error("[extent] {0}")]
    Extent(#[from] ExtentError),
    #[error("[ranking] {0}")]
    Ranking(#[from] RankingError),
    #[error("[report] {0}")]
    Report(String),
    #[error("[consistency] gate rejected the comparison matrix: CR = {cr:.4} > 0.1")]
    GateRejected { cr: f64, report: ConsistencyReport },
}

impl PipelineError {
    /// 2 for a consistency-gate rejection, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::GateRejected { .. } => 2,
            _ => 1,
        }
    }
}

/// Stages up to and including the consistency check.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub schema: DatasetSchema,
    pub ratings: RatingMatrix,
    pub normalized: NormalizedMatrix,
    pub comparison: ComparisonMatrix,
    pub consistency: ConsistencyReport,
}

impl Prepared {
    pub fn labels(&self) -> &[String] {
        self.ratings.criteria()
    }
}

/// Fuzzy stages.
#[derive(Debug, Clone)]
pub struct Weighted {
    pub fuzzy: FuzzyComparisonMatrix,
    pub extents: SyntheticExtent,
    pub weights: WeightVector,
}

pub fn prepare(config: &RunConfig) -> Result<Prepared, PipelineError> {
    config.validate()?;
    let schema = config.load_schema()?;
    let ratings = load_csv(&config.input, &schema)?;
    let normalized = normalize(&ratings);
    let comparison = build_comparison(&means(&normalized), config.derivation)?;
    let consistency = check(&comparison, config.consistency_mode())?;
    Ok(Prepared {
        schema,
        ratings,
        normalized,
        comparison,
        consistency,
    })
}

/// Returns [`PipelineError::GateRejected`] unless accepted or `force` is set.
pub fn gate(prepared: &Prepared, force: bool) -> Result<(), PipelineError> {
    let c = &prepared.consistency;
    if c.accepted || force {
        Ok(())
    } else {
        Err(PipelineError::GateRejected {
            cr: c.cr,
            report: c.clone(),
        })
    }
}

pub fn weigh(prepared: &Prepared, table: &ScaleTable) -> Result<Weighted, PipelineError> {
    let fuzzy = fuzzify(&prepared.comparison, table)?;
    let extents = synthetic_extents(&fuzzy);
    let weights = weights(&extents, prepared.labels())?;
    Ok(Weighted {
        fuzzy,
        extents,
        weights,
    })
}

/// Full run through validation. Writes nothing.
pub fn run(config: &RunConfig) -> Result<(Prepared, Weighted, RankingReport), PipelineError> {
    let prepared = prepare(config)?;
    let mut consistency = prepared.consistency.clone();
    if !consistency.accepted && config.force {
        consistency
            .warnings
            .push("consistency gate overridden by --force".to_string());
    }
    gate(&prepared, config.force)?;
    let weighted = weigh(&prepared, &config.load_scale_table()?)?;
    let real = score(&prepared.ratings, &weighted.weights, config.aggregate)?;
    let norm = score(&prepared.normalized, &weighted.weights, config.aggregate)?;
    let mut report = RankingReport::assemble(&real, &norm, consistency, weighted.weights.clone())?;
    let oracle = recompute_scores(&prepared.ratings, &weighted.weights.weights, config.aggregate)?;
    report.validation = Some(validate(&report, &oracle, config.mse_tol)?);
    Ok((prepared, weighted, report))
}
