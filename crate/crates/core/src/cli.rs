//! Command-line front end: `fahp rank | check | dump`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::consistency::{DerivationRule, IrMode};
use crate::pipeline::{self, PipelineError, RunConfig, ScaleMode};
use crate::ranking::Aggregation;
use crate::report;
use crate::tfn::Tfn;

#[derive(Debug, Parser)]
#[command(name = "fahp", version, about = "Fuzzy-AHP criterion ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline and write the ranking report.
    Rank(RunArgs),
    /// Run through the consistency stage and print the consistency report.
    Check(RunArgs),
    /// Write one intermediate stage (normalized, comparison, fuzzy, extents, scale-table).
    Dump {
        #[arg(long = "dump", value_name = "STAGE", value_parser = Stage::from_str)]
        stage: Stage,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration (e.g. a report's `config_echo`); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSON schema override: {"id_column": ..., "columns": {"<column>": "<label>"}}.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// JSON scale table replacing the built-in fuzzy scale.
    #[arg(long)]
    scale_table: Option<PathBuf>,
    /// standard | paper_compat
    #[arg(long, value_parser = parse_enum::<ScaleMode>)]
    scale_mode: Option<ScaleMode>,
    /// standard | paper_compat
    #[arg(long, value_parser = parse_enum::<IrMode>)]
    ir_mode: Option<IrMode>,
    /// mean_gap | uniform | cyclic
    #[arg(long, value_parser = parse_enum::<DerivationRule>)]
    derivation: Option<DerivationRule>,
    /// mean | sum
    #[arg(long, value_parser = parse_enum::<Aggregation>)]
    aggregate: Option<Aggregation>,
    #[arg(long)]
    report_scale: Option<f64>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    mse_tol: Option<f64>,
    /// Continue past a failed consistency gate.
    #[arg(long)]
    force: bool,
}

/// Parses snake_case (or kebab-case) enum names through serde.
fn parse_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_")))
        .map_err(|e| e.to_string())
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, PipelineError> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        let from_file = self.config.is_some();
        if let Some(v) = self.input {
            cfg.input = v;
        }
        if self.schema.is_some() {
            cfg.schema = self.schema;
        }
        if self.scale_table.is_some() {
            cfg.scale_table = self.scale_table;
        }
        if let Some(v) = self.scale_mode {
            cfg.scale_mode = v;
            if self.report_scale.is_none() {
                cfg.report_scale = v.default_report_scale();
            }
        } else if !from_file && self.report_scale.is_none() {
            cfg.report_scale = cfg.scale_mode.default_report_scale();
        }
        if let Some(v) = self.ir_mode {
            cfg.ir_mode = v;
        }
        if let Some(v) = self.derivation {
            cfg.derivation = v;
        }
        if let Some(v) = self.aggregate {
            cfg.aggregate = v;
        }
        if let Some(v) = self.report_scale {
            cfg.report_scale = v;
        }
        if self.out_json.is_some() {
            cfg.out_json = self.out_json;
        }
        if self.out_csv.is_some() {
            cfg.out_csv = self.out_csv;
        }
        if self.out_svg.is_some() {
            cfg.out_svg = self.out_svg;
        }
        if let Some(v) = self.mse_tol {
            cfg.mse_tol = v;
        }
        cfg.force |= self.force;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Intermediate artifacts available to `dump`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Normalized,
    Comparison,
    Fuzzy,
    Extents,
    ScaleTable,
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "normalized" => Ok(Stage::Normalized),
            "comparison" => Ok(Stage::Comparison),
            "fuzzy" => Ok(Stage::Fuzzy),
            "extents" => Ok(Stage::Extents),
            "scale-table" | "scale_table" => Ok(Stage::ScaleTable),
            other => Err(format!(
                "unknown stage `{other}` (expected normalized, comparison, fuzzy, extents, scale-table)"
            )),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Rank(args) => args.into_config().and_then(|c| cmd_rank(&c, stdout)),
        Command::Check(args) => args.into_config().and_then(|c| cmd_check(&c, stdout)),
        Command::Dump { stage, out, run } => run
            .into_config()
            .and_then(|c| cmd_dump(&c, stage, out.as_deref(), stdout)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error {e}");
            e.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|e| PipelineError::Report(format!("{}: {e}", path.display())))
}

fn io_err(e: std::io::Error) -> PipelineError {
    PipelineError::Report(e.to_string())
}

/// Full pipeline; writes the requested report files. JSON goes to stdout when no `--out-json`.
pub fn cmd_rank(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), PipelineError> {
    let (_, _, ranking) = pipeline::run(config)?;
    let scale = config.report_scale;
    let json = report::to_json(&ranking, scale, config);
    match &config.out_json {
        Some(p) => write_file(p, json.as_bytes())?,
        None => stdout.write_all(json.as_bytes()).map_err(io_err)?,
    }
    if let Some(p) = &config.out_csv {
        let mut buf = Vec::new();
        report::write_csv(&ranking, scale, &mut buf).map_err(|e| PipelineError::Report(e.to_string()))?;
        write_file(p, &buf)?;
    }
    if let Some(p) = &config.out_svg {
        write_file(p, report::render_svg(&ranking, scale).as_bytes())?;
    }
    if config.out_json.is_some() {
        for row in &ranking.rows {
            writeln!(
                stdout,
                "{:>2}  {:<24} {:>8.4} {:>8.4}",
                row.rank,
                row.label,
                report::round_report(row.score_real * scale),
                report::round_report(row.score_normalized * scale)
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}

/// Prints the consistency report; fails with the gate error when it is rejected.
pub fn cmd_check(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), PipelineError> {
    let prepared = pipeline::prepare(config)?;
    let json = serde_json::to_string_pretty(&prepared.consistency).expect("report serializes");
    writeln!(stdout, "{json}").map_err(io_err)?;
    pipeline::gate(&prepared, config.force)
}

#[derive(Serialize)]
struct MatrixDump<'a, T: Serialize> {
    labels: &'a [String],
    matrix: Vec<Vec<T>>,
}

fn render_stage(config: &RunConfig, stage: Stage) -> Result<Vec<u8>, PipelineError> {
    if stage == Stage::ScaleTable {
        return Ok((config.load_scale_table()?.to_json() + "\n").into_bytes());
    }
    let prepared = pipeline::prepare(config)?;
    let labels = prepared.labels();
    Ok(match stage {
        Stage::Normalized => {
            let columns: Vec<String> = prepared
                .schema
                .criteria_columns
                .iter()
                .map(|c| c.column.clone())
                .collect();
            let mut buf = Vec::new();
            prepared
                .normalized
                .write_csv(&mut buf, &prepared.schema.id_column, &columns)
                .map_err(|e| PipelineError::Report(e.to_string()))?;
            buf
        }
        Stage::Comparison => json(&MatrixDump {
            labels,
            matrix: prepared.comparison.to_rows(),
        }),
        Stage::Fuzzy => {
            let weighted = pipeline::weigh(&prepared, &config.load_scale_table()?)?;
            json(&MatrixDump::<Tfn> {
                labels,
                matrix: weighted.fuzzy.to_rows(),
            })
        }
        Stage::Extents => {
            let weighted = pipeline::weigh(&prepared, &config.load_scale_table()?)?;
            let mut wtr = csv::Writer::from_writer(Vec::new());
            let mut write = || -> Result<(), csv::Error> {
                wtr.write_record(["label", "l", "m", "u"])?;
                for (label, s) in labels.iter().zip(&weighted.extents.0) {
                    wtr.write_record([
                        label.clone(),
                        s.l.to_string(),
                        s.m.to_string(),
                        s.u.to_string(),
                    ])?;
                }
                wtr.flush()?;
                Ok(())
            };
            write().map_err(|e| PipelineError::Report(e.to_string()))?;
            wtr.into_inner().map_err(|e| PipelineError::Report(e.to_string()))?
        }
        Stage::ScaleTable => unreachable!(),
    })
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("stage serializes");
    s.push('\n');
    s.into_bytes()
}

/// Writes one intermediate artifact. Runs regardless of the consistency gate.
pub fn cmd_dump(
    config: &RunConfig,
    stage: Stage,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), PipelineError> {
    let bytes = render_stage(config, stage)?;
    match out {
        Some(p) => write_file(p, &bytes),
        None => stdout.write_all(&bytes).map_err(io_err),
    }
}
