use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use catdilemma::coverage::{coverage_from_oracle_mask, Table2Config};
use catdilemma::feasibility::{verify_witness, WitnessCheck};
use catdilemma::{
    empirical_coverage, feasible, ClassFilter, CoverageReport, FrequencyTriple, Model, Table2,
    TriangleGrid, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Cli, Command, Flags, FormatArg, OracleArgs, RunConfig};
use crate::error::CliError;
use crate::parallel;
use crate::records::{self, PointRecord};
use crate::svg::Panel;

const STDOUT: &str = "<stdout>";

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sample(flags) => cmd_sample(flags),
        Command::Coverage(flags) => cmd_coverage(flags),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Figure(flags) => cmd_figure(flags),
        Command::Report(flags) => cmd_report(flags),
    }
}

/// Runs `body` against the output file, or stdout when there is none.
fn with_output(
    out: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| CliError::io(STDOUT, e))
        }
    }
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<(), CliError> {
    with_output(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

fn reject_format(command: &str, format: FormatArg) -> CliError {
    CliError::usage(format!("{command} cannot write {format:?} output").to_lowercase())
}

pub fn cmd_sample(flags: Flags) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(flags, 10_000)?;
    let [model] = cfg.models()[..] else {
        return Err(CliError::usage(
            "sample writes one model per file; pass --model classical, prequant or quant",
        ));
    };
    let format = cfg.format.unwrap_or(FormatArg::Csv);
    if format == FormatArg::Svg {
        return Err(reject_format("sample", format));
    }
    let batch = parallel::sample(model, cfg.samples, cfg.seed);
    let rows: Vec<PointRecord> = batch
        .strategies
        .par_iter()
        .map(PointRecord::from_strategy)
        .collect();
    with_output(cfg.out.as_deref(), |w| match format {
        FormatArg::Json => records::write_json_lines(w, rows),
        _ => records::write_csv(w, model, rows).map_err(io::Error::other),
    })
}

/// One line of the coverage output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRecord {
    pub model: &'static str,
    pub class: &'static str,
    pub method: &'static str,
    pub resolution: usize,
    pub fraction: f64,
    pub covered_cells: usize,
    pub sample_count: Option<usize>,
    pub seed: Option<u64>,
}

impl From<&CoverageReport> for CoverageRecord {
    fn from(r: &CoverageReport) -> Self {
        CoverageRecord {
            model: r.model.name(),
            class: r.class.name(),
            method: r.method.name(),
            resolution: r.resolution,
            fraction: r.fraction,
            covered_cells: r.covered_cells,
            sample_count: r.sample_count,
            seed: r.seed,
        }
    }
}

pub fn coverage_reports(cfg: &RunConfig) -> Vec<CoverageReport> {
    let mut reports = Vec::new();
    for model in cfg.models() {
        let batch = cfg
            .method
            .empirical()
            .then(|| parallel::sample(model, cfg.samples, cfg.seed));
        let eg = TriangleGrid::new(cfg.empirical_grid());
        let og = TriangleGrid::new(cfg.oracle_grid());
        for &class in &cfg.classes {
            if let Some(batch) = &batch {
                reports.push(empirical_coverage(batch, &eg, class));
            }
            if cfg.method.oracle() {
                let mask = parallel::oracle_mask(&og, model, class);
                reports.push(coverage_from_oracle_mask(&og, model, class, &mask));
            }
        }
    }
    reports
}

pub fn cmd_coverage(flags: Flags) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(flags, 100_000)?;
    let format = cfg.format.unwrap_or(FormatArg::Json);
    if format == FormatArg::Svg {
        return Err(reject_format("coverage", format));
    }
    let rows: Vec<CoverageRecord> = coverage_reports(&cfg).iter().map(Into::into).collect();
    match format {
        FormatArg::Csv => with_output(cfg.out.as_deref(), |w| {
            let mut csv = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(w);
            for r in &rows {
                csv.serialize(r).map_err(io::Error::other)?;
            }
            csv.flush()
        }),
        _ => write_json(cfg.out.as_deref(), &rows),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    /// Largest `|ω_k - 1/3|` at the witness.
    pub occupancy: f64,
    /// Distance of the witness from the Bloch sphere (quantized model only).
    pub sphere: Option<f64>,
    /// Largest gap between the lifted strategy's conditionals and the witness.
    pub lift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRecord {
    pub model: &'static str,
    pub class: &'static str,
    pub q: [f64; 3],
    pub feasible: bool,
    pub witness: Option<Triple>,
    pub witness_class: Option<&'static str>,
    /// The witness as a strategy of the model itself.
    pub strategy: Option<Vec<f64>>,
    pub residuals: Option<Residuals>,
}

fn oracle_record(q: &FrequencyTriple, model: Model, class: ClassFilter) -> OracleRecord {
    let verdict: Verdict = feasible(q, model, class);
    let check: Option<WitnessCheck> = verify_witness(q, model, class, &verdict);
    OracleRecord {
        model: model.name(),
        class: class.name(),
        q: q.as_array(),
        feasible: verdict.feasible,
        witness: verdict.witness.map(|w| Triple {
            alpha: w.alpha,
            beta: w.beta,
            gamma: w.gamma,
        }),
        witness_class: check.map(|c| c.class.name()),
        strategy: verdict.strategy.map(|s| s.coords().to_vec()),
        residuals: check.map(|c| Residuals {
            occupancy: c.occupancy_residual,
            sphere: c.sphere_residual,
            lift: c.lift_residual,
        }),
    }
}

/// Accepts a triple of non-negative reals summing to one within 1e-9 and
/// renormalizes it.
pub fn parse_frequencies(q0: f64, q1: f64, q2: f64) -> Result<FrequencyTriple, CliError> {
    let q = [q0, q1, q2];
    if q.iter().any(|v| !v.is_finite()) {
        return Err(CliError::usage("frequencies must be finite"));
    }
    if q.iter().any(|&v| v < 0.0) {
        return Err(CliError::usage(format!(
            "frequencies must be non-negative, got {q:?}"
        )));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(CliError::usage(format!(
            "frequencies must sum to 1, got {sum}"
        )));
    }
    FrequencyTriple::normalized(q0, q1, q2).map_err(|e| CliError::usage(e.to_string()))
}

pub fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args.flags, 1)?;
    if let Some(f @ (FormatArg::Csv | FormatArg::Svg)) = cfg.format {
        return Err(reject_format("oracle", f));
    }
    let q = parse_frequencies(args.q0, args.q1, args.q2)?;
    let mut out = Vec::new();
    for model in cfg.models() {
        for &class in &cfg.classes {
            out.push(oracle_record(&q, model, class));
        }
    }
    write_json(cfg.out.as_deref(), &out)
}

pub fn panel_file_name(model: Model, class: ClassFilter) -> String {
    format!("{}-{}.svg", model.name(), class.name())
}

pub fn cmd_figure(flags: Flags) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(flags, 10_000)?;
    if let Some(f @ (FormatArg::Csv | FormatArg::Json)) = cfg.format {
        return Err(reject_format("figure", f));
    }
    let models = cfg.models();
    let panels = models.len() * cfg.classes.len();
    if panels > 1 && cfg.out.is_none() {
        return Err(CliError::usage(format!(
            "{panels} panels need an output directory; pass --out"
        )));
    }
    if panels > 1 {
        let dir = cfg.out.as_deref().expect("checked above");
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let grid = TriangleGrid::new(cfg.grid.unwrap_or(crate::config::DEFAULT_EMPIRICAL_GRID));

    for model in models {
        let mapped = if cfg.method.empirical() {
            parallel::map_batch(&parallel::sample(model, cfg.samples, cfg.seed))
        } else {
            Vec::new()
        };
        for &class in &cfg.classes {
            let points: Vec<FrequencyTriple> = mapped
                .iter()
                .filter(|m| class.matches(m.class))
                .filter_map(|m| m.q)
                .collect();
            let mask = cfg
                .method
                .oracle()
                .then(|| parallel::oracle_mask(&grid, model, class));
            let svg = Panel {
                model,
                class,
                labels: cfg.labels,
                cells: mask.as_deref().map(|m| (&grid, m)),
                points: &points,
            }
            .render();
            let target: Option<PathBuf> = match &cfg.out {
                Some(dir) if panels > 1 => Some(dir.join(panel_file_name(model, class))),
                other => other.clone(),
            };
            with_output(target.as_deref(), |w| w.write_all(svg.as_bytes()))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFractions {
    pub all: f64,
    pub intransitive: f64,
    pub transitive: f64,
}

impl From<[f64; 3]> for ClassFractions {
    fn from([all, intransitive, transitive]: [f64; 3]) -> Self {
        ClassFractions {
            all,
            intransitive,
            transitive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: &'static str,
    pub published: ClassFractions,
    pub oracle: ClassFractions,
    pub empirical: ClassFractions,
    /// `oracle - published`.
    pub oracle_delta: ClassFractions,
    /// `empirical - published`.
    pub empirical_delta: ClassFractions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub oracle_resolution: usize,
    pub empirical_resolution: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ReportConfig,
    pub rows: Vec<ReportRow>,
    /// Largest `|prequant - classical|` over the empirical fractions.
    pub prequant_classical_delta: f64,
}

impl From<&Table2> for Report {
    fn from(t: &Table2) -> Self {
        let rows = t
            .rows
            .iter()
            .map(|r| {
                let oracle = r.oracle.map(|c| c.fraction);
                let empirical = r.empirical.map(|c| c.fraction);
                let diff =
                    |v: [f64; 3]| -> [f64; 3] { std::array::from_fn(|i| v[i] - r.published[i]) };
                ReportRow {
                    model: r.model.name(),
                    published: r.published.into(),
                    oracle: oracle.into(),
                    empirical: empirical.into(),
                    oracle_delta: diff(oracle).into(),
                    empirical_delta: diff(empirical).into(),
                }
            })
            .collect();
        Report {
            config: ReportConfig {
                oracle_resolution: t.config.oracle_resolution,
                empirical_resolution: t.config.empirical_resolution,
                samples: t.config.samples,
                seed: t.config.seed,
            },
            rows,
            prequant_classical_delta: t.prequant_classical_delta,
        }
    }
}

pub fn report_text(t: &Table2) -> String {
    let mut s = format!(
        "oracle R={}, empirical R={} with n={} (seed {})\n\n",
        t.config.oracle_resolution, t.config.empirical_resolution, t.config.samples, t.config.seed
    );
    s.push_str(&format!(
        "{:<10} {:<13} {:>9} {:>8} {:>8} {:>9} {:>8}\n",
        "model", "class", "published", "oracle", "delta", "empirical", "delta"
    ));
    for r in &t.rows {
        for (i, class) in ClassFilter::EACH.iter().enumerate() {
            let p = r.published[i];
            let o = r.oracle[i].fraction;
            let e = r.empirical[i].fraction;
            s.push_str(&format!(
                "{:<10} {:<13} {:>8.1}% {:>7.1}% {:>+6.1}pp {:>8.1}% {:>+6.1}pp\n",
                r.model.name(),
                class.name(),
                100.0 * p,
                100.0 * o,
                100.0 * (o - p),
                100.0 * e,
                100.0 * (e - p),
            ));
        }
    }
    s.push_str(&format!(
        "\nlargest prequant/classical empirical difference: {:.1}pp\n",
        100.0 * t.prequant_classical_delta
    ));
    s
}

/// Prints the text table and writes the JSON to `--out`. With `--format json`
/// and no `--out`, the JSON goes to stdout in place of the table.
pub fn cmd_report(flags: Flags) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(flags, 100_000)?;
    if let Some(f @ (FormatArg::Csv | FormatArg::Svg)) = cfg.format {
        return Err(reject_format("report", f));
    }
    let table = parallel::table2_report(Table2Config {
        oracle_resolution: cfg.oracle_grid(),
        empirical_resolution: cfg.empirical_grid(),
        samples: cfg.samples,
        seed: cfg.seed,
    });
    let report = Report::from(&table);
    match (&cfg.out, cfg.format) {
        (None, Some(FormatArg::Json)) => write_json(None, &report),
        (out, _) => {
            with_output(None, |w| w.write_all(report_text(&table).as_bytes()))?;
            match out {
                Some(path) => write_json(Some(path), &report),
                None => Ok(()),
            }
        }
    }
}
