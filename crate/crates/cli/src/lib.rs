//! Experiment harness behind the `gcnlab` binary: load a dataset, score
//! centrality, pick training nodes under a policy and budget, train, and
//! report CSV rows (plus an SVG chart for rate sweeps).
//!
//! Every run is keyed by a 64-bit seed. A cell's seed is split into three
//! substreams drawn in a fixed order — selection, validation split,
//! training — so any cell can be reproduced in isolation.

pub mod chart;
pub mod textfmt;

use gcnlab_core::ndarray::Array2;
use gcnlab_core::{
    budget_for_rate, eigenvalues_symmetric_with_cap, load_dataset, local_reaching_centrality_with,
    make_split, row_normalize_features, select_train_nodes_with, spectrum_stats, train,
    CentralityOptions, CentralityScores, DatasetBundle, Error as CoreError, Policy, SelectOptions,
    SplitMix64, TrainConfig, DEFAULT_DENSE_CAP,
};
use rayon::prelude::*;
use std::fmt;
use std::path::Path;
use textfmt::format_sig;

/// Errors classified by exit code: usage 1, data 2, numerical 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) | CliError::Numerical(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let msg = err.to_string();
        match err {
            CoreError::BudgetOutOfRange { .. }
            | CoreError::InvalidDropout(_)
            | CoreError::InvalidProbability { .. }
            | CoreError::ZeroDimension { .. }
            | CoreError::TooFewNodes { .. }
            | CoreError::ValidationTooLarge { .. } => CliError::Usage(msg),
            CoreError::NumericalFailure(_) | CoreError::NonFiniteGradient { .. } => {
                CliError::Numerical(msg)
            }
            _ => CliError::Data(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

/// Knobs shared by the fixed and sweep pipelines.
#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub select: SelectOptions,
    pub centrality: CentralityOptions,
    /// Training template; the per-cell seed overrides `seed`.
    pub train: TrainConfig,
    /// Validation-set size; None applies min(500, n/10) clamped to the
    /// nodes left after training selection.
    pub val_size: Option<usize>,
}

/// One CSV data row. `seed == None` marks a per-group mean row.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub dataset: String,
    pub policy: Policy,
    pub rate: f64,
    pub seed: Option<u64>,
    pub accuracy: f64,
    pub loss: f64,
    pub stop_best: f64,
    pub stop_halt: f64,
    pub status: String,
}

pub const RESULT_CSV_HEADER: &str =
    "dataset,policy,rate,seed,accuracy,loss,stop_best,stop_halt,status";

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn to_csv_line(&self) -> String {
        let seed = match self.seed {
            Some(seed) => seed.to_string(),
            None => "mean".to_string(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.dataset,
            self.policy,
            format_sig(self.rate),
            seed,
            format_sig(self.accuracy),
            format_sig(self.loss),
            format_sig(self.stop_best),
            format_sig(self.stop_halt),
            self.status
        )
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn default_val_size(num_nodes: usize) -> usize {
    500.min(num_nodes / 10)
}

pub fn load_and_validate(dir: &Path) -> Result<DatasetBundle, CliError> {
    let bundle = load_dataset(dir)?;
    Ok(bundle)
}

fn centrality_for(
    bundle: &DatasetBundle,
    policies: &[Policy],
    opts: &PipelineOptions,
) -> Result<CentralityScores, CliError> {
    if policies.iter().any(Policy::needs_centrality) {
        Ok(local_reaching_centrality_with(
            &bundle.graph,
            &opts.centrality,
        )?)
    } else {
        Ok(CentralityScores::zeros(bundle.num_nodes()))
    }
}

fn run_cell(
    bundle: &DatasetBundle,
    features: &Array2<f64>,
    scores: &CentralityScores,
    policy: Policy,
    rate: f64,
    seed: u64,
    opts: &PipelineOptions,
) -> ResultRow {
    let mut row = ResultRow {
        dataset: bundle.name.clone(),
        policy,
        rate,
        seed: Some(seed),
        accuracy: f64::NAN,
        loss: f64::NAN,
        stop_best: 0.0,
        stop_halt: 0.0,
        status: "ok".to_string(),
    };
    let fail = |row: &mut ResultRow, stage: &str, err: CoreError| {
        row.status = format!("{stage}: {err}").replace(',', ";");
    };

    let num_nodes = bundle.num_nodes();
    let budget = budget_for_rate(rate, num_nodes);
    let mut cell_rng = SplitMix64::new(seed);
    let select_seed = cell_rng.next_u64();
    let split_seed = cell_rng.next_u64();
    let train_seed = cell_rng.next_u64();

    let train_nodes = match select_train_nodes_with(
        scores,
        &bundle.labels,
        policy,
        budget,
        select_seed,
        &opts.select,
    ) {
        Ok(nodes) => nodes,
        Err(err) => {
            fail(&mut row, "select", err);
            return row;
        }
    };

    let val_size = opts
        .val_size
        .unwrap_or_else(|| default_val_size(num_nodes).min(num_nodes - budget));
    let split = match make_split(num_nodes, &train_nodes, val_size, split_seed) {
        Ok(split) => split,
        Err(err) => {
            fail(&mut row, "split", err);
            return row;
        }
    };

    let cfg = TrainConfig {
        seed: train_seed,
        ..opts.train.clone()
    };
    match train(&bundle.graph, features, &bundle.labels, &split, &cfg) {
        Ok(result) => {
            row.accuracy = result.test_accuracy;
            row.loss = result.test_loss;
            row.stop_best = result.stop_best as f64;
            row.stop_halt = result.stop_halt as f64;
        }
        Err(err) => fail(&mut row, "train", err),
    }
    row
}

/// Run every (policy, rate, seed) cell on a bounded worker pool. Rows come
/// back in cell order regardless of scheduling, so output bytes never
/// depend on the thread count.
pub fn run_cells(
    bundle: &DatasetBundle,
    cells: &[(Policy, f64, u64)],
    opts: &PipelineOptions,
    jobs: usize,
) -> Result<Vec<ResultRow>, CliError> {
    for &(_, rate, _) in cells {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(CliError::Usage(format!(
                "labeling rate {rate} outside (0, 1]"
            )));
        }
    }
    let policies: Vec<Policy> = cells.iter().map(|c| c.0).collect();
    let scores = centrality_for(bundle, &policies, opts)?;
    let features = row_normalize_features(&bundle.features);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = pool.install(|| {
        cells
            .par_iter()
            .map(|&(policy, rate, seed)| {
                run_cell(bundle, &features, &scores, policy, rate, seed, opts)
            })
            .collect()
    });
    Ok(rows)
}

/// Append one mean row per consecutive (dataset, policy, rate) group,
/// averaging the rows that succeeded.
pub fn with_mean_rows(rows: Vec<ResultRow>) -> Vec<ResultRow> {
    let mut out: Vec<ResultRow> = Vec::with_capacity(rows.len() * 2);
    let mut group: Vec<ResultRow> = Vec::new();

    fn flush(out: &mut Vec<ResultRow>, group: &mut Vec<ResultRow>) {
        if group.is_empty() {
            return;
        }
        let ok: Vec<&ResultRow> = group.iter().filter(|r| r.is_ok()).collect();
        let mean = |get: fn(&ResultRow) -> f64| -> f64 {
            if ok.is_empty() {
                f64::NAN
            } else {
                ok.iter().map(|r| get(r)).sum::<f64>() / ok.len() as f64
            }
        };
        let template = &group[0];
        let mean_row = ResultRow {
            dataset: template.dataset.clone(),
            policy: template.policy,
            rate: template.rate,
            seed: None,
            accuracy: mean(|r| r.accuracy),
            loss: mean(|r| r.loss),
            stop_best: mean(|r| r.stop_best),
            stop_halt: mean(|r| r.stop_halt),
            status: if ok.is_empty() {
                "error".to_string()
            } else {
                "ok".to_string()
            },
        };
        out.append(group);
        out.push(mean_row);
    }

    for row in rows {
        let starts_new_group = group.last().is_some_and(|last| {
            last.policy != row.policy || last.rate != row.rate || last.dataset != row.dataset
        });
        if starts_new_group {
            flush(&mut out, &mut group);
        }
        group.push(row);
    }
    flush(&mut out, &mut group);
    out
}

/// Fixed-rate experiment: one policy, one rate, several seeds, plus the
/// seed-mean row.
pub fn run_fixed(
    bundle: &DatasetBundle,
    policy: Policy,
    rate: f64,
    seeds: &[u64],
    opts: &PipelineOptions,
) -> Result<Vec<ResultRow>, CliError> {
    if seeds.is_empty() {
        return Err(CliError::Usage("at least one seed required".into()));
    }
    let cells: Vec<(Policy, f64, u64)> = seeds.iter().map(|&seed| (policy, rate, seed)).collect();
    let rows = run_cells(bundle, &cells, opts, 1)?;
    Ok(with_mean_rows(rows))
}

/// Rate sweep over the (policy x rate x seed) grid; returns the CSV rows
/// (with means) and the accuracy-vs-rate chart of the means.
pub fn run_sweep(
    bundle: &DatasetBundle,
    policies: &[Policy],
    rates: &[f64],
    seeds: &[u64],
    opts: &PipelineOptions,
    jobs: usize,
) -> Result<(Vec<ResultRow>, String), CliError> {
    if policies.is_empty() || rates.is_empty() || seeds.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one policy, one rate and one seed".into(),
        ));
    }
    let mut policies = policies.to_vec();
    policies.sort_by_key(|p| p.name());
    policies.dedup();

    let mut cells = Vec::with_capacity(policies.len() * rates.len() * seeds.len());
    for &policy in &policies {
        for &rate in rates {
            for &seed in seeds {
                cells.push((policy, rate, seed));
            }
        }
    }
    let rows = with_mean_rows(run_cells(bundle, &cells, opts, jobs)?);

    let series: Vec<chart::Series> = policies
        .iter()
        .map(|&policy| chart::Series {
            name: policy.name().to_string(),
            points: rows
                .iter()
                .filter(|r| r.seed.is_none() && r.policy == policy)
                .map(|r| (r.rate, r.accuracy))
                .collect(),
        })
        .collect();
    let svg = chart::render_line_chart(&bundle.name, "labeling rate", "mean accuracy", &series);
    Ok((rows, svg))
}

/// Laplacian spectrum statistics as a one-row CSV.
pub fn spectrum_csv(bundle: &DatasetBundle, allow_large: bool) -> Result<String, CliError> {
    let cap = if allow_large {
        None
    } else {
        Some(DEFAULT_DENSE_CAP)
    };
    let laplacian = bundle.graph.normalized_laplacian();
    let spectrum = eigenvalues_symmetric_with_cap(&laplacian, false, cap)?;
    let stats = spectrum_stats(&spectrum)?;
    Ok(format!(
        "dataset,min,median,avg,std,max\n{},{},{},{},{},{}\n",
        bundle.name,
        format_sig(stats.min),
        format_sig(stats.median),
        format_sig(stats.avg),
        format_sig(stats.std),
        format_sig(stats.max),
    ))
}

/// Per-node centrality scores as CSV.
pub fn centrality_csv(
    bundle: &DatasetBundle,
    opts: &CentralityOptions,
) -> Result<String, CliError> {
    let scores = local_reaching_centrality_with(&bundle.graph, opts)?;
    let mut out = String::from("node,score\n");
    for (node, &score) in scores.scores.iter().enumerate() {
        out.push_str(&format!("{node},{}\n", format_sig(score)));
    }
    Ok(out)
}

/// Parse an `A:B:STEP` rate range, inclusive of B up to float slack.
pub fn parse_rates(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--rates expects A:B:STEP, got '{spec}'"
        )));
    }
    let parse = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad rate component '{s}'")))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step <= 0.0 || start <= 0.0 || stop > 1.0 || start > stop {
        return Err(CliError::Usage(format!(
            "rate range '{spec}' must satisfy 0 < A <= B <= 1 with STEP > 0"
        )));
    }
    let mut rates = Vec::new();
    let mut k = 0usize;
    loop {
        let rate = start + step * k as f64;
        if rate > stop + 1e-9 {
            break;
        }
        rates.push(rate.min(1.0));
        k += 1;
    }
    Ok(rates)
}

/// Seed list: an explicit comma list wins, otherwise seeds 1..=count.
pub fn resolve_seeds(count: usize, list: Option<&str>) -> Result<Vec<u64>, CliError> {
    if let Some(list) = list {
        let seeds: Result<Vec<u64>, _> = list.split(',').map(|s| s.trim().parse::<u64>()).collect();
        let seeds = seeds.map_err(|_| CliError::Usage(format!("bad --seed-list '{list}'")))?;
        if seeds.is_empty() {
            return Err(CliError::Usage("empty --seed-list".into()));
        }
        Ok(seeds)
    } else {
        if count == 0 {
            return Err(CliError::Usage("--seeds must be at least 1".into()));
        }
        Ok((1..=count as u64).collect())
    }
}
