//! Monte Carlo experiments over `G(Δ_n^(2), p)`: per-cell collapsibility and catalog
//! containment counts, written to CSV as they complete, and threshold scans in `α` for
//! `p = n^(−α)`.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{enumerate_l, is_supported, CatalogLimits};
use crate::collapse::{Levels, Terminal};
use crate::embedding::PatternSet;
use crate::error::{Error, Result};
use crate::mu::Rational;
use crate::random::{derive_seed, sample, ModelParams};

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "p",
    "c",
    "alpha",
    "k",
    "trials",
    "seed",
    "collapsible",
    "contains_forbidden",
    "mean_steps",
    "degree_exceeded",
    "wall_ms",
];

/// A probability, either literal or `c·n^(−α)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PRule {
    Literal { p: f64 },
    Power { c: f64, alpha: f64 },
}

impl PRule {
    pub fn power(alpha: f64) -> Self {
        PRule::Power { c: 1.0, alpha }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PRule::Literal { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidParameter(format!("literal p = {p} is not a probability")))
            }
            PRule::Power { c, alpha } if !(c > 0.0 && alpha > 0.0 && c.is_finite() && alpha.is_finite()) => {
                Err(Error::InvalidParameter(format!("p-rule needs c > 0 and alpha > 0, got c = {c}, alpha = {alpha}")))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, n: usize) -> Result<f64> {
        self.validate()?;
        let p = match *self {
            PRule::Literal { p } => p,
            PRule::Power { c, alpha } => c * (n as f64).powf(-alpha),
        };
        if p > 1.0 {
            return Err(Error::InvalidParameter(format!("{self:?} gives p = {p} > 1 at n = {n}")));
        }
        Ok(p)
    }

    fn symbolic(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            PRule::Literal { .. } => (None, None),
            PRule::Power { c, alpha } => (Some(c), Some(alpha)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    DirectCollapse,
    CatalogContainment,
    Both,
}

impl Mode {
    fn direct(self) -> bool {
        self != Mode::CatalogContainment
    }

    fn catalog(self) -> bool {
        self != Mode::DirectCollapse
    }
}

fn default_r() -> usize {
    2
}

/// One experiment grid. Cells are `n_values × p_rules`, visited with `n` outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub p_rules: Vec<PRule>,
    pub k: usize,
    #[serde(default = "default_r")]
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.p_rules.is_empty() {
            return Err(Error::InvalidParameter("the grid needs at least one n and one p-rule".into()));
        }
        for &n in &self.n_values {
            for rule in &self.p_rules {
                ModelParams::new(n, rule.evaluate(n)?, self.seed)?;
            }
        }
        if self.mode.catalog() && !is_supported(self.k, self.r) {
            return Err(Error::CatalogUnavailable { k: self.k, r: self.r });
        }
        Ok(())
    }
}

/// Counts for one grid cell. Fields not measured in the chosen mode are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub p: f64,
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub collapsible: Option<usize>,
    pub contains_forbidden: Option<usize>,
    /// Mean number of collapse steps to a graph, over the trials that reach one.
    pub mean_steps: Option<f64>,
    pub degree_exceeded: usize,
    pub wall_ms: u64,
    /// Trials with maximal edge degree at most `r`.
    #[serde(skip)]
    pub capped_trials: usize,
    /// Capped trials where collapsibility and containment disagree.
    #[serde(skip)]
    pub violations: usize,
}

/// Outcome of one sampled complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub collapsible: Option<bool>,
    pub contains_forbidden: Option<bool>,
    pub steps: Option<usize>,
    pub degree_exceeded: bool,
}

impl TrialOutcome {
    /// Whether the two routes disagree on a complex of degree at most `r`.
    pub fn is_violation(&self) -> bool {
        match (self.collapsible, self.contains_forbidden) {
            (Some(col), Some(con)) => !self.degree_exceeded && col == con,
            _ => false,
        }
    }
}

/// Seed of trial `trial` at size `n`; it does not depend on `p`, so cells that differ
/// only in `p` see coupled samples.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    derive_seed(seed, &[n as u64, trial as u64])
}

pub fn run_trial(
    params: &ModelParams,
    k: usize,
    r: usize,
    patterns: Option<&PatternSet>,
    direct: bool,
) -> Result<TrialOutcome> {
    let y = sample(params)?;
    let degree_exceeded = y.max_degree() > r;
    let (collapsible, steps) = if direct {
        let levels = Levels::of(&y);
        let steps = match levels.terminal {
            Terminal::Graph { steps } => Some(steps),
            Terminal::ClosedResidue { .. } => None,
        };
        (Some(steps.is_some_and(|s| s <= k)), steps)
    } else {
        (None, None)
    };
    let contains_forbidden = patterns.map(|set| set.first_match(&y).is_some());
    Ok(TrialOutcome { collapsible, contains_forbidden, steps, degree_exceeded })
}

fn run_cell(config: &ExperimentConfig, n: usize, rule: &PRule, patterns: Option<&PatternSet>) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let p = rule.evaluate(n)?;
    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let params = ModelParams::new(n, p, trial_seed(config.seed, n, t))?;
            run_trial(&params, config.k, config.r, patterns, config.mode.direct())
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let finished: Vec<usize> = outcomes.iter().filter_map(|o| o.steps).collect();
    let (c, alpha) = rule.symbolic();
    Ok(ExperimentRecord {
        n,
        p,
        c,
        alpha,
        k: config.k,
        trials: config.trials,
        seed: config.seed,
        collapsible: config.mode.direct().then(|| count(&|o| o.collapsible == Some(true))),
        contains_forbidden: config.mode.catalog().then(|| count(&|o| o.contains_forbidden == Some(true))),
        mean_steps: (config.mode.direct() && !finished.is_empty())
            .then(|| finished.iter().sum::<usize>() as f64 / finished.len() as f64),
        degree_exceeded: count(&|o| o.degree_exceeded),
        wall_ms: start.elapsed().as_millis() as u64,
        capped_trials: count(&|o| !o.degree_exceeded),
        violations: count(&|o| o.is_violation()),
    })
}

/// The forbidden patterns for `(k, r)`, or an error when no complete catalog exists.
pub fn catalog_patterns(k: usize, r: usize) -> Result<PatternSet> {
    if !is_supported(k, r) {
        return Err(Error::CatalogUnavailable { k, r });
    }
    let catalog = enumerate_l(k, r, CatalogLimits::derived(k, r))?;
    if catalog.truncated {
        return Err(Error::CatalogUnavailable { k, r });
    }
    PatternSet::from_catalog(&catalog.members)
}

fn write_row<W: Write>(out: &mut csv::Writer<W>, rec: &ExperimentRecord) -> Result<()> {
    let opt = |x: Option<String>| x.unwrap_or_default();
    out.write_record([
        rec.n.to_string(),
        rec.p.to_string(),
        opt(rec.c.map(|c| c.to_string())),
        opt(rec.alpha.map(|a| a.to_string())),
        rec.k.to_string(),
        rec.trials.to_string(),
        rec.seed.to_string(),
        opt(rec.collapsible.map(|c| c.to_string())),
        opt(rec.contains_forbidden.map(|c| c.to_string())),
        opt(rec.mean_steps.map(|m| format!("{m:.6}"))),
        rec.degree_exceeded.to_string(),
        rec.wall_ms.to_string(),
    ])?;
    out.flush().map_err(|e| Error::io("experiment output", e))
}

/// Writes records as CSV with the fixed header.
pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in records {
        write_row(&mut w, rec)?;
    }
    Ok(())
}

/// Runs every cell in order. With an output path (the argument, else the config's), the
/// file is recreated with the CSV header and each record is appended and flushed as soon
/// as its cell finishes.
pub fn run_experiment(config: &ExperimentConfig, out: Option<&Path>) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let patterns = if config.mode.catalog() { Some(catalog_patterns(config.k, config.r)?) } else { None };
    let out_path = out.map(Path::to_path_buf).or_else(|| config.output.clone());
    let mut writer = match &out_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = csv::Writer::from_writer(file);
            w.write_record(CSV_HEADER)?;
            w.flush().map_err(|e| Error::io(path, e))?;
            Some(w)
        }
        None => None,
    };
    let mut records = Vec::new();
    for &n in &config.n_values {
        for rule in &config.p_rules {
            let rec = run_cell(config, n, rule, patterns.as_ref())?;
            if let Some(w) = writer.as_mut() {
                write_row(w, &rec)?;
            }
            records.push(rec);
        }
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub p: f64,
    pub collapsible: usize,
    pub trials: usize,
    pub fraction: f64,
}

/// The exponents bracketing the `k`-step collapsibility threshold `p = n^(−α)`: below
/// `lower` the complex a.a.s. is not collapsible in `k` steps, above `upper` it a.a.s. is.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exponents {
    pub lower: Rational,
    pub upper: Rational,
}

/// `lower = 1 + 1/(3·2^(k−1) − 1)` and `upper = 1 + 2/(k+1)`, for `k ≥ 1`.
pub fn threshold_exponents(k: usize) -> Option<Exponents> {
    if k == 0 || k > 60 {
        return None;
    }
    let one = Rational::integer(1);
    Some(Exponents {
        lower: one.clone() + Rational::new(1, 3 * (1i64 << (k - 1)) - 1),
        upper: one + Rational::new(2, k as i64 + 1),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanTable {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub rows: Vec<ScanRow>,
    pub exponents: Option<Exponents>,
    /// Largest decrease in the collapsible fraction between `α < α'`, in units of the
    /// pooled standard error of the two cells.
    pub worst_decrease: f64,
}

impl ScanTable {
    /// Fractions are nondecreasing in `α` up to `tolerance` pooled standard errors.
    pub fn is_monotone(&self, tolerance: f64) -> bool {
        self.worst_decrease <= tolerance
    }
}

/// Decrease of `b` below `a`, in pooled standard errors. Zero when `b ≥ a`.
pub fn pooled_decrease(a: &ScanRow, b: &ScanRow) -> f64 {
    let drop = a.fraction - b.fraction;
    if drop <= 0.0 {
        return 0.0;
    }
    let pooled = (a.collapsible + b.collapsible) as f64 / (a.trials + b.trials) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64)).sqrt();
    if se == 0.0 {
        f64::INFINITY
    } else {
        drop / se
    }
}

/// Collapsible fraction at `p = n^(−α)` for each `α` (ascending).
pub fn threshold_scan(n: usize, k: usize, alphas: &[f64], trials: usize, seed: u64) -> Result<ScanTable> {
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let unsorted = alphas.windows(2).any(|w| !(w[0] <= w[1]));
    if unsorted {
        return Err(Error::InvalidParameter("alphas must be sorted ascending".into()));
    }
    let config = ExperimentConfig {
        n_values: vec![n],
        p_rules: alphas.iter().map(|&a| PRule::power(a)).collect(),
        k,
        r: default_r(),
        trials,
        seed,
        mode: Mode::DirectCollapse,
        output: None,
    };
    let records = run_experiment(&config, None)?;
    let rows: Vec<ScanRow> = records
        .iter()
        .zip(alphas)
        .map(|(rec, &alpha)| {
            let collapsible = rec.collapsible.unwrap_or(0);
            ScanRow { alpha, p: rec.p, collapsible, trials, fraction: collapsible as f64 / trials as f64 }
        })
        .collect();
    let mut worst_decrease: f64 = 0.0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            worst_decrease = worst_decrease.max(pooled_decrease(&rows[i], &rows[j]));
        }
    }
    Ok(ScanTable { n, k, seed, rows, exponents: threshold_exponents(k), worst_decrease })
}

/// Writes a scan as CSV with the theoretical exponents in leading comment lines.
pub fn write_scan(table: &ScanTable, mut out: impl Write) -> std::io::Result<()> {
    if let Some(e) = &table.exponents {
        writeln!(out, "# n={} k={} seed={}", table.n, table.k, table.seed)?;
        writeln!(out, "# not collapsible in k steps below p = n^-{} ({:.6})", e.lower, e.lower.to_f64())?;
        writeln!(out, "# collapsible in k steps above p = n^-{} ({:.6})", e.upper, e.upper.to_f64())?;
    }
    writeln!(out, "alpha,p,collapsible,trials,fraction,regime")?;
    for row in &table.rows {
        let regime = match &table.exponents {
            Some(e) if row.alpha < e.lower.to_f64() => "dense",
            Some(e) if row.alpha > e.upper.to_f64() => "sparse",
            Some(_) => "window",
            None => "",
        };
        writeln!(out, "{},{},{},{},{:.6},{}", row.alpha, row.p, row.collapsible, row.trials, row.fraction, regime)?;
    }
    Ok(())
}
