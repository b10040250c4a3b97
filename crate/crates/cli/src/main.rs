use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tricollapse::catalog::{enumerate_l, is_supported, CatalogLimits};
use tricollapse::collapse::{
    accessible_boundary, collapse_sequence, collapse_step_full, collapsing_paths, d_value, TraceJson,
    DEFAULT_PATH_LIMIT,
};
use tricollapse::embedding::embeds;
use tricollapse::experiment::{run_experiment, threshold_scan, write_records, write_scan, ExperimentConfig};
use tricollapse::mu::{mu, mu_tilde};
use tricollapse::random::{degree_histogram, expected_degree_count, sample, ModelParams};
use tricollapse::{Complex2, ExtNat, Triangle};

#[derive(Parser)]
#[command(name = "tricollapse", version, about = "Collapse, density and catalog tools for random 2-complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Collapse a complex step by step and print the trace as JSON.
    Collapse {
        complex: PathBuf,
        /// Report D, collapsing paths and accessible boundary for one triangle, e.g. 0,1,2.
        #[arg(long, value_parser = parse_triangle)]
        sigma: Option<Triangle>,
        /// Also list each stage as a full complex, keeping the surviving edges.
        #[arg(long)]
        full: bool,
        /// Cap on the number of enumerated collapsing paths.
        #[arg(long, default_value_t = DEFAULT_PATH_LIMIT)]
        path_limit: usize,
    },
    /// Print μ, μ̃ with a witness, and whether the complex is balanced.
    Mu { complex: PathBuf },
    /// Enumerate the catalog L(k, r) into a directory.
    Catalog(CatalogArgs),
    /// Search for a simplicial embedding of a pattern into a host.
    Embed {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
    },
    /// Sample Y ~ G(n, p) and write it as JSON.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-degree histogram of sampled complexes against its expectation, as CSV.
    Degrees {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of samples to average over; sample i uses seed + i.
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    /// Stop growing complexes beyond this many faces.
    #[arg(long)]
    max_faces: Option<usize>,
    /// Stop growing complexes beyond this many vertices.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Directory for member files and summary.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run every cell of a JSON config and write the records as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; defaults to the config's `output`, else standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collapsible fraction at p = n^-alpha across a list of exponents.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_triangle(s: &str) -> Result<Triangle, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Triangle::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err(format!("expected three vertices, got {}", v.len())),
    }
}

fn read_complex(path: &Path) -> Result<Complex2> {
    Complex2::read_json(path).with_context(|| format!("reading {}", path.display()))
}

fn depth_json(d: ExtNat) -> serde_json::Value {
    match d {
        ExtNat::Finite(k) => json!(k),
        ExtNat::Infinite => json!("inf"),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn collapse(path: &Path, sigma: Option<Triangle>, full: bool, path_limit: usize) -> Result<()> {
    let c = read_complex(path)?;
    if let Some(sigma) = sigma {
        let d = d_value(&c, sigma)?;
        let paths = match d {
            ExtNat::Finite(_) => Some(collapsing_paths(&c, sigma, path_limit)?),
            ExtNat::Infinite => None,
        };
        return print_json(&json!({
            "sigma": sigma,
            "d": depth_json(d),
            "paths": paths.as_ref().map(|p| &p.paths),
            "paths_truncated": paths.as_ref().map(|p| p.truncated),
            "accessible_boundary": accessible_boundary(&c, sigma)?,
        }));
    }
    let trace = collapse_sequence(&c);
    let mut value = serde_json::to_value(TraceJson::from(&trace))?;
    if full {
        let mut stages = vec![c.clone()];
        while stages.last().unwrap().num_triangles() > 0 {
            let next = collapse_step_full(stages.last().unwrap());
            if next.num_triangles() == stages.last().unwrap().num_triangles() {
                break;
            }
            stages.push(next);
        }
        value["full_stages"] = serde_json::to_value(&stages)?;
    }
    print_json(&value)
}

fn mu_command(path: &Path) -> Result<()> {
    let c = read_complex(path)?;
    let tilde = mu_tilde(&c)?;
    print_json(&json!({
        "mu": mu(&c)?,
        "mu_tilde": tilde.value,
        "witness": tilde.witness,
        "method": tilde.method,
        "balanced": tilde.value == mu(&c)?,
    }))
}

fn catalog(args: &CatalogArgs) -> Result<()> {
    let mut limits = CatalogLimits::derived(args.k, args.r);
    let explicit = args.max_faces.is_some() || args.max_vertices.is_some();
    if !is_supported(args.k, args.r) && !explicit {
        bail!(
            "L({}, {}) is outside the supported range; pass --max-faces/--max-vertices to enumerate under explicit limits",
            args.k,
            args.r
        );
    }
    if let Some(f) = args.max_faces {
        limits.max_faces = f;
    }
    if let Some(v) = args.max_vertices {
        limits.max_vertices = v;
    }
    let cat = enumerate_l(args.k, args.r, limits)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let minimal = cat.minimal_members();
    let mut max_tilde = None;
    for (i, m) in cat.members.iter().enumerate() {
        let tilde = mu_tilde(&m.complex)?;
        let meta = json!({
            "center": m.center,
            "k": m.k,
            "r": m.r,
            "v": m.num_vertices(),
            "f": m.complex.num_triangles(),
            "mu_tilde": tilde.value,
            "balanced": tilde.value == mu(&m.complex)?,
            "minimal": minimal.contains(&i),
        });
        m.complex.write_json(args.out.join(format!("member_{i:04}.json")))?;
        fs::write(args.out.join(format!("member_{i:04}.meta.json")), serde_json::to_string_pretty(&meta)?)?;
        if max_tilde.as_ref().is_none_or(|b| tilde.value > *b) {
            max_tilde = Some(tilde.value);
        }
    }
    let summary = format!(
        "k,r,count,unanchored_count,minimal_count,mu_tilde_max,truncated\n{},{},{},{},{},{},{}\n",
        cat.k,
        cat.r,
        cat.members.len(),
        cat.unanchored_count(),
        minimal.len(),
        max_tilde.map(|m| m.to_string()).unwrap_or_default(),
        cat.truncated,
    );
    fs::write(args.out.join("summary.csv"), &summary)?;
    print!("{summary}");
    if cat.truncated {
        eprintln!("warning: enumeration hit its limits; the catalog may be incomplete");
    }
    Ok(())
}

fn embed(pattern: &Path, host: &Path) -> Result<()> {
    let (p, h) = (read_complex(pattern)?, read_complex(host)?);
    match embeds(&p, &h)? {
        Some(w) => print_json(&w),
        None => {
            println!("none");
            Ok(())
        }
    }
}

fn generate(model: &ModelArgs, out: Option<&Path>) -> Result<()> {
    let y = sample(&ModelParams::new(model.n, model.p, model.seed)?)?;
    match out {
        Some(path) => y.write_json(path)?,
        None => println!("{}", y.to_json_string()),
    }
    Ok(())
}

fn degrees(model: &ModelArgs, trials: u64) -> Result<()> {
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let mut totals = vec![0u64; model.n.saturating_sub(1)];
    for i in 0..trials {
        let y = sample(&ModelParams::new(model.n, model.p, model.seed.wrapping_add(i))?)?;
        for (k, c) in degree_histogram(&y).counts.iter().enumerate() {
            totals[k] += c;
        }
    }
    let mut out = io::stdout().lock();
    writeln!(out, "k,observed,expected")?;
    for (k, total) in totals.iter().enumerate() {
        let expected = expected_degree_count(model.n, model.p, k)?;
        if trials == 1 {
            writeln!(out, "{k},{total},{expected:.6}")?;
        } else {
            writeln!(out, "{k},{:.6},{expected:.6}", *total as f64 / trials as f64)?;
        }
    }
    Ok(())
}

fn experiment(cmd: &ExperimentCommand) -> Result<ExitCode> {
    match cmd {
        ExperimentCommand::Run { config, out } => {
            let cfg = ExperimentConfig::read_json(config)?;
            let target = out.as_deref().or(cfg.output.as_deref());
            let records = run_experiment(&cfg, target)?;
            if target.is_none() {
                write_records(&records, io::stdout().lock())?;
            }
            let violations: usize = records.iter().map(|r| r.violations).sum();
            if violations > 0 {
                for r in records.iter().filter(|r| r.violations > 0) {
                    eprintln!(
                        "consistency violation at n={} p={}: collapsibility and catalog containment coincide on {} of {} degree-capped trials",
                        r.n, r.p, r.violations, r.capped_trials
                    );
                }
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        ExperimentCommand::Scan { n, k, alphas, trials, seed, out } => {
            let table = threshold_scan(*n, *k, alphas, *trials, *seed)?;
            match out {
                Some(path) => write_scan(&table, fs::File::create(path)?)?,
                None => write_scan(&table, io::stdout().lock())?,
            }
            if !table.is_monotone(3.0) {
                eprintln!(
                    "warning: collapsible fraction drops by {:.2} pooled standard errors as alpha grows",
                    table.worst_decrease
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Collapse { complex, sigma, full, path_limit } => collapse(complex, *sigma, *full, *path_limit)?,
        Command::Mu { complex } => mu_command(complex)?,
        Command::Catalog(args) => catalog(args)?,
        Command::Embed { pattern, host } => embed(pattern, host)?,
        Command::Generate { model, out } => generate(model, out.as_deref())?,
        Command::Degrees { model, trials } => degrees(model, *trials)?,
        Command::Experiment(cmd) => return experiment(cmd),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
