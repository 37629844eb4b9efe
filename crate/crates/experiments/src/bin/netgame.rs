use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netgame_experiments::stats::Histogram;
use netgame_experiments::{
    compare_horizontal, emit_report, run_batch, run_sweep, sweep_trend, valid_welfare,
    write_sweep_csv, Config, ExperimentError, RunOptions, SweepSpec,
};

/// Level-K pilots and a simplified TCAS in simulated two-aircraft
/// encounters.
#[derive(Parser)]
#[command(name = "netgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one encounter and export its trajectory.
    Simulate(Common),
    /// Run a batch of encounters.
    Batch(Common),
    /// Run one batch per value of a parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Configuration key to vary, e.g. noise.M_w.
        #[arg(long)]
        param: String,
        /// Comma-separated grid.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Compare the horizontal advisory search with always maintaining heading.
    Horizontal {
        #[command(flatten)]
        common: Common,
        /// Counterfactual rollouts per candidate.
        #[arg(long)]
        rollouts: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Configuration file of `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. --set tcas.DMOD=4000. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Root seed; defaults to run.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Encounters per batch or grid point; defaults to run.encounters.
    #[arg(long)]
    encounters: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, env = "NETGAME_WORKERS")]
    workers: Option<usize>,
    /// Write one trajectory CSV per encounter.
    #[arg(long)]
    emit_trajectories: bool,
}

impl Common {
    fn config(&self) -> Result<Config, ExperimentError> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        for o in &self.overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| ExperimentError::BadValue {
                key: o.clone(),
                value: String::new(),
                reason: "expected KEY=VALUE".into(),
            })?;
            cfg.set(k, v)?;
        }
        if let Some(n) = self.encounters {
            cfg.run.encounters = n;
        }
        if let Some(s) = self.seed {
            cfg.run.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            workers: self.workers,
            trajectories: self.emit_trajectories,
        }
    }
}

fn simulate(c: &Common) -> Result<(), ExperimentError> {
    let cfg = c.config()?;
    let opts = RunOptions {
        trajectories: true,
        ..c.options()
    };
    let batch = run_batch(&cfg, 1, cfg.run.seed, opts)?;
    emit_report(
        &c.out,
        Some(&batch.manifest),
        &batch.outcomes,
        cfg.run.histogram_bins,
    )?;
    let o = &batch.outcomes[0];
    println!(
        "seed {} ended {} after {} s: d_min {:.1} ft, F {:.1}",
        o.seed, o.end, o.duration, o.d_min, o.welfare
    );
    for (k, p) in o.pilots.iter().enumerate() {
        match (p.t_ra, p.action) {
            (Some(t), Some(a)) => println!(
                "pilot {}: advisory {} at {t} s, chose {a:.2} ft/s",
                k + 1,
                p.ra
            ),
            _ => println!("pilot {}: no advisory", k + 1),
        }
    }
    println!("wrote {}", c.out.display());
    Ok(())
}

fn summary(m: &netgame_experiments::RunManifest) -> String {
    format!(
        "mean F {:.1} (95% CI {:.1} to {:.1}) over {} encounters; {} discarded, {} failed, {} NMAC",
        m.mean_f, m.ci.0, m.ci.1, m.completed, m.discarded, m.failed, m.nmac
    )
}

fn batch(c: &Common) -> Result<(), ExperimentError> {
    let cfg = c.config()?;
    let b = run_batch(&cfg, cfg.run.encounters, cfg.run.seed, c.options())?;
    emit_report(
        &c.out,
        Some(&b.manifest),
        &b.outcomes,
        cfg.run.histogram_bins,
    )?;
    println!("{}", summary(&b.manifest));
    println!("wrote {}", c.out.display());
    b.manifest.check_failures(cfg.run.failure_threshold)
}

fn sweep(c: &Common, param: &str, values: &[f64]) -> Result<(), ExperimentError> {
    let cfg = c.config()?;
    let spec = SweepSpec {
        param: param.to_string(),
        values: values.to_vec(),
        encounters: cfg.run.encounters,
        root_seed: cfg.run.seed,
    };
    let points = run_sweep(&cfg, &spec, c.options())?;
    fs::create_dir_all(&c.out)?;
    write_sweep_csv(param, &points, fs::File::create(c.out.join("sweep.csv"))?)?;
    let mut manifest = cfg.to_text();
    let _ = writeln!(manifest, "sweep.param = {param}");
    for (k, p) in points.iter().enumerate() {
        println!("{param} = {}: {}", p.value, summary(&p.manifest));
        let dir = c.out.join(format!("point_{k}"));
        emit_report(&dir, Some(&p.manifest), &p.outcomes, cfg.run.histogram_bins)?;
    }
    let t = sweep_trend(&points);
    let _ = writeln!(
        manifest,
        "sweep.spearman_rho = {}\nsweep.spearman_p = {}",
        t.rho, t.p_value
    );
    fs::write(c.out.join("manifest.txt"), manifest)?;
    println!(
        "Spearman rho {:.3} (p = {:.2e}, n = {})",
        t.rho, t.p_value, t.n
    );
    println!("wrote {}", c.out.display());
    for p in &points {
        p.manifest.check_failures(cfg.run.failure_threshold)?;
    }
    Ok(())
}

fn write_comparison_histogram(
    path: &Path,
    search: &[f64],
    baseline: &[f64],
    bins: usize,
) -> Result<(), ExperimentError> {
    let all: Vec<f64> = search.iter().chain(baseline).copied().collect();
    let range = Histogram::new(&all, bins);
    let (lo, hi) = (range.edges[0], range.edges[range.edges.len() - 1]);
    let hs = Histogram::with_range(search, bins, lo, hi);
    let hb = Histogram::with_range(baseline, bins, lo, hi);
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(["bin_low", "bin_high", "search", "baseline"])?;
    for k in 0..hs.counts.len() {
        out.write_record([
            hs.edges[k].to_string(),
            hs.edges[k + 1].to_string(),
            hs.counts[k].to_string(),
            hb.counts[k].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn horizontal(c: &Common, rollouts: Option<usize>) -> Result<(), ExperimentError> {
    let mut cfg = c.config()?;
    if let Some(r) = rollouts {
        cfg.run.rollouts = r;
        cfg.validate()?;
    }
    let cmp = compare_horizontal(&cfg, cfg.run.encounters, cfg.run.seed, c.options())?;
    let bins = cfg.run.histogram_bins;
    emit_report(
        &c.out.join("search"),
        Some(&cmp.search.manifest),
        &cmp.search.outcomes,
        bins,
    )?;
    emit_report(
        &c.out.join("baseline"),
        Some(&cmp.baseline.manifest),
        &cmp.baseline.outcomes,
        bins,
    )?;
    let (fs_, fb) = (
        valid_welfare(&cmp.search.outcomes),
        valid_welfare(&cmp.baseline.outcomes),
    );
    if !fs_.is_empty() && !fb.is_empty() {
        write_comparison_histogram(&c.out.join("histogram_compare.csv"), &fs_, &fb, bins)?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "paired = {}", cmp.paired);
    let _ = writeln!(text, "mean_difference = {}", cmp.mean_difference);
    let _ = writeln!(text, "difference_ci_low = {}", cmp.difference_ci.0);
    let _ = writeln!(text, "difference_ci_high = {}", cmp.difference_ci.1);
    for e in &cmp.edges {
        let _ = writeln!(
            text,
            "edge_p{} = {} search_cdf={} baseline_cdf={}",
            e.p, e.edge, e.search_cdf, e.baseline_cdf
        );
    }
    fs::write(c.out.join("comparison.txt"), text)?;
    println!("search:   {}", summary(&cmp.search.manifest));
    println!("baseline: {}", summary(&cmp.baseline.manifest));
    println!(
        "paired difference {:.1} (95% CI {:.1} to {:.1}) over {} encounters; dominates at {} of {} quintile edges",
        cmp.mean_difference,
        cmp.difference_ci.0,
        cmp.difference_ci.1,
        cmp.paired,
        cmp.dominated_edges(),
        cmp.edges.len()
    );
    println!("wrote {}", c.out.display());
    cmp.search
        .manifest
        .check_failures(cfg.run.failure_threshold)?;
    cmp.baseline
        .manifest
        .check_failures(cfg.run.failure_threshold)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(c) => simulate(c),
        Command::Batch(c) => batch(c),
        Command::Sweep {
            common,
            param,
            values,
        } => sweep(common, param, values),
        Command::Horizontal { common, rollouts } => horizontal(common, *rollouts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
