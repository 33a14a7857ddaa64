//! Command-line front end for the averaging-difference laboratory.
//!
//! Subcommands map one-to-one onto library capabilities: `scan` and `sup`
//! drive the supremum estimator, `profile` the growth profiles, `oracle`
//! the closed-form cross-checks, `rotation` the circle-rotation tent lab,
//! `verify` the built-in criterion suite, and `plot` the SVG renderer.
//!
//! Exit codes: 0 success, 2 configuration error, 3 criterion or oracle
//! failure, 4 domain or budget error. Runs that write files also write a
//! JSON manifest beside them; nothing is written when a job fails partway.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;

use avgdiff::config::{parse_rotation_config, parse_scan_config, ConfigError, RotationJob};
use avgdiff::discrete::{box_difference_l2, point_mass_block_sum, point_mass_block_sum_direct};
use avgdiff::engine::{
    divergence_profile, estimate_supremum, geometric_tail_closed_form, EngineError, Probe,
};
use avgdiff::multiplier::{cesaro_direct_sum, cesaro_multiplier};
use avgdiff::report::{
    emit_plot, unix_ms_now, PlotKind, ReportError, RunManifest, ScanRow, ScanTable,
};
use avgdiff::rng::trial_rng;
use avgdiff::rotation::{build_tent_pair, series_diagnostics, RotationError, RotationNumber};
use avgdiff::sequences::{build_sequence, SequenceError};
use avgdiff::sum::Kahan;
use avgdiff::verify;
use avgdiff::{Angle, DifferenceSumQuery, FiniteMeasureZ, SequenceKind, WeightPreset};

#[derive(Parser)]
#[command(name = "avgdiff", version, about = "Supremum scans, closed-form oracles, and \
a rotation lab for difference series of averaging operators")]
struct Cli {
    /// Config file: `[section]` headers, `key = value` lines, `#` comments.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory receiving CSV, manifest, and SVG outputs.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Base seed for every randomized sampling plan and oracle trial.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Criterion filter for `verify`: an id, an exact name, or a substring.
    #[arg(long, global = true, value_name = "NAME")]
    only: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured job at every listed K; write scan.csv.
    Scan,
    /// Estimate each job's supremum at its deepest K and print it.
    Sup,
    /// Depth ladder per job with growth deltas; write profile.csv.
    Profile,
    /// Cross-check closed forms against their slow direct routes.
    Oracle,
    /// Tent-pair series under a circle rotation; write rotation.csv.
    Rotation,
    /// Replay the acceptance criteria; print measured, bound, margin.
    Verify,
    /// Render a previously written table as a self-contained SVG.
    Plot {
        /// CSV written by scan, profile, or rotation.
        table: PathBuf,
        /// sup-vs-k | s-vs-frequency | au-ratio
        kind: String,
    },
}

// ─── failure classification ─────────────────────────────────────────────────

enum Failure {
    /// Unusable input: exit 2.
    Config(String),
    /// A checked bound did not hold: exit 3.
    Criterion(String),
    /// A domain or budget limit was hit mid-run: exit 4.
    Budget(String),
    /// Everything else (I/O on outputs, thread pool): exit 1.
    Other(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<SequenceError> for Failure {
    fn from(e: SequenceError) -> Self {
        match e {
            SequenceError::BadParameter(_) => Failure::Config(e.to_string()),
            SequenceError::Overflow { .. } => Failure::Budget(e.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            // these two can only come from config-shaped queries
            EngineError::BadQuery(_) | EngineError::DomainMismatch { .. } => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Budget(e.to_string()),
        }
    }
}

impl From<RotationError> for Failure {
    fn from(e: RotationError) -> Self {
        match e {
            RotationError::BadRotation(_) => Failure::Config(e.to_string()),
            _ => Failure::Budget(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, tag, msg) = match &f {
                Failure::Config(m) => (2, "config error", m),
                Failure::Criterion(m) => (3, "criterion failure", m),
                Failure::Budget(m) => (4, "budget error", m),
                Failure::Other(m) => (1, "error", m),
            };
            eprintln!("{tag}: {msg}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Other(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Scan => cmd_scan(cli),
        Command::Sup => cmd_sup(cli),
        Command::Profile => cmd_profile(cli),
        Command::Oracle => cmd_oracle(cli),
        Command::Rotation => cmd_rotation(cli),
        Command::Verify => cmd_verify(cli),
        Command::Plot { table, kind } => cmd_plot(cli, table, kind),
    }
}

// ─── shared plumbing ────────────────────────────────────────────────────────

fn read_config(cli: &Cli) -> Result<String, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("this command needs --config PATH".into()))?;
    fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn manifest_skeleton(cli: &Cli, command: &str, config_text: Option<String>) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        config_text,
        seed: cli.seed,
        threads: rayon::current_num_threads(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_ms: unix_ms_now(),
        finished_unix_ms: 0,
        outputs: Vec::new(),
        outcome: String::new(),
    }
}

/// Writes every named file plus `{command}.manifest.json`, creating the out
/// directory first. Callers assemble all content before calling, so a failed
/// run leaves no partial files behind.
fn write_outputs(
    cli: &Cli,
    mut manifest: RunManifest,
    files: &[(&str, String)],
    outcome: String,
) -> Result<(), Failure> {
    fs::create_dir_all(&cli.out)
        .map_err(|e| Failure::Other(format!("cannot create {}: {e}", cli.out.display())))?;
    let write = |name: &str, content: &str| -> Result<PathBuf, Failure> {
        let path = cli.out.join(name);
        fs::write(&path, content)
            .map_err(|e| Failure::Other(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    };
    for (name, content) in files {
        let path = write(name, content)?;
        manifest.outputs.push(path.display().to_string());
        println!("wrote {}", path.display());
    }
    manifest.outcome = outcome;
    manifest.finished_unix_ms = unix_ms_now();
    let mpath = write(&format!("{}.manifest.json", manifest.command), &manifest.to_json())?;
    println!("wrote {}", mpath.display());
    Ok(())
}

// ─── scan / sup / profile ───────────────────────────────────────────────────

fn cmd_scan(cli: &Cli) -> Result<(), Failure> {
    let text = read_config(cli)?;
    let jobs = parse_scan_config(&text, cli.seed)?;
    let manifest = manifest_skeleton(cli, "scan", Some(text));
    let mut table = ScanTable::new();
    for job in &jobs {
        let seq = build_sequence(job.sequence.clone(), job.count, job.weights)?;
        for &k in &job.k_values {
            let q = DifferenceSumQuery::new(job.kernel.clone(), seq.clone(), k, job.p)?;
            let est = estimate_supremum(&q, &job.plan, job.refine)?;
            if est.budget_exhausted {
                eprintln!(
                    "note: [{}] K = {k} hit the sample budget; value is best-so-far",
                    job.name
                );
            }
            table.push(ScanRow {
                kernel: job.kernel.label(),
                sequence: seq.label(),
                k,
                p: job.p,
                frequency: est.argmax.key(),
                value: est.value,
                refined: job.refine,
            });
        }
    }
    table.sort();
    let outcome = format!("ok: {} rows from {} jobs", table.rows().len(), jobs.len());
    write_outputs(cli, manifest, &[("scan.csv", table.to_csv())], outcome)
}

fn cmd_sup(cli: &Cli) -> Result<(), Failure> {
    let text = read_config(cli)?;
    let jobs = parse_scan_config(&text, cli.seed)?;
    for job in &jobs {
        let seq = build_sequence(job.sequence.clone(), job.count, job.weights)?;
        let k = *job.k_values.iter().max().unwrap();
        let q = DifferenceSumQuery::new(job.kernel.clone(), seq.clone(), k, job.p)?;
        let est = estimate_supremum(&q, &job.plan, job.refine)?;
        let mut tail = format!("{} samples", est.samples_used);
        if est.refinement_gain > 0.0 {
            tail.push_str(&format!(", refine +{:.3e}", est.refinement_gain));
        }
        if est.budget_exhausted {
            tail.push_str(", budget exhausted");
        }
        println!(
            "[{}] kernel={} sequence={} K={} p={} sup>={:.12e} at {:.12e} ({tail})",
            job.name,
            job.kernel.label(),
            seq.label(),
            k,
            job.p,
            est.value,
            est.argmax.key(),
        );
    }
    Ok(())
}

fn cmd_profile(cli: &Cli) -> Result<(), Failure> {
    let text = read_config(cli)?;
    let jobs = parse_scan_config(&text, cli.seed)?;
    let manifest = manifest_skeleton(cli, "profile", Some(text));
    let mut table = ScanTable::new();
    for job in &jobs {
        let seq = build_sequence(job.sequence.clone(), job.count, job.weights)?;
        let mut ks = job.k_values.clone();
        ks.sort_unstable();
        ks.dedup();
        let deepest = *ks.last().unwrap();
        let template = DifferenceSumQuery::new(job.kernel.clone(), seq.clone(), deepest, job.p)?;
        let probes: Vec<Probe> = ks
            .iter()
            .map(|&k| Probe { k_max: k, plan: job.plan.clone(), refine: job.refine })
            .collect();
        let ests = divergence_profile(&template, &probes)?;
        for (probe, est) in probes.iter().zip(&ests) {
            table.push(ScanRow {
                kernel: job.kernel.label(),
                sequence: seq.label(),
                k: probe.k_max,
                p: job.p,
                frequency: est.argmax.key(),
                value: est.value,
                refined: probe.refine,
            });
        }
        for (pair, kp) in ests.windows(2).zip(ks.windows(2)) {
            println!(
                "[{}] S_{} - S_{} = {:+.6e}",
                job.name,
                kp[1],
                kp[0],
                pair[1].value - pair[0].value
            );
        }
    }
    table.sort();
    let outcome = format!("ok: {} rows from {} jobs", table.rows().len(), jobs.len());
    write_outputs(cli, manifest, &[("profile.csv", table.to_csv())], outcome)
}

// ─── oracle ─────────────────────────────────────────────────────────────────

struct OracleCheck {
    name: &'static str,
    worst: f64,
    tol: f64,
}

/// Every closed form the criteria lean on, recomputed the slow way at seeded
/// sample points. Any disagreement beyond tolerance is a criterion failure.
fn cmd_oracle(cli: &Cli) -> Result<(), Failure> {
    let mut checks = Vec::new();

    // closed average multiplier vs term-by-term sum
    let mut rng = trial_rng(cli.seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(1u64..10_000);
        let theta = rng.gen_range(1e-9..PI);
        let d = (cesaro_multiplier(n as u128, Angle::real(theta)) - cesaro_direct_sum(n, theta))
            .norm();
        worst = worst.max(d);
    }
    checks.push(OracleCheck { name: "average multiplier, closed vs direct", worst, tol: 1e-10 });

    // geometric tail closed form vs truncated sum, relative error
    let mu = FiniteMeasureZ::bernoulli_step();
    let mut rng = trial_rng(cli.seed, 1);
    let theta_min = 2.0 * 0.999f64.acos() + 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let theta = rng.gen_range(theta_min..PI);
        let closed = geometric_tail_closed_form(&mu, theta)?;
        let hat = mu.transform(theta);
        // enough terms that the geometric remainder is below 1e-11
        let k_adapt = ((1e-11f64).ln() / hat.norm().ln()).clamp(10.0, 40_000.0) as u32;
        let mut acc = Kahan::new();
        let mut pk = hat;
        for _ in 0..k_adapt {
            let next = pk * hat;
            acc.add((next - pk).norm());
            pk = next;
        }
        worst = worst.max((acc.value() - closed).abs() / closed);
    }
    checks.push(OracleCheck { name: "geometric tail, closed vs truncated", worst, tol: 1e-8 });

    // box difference L2 norm vs its closed form, relative error
    let mut rng = trial_rng(cli.seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let eps_k = (-rng.gen_range(-3.0..14.0f64)).exp();
        let eps_k1 = eps_k * rng.gen_range(0.05..0.95);
        let (numeric, closed) = box_difference_l2(eps_k, eps_k1);
        worst = worst.max((numeric - closed).abs() / closed);
    }
    checks.push(OracleCheck { name: "box difference L2, step vs closed", worst, tol: 1e-12 });

    // point-mass block sums: ratio formula vs exhaustive grid at J = 6
    let mut worst = 0.0f64;
    for kind in [
        SequenceKind::Identity,
        SequenceKind::Geometric { q: 2 },
        SequenceKind::Power { p: 2.0 },
    ] {
        let seq = build_sequence(kind, 8, WeightPreset::Unit)?;
        let direct = point_mass_block_sum_direct(&seq, 6).map_err(|e| Failure::Budget(e.to_string()))?;
        worst = worst.max((point_mass_block_sum(&seq, 6) - direct).abs());
    }
    checks.push(OracleCheck { name: "block sums, formula vs grid (J=6)", worst, tol: 1e-12 });

    // exact-phase rational angles vs plain radians
    let mut rng = trial_rng(cli.seed, 3);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let i = rng.gen_range(1i64..4096);
        let n = rng.gen_range(1u128..2000);
        let exact = Angle::rational_pi(i, 4096).expect("denominator in range");
        let d = (cesaro_multiplier(n, exact)
            - cesaro_multiplier(n, Angle::real(PI * i as f64 / 4096.0)))
        .norm();
        worst = worst.max(d);
    }
    checks.push(OracleCheck { name: "rational vs real angles", worst, tol: 1e-9 });

    let mut failed = Vec::new();
    for c in &checks {
        let ok = c.worst <= c.tol;
        println!(
            "{} {:<40} worst {:.3e}  tol {:.0e}",
            if ok { "ok  " } else { "FAIL" },
            c.name,
            c.worst,
            c.tol
        );
        if !ok {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Criterion(format!("oracle mismatch: {}", failed.join(", "))))
    }
}

// ─── rotation ───────────────────────────────────────────────────────────────

fn cmd_rotation(cli: &Cli) -> Result<(), Failure> {
    let (jobs, text) = match &cli.config {
        Some(_) => {
            let text = read_config(cli)?;
            (parse_rotation_config(&text)?, Some(text))
        }
        None => (
            vec![RotationJob { name: "golden-tents".into(), l_half: 1000, k_max: 10, alpha: None }],
            None,
        ),
    };
    let manifest = manifest_skeleton(cli, "rotation", text);
    let mut table = ScanTable::new();
    let mut notes = Vec::new();
    for job in &jobs {
        let alpha = match job.alpha {
            Some(a) => RotationNumber::new(a)?,
            None => RotationNumber::golden(),
        };
        let (f, tent) = build_tent_pair(alpha, job.l_half)?;
        let seq = build_sequence(SequenceKind::Identity, job.k_max + 2, WeightPreset::Unit)?;
        let rows = series_diagnostics(&f, alpha, &seq, job.k_max)?;
        let downgraded = rows.iter().filter(|r| r.downgraded).count();
        for r in &rows {
            let mut push = |suffix: &str, value: f64| {
                table.push(ScanRow {
                    kernel: "rotation".into(),
                    sequence: format!("{}:{suffix}", job.name),
                    k: r.k,
                    p: 1.0,
                    frequency: r.n as f64,
                    value,
                    refined: false,
                });
            };
            push("A", r.sup_sum);
            push("U", r.stacked_sup);
            push("A/U", r.sup_sum / r.stacked_sup);
        }
        let last = rows.last().expect("k_max >= 1");
        println!(
            "[{}] alpha={:.12} L={} A_{}={:.4} U_{}={:.4} ratio={:.4}{}",
            job.name,
            alpha.value(),
            job.l_half,
            last.k,
            last.sup_sum,
            last.k,
            last.stacked_sup,
            last.sup_sum / last.stacked_sup,
            if downgraded > 0 { format!(" ({downgraded} downgraded rows)") } else { String::new() },
        );
        notes.push(format!(
            "{}: L={} arc={:.6e} centers=({:.6},{:.6}) gap={:.6e} downgraded={}",
            job.name, tent.l_half, tent.arc_length, tent.center_a, tent.center_b,
            tent.orbit_gap, downgraded,
        ));
    }
    table.sort();
    write_outputs(
        cli,
        manifest,
        &[("rotation.csv", table.to_csv())],
        format!("ok; {}", notes.join("; ")),
    )
}

// ─── verify / plot ──────────────────────────────────────────────────────────

fn cmd_verify(cli: &Cli) -> Result<(), Failure> {
    let reports = verify::run(cli.only.as_deref());
    if reports.is_empty() {
        return Err(Failure::Config(format!(
            "--only `{}` matches no criterion",
            cli.only.as_deref().unwrap_or("")
        )));
    }
    let mut failed = 0;
    for r in &reports {
        println!("{}", verify::format_line(r));
        if !r.passed {
            println!("    {}", r.detail);
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed > 0 {
        return Err(Failure::Criterion(format!("{failed} criteria failed")));
    }
    Ok(())
}

fn cmd_plot(cli: &Cli, table_path: &Path, kind_raw: &str) -> Result<(), Failure> {
    let text = fs::read_to_string(table_path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", table_path.display())))?;
    let table = ScanTable::from_csv(&text).map_err(Failure::Config)?;
    let kind = PlotKind::parse(kind_raw).ok_or_else(|| {
        Failure::Config(format!(
            "unknown plot kind `{kind_raw}` (use sup-vs-k | s-vs-frequency | au-ratio)"
        ))
    })?;
    let svg = emit_plot(&table, kind).map_err(|e| match e {
        ReportError::EmptyTable => Failure::Config("table has no rows to plot".into()),
        ReportError::Io(io) => Failure::Other(io.to_string()),
    })?;
    let manifest = manifest_skeleton(cli, "plot", None);
    let outcome = format!("ok: {} rows, kind {kind_raw}", table.rows().len());
    write_outputs(cli, manifest, &[("plot.svg", svg)], outcome)
}
