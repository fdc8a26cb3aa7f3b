//! Experiment driver: builds kernels, runs surveys/schedules, and emits
//! machine-readable artifacts.
//!
//! Every run prints a JSON summary to stdout whose `config` field is the
//! canonical serialized configuration; CSV artifacts (when requested via
//! `--out`) are byte-reproducible given the same config.
//!
//! Exit codes: 0 success, 2 configuration error, 3 assertion failure,
//! 4 resource cap exceeded.

mod config;

use clap::{Args, Parser, Subcommand};
use config::{calibration_from, ExperimentConfig};
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;
use sumlab::bilinear::{self, CoefSeq};
use sumlab::complete::{self, survey};
use sumlab::ffield::{ExtFieldCtx, PrimeFieldCtx};
use sumlab::tracefn::{export, KernelSpec, TraceTable};
use sumlab::{checks, goursat};

/// Error classified by exit code.
#[derive(Debug)]
enum CliError {
    /// Exit 2: bad flags, bad kernel id, invalid field, range violation.
    Config(String),
    /// Exit 3: a verified identity or invariant failed.
    Assertion(String),
    /// Exit 4: an enumeration or table exceeded its cap.
    Cap(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Assertion(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Assertion(m) | CliError::Cap(m) => m,
        }
    }
}

fn field_err(e: sumlab::ffield::FieldError) -> CliError {
    use sumlab::ffield::FieldError::*;
    match e {
        TooLarge(_) => CliError::Cap(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn trace_err(e: sumlab::tracefn::TraceError) -> CliError {
    use sumlab::tracefn::TraceError::*;
    match e {
        ExtensionTooLarge(_) => CliError::Cap(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn complete_err(e: complete::CompleteError) -> CliError {
    use complete::CompleteError::*;
    match e {
        TooLarge(_) | BoxTooLarge(_) | DegreeOverflow => CliError::Cap(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn bilinear_err(e: bilinear::BilinearError) -> CliError {
    use bilinear::BilinearError::*;
    match e {
        TooLarge(_) => CliError::Cap(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn goursat_err(e: goursat::GroupError) -> CliError {
    use goursat::GroupError::*;
    match e {
        OrderCapExceeded | TooManyGenerators | TableTooLarge(_) => {
            CliError::Cap(e.to_string())
        }
        NotIntegral(_) | NotMultiplicative => CliError::Assertion(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

#[derive(Parser)]
#[command(
    name = "sumlab-cli",
    about = "Exponential-sum experiments over prime fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by kernel-driven commands.
#[derive(Args, Clone)]
struct KernelArgs {
    /// Kernel id, e.g. kl:2, toric:1,1,1, fiber:0,0,1
    #[arg(long)]
    kernel: String,
    /// Prime field order
    #[arg(long)]
    q: u64,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write per-row CSV to this path
    #[arg(long)]
    out: Option<String>,
    /// Calibration override, repeatable: --cal c_q=25
    #[arg(long = "cal", value_parser = parse_cal)]
    cal: Vec<(String, f64)>,
}

fn parse_cal(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("bad calibration value {value:?}"))?;
    Ok((name.to_string(), v))
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a kernel and dump it as CSV
    KernelDump {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Extension degree n (tabulate over F_{q^n})
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Survey cancellation of complete sums over random and diagonal shifts
    SurveyCancel {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        c: i64,
        /// Random tuples to sample
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Permutation-diagonal tuples to sample
        #[arg(long, default_value_t = 200)]
        diag: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep sums of products over random twist tuples
    Sop {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the moment of a complete sum both directly and through
    /// the exchange identity, and verify they agree
    Moments {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        c: i64,
        /// Extension degree n (run over F_{q^n})
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bilinear-form schedule over primes: Type I/II values or operator norms
    Bilinear {
        /// Kernel id
        #[arg(long)]
        kernel: String,
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        /// M = ceil(q^mexp)
        #[arg(long, default_value_t = 0.45)]
        mexp: f64,
        /// N = ceil(q^nexp)
        #[arg(long, default_value_t = 0.45)]
        nexp: f64,
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// opnorm | type1 | type2
        #[arg(long, default_value = "opnorm")]
        mode: String,
        /// Coefficient model for type1/type2: ones | signs | unit
        #[arg(long, default_value = "signs")]
        coef: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One trilinear sum with its pushforward contraction check
    Trilinear {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 1)]
        a: i64,
        #[arg(long, default_value_t = 1)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long = "bigj", default_value_t = 8)]
        big_j: u64,
        #[arg(long = "bigm", default_value_t = 8)]
        big_m: u64,
        #[arg(long = "bign", default_value_t = 8)]
        big_n: u64,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare a bilinear form against its reduction right-hand side
    Holder {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 1)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long = "bigm", default_value_t = 10)]
        big_m: u64,
        #[arg(long = "bign", default_value_t = 10)]
        big_n: u64,
        #[arg(long = "bigv", default_value_t = 1)]
        big_v: u64,
        /// Use the Type II reduction (β present)
        #[arg(long)]
        type2: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a ν-count table and verify its mass and norm bounds
    Nu {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        b: i64,
        #[arg(long, default_value_t = 1)]
        c: i64,
        #[arg(long = "bigm", default_value_t = 10)]
        big_m: u64,
        #[arg(long = "bign", default_value_t = 10)]
        big_n: u64,
        #[arg(long = "bigu", default_value_t = 2)]
        big_u: u64,
        #[arg(long = "bigv", default_value_t = 1)]
        big_v: u64,
        /// Build the second-moment table ν₂(r, s₁, s₂) instead
        #[arg(long)]
        nu2: bool,
        /// Coefficient model: ones | signs | unit
        #[arg(long, default_value = "ones")]
        coef: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit the structural certificate of a demo group
    Goursat {
        /// z6 | a5 | s5 | sl2_3 | sl2_5 | all
        #[arg(long, default_value = "all")]
        group: String,
    },
    /// Run the named invariant checks
    Selftest {
        /// Run only the fast structural subset
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn prime_ctx(q: u64) -> Result<PrimeFieldCtx, CliError> {
    PrimeFieldCtx::new(q).map_err(field_err)
}

fn tabulate(ctx: &PrimeFieldCtx, id: &str) -> Result<(KernelSpec, TraceTable), CliError> {
    let spec = KernelSpec::parse(id).map_err(trace_err)?;
    let k = spec.tabulate(ctx).map_err(trace_err)?;
    Ok((spec, k))
}

fn coef_seq(model: &str, start: u64, seed: u64) -> Result<CoefSeq, CliError> {
    match model {
        "ones" => Ok(CoefSeq::ones(start)),
        "signs" => Ok(CoefSeq::signs(start, seed)),
        "unit" => Ok(CoefSeq::unit_random(start, seed)),
        other => Err(CliError::Config(format!(
            "unknown coefficient model {other:?} (want ones|signs|unit)"
        ))),
    }
}

fn open_out(path: &Option<String>) -> Result<Option<BufWriter<File>>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => File::create(p)
            .map(|f| Some(BufWriter::new(f)))
            .map_err(|e| CliError::Config(format!("cannot create {p}: {e}"))),
    }
}

fn emit(summary: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::KernelDump { kernel, ext, out } => kernel_dump(kernel, ext, out),
        Command::SurveyCancel {
            kernel,
            l,
            c,
            samples,
            diag,
            seed,
            out,
        } => survey_cancel(kernel, l, c, samples, diag, seed, out),
        Command::Sop {
            kernel,
            l,
            samples,
            seed,
            out,
        } => sop(kernel, l, samples, seed, out),
        Command::Moments {
            kernel,
            l,
            m,
            c,
            ext,
            out,
        } => moments(kernel, l, m, c, ext, out),
        Command::Bilinear {
            kernel,
            schedule,
            b,
            c,
            mexp,
            nexp,
            l,
            mode,
            coef,
            seed,
            out,
        } => bilinear_schedule(kernel, schedule, b, c, mexp, nexp, l, mode, coef, seed, out),
        Command::Trilinear {
            kernel,
            a,
            b,
            c,
            big_j,
            big_m,
            big_n,
            l,
            seed,
            out,
        } => trilinear(kernel, a, b, c, big_j, big_m, big_n, l, seed, out),
        Command::Holder {
            kernel,
            b,
            c,
            l,
            big_m,
            big_n,
            big_v,
            type2,
            seed,
            out,
        } => holder(kernel, b, c, l, big_m, big_n, big_v, type2, seed, out),
        Command::Nu {
            q,
            b,
            c,
            big_m,
            big_n,
            big_u,
            big_v,
            nu2,
            coef,
            seed,
            out,
        } => nu(q, b, c, big_m, big_n, big_u, big_v, nu2, coef, seed, out),
        Command::Goursat { group } => goursat_cmd(group),
        Command::Selftest { quick } => selftest(quick),
    }
}

fn kernel_dump(kernel: KernelArgs, ext: u32, out: OutArgs) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("kernel-dump");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.ext = Some(ext);
    cfg.out = out.out.clone();
    cfg.calibration = out.cal.clone();

    let ctx = prime_ctx(kernel.q)?;
    let spec = KernelSpec::parse(&kernel.kernel).map_err(trace_err)?;
    let table = if ext <= 1 {
        spec.tabulate(&ctx).map_err(trace_err)?
    } else {
        let ef = ExtFieldCtx::new(&ctx, ext).map_err(field_err)?;
        spec.tabulate_in(&ef).map_err(trace_err)?
    };
    if let Some(mut w) = open_out(&out.out)? {
        export::write_csv(&table, &mut w)
            .map_err(|e| CliError::Config(format!("write failed: {e}")))?;
    }
    emit(json!({
        "config": cfg.canonical(),
        "kernel": spec.label(),
        "field_order": table.q,
        "sup_norm": table.sup_norm(),
        "max_imag": table.max_imag(),
        "purity_violations": table.purity_violations().len(),
    }));
    Ok(())
}

fn survey_cancel(
    kernel: KernelArgs,
    l: usize,
    c: i64,
    samples: usize,
    diag: usize,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("survey-cancel");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.l = Some(l);
    cfg.c = Some(c);
    cfg.samples = Some(samples);
    cfg.diagonal_samples = Some(diag);
    cfg.seed = Some(seed);
    cfg.out = out.out.clone();
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(kernel.q)?;
    let (_, k) = tabulate(&ctx, &kernel.kernel)?;
    let report = survey::diagonal_survey(&ctx, &k, l, c, samples, diag, seed, &cal);

    if let Some(mut w) = open_out(&out.out)? {
        writeln!(w, "v,re,im,abs,exponent,bucket,diagonal")
            .map_err(|e| CliError::Config(e.to_string()))?;
        for row in &report.rows {
            let vs = row
                .v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                w,
                "{vs},{:.17e},{:.17e},{:.17e},{:.6},{},{}",
                row.value.re, row.value.im, row.abs, row.exponent, row.bucket, row.diagonal
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    emit(json!({
        "config": cfg.canonical(),
        "q": report.q,
        "kernel": report.kernel,
        "thresholds": report.thresholds,
        "bucket_counts": report.bucket_counts,
        "diag_bucket_counts": report.diag_bucket_counts,
        "n_random": report.n_random,
        "n_diagonal": report.n_diagonal,
    }));
    Ok(())
}

fn sop(
    kernel: KernelArgs,
    l: usize,
    samples: usize,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    use sumlab::rand_seeded;

    let mut cfg = ExperimentConfig::new("sop");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.l = Some(l);
    cfg.samples = Some(samples);
    cfg.seed = Some(seed);
    cfg.out = out.out.clone();
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(kernel.q)?;
    let (_, k) = tabulate(&ctx, &kernel.kernel)?;
    let mut rng = rand_seeded(seed);
    let threshold = cal.c_sop * (kernel.q as f64).sqrt();
    let mut within = 0usize;
    let mut rows = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = complete::random_tuple(&mut rng, kernel.q, 2 * l);
        let value = complete::sum_of_products(&ctx, &k, l, &u);
        if value.norm() <= threshold {
            within += 1;
        }
        rows.push((u, value));
    }
    if let Some(mut w) = open_out(&out.out)? {
        writeln!(w, "u,re,im,abs").map_err(|e| CliError::Config(e.to_string()))?;
        for (u, value) in &rows {
            let us = u
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(w, "{us},{:.17e},{:.17e},{:.17e}", value.re, value.im, value.norm())
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    emit(json!({
        "config": cfg.canonical(),
        "q": kernel.q,
        "threshold": threshold,
        "within_threshold": within,
        "samples": samples,
        "fraction": within as f64 / samples.max(1) as f64,
    }));
    Ok(())
}

fn moments(
    kernel: KernelArgs,
    l: usize,
    m: usize,
    c: i64,
    ext: u32,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("moments");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.l = Some(l);
    cfg.m = Some(m);
    cfg.c = Some(c);
    cfg.ext = Some(ext);
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(kernel.q)?;
    let spec = KernelSpec::parse(&kernel.kernel).map_err(trace_err)?;
    let report = complete::moment_sigma_i(&ctx, &spec, l, m, ext, c).map_err(complete_err)?;
    let identity = complete::moment_identity_holds(&report);
    let bounded = report.direct <= cal.c_moment * report.bound_shape;
    emit(json!({
        "config": cfg.canonical(),
        "report": report,
        "identity_holds": identity,
        "bounded": bounded,
        "moment_constant_cap": cal.c_moment,
    }));
    if !identity {
        return Err(CliError::Assertion(format!(
            "exchange identity failed: relative error {:.3e}",
            report.rel_err
        )));
    }
    if !bounded {
        return Err(CliError::Assertion(format!(
            "moment {} exceeds {} x bound shape {}",
            report.direct, cal.c_moment, report.bound_shape
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bilinear_schedule(
    kernel: String,
    schedule: Vec<u64>,
    b: i64,
    c: i64,
    mexp: f64,
    nexp: f64,
    l: usize,
    mode: String,
    coef: String,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("bilinear");
    cfg.kernel = Some(kernel.clone());
    cfg.schedule = Some(schedule.clone());
    cfg.b = Some(b);
    cfg.c = Some(c);
    cfg.mexp = Some(mexp);
    cfg.nexp = Some(nexp);
    cfg.l = Some(l);
    cfg.mode = Some(mode.clone());
    cfg.coef = Some(coef.clone());
    cfg.seed = Some(seed);
    cfg.out = out.out.clone();
    cfg.calibration = out.cal.clone();

    if schedule.is_empty() {
        return Err(CliError::Config("empty prime schedule".into()));
    }
    let mut rows = Vec::new();
    for &q in &schedule {
        let ctx = prime_ctx(q)?;
        let (_, k) = tabulate(&ctx, &kernel)?;
        let m_start = (q as f64).powf(mexp).ceil() as u64;
        let n_start = (q as f64).powf(nexp).ceil() as u64;
        // Range hypotheses of the underlying estimates.
        let n_floor = 10.0 * (q as f64).powf(3.0 / (2.0 * l as f64));
        if (n_start as f64) < n_floor {
            eprintln!(
                "warning: q = {q}: N = {n_start} is below the hypothesis floor \
                 10 q^(3/(2l)) = {n_floor:.1}"
            );
        }
        let row = match mode.as_str() {
            "opnorm" => {
                let rep = bilinear::operator_norm(&ctx, &k, b, c, m_start, n_start, 100, seed)
                    .map_err(bilinear_err)?;
                if !rep.converged {
                    eprintln!("warning: q = {q}: power-iteration seeds did not agree");
                }
                json!({
                    "q": q, "m_start": m_start, "n_start": n_start,
                    "sigma_max": rep.sigma_max, "ratio": rep.ratio,
                    "converged": rep.converged,
                })
            }
            "type1" => {
                let alpha = coef_seq(&coef, m_start, seed)?;
                let rep = bilinear::type1_sum(&ctx, &k, b, c, &alpha, n_start, l)
                    .map_err(bilinear_err)?;
                json!({
                    "q": q, "m_start": m_start, "n_start": n_start,
                    "abs": rep.value.norm(), "trivial_bound": rep.trivial_bound,
                    "predicted_rhs": rep.predicted_rhs, "ratio": rep.ratio,
                })
            }
            "type2" => {
                let alpha = coef_seq(&coef, m_start, seed)?;
                let beta = coef_seq(&coef, n_start, seed.wrapping_add(1))?;
                let rep = bilinear::type2_sum(&ctx, &k, b, c, &alpha, &beta, l)
                    .map_err(bilinear_err)?;
                json!({
                    "q": q, "m_start": m_start, "n_start": n_start,
                    "abs": rep.value.norm(), "trivial_bound": rep.trivial_bound,
                    "predicted_rhs": rep.predicted_rhs, "ratio": rep.ratio,
                })
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown mode {other:?} (want opnorm|type1|type2)"
                )))
            }
        };
        rows.push(row);
    }

    // Least-squares slope of ln(ratio) against ln(q).
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let q = r["q"].as_u64()? as f64;
            let ratio = r["ratio"].as_f64()?;
            (ratio > 0.0).then(|| (q.ln(), ratio.ln()))
        })
        .collect();
    let slope = ls_slope(&points);

    if let Some(mut w) = open_out(&out.out)? {
        writeln!(w, "q,m_start,n_start,ratio").map_err(|e| CliError::Config(e.to_string()))?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{:.17e}",
                r["q"], r["m_start"], r["n_start"],
                r["ratio"].as_f64().unwrap_or(0.0)
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    emit(json!({
        "config": cfg.canonical(),
        "rows": rows,
        "log_slope": slope,
    }));
    Ok(())
}

fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    (denom.abs() > 1e-12).then(|| (n * sxy - sx * sy) / denom)
}

#[allow(clippy::too_many_arguments)]
fn trilinear(
    kernel: KernelArgs,
    a: i64,
    b: i64,
    c: i64,
    big_j: u64,
    big_m: u64,
    big_n: u64,
    l: usize,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("trilinear");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.a = Some(a);
    cfg.b = Some(b);
    cfg.c = Some(c);
    cfg.big_j = Some(big_j);
    cfg.big_m = Some(big_m);
    cfg.big_n = Some(big_n);
    cfg.l = Some(l);
    cfg.seed = Some(seed);
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(kernel.q)?;
    let (_, k) = tabulate(&ctx, &kernel.kernel)?;
    let alpha = CoefSeq::unit_random(big_j, seed);
    let beta = CoefSeq::unit_random(big_m, seed.wrapping_add(1));
    let gamma = CoefSeq::unit_random(big_n, seed.wrapping_add(2));
    let rep = bilinear::trilinear_sum(&ctx, &k, a, b, c, &alpha, &beta, &gamma, l)
        .map_err(bilinear_err)?;
    let (_, _, push) = bilinear::xi_zeta(&ctx, &k, a, b, c, &alpha, &beta, &gamma, &cal)
        .map_err(bilinear_err)?;
    emit(json!({
        "config": cfg.canonical(),
        "report": rep,
        "pushforward": push,
    }));
    if push.identity_rel_err > sumlab::TOL_IDENTITY {
        return Err(CliError::Assertion(format!(
            "contraction identity failed: {:.3e}",
            push.identity_rel_err
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn holder(
    kernel: KernelArgs,
    b: i64,
    c: i64,
    l: usize,
    big_m: u64,
    big_n: u64,
    big_v: u64,
    type2: bool,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("holder");
    cfg.kernel = Some(kernel.kernel.clone());
    cfg.q = Some(kernel.q);
    cfg.b = Some(b);
    cfg.c = Some(c);
    cfg.l = Some(l);
    cfg.big_m = Some(big_m);
    cfg.big_n = Some(big_n);
    cfg.big_v = Some(big_v);
    cfg.mode = Some(if type2 { "type2" } else { "type1" }.to_string());
    cfg.seed = Some(seed);
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(kernel.q)?;
    let (_, k) = tabulate(&ctx, &kernel.kernel)?;
    let alpha = CoefSeq::signs(big_m, seed);
    let beta = type2.then(|| CoefSeq::signs(big_n, seed.wrapping_add(1)));
    let rep = bilinear::holder_chain_report(
        &ctx,
        &k,
        b,
        c,
        l,
        &alpha,
        beta.as_ref(),
        big_n,
        big_v,
        &cal,
        seed,
    )
    .map_err(bilinear_err)?;
    emit(json!({
        "config": cfg.canonical(),
        "report": rep,
    }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn nu(
    q: u64,
    b: i64,
    c: i64,
    big_m: u64,
    big_n: u64,
    big_u: u64,
    big_v: u64,
    nu2: bool,
    coef: String,
    seed: u64,
    out: OutArgs,
) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("nu");
    cfg.q = Some(q);
    cfg.b = Some(b);
    cfg.c = Some(c);
    cfg.big_m = Some(big_m);
    cfg.big_n = Some(big_n);
    cfg.big_u = Some(big_u);
    cfg.big_v = Some(big_v);
    cfg.mode = Some(if nu2 { "nu2" } else { "nu" }.to_string());
    cfg.coef = Some(coef.clone());
    cfg.seed = Some(seed);
    cfg.out = out.out.clone();
    cfg.calibration = out.cal.clone();
    let cal = calibration_from(&out.cal).map_err(CliError::Config)?;

    let ctx = prime_ctx(q)?;
    let alpha = coef_seq(&coef, big_m, seed)?;
    if nu2 {
        let (map, rep) =
            bilinear::nu2_table(&ctx, b, c, &alpha, big_n, big_u, &cal).map_err(bilinear_err)?;
        if let Some(mut w) = open_out(&out.out)? {
            writeln!(w, "r,s1,s2,weight").map_err(|e| CliError::Config(e.to_string()))?;
            let mut keys: Vec<_> = map.keys().copied().collect();
            keys.sort_unstable();
            for (r, s1, s2) in keys {
                writeln!(w, "{r},{s1},{s2},{:.17e}", map[&(r, s1, s2)])
                    .map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        emit(json!({ "config": cfg.canonical(), "report": rep }));
        check_nu_bounds(&rep)
    } else {
        let (map, rep) = bilinear::nu_table(&ctx, b, c, &alpha, big_n, big_u, big_v, &cal)
            .map_err(bilinear_err)?;
        if let Some(mut w) = open_out(&out.out)? {
            writeln!(w, "r,s,weight").map_err(|e| CliError::Config(e.to_string()))?;
            let mut keys: Vec<_> = map.keys().copied().collect();
            keys.sort_unstable();
            for (r, s) in keys {
                writeln!(w, "{r},{s},{:.17e}", map[&(r, s)])
                    .map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        emit(json!({ "config": cfg.canonical(), "report": rep }));
        check_nu_bounds(&rep)
    }
}

fn check_nu_bounds(rep: &bilinear::NuReport) -> Result<(), CliError> {
    if rep.l1 > rep.l1_bound || rep.l2_sq > rep.l2_bound {
        return Err(CliError::Assertion(format!(
            "nu norms exceed their bounds: l1 {} vs {}, l2_sq {} vs {}",
            rep.l1, rep.l1_bound, rep.l2_sq, rep.l2_bound
        )));
    }
    Ok(())
}

fn goursat_cmd(group: String) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("goursat");
    cfg.group = Some(group.clone());
    let names: Vec<&str> = if group == "all" {
        vec!["z6", "a5", "s5", "sl2_3", "sl2_5"]
    } else {
        vec![group.as_str()]
    };
    let certs = names
        .iter()
        .map(|n| goursat::certificate(n).map_err(goursat_err))
        .collect::<Result<Vec<_>, _>>()?;
    emit(json!({
        "config": cfg.canonical(),
        "certificates": certs,
    }));
    Ok(())
}

fn selftest(quick: bool) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::new("selftest");
    cfg.mode = Some(if quick { "quick" } else { "full" }.to_string());
    let quick_set = [
        "field-inverses",
        "gauss-modulus",
        "kloosterman-purity",
        "convolution-oracle",
    ];
    let outcomes: Vec<_> = checks::run_all()
        .into_iter()
        .filter(|o| !quick || quick_set.contains(&o.name))
        .collect();
    for o in &outcomes {
        println!(
            "{} {} — {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    println!(
        "selftest: {}/{} passed  (config: {})",
        outcomes.len() - failed.len(),
        outcomes.len(),
        cfg.canonical()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(format!("checks failed: {}", failed.join(", "))))
    }
}
