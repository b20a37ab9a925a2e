//! kfree: experiments on modified character sums over k-free integers.
//!
//! Every run resolves its parameters (flags override the optional JSON
//! config), executes one command, writes any CSVs plus exactly one
//! RunRecord JSON into the output directory, and exits 0 on success, 1 on
//! a validation error, 2 on a computation error or a failed check.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kfree_core::analytic::EvalBudget;
use kfree_core::character::{
    f_values, modified_values, periodic_values, ModifiedCharacter, QuadraticCharacter,
};
use kfree_core::coeff::{
    h_coefficients, htilde_coefficients, nu_values, psi_values, verify_factorization,
    CoefficientSequence, QCoreSet,
};
use kfree_core::error::{Error, ErrorCategory};
use kfree_core::experiment::{
    ab_split_sums, f_partial_sum_series, fit_exponent, l_over_s_integral, perron_check,
    second_moment_l, tail_decay_experiment, CheckpointSeries, ProofSplitConfig,
    DEFAULT_MOMENT_STEP,
};
use kfree_core::sieve::{kfree_indicator, mobius_values, KFreeParams, SieveTable};
use kfree_core::{Real, C64};

use config::{
    parse_complex, parse_count, parse_count_list, parse_real, parse_real_list, CharacterSpec,
    FileConfig, OUT_DIR_ENV,
};
use output::Run;

#[derive(Parser)]
#[command(name = "kfree", version, about = "Character sums over k-free integers")]
struct Cli {
    /// JSON config file with defaults; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: $KFREE_OUT_DIR, then ".")
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Target absolute error for series evaluations
    #[arg(long, global = true)]
    abs_err: Option<f64>,

    /// Largest |t| the analytic engine accepts
    #[arg(long, global = true)]
    max_t: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CharArgs {
    /// k of "k-free" (≥ 2)
    #[arg(long)]
    k: Option<u32>,

    /// Character source: d=<fundamental discriminant> or table=<json path>
    #[arg(long)]
    character: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sieve and report prime / Möbius / k-free statistics
    SieveStats {
        #[command(flatten)]
        ch: CharArgs,
        /// Sieve limit (scientific notation accepted)
        #[arg(long)]
        limit: Option<String>,
    },
    /// Export a coefficient sequence as CSV rows n,value (zeros omitted)
    DumpCoeffs {
        #[command(flatten)]
        ch: CharArgs,
        /// One of: f, g, chi, mu, kfree, nu, psi, h, htilde, core
        #[arg(long)]
        which: Option<String>,
        /// Materialization limit
        #[arg(long)]
        n: Option<String>,
        /// Sign of g at primes dividing q (+1 or -1)
        #[arg(long, allow_negative_numbers = true)]
        bad_prime_sign: Option<i8>,
        /// CSV file name
        #[arg(long)]
        out: Option<String>,
    },
    /// Check f = chi*h (even k) / f = chi*htilde (odd k) exactly to n
    VerifyIdentity {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        n: Option<String>,
    },
    /// Checkpointed partial sums of f with exact running maxima
    Sums {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        x_max: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        bad_prime_sign: Option<i8>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Fit the growth exponent of the running maximum
    Fit {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        x_max: Option<String>,
        /// Top fraction of checkpoints used by the fit
        #[arg(long)]
        window_fraction: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        bad_prime_sign: Option<i8>,
        /// Optional CSV of the underlying series
        #[arg(long)]
        out: Option<String>,
    },
    /// Split the partial sum at x into A (a ≤ y) + B (a > y)
    AbSplit {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        x: Option<String>,
        /// Truncation point (default x^{2kβ/(2kβ+1)})
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        epsilon_slack: Option<f64>,
    },
    /// Compare the Perron integral of F(s)x^s/s with the exact sum
    PerronCheck {
        #[command(flatten)]
        ch: CharArgs,
        /// Half-integer evaluation point
        #[arg(long)]
        x: Option<String>,
        /// Integration height T
        #[arg(long)]
        t: Option<String>,
        /// Line real part (default 1 + 1/log x)
        #[arg(long)]
        sigma0: Option<f64>,
    },
    /// Tabulate |H_y(s)| over a y grid and fit decay slopes
    TailDecay {
        #[command(flatten)]
        ch: CharArgs,
        /// Evaluation point(s), e.g. 0.6+10i (repeatable)
        #[arg(long = "s")]
        s_points: Vec<String>,
        /// Comma-separated ascending y grid
        #[arg(long)]
        y_list: Option<String>,
        /// CSV stem; one file per s
        #[arg(long)]
        out: Option<String>,
    },
    /// Moment integrals of L(σ+it, χ) over [−T, T]
    Moments {
        #[command(flatten)]
        ch: CharArgs,
        #[arg(long)]
        sigma: Option<f64>,
        /// Comma-separated list of T values
        #[arg(long)]
        t_list: Option<String>,
        /// second-moment, l-over-s, or both
        #[arg(long)]
        which: Option<String>,
        /// Trapezoid step
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the standard battery at modest sizes
    Report {
        #[command(flatten)]
        ch: CharArgs,
    },
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
    match run(cli) {
        Ok(failed_check) => {
            if failed_check {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e.category() {
                ErrorCategory::Validation => ExitCode::from(1),
                ErrorCategory::Computation => ExitCode::from(2),
            }
        }
    }
}

/// Everything a command needs from the shared/global options.
struct Ctx {
    file: FileConfig,
    out_dir: PathBuf,
    budget: EvalBudget<Real>,
}

impl Ctx {
    fn character(
        &self,
        flag: &Option<String>,
    ) -> Result<(CharacterSpec, QuadraticCharacter), Error> {
        let text = flag
            .clone()
            .or_else(|| self.file.character.clone())
            .unwrap_or_else(|| "d=-3".to_string());
        let spec = CharacterSpec::parse(&text)?;
        let chi = spec.build()?;
        Ok((spec, chi))
    }

    fn k(&self, flag: Option<u32>) -> Result<KFreeParams, Error> {
        KFreeParams::new(flag.or(self.file.k).unwrap_or(2))
    }

    fn count(
        &self,
        flag: &Option<String>,
        file: &Option<String>,
        default: u64,
    ) -> Result<u64, Error> {
        match flag.as_ref().or(file.as_ref()) {
            Some(text) => parse_count(text),
            None => Ok(default),
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| file.out_dir.clone().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let mut budget = EvalBudget::<Real>::default();
    if let Some(e) = cli.abs_err.or(file.abs_err) {
        budget.target_abs_error = e;
    }
    if let Some(t) = cli.max_t.or(file.max_t) {
        budget.max_t = t;
    }
    budget.validate()?;
    let ctx = Ctx {
        file,
        out_dir,
        budget,
    };

    let (name, outcome) = match &cli.command {
        Command::SieveStats { ch, limit } => ("sieve-stats", cmd_sieve_stats(&ctx, ch, limit)),
        Command::DumpCoeffs {
            ch,
            which,
            n,
            bad_prime_sign,
            out,
        } => (
            "dump-coeffs",
            cmd_dump_coeffs(&ctx, ch, which, n, *bad_prime_sign, out),
        ),
        Command::VerifyIdentity { ch, n } => ("verify-identity", cmd_verify(&ctx, ch, n)),
        Command::Sums {
            ch,
            x_max,
            bad_prime_sign,
            out,
        } => ("sums", cmd_sums(&ctx, ch, x_max, *bad_prime_sign, out)),
        Command::Fit {
            ch,
            x_max,
            window_fraction,
            bad_prime_sign,
            out,
        } => (
            "fit",
            cmd_fit(&ctx, ch, x_max, *window_fraction, *bad_prime_sign, out),
        ),
        Command::AbSplit {
            ch,
            x,
            y,
            beta,
            epsilon_slack,
        } => (
            "ab-split",
            cmd_ab_split(&ctx, ch, x, y, *beta, *epsilon_slack),
        ),
        Command::PerronCheck { ch, x, t, sigma0 } => {
            ("perron-check", cmd_perron(&ctx, ch, x, t, *sigma0))
        }
        Command::TailDecay {
            ch,
            s_points,
            y_list,
            out,
        } => (
            "tail-decay",
            cmd_tail_decay(&ctx, ch, s_points, y_list, out),
        ),
        Command::Moments {
            ch,
            sigma,
            t_list,
            which,
            step,
            out,
        } => (
            "moments",
            cmd_moments(&ctx, ch, *sigma, t_list, which, *step, out),
        ),
        Command::Report { ch } => ("report", cmd_report(&ctx, ch)),
    };

    match outcome {
        Ok((run, summary, failed_check)) => {
            let record = run.finish(summary, None)?;
            eprintln!("run record: {}", record.display());
            Ok(failed_check)
        }
        Err(e) => {
            // best-effort error record
            if let Ok(run) = Run::start(name, &ctx.out_dir, json!({})) {
                let _ = run.finish(Value::Null, Some(e.to_string()));
            }
            Err(e)
        }
    }
}

type Outcome = Result<(Run, Value, bool), Error>;

fn cmd_sieve_stats(ctx: &Ctx, ch: &CharArgs, limit: &Option<String>) -> Outcome {
    let limit = ctx.count(limit, &ctx.file.limit, 1_000_000)?;
    let k = ctx.k(ch.k)?;
    let run = Run::start(
        "sieve-stats",
        &ctx.out_dir,
        json!({"limit": limit, "k": k.k()}),
    )?;
    let table = SieveTable::build(limit)?;
    let mu = mobius_values(&table, limit)?;
    let ind = kfree_indicator(&table, k, limit)?;
    let mertens: i64 = (1..=limit).map(|n| mu.get(n)).sum();
    let kfree_count: i64 = (1..=limit).map(|n| ind.get(n)).sum();
    let summary = json!({
        "limit": limit,
        "prime_count": table.prime_count(),
        "largest_prime": table.primes().last(),
        "mertens_sum": mertens,
        "kfree_count": {"k": k.k(), "count": kfree_count},
    });
    println!(
        "limit {limit}: pi = {}, M = {mertens}, {}-free count = {kfree_count}",
        table.prime_count(),
        k.k()
    );
    Ok((run, summary, false))
}

fn cmd_dump_coeffs(
    ctx: &Ctx,
    ch: &CharArgs,
    which: &Option<String>,
    n: &Option<String>,
    bad_prime_sign: Option<i8>,
    out: &Option<String>,
) -> Outcome {
    let limit = ctx.count(n, &ctx.file.n, 10_000)?;
    let k = ctx.k(ch.k)?;
    let which = which
        .clone()
        .or_else(|| ctx.file.which.clone())
        .unwrap_or_else(|| "f".to_string());
    let (spec, chi) = ctx.character(&ch.character)?;
    let sign = bad_prime_sign.or(ctx.file.bad_prime_sign).unwrap_or(1);
    let g = ModifiedCharacter::new(chi.clone(), sign)?;
    let seq = materialize(&which, k, &chi, &g, limit)?;
    let out_name = out
        .clone()
        .or_else(|| ctx.file.out.clone())
        .unwrap_or_else(|| format!("{which}.csv"));
    let mut run = Run::start(
        "dump-coeffs",
        &ctx.out_dir,
        json!({
            "which": which, "n": limit, "k": k.k(),
            "character": spec.describe(), "bad_prime_sign": sign, "out": out_name,
        }),
    )?;
    let rows = seq.iter_nonzero().map(|(n, v)| format!("{n},{v}"));
    run.write_csv(&out_name, "n,value", rows)?;
    let summary = json!({
        "name": seq.name(),
        "limit": seq.limit(),
        "support": seq.support_len(),
    });
    println!("wrote {} nonzero rows of {}", seq.support_len(), seq.name());
    Ok((run, summary, false))
}

fn materialize(
    which: &str,
    k: KFreeParams,
    chi: &QuadraticCharacter,
    g: &ModifiedCharacter,
    limit: u64,
) -> Result<CoefficientSequence, Error> {
    let table = || SieveTable::build(limit);
    let core = || QCoreSet::new(chi.modulus(), limit);
    match which {
        "f" => f_values(k, g, &table()?, limit),
        "g" => modified_values(g, &table()?, limit),
        "chi" => Ok(periodic_values(chi, limit)),
        "mu" => mobius_values(&table()?, limit),
        "kfree" => kfree_indicator(&table()?, k, limit),
        "nu" => nu_values(k, limit),
        "psi" => psi_values(k, chi, limit),
        "h" => h_coefficients(k, &core()?, limit),
        "htilde" => htilde_coefficients(k, chi, &core()?, limit),
        "core" => Ok(core()?.indicator()),
        other => Err(Error::InvalidArgument(format!(
            "unknown sequence '{other}'; use f, g, chi, mu, kfree, nu, psi, h, htilde, or core"
        ))),
    }
}

fn cmd_verify(ctx: &Ctx, ch: &CharArgs, n: &Option<String>) -> Outcome {
    let limit = ctx.count(n, &ctx.file.n, 100_000)?;
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let run = Run::start(
        "verify-identity",
        &ctx.out_dir,
        json!({"k": k.k(), "character": spec.describe(), "n": limit}),
    )?;
    let g = ModifiedCharacter::with_default_sign(chi);
    let report = verify_factorization(k, &g, limit)?;
    let summary = json!({
        "k": report.k,
        "q": report.q,
        "limit": report.limit,
        "holds": report.holds(),
        "mismatch": report.mismatch.map(|m| json!({"n": m.n, "lhs": m.lhs, "rhs": m.rhs})),
    });
    if report.holds() {
        println!("identity holds to {limit}");
    } else {
        let m = report.mismatch.unwrap();
        println!(
            "identity FAILS at n = {}: f = {}, convolution = {}",
            m.n, m.lhs, m.rhs
        );
    }
    Ok((run, summary, !report.holds()))
}

fn series_csv(run: &mut Run, name: &str, series: &CheckpointSeries) -> Result<(), Error> {
    run.write_csv(
        name,
        "x,partial_sum,running_max",
        series.rows().map(|(x, s, m)| format!("{x},{s},{m}")),
    )?;
    Ok(())
}

fn cmd_sums(
    ctx: &Ctx,
    ch: &CharArgs,
    x_max: &Option<String>,
    bad_prime_sign: Option<i8>,
    out: &Option<String>,
) -> Outcome {
    let x_max = ctx.count(x_max, &ctx.file.x_max, 1_000_000)?;
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let sign = bad_prime_sign.or(ctx.file.bad_prime_sign).unwrap_or(1);
    let out_name = out
        .clone()
        .or_else(|| ctx.file.out.clone())
        .unwrap_or_else(|| "sums.csv".to_string());
    let mut run = Run::start(
        "sums",
        &ctx.out_dir,
        json!({
            "k": k.k(), "character": spec.describe(), "x_max": x_max,
            "bad_prime_sign": sign, "out": out_name,
        }),
    )?;
    let g = ModifiedCharacter::new(chi, sign)?;
    let series = f_partial_sum_series(k, &g, x_max)?;
    series_csv(&mut run, &out_name, &series)?;
    let summary = json!({
        "x_max": x_max,
        "checkpoints": series.len(),
        "final_partial_sum": series.final_partial_sum(),
        "final_running_max": series.final_running_max(),
    });
    println!(
        "S({x_max}) = {}, running max = {}",
        series.final_partial_sum(),
        series.final_running_max()
    );
    Ok((run, summary, false))
}

fn cmd_fit(
    ctx: &Ctx,
    ch: &CharArgs,
    x_max: &Option<String>,
    window_fraction: Option<f64>,
    bad_prime_sign: Option<i8>,
    out: &Option<String>,
) -> Outcome {
    let x_max = ctx.count(x_max, &ctx.file.x_max, 1_000_000)?;
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let sign = bad_prime_sign.or(ctx.file.bad_prime_sign).unwrap_or(1);
    let wf = window_fraction.or(ctx.file.window_fraction).unwrap_or(0.5);
    let mut run = Run::start(
        "fit",
        &ctx.out_dir,
        json!({
            "k": k.k(), "character": spec.describe(), "x_max": x_max,
            "window_fraction": wf, "bad_prime_sign": sign,
        }),
    )?;
    let g = ModifiedCharacter::new(chi, sign)?;
    let series = f_partial_sum_series(k, &g, x_max)?;
    if let Some(out_name) = out.clone().or_else(|| ctx.file.out.clone()) {
        series_csv(&mut run, &out_name, &series)?;
    }
    let fit = fit_exponent(&series, wf)?;
    let kf = f64::from(k.k());
    let summary = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "window": {"x_lo": fit.window.0, "x_hi": fit.window.1},
        "points_used": fit.points_used,
        "reference_exponents": {
            "proved_bound": 1.0 / (kf + 1.0),
            "conjectured": 1.0 / (2.0 * kf),
        },
        "caveat": "finite-x fit; implied constants and epsilon are not observable",
    });
    println!(
        "fitted exponent {:.4} (r2 {:.4}) against references 1/(k+1) = {:.4} and 1/(2k) = {:.4}",
        fit.slope,
        fit.r_squared,
        1.0 / (kf + 1.0),
        1.0 / (2.0 * kf)
    );
    Ok((run, summary, false))
}

fn cmd_ab_split(
    ctx: &Ctx,
    ch: &CharArgs,
    x: &Option<String>,
    y: &Option<String>,
    beta: Option<f64>,
    epsilon_slack: Option<f64>,
) -> Outcome {
    let x = ctx.count(x, &ctx.file.x, 10_000)?;
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let beta = beta.or(ctx.file.beta).unwrap_or(0.55);
    let eps = epsilon_slack.or(ctx.file.epsilon_slack).unwrap_or(0.05);
    let mut cfg = ProofSplitConfig::new(k, x, beta, eps);
    if let Some(ytext) = y.as_ref().or(ctx.file.y.as_ref()) {
        cfg = cfg.with_y(parse_count(ytext)?);
    }
    cfg.validate()?;
    let run = Run::start(
        "ab-split",
        &ctx.out_dir,
        json!({
            "k": k.k(), "character": spec.describe(), "x": x,
            "y": cfg.resolved_y(), "beta": beta, "epsilon_slack": eps,
            "t_default": cfg.resolved_t(),
        }),
    )?;
    let core = QCoreSet::new(chi.modulus(), x)?;
    let coeffs = if k.is_even() {
        h_coefficients(k, &core, x)?
    } else {
        htilde_coefficients(k, &chi, &core, x)?
    };
    let split = ab_split_sums(&cfg, &coeffs, &chi)?;
    let g = ModifiedCharacter::with_default_sign(chi);
    let direct: i64 = kfree_core::character::FValueStream::new(k, &g, x)?.sum();
    let exact = split.total() == direct;
    let summary = json!({
        "a": split.a, "b": split.b, "total": split.total(),
        "direct_sum": direct, "exact": exact, "y": split.y,
    });
    println!(
        "A = {}, B = {}, A+B = {} vs direct {} ({})",
        split.a,
        split.b,
        split.total(),
        direct,
        if exact { "exact" } else { "MISMATCH" }
    );
    Ok((run, summary, !exact))
}

fn cmd_perron(
    ctx: &Ctx,
    ch: &CharArgs,
    x: &Option<String>,
    t: &Option<String>,
    sigma0: Option<f64>,
) -> Outcome {
    let x = match x.as_ref().or(ctx.file.x.as_ref()) {
        Some(text) => parse_real(text)?,
        None => 100.5,
    };
    let t_max = match t.as_ref().or(ctx.file.t.as_ref()) {
        Some(text) => parse_real(text)?,
        None => 1e4,
    };
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let sigma0 = sigma0.or(ctx.file.sigma0);
    let run = Run::start(
        "perron-check",
        &ctx.out_dir,
        json!({
            "k": k.k(), "character": spec.describe(), "x": x, "t": t_max,
            "sigma0": sigma0,
        }),
    )?;
    let out = perron_check(k, &chi, x, t_max, sigma0, &ctx.budget)?;
    let summary = json!({
        "x": out.x, "t": out.t_max, "sigma0": out.sigma0,
        "direct_sum": out.direct_sum,
        "integral": {"re": out.integral.re, "im": out.integral.im},
        "residual": out.residual,
        "r_bound": out.r_bound,
        "quadrature_estimate": out.quadrature_estimate,
        "evaluations": out.evaluations,
        "pass": out.pass,
    });
    println!(
        "{}: residual {:.6} vs bound {:.6} + quadrature {:.2e} (direct {}, integral {:.6})",
        if out.pass { "PASS" } else { "FAIL" },
        out.residual,
        out.r_bound,
        out.quadrature_estimate,
        out.direct_sum,
        out.integral.re
    );
    Ok((run, summary, !out.pass))
}

fn cmd_tail_decay(
    ctx: &Ctx,
    ch: &CharArgs,
    s_points: &[String],
    y_list: &Option<String>,
    out: &Option<String>,
) -> Outcome {
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let s_texts: Vec<String> = if s_points.is_empty() {
        ctx.file.s.clone().unwrap_or_else(|| {
            // default σ = 1/k + 0.1 keeps clear of the admissible edge
            vec![format!("{}+10i", 1.0 / f64::from(k.k()) + 0.1)]
        })
    } else {
        s_points.to_vec()
    };
    let s_values: Vec<C64> = s_texts
        .iter()
        .map(|t| parse_complex(t))
        .collect::<Result<_, _>>()?;
    let ys = match y_list.as_ref().or(ctx.file.y_list.as_ref()) {
        Some(text) => parse_count_list(text)?,
        None => vec![100, 1_000, 10_000, 100_000],
    };
    let stem = out
        .clone()
        .or_else(|| ctx.file.out.clone())
        .unwrap_or_else(|| "tail".to_string());
    let stem = stem.strip_suffix(".csv").unwrap_or(&stem).to_string();
    let mut run = Run::start(
        "tail-decay",
        &ctx.out_dir,
        json!({
            "k": k.k(), "character": spec.describe(), "s": s_texts, "y_list": ys,
            "out_stem": stem,
        }),
    )?;
    let results = tail_decay_experiment(k, &chi, &s_values, &ys, &ctx.budget)?;
    let mut slopes = Vec::new();
    for (i, series) in results.iter().enumerate() {
        let name = format!("{stem}_s{i}.csv");
        run.write_csv(
            &name,
            "y,abs_H,re_H,im_H",
            series
                .points
                .iter()
                .map(|p| format!("{},{},{},{}", p.y, p.abs_value, p.re, p.im)),
        )?;
        slopes.push(json!({
            "s": {"re": series.s.re, "im": series.s.im},
            "fitted_slope": series.fitted_slope,
            "predicted_slope": series.predicted_slope,
        }));
        println!(
            "s = {}+{}i: fitted slope {:.4}, predicted {:.4}",
            series.s.re, series.s.im, series.fitted_slope, series.predicted_slope
        );
    }
    Ok((run, json!({"series": slopes}), false))
}

fn cmd_moments(
    ctx: &Ctx,
    ch: &CharArgs,
    sigma: Option<f64>,
    t_list: &Option<String>,
    which: &Option<String>,
    step: Option<f64>,
    out: &Option<String>,
) -> Outcome {
    let (spec, chi) = ctx.character(&ch.character)?;
    let sigma = sigma.or(ctx.file.sigma).unwrap_or(0.5);
    let step = step.or(ctx.file.step).unwrap_or(DEFAULT_MOMENT_STEP);
    let ts = match t_list.as_ref().or(ctx.file.t_list.as_ref()) {
        Some(text) => parse_real_list(text)?,
        None => vec![50.0, 100.0, 200.0, 400.0],
    };
    let which = which
        .clone()
        .or_else(|| ctx.file.which.clone())
        .unwrap_or_else(|| "both".to_string());
    let (do_second, do_over_s) = match which.as_str() {
        "second-moment" => (true, false),
        "l-over-s" => (false, true),
        "both" => (true, true),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown moments selector '{other}'; use second-moment, l-over-s, or both"
            )))
        }
    };
    let stem = out
        .clone()
        .or_else(|| ctx.file.out.clone())
        .unwrap_or_else(|| "moments".to_string());
    let stem = stem.strip_suffix(".csv").unwrap_or(&stem).to_string();
    let mut run = Run::start(
        "moments",
        &ctx.out_dir,
        json!({
            "character": spec.describe(), "sigma": sigma, "t_list": ts,
            "which": which, "step": step, "out_stem": stem,
        }),
    )?;
    let mut summary = serde_json::Map::new();
    if do_second {
        let mut rows = Vec::new();
        let mut ratios = Vec::new();
        for &t in &ts {
            let p = second_moment_l(&chi, sigma, t, step, &ctx.budget)?;
            rows.push(format!("{},{},{}", p.t_max, p.integral, p.ratio));
            ratios.push(json!({"t": p.t_max, "integral": p.integral, "ratio": p.ratio}));
            println!(
                "second moment T = {}: integral {:.6}, ratio {:.6}",
                t, p.integral, p.ratio
            );
        }
        run.write_csv(
            &format!("{stem}_second_moment.csv"),
            "T,integral,ratio",
            rows,
        )?;
        summary.insert("second_moment".into(), Value::Array(ratios));
    }
    if do_over_s {
        let mut rows = Vec::new();
        let mut ratios = Vec::new();
        for &t in &ts {
            let p = l_over_s_integral(&chi, sigma, t, step, &ctx.budget)?;
            rows.push(format!("{},{},{}", p.t_max, p.integral, p.ratio));
            ratios.push(json!({"t": p.t_max, "integral": p.integral, "ratio": p.ratio}));
            println!(
                "|L|/|s| T = {}: integral {:.6}, ratio {:.6}",
                t, p.integral, p.ratio
            );
        }
        run.write_csv(&format!("{stem}_l_over_s.csv"), "T,integral,ratio", rows)?;
        summary.insert("l_over_s".into(), Value::Array(ratios));
    }
    Ok((run, Value::Object(summary), false))
}

fn cmd_report(ctx: &Ctx, ch: &CharArgs) -> Outcome {
    let k = ctx.k(ch.k)?;
    let (spec, chi) = ctx.character(&ch.character)?;
    let mut run = Run::start(
        "report",
        &ctx.out_dir,
        json!({"k": k.k(), "character": spec.describe()}),
    )?;
    let mut failed = false;
    let g = ModifiedCharacter::with_default_sign(chi.clone());

    let identity = verify_factorization(k, &g, 100_000)?;
    failed |= !identity.holds();
    println!(
        "identity to 1e5: {}",
        if identity.holds() { "holds" } else { "FAILS" }
    );

    let series = f_partial_sum_series(k, &g, 1_000_000)?;
    series_csv(&mut run, "report_sums.csv", &series)?;
    let fit = fit_exponent(&series, 0.5)?;
    println!("fitted exponent to 1e6: {:.4}", fit.slope);

    let s_default = C64::new(1.0 / f64::from(k.k()) + 0.1, 10.0);
    let tails = tail_decay_experiment(
        k,
        &chi,
        &[s_default],
        &[100, 1_000, 10_000, 100_000],
        &ctx.budget,
    )?;
    run.write_csv(
        "report_tail.csv",
        "y,abs_H,re_H,im_H",
        tails[0]
            .points
            .iter()
            .map(|p| format!("{},{},{},{}", p.y, p.abs_value, p.re, p.im)),
    )?;
    println!(
        "tail slope at {}+{}i: {:.4} (predicted {:.4})",
        s_default.re, s_default.im, tails[0].fitted_slope, tails[0].predicted_slope
    );

    let mut moment_rows = Vec::new();
    for &t in &[50.0, 100.0] {
        let p = second_moment_l(&chi, 0.5, t, DEFAULT_MOMENT_STEP, &ctx.budget)?;
        moment_rows.push(format!("{},{},{}", p.t_max, p.integral, p.ratio));
    }
    run.write_csv("report_second_moment.csv", "T,integral,ratio", moment_rows)?;

    let cfg = ProofSplitConfig::new(k, 10_000, 0.55, 0.05);
    let core = QCoreSet::new(chi.modulus(), 10_000)?;
    let coeffs = if k.is_even() {
        h_coefficients(k, &core, 10_000)?
    } else {
        htilde_coefficients(k, &chi, &core, 10_000)?
    };
    let split = ab_split_sums(&cfg, &coeffs, &chi)?;
    let direct: i64 = kfree_core::character::FValueStream::new(k, &g, 10_000)?.sum();
    failed |= split.total() != direct;
    println!("A+B at 1e4: {} vs direct {}", split.total(), direct);

    let perron = perron_check(k, &chi, 10.5, 1e3, None, &ctx.budget)?;
    failed |= !perron.pass;
    println!(
        "perron at x=10.5, T=1e3: residual {:.6} ({})",
        perron.residual,
        if perron.pass { "PASS" } else { "FAIL" }
    );

    let summary = json!({
        "identity_holds": identity.holds(),
        "fitted_exponent": fit.slope,
        "tail_slope": tails[0].fitted_slope,
        "ab_split_exact": split.total() == direct,
        "perron_pass": perron.pass,
        "perron_residual": perron.residual,
    });
    Ok((run, summary, failed))
}
