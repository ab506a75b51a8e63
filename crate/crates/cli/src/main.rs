//! Command-line front end of the `fracmax` library.
//!
//! Exit status: 0 on success, 1 when a verifier recorded a violation, 2 on bad input.

mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracmax::continuous::{
    mollification_convergence, var_q_frac_max_cont, PiecewiseLinear1D, StepFunction1D,
};
use fracmax::discrete::{
    frac_max_1d_centered, frac_max_1d_uncentered, frac_max_nd_centered, frac_max_nd_uncentered,
    MaximalResult, Mode,
};
use fracmax::experiments::{self as exp, SearchMode, VerificationReport};
use fracmax::lattice::{EvaluationWindow, LatticeFunction};
use fracmax::omega::{count_lattice, count_lattice_plus, enumerate_ball, estimate_constants, ConvexBody};
use fracmax::variation::{
    var_q_discrete, var_q_maximal_1d, var_q_partition, PartitionSpec, VariationValue,
};
use table::{num, Table};

const ADAPTIVE_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "fracmax", version, about = "Fractional maximal operators and their variation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Centered,
    Uncentered,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Thm1,
    Thm2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a discrete maximal operator on a window.
    Maxfun(MaxfunArgs),
    /// q-variation of a function, or of its maximal function with --beta.
    Variation(VariationArgs),
    /// Lattice geometry of convex bodies.
    #[command(subcommand)]
    Omega(OmegaCmd),
    /// Randomized verifiers.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Dilation experiment on cube indicators.
    Scaling(ScalingArgs),
    /// Hill-climbing search for large variation ratios.
    Search(SearchArgs),
    /// Mollification convergence table of a step function.
    Convergence(ConvergenceArgs),
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct MaxfunArgs {
    /// Lattice function JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, value_enum, default_value = "uncentered")]
    mode: ModeArg,
    /// Inclusive `lo:hi` per dimension, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Body JSON file, or one of linf, l1, l2, lp:P.
    #[arg(long)]
    omega: Option<String>,
    /// Center refinement of the uncentered operator.
    #[arg(long = "k", default_value_t = 1)]
    k: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VariationArgs {
    /// Lattice, step or piecewise-linear function JSON.
    #[arg(long)]
    input: PathBuf,
    /// Exponent; defaults to 1/(1-beta) with --beta and to 1 otherwise.
    #[arg(long)]
    q: Option<f64>,
    /// Take the variation of the uncentered maximal function of order beta.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value_t = ADAPTIVE_TOL)]
    rel_tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BodyArgs {
    /// Body JSON file, or one of linf, l1, l2, lp:P.
    #[arg(long)]
    omega: String,
}

#[derive(Subcommand)]
enum OmegaCmd {
    /// Number of lattice points in a ball.
    Count {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Report max(N, 1).
        #[arg(long)]
        plus: bool,
    },
    /// Lattice points of a ball.
    Enumerate {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[command(flatten)]
        output: Output,
    },
    /// Volume and lattice-count sandwich constants.
    Constants {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = 40.0)]
        r_max: f64,
        /// Dimension for named bodies.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Gauge of a vector.
    Gauge {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the input of the first violating trial.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Discrete variation bound.
    Thm2 {
        #[arg(long, default_value_t = 64)]
        support: usize,
        #[arg(long, default_value = "0,0.25,0.5,0.75")]
        betas: String,
        #[command(flatten)]
        common: Common,
    },
    /// Continuous variation bound on step functions.
    Thm1 {
        #[arg(long, default_value_t = 20)]
        pieces: usize,
        #[arg(long, default_value = "0.25,0.5,0.75")]
        betas: String,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical constant of the gradient bound.
    Thm3 {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "linf")]
        omega: String,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Pointwise gradient bound, beta >= 1.
    Pointwise {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "linf")]
        omega: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Domination by the fractional integral.
    Domination {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "linf")]
        omega: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Monotone-segment bound.
    Segments {
        #[arg(long, default_value_t = 32)]
        support: usize,
        #[arg(long, default_value = "0,0.25,0.5,0.75")]
        betas: String,
        #[command(flatten)]
        common: Common,
    },
    /// Stability of centered radius sets.
    Radius {
        #[arg(long, default_value_t = 16)]
        support: usize,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value = "linf")]
    omega: String,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 4.0 / 3.0)]
    q: f64,
    /// `lo:hi` range or comma-separated list.
    #[arg(long, default_value = "4:40")]
    k: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    mode: SearchArg,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 16)]
    size: usize,
    #[arg(long, default_value_t = 500)]
    iterations: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the witness function JSON here.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Step function JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value = "0.2,0.1,0.05,0.025")]
    eps: String,
    #[arg(long, allow_hyphen_values = true)]
    queries: String,
    #[command(flatten)]
    output: Output,
}

/// Failure of a command: `Input` maps to status 2.
enum Failure {
    Input(String),
    Violation,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Res<T = ()> = std::result::Result<T, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Res<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| bad(format!("bad {what} entry `{t}`"))))
        .collect()
}

fn parse_window(s: &str) -> Res<EvaluationWindow> {
    let mut lo = vec![];
    let mut hi = vec![];
    for part in s.split(',') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| bad(format!("window `{part}` is not of the form lo:hi")))?;
        lo.push(a.trim().parse::<i64>().map_err(|_| bad(format!("bad window bound `{a}`")))?);
        hi.push(b.trim().parse::<i64>().map_err(|_| bad(format!("bad window bound `{b}`")))?);
    }
    Ok(EvaluationWindow::new(lo, hi)?)
}

fn parse_body(spec: &str, d: usize) -> Res<ConvexBody> {
    let body = match spec {
        "linf" => ConvexBody::linf(d)?,
        "l1" => ConvexBody::lp(d, 1.0)?,
        "l2" => ConvexBody::euclidean(d)?,
        s if s.starts_with("lp:") => {
            let p: f64 = s[3..].parse().map_err(|_| bad(format!("bad exponent in `{s}`")))?;
            ConvexBody::lp(d, p)?
        }
        path => ConvexBody::from_json(&read(Path::new(path))?)?,
    };
    if body.dim() != d {
        return Err(bad(format!("body has dimension {}, expected {d}", body.dim())));
    }
    Ok(body)
}

fn body_dim_hint(spec: &str) -> Option<usize> {
    let path = Path::new(spec);
    if path.is_file() {
        ConvexBody::from_json(&std::fs::read_to_string(path).ok()?).ok().map(|b| b.dim())
    } else {
        None
    }
}

fn read(p: &Path) -> Res<String> {
    std::fs::read_to_string(p).map_err(|e| bad(format!("cannot read {}: {e}", p.display())))
}

fn write(out: &Option<PathBuf>, content: &str) -> Res {
    match out {
        Some(p) => std::fs::write(p, content).map_err(|e| bad(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn check_beta_1d(beta: f64) -> Res {
    if (0.0..1.0).contains(&beta) {
        Ok(())
    } else {
        Err(bad(format!("beta = {beta} must lie in [0, 1)")))
    }
}

fn maxfun(a: &MaxfunArgs, header: &str) -> Res {
    let f = LatticeFunction::from_json(&read(&a.input)?)?;
    let d = f.dim();
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => f.window(),
    };
    let mode = match a.mode {
        ModeArg::Centered => Mode::Centered,
        ModeArg::Uncentered => Mode::Uncentered,
    };
    let m: MaximalResult = match (&a.omega, d, mode) {
        (None, 1, Mode::Uncentered) => frac_max_1d_uncentered(&f, a.beta, &window)?,
        (None, 1, Mode::Centered) => frac_max_1d_centered(&f, a.beta, &window)?,
        (spec, _, mode) => {
            let body = parse_body(spec.as_deref().unwrap_or("linf"), d)?;
            match mode {
                Mode::Centered => frac_max_nd_centered(&f, &body, a.beta, &window)?,
                Mode::Uncentered => frac_max_nd_uncentered(&f, &body, a.beta, &window, a.k)?,
            }
        }
    };
    if a.output.format == Some(Format::Json) {
        return write(&a.output.out, &(m.to_json() + "\n"));
    }
    let one_dim_windows = m.certificates.iter().all(|c| c.window.is_some());
    let mut cols: Vec<String> = if d == 1 { vec!["n".into()] } else { (1..=d).map(|i| format!("n{i}")).collect() };
    cols.push("value".into());
    if one_dim_windows {
        cols.extend(["r".into(), "s".into()]);
    } else {
        cols.push("radius".into());
        cols.extend((1..=d).map(|i| format!("x0_{i}")));
    }
    let mut t = Table::new(header, &cols);
    for (c, &v) in m.certificates.iter().zip(m.values.values()) {
        let mut row: Vec<String> = c.n.iter().map(|x| x.to_string()).collect();
        row.push(num(v));
        match c.window {
            Some([l, r]) if one_dim_windows => {
                row.push(l.to_string());
                row.push(r.to_string());
            }
            _ => {
                row.push(num(c.r));
                row.extend(c.x0.iter().map(|&x| num(x)));
            }
        }
        t.row(row);
    }
    write(&a.output.out, &t.render())
}

fn variation(a: &VariationArgs, header: &str) -> Res {
    let text = read(&a.input)?;
    let json: serde_json::Value = serde_json::from_str(&text)?;
    let q = a.q.unwrap_or_else(|| a.beta.map_or(1.0, |b| 1.0 / (1.0 - b)));
    let v: VariationValue = if json.get("breakpoints").is_some() {
        let f = StepFunction1D::from_json(&text)?;
        match a.beta {
            Some(b) => {
                check_beta_1d(b)?;
                var_q_frac_max_cont(&f, b, q, a.rel_tol)?
            }
            None if q == 1.0 => VariationValue { value: f.variation(), q, tail_bound: 0.0, infinite: false },
            None if f.is_zero() => VariationValue { value: 0.0, q, tail_bound: 0.0, infinite: false },
            None => return Err(bad("a step function with jumps has infinite q-variation for q > 1")),
        }
    } else if json.get("xs").is_some() {
        if a.beta.is_some() {
            return Err(bad("--beta needs a lattice or step function"));
        }
        let g = PiecewiseLinear1D::from_json(&text)?;
        var_q_partition(&g, q, &PartitionSpec::Breakpoints)?
    } else {
        let f = LatticeFunction::from_json(&text)?;
        if f.dim() != 1 {
            return Err(bad("variation needs a one-dimensional function"));
        }
        let hull = f.support_hull().map(|(lo, hi)| (lo[0], hi[0]));
        match a.beta {
            Some(b) => {
                check_beta_1d(b)?;
                let w = match (&a.window, hull) {
                    (Some(w), _) => parse_window(w)?,
                    (None, Some((lo, hi))) => {
                        let pad = 2 * (hi - lo + 1) + 8;
                        EvaluationWindow::interval(lo - pad, hi + pad)?
                    }
                    (None, None) => f.window(),
                };
                let m = frac_max_1d_uncentered(&f, b, &w)?;
                var_q_maximal_1d(&m, &f, q)?
            }
            None => {
                let w = match (&a.window, hull) {
                    (Some(w), _) => parse_window(w)?,
                    (None, Some((lo, hi))) => EvaluationWindow::interval(lo - 1, hi + 1)?,
                    (None, None) => f.window(),
                };
                var_q_discrete(&f, q, &w)?
            }
        }
    };
    if a.output.format == Some(Format::Csv) {
        let mut t = Table::new(header, &["value", "q", "tail_bound", "upper", "infinite"]);
        t.row(vec![num(v.value), num(v.q), num(v.tail_bound), num(v.upper()), v.infinite.to_string()]);
        write(&a.output.out, &t.render())
    } else {
        write(&a.output.out, &(v.to_json() + "\n"))
    }
}

fn omega(c: &OmegaCmd, header: &str) -> Res {
    match c {
        OmegaCmd::Count { body, r, x0, plus } => {
            let x0: Vec<f64> = parse_list(x0, "x0")?;
            let b = parse_body(&body.omega, x0.len())?;
            let n = if *plus { count_lattice_plus(&b, &x0, *r)? } else { count_lattice(&b, &x0, *r)? };
            println!("{n}");
            Ok(())
        }
        OmegaCmd::Enumerate { body, r, x0, output } => {
            let x0: Vec<f64> = parse_list(x0, "x0")?;
            let d = x0.len();
            let b = parse_body(&body.omega, d)?;
            let pts = enumerate_ball(&b, &x0, *r)?;
            if output.format == Some(Format::Json) {
                return write(&output.out, &(serde_json::to_string(&pts)? + "\n"));
            }
            let cols: Vec<String> = (1..=d).map(|i| format!("m{i}")).collect();
            let mut t = Table::new(header, &cols);
            for p in pts {
                t.row(p.iter().map(|v| v.to_string()).collect());
            }
            write(&output.out, &t.render())
        }
        OmegaCmd::Constants { body, r_max, d, output } => {
            let d = d
                .or_else(|| body_dim_hint(&body.omega))
                .ok_or_else(|| bad("--d is required for named bodies"))?;
            let b = parse_body(&body.omega, d)?;
            let k = estimate_constants(&b, *r_max)?;
            if output.format == Some(Format::Csv) {
                let mut t = Table::new(header, &["c_omega", "c1", "c2", "lambda", "r_max_fitted"]);
                t.row(vec![num(k.c_omega), num(k.c1), num(k.c2), num(k.lambda), num(k.r_max_fitted)]);
                write(&output.out, &t.render())
            } else {
                write(&output.out, &(serde_json::to_string_pretty(&k)? + "\n"))
            }
        }
        OmegaCmd::Gauge { body, y } => {
            let y: Vec<f64> = parse_list(y, "y")?;
            let b = parse_body(&body.omega, y.len())?;
            println!("{}", num(b.gauge(&y)?));
            Ok(())
        }
    }
}

fn emit_report(rep: &VerificationReport, output: &Output, witness: Option<&PathBuf>, header: &str) -> Res {
    let text = match output.format {
        Some(Format::Csv) => format!("{header}\n{}", rep.to_csv()),
        _ => rep.to_json() + "\n",
    };
    write(&output.out, &text)?;
    if rep.pass {
        return Ok(());
    }
    if let Some(t) = rep.violations().next() {
        if let Some(w) = exp::trial_input(rep, t) {
            let path = match (witness, &output.out) {
                (Some(p), _) => p.clone(),
                (None, Some(o)) => {
                    let mut s = o.clone().into_os_string();
                    s.push(".witness.json");
                    PathBuf::from(s)
                }
                (None, None) => PathBuf::from("fracmax-witness.json"),
            };
            std::fs::write(&path, w.function_json() + "\n")?;
            eprintln!("violation in trial {} (seed {}); input written to {}", t.index, t.seed, path.display());
        }
    } else {
        eprintln!("verification failed: {}", rep.notes.join("; "));
    }
    Err(Failure::Violation)
}

fn verify(c: &VerifyCmd, header: &str) -> Res {
    let (rep, common) = match c {
        VerifyCmd::Thm2 { support, betas, common } => {
            (exp::verify_thm2(common.trials, *support, &parse_list(betas, "beta")?, common.seed)?, common)
        }
        VerifyCmd::Thm1 { pieces, betas, common } => {
            (exp::verify_thm1(common.trials, *pieces, &parse_list(betas, "beta")?, common.seed)?, common)
        }
        VerifyCmd::Thm3 { d, omega, beta, alpha, q, common } => {
            exp::check_thm3_admissible(*d, *beta, *alpha, *q)?;
            let body = parse_body(omega, *d)?;
            (exp::verify_thm3(common.trials, *d, &body, *beta, *alpha, *q, common.seed)?, common)
        }
        VerifyCmd::Pointwise { d, omega, beta, common } => {
            let body = parse_body(omega, *d)?;
            (exp::pointwise_regularization_check(common.trials, *d, &body, *beta, common.seed)?, common)
        }
        VerifyCmd::Domination { d, omega, beta, common } => {
            let body = parse_body(omega, *d)?;
            (exp::domination_constant_check(common.trials, *d, &body, *beta, common.seed)?, common)
        }
        VerifyCmd::Segments { support, betas, common } => {
            (exp::verify_segments(common.trials, *support, &parse_list(betas, "beta")?, common.seed)?, common)
        }
        VerifyCmd::Radius { support, beta, common } => {
            (exp::verify_radius_stability(common.trials, *support, *beta, common.seed)?, common)
        }
    };
    emit_report(&rep, &common.output, common.witness.as_ref(), header)
}

fn scaling(a: &ScalingArgs, header: &str) -> Res {
    let ks: Vec<i64> = match a.k.split_once(':') {
        Some((lo, hi)) => {
            let lo: i64 = lo.trim().parse().map_err(|_| bad("bad k range"))?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad("bad k range"))?;
            (lo..=hi).collect()
        }
        None => parse_list(&a.k, "k")?,
    };
    let body = parse_body(&a.omega, a.d)?;
    let rep = exp::scaling_experiment(a.d, &body, a.beta, a.alpha, a.q, &ks)?;
    emit_report(&rep, &a.output, None, header)
}

fn search(a: &SearchArgs) -> Res {
    let mode = match a.mode {
        SearchArg::Thm1 => SearchMode::Thm1,
        SearchArg::Thm2 => SearchMode::Thm2,
    };
    let r = exp::extremal_search(mode, a.beta, a.size, a.iterations, a.restarts, a.seed)?;
    if let Some(p) = &a.witness {
        std::fs::write(p, r.witness.function_json() + "\n")?;
    }
    write(&a.output.out, &(r.to_json() + "\n"))
}

fn convergence(a: &ConvergenceArgs, header: &str) -> Res {
    let f = StepFunction1D::from_json(&read(&a.input)?)?;
    let eps: Vec<f64> = parse_list(&a.eps, "eps")?;
    let queries: Vec<f64> = parse_list(&a.queries, "query")?;
    let rows = mollification_convergence(&f, a.beta, &eps, &queries)?;
    if a.output.format == Some(Format::Json) {
        return write(&a.output.out, &(serde_json::to_string_pretty(&rows)? + "\n"));
    }
    let mut t = Table::new(header, &["eps", "discrepancy", "discretization_bound"]);
    for r in rows {
        t.row(vec![num(r.eps), num(r.discrepancy), num(r.discretization_bound)]);
    }
    write(&a.output.out, &t.render())
}

fn seed_of(cmd: &Cmd) -> Option<u64> {
    match cmd {
        Cmd::Verify(v) => Some(match v {
            VerifyCmd::Thm2 { common, .. }
            | VerifyCmd::Thm1 { common, .. }
            | VerifyCmd::Thm3 { common, .. }
            | VerifyCmd::Pointwise { common, .. }
            | VerifyCmd::Domination { common, .. }
            | VerifyCmd::Segments { common, .. }
            | VerifyCmd::Radius { common, .. } => common.seed,
        }),
        Cmd::Search(s) => Some(s.seed),
        _ => None,
    }
}

fn configure_threads() -> Res {
    let Ok(v) = std::env::var("FRACMAX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| bad(format!("FRACMAX_THREADS must be an integer, got `{v}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Res {
    configure_threads()?;
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = seed_of(&cli.cmd).map_or("none".to_string(), |s| s.to_string());
    let header = format!("# fracmax {} seed={seed} args={}", env!("CARGO_PKG_VERSION"), args.join(" "));
    match &cli.cmd {
        Cmd::Maxfun(a) => maxfun(a, &header),
        Cmd::Variation(a) => variation(a, &header),
        Cmd::Omega(c) => omega(c, &header),
        Cmd::Verify(c) => verify(c, &header),
        Cmd::Scaling(a) => scaling(a, &header),
        Cmd::Search(a) => search(a),
        Cmd::Convergence(a) => convergence(a, &header),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
