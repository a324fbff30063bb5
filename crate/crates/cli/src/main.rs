//! `cogrowth` command-line tool.
//!
//! Exit status: 0 on success, 1 when a verification fails or a
//! precondition is violated, 2 on malformed arguments or input files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cogrowth::ball::{universal_cover_ball, TreeBall};
use cogrowth::function::{FunctionSpec, RadialProfile, VertexFunction};
use cogrowth::graph::{complete_bipartite, complete_graph, cycle_graph, path_graph, subdivision, Graph};
use cogrowth::growth::{
    cogrowth_biregular, cogrowth_regular, estimate_growth_rate, inverse_cogrowth_biregular, inverse_cogrowth_regular,
    Method,
};
use cogrowth::identities::{
    eval_biregular_scalar_identity, eval_parity_identities, eval_regular_scalar_identity, verify_biresolvent,
    verify_nbw_generating, verify_resolvent_series, IdentityReport,
};
use cogrowth::io;
use cogrowth::walks::{
    nbw_counts, radial_nbw_counts, radial_walk_counts, walk_counts, CountOptions, CountSeries, SeriesKind,
};
use cogrowth::Error;

#[derive(Parser)]
#[command(
    name = "cogrowth",
    version,
    about = "Walk counts, resolvent identities and co-growth on trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph or tree ball as graph JSON.
    Gen(GenArgs),
    /// Compute a_r(f) or b_r(f) for r = 0..=rmax.
    Counts(CountsArgs),
    /// Estimate the growth rate of a count series.
    Estimate(EstimateArgs),
    /// Evaluate the co-growth map alpha -> beta, or its inverse.
    Predict(PredictArgs),
    /// Check one identity numerically against its tail bound.
    Verify(VerifyArgs),
    /// Compare counts on a graph with counts of the lifted function on its universal cover.
    Lift(LiftArgs),
}

#[derive(Args)]
struct GenArgs {
    /// complete:N, bipartite:M,N, cycle:N, path:N, ball:K,L,R or subdivided:SPEC
    spec: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    A,
    B,
}

impl From<KindArg> for SeriesKind {
    fn from(k: KindArg) -> SeriesKind {
        match k {
            KindArg::A => SeriesKind::NonBacktracking,
            KindArg::B => SeriesKind::Walk,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CountsArgs {
    /// Graph JSON file or generator spec.
    #[arg(long, conflicts_with_all = ["ball", "radial"])]
    graph: Option<String>,
    /// Tree ball K,L,R counted from its centre.
    #[arg(long, conflicts_with = "radial")]
    ball: Option<String>,
    /// Infinite (K,L) tree with a radial function.
    #[arg(long)]
    radial: Option<String>,
    #[arg(long, default_value_t = 0)]
    base: usize,
    /// Function JSON file or shorthand (geometric:1.2, radial:1,0,1/2, delta:3, ones, ...); default delta at the base.
    #[arg(long)]
    function: Option<String>,
    #[arg(long, value_enum, default_value = "b")]
    kind: KindArg,
    #[arg(long)]
    rmax: usize,
    /// Exact arithmetic (the default; kept for explicitness).
    #[arg(long, conflicts_with = "log_only")]
    exact: bool,
    /// Log-space arithmetic only.
    #[arg(long)]
    log_only: bool,
    /// Allow r beyond a ball's radius; those entries are flagged.
    #[arg(long)]
    allow_truncated: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write (r, log value) CSV here.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Count series file (.json or .csv).
    #[arg(long)]
    series: PathBuf,
    #[arg(long, default_value = "ratio2")]
    method: String,
    /// Inclusive index window LO,HI; default the final tenth.
    #[arg(long)]
    window: Option<String>,
    /// Series kind for CSV input.
    #[arg(long, value_enum, default_value = "b")]
    kind: KindArg,
    /// Regular degree, to report the matching value of the other rate.
    #[arg(long, conflicts_with_all = ["k", "l"])]
    d: Option<usize>,
    #[arg(long, requires = "l")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    l: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long, required_unless_present = "inverse")]
    alpha: Option<f64>,
    /// Map beta back to alpha.
    #[arg(long, requires = "beta")]
    inverse: bool,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, conflicts_with_all = ["k", "l"], required_unless_present_all = ["k", "l"])]
    d: Option<usize>,
    #[arg(long, requires = "l")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    l: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Resolvent,
    NbwGen,
    Biresolvent,
    RegularScalar,
    Parity,
    BiregularScalar,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    identity: Identity,
    /// Graph JSON file or generator spec, for the operator identities.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    z1: Option<f64>,
    #[arg(long)]
    z2: Option<f64>,
    #[arg(long, default_value_t = 60)]
    terms: usize,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    /// Radial function for the scalar identities; default delta at the root.
    #[arg(long)]
    function: Option<String>,
    /// Length of the b-series for the scalar identities.
    #[arg(long, default_value_t = 400)]
    rmax: usize,
    /// Precomputed a-series file, instead of the radial engine.
    #[arg(long, requires = "b_series")]
    a_series: Option<PathBuf>,
    #[arg(long, requires = "a_series")]
    b_series: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    rel_tol: f64,
    /// Write the reports as JSON here; a table always goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    /// Graph JSON file or generator spec.
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long)]
    radius: usize,
    /// Function on the base graph; default delta at the base.
    #[arg(long)]
    function: Option<String>,
    /// Compare r = 0..=rmax; default the radius.
    #[arg(long)]
    rmax: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidParameter(_)
            | Error::Format(_)
            | Error::ParseDecimal(_)
            | Error::InvalidWeight(_)
            | Error::VertexOutOfRange { .. }
            | Error::LoopEdge(_)
            | Error::DuplicateEdge(..)
            | Error::SameSideEdge(..)
            | Error::SideLengthMismatch { .. }
            | Error::MisalignedFunction { .. } => Failure::Usage(e.into()),
            _ => Failure::Check(e.into()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Counts(a) => counts(a),
        Command::Estimate(a) => estimate(a),
        Command::Predict(a) => predict(a),
        Command::Verify(a) => verify(a),
        Command::Lift(a) => lift(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Usage)
}

fn emit(text: &str, output: Option<&Path>) -> std::result::Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Check),
        None => {
            write_stdout(text);
            Ok(())
        }
    }
}

/// Writes `text` and a newline; a reader that has gone away is not an error.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{}", text.trim_end()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing to stdout: {e}");
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> std::result::Result<Vec<T>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| usage(format!("bad {what} {text:?}"))))
        .collect()
}

fn parse_exact<const N: usize>(text: &str, what: &str) -> std::result::Result<[usize; N], Failure> {
    let values: Vec<usize> = parse_list(text, what)?;
    values
        .try_into()
        .map_err(|_| usage(format!("{what} needs {N} comma-separated integers, got {text:?}")))
}

fn generate(spec: &str) -> std::result::Result<Graph, Failure> {
    let (family, params) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("graph spec {spec:?} is not family:params")))?;
    let graph = match family {
        "complete" => complete_graph(parse_exact::<1>(params, "size")?[0])?,
        "bipartite" => {
            let [m, n] = parse_exact::<2>(params, "sides")?;
            complete_bipartite(m, n)?
        }
        "cycle" => cycle_graph(parse_exact::<1>(params, "size")?[0])?,
        "path" => path_graph(parse_exact::<1>(params, "size")?[0])?,
        "ball" => {
            let [k, l, r] = parse_exact::<3>(params, "ball")?;
            TreeBall::new(k, l, r)?.graph().clone()
        }
        "subdivided" => subdivision(&generate(params)?),
        other => return Err(usage(format!("unknown graph family {other:?}"))),
    };
    Ok(graph)
}

/// A file path if one exists, otherwise a generator spec.
fn load_graph(arg: &str) -> std::result::Result<Graph, Failure> {
    if Path::new(arg).is_file() {
        Ok(io::graph_from_json(&read_file(Path::new(arg))?)?)
    } else {
        generate(arg)
    }
}

fn load_function(arg: &str) -> std::result::Result<FunctionSpec, Failure> {
    if Path::new(arg).is_file() {
        Ok(io::function_from_json(&read_file(Path::new(arg))?)?)
    } else {
        Ok(io::parse_function_shorthand(arg)?)
    }
}

fn load_series(path: &Path, kind: SeriesKind) -> std::result::Result<CountSeries, Failure> {
    let text = read_file(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        Ok(io::series_from_csv(&text, kind, 0)?)
    } else {
        Ok(io::series_from_json(&text)?)
    }
}

fn radial_function(arg: Option<&str>) -> std::result::Result<RadialProfile, Failure> {
    match arg {
        None => Ok(RadialProfile::shell(0)),
        Some(text) => Ok(load_function(text)?.radial()?),
    }
}

fn gen(args: GenArgs) -> Outcome {
    let g = generate(&args.spec)?;
    emit(&io::graph_to_json(&g), args.output.as_deref())?;
    Ok(true)
}

fn counts(args: CountsArgs) -> Outcome {
    let kind = SeriesKind::from(args.kind);
    let mut opts = CountOptions::default();
    if args.log_only {
        opts = opts.log_only();
    }
    let series = if let Some(spec) = &args.radial {
        let [k, l] = parse_exact::<2>(spec, "tree degrees")?;
        let profile = radial_function(args.function.as_deref())?;
        match kind {
            SeriesKind::Walk => radial_walk_counts(k, l, &profile, args.rmax, &opts)?,
            SeriesKind::NonBacktracking => radial_nbw_counts(k, l, &profile, args.rmax, &opts)?,
        }
    } else {
        let (g, base) = if let Some(spec) = &args.ball {
            let [k, l, r] = parse_exact::<3>(spec, "ball")?;
            let ball = TreeBall::new(k, l, r)?;
            opts.horizon = Some(r);
            opts.allow_truncated = args.allow_truncated;
            (ball.graph().clone(), ball.root())
        } else if let Some(arg) = &args.graph {
            (load_graph(arg)?, args.base)
        } else {
            return Err(usage("one of --graph, --ball or --radial is required"));
        };
        g.check_vertex(base)?;
        let f = match &args.function {
            Some(text) => load_function(text)?.resolve(&g, base)?,
            None => VertexFunction::delta(g.vertex_count(), base)?,
        };
        match kind {
            SeriesKind::Walk => walk_counts(&g, base, &f, args.rmax, &opts)?,
            SeriesKind::NonBacktracking => nbw_counts(&g, base, &f, args.rmax, &opts)?,
        }
    };
    let text = match args.format {
        Format::Json => io::series_to_json(&series),
        Format::Csv => io::series_to_csv(&series),
    };
    emit(&text, args.output.as_deref())?;
    if let Some(path) = &args.plot_data {
        emit(&io::plot_data_csv(&series), Some(path))?;
    }
    Ok(true)
}

fn estimate(args: EstimateArgs) -> Outcome {
    let series = load_series(&args.series, args.kind.into())?;
    let method: Method = args.method.parse()?;
    let window = match &args.window {
        Some(text) => {
            let [lo, hi] = parse_exact::<2>(text, "window")?;
            Some((lo, hi))
        }
        None => None,
    };
    let est = estimate_growth_rate(&series, method, window)?;
    let mut out = json!({
        "method": est.method,
        "window": [est.window.0, est.window.1],
        "residual": est.residual,
    });
    let other = match (series.kind, args.d, args.k.zip(args.l)) {
        (SeriesKind::NonBacktracking, Some(d), _) => Some(cogrowth_regular(est.value, d)?.beta),
        (SeriesKind::NonBacktracking, None, Some((k, l))) => Some(cogrowth_biregular(est.value, k, l)?.beta),
        (SeriesKind::Walk, Some(d), _) => Some(inverse_cogrowth_regular(est.value, d)?),
        (SeriesKind::Walk, None, Some((k, l))) => Some(inverse_cogrowth_biregular(est.value, k, l)?),
        _ => None,
    };
    let (own, counterpart) = match series.kind {
        SeriesKind::NonBacktracking => ("alpha", "beta"),
        SeriesKind::Walk => ("beta", "alpha"),
    };
    out[own] = json!(est.value);
    out[counterpart] = other.map_or(Value::Null, |x| json!(x));
    emit(
        &serde_json::to_string_pretty(&out).expect("json"),
        args.output.as_deref(),
    )?;
    Ok(true)
}

fn predict(args: PredictArgs) -> Outcome {
    let family = match (args.d, args.k.zip(args.l)) {
        (Some(d), _) => Ok(d),
        (None, Some(kl)) => Err(kl),
        (None, None) => return Err(usage("give --d or both --k and --l")),
    };
    let out = if args.inverse {
        let beta = args.beta.ok_or_else(|| usage("--inverse needs --beta"))?;
        let alpha = match family {
            Ok(d) => inverse_cogrowth_regular(beta, d)?,
            Err((k, l)) => inverse_cogrowth_biregular(beta, k, l)?,
        };
        json!({"alpha": alpha, "beta": beta})
    } else {
        let alpha = args.alpha.ok_or_else(|| usage("--alpha is required"))?;
        let c = match family {
            Ok(d) => cogrowth_regular(alpha, d)?,
            Err((k, l)) => cogrowth_biregular(alpha, k, l)?,
        };
        json!({"alpha": alpha, "beta": c.beta, "branch": c.branch, "degenerate": c.degenerate})
    };
    write_stdout(&serde_json::to_string_pretty(&out).expect("json"));
    Ok(true)
}

fn need<T>(value: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| usage(format!("this identity needs --{flag}")))
}

fn scalar_series(args: &VerifyArgs, k: usize, l: usize) -> std::result::Result<(CountSeries, CountSeries), Failure> {
    if let (Some(a), Some(b)) = (&args.a_series, &args.b_series) {
        return Ok((
            load_series(a, SeriesKind::NonBacktracking)?,
            load_series(b, SeriesKind::Walk)?,
        ));
    }
    let f = radial_function(args.function.as_deref())?;
    let support = f
        .support_radius()
        .ok_or_else(|| Failure::Check(anyhow!("the scalar identities need a finitely supported f")))?;
    let opts = CountOptions::default().log_only();
    Ok((
        radial_nbw_counts(k, l, &f, support, &opts)?,
        radial_walk_counts(k, l, &f, args.rmax, &opts)?,
    ))
}

fn print_table(reports: &[IdentityReport]) {
    let mut table = format!(
        "{:<22} {:>22} {:>22} {:>11} {:>11} {:>6}  result\n",
        "identity", "lhs", "rhs", "gap", "tail", "terms"
    );
    for r in reports {
        table += &format!(
            "{:<22} {:>22.15e} {:>22.15e} {:>11.3e} {:>11.3e} {:>6}  {}\n",
            r.name,
            r.lhs,
            r.rhs,
            r.abs_gap,
            r.tail_bound,
            r.terms,
            if r.passes { "pass" } else { "FAIL" }
        );
        for note in &r.notes {
            table += &format!("  note: {note}\n");
        }
    }
    write_stdout(&table);
}

fn verify(args: VerifyArgs) -> Outcome {
    let graph = || load_graph(&need(args.graph.clone(), "graph")?);
    let reports = match args.identity {
        Identity::Resolvent => vec![verify_resolvent_series(&graph()?, need(args.z, "z")?, args.terms)?],
        Identity::NbwGen => vec![verify_nbw_generating(&graph()?, need(args.t, "t")?, args.terms)?],
        Identity::Biresolvent => vec![verify_biresolvent(
            &graph()?,
            need(args.z1, "z1")?,
            need(args.z2, "z2")?,
            args.terms,
        )?],
        Identity::RegularScalar | Identity::Parity => {
            let d = need(args.d, "d")?;
            let (a, b) = scalar_series(&args, d, d)?;
            let rho = need(args.rho, "rho")?;
            if matches!(args.identity, Identity::Parity) {
                let (even, odd) = eval_parity_identities(&a, &b, d, rho, args.rel_tol)?;
                vec![even, odd]
            } else {
                vec![eval_regular_scalar_identity(&a, &b, d, rho, args.rel_tol)?]
            }
        }
        Identity::BiregularScalar => {
            let (k, l) = (need(args.k, "k")?, need(args.l, "l")?);
            let (a, b) = scalar_series(&args, k, l)?;
            vec![eval_biregular_scalar_identity(
                &a,
                &b,
                k,
                l,
                need(args.rho, "rho")?,
                args.rel_tol,
            )?]
        }
    };
    print_table(&reports);
    if let Some(path) = &args.output {
        emit(&serde_json::to_string_pretty(&reports).expect("json"), Some(path))?;
    }
    Ok(reports.iter().all(|r| r.passes))
}

fn lift(args: LiftArgs) -> Outcome {
    let g = load_graph(&args.graph)?;
    g.check_vertex(args.base)?;
    let rmax = args.rmax.unwrap_or(args.radius);
    if rmax > args.radius {
        return Err(usage(format!("--rmax {rmax} exceeds --radius {}", args.radius)));
    }
    let f = match &args.function {
        Some(text) => load_function(text)?.resolve(&g, args.base)?,
        None => VertexFunction::delta(g.vertex_count(), args.base)?,
    };
    let cover = universal_cover_ball(&g, args.base, args.radius)?;
    let lifted = f.lift_to(&g, &cover)?;
    let opts = CountOptions::default();
    let on_cover = CountOptions::on_ball(args.radius);
    let pairs = [
        (
            nbw_counts(&g, args.base, &f, rmax, &opts)?,
            nbw_counts(cover.graph(), cover.root(), &lifted, rmax, &on_cover)?,
        ),
        (
            walk_counts(&g, args.base, &f, rmax, &opts)?,
            walk_counts(cover.graph(), cover.root(), &lifted, rmax, &on_cover)?,
        ),
    ];
    let mut rows = Vec::new();
    let mut all_equal = true;
    for r in 0..=rmax {
        let mut row = json!({"r": r});
        for (base_series, cover_series) in &pairs {
            let letter = base_series.kind.letter();
            let (x, y) = (&base_series.entries[r], &cover_series.entries[r]);
            let equal = x.exact.is_some() && x.exact == y.exact;
            all_equal &= equal;
            row[format!("{letter}_base")] = json!(x.exact.as_ref().map(io::rational_to_string));
            row[format!("{letter}_cover")] = json!(y.exact.as_ref().map(io::rational_to_string));
        }
        rows.push(row);
    }
    let out = json!({
        "base": args.base,
        "radius": args.radius,
        "cover_vertices": cover.graph().vertex_count(),
        "cover": serde_json::from_str::<Value>(&io::graph_to_json(cover.graph())).expect("json"),
        "projection": cover.projection(),
        "lifted_function": serde_json::from_str::<Value>(&io::function_to_json(
            &FunctionSpec::Dense(lifted.values().to_vec())
        ))
        .expect("json"),
        "counts": rows,
        "all_equal": all_equal,
    });
    emit(
        &serde_json::to_string_pretty(&out).expect("json"),
        args.output.as_deref(),
    )?;
    if !all_equal {
        eprintln!("counts on the base graph and its cover differ");
    }
    Ok(all_equal)
}
