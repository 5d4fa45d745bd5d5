use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use chebfib::exactnum::{parse_rational, rational_to_f64};
use chebfib::kernels::{
    bn1_closed_cheb, parse_complex, r1_closed_cheb, resolvent_closed, resolvent_spectral, trig_sum, wu_closed,
    wu_spectral, ResolventParams, SumArgs, SumVariant,
};
use chebfib::polyfam::{family_table, Family};
use chebfib::resistance::{bench_csv, bench_resistance, parse_jumps, resistance, CirculantSpec, Route};
use chebfib::sequences::{bejaia, c_constant, d_constant, golden_ratio_quotient, pisa, seq_term, SeqKind};
use chebfib::verify::{self, fmt_complex, fmt_f64, Format, Suite, VerifyConfig};
use chebfib::{BigRational, QuadExt};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chebfib", version, about = "Chebyshev, Fibonacci and Lucas identities, trigonometric sums and circulant resistance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integer sequence terms and the exact constants C_N, D_N.
    Seq(SeqArgs),
    /// Polynomial coefficients (ascending) or a value.
    Poly(PolyArgs),
    /// A finite trigonometric sum, by its spectral or closed route.
    Sum(SumCmd),
    /// Two-point resistance on a circulant graph.
    Resistance(ResistanceArgs),
    /// Closed form against the dense solve on C_N(1,2).
    Bench(BenchArgs),
    /// Run identity suites and emit a report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqKindArg {
    Fib,
    Lucas,
    Pell,
    /// Half Pell-Lucas numbers Q_n = L_n(2)/2.
    PellLucas,
    /// B_ell(N): --n is N, --ell the index.
    Bejaia,
    /// P_ell(N): --n is N, --ell the index.
    Pisa,
    /// C_N in Q(sqrt 5).
    CConstant,
    /// D_N in Q(sqrt(N(N-4))).
    DConstant,
}

#[derive(clap::Args)]
struct SeqArgs {
    #[arg(long, value_enum)]
    kind: SeqKindArg,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    ell: u64,
    /// Print terms 0..=n, one per line.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    float: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    ChebT,
    ChebU,
    Fib,
    Lucas,
    Pell,
    PellLucas,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::ChebT => Family::ChebT,
            FamilyArg::ChebU => Family::ChebU,
            FamilyArg::Fib => Family::Fib,
            FamilyArg::Lucas => Family::Lucas,
            FamilyArg::Pell => Family::Pell,
            FamilyArg::PellLucas => Family::PellLucas,
        }
    }
}

#[derive(clap::Args)]
struct PolyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Evaluate at a rational or `a+b*sqrt(d)` point.
    #[arg(long)]
    at: Option<String>,
    #[arg(long)]
    float: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumRoute {
    Spectral,
    Closed,
}

#[derive(clap::Args)]
struct SumCmd {
    /// sumeq2, sumeq3, sumeq4, seiffert, sum3, sum4, sum5, r1sum, bn1sum,
    /// prop2sum, wu or resolvent.
    #[arg(long)]
    variant: String,
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 0)]
    ell: u64,
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value = "0")]
    beta: String,
    #[arg(long, default_value = "1")]
    s: String,
    #[arg(long, value_enum, default_value_t = SumRoute::Spectral)]
    route: SumRoute,
    #[arg(long)]
    float: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    SolveExact,
    SolveFloat,
    ClosedForm,
    Spectral,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::SolveExact => Route::SolveExact,
            RouteArg::SolveFloat => Route::SolveFloat,
            RouteArg::ClosedForm => Route::ClosedForm,
            RouteArg::Spectral => Route::Spectral,
        }
    }
}

#[derive(clap::Args)]
struct ResistanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1,2")]
    jumps: String,
    #[arg(long, default_value = "1")]
    conductance: String,
    #[arg(long, default_value_t = 0)]
    u: usize,
    #[arg(long)]
    v: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::SolveExact)]
    route: RouteArg,
    #[arg(long)]
    float: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFormat {
    Csv,
    Table,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, default_value = "2000")]
    n: String,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    format: BenchFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite name or `all`; repeatable.
    #[arg(long, default_value = "all")]
    suite: Vec<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

/// Invalid input; exits with status 2.
struct Failure(String);

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::LineWriter::new(io::stdout().lock());
    let result = match cli.command {
        Command::Seq(a) => run_seq(a),
        Command::Poly(a) => run_poly(a),
        Command::Sum(a) => run_sum(a),
        Command::Resistance(a) => run_resistance(a),
        Command::Bench(a) => run_bench(a),
        Command::Verify(a) => return run_verify(a, &mut out),
    };
    match result {
        Ok(text) => {
            if writeln!(out, "{text}").is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn show_quad(q: &QuadExt, float: bool) -> Result<String, Failure> {
    if float {
        q.to_f64().map(fmt_f64).map_err(usage)
    } else {
        Ok(q.to_string())
    }
}

fn show_rational(r: &BigRational, float: bool) -> String {
    if float {
        rational_to_f64(r).map(fmt_f64).unwrap_or_else(|| "nan".into())
    } else {
        r.to_string()
    }
}

fn run_seq(a: SeqArgs) -> Result<String, Failure> {
    let term = |k: u64| -> Result<QuadExt, Failure> {
        let v = match a.kind {
            SeqKindArg::Fib => seq_term(SeqKind::Fib, k),
            SeqKindArg::Lucas => seq_term(SeqKind::Lucas, k),
            SeqKindArg::Pell => seq_term(SeqKind::Pell, k),
            SeqKindArg::PellLucas => seq_term(SeqKind::PellLucasHalf, k),
            SeqKindArg::Bejaia => bejaia(a.n, k).map_err(usage)?,
            SeqKindArg::Pisa => pisa(a.n, k).map_err(usage)?,
            SeqKindArg::CConstant => return c_constant(k).map_err(usage),
            SeqKindArg::DConstant => return d_constant(k).map_err(usage),
        };
        Ok(QuadExt::from(v))
    };
    // for Bejaia and Pisa the running index is ell
    let last = match a.kind {
        SeqKindArg::Bejaia | SeqKindArg::Pisa => a.ell,
        _ => a.n,
    };
    if a.table {
        let first = if matches!(a.kind, SeqKindArg::CConstant | SeqKindArg::DConstant) { 1 } else { 0 };
        let lines: Result<Vec<String>, Failure> =
            (first..=last).map(|k| term(k).and_then(|v| show_quad(&v, a.float))).collect();
        return Ok(lines?.join("\n"));
    }
    show_quad(&term(last)?, a.float)
}

fn run_poly(a: PolyArgs) -> Result<String, Failure> {
    let p = family_table(a.family.into(), a.n).pop().expect("table has n + 1 entries");
    match a.at {
        Some(at) => {
            let x: QuadExt = at.parse().map_err(usage)?;
            show_quad(&p.eval_quad(&x), a.float)
        }
        None if a.float => {
            let c: Vec<String> = p.coeffs().iter().map(|c| show_rational(c, true)).collect();
            Ok(format!("[{}]", if c.is_empty() { "0".into() } else { c.join(", ") }))
        }
        None => Ok(p.to_string()),
    }
}

fn run_sum(a: SumCmd) -> Result<String, Failure> {
    let key = a.variant.trim().to_ascii_lowercase();
    let closed = a.route == SumRoute::Closed;
    if key == "wu" {
        let (m, ell) = (a.m as usize, a.ell as usize);
        let v = if closed { wu_closed(m, ell, a.lambda) } else { wu_spectral(m, ell, a.lambda) };
        return v.map(fmt_f64).map_err(usage);
    }
    if key == "resolvent" {
        let beta = parse_rational(&a.beta).map_err(usage)?;
        let s = parse_complex(&a.s).map_err(usage)?;
        let p = ResolventParams::new(a.m as usize, beta, a.ell as usize, s).map_err(usage)?;
        let v = if closed { resolvent_closed(&p) } else { resolvent_spectral(&p) };
        return v.map(fmt_complex).map_err(usage);
    }
    let variant: SumVariant = key.parse().map_err(usage)?;
    if !closed {
        return trig_sum(variant, &SumArgs::new(a.m, a.ell, a.x)).map(fmt_f64).map_err(usage);
    }
    match variant {
        SumVariant::Bn1Sum => bn1_closed_cheb(a.m, a.ell).map(|r| show_rational(&r, a.float)).map_err(usage),
        SumVariant::R1Sum => r1_closed_cheb(a.m, a.ell).map(|r| show_rational(&r, a.float)).map_err(usage),
        SumVariant::Prop2Sum => {
            // (phi^{3m-3l} + phi^{3l}) / (2 (phi^{3m} - 1))
            let q = golden_ratio_quotient(3, a.m, a.ell).map_err(usage)?;
            show_quad(&q.scale(&chebfib::exactnum::rat(1, 2)), a.float)
        }
        other => Err(usage(format!(
            "no closed route for {other}; closed routes exist for bn1sum, r1sum, prop2sum, wu and resolvent"
        ))),
    }
}

fn run_resistance(a: ResistanceArgs) -> Result<String, Failure> {
    let jumps = parse_jumps(&a.jumps).map_err(usage)?;
    let conductance = parse_rational(&a.conductance).map_err(usage)?;
    let spec = CirculantSpec::new(a.n, jumps, conductance).map_err(usage)?;
    let r = resistance(&spec, a.u, a.v, a.route.into()).map_err(usage)?;
    Ok(match (&r.value_exact, a.float) {
        (Some(v), false) => v.to_string(),
        _ => fmt_f64(r.value_float),
    })
}

fn run_bench(a: BenchArgs) -> Result<String, Failure> {
    let list: Result<Vec<u64>, _> = a.n.split(',').map(|s| s.trim().parse::<u64>()).collect();
    let list = list.map_err(|e| usage(format!("--n: {e}")))?;
    let rows = bench_resistance(&list, a.ell).map_err(usage)?;
    Ok(match a.format {
        BenchFormat::Csv => bench_csv(&rows).trim_end().to_string(),
        BenchFormat::Table => {
            let mut s = format!("{:>6} {:>6} {:>14} {:>14} {:>12} {:>10}", "N", "ell", "t_closed_ns", "t_solve_ns", "rel_diff", "speedup");
            for r in &rows {
                s.push_str(&format!(
                    "\n{:>6} {:>6} {:>14} {:>14} {:>12.3e} {:>10.0}",
                    r.n,
                    r.ell,
                    r.t_closed_ns,
                    r.t_solve_ns,
                    r.rel_diff(),
                    r.speedup()
                ));
            }
            s
        }
    })
}

fn run_verify(a: VerifyArgs, out: &mut impl Write) -> ExitCode {
    let mut suites = Vec::new();
    for name in &a.suite {
        if name == "all" {
            suites.extend(Suite::ALL);
            continue;
        }
        match name.parse::<Suite>() {
            Ok(s) => suites.push(s),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    suites.dedup();
    let cfg = VerifyConfig { n_max: a.n_max, tol: a.tol, jobs: a.jobs };
    let report = match verify::run(&suites, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match a.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let bytes = verify::emit_report(&report, format);
    let written = match &a.out {
        Some(path) => fs::write(path, &bytes),
        None => out.write_all(&bytes).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    eprint!("{}", report.summary());
    if report.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
