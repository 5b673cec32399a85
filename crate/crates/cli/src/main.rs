//! Command-line front end for the canonical-basis computations.
//!
//! Subcommands: `gcb` (one basis vector), `compare` (cross-verify the three
//! algorithms), `bench` (timing and recursion counts), `decmat`
//! (decomposition matrices), `selftest` (randomized invariant suite).
//!
//! Exit codes: 0 success/PASS, 1 usage error, 2 verification FAIL,
//! 3 internal invariant violation.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cbt_core::bench::{run_bench, table1, Algo};
use cbt_core::canonical::Mode;
use cbt_core::kl::compare_with_gcb;
use cbt_core::partition::partitions_of;
use cbt_core::{Context, Error, FockVector, Int, KLSession, LaurentPoly, Partition, Session};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_FAIL: i32 = 2;
const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "cbt",
    version,
    about = "Canonical basis and affine Kazhdan-Lusztig computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Llt,
    Fast,
    Soergel,
}

impl AlgoArg {
    fn to_algo(self) -> Algo {
        match self {
            AlgoArg::Llt => Algo::Llt,
            AlgoArg::Fast => Algo::Fast,
            AlgoArg::Soergel => Algo::Soergel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ContextArgs {
    /// Row bound (truncation rank).
    #[arg(long)]
    k: usize,
    /// Level: the order of the root of unity, at least 2.
    #[arg(long)]
    l: u32,
}

impl ContextArgs {
    fn build(&self) -> Result<Context, Error> {
        Context::new(self.k, self.l)
    }
}

fn cache_path(flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone()
        .or_else(|| std::env::var_os("CBT_CACHE").map(PathBuf::from))
}

fn open_session(ctx: Context, mode: Mode, cache: &Option<PathBuf>) -> Result<Session, Error> {
    match cache_path(cache) {
        Some(path) => Session::with_cache(ctx, mode, &path),
        None => Ok(Session::new(ctx, mode)),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute one lower-global-crystal-basis vector.
    Gcb {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Target diagram, e.g. "20,10,0,0".
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "fast")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Persistent cache file (default: the CBT_CACHE environment variable).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Cross-verify the llt, fast and soergel routes.
    Compare {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Single target diagram.
        #[arg(long, conflicts_with = "sweep")]
        mu: Option<String>,
        /// Verify every l-regular diagram of size at most N.
        #[arg(long)]
        sweep: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Corrupt one coefficient before comparing (test mode).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Benchmark the algorithms with fresh sessions.
    Bench {
        /// Built-in input suite (currently: table1).
        #[arg(long, conflicts_with_all = ["k", "l", "mu"])]
        suite: Option<String>,
        #[arg(long, requires = "l", requires = "mu")]
        k: Option<usize>,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        mu: Option<String>,
        /// Algorithms to run (repeatable).
        #[arg(long, value_enum)]
        algo: Vec<AlgoArg>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Print the decomposition matrix for all diagrams of size n.
    Decmat {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Size of the diagrams.
        #[arg(long)]
        n: u64,
        /// Evaluate the entries at v = 1.
        #[arg(long)]
        at_one: bool,
        #[arg(long, value_enum, default_value = "fast")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run the randomized invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0xCB7)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        cases: u32,
        #[arg(long, default_value_t = 18)]
        max_size: u64,
    },
}

/// Basis vector as "λ: poly | λ: poly", lexicographically descending.
fn gcb_text(g: &FockVector) -> String {
    let parts: Vec<String> = g
        .entries()
        .rev()
        .map(|(la, p)| format!("{la}: {p}"))
        .collect();
    parts.join(" | ")
}

/// Basis vector as a JSON object keyed by the partition text form.
fn gcb_json(g: &FockVector) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (la, p) in g.entries().rev() {
        map.insert(la.to_string(), p.to_json());
    }
    serde_json::Value::Object(map)
}

/// Assemble a basis vector from the alcove recursion.
fn gcb_via_soergel(ctx: Context, mu: &Partition) -> Result<FockVector, Error> {
    let mut kl = KLSession::new(ctx);
    let mut out = FockVector::zero(ctx);
    for la in ctx.orbit_members(mu) {
        let p = kl.n_poly(&la, mu)?;
        out.add_to(la, &p);
    }
    Ok(out)
}

fn parse_mu(s: &str) -> Result<Partition, Error> {
    Partition::from_str(s)
}

fn require_regular(ctx: Context, mu: &Partition) -> Result<(), Error> {
    ctx.admits(mu)?;
    if !mu.is_l_regular(ctx.l()) {
        return Err(Error::NotRegular {
            mu: mu.clone(),
            l: ctx.l(),
        });
    }
    Ok(())
}

fn cmd_gcb(
    ctx: ContextArgs,
    mu: String,
    algo: AlgoArg,
    format: FormatArg,
    cache: Option<PathBuf>,
) -> Result<i32, Error> {
    let ctx = ctx.build()?;
    let mu = parse_mu(&mu)?;
    require_regular(ctx, &mu)?;
    let g = match algo {
        AlgoArg::Soergel => gcb_via_soergel(ctx, &mu)?,
        AlgoArg::Llt | AlgoArg::Fast => {
            let mode = if algo == AlgoArg::Llt {
                Mode::Llt
            } else {
                Mode::Fast
            };
            let mut s = open_session(ctx, mode, &cache)?;
            (*s.gcb(&mu)?).clone()
        }
    };
    match format {
        FormatArg::Json => println!("{}", gcb_json(&g)),
        _ => println!("{}", gcb_text(&g)),
    }
    Ok(EXIT_OK)
}

fn compare_one(
    mu: &Partition,
    llt: &mut Session,
    fast: &mut Session,
    kl: &mut KLSession,
    inject_fault: bool,
) -> Result<Vec<String>, Error> {
    let mut problems = Vec::new();
    let g_llt = llt.gcb(mu)?;
    let mut g_fast = (*fast.gcb(mu)?).clone();
    if inject_fault {
        let target = g_fast
            .support()
            .next()
            .cloned()
            .unwrap_or_else(|| mu.clone());
        g_fast.add_to(target, &LaurentPoly::v());
    }
    if *g_llt != g_fast {
        for (la, p) in g_llt.entries() {
            let q = g_fast.coeff(la);
            if *p != q {
                problems.push(format!("mu = {mu}, lambda = {la}: llt {p} vs fast {q}"));
            }
        }
        for (la, q) in g_fast.entries() {
            if g_llt.coeff_ref(la).is_none() {
                problems.push(format!("mu = {mu}, lambda = {la}: llt 0 vs fast {q}"));
            }
        }
    }
    for m in compare_with_gcb(mu, fast, kl)? {
        problems.push(format!(
            "mu = {mu}, lambda = {}: fock {} vs alcove {}",
            m.lambda, m.d, m.n
        ));
    }
    Ok(problems)
}

fn cmd_compare(
    ctx: ContextArgs,
    mu: Option<String>,
    sweep: Option<u64>,
    cache: Option<PathBuf>,
    inject_fault: bool,
) -> Result<i32, Error> {
    let ctx = ctx.build()?;
    let targets: Vec<Partition> = match (mu, sweep) {
        (Some(mu), None) => {
            let mu = parse_mu(&mu)?;
            require_regular(ctx, &mu)?;
            vec![mu]
        }
        (None, Some(bound)) => {
            let mut out = Vec::new();
            for n in 0..=bound {
                for mu in partitions_of(n, ctx.k()) {
                    if mu.is_l_regular(ctx.l()) {
                        out.push(mu);
                    }
                }
            }
            out
        }
        _ => {
            return Err(Error::BadContext(
                "compare needs exactly one of --mu or --sweep".into(),
            ))
        }
    };

    let mut llt = open_session(ctx, Mode::Llt, &cache)?;
    let mut fast = open_session(ctx, Mode::Fast, &cache)?;
    let mut kl = KLSession::new(ctx);
    let mut all_problems = Vec::new();
    let count = targets.len();
    for mu in &targets {
        all_problems.extend(compare_one(mu, &mut llt, &mut fast, &mut kl, inject_fault)?);
    }
    if all_problems.is_empty() {
        println!("PASS: {count} diagram(s) agree across llt, fast and soergel");
        Ok(EXIT_OK)
    } else {
        for p in &all_problems {
            println!("MISMATCH {p}");
        }
        println!(
            "FAIL: {} problem(s) over {count} diagram(s)",
            all_problems.len()
        );
        Ok(EXIT_FAIL)
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn cmd_bench(
    suite: Option<String>,
    k: Option<usize>,
    l: Option<u32>,
    mu: Option<String>,
    algos: Vec<AlgoArg>,
    format: FormatArg,
) -> Result<i32, Error> {
    let inputs: Vec<(Context, Partition)> = match suite.as_deref() {
        Some("table1") => table1(),
        Some(other) => {
            return Err(Error::BadContext(format!("unknown suite {other:?}")));
        }
        None => {
            let (Some(k), Some(l), Some(mu)) = (k, l, mu) else {
                return Err(Error::BadContext(
                    "bench needs --suite or all of --k, --l, --mu".into(),
                ));
            };
            vec![(Context::new(k, l)?, parse_mu(&mu)?)]
        }
    };
    let algos: Vec<Algo> = if algos.is_empty() {
        vec![Algo::Fast]
    } else {
        algos.into_iter().map(AlgoArg::to_algo).collect()
    };

    if format == FormatArg::Csv {
        println!("algo,k,l,mu,seconds,n_count");
    }
    for (ctx, mu) in &inputs {
        require_regular(*ctx, mu)?;
        for &algo in &algos {
            let row = run_bench::<Int>(algo, *ctx, mu)?;
            match format {
                FormatArg::Csv => println!(
                    "{},{},{},{},{:.6},{}",
                    row.algo.name(),
                    row.k,
                    row.l,
                    csv_quote(&row.mu.to_string()),
                    row.seconds,
                    row.n_count
                ),
                _ => println!(
                    "{:>7}  k={} l={} mu={}  {:>10.3}s  n={}",
                    row.algo.name(),
                    row.k,
                    row.l,
                    row.mu,
                    row.seconds,
                    row.n_count
                ),
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_decmat(
    ctx: ContextArgs,
    n: u64,
    at_one: bool,
    algo: AlgoArg,
    format: FormatArg,
    cache: Option<PathBuf>,
) -> Result<i32, Error> {
    let ctx = ctx.build()?;
    let mode = match algo {
        AlgoArg::Llt => Mode::Llt,
        AlgoArg::Fast => Mode::Fast,
        AlgoArg::Soergel => {
            return Err(Error::BadContext(
                "decmat supports --algo llt|fast (use compare for soergel)".into(),
            ))
        }
    };
    let mut s = open_session(ctx, mode, &cache)?;
    let m = s.dec_matrix(n)?;
    let cell = |p: &LaurentPoly| -> String {
        if at_one {
            p.eval_at_one().to_string()
        } else {
            p.to_string()
        }
    };
    match format {
        FormatArg::Json => {
            let entries: Vec<serde_json::Value> = m
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| {
                            if at_one {
                                serde_json::Value::from(p.eval_at_one())
                            } else {
                                p.to_json()
                            }
                        })
                        .collect()
                })
                .collect();
            let out = serde_json::json!({
                "rows": m.rows.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "cols": m.cols.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "entries": entries,
            });
            println!("{out}");
        }
        FormatArg::Csv => {
            let header: Vec<String> = std::iter::once("lambda".to_string())
                .chain(m.cols.iter().map(|c| csv_quote(&c.to_string())))
                .collect();
            println!("{}", header.join(","));
            for (la, row) in m.rows.iter().zip(&m.entries) {
                let mut fields = vec![csv_quote(&la.to_string())];
                fields.extend(row.iter().map(|p| csv_quote(&cell(p))));
                println!("{}", fields.join(","));
            }
        }
        FormatArg::Text => {
            let labels: Vec<String> = m.rows.iter().map(|r| r.to_string()).collect();
            let width = labels.iter().map(|s| s.len()).max().unwrap_or(1).max(6);
            let cells: Vec<Vec<String>> = m
                .entries
                .iter()
                .map(|row| row.iter().map(&cell).collect())
                .collect();
            let col_width = cells
                .iter()
                .flatten()
                .map(|s| s.len())
                .chain(m.cols.iter().map(|c| c.to_string().len()))
                .max()
                .unwrap_or(1);
            let head: Vec<String> = m
                .cols
                .iter()
                .map(|c| format!("{:>col_width$}", c.to_string()))
                .collect();
            println!("{:>width$} | {}", "", head.join("  "));
            for (label, row) in labels.iter().zip(&cells) {
                let body: Vec<String> = row.iter().map(|s| format!("{s:>col_width$}")).collect();
                println!("{label:>width$} | {}", body.join("  "));
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(seed: u64, cases: u32, max_size: u64) -> Result<i32, Error> {
    let report = cbt_core::selftest::run(cbt_core::selftest::Config {
        seed,
        cases,
        max_size,
    });
    for r in &report.results {
        let status = if r.passed { "ok" } else { "FAILED" };
        println!("{status:>6}  {} ({} cases)", r.name, r.cases);
        if let Some(detail) = &r.detail {
            println!("        {detail}");
        }
    }
    let total = report.results.len();
    if report.all_passed() {
        println!("all {total} properties passed (seed {seed}, {cases} cases, max size {max_size})");
        Ok(EXIT_OK)
    } else {
        let failed = report.results.iter().filter(|r| !r.passed).count();
        println!("{failed} of {total} properties FAILED (seed {seed})");
        Ok(EXIT_FAIL)
    }
}

fn run() -> Result<i32, Error> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    match cli.command {
        Command::Gcb {
            ctx,
            mu,
            algo,
            format,
            cache,
        } => cmd_gcb(ctx, mu, algo, format, cache),
        Command::Compare {
            ctx,
            mu,
            sweep,
            cache,
            inject_fault,
        } => cmd_compare(ctx, mu, sweep, cache, inject_fault),
        Command::Bench {
            suite,
            k,
            l,
            mu,
            algo,
            format,
        } => cmd_bench(suite, k, l, mu, algo, format),
        Command::Decmat {
            ctx,
            n,
            at_one,
            algo,
            format,
            cache,
        } => cmd_decmat(ctx, n, at_one, algo, format, cache),
        Command::Selftest {
            seed,
            cases,
            max_size,
        } => cmd_selftest(seed, cases, max_size),
    }
}

fn main() {
    let code = match std::panic::catch_unwind(run) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            }
        }
        Err(_) => {
            eprintln!("error: internal assertion failed (panic)");
            EXIT_INTERNAL
        }
    };
    std::process::exit(code);
}
