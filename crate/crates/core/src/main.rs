use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tideal::basis::enumerate_basis;
use tideal::experiments::{conjecture_scan, describe_quotient, run_suite, Lab, Suite, SuiteReport};
use tideal::freering::{parse_expression, MultiDegree, Polynomial};
use tideal::intlattice::modp::is_prime;
use tideal::intlattice::Order;
use tideal::tideal::store::{clear_cache, list_cache};
use tideal::tideal::{
    enumerate_generators, order_in_quotient, quotient_torsion, t_membership, LatticeStore, MembershipReport,
    QueryOptions,
};

/// Membership, orders and torsion for commutator T-ideals of the free ring
/// over the integers.
#[derive(Parser)]
#[command(name = "tideal", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Every flag can also be set through the environment variable shown.
#[derive(Args)]
struct RunConfig {
    /// Commutator length of the ideal T(k).
    #[arg(long, global = true, env = "TIDEAL_K")]
    k: Option<usize>,
    /// Largest total degree of a component that may be built.
    #[arg(long, global = true, env = "TIDEAL_DEGREE_CAP", default_value_t = 8,
          value_parser = clap::value_parser!(u32).range(2..))]
    degree_cap: u32,
    /// Directory for persisted lattices; without it nothing is written.
    #[arg(long, global = true, env = "TIDEAL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "TIDEAL_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: one per core).
    #[arg(long, global = true, env = "TIDEAL_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Include the degree-7 instances in suites.
    #[arg(long, global = true, env = "TIDEAL_SLOW")]
    slow: bool,
    /// Comma-separated primes for the modular rejection test.
    #[arg(long, global = true, env = "TIDEAL_PRESCREEN_PRIMES", value_delimiter = ',')]
    prescreen_primes: Vec<u64>,
    /// Record wall-clock times in reports (makes them non-reproducible).
    #[arg(long, global = true, env = "TIDEAL_TIMING")]
    timing: bool,
    /// Embed full membership certificates, not only digests.
    #[arg(long, global = true, env = "TIDEAL_CERTIFICATES")]
    certificates: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an expression lies in T(k). Exit 0 if it does, 1 if not.
    Member { expr: String },
    /// Order of an expression in the additive group of Z<X>/T(k).
    Order { expr: String },
    /// Free rank and torsion of one component of Z<X>/T(k).
    Torsion {
        /// Multidegree, e.g. `x1,x2,x3` or `x1^2,y1`.
        degree: String,
    },
    /// Orders of [x1..xm][y1..yn] modulo T(m+n-1) for m, n >= 2, one odd.
    Scan {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
    },
    /// Run a verification suite. Exit 0 iff every asserted claim holds.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// List the spanning generators of T(k) in one component.
    Gens { degree: String },
    /// Inspect or clear the lattice cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum CacheAction {
    /// One line per stored lattice with its manifest.
    List,
    /// Entry count, total size and keys.
    Stats,
    /// Remove every stored lattice.
    Clear,
}

/// Usage or resource failure: exit 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = &cli.config;
    if let Some(n) = config.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global()?;
    }
    for &p in &config.prescreen_primes {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Failure(format!("prescreen modulus {p} must be a prime below 2^31")));
        }
    }
    let store = match &config.cache_dir {
        Some(dir) => LatticeStore::with_cache_dir(config.degree_cap, dir),
        None => LatticeStore::new(config.degree_cap),
    };
    match &cli.command {
        Command::Member { expr } => {
            let p = parse(expr)?;
            let options = QueryOptions {
                prescreen_primes: config.prescreen_primes.clone(),
                include_certificates: config.certificates,
                timing: config.timing,
            };
            let report = t_membership(&store, &p, need_k(config)?, &options)?;
            emit(config.format, &report, member_text(&report), member_csv(&report))?;
            Ok(if report.member { 0 } else { 1 })
        }
        Command::Order { expr } => {
            let p = parse(expr)?;
            let k = need_k(config)?;
            let order = order_in_quotient(&store, &p, k)?;
            #[derive(Serialize)]
            struct OrderReport {
                input: String,
                k: usize,
                order: Order,
            }
            let report = OrderReport {
                input: p.to_string(),
                k,
                order,
            };
            let csv = csv_lines(&["input", "k", "order"], [[report.input.clone(), k.to_string(), report.order.to_string()]]);
            emit(config.format, &report, format!("{}\n", report.order), csv)?;
            Ok(0)
        }
        Command::Torsion { degree } => {
            let d = parse_degree(degree)?;
            let k = need_k(config)?;
            let q = quotient_torsion(&store, k, &d)?;
            #[derive(Serialize)]
            struct TorsionReport {
                k: usize,
                multidegree: String,
                free_rank: usize,
                torsion: Vec<String>,
            }
            let report = TorsionReport {
                k,
                multidegree: d.to_string(),
                free_rank: q.free_rank,
                torsion: q.torsion.iter().map(ToString::to_string).collect(),
            };
            let csv = csv_lines(
                &["k", "multidegree", "free_rank", "torsion"],
                [[k.to_string(), report.multidegree.clone(), q.free_rank.to_string(), report.torsion.join(" ")]],
            );
            emit(config.format, &report, format!("{}\n", describe_quotient(&q)), csv)?;
            Ok(0)
        }
        Command::Scan { max_degree } => {
            if *max_degree > config.degree_cap {
                return Err(Failure(format!(
                    "scan degree {max_degree} exceeds the degree cap {}",
                    config.degree_cap
                )));
            }
            let report = conjecture_scan(&lab(&store, config), *max_degree);
            emit_suite(config.format, &report)
        }
        Command::Verify { suite } => {
            let report = run_suite(&lab(&store, config), *suite);
            emit_suite(config.format, &report)
        }
        Command::Gens { degree } => {
            let d = parse_degree(degree)?;
            let k = need_k(config)?;
            if k == 0 {
                return Err(Failure("commutator length must be at least 1".to_string()));
            }
            let gens = enumerate_generators(k, &enumerate_basis(&d, config.degree_cap)?);
            #[derive(Serialize)]
            struct Generator {
                index: usize,
                text: String,
                args: Vec<String>,
                right_cofactor: String,
            }
            let listing: Vec<Generator> = gens
                .iter()
                .enumerate()
                .map(|(index, g)| {
                    let desc = g.describe();
                    Generator {
                        index,
                        text: g.to_string(),
                        args: desc.args,
                        right_cofactor: desc.right_cofactor,
                    }
                })
                .collect();
            let text: String = listing.iter().map(|g| format!("{}\t{}\n", g.index, g.text)).collect();
            let csv = csv_lines(
                &["index", "generator"],
                listing.iter().map(|g| [g.index.to_string(), g.text.clone()]),
            );
            emit(config.format, &listing, text, csv)?;
            Ok(0)
        }
        Command::Cache { action } => cache(config, *action),
    }
}

fn lab<'a>(store: &'a LatticeStore, config: &RunConfig) -> Lab<'a> {
    Lab {
        store,
        timing: config.timing,
        slow: config.slow,
    }
}

fn need_k(config: &RunConfig) -> Result<usize, Failure> {
    config
        .k
        .ok_or_else(|| Failure("this command needs --k".to_string()))
}

fn parse(expr: &str) -> Result<Polynomial, Failure> {
    Ok(parse_expression(expr)?)
}

fn parse_degree(text: &str) -> Result<MultiDegree, Failure> {
    Ok(text.parse::<MultiDegree>()?)
}

fn emit<T: Serialize>(format: Format, value: &T, text: String, csv: String) -> Result<(), Failure> {
    let out = match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => csv,
    };
    std::io::stdout().lock().write_all(out.as_bytes())?;
    Ok(())
}

fn emit_suite(format: Format, report: &SuiteReport) -> Result<u8, Failure> {
    emit(format, report, report.to_text(), report.to_csv())?;
    Ok(if report.passed { 0 } else { 1 })
}

fn csv_lines<R, I>(header: &[&str], rows: I) -> String
where
    R: IntoIterator<Item = String>,
    I: IntoIterator<Item = R>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

fn member_text(r: &MembershipReport) -> String {
    let order = r.order.as_ref().map_or("not computed".to_string(), ToString::to_string);
    let mut out = format!(
        "{} T({})  order {}\n",
        if r.member { "member of" } else { "not in" },
        r.k,
        order
    );
    for c in &r.components {
        out.push_str(&format!(
            "  {}  dim {}  {}  decided by {}{}\n",
            c.multidegree,
            c.basis_size,
            if c.member { "member" } else { "not member" },
            c.decided_by,
            c.certificate_digest
                .as_ref()
                .map(|d| format!("  certificate {d}"))
                .unwrap_or_default()
        ));
    }
    out
}

fn member_csv(r: &MembershipReport) -> String {
    csv_lines(
        &["multidegree", "member", "order", "decided_by", "certificate_digest", "basis_size", "generator_count", "rank"],
        r.components.iter().map(|c| {
            [
                c.multidegree.clone(),
                c.member.to_string(),
                c.order.as_ref().map(ToString::to_string).unwrap_or_default(),
                c.decided_by.clone(),
                c.certificate_digest.clone().unwrap_or_default(),
                c.basis_size.to_string(),
                c.generator_count.to_string(),
                c.rank.map(|r| r.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

fn cache(config: &RunConfig, action: CacheAction) -> Result<u8, Failure> {
    let dir = config
        .cache_dir
        .as_ref()
        .ok_or_else(|| Failure("cache commands need --cache-dir".to_string()))?;
    match action {
        CacheAction::List => {
            let entries = list_cache(dir)?;
            let text: String = entries
                .iter()
                .map(|e| {
                    format!(
                        "k={} {} basis={} generators={} rank={} bytes={}\n",
                        e.manifest.k, e.manifest.multidegree, e.manifest.basis_size, e.manifest.generator_count, e.manifest.rank, e.bytes
                    )
                })
                .collect();
            let csv = csv_lines(
                &["k", "multidegree", "basis_size", "generator_count", "rank", "bytes", "path"],
                entries.iter().map(|e| {
                    [
                        e.manifest.k.to_string(),
                        e.manifest.multidegree.clone(),
                        e.manifest.basis_size.to_string(),
                        e.manifest.generator_count.to_string(),
                        e.manifest.rank.to_string(),
                        e.bytes.to_string(),
                        e.path.clone(),
                    ]
                }),
            );
            emit(config.format, &entries, text, csv)?;
        }
        CacheAction::Stats => {
            let entries = list_cache(dir)?;
            #[derive(Serialize)]
            struct Stats {
                entries: usize,
                bytes: u64,
                keys: Vec<String>,
            }
            let stats = Stats {
                entries: entries.len(),
                bytes: entries.iter().map(|e| e.bytes).sum(),
                keys: entries
                    .iter()
                    .map(|e| format!("k={} {}", e.manifest.k, e.manifest.multidegree))
                    .collect(),
            };
            let mut text = format!("{} entries, {} bytes\n", stats.entries, stats.bytes);
            for key in &stats.keys {
                text.push_str(&format!("  {key}\n"));
            }
            let csv = csv_lines(&["entries", "bytes"], [[stats.entries.to_string(), stats.bytes.to_string()]]);
            emit(config.format, &stats, text, csv)?;
        }
        CacheAction::Clear => {
            let n = clear_cache(dir)?;
            #[derive(Serialize)]
            struct Cleared {
                removed: usize,
            }
            let csv = csv_lines(&["removed"], [[n.to_string()]]);
            emit(config.format, &Cleared { removed: n }, format!("removed {n} entries\n"), csv)?;
        }
    }
    Ok(0)
}
