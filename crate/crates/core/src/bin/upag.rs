use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use upag::construct::{lfc_trace, sigma_rank, sigma_rank_with, TieBreak};
use upag::entropy::{bounds_report, degree_entropy, h0};
use upag::generate::{generate, log_prob, GenConfig, DEFAULT_EXACT_CUTOFF};
use upag::oracle::{check_exhaustive, check_sampled, NaiveGraph};
use upag::{edgelist, CompressedGraph, PaGraph};

#[derive(Parser)]
#[command(
    name = "upag",
    version,
    about = "Compressed preferential-attachment graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Parent tree plus wavelet tree over the reduced adjacency string; vertices renamed.
    Unlabelled,
    /// Wavelet tree over the full adjacency string; original labels kept.
    Labelled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    /// Smaller index, smaller rank.
    Ascending,
    /// Larger index, smaller rank.
    Descending,
    /// Smaller `--priority` key, smaller rank.
    Priority,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a PA(M; n) graph and write it as an edge list.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge list path; stdout when omitted (stats then go to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the compressed structure from an edge list.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the `old new` relabel map to this path.
        #[arg(long)]
        emit_relabel: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Unlabelled)]
        mode: Mode,
        /// Order among equal in-degrees when choosing parents.
        #[arg(long, value_enum, default_value_t = TieArg::Ascending)]
        tie_break: TieArg,
        /// Per-vertex keys for `--tie-break priority`, comma separated, indexed by file label.
        #[arg(long, value_delimiter = ',')]
        priority: Vec<usize>,
    },
    /// Answer a query against a .upag file.
    Query {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(subcommand)]
        query: Query,
    },
    /// Entropies, probability and space budgets for an edge list.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Emit one CSV header and row instead of key=value lines.
        #[arg(long)]
        csv: bool,
    },
    /// Compare every query on a .upag file against a brute-force oracle.
    Selfcheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        against: PathBuf,
        /// Random queries when the graph is too large for exhaustive checking.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time each query kind.
    Bench {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the least-frequent-character reduction on a string and show each step.
    Lfc {
        #[arg(long)]
        string: String,
        #[arg(long)]
        block: usize,
    },
}

#[derive(Subcommand)]
enum Query {
    /// i-th out-neighbour of v.
    Outn { v: usize, i: usize },
    /// i-th in-neighbour of v.
    Inn { v: usize, i: usize },
    /// In-, out- and total degree of v.
    Deg { v: usize },
    /// Whether u and v share an edge.
    Adj { u: usize, v: usize },
    /// Out- and in-neighbour lists of v.
    Nbrs { v: usize },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<upag::Error> for Failure {
    fn from(e: upag::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { m, n, seed, out } => cmd_generate(m, n, seed, out.as_deref()),
        Command::Build {
            input,
            out,
            emit_relabel,
            mode,
            tie_break,
            priority,
        } => cmd_build(
            &input,
            &out,
            emit_relabel.as_deref(),
            mode,
            tie_break,
            &priority,
        ),
        Command::Query { input, query } => cmd_query(&input, query),
        Command::Stats { input, csv } => cmd_stats(&input, csv),
        Command::Selfcheck {
            input,
            against,
            samples,
            seed,
        } => cmd_selfcheck(&input, &against, samples, seed),
        Command::Bench {
            input,
            queries,
            threads,
            seed,
        } => cmd_bench(&input, queries, threads, seed),
        Command::Lfc { string, block } => cmd_lfc(&string, block),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<CompressedGraph, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(CompressedGraph::from_bytes(&bytes)?)
}

fn read_edges(path: &Path) -> Result<edgelist::EdgeList, Failure> {
    let e = edgelist::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if e.arrival_inferred {
        eprintln!(
            "warning: {} is not in block order; arrival order inferred by peeling (one linear extension)",
            path.display()
        );
    }
    Ok(e)
}

fn cmd_generate(m: usize, n: usize, seed: u64, out: Option<&Path>) -> CmdResult {
    let g = generate(&GenConfig::new(m, n, seed))?;
    let lp = log_prob(&g, n <= DEFAULT_EXACT_CUTOFF)?;
    let mut stats = format!(
        "m={m} n={n} seed={seed} edges={}\nlg(1/P)={:.4}\n",
        n * m,
        lp.bits
    );
    if let Some(p) = &lp.exact {
        stats.push_str(&format!("P={p}\n"));
    }
    match out {
        Some(path) => {
            edgelist::write(path, g.dag())?;
            print!("{stats}");
        }
        None => {
            print!("{}", edgelist::to_text(g.dag()));
            eprint!("{stats}");
        }
    }
    Ok(())
}

fn cmd_build(
    input: &Path,
    out: &Path,
    emit_relabel: Option<&Path>,
    mode: Mode,
    tie: TieArg,
    priority: &[usize],
) -> CmdResult {
    let e = read_edges(input)?;
    let tie_break = match tie {
        TieArg::Ascending => TieBreak::AscendingIndex,
        TieArg::Descending => TieBreak::DescendingIndex,
        TieArg::Priority => {
            if priority.len() != e.arrival.len() {
                return Err(Failure::Usage(format!(
                    "--priority needs {} keys, got {}",
                    e.arrival.len(),
                    priority.len()
                )));
            }
            TieBreak::Priority(e.arrival.iter().map(|&old| priority[old]).collect())
        }
    };
    let g = match mode {
        Mode::Unlabelled => {
            CompressedGraph::build_with(&e.dag, &sigma_rank_with(&e.dag, tie_break)?)?
        }
        Mode::Labelled => CompressedGraph::build_labelled(&e.dag)?,
    };
    let bytes = g.to_bytes();
    std::fs::write(out, &bytes)
        .map_err(|err| Failure::Usage(format!("{}: {err}", out.display())))?;
    if let Some(path) = emit_relabel {
        // compose file labels -> arrival labels -> stored labels
        let map = g
            .relabel()
            .map(|r| r.to_vec())
            .unwrap_or_else(|| (0..g.vertex_count()).collect());
        let mut text = String::new();
        let mut pairs: Vec<(usize, usize)> = e
            .arrival
            .iter()
            .enumerate()
            .map(|(t, &old)| (old, map[t]))
            .collect();
        pairs.sort_unstable();
        for (old, new) in pairs {
            text.push_str(&format!("{old} {new}\n"));
        }
        std::fs::write(path, text)
            .map_err(|err| Failure::Usage(format!("{}: {err}", path.display())))?;
    }
    let r = g.space_report();
    println!(
        "mode={}",
        if g.is_labelled() {
            "labelled"
        } else {
            "unlabelled"
        }
    );
    println!("m={} n={}", g.m(), g.n());
    println!("file_bytes={}", bytes.len());
    println!(
        "payload_bits={} directory_bits={} total_bits={}",
        r.payload_bits(),
        r.directory_bits(),
        r.total_bits
    );
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_query(input: &Path, q: Query) -> CmdResult {
    let g = load(input)?;
    match q {
        Query::Outn { v, i } => println!("{}", g.out_neighbour(v, i)?),
        Query::Inn { v, i } => println!("{}", g.in_neighbour(v, i)?),
        Query::Deg { v } => println!(
            "in={} out={} total={}",
            g.degree_in(v)?,
            g.degree_out(v)?,
            g.degree_total(v)?
        ),
        Query::Adj { u, v } => println!("{}", g.adjacent(u, v)?),
        Query::Nbrs { v } => {
            println!("out={}", join(&g.neighbours_out(v)?));
            println!("in={}", join(&g.neighbours_in(v)?));
        }
    }
    Ok(())
}

fn cmd_stats(input: &Path, csv: bool) -> CmdResult {
    let e = read_edges(input)?;
    let g = PaGraph::from_dag(e.dag)?;
    let b = bounds_report(&g)?;
    let exact = log_prob(&g, g.n() <= DEFAULT_EXACT_CUTOFF)?;
    let c = CompressedGraph::build(g.dag())?;
    let r = c.space_report();
    let labelled = CompressedGraph::build_labelled(g.dag())?.space_report();
    let fields: Vec<(&str, String)> = vec![
        ("m", g.m().to_string()),
        ("n", g.n().to_string()),
        ("h_deg", format!("{:.6}", degree_entropy(&g))),
        ("lg_inv_p", format!("{:.6}", b.lg_inv_p)),
        ("lg_n_factorial", format!("{:.6}", b.lg_factorial_n)),
        ("unlabelled_lb", format!("{:.6}", b.unlabelled_lb)),
        ("entropy_budget", format!("{:.3}", b.entropy_budget)),
        ("worstcase_budget", format!("{:.3}", b.worstcase_budget)),
        ("h0_a_prime", format!("{:.6}", r.h0_stored_bits)),
        ("tree_payload_bits", r.tree_payload_bits.to_string()),
        ("tree_directory_bits", r.tree_directory_bits.to_string()),
        ("wt_payload_bits", r.wt_payload_bits.to_string()),
        ("wt_directory_bits", r.wt_directory_bits.to_string()),
        ("alphabet_payload_bits", r.alphabet_payload_bits.to_string()),
        (
            "alphabet_directory_bits",
            r.alphabet_directory_bits.to_string(),
        ),
        ("distinct_a_prime", r.distinct_symbols.to_string()),
        ("metadata_bits", r.metadata_bits.to_string()),
        ("total_bits", r.total_bits.to_string()),
        ("labelled_total_bits", labelled.total_bits.to_string()),
        ("arrival_inferred", e.arrival_inferred.to_string()),
    ];
    if csv {
        println!(
            "{}",
            fields.iter().map(|f| f.0).collect::<Vec<_>>().join(",")
        );
        println!(
            "{}",
            fields
                .iter()
                .map(|f| f.1.as_str())
                .collect::<Vec<_>>()
                .join(",")
        );
    } else {
        println!("H_deg={:.2} lg(1/P)={:.2}", b.h_deg, b.lg_inv_p);
        if let Some(p) = &exact.exact {
            println!("P={p}");
        }
        for (k, v) in fields {
            println!("{k}={v}");
        }
    }
    Ok(())
}

fn cmd_selfcheck(input: &Path, against: &Path, samples: usize, seed: u64) -> CmdResult {
    let g = load(input)?;
    let e = read_edges(against)?;
    if g.n() != e.dag.n() || g.m() != e.dag.m() {
        return Err(Failure::Verification(format!(
            "MISMATCH shape: file has M={} n={}, edge list has M={} n={}",
            g.m(),
            g.n(),
            e.dag.m(),
            e.dag.n()
        )));
    }
    let oracle = if g.is_labelled() {
        NaiveGraph::labelled(&e.dag)
    } else {
        NaiveGraph::unlabelled(&e.dag, sigma_rank(&e.dag).ranks())
    };
    let n = g.n();
    let checked = if n <= 2000 {
        check_exhaustive(&g, &oracle, n <= 200)
    } else {
        check_sampled(&g, &oracle, samples, seed)
    };
    match checked {
        Ok(count) => {
            println!("OK ({count} queries verified)");
            Ok(())
        }
        Err(m) => Err(Failure::Verification(format!("MISMATCH {m}"))),
    }
}

#[derive(Clone, Copy)]
enum Op {
    Outn,
    Inn,
    Deg,
    Adj,
}

fn cmd_bench(input: &Path, queries: usize, threads: usize, seed: u64) -> CmdResult {
    let g = load(input)?;
    if threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let nv = g.vertex_count();
    let degrees: Vec<usize> = (0..nv).map(|v| g.degree_in(v)).collect::<Result<_, _>>()?;
    println!(
        "m={} n={} threads={threads} queries={queries}",
        g.m(),
        g.n()
    );
    for (name, op) in [
        ("outn", Op::Outn),
        ("inn", Op::Inn),
        ("deg", Op::Deg),
        ("adj", Op::Adj),
    ] {
        let per_thread = queries.div_ceil(threads);
        let start = Instant::now();
        let sink: usize = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let g = &g;
                    let degrees = &degrees;
                    s.spawn(move || {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((t as u64) << 32));
                        let mut acc = 0usize;
                        for _ in 0..per_thread {
                            acc = acc.wrapping_add(match op {
                                Op::Outn => {
                                    let v = rng.gen_range(1..nv);
                                    g.out_neighbour(v, rng.gen_range(1..=g.m())).unwrap_or(0)
                                }
                                Op::Inn => {
                                    let v = rng.gen_range(0..nv);
                                    if degrees[v] == 0 {
                                        0
                                    } else {
                                        g.in_neighbour(v, rng.gen_range(1..=degrees[v]))
                                            .unwrap_or(0)
                                    }
                                }
                                Op::Deg => g.degree_in(rng.gen_range(0..nv)).unwrap_or(0),
                                Op::Adj => usize::from(
                                    g.adjacent(rng.gen_range(0..nv), rng.gen_range(0..nv))
                                        .unwrap_or(false),
                                ),
                            });
                        }
                        acc
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("bench thread"))
                .fold(0, usize::wrapping_add)
        });
        let elapsed = start.elapsed();
        let total = per_thread * threads;
        let ns = elapsed.as_nanos() as f64 * threads as f64 / total.max(1) as f64;
        println!("op={name} ns_per_query={ns:.1} checksum={sink}");
    }
    Ok(())
}

fn show_row(row: &[Option<char>]) -> String {
    row.iter().map(|c| c.unwrap_or('λ')).collect()
}

fn cmd_lfc(string: &str, block: usize) -> CmdResult {
    let a: Vec<char> = string.chars().collect();
    let t = lfc_trace(&a, block)?;
    let sigma: Vec<String> = t
        .sigma
        .iter()
        .enumerate()
        .map(|(r, c)| format!("{c}:{}", r + 1))
        .collect();
    println!("sigma={}", sigma.join(","));
    println!("S={}", t.sorted.iter().collect::<String>());
    for (k, step) in t.steps.iter().enumerate() {
        println!(
            "step={} block={} char={} A_hat={} S={}",
            k + 1,
            step.block,
            step.character,
            show_row(&step.a_hat),
            show_row(&step.s)
        );
    }
    let out: String = t.output.iter().collect();
    println!(
        "A'={out} H0pc: {:.4}→{:.4}",
        h0(&a).h0_pc_bits,
        h0(&t.output).h0_pc_bits
    );
    Ok(())
}
