use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use edgeprobe::deterministic::cache::{verify_matrix, MatrixFile};
use edgeprobe::deterministic::disjunct::build_disjunct_matrix;
use edgeprobe::deterministic::family::{family_size, search_verified_family, DEFAULT_VERIFY_LIMIT};
use edgeprobe::deterministic::oneor::build_one_or_code;
use edgeprobe::deterministic::partition::build_partition_matrix;
use edgeprobe::harness::stats::AGGREGATE_HEADER;
use edgeprobe::harness::{
    generate, read_instance_spec, read_plan, round_budget, run_algorithm, run_plan, RunOptions,
};
use edgeprobe::{Constants, Ctx, Error, HiddenGraph, OracleSession, Result};

#[derive(Parser)]
#[command(
    name = "edgeprobe",
    version,
    about = "Learn hidden graphs with edge-detecting queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm against a graph file.
    Learn {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        graph: PathBuf,
        /// Edge bound for learners that need one.
        #[arg(long)]
        m: Option<usize>,
        /// Escalation depth of the k-round unknown-m learner.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Directory for verified two-round families.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Constant overrides, `name=value`.
        #[arg(long = "const", value_name = "NAME=VALUE")]
        constants: Vec<String>,
    },
    /// Run an experiment plan.
    Experiment {
        #[arg(long)]
        plan: PathBuf,
        /// Worker threads; overrides the plan.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write the graph an instance file describes.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a deterministic structure and write it as a matrix file.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// First seed tried by the family search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeds tried by the family search.
        #[arg(long, default_value_t = 256)]
        attempts: u64,
        /// Family size; defaults to the `c_family` formula.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a matrix file's hash and its combinatorial property.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERIFY_LIMIT)]
        limit: u128,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "two-round-family")]
    TwoRoundFamily,
    #[value(name = "one-or")]
    OneOr,
    Partition,
    Disjunct,
}

fn learn(
    alg: &str,
    graph: &Path,
    m: Option<usize>,
    opts: &RunOptions<'_>,
    ctx: &Ctx,
    transcript: Option<&Path>,
) -> Result<()> {
    let target = HiddenGraph::read_file(graph)?;
    let mut session = OracleSession::round_structured(&target);
    let start = Instant::now();
    let out = run_algorithm(alg, &mut session, m, ctx, opts)?;
    let wall_ms = start.elapsed().as_millis() as u64;
    let exact = out.edges == target.edge_set();
    if let Some(path) = transcript {
        session
            .transcript(alg, ctx.seed)
            .with_result(out.edges.clone(), exact, wall_ms)
            .write_file(path)?;
    }
    let budget = round_budget(alg, target.n(), opts)?;
    println!("# algorithm {alg}");
    println!("# queries {}", session.query_count());
    println!(
        "# rounds {} {:?}",
        session.current_round(),
        session.round_sizes()
    );
    println!("# budget {budget:?}");
    println!("# restarts {} fallback {}", out.restarts, out.fallback);
    println!("# exact {exact}");
    for (k, v) in &out.diagnostics {
        println!("# {k} {v}");
    }
    print!("{}", HiddenGraph::new(target.n(), out.edges)?.to_text());
    Ok(())
}

fn construct(
    kind: Kind,
    n: usize,
    m: usize,
    seed: u64,
    attempts: u64,
    t: Option<usize>,
) -> Result<MatrixFile> {
    Ok(match kind {
        Kind::TwoRoundFamily => {
            let t = t.unwrap_or_else(|| family_size(n, m, Constants::default().c_family));
            let p = 1.0 / m.max(2) as f64;
            let family =
                search_verified_family(n, m, t, p, seed..seed + attempts, DEFAULT_VERIFY_LIMIT)?
                    .ok_or_else(|| {
                        Error::AlgorithmContract(format!(
                            "no seed in {seed}..{} gives a covering family",
                            seed + attempts
                        ))
                    })?;
            MatrixFile::from_family(&family)
        }
        Kind::OneOr => MatrixFile::from_one_or(&build_one_or_code(n)?),
        Kind::Partition => {
            let p = build_partition_matrix(n, m)?;
            let ok = p.satisfies_bound();
            MatrixFile::from_partition(&p, ok)
        }
        Kind::Disjunct => MatrixFile::from_disjunct(&build_disjunct_matrix(n, m)?),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Learn {
            alg,
            graph,
            m,
            rounds,
            w,
            delta,
            seed,
            transcript,
            cache,
            constants,
        } => {
            let mut ctx = Ctx::new(seed);
            ctx.delta = delta;
            for c in &constants {
                let (k, v) = c.split_once('=').ok_or_else(|| {
                    Error::Precondition(format!("`--const {c}` needs NAME=VALUE"))
                })?;
                ctx.constants.set(k.trim(), v.trim())?;
            }
            let opts = RunOptions {
                rounds,
                w,
                cache_dir: cache.as_deref(),
            };
            learn(&alg, &graph, m, &opts, &ctx, transcript.as_deref())
        }
        Command::Experiment { plan, threads } => {
            let mut plan = read_plan(&plan)?;
            if threads.is_some() {
                plan.threads = threads;
            }
            let report = run_plan(&plan)?;
            println!("{AGGREGATE_HEADER}");
            println!("{}", report.aggregate.to_csv());
            for t in report.trials.iter().filter(|t| t.error.is_some()) {
                eprintln!(
                    "trial {}: {}",
                    t.row.trial,
                    t.error.as_deref().unwrap_or("")
                );
            }
            Ok(())
        }
        Command::Generate { spec, out } => {
            let g = generate(&read_instance_spec(&spec)?)?;
            g.write_file(&out)?;
            println!("n {} m {}", g.n(), g.m());
            Ok(())
        }
        Command::Construct {
            kind,
            n,
            m,
            seed,
            attempts,
            t,
            out,
        } => {
            let file = construct(kind, n, m, seed, attempts, t)?;
            file.write_file(&out)?;
            println!(
                "{} n {} m {} rows {} verified {}",
                file.kind.as_str(),
                file.n,
                file.m,
                file.t(),
                file.verified
            );
            Ok(())
        }
        Command::Verify { file, limit } => {
            let f = MatrixFile::read_file(&file)?;
            let report = verify_matrix(&f, limit)?;
            println!(
                "{} {}: {}",
                report.kind.as_str(),
                if report.holds { "holds" } else { "FAILS" },
                report.detail
            );
            if report.holds {
                Ok(())
            } else {
                Err(Error::AlgorithmContract(report.detail))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
