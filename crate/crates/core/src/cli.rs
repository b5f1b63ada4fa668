//! Command-line front end. JSON goes to stdout, diagnostics to stderr, and
//! the exit code carries the verdict.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::automata::{build_dfa, minimize, AutomataError, DEFAULT_PROP_CAP};
use crate::domains::{
    gen_pacman, gen_random, Domain, DomainError, PacmanConfig, RandomDomainConfig,
};
use crate::ltlf::{parse, Proposition};
use crate::oracle::{default_horizon, oracle_mbsd, OracleError};
use crate::qbf::{cnf_to_cnf1, parse_qdimacs, qbf1_to_mbsd, QbfCnf1};
use crate::reductions::{
    simulate, solve_mbsd_with, verify_mbsd, Adversary, Agent, DomainRef, InstanceJson, MappingSpec,
    MbsdInstance, MbsdStrategy, ReductionError, SolveMode, SolveOptions, DEFAULT_K_CAP,
};

/// Product nodes `verify` explores before giving up.
pub const VERIFY_BUDGET: usize = 5_000_000;

/// Out-degree bound used by `gen random`.
const RANDOM_BRANCHING: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Positive,
    Negative,
    InputError,
    ResourceCap,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Positive => 0,
            ExitStatus::Negative => 1,
            ExitStatus::InputError => 2,
            ExitStatus::ResourceCap => 3,
        }
    }

    fn of(verdict: bool) -> ExitStatus {
        if verdict {
            ExitStatus::Positive
        } else {
            ExitStatus::Negative
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mbsd",
    version,
    about = "Mimicking behaviour synthesis across dynamic domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide realizability and optionally write the strategy.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "auto")]
        mode: SolveMode,
        #[arg(long)]
        strategy_out: Option<PathBuf>,
        /// Include wall-clock time in the output.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = DEFAULT_K_CAP)]
        k_cap: usize,
    },
    /// Check a strategy against every behaviour of A.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Play a strategy against a scripted or seeded adversary.
    Simulate(SimulateArgs),
    /// Translate an LTLf formula to a DFA.
    Ltlf2dfa {
        #[arg(long)]
        formula: String,
        /// Comma-separated alphabet.
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
        #[arg(long)]
        minimize: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate instances and domains.
    #[command(subcommand)]
    Gen(Gen),
    /// Decide an instance by direct search over joint traces.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        /// Search horizon in moves.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("adversary").required(true).args(["script", "seed"]))]
struct SimulateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    strategy: PathBuf,
    /// JSON array of A's state names after the initial state.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, requires = "steps")]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Hardness gadget instance from a QDIMACS file.
    Qbf {
        #[arg(long)]
        input: PathBuf,
        /// Rewrite into one-universal-per-clause form first.
        #[arg(long)]
        to_cnf1: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid Pac-Man instance: `<prefix>.json` plus both domain files.
    Pacman {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ghosts: usize,
        /// JSON array of `[x, y]` wall cells.
        #[arg(long)]
        walls: Option<PathBuf>,
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Random domain.
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        props: usize,
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            status: ExitStatus::InputError,
            message: message.into(),
        }
    }

    fn reduction(context: &str, e: ReductionError) -> Failure {
        Failure {
            status: if e.is_resource_cap() {
                ExitStatus::ResourceCap
            } else {
                ExitStatus::InputError
            },
            message: format!("{context}: {e}"),
        }
    }

    fn domain(context: &str, e: DomainError) -> Failure {
        Failure::reduction(context, ReductionError::Domain(e))
    }

    fn automata(context: &str, e: AutomataError) -> Failure {
        Failure::reduction(context, ReductionError::Automata(e))
    }
}

type Outcome = Result<ExitStatus, Failure>;

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn read(flag: &str, path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{flag} {}: {e}", show(path))))
}

fn write(flag: &str, path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{flag} {}: {e}", show(path))))
}

fn load_instance(path: &Path) -> Result<MbsdInstance, Failure> {
    MbsdInstance::load(path)
        .map_err(|e| Failure::reduction(&format!("--instance {}", show(path)), e))
}

fn load_strategy(path: &Path, p: &MbsdInstance) -> Result<MbsdStrategy, Failure> {
    let text = read("--strategy", path)?;
    MbsdStrategy::decode(&text, p)
        .map_err(|e| Failure::reduction(&format!("--strategy {}", show(path)), e))
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    writeln!(out, "{text}").map_err(|e| Failure::input(format!("stdout: {e}")))
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, T>(argv: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                ExitStatus::InputError
            } else {
                ExitStatus::Positive
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Solve {
            instance,
            mode,
            strategy_out,
            stats,
            k_cap,
        } => solve(&instance, mode, strategy_out.as_deref(), stats, k_cap, out),
        Command::Verify { instance, strategy } => {
            let p = load_instance(&instance)?;
            let st = load_strategy(&strategy, &p)?;
            let ok =
                verify_mbsd(&p, &st, VERIFY_BUDGET).map_err(|e| Failure::reduction("verify", e))?;
            emit(out, &json!({ "verified": ok }))?;
            Ok(ExitStatus::of(ok))
        }
        Command::Simulate(args) => run_simulation(&args, out),
        Command::Ltlf2dfa {
            formula,
            props,
            minimize: min,
            dot,
        } => {
            let props = props
                .iter()
                .map(|s| Proposition::new(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::input(format!("--props: {e}")))?;
            let universe: BTreeSet<Proposition> = props.iter().cloned().collect();
            let f = parse(&formula, Some(&universe))
                .map_err(|e| Failure::input(format!("--formula: {e}")))?;
            let mut dfa = build_dfa(&f, &props, DEFAULT_PROP_CAP)
                .map_err(|e| Failure::automata("--formula", e))?;
            if min {
                dfa = minimize(&dfa);
            }
            if let Some(path) = dot {
                write("--dot", &path, &dfa.to_dot())?;
            }
            emit(out, &dfa.to_json())?;
            Ok(ExitStatus::Positive)
        }
        Command::Gen(g) => generate(g, out),
        Command::Oracle { instance, horizon } => {
            let p = load_instance(&instance)?;
            let h = horizon.unwrap_or_else(|| default_horizon(&p));
            let verdict = oracle_mbsd(&p, Some(h)).map_err(|e| match e {
                OracleError::TooLarge { .. } => Failure {
                    status: ExitStatus::ResourceCap,
                    message: format!("--instance {}: {e}", show(&instance)),
                },
                e => Failure::input(format!("--instance {}: {e}", show(&instance))),
            })?;
            emit(out, &json!({ "realizable": verdict, "horizon": h }))?;
            Ok(ExitStatus::of(verdict))
        }
    }
}

fn solve(
    instance: &Path,
    mode: SolveMode,
    strategy_out: Option<&Path>,
    stats: bool,
    k_cap: usize,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_instance(instance)?;
    let r = solve_mbsd_with(&p, &SolveOptions { mode, k_cap })
        .map_err(|e| Failure::reduction("solve", e))?;
    let mut stats_json = serde_json::to_value(&r.stats).expect("stats serialize");
    if stats {
        stats_json["elapsed_ms"] = json!(r.stats.elapsed_ms);
    }
    if let (Some(path), Some(st)) = (strategy_out, &r.strategy) {
        write("--strategy-out", path, &st.encode(&p))?;
    }
    emit(
        out,
        &json!({ "realizable": r.realizable, "stats": stats_json }),
    )?;
    Ok(ExitStatus::of(r.realizable))
}

fn run_simulation(args: &SimulateArgs, out: &mut dyn Write) -> Outcome {
    let p = load_instance(&args.instance)?;
    let st = load_strategy(&args.strategy, &p)?;
    let da = p.domain_a();
    let (adversary, steps) = match (&args.script, args.seed) {
        (Some(path), _) => {
            let names: Vec<String> = serde_json::from_str(&read("--script", path)?)
                .map_err(|e| Failure::input(format!("--script {}: {e}", show(path))))?;
            let moves = names
                .iter()
                .map(|n| {
                    da.state_by_name(n).ok_or_else(|| {
                        Failure::input(format!("--script {}: unknown state `{n}`", show(path)))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let len = moves.len();
            (Adversary::Script(moves), len)
        }
        (None, Some(seed)) => (Adversary::Seeded(seed), args.steps.unwrap_or(0)),
        (None, None) => return Err(Failure::input("one of --script or --seed is required")),
    };
    let sim = simulate(&p, &st, adversary, steps).map_err(|e| Failure::reduction("simulate", e))?;
    let names = |d: &Domain, tr: &[usize]| -> Vec<String> {
        tr.iter().map(|&s| d.name(s).to_string()).collect()
    };
    emit(
        out,
        &json!({
            "trace_a": names(da, &sim.trace_a),
            "trace_b": names(p.domain_b(), &sim.trace_b),
            "stopped_by_b": sim.stopped_by_b,
            "satisfied": sim.satisfied,
        }),
    )?;
    Ok(ExitStatus::of(sim.satisfied))
}

fn generate(g: Gen, out: &mut dyn Write) -> Outcome {
    match g {
        Gen::Qbf {
            input,
            to_cnf1,
            out: path,
        } => {
            let text = read("--input", &input)?;
            let q = parse_qdimacs(&text)
                .map_err(|e| Failure::input(format!("--input {}: {e}", show(&input))))?;
            let q1 = if to_cnf1 {
                cnf_to_cnf1(&q)
            } else {
                QbfCnf1::new(q).map_err(|e| {
                    Failure::input(format!("--input {}: {e} (try --to-cnf1)", show(&input)))
                })?
            };
            let p = qbf1_to_mbsd(&q1);
            write("--out", &path, &p.encode())?;
            emit(
                out,
                &json!({
                    "universals": q1.n(),
                    "conjuncts": p.mapping().conjuncts().len(),
                    "states_per_side": p.domain_a().num_states(),
                }),
            )?;
            Ok(ExitStatus::Positive)
        }
        Gen::Pacman {
            n,
            ghosts,
            walls,
            out_prefix,
        } => {
            let mut cfg = PacmanConfig::new(n, ghosts);
            if let Some(path) = &walls {
                let cells: Vec<(usize, usize)> = serde_json::from_str(&read("--walls", path)?)
                    .map_err(|e| Failure::input(format!("--walls {}: {e}", show(path))))?;
                cfg.walls = cells.into_iter().collect();
            }
            let inst = gen_pacman(&cfg).map_err(|e| Failure::domain("gen pacman", e))?;
            let stem = out_prefix
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .ok_or_else(|| {
                    Failure::input(format!("--out-prefix {}: no file name", show(&out_prefix)))
                })?;
            let sibling = |suffix: &str| out_prefix.with_file_name(format!("{stem}{suffix}"));
            let (ghost_file, pac_file) =
                (format!("{stem}_ghosts.json"), format!("{stem}_pacman.json"));
            let p = MbsdInstance::new(
                inst.ghosts.clone(),
                inst.pacman.clone(),
                MappingSpec::PointWise(inst.conjuncts.clone()),
                Agent::A,
            )
            .map_err(|e| Failure::reduction("gen pacman", e))?;
            let mut doc = InstanceJson::from_instance(&p);
            doc.domain_a = DomainRef::Path(ghost_file);
            doc.domain_b = DomainRef::Path(pac_file);
            write(
                "--out-prefix",
                &sibling("_ghosts.json"),
                &inst.ghosts.encode(),
            )?;
            write(
                "--out-prefix",
                &sibling("_pacman.json"),
                &inst.pacman.encode(),
            )?;
            let text = serde_json::to_string_pretty(&doc).expect("instance serializes");
            write("--out-prefix", &sibling(".json"), &text)?;
            emit(
                out,
                &json!({
                    "ghost_states": inst.ghosts.num_states(),
                    "pacman_states": inst.pacman.num_states(),
                    "conjuncts": inst.conjuncts.len(),
                }),
            )?;
            Ok(ExitStatus::Positive)
        }
        Gen::Random {
            states,
            props,
            tree,
            seed,
            out: path,
        } => {
            let cfg = RandomDomainConfig::new(states, RANDOM_BRANCHING, props, tree, seed);
            let d = gen_random(&cfg).map_err(|e| Failure::domain("gen random", e))?;
            write("--out", &path, &d.encode())?;
            emit(
                out,
                &json!({
                    "states": d.num_states(),
                    "transitions": d.num_transitions(),
                    "tree_like": d.is_tree_like(),
                }),
            )?;
            Ok(ExitStatus::Positive)
        }
    }
}
