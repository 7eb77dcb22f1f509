use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fpclab_core::boehm::approximant;
use fpclab_core::combinators::{named, resolve};
use fpclab_core::fpc::{is_fpc_bounded, is_wfpc_bounded, FpcVerdict};
use fpclab_core::generators::{
    classify, construct_fixed_point, default_samples, ext_eq_bounded, ConstructionError, Generator, ProbeConfig,
};
use fpclab_core::graph::reduct_set;
use fpclab_core::lab::{hunt_double_fpc, replay_all, run_script, scripts, ReplayReport};
use fpclab_core::reduction::{trace, Bounds, Strategy};
use fpclab_core::syntax::parse_lenient;
use fpclab_core::term::Term;

const OK: u8 = 0;
const REFUTED: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "fpclab", version, about = "Fixed point combinator laboratory")]
struct Cli {
    /// Reduction steps per search side, also the head-reduction fuel.
    #[arg(long, global = true, default_value_t = 500)]
    fuel: usize,
    /// Total terms a conversion search may visit.
    #[arg(long, global = true, default_value_t = 20_000)]
    max_nodes: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Head,
    Normal,
}

#[derive(Subcommand)]
enum Command {
    /// Print a library combinator.
    Term { name: String },
    /// Parse a term and print it back.
    Parse { term: String },
    /// Print a reduction sequence.
    Reduce {
        term: String,
        #[arg(long, value_enum, default_value = "normal")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Print a Boehm tree approximant.
    Bt {
        term: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Check `Y x = x (Y x)` by bounded conversion.
    FpcCheck { term: String },
    /// Check that the Boehm tree of `Y x` starts with `x (x (...))`.
    WfpcCheck {
        term: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Classify a generator, e.g. "[P; R]".
    GenClassify {
        generator: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Build a fixed point `X` with `X G = X`.
    GenFix {
        generator: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Compare two generators on sample fpcs.
    GenExtEq {
        left: String,
        right: String,
        /// Sample fpc; repeatable. Defaults to the built-in battery.
        #[arg(long = "sample")]
        samples: Vec<String>,
    },
    /// Run the bundled derivation replays.
    Replay {
        /// Run only this script.
        name: Option<String>,
    },
    /// Search small closed terms for a double fpc.
    Hunt {
        #[arg(long, default_value_t = 9)]
        size: usize,
    },
    /// Print the reduct graph.
    Graph {
        term: String,
        #[arg(long)]
        dot: bool,
    },
}

struct Usage(String);

type Outcome = Result<u8, Usage>;

fn term_arg(src: &str) -> Result<Term, Usage> {
    parse_lenient(src)
        .map(|t| resolve(&t))
        .map_err(|e| Usage(format!("cannot parse term: {e}")))
}

fn generator_arg(src: &str) -> Result<Generator, Usage> {
    Generator::parse(src).map_err(|e| Usage(format!("cannot parse generator: {e}")))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        println!("{}", text());
    }
}

fn verdict_code(v: &FpcVerdict) -> u8 {
    match v {
        FpcVerdict::Verified { .. } => OK,
        FpcVerdict::Refuted { .. } => REFUTED,
        FpcVerdict::Unknown { .. } => UNKNOWN,
    }
}

fn verdict_label(v: &FpcVerdict) -> &'static str {
    match v {
        FpcVerdict::Verified { .. } => "Verified",
        FpcVerdict::Refuted { .. } => "Refuted",
        FpcVerdict::Unknown { .. } => "Unknown",
    }
}

fn replay_text(r: &ReplayReport) -> String {
    let mut out = String::new();
    for s in &r.scripts {
        let mark = if s.passed { "pass" } else { "FAIL" };
        out.push_str(&format!("{mark}  {}  ({})\n", s.name, s.source));
        for l in s.links.iter().filter(|l| !l.passed) {
            out.push_str(&format!("      {} {:?} {}\n", l.link.lhs, l.link.relation, l.link.rhs));
        }
    }
    let passed = r.scripts.iter().filter(|s| s.passed).count();
    out.push_str(&format!("{passed}/{} scripts passed", r.scripts.len()));
    out
}

fn run(cli: Cli) -> Outcome {
    let bounds = Bounds::default().with_steps(cli.fuel).with_nodes(cli.max_nodes);
    let json = cli.json;
    match cli.command {
        Command::Term { name } => {
            let t = named(&name).map_err(|e| Usage(e.to_string()))?;
            emit(json, &json!({ "name": name, "term": t }), || t.to_string());
            Ok(OK)
        }
        Command::Parse { term } => {
            let t = term_arg(&term)?;
            let free: Vec<String> = t.free_vars().iter().map(|n| n.to_string()).collect();
            emit(
                json,
                &json!({ "term": t, "size": t.size(), "free_vars": free, "closed": t.is_closed() }),
                || t.to_string(),
            );
            Ok(OK)
        }
        Command::Reduce { term, strategy, steps } => {
            let t = term_arg(&term)?;
            let strategy = match strategy {
                StrategyArg::Head => Strategy::Head,
                StrategyArg::Normal => Strategy::Normal,
            };
            let seq = trace(&t, strategy, steps);
            let last = seq.last().expect("trace includes its start");
            let stopped = match strategy {
                Strategy::Head => fpclab_core::reduction::head_redex(last).is_none(),
                Strategy::Normal => fpclab_core::reduction::is_normal(last),
            };
            emit(json, &json!({ "steps": seq, "stopped": stopped }), || {
                seq.iter()
                    .enumerate()
                    .map(|(i, t)| format!("{i:>4}  {t}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(if stopped { OK } else { UNKNOWN })
        }
        Command::Bt { term, depth } => {
            let t = term_arg(&term)?;
            let a = approximant(&t, depth, cli.fuel);
            emit(json, &a, || a.to_string());
            Ok(OK)
        }
        Command::FpcCheck { term } => {
            let t = term_arg(&term)?;
            let v = is_fpc_bounded(&t, &bounds);
            emit(json, &v, || verdict_label(&v).to_string());
            Ok(verdict_code(&v))
        }
        Command::WfpcCheck { term, depth } => {
            let t = term_arg(&term)?;
            let v = is_wfpc_bounded(&t, depth, cli.fuel);
            emit(json, &v, || verdict_label(&v).to_string());
            Ok(verdict_code(&v))
        }
        Command::GenClassify { generator, kmax, depth } => {
            let g = generator_arg(&generator)?;
            let cfg = ProbeConfig {
                k_max: kmax,
                depth,
                fuel: cli.fuel,
                bounds,
            };
            let r = classify(&g, &cfg).map_err(|e| Usage(e.to_string()))?;
            emit(json, &r, || {
                let rows = [
                    ("constant", &r.constant),
                    ("weakly_constant", &r.weakly_constant),
                    ("compact", &r.compact),
                    ("weakly_compact", &r.weakly_compact),
                    ("accretive", &r.accretive),
                ];
                let mut out = format!("generator {}\n", r.generator);
                for (name, c) in rows {
                    out.push_str(&format!("{name:>16}: {}\n", c.status));
                }
                for n in &r.notes {
                    out.push_str(&format!("note: {n}\n"));
                }
                out.trim_end().to_string()
            });
            Ok(OK)
        }
        Command::GenFix { generator, kmax, depth } => {
            let g = generator_arg(&generator)?;
            let cfg = ProbeConfig {
                k_max: kmax,
                depth,
                fuel: cli.fuel,
                bounds,
            };
            match construct_fixed_point(&g, &cfg) {
                Ok(c) => {
                    emit(json, &c, || {
                        format!(
                            "path {:?}, k = {}\nY = {}\nX = {}\nX G = X: {}{}",
                            c.path,
                            c.k,
                            c.y,
                            c.x,
                            c.join.class_name(),
                            if c.guided { " (replayed)" } else { "" }
                        )
                    });
                    Ok(if c.complete { OK } else { UNKNOWN })
                }
                Err(ConstructionError::Generator(e)) => Err(Usage(e.to_string())),
                Err(e) => {
                    emit(json, &json!({ "error": e.to_string() }), || e.to_string());
                    Ok(UNKNOWN)
                }
            }
        }
        Command::GenExtEq { left, right, samples } => {
            let (g, h) = (generator_arg(&left)?, generator_arg(&right)?);
            let samples = if samples.is_empty() {
                default_samples()
            } else {
                samples
                    .iter()
                    .map(|s| term_arg(s).map(|t| (s.clone(), t)))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let r = ext_eq_bounded(&g, &h, &samples, &bounds);
            emit(json, &r, || {
                let mut out = String::new();
                for (name, v) in &r.per_sample {
                    out.push_str(&format!("{name:>20}: {}\n", v.class_name()));
                }
                out.push_str(&r.note);
                out
            });
            Ok(if r.refuted {
                REFUTED
            } else if r.all_joined {
                OK
            } else {
                UNKNOWN
            })
        }
        Command::Replay { name } => {
            let report = match name {
                None => replay_all(),
                Some(n) => {
                    let s = scripts()
                        .into_iter()
                        .find(|s| s.name == n)
                        .ok_or_else(|| Usage(format!("no replay script named {n}")))?;
                    let r = run_script(&s);
                    ReplayReport {
                        passed: r.passed,
                        scripts: vec![r],
                    }
                }
            };
            emit(json, &report, || replay_text(&report));
            Ok(if report.passed { OK } else { REFUTED })
        }
        Command::Hunt { size } => {
            if size == 0 {
                return Err(Usage("size must be at least 1".to_string()));
            }
            let r = hunt_double_fpc(size, &bounds);
            emit(json, &r, || {
                format!(
                    "scanned {} closed terms up to size {}\nverified fpcs: {}\ndouble fpcs: {}",
                    r.candidates_scanned,
                    r.size_max,
                    r.fpc_verified,
                    r.double_fpc_found.len()
                )
            });
            Ok(OK)
        }
        Command::Graph { term, dot } => {
            let t = term_arg(&term)?;
            let g = reduct_set(&t, &bounds);
            if dot {
                print!("{}", g.to_dot());
            } else {
                emit(json, &g, || {
                    let mut out = String::new();
                    for (i, n) in g.nodes.iter().enumerate() {
                        out.push_str(&format!("{i:>4}  {n}\n"));
                    }
                    for e in &g.edges {
                        out.push_str(&format!("{} -{}-> {}\n", e.from, e.position, e.to));
                    }
                    out.push_str(if g.is_closed() { "closed" } else { "open" });
                    out
                });
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
