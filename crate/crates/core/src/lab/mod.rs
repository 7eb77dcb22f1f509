//! Scripted replays of the library's derivations and the bounded search for
//! a double fpc.

mod hunt;
mod replay;

pub use hunt::{closed_terms, hunt_double_fpc, DoubleFpc, HuntEntry, HuntReport};
pub use replay::{
    replay_all, run_script, scripts, Check, CheckResult, Evidence, Link, LinkResult, Relation, ReplayReport,
    ReplayScript, ScriptResult,
};
