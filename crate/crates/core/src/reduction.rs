//! Beta steps, redex positions and strategies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{Term, TermKind};

/// Resource caps for every bounded search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Beta steps per reduction sequence (search depth for graph exploration).
    pub max_steps: usize,
    /// Distinct terms explored by a graph search.
    pub max_nodes: usize,
    /// Terms larger than this are recorded but never reduced further.
    pub max_term_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bounds must be strictly positive (got steps={0}, nodes={1}, size={2})")]
pub struct BoundsError(pub usize, pub usize, pub usize);

impl Bounds {
    pub fn new(max_steps: usize, max_nodes: usize, max_term_size: usize) -> Result<Bounds, BoundsError> {
        if max_steps == 0 || max_nodes == 0 || max_term_size == 0 {
            return Err(BoundsError(max_steps, max_nodes, max_term_size));
        }
        Ok(Bounds {
            max_steps,
            max_nodes,
            max_term_size,
        })
    }

    pub fn with_steps(self, max_steps: usize) -> Bounds {
        Bounds { max_steps, ..self }
    }

    pub fn with_nodes(self, max_nodes: usize) -> Bounds {
        Bounds { max_nodes, ..self }
    }

    pub fn with_term_size(self, max_term_size: usize) -> Bounds {
        Bounds { max_term_size, ..self }
    }
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            max_steps: 500,
            max_nodes: 20_000,
            max_term_size: 4_000,
        }
    }
}

/// One move from a node to a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Function side of an application.
    Fun,
    /// Argument side of an application.
    Arg,
    /// Body of an abstraction.
    Body,
}

/// Path from the root to a subterm. Printed as a word over `f`, `a`, `b`;
/// the root is `ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RedexPosition(pub Vec<Move>);

impl RedexPosition {
    pub fn root() -> RedexPosition {
        RedexPosition(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    /// This position seen from `n` levels of enclosing function-side applications.
    pub fn under_functions(&self, n: usize) -> RedexPosition {
        let mut v = vec![Move::Fun; n];
        v.extend_from_slice(&self.0);
        RedexPosition(v)
    }

    pub fn prefixed(&self, prefix: &[Move]) -> RedexPosition {
        let mut v = prefix.to_vec();
        v.extend_from_slice(&self.0);
        RedexPosition(v)
    }
}

impl fmt::Display for RedexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for m in &self.0 {
            f.write_str(match m {
                Move::Fun => "f",
                Move::Arg => "a",
                Move::Body => "b",
            })?;
        }
        Ok(())
    }
}

impl FromStr for RedexPosition {
    type Err = String;

    fn from_str(s: &str) -> Result<RedexPosition, String> {
        if s == "ε" || s.is_empty() {
            return Ok(RedexPosition::root());
        }
        s.chars()
            .map(|c| match c {
                'f' => Ok(Move::Fun),
                'a' => Ok(Move::Arg),
                'b' => Ok(Move::Body),
                other => Err(format!("bad position character {other:?}")),
            })
            .collect::<Result<_, _>>()
            .map(RedexPosition)
    }
}

impl Serialize for RedexPosition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RedexPosition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<RedexPosition, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("position {0} does not exist in the term")]
    NoSuchPosition(RedexPosition),
    #[error("subterm at {0} is not a beta redex")]
    NotARedex(RedexPosition),
}

/// Contracts `(\x. body) arg`. Panics on anything else.
pub(crate) fn contract(redex: &Term) -> Term {
    match redex.kind() {
        TermKind::App(f, a) => match f.kind() {
            TermKind::Lam(_, body) => Term::instantiate(body, a),
            _ => unreachable!("contract on non-redex"),
        },
        _ => unreachable!("contract on non-redex"),
    }
}

/// Every beta-redex position, leftmost-outermost first.
pub fn redexes(t: &Term) -> Vec<RedexPosition> {
    fn go(t: &Term, path: &mut Vec<Move>, out: &mut Vec<RedexPosition>) {
        match t.kind() {
            TermKind::Bound(_) | TermKind::Free(_) => {}
            TermKind::Lam(_, b) => {
                path.push(Move::Body);
                go(b, path, out);
                path.pop();
            }
            TermKind::App(f, a) => {
                if t.is_redex() {
                    out.push(RedexPosition(path.clone()));
                }
                path.push(Move::Fun);
                go(f, path, out);
                path.pop();
                path.push(Move::Arg);
                go(a, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Subterm at a position, if the position exists.
pub fn subterm_at<'t>(t: &'t Term, p: &RedexPosition) -> Option<&'t Term> {
    let mut cur = t;
    for m in p.moves() {
        cur = match (m, cur.kind()) {
            (Move::Fun, TermKind::App(f, _)) => f,
            (Move::Arg, TermKind::App(_, a)) => a,
            (Move::Body, TermKind::Lam(_, b)) => b,
            _ => return None,
        };
    }
    Some(cur)
}

/// Contracts the redex at `p`.
pub fn step(t: &Term, p: &RedexPosition) -> Result<Term, StepError> {
    fn go(t: &Term, moves: &[Move], p: &RedexPosition) -> Result<Term, StepError> {
        let Some((m, rest)) = moves.split_first() else {
            return if t.is_redex() {
                Ok(contract(t))
            } else {
                Err(StepError::NotARedex(p.clone()))
            };
        };
        match (m, t.kind()) {
            (Move::Fun, TermKind::App(f, a)) => Ok(Term::app(go(f, rest, p)?, a.clone())),
            (Move::Arg, TermKind::App(f, a)) => Ok(Term::app(f.clone(), go(a, rest, p)?)),
            (Move::Body, TermKind::Lam(h, b)) => Ok(Term::lam_db(h.clone(), go(b, rest, p)?)),
            _ => Err(StepError::NoSuchPosition(p.clone())),
        }
    }
    go(t, p.moves(), p)
}

/// Replays a sequence of steps.
pub fn replay(t: &Term, path: &[RedexPosition]) -> Result<Term, StepError> {
    path.iter().try_fold(t.clone(), |acc, p| step(&acc, p))
}

/// Position of the head redex, if the term is not in head normal form.
pub fn head_redex(t: &Term) -> Option<RedexPosition> {
    let mut path = Vec::new();
    let mut cur = t;
    while let TermKind::Lam(_, b) = cur.kind() {
        path.push(Move::Body);
        cur = b;
    }
    // walk down the function spine to the innermost application
    let mut spine = Vec::new();
    let mut node = cur;
    while let TermKind::App(f, _) = node.kind() {
        spine.push(node);
        node = f;
    }
    if !matches!(node.kind(), TermKind::Lam(..)) || spine.is_empty() {
        return None;
    }
    path.extend(std::iter::repeat_n(Move::Fun, spine.len() - 1));
    Some(RedexPosition(path))
}

/// One head-reduction step, or `None` in head normal form.
pub fn head_step(t: &Term) -> Option<Term> {
    fn spine_step(t: &Term) -> Option<Term> {
        match t.kind() {
            TermKind::App(f, a) => {
                if matches!(f.kind(), TermKind::Lam(..)) {
                    Some(contract(t))
                } else {
                    spine_step(f).map(|f2| Term::app(f2, a.clone()))
                }
            }
            _ => None,
        }
    }
    match t.kind() {
        TermKind::Lam(h, b) => head_step(b).map(|b2| Term::lam_db(h.clone(), b2)),
        _ => spine_step(t),
    }
}

/// One leftmost-outermost step together with its position.
pub fn leftmost_outermost_step(t: &Term) -> Option<(Term, RedexPosition)> {
    fn go(t: &Term, path: &mut Vec<Move>) -> Option<Term> {
        match t.kind() {
            TermKind::Bound(_) | TermKind::Free(_) => None,
            TermKind::Lam(h, b) => {
                path.push(Move::Body);
                let r = go(b, path).map(|b2| Term::lam_db(h.clone(), b2));
                if r.is_none() {
                    path.pop();
                }
                r
            }
            TermKind::App(f, a) => {
                if t.is_redex() {
                    return Some(contract(t));
                }
                path.push(Move::Fun);
                if let Some(f2) = go(f, path) {
                    return Some(Term::app(f2, a.clone()));
                }
                path.pop();
                path.push(Move::Arg);
                if let Some(a2) = go(a, path) {
                    return Some(Term::app(f.clone(), a2));
                }
                path.pop();
                None
            }
        }
    }
    let mut path = Vec::new();
    go(t, &mut path).map(|r| (r, RedexPosition(path)))
}

/// All one-step reducts in leftmost-outermost order of their redexes.
pub fn one_step_reducts(t: &Term) -> Vec<(RedexPosition, Term)> {
    // paths are built innermost-first and reversed at the end
    fn go(t: &Term) -> Vec<(Vec<Move>, Term)> {
        match t.kind() {
            TermKind::Bound(_) | TermKind::Free(_) => Vec::new(),
            TermKind::Lam(h, b) => go(b)
                .into_iter()
                .map(|(mut p, b2)| {
                    p.push(Move::Body);
                    (p, Term::lam_db(h.clone(), b2))
                })
                .collect(),
            TermKind::App(f, a) => {
                let mut out = Vec::new();
                if t.is_redex() {
                    out.push((Vec::new(), contract(t)));
                }
                for (mut p, f2) in go(f) {
                    p.push(Move::Fun);
                    out.push((p, Term::app(f2, a.clone())));
                }
                for (mut p, a2) in go(a) {
                    p.push(Move::Arg);
                    out.push((p, Term::app(f.clone(), a2)));
                }
                out
            }
        }
    }
    go(t)
        .into_iter()
        .map(|(mut p, r)| {
            p.reverse();
            (RedexPosition(p), r)
        })
        .collect()
}

pub fn is_normal(t: &Term) -> bool {
    match t.kind() {
        TermKind::Bound(_) | TermKind::Free(_) => true,
        TermKind::Lam(_, b) => is_normal(b),
        TermKind::App(f, a) => !t.is_redex() && is_normal(f) && is_normal(a),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Normalization {
    NormalForm { term: Term, steps: usize },
    Exhausted { last: Term, steps_used: usize },
}

impl Normalization {
    pub fn normal_form(&self) -> Option<&Term> {
        match self {
            Normalization::NormalForm { term, .. } => Some(term),
            Normalization::Exhausted { .. } => None,
        }
    }
}

/// Leftmost-outermost normalization within `max_steps` and `max_term_size`.
pub fn normalize(t: &Term, b: &Bounds) -> Normalization {
    let (n, _) = normalize_traced(t, b);
    n
}

/// [`normalize`] that also returns the contracted positions.
pub fn normalize_traced(t: &Term, b: &Bounds) -> (Normalization, Vec<RedexPosition>) {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    loop {
        if trace.len() >= b.max_steps || cur.size() as usize > b.max_term_size {
            if is_normal(&cur) {
                let steps = trace.len();
                return (Normalization::NormalForm { term: cur, steps }, trace);
            }
            let steps_used = trace.len();
            return (Normalization::Exhausted { last: cur, steps_used }, trace);
        }
        match leftmost_outermost_step(&cur) {
            Some((next, p)) => {
                trace.push(p);
                cur = next;
            }
            None => {
                let steps = trace.len();
                return (Normalization::NormalForm { term: cur, steps }, trace);
            }
        }
    }
}

/// Reduction strategy for the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Head,
    Normal,
}

/// Reduction sequence under a strategy, starting term included.
pub fn trace(t: &Term, strategy: Strategy, max_steps: usize) -> Vec<Term> {
    let mut out = vec![t.clone()];
    for _ in 0..max_steps {
        let last = out.last().expect("non-empty");
        let next = match strategy {
            Strategy::Head => head_step(last),
            Strategy::Normal => leftmost_outermost_step(last).map(|(r, _)| r),
        };
        match next {
            Some(n) => out.push(n),
            None => break,
        }
    }
    out
}
