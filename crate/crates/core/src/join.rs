//! Bounded conversion checking.
//!
//! By confluence, two terms are convertible iff they have a common reduct.
//! [`join_bounded`] searches for one from both ends at once; the only
//! definitive negative it ever reports is a pair of distinct normal forms.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::reduction::{
    head_redex, is_normal, leftmost_outermost_step, one_step_reducts, step, Bounds, Move, RedexPosition,
};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JoinVerdict {
    /// `witness` is reached from the left input by `steps_left` and from the
    /// right input by `steps_right`.
    Joined {
        witness: Term,
        steps_left: Vec<RedexPosition>,
        steps_right: Vec<RedexPosition>,
        bounds: Bounds,
    },
    /// Both inputs normalize and the normal forms differ: not convertible.
    RefutedDistinctNormalForms {
        nf_left: Term,
        nf_right: Term,
        bounds: Bounds,
    },
    /// No common reduct found; says nothing about convertibility.
    NotJoinedWithin { bounds: Bounds, explored: usize },
}

impl JoinVerdict {
    pub fn is_joined(&self) -> bool {
        matches!(self, JoinVerdict::Joined { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, JoinVerdict::RefutedDistinctNormalForms { .. })
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            JoinVerdict::Joined { .. } => "joined",
            JoinVerdict::RefutedDistinctNormalForms { .. } => "refuted_distinct_normal_forms",
            JoinVerdict::NotJoinedWithin { .. } => "not_joined_within",
        }
    }

    pub fn witness(&self) -> Option<&Term> {
        match self {
            JoinVerdict::Joined { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Longest of the two witness reductions.
    pub fn steps_per_side(&self) -> Option<usize> {
        match self {
            JoinVerdict::Joined {
                steps_left,
                steps_right,
                ..
            } => Some(steps_left.len().max(steps_right.len())),
            _ => None,
        }
    }

    fn mirrored(self) -> JoinVerdict {
        match self {
            JoinVerdict::Joined {
                witness,
                steps_left,
                steps_right,
                bounds,
            } => JoinVerdict::Joined {
                witness,
                steps_left: steps_right,
                steps_right: steps_left,
                bounds,
            },
            JoinVerdict::RefutedDistinctNormalForms {
                nf_left,
                nf_right,
                bounds,
            } => JoinVerdict::RefutedDistinctNormalForms {
                nf_left: nf_right,
                nf_right: nf_left,
                bounds,
            },
            other => other,
        }
    }
}

struct Side {
    index: HashMap<Term, usize>,
    terms: Vec<Term>,
    parent: Vec<Option<(usize, RedexPosition)>>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(t: &Term) -> Side {
        Side {
            index: HashMap::from([(t.clone(), 0)]),
            terms: vec![t.clone()],
            parent: vec![None],
            frontier: vec![0],
            depth: 0,
        }
    }

    fn can_expand(&self, b: &Bounds) -> bool {
        !self.frontier.is_empty() && self.depth < b.max_steps
    }

    fn path_to(&self, mut i: usize) -> Vec<RedexPosition> {
        let mut out = Vec::new();
        while let Some((p, pos)) = &self.parent[i] {
            out.push(pos.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

enum Expansion {
    Met { own: usize, other: usize },
    Continue,
    OutOfNodes,
}

fn expand_layer(side: &mut Side, other: &Side, b: &Bounds, total: &mut usize) -> Expansion {
    let frontier = std::mem::take(&mut side.frontier);
    let mut next = Vec::new();
    for i in frontier {
        let term = side.terms[i].clone();
        if term.size() as usize > b.max_term_size {
            continue;
        }
        for (pos, r) in one_step_reducts(&term) {
            if side.index.contains_key(&r) {
                continue;
            }
            if *total >= b.max_nodes {
                return Expansion::OutOfNodes;
            }
            let j = side.terms.len();
            side.terms.push(r.clone());
            side.parent.push(Some((i, pos)));
            *total += 1;
            if let Some(&k) = other.index.get(&r) {
                side.index.insert(r, j);
                return Expansion::Met { own: j, other: k };
            }
            side.index.insert(r, j);
            next.push(j);
        }
    }
    side.frontier = next;
    side.depth += 1;
    Expansion::Continue
}

fn bfs(a: &Term, b: &Term, bounds: &Bounds) -> Result<Meet, usize> {
    let mut left = Side::new(a);
    let mut right = Side::new(b);
    let mut total = 2usize;
    loop {
        let expand_left = match (left.can_expand(bounds), right.can_expand(bounds)) {
            (false, false) => break,
            (true, false) => true,
            (false, true) => false,
            (true, true) => left.frontier.len() <= right.frontier.len(),
        };
        let outcome = if expand_left {
            expand_layer(&mut left, &right, bounds, &mut total)
        } else {
            expand_layer(&mut right, &left, bounds, &mut total)
        };
        match outcome {
            Expansion::Continue => {}
            Expansion::OutOfNodes => break,
            Expansion::Met { own, other } => {
                let (li, ri) = if expand_left { (own, other) } else { (other, own) };
                return Ok((left.terms[li].clone(), left.path_to(li), right.path_to(ri)));
            }
        }
    }
    Err(total)
}

fn search(a: &Term, b: &Term, bounds: &Bounds) -> JoinVerdict {
    let joined = |(witness, steps_left, steps_right): Meet| JoinVerdict::Joined {
        witness,
        steps_left,
        steps_right,
        bounds: *bounds,
    };
    if a == b {
        return joined((a.clone(), Vec::new(), Vec::new()));
    }
    let quick = bounds
        .with_steps(bounds.max_steps.min(QUICK_STEPS))
        .with_nodes(bounds.max_nodes.min(QUICK_NODES));
    if let Lockstep::Met(m) = lockstep(a, b, &quick) {
        return joined(m);
    }
    if let Ok(m) = bfs(a, b, &quick) {
        return joined(m);
    }
    match lockstep(a, b, bounds) {
        Lockstep::Met(m) => return joined(m),
        Lockstep::DistinctNormalForms(nf_left, nf_right) => {
            return JoinVerdict::RefutedDistinctNormalForms {
                nf_left,
                nf_right,
                bounds: *bounds,
            }
        }
        Lockstep::Open => {}
    }
    let mut budget = CONGRUENCE_BUDGET;
    if let Some(m) = spine_phase(a, b, bounds, CONGRUENCE_DEPTH, &mut budget) {
        return joined(m);
    }
    match bfs(a, b, bounds) {
        Ok(m) => joined(m),
        Err(explored) => JoinVerdict::NotJoinedWithin {
            bounds: *bounds,
            explored,
        },
    }
}

type Meet = (Term, Vec<RedexPosition>, Vec<RedexPosition>);

const CONGRUENCE_DEPTH: usize = 3;
const CONGRUENCE_BUDGET: usize = 256;
const HEAD_TRACE: usize = 24;
const INNER_STEPS: usize = 64;
const QUICK_STEPS: usize = 16;
const QUICK_NODES: usize = 256;

fn trace_path(tr: &[(Term, Option<RedexPosition>)], n: usize) -> Vec<RedexPosition> {
    tr[1..=n].iter().filter_map(|(_, p)| p.clone()).collect()
}

/// A leftmost-outermost reduction sequence, grown one step at a time.
struct Walk {
    terms: Vec<Term>,
    steps: Vec<RedexPosition>,
    index: HashMap<Term, usize>,
    /// `Some(true)` once a normal form is reached, `Some(false)` when a bound stops the walk.
    done: Option<bool>,
}

impl Walk {
    fn new(t: &Term) -> Walk {
        Walk {
            terms: vec![t.clone()],
            steps: Vec::new(),
            index: HashMap::from([(t.clone(), 0)]),
            done: None,
        }
    }

    fn last(&self) -> &Term {
        self.terms.last().expect("walks are never empty")
    }

    fn advance(&mut self, b: &Bounds) -> Option<usize> {
        let cur = self.last().clone();
        if self.steps.len() >= b.max_steps || cur.size() as usize > b.max_term_size {
            self.done = Some(is_normal(&cur));
            return None;
        }
        match leftmost_outermost_step(&cur) {
            Some((next, pos)) => {
                let i = self.terms.len();
                self.index.entry(next.clone()).or_insert(i);
                self.terms.push(next);
                self.steps.push(pos);
                Some(i)
            }
            None => {
                self.done = Some(true);
                None
            }
        }
    }
}

enum Lockstep {
    Met(Meet),
    DistinctNormalForms(Term, Term),
    Open,
}

/// Walks both leftmost-outermost sequences alternately, stopping at the
/// first shared term. Two normal forms end the walk either way.
fn lockstep(a: &Term, b: &Term, bounds: &Bounds) -> Lockstep {
    let mut wa = Walk::new(a);
    let mut wb = Walk::new(b);
    let met = |i: usize, j: usize, wa: &Walk, wb: &Walk| {
        Lockstep::Met((wa.terms[i].clone(), wa.steps[..i].to_vec(), wb.steps[..j].to_vec()))
    };
    if let Some(&j) = wb.index.get(a) {
        return met(0, j, &wa, &wb);
    }
    while wa.done.is_none() || wb.done.is_none() {
        if wa.done.is_none() {
            if let Some(i) = wa.advance(bounds) {
                if let Some(&j) = wb.index.get(&wa.terms[i]) {
                    return met(i, j, &wa, &wb);
                }
            }
        }
        if wb.done.is_none() {
            if let Some(j) = wb.advance(bounds) {
                if let Some(&i) = wa.index.get(&wb.terms[j]) {
                    return met(i, j, &wa, &wb);
                }
            }
        }
    }
    match (wa.done, wb.done) {
        (Some(true), Some(true)) => Lockstep::DistinctNormalForms(wa.last().clone(), wb.last().clone()),
        _ => Lockstep::Open,
    }
}

fn head_trace(t: &Term, b: &Bounds) -> Vec<(Term, Option<RedexPosition>)> {
    let mut out = vec![(t.clone(), None)];
    let mut cur = t.clone();
    while out.len() <= HEAD_TRACE.min(b.max_steps) && cur.size() as usize <= b.max_term_size {
        let Some(pos) = head_redex(&cur) else { break };
        let Ok(next) = step(&cur, &pos) else { break };
        out.push((next.clone(), Some(pos)));
        cur = next;
    }
    out
}

/// `λ^k. h a_1 ... a_n` as `(k, h, [a_1, ..., a_n])`.
fn spine_of(t: &Term) -> (usize, &Term, Vec<&Term>) {
    let mut k = 0;
    let mut body = t;
    while let Some((_, b)) = body.as_lam() {
        k += 1;
        body = b;
    }
    let (h, args) = body.spine();
    (k, h, args)
}

/// Positions of the head and of each argument in `λ^k. h a_1 ... a_n`.
fn spine_prefixes(k: usize, n: usize) -> Vec<Vec<Move>> {
    let under: Vec<Move> = vec![Move::Body; k];
    let mut out = Vec::with_capacity(n + 1);
    let mut head = under.clone();
    head.extend(std::iter::repeat_n(Move::Fun, n));
    out.push(head);
    for j in 1..=n {
        let mut p = under.clone();
        p.extend(std::iter::repeat_n(Move::Fun, n - j));
        p.push(Move::Arg);
        out.push(p);
    }
    out
}

/// Joins componentwise once both sides share a spine shape.
fn join_spines(a: &Term, b: &Term, bounds: &Bounds, depth: usize, budget: &mut usize) -> Option<Meet> {
    let (ka, ha, xa) = spine_of(a);
    let (kb, hb, xb) = spine_of(b);
    if ka != kb || xa.len() != xb.len() || (xa.is_empty() && ka == 0) {
        return None;
    }
    if ha.as_lam().is_none() && ha != hb {
        return None;
    }
    let prefixes = spine_prefixes(ka, xa.len());
    let (mut wa, mut wb) = (a.clone(), b.clone());
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    let pairs = std::iter::once((ha, hb)).chain(xa.into_iter().zip(xb));
    for ((ca, cb), prefix) in pairs.zip(&prefixes) {
        let (_, pa, pb) = congruence(ca, cb, bounds, depth, budget)?;
        let pa: Vec<_> = pa.iter().map(|p| p.prefixed(prefix)).collect();
        let pb: Vec<_> = pb.iter().map(|p| p.prefixed(prefix)).collect();
        wa = crate::reduction::replay(&wa, &pa).ok()?;
        wb = crate::reduction::replay(&wb, &pb).ok()?;
        sa.extend(pa);
        sb.extend(pb);
    }
    (wa == wb).then_some((wa, sa, sb))
}

/// Common reduct by syntactic equality, then by meeting leftmost-outermost
/// sequences, then by head-reducing both sides and joining matching spines
/// componentwise. Only ever confirms.
fn congruence(a: &Term, b: &Term, bounds: &Bounds, depth: usize, budget: &mut usize) -> Option<Meet> {
    if a == b {
        return Some((a.clone(), Vec::new(), Vec::new()));
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let local = if depth < CONGRUENCE_DEPTH {
        bounds.with_steps(bounds.max_steps.min(INNER_STEPS))
    } else {
        *bounds
    };
    if let Lockstep::Met(m) = lockstep(a, b, &local) {
        return Some(m);
    }
    if depth == 0 {
        return None;
    }
    spine_phase(a, b, bounds, depth, budget)
}

/// Head-reduces both sides and joins the first pair of reducts whose spines
/// match componentwise.
fn spine_phase(a: &Term, b: &Term, bounds: &Bounds, depth: usize, budget: &mut usize) -> Option<Meet> {
    let ta = head_trace(a, bounds);
    let tb = head_trace(b, bounds);
    let mut pairs: Vec<(usize, usize)> = (0..ta.len()).flat_map(|i| (0..tb.len()).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (i.max(j), i + j));
    for (i, j) in pairs {
        if *budget == 0 {
            return None;
        }
        if let Some((w, pa, pb)) = join_spines(&ta[i].0, &tb[j].0, bounds, depth - 1, budget) {
            let mut sa = trace_path(&ta, i);
            sa.extend(pa);
            let mut sb = trace_path(&tb, j);
            sb.extend(pb);
            return Some((w, sa, sb));
        }
    }
    None
}

fn canonical_order(a: &Term, b: &Term) -> Ordering {
    (a.size(), a.structural_hash())
        .cmp(&(b.size(), b.structural_hash()))
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

/// Searches for a common reduct of `a` and `b`.
///
/// A short pass with small bounds catches cheap joins first. Then the
/// leftmost-outermost sequences of both inputs are walked in
/// lockstep (`max_steps` each) until they share a term; two normal forms
/// settle the question either way. Next both sides are head-reduced and
/// matching spines joined componentwise. Otherwise a bidirectional
/// breadth-first search runs, always growing the smaller frontier, each side
/// at most `max_steps` deep and `max_nodes` terms in total.
///
/// The search is run on a canonical ordering of the pair, so swapping the
/// arguments yields the mirrored verdict.
pub fn join_bounded(a: &Term, b: &Term, bounds: &Bounds) -> JoinVerdict {
    if canonical_order(a, b) == Ordering::Greater {
        search(b, a, bounds).mirrored()
    } else {
        search(a, b, bounds)
    }
}

/// Outcome of a one-sided reduct search.
#[derive(Clone, Debug)]
pub enum ReductSearch {
    Found {
        term: Term,
        path: Vec<RedexPosition>,
    },
    /// The whole reduct set was explored without a match.
    Exhausted {
        explored: usize,
    },
    NotFoundWithin {
        explored: usize,
    },
}

/// Breadth-first search for a reduct satisfying `pred`.
pub fn find_reduct(t: &Term, bounds: &Bounds, mut pred: impl FnMut(&Term) -> bool) -> ReductSearch {
    let mut index: HashMap<Term, usize> = HashMap::from([(t.clone(), 0)]);
    let mut terms = vec![t.clone()];
    let mut parent: Vec<Option<(usize, RedexPosition)>> = vec![None];
    let path_to = |parent: &[Option<(usize, RedexPosition)>], mut i: usize| {
        let mut out = Vec::new();
        while let Some((p, pos)) = &parent[i] {
            out.push(pos.clone());
            i = *p;
        }
        out.reverse();
        out
    };
    if pred(t) {
        return ReductSearch::Found {
            term: t.clone(),
            path: Vec::new(),
        };
    }
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut complete = true;
    while let Some((i, depth)) = queue.pop_front() {
        if depth >= bounds.max_steps || terms[i].size() as usize > bounds.max_term_size {
            complete = false;
            continue;
        }
        let term = terms[i].clone();
        for (pos, r) in one_step_reducts(&term) {
            if index.contains_key(&r) {
                continue;
            }
            if terms.len() >= bounds.max_nodes {
                return ReductSearch::NotFoundWithin { explored: terms.len() };
            }
            let j = terms.len();
            terms.push(r.clone());
            parent.push(Some((i, pos)));
            if pred(&r) {
                return ReductSearch::Found {
                    term: r,
                    path: path_to(&parent, j),
                };
            }
            index.insert(r, j);
            queue.push_back((j, depth + 1));
        }
    }
    if complete {
        ReductSearch::Exhausted { explored: terms.len() }
    } else {
        ReductSearch::NotFoundWithin { explored: terms.len() }
    }
}

/// Searches for a reduction `from ↠ to`.
pub fn reaches(from: &Term, to: &Term, bounds: &Bounds) -> Option<Vec<RedexPosition>> {
    match find_reduct(from, bounds, |t| t == to) {
        ReductSearch::Found { path, .. } => Some(path),
        _ => None,
    }
}
