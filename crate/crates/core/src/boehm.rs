//! Head normal forms, finite Böhm tree approximants and the bounded tests
//! built on them.
//!
//! Fuel exhaustion and genuine unsolvability both produce `⊥`, so an
//! approximant under-approximates the tree. Disagreements between two
//! non-`⊥` nodes, and occurrences of a name, are therefore definitive;
//! agreement and absence are evidence only.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::reduction::head_step;
use crate::syntax::pick_name;
use crate::term::{Name, Term, TermKind};

/// Head reduction gives up once a term grows past this many nodes.
pub const HNF_SIZE_LIMIT: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Head {
    Free(Name),
    /// de Bruijn index into the binders of the enclosing nodes, innermost first.
    Bound(u32),
}

/// `λ binders. head args`, with `args` living under `binders`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub binders: Vec<Name>,
    pub head: Head,
    pub args: Vec<Term>,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub enum HeadNormalization {
    Hnf(Hnf),
    /// No hnf within fuel. `diverges` is set when head reduction revisited a
    /// term, which proves the input unsolvable.
    Unsolved {
        fuel_used: usize,
        diverges: bool,
    },
}

impl HeadNormalization {
    pub fn hnf(&self) -> Option<&Hnf> {
        match self {
            HeadNormalization::Hnf(h) => Some(h),
            HeadNormalization::Unsolved { .. } => None,
        }
    }
}

fn decompose(t: &Term, steps: usize) -> Hnf {
    let mut binders = Vec::new();
    let mut body = t;
    while let TermKind::Lam(hint, b) = body.kind() {
        binders.push(hint.clone());
        body = b;
    }
    let (head, args) = body.spine();
    let head = match head.kind() {
        TermKind::Bound(i) => Head::Bound(*i),
        TermKind::Free(n) => Head::Free(n.clone()),
        _ => unreachable!("head_step returned None on a head redex"),
    };
    Hnf {
        binders,
        head,
        args: args.into_iter().cloned().collect(),
        steps,
    }
}

/// Head-reduces `t` for at most `fuel` steps.
pub fn head_normal_form(t: &Term, fuel: usize) -> HeadNormalization {
    let mut cur = t.clone();
    let mut seen: HashSet<Term> = HashSet::new();
    let mut steps = 0;
    loop {
        let Some(next) = head_step(&cur) else {
            return HeadNormalization::Hnf(decompose(&cur, steps));
        };
        if steps >= fuel || next.size() > HNF_SIZE_LIMIT {
            return HeadNormalization::Unsolved {
                fuel_used: steps,
                diverges: false,
            };
        }
        seen.insert(cur);
        steps += 1;
        if seen.contains(&next) {
            return HeadNormalization::Unsolved {
                fuel_used: steps,
                diverges: true,
            };
        }
        cur = next;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoehmApprox {
    Bottom,
    Node {
        binders: Vec<Name>,
        head: Head,
        children: Vec<BoehmApprox>,
    },
}

impl PartialEq for BoehmApprox {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BoehmApprox::Bottom, BoehmApprox::Bottom) => true,
            (
                BoehmApprox::Node {
                    binders: b1,
                    head: h1,
                    children: c1,
                },
                BoehmApprox::Node {
                    binders: b2,
                    head: h2,
                    children: c2,
                },
            ) => b1.len() == b2.len() && h1 == h2 && c1 == c2,
            _ => false,
        }
    }
}

impl Eq for BoehmApprox {}

/// Depth-`depth` approximant. Each child gets its own `fuel`.
pub fn approximant(t: &Term, depth: usize, fuel: usize) -> BoehmApprox {
    if depth == 0 {
        return BoehmApprox::Bottom;
    }
    match head_normal_form(t, fuel) {
        HeadNormalization::Unsolved { .. } => BoehmApprox::Bottom,
        HeadNormalization::Hnf(h) => BoehmApprox::Node {
            binders: h.binders,
            head: h.head,
            children: h.args.iter().map(|a| approximant(a, depth - 1, fuel)).collect(),
        },
    }
}

impl BoehmApprox {
    pub fn is_bottom(&self) -> bool {
        matches!(self, BoehmApprox::Bottom)
    }

    /// Nodes on the longest root path.
    pub fn depth(&self) -> usize {
        match self {
            BoehmApprox::Bottom => 0,
            BoehmApprox::Node { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// Cuts the tree to `depth` levels, replacing what lies below by `⊥`.
    pub fn prune(&self, depth: usize) -> BoehmApprox {
        match self {
            _ if depth == 0 => BoehmApprox::Bottom,
            BoehmApprox::Bottom => BoehmApprox::Bottom,
            BoehmApprox::Node {
                binders,
                head,
                children,
            } => BoehmApprox::Node {
                binders: binders.clone(),
                head: head.clone(),
                children: children.iter().map(|c| c.prune(depth - 1)).collect(),
            },
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&BoehmApprox> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((i, rest)), BoehmApprox::Node { children, .. }) => children.get(*i)?.at(rest),
            (Some(_), BoehmApprox::Bottom) => None,
        }
    }

    /// `x (x (... (x ⊥)))` with `n` applications of the free name `x`.
    pub fn unfolding(x: &Name, n: usize) -> BoehmApprox {
        (0..n).fold(BoehmApprox::Bottom, |acc, _| BoehmApprox::Node {
            binders: Vec::new(),
            head: Head::Free(x.clone()),
            children: vec![acc],
        })
    }

    fn free_heads(&self, out: &mut BTreeSet<Name>) {
        if let BoehmApprox::Node { head, children, .. } = self {
            if let Head::Free(n) = head {
                out.insert(n.clone());
            }
            for c in children {
                c.free_heads(out);
            }
        }
    }

    /// Rendering with `_|_` in place of `⊥`.
    pub fn to_ascii(&self) -> String {
        self.render("_|_")
    }

    fn render(&self, bottom: &str) -> String {
        let mut free = BTreeSet::new();
        self.free_heads(&mut free);
        let mut out = String::new();
        let mut scope = Vec::new();
        write_approx(self, &mut out, &free, &mut scope, bottom, false);
        out
    }
}

fn write_approx(
    a: &BoehmApprox,
    out: &mut String,
    free: &BTreeSet<Name>,
    scope: &mut Vec<Name>,
    bottom: &str,
    arg: bool,
) {
    let BoehmApprox::Node {
        binders,
        head,
        children,
    } = a
    else {
        out.push_str(bottom);
        return;
    };
    let atomic = binders.is_empty() && children.is_empty();
    if arg && !atomic {
        out.push('(');
    }
    if !binders.is_empty() {
        out.push('\\');
        for (i, b) in binders.iter().enumerate() {
            let name = pick_name(b, free, scope);
            if i > 0 {
                out.push(' ');
            }
            out.push_str(name.as_str());
            scope.push(name);
        }
        out.push_str(". ");
    }
    match head {
        Head::Free(n) => out.push_str(n.as_str()),
        Head::Bound(i) => match scope.len().checked_sub(*i as usize + 1) {
            Some(j) => out.push_str(scope[j].as_str()),
            None => out.push_str(&format!("#{}", *i as usize - scope.len())),
        },
    }
    for c in children {
        out.push(' ');
        write_approx(c, out, free, scope, bottom, true);
    }
    scope.truncate(scope.len() - binders.len());
    if arg && !atomic {
        out.push(')');
    }
}

impl fmt::Display for BoehmApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("⊥"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BtComparison {
    AgreePrefix {
        depth: usize,
    },
    /// `definitive` holds when neither side is `⊥` at `path`, which refutes
    /// Böhm tree equality outright.
    DisagreeAt {
        path: Vec<usize>,
        definitive: bool,
    },
}

fn first_disagreement(a: &BoehmApprox, b: &BoehmApprox, path: &mut Vec<usize>) -> Option<bool> {
    match (a, b) {
        (BoehmApprox::Bottom, BoehmApprox::Bottom) => None,
        (BoehmApprox::Bottom, _) | (_, BoehmApprox::Bottom) => Some(false),
        (
            BoehmApprox::Node {
                binders: b1,
                head: h1,
                children: c1,
            },
            BoehmApprox::Node {
                binders: b2,
                head: h2,
                children: c2,
            },
        ) => {
            if b1.len() != b2.len() || h1 != h2 || c1.len() != c2.len() {
                return Some(true);
            }
            for (i, (x, y)) in c1.iter().zip(c2).enumerate() {
                path.push(i);
                if let Some(d) = first_disagreement(x, y, path) {
                    return Some(d);
                }
                path.pop();
            }
            None
        }
    }
}

/// Compares the depth-`depth` approximants of `a` and `b` node by node.
/// `⊥` only matches `⊥`.
pub fn bt_eq_bounded(a: &Term, b: &Term, depth: usize, fuel: usize) -> BtComparison {
    compare_approx(&approximant(a, depth, fuel), &approximant(b, depth, fuel), depth)
}

pub fn compare_approx(a: &BoehmApprox, b: &BoehmApprox, depth: usize) -> BtComparison {
    let mut path = Vec::new();
    match first_disagreement(a, b, &mut path) {
        None => BtComparison::AgreePrefix { depth },
        Some(definitive) => BtComparison::DisagreeAt { path, definitive },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Occurrence {
    /// A node headed by the free name sits at `path`.
    Present {
        path: Vec<usize>,
    },
    AbsentUpTo {
        depth: usize,
    },
}

impl Occurrence {
    pub fn is_present(&self) -> bool {
        matches!(self, Occurrence::Present { .. })
    }
}

/// Breadth-first search for a node of the approximant headed by free `z`.
pub fn occurs_in_approx(z: &Name, t: &Term, depth: usize, fuel: usize) -> Occurrence {
    occurs_in(z, &approximant(t, depth, fuel), depth)
}

pub fn occurs_in(z: &Name, a: &BoehmApprox, depth: usize) -> Occurrence {
    let mut queue = VecDeque::from([(a, Vec::new())]);
    while let Some((node, path)) = queue.pop_front() {
        if let BoehmApprox::Node { head, children, .. } = node {
            if head == &Head::Free(z.clone()) {
                return Occurrence::Present { path };
            }
            for (i, c) in children.iter().enumerate() {
                let mut p = path.clone();
                p.push(i);
                queue.push_back((c, p));
            }
        }
    }
    Occurrence::AbsentUpTo { depth }
}
