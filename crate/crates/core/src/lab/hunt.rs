//! Enumerative search for a term `Y` with `Y δ = Y = δ Y`.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinators::delta;
use crate::fpc::{is_fpc_bounded, is_wfpc_bounded, FpcVerdict};
use crate::join::{join_bounded, JoinVerdict};
use crate::reduction::Bounds;
use crate::term::Term;

/// Approximant depth of the cheap pre-check. An fpc is in particular a
/// weak one, so a refuted weak check rules a candidate out.
const PRECHECK_DEPTH: usize = 3;

/// Closed terms of exactly `size` nodes, in de Bruijn form, ordered by
/// structure: variables by index, then abstractions, then applications by
/// size of the function part.
pub fn closed_terms(size: usize) -> Vec<Term> {
    let mut memo = std::collections::HashMap::new();
    terms(size, 0, &mut memo)
}

fn terms(size: usize, depth: u32, memo: &mut std::collections::HashMap<(usize, u32), Vec<Term>>) -> Vec<Term> {
    if let Some(v) = memo.get(&(size, depth)) {
        return v.clone();
    }
    let mut out = Vec::new();
    match size {
        0 => {}
        1 => out.extend((0..depth).map(Term::bound)),
        _ => {
            out.extend(
                terms(size - 1, depth + 1, memo)
                    .into_iter()
                    .map(|b| Term::lam_db("x", b)),
            );
            for left in 1..size - 1 {
                let fs = terms(left, depth, memo);
                let args = terms(size - 1 - left, depth, memo);
                for f in &fs {
                    for a in &args {
                        out.push(Term::app(f.clone(), a.clone()));
                    }
                }
            }
        }
    }
    memo.insert((size, depth), out.clone());
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntEntry {
    /// Position in enumeration order.
    pub index: usize,
    pub term: Term,
    pub is_fpc: FpcVerdict,
    /// `Y` against `Y δ`, only for verified fpcs.
    pub y_delta: Option<JoinVerdict>,
    /// `Y` against `δ Y`, only for verified fpcs.
    pub delta_y: Option<JoinVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleFpc {
    pub term: Term,
    pub y_delta: JoinVerdict,
    pub delta_y: JoinVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntReport {
    pub size_max: usize,
    pub bounds: Bounds,
    pub candidates_scanned: usize,
    pub fpc_verified: usize,
    pub double_fpc_found: Vec<DoubleFpc>,
    /// Every candidate not ruled out as an fpc.
    pub entries: Vec<HuntEntry>,
}

fn examine(index: usize, y: Term, b: &Bounds) -> Option<HuntEntry> {
    let pre = is_wfpc_bounded(&y, PRECHECK_DEPTH, b.max_steps);
    if pre.is_refuted() {
        return None;
    }
    let is_fpc = is_fpc_bounded(&y, b);
    if is_fpc.is_refuted() {
        return None;
    }
    let (y_delta, delta_y) = if is_fpc.is_verified() {
        (
            Some(join_bounded(&y, &Term::app(y.clone(), delta()), b)),
            Some(join_bounded(&y, &Term::app(delta(), y.clone()), b)),
        )
    } else {
        (None, None)
    };
    Some(HuntEntry {
        index,
        term: y,
        is_fpc,
        y_delta,
        delta_y,
    })
}

/// Scans every closed term of at most `size_max` nodes. Candidates are
/// examined in parallel and merged by enumeration index, so the report only
/// depends on the arguments.
pub fn hunt_double_fpc(size_max: usize, bounds: &Bounds) -> HuntReport {
    let candidates: Vec<Term> = (1..=size_max).flat_map(closed_terms).collect();
    let entries: Vec<HuntEntry> = candidates
        .par_iter()
        .enumerate()
        .filter_map(|(i, y)| examine(i, y.clone(), bounds))
        .collect();
    let double_fpc_found = entries
        .iter()
        .filter_map(|e| match (&e.y_delta, &e.delta_y) {
            (Some(a), Some(b)) if a.is_joined() && b.is_joined() => Some(DoubleFpc {
                term: e.term.clone(),
                y_delta: a.clone(),
                delta_y: b.clone(),
            }),
            _ => None,
        })
        .collect();
    HuntReport {
        size_max,
        bounds: *bounds,
        candidates_scanned: candidates.len(),
        fpc_verified: entries.iter().filter(|e| e.is_fpc.is_verified()).count(),
        double_fpc_found,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_of_closed_terms() {
        let counts: Vec<usize> = (1..=9).map(|n| closed_terms(n).len()).collect();
        assert_eq!(counts, vec![0, 1, 2, 4, 13, 42, 139, 506, 1915]);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_closed() {
        let ts = closed_terms(8);
        let set: std::collections::HashSet<_> = ts.iter().collect();
        assert_eq!(set.len(), ts.len());
        assert!(ts.iter().all(|t| t.is_closed() && t.size() == 8));
    }

    #[test]
    fn nothing_to_scan_at_size_one() {
        let r = hunt_double_fpc(1, &Bounds::default());
        assert_eq!(r.candidates_scanned, 0);
        assert!(r.entries.is_empty());
    }

    #[test]
    fn smallest_fpcs_have_twelve_nodes() {
        let b = Bounds::default().with_steps(300).with_nodes(10_000);
        let small = hunt_double_fpc(11, &b);
        assert_eq!(small.fpc_verified, 0);
        let r = hunt_double_fpc(12, &b);
        let expected = crate::syntax::parse("\\f. (\\x. x x) (\\x. f (x x))").unwrap();
        let found: Vec<&Term> = r
            .entries
            .iter()
            .filter(|e| e.is_fpc.is_verified())
            .map(|e| &e.term)
            .collect();
        assert_eq!(found, vec![&expected]);
        assert!(r.double_fpc_found.is_empty());
    }

    #[test]
    fn starved_hunt_verifies_nothing() {
        let r = hunt_double_fpc(7, &Bounds::default().with_steps(1));
        assert_eq!(r.fpc_verified, 0);
        assert!(r.double_fpc_found.is_empty());
    }
}
