//! Bounded verdicts for fixed point combinators and weak ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boehm::{head_normal_form, Head, HeadNormalization};
use crate::join::{join_bounded, JoinVerdict};
use crate::reduction::Bounds;
use crate::term::{Name, Term};

/// The reserved probe variable `x^`, renamed if `avoid` already mentions it.
pub fn x_hat(avoid: &Term) -> Name {
    Name::fresh_reserved("x", &avoid.free_vars())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FpcWitness {
    Join(JoinVerdict),
    /// Result of walking the head normal forms of `Y x^`. `confirmed` is the
    /// number of `x^` layers confirmed; `observed` describes what was found
    /// below them when the walk stopped early.
    Unfolding {
        depth: usize,
        confirmed: usize,
        observed: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FpcVerdict {
    Verified { witness: FpcWitness },
    Refuted { witness: FpcWitness },
    Unknown { witness: FpcWitness },
}

impl FpcVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, FpcVerdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, FpcVerdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, FpcVerdict::Unknown { .. })
    }

    pub fn witness(&self) -> &FpcWitness {
        match self {
            FpcVerdict::Verified { witness } | FpcVerdict::Refuted { witness } | FpcVerdict::Unknown { witness } => {
                witness
            }
        }
    }
}

/// `join_bounded(Y x^, x^ (Y x^))`.
pub fn is_fpc_bounded(y: &Term, b: &Bounds) -> FpcVerdict {
    let x = Term::var(x_hat(y));
    let lhs = Term::app(y.clone(), x.clone());
    let rhs = Term::app(x, lhs.clone());
    let v = join_bounded(&lhs, &rhs, b);
    let witness = FpcWitness::Join(v.clone());
    match v {
        JoinVerdict::Joined { .. } => FpcVerdict::Verified { witness },
        JoinVerdict::RefutedDistinctNormalForms { .. } => FpcVerdict::Refuted { witness },
        JoinVerdict::NotJoinedWithin { .. } => FpcVerdict::Unknown { witness },
    }
}

/// Checks that the depth-`depth` approximant of `Y x^` is `x^ (x^ (... ⊥))`.
///
/// Each layer must head-normalize to exactly `x^ N` with no binders. Any other
/// head normal form, or head reduction that provably loops, refutes; running
/// out of fuel is inconclusive.
pub fn is_wfpc_bounded(y: &Term, depth: usize, fuel: usize) -> FpcVerdict {
    let x = x_hat(y);
    let mut cur = Term::app(y.clone(), Term::var(x.clone()));
    for level in 0..depth {
        let stop = |observed: String| FpcWitness::Unfolding {
            depth,
            confirmed: level,
            observed: Some(observed),
        };
        match head_normal_form(&cur, fuel) {
            HeadNormalization::Unsolved { diverges: true, .. } => {
                return FpcVerdict::Refuted {
                    witness: stop("unsolvable".into()),
                }
            }
            HeadNormalization::Unsolved { fuel_used, .. } => {
                return FpcVerdict::Unknown {
                    witness: stop(format!("no head normal form after {fuel_used} steps")),
                }
            }
            HeadNormalization::Hnf(h) => {
                if !h.binders.is_empty() || h.head != Head::Free(x.clone()) || h.args.len() != 1 {
                    return FpcVerdict::Refuted {
                        witness: stop(describe_hnf(&cur, fuel)),
                    };
                }
                cur = h.args[0].clone();
            }
        }
    }
    FpcVerdict::Verified {
        witness: FpcWitness::Unfolding {
            depth,
            confirmed: depth,
            observed: None,
        },
    }
}

fn describe_hnf(t: &Term, fuel: usize) -> String {
    crate::boehm::approximant(t, 1, fuel).to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error("no head normal form within {0} steps")]
    Fuel(usize),
    #[error("head normal form `{0}` is not of the form x N")]
    Shape(String),
}

/// Head-normalizes `Y x^` to `x^ N` and returns `λx. N`, the next stage of
/// the unfolding sequence. Free names of `Y` are inert.
pub fn unfold_wfpc(y: &Term, fuel: usize) -> Result<Term, UnfoldError> {
    let x = x_hat(y);
    let yx = Term::app(y.clone(), Term::var(x.clone()));
    match head_normal_form(&yx, fuel) {
        HeadNormalization::Unsolved { fuel_used, .. } => Err(UnfoldError::Fuel(fuel_used)),
        HeadNormalization::Hnf(h) => {
            if !h.binders.is_empty() || h.head != Head::Free(x.clone()) || h.args.len() != 1 {
                return Err(UnfoldError::Shape(describe_hnf(&yx, fuel)));
            }
            Ok(Term::lam_db("x", h.args[0].abstract_name(&x, 0)))
        }
    }
}

/// `k` successive unfoldings.
pub fn unfold_wfpc_n(y: &Term, k: usize, fuel: usize) -> Result<Term, UnfoldError> {
    (0..k).try_fold(y.clone(), |acc, _| unfold_wfpc(&acc, fuel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{delta, i, k, psi, theta, upsilon, upsilon_stage, y_curry};
    use crate::term::iterate;

    const FUEL: usize = 200;

    #[test]
    fn library_fpcs_verify() {
        let b = Bounds::default();
        assert!(is_fpc_bounded(&theta(), &b).is_verified());
        assert!(is_fpc_bounded(&y_curry(), &b).is_verified());
        let kv = is_fpc_bounded(&k(), &b);
        assert!(kv.is_refuted(), "{kv:?}");
    }

    #[test]
    fn weak_fpcs_verify_by_shape() {
        assert!(is_wfpc_bounded(&psi(&Name::new("z")), 5, FUEL).is_verified());
        assert!(is_wfpc_bounded(&upsilon(&Name::new("c")), 5, FUEL).is_verified());
        assert!(is_wfpc_bounded(&theta(), 5, FUEL).is_verified());
        assert!(is_wfpc_bounded(&i(), 1, FUEL).is_refuted());
        assert!(is_wfpc_bounded(&delta(), 1, FUEL).is_refuted());
    }

    #[test]
    fn unfolding_theta_gives_an_eta_expansion() {
        let y1 = unfold_wfpc(&theta(), FUEL).unwrap();
        assert_eq!(y1.to_string(), "\\x. (\\v x'. x' (v v x')) (\\v x'. x' (v v x')) x");
        assert!(join_bounded(&y1, &theta(), &Bounds::default()).is_joined());
    }

    #[test]
    fn unfolding_upsilon_steps_the_ladder() {
        let c = Name::new("c");
        let y1 = unfold_wfpc(&upsilon(&c), FUEL).unwrap();
        let x = Name::new("x");
        assert_eq!(y1, Term::lam(x.clone(), upsilon_stage(&x, &c, 1)));
        let y3 = unfold_wfpc_n(&upsilon(&c), 3, FUEL).unwrap();
        assert_eq!(y3, Term::lam(x.clone(), upsilon_stage(&x, &c, 3)));
    }

    #[test]
    fn unfold_reports_shape_and_fuel_errors() {
        assert!(matches!(unfold_wfpc(&k(), FUEL), Err(UnfoldError::Shape(_))));
        let omega_fn = crate::syntax::parse("\\y. (\\x. x x) (\\x. x x)").unwrap();
        assert!(matches!(unfold_wfpc(&omega_fn, 10), Err(UnfoldError::Fuel(_))));
    }

    #[test]
    fn unfolding_sequence_joins_its_iterates() {
        let y = theta();
        let x = Term::var(x_hat(&y));
        for n in 0..=3 {
            let yn = unfold_wfpc_n(&y, n, FUEL).unwrap();
            let rhs = iterate(&x, n, Term::app(yn, x.clone()));
            assert!(join_bounded(&Term::app(y.clone(), x.clone()), &rhs, &Bounds::default()).is_joined());
        }
    }

    #[test]
    fn verdict_json_round_trips() {
        let v = is_fpc_bounded(&theta(), &Bounds::default());
        let back: FpcVerdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
        let w = is_wfpc_bounded(&i(), 2, FUEL);
        let back: FpcVerdict = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }
}
