//! Bounded probes for the constant / weakly constant / compact / weakly
//! compact / accretive classes.
//!
//! Every class is undecidable. A probe only reports what its search
//! actually established; exhausting a budget never turns into a negative.

use serde::{Deserialize, Serialize};

use super::{delta_expansion, expansion, Generator, GeneratorError};
use crate::boehm::{occurs_in_approx, Occurrence};
use crate::fpc::{is_fpc_bounded, is_wfpc_bounded, FpcVerdict};
use crate::join::{find_reduct, JoinVerdict, ReductSearch};
use crate::reduction::Bounds;
use crate::term::{Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub k_max: usize,
    pub depth: usize,
    /// Head-reduction steps allowed per approximant node.
    pub fuel: usize,
    pub bounds: Bounds,
}

impl Default for ProbeConfig {
    fn default() -> ProbeConfig {
        ProbeConfig {
            k_max: 3,
            depth: 6,
            fuel: 500,
            bounds: Bounds::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Definitively holds at this k.
    Holds,
    /// Holds on the explored approximant.
    Evidence,
    /// Definitively fails at this k.
    Fails,
    /// Fails on the explored approximant.
    EvidenceAgainst,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KOutcome {
    pub k: usize,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassStatus {
    Verified {
        k: usize,
        witness: String,
    },
    EvidenceFor {
        k: usize,
        depth: usize,
    },
    EvidenceAgainst {
        k_max: usize,
        depth: usize,
    },
    /// Fails definitively for every k up to `k_max`.
    RefutedUpTo {
        k_max: usize,
    },
    Refuted {
        reason: String,
    },
    Unknown {
        k_max: usize,
    },
}

impl ClassStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ClassStatus::Verified { .. } => "Verified",
            ClassStatus::EvidenceFor { .. } => "EvidenceFor",
            ClassStatus::EvidenceAgainst { .. } => "EvidenceAgainst",
            ClassStatus::RefutedUpTo { .. } => "RefutedUpTo",
            ClassStatus::Refuted { .. } => "Refuted",
            ClassStatus::Unknown { .. } => "Unknown",
        }
    }

    pub fn modulus(&self) -> Option<usize> {
        match self {
            ClassStatus::Verified { k, .. } | ClassStatus::EvidenceFor { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, ClassStatus::Verified { .. } | ClassStatus::EvidenceFor { .. })
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ClassStatus::RefutedUpTo { .. } | ClassStatus::Refuted { .. })
    }
}

impl std::fmt::Display for ClassStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassStatus::Verified { k, .. } => write!(f, "Verified(k={k})"),
            ClassStatus::EvidenceFor { k, depth } => write!(f, "EvidenceFor(k={k}, depth={depth})"),
            ClassStatus::EvidenceAgainst { k_max, depth } => {
                write!(f, "EvidenceAgainst(k<={k_max}, depth={depth})")
            }
            ClassStatus::RefutedUpTo { k_max } => write!(f, "RefutedUpTo({k_max})"),
            ClassStatus::Refuted { reason } => write!(f, "Refuted({reason})"),
            ClassStatus::Unknown { k_max } => write!(f, "Unknown(k<={k_max})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    #[serde(flatten)]
    pub status: ClassStatus,
    pub per_k: Vec<KOutcome>,
}

impl ClassResult {
    pub fn outcome_at(&self, k: usize) -> Option<Outcome> {
        self.per_k.iter().find(|o| o.k == k).map(|o| o.outcome)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub generator: Generator,
    pub config: ProbeConfig,
    pub constant: ClassResult,
    pub weakly_constant: ClassResult,
    pub compact: ClassResult,
    pub weakly_compact: ClassResult,
    pub accretive: ClassResult,
    pub notes: Vec<String>,
}

fn probe_vars(g: &Generator) -> (Name, Name) {
    let z = g.fresh("z");
    let mut avoid = g.free_vars();
    avoid.insert(z.clone());
    (z, Name::fresh_reserved("x", &avoid))
}

/// Runs `per_k` for k = 0, 1, ... until it returns a stopping outcome.
fn scan(cfg: &ProbeConfig, stop: &[Outcome], mut per_k: impl FnMut(usize) -> KOutcome) -> Vec<KOutcome> {
    let mut out = Vec::new();
    for k in 0..=cfg.k_max {
        let o = per_k(k);
        let done = stop.contains(&o.outcome);
        out.push(o);
        if done {
            break;
        }
    }
    out
}

fn aggregate(per_k: Vec<KOutcome>, cfg: &ProbeConfig, witness: impl Fn(&KOutcome) -> ClassStatus) -> ClassResult {
    let status = if let Some(o) = per_k
        .iter()
        .find(|o| matches!(o.outcome, Outcome::Holds | Outcome::Evidence))
    {
        witness(o)
    } else if per_k.len() == cfg.k_max + 1 && per_k.iter().all(|o| o.outcome == Outcome::Fails) {
        ClassStatus::RefutedUpTo { k_max: cfg.k_max }
    } else {
        ClassStatus::Unknown { k_max: cfg.k_max }
    };
    ClassResult { status, per_k }
}

/// Searches the reducts of each expansion for one without the probe variable.
pub fn probe_constant(g: &Generator, cfg: &ProbeConfig) -> Result<ClassResult, GeneratorError> {
    let (z, _) = probe_vars(g);
    expansion(g, 0, &z)?;
    let per_k = scan(cfg, &[Outcome::Holds], |k| {
        let e = expansion(g, k, &z).expect("non-trivial");
        let (outcome, detail) = match find_reduct(&e, &cfg.bounds, |t| !t.has_free(&z)) {
            ReductSearch::Found { term, path } => (Outcome::Holds, format!("{term} after {} steps", path.len())),
            ReductSearch::Exhausted { explored } => (Outcome::Fails, format!("all {explored} reducts mention {z}")),
            ReductSearch::NotFoundWithin { explored } => (
                Outcome::Unknown,
                format!("no {z}-free reduct among {explored} explored"),
            ),
        };
        KOutcome { k, outcome, detail }
    });
    Ok(aggregate(per_k, cfg, |o| {
        let witness = o
            .detail
            .rsplit_once(" after ")
            .map_or(o.detail.clone(), |(t, _)| t.to_string());
        ClassStatus::Verified { k: o.k, witness }
    }))
}

/// Looks for the probe variable in approximants of `expansion x^`.
pub fn probe_weakly_constant(g: &Generator, cfg: &ProbeConfig) -> Result<ClassResult, GeneratorError> {
    let (z, x) = probe_vars(g);
    expansion(g, 0, &z)?;
    let per_k = scan(cfg, &[Outcome::Evidence], |k| {
        let e = Term::app(expansion(g, k, &z).expect("non-trivial"), Term::var(x.clone()));
        let (outcome, detail) = match occurs_in_approx(&z, &e, cfg.depth, cfg.fuel) {
            Occurrence::Present { path } => (Outcome::Fails, format!("{z} heads the node at {path:?}")),
            Occurrence::AbsentUpTo { depth } => (Outcome::Evidence, format!("{z} absent up to depth {depth}")),
        };
        KOutcome { k, outcome, detail }
    });
    Ok(aggregate(per_k, cfg, |o| ClassStatus::EvidenceFor {
        k: o.k,
        depth: cfg.depth,
    }))
}

fn join_detail(v: &FpcVerdict) -> String {
    match v.witness() {
        crate::fpc::FpcWitness::Join(JoinVerdict::Joined { witness, .. }) => witness.to_string(),
        crate::fpc::FpcWitness::Join(j) => j.class_name().to_string(),
        crate::fpc::FpcWitness::Unfolding {
            confirmed, observed, ..
        } => match observed {
            Some(o) => format!("{confirmed} layers, then {o}"),
            None => format!("{confirmed} layers"),
        },
    }
}

/// Checks each expansion for the fixed point equation.
pub fn probe_compact(g: &Generator, cfg: &ProbeConfig) -> Result<ClassResult, GeneratorError> {
    let (z, _) = probe_vars(g);
    expansion(g, 0, &z)?;
    let per_k = scan(cfg, &[Outcome::Holds], |k| {
        let e = expansion(g, k, &z).expect("non-trivial");
        let v = is_fpc_bounded(&e, &cfg.bounds);
        let outcome = match v {
            FpcVerdict::Verified { .. } => Outcome::Holds,
            FpcVerdict::Refuted { .. } => Outcome::Fails,
            FpcVerdict::Unknown { .. } => Outcome::Unknown,
        };
        KOutcome {
            k,
            outcome,
            detail: join_detail(&v),
        }
    });
    Ok(aggregate(per_k, cfg, |o| ClassStatus::Verified {
        k: o.k,
        witness: o.detail.clone(),
    }))
}

/// Checks the Böhm tree shape of each expansion.
pub fn probe_weakly_compact(g: &Generator, cfg: &ProbeConfig) -> Result<ClassResult, GeneratorError> {
    let (z, _) = probe_vars(g);
    expansion(g, 0, &z)?;
    let per_k = scan(cfg, &[Outcome::Evidence], |k| {
        let e = expansion(g, k, &z).expect("non-trivial");
        let v = is_wfpc_bounded(&e, cfg.depth, cfg.fuel);
        let outcome = match v {
            FpcVerdict::Verified { .. } => Outcome::Evidence,
            FpcVerdict::Refuted { .. } => Outcome::Fails,
            FpcVerdict::Unknown { .. } => Outcome::Unknown,
        };
        KOutcome {
            k,
            outcome,
            detail: join_detail(&v),
        }
    });
    Ok(aggregate(per_k, cfg, |o| ClassStatus::EvidenceFor {
        k: o.k,
        depth: cfg.depth,
    }))
}

/// Looks for the probe variable in approximants of `δ^k(z) G⃗ x^` for every
/// k up to `k_max`. Definitive constancy or compactness, passed in via
/// `known`, refutes accretivity outright.
pub fn probe_accretive(g: &Generator, cfg: &ProbeConfig, known: Option<(&ClassResult, &ClassResult)>) -> ClassResult {
    let (z, x) = probe_vars(g);
    let per_k: Vec<KOutcome> = (0..=cfg.k_max)
        .map(|k| {
            let e = Term::app(delta_expansion(g, k, &z), Term::var(x.clone()));
            let (outcome, detail) = match occurs_in_approx(&z, &e, cfg.depth, cfg.fuel) {
                Occurrence::Present { path } => (Outcome::Holds, format!("{z} heads the node at {path:?}")),
                Occurrence::AbsentUpTo { depth } => {
                    (Outcome::EvidenceAgainst, format!("{z} absent up to depth {depth}"))
                }
            };
            KOutcome { k, outcome, detail }
        })
        .collect();
    let definitive = known.and_then(|(constant, compact)| {
        [("constant", constant), ("compact", compact)]
            .into_iter()
            .find_map(|(name, r)| match &r.status {
                ClassStatus::Verified { k, .. } => Some(format!("{name} with modulus {k}, hence weakly compact")),
                _ => None,
            })
    });
    let status = if let Some(reason) = definitive {
        ClassStatus::Refuted { reason }
    } else if per_k.iter().all(|o| o.outcome == Outcome::Holds) {
        ClassStatus::EvidenceFor {
            k: cfg.k_max,
            depth: cfg.depth,
        }
    } else {
        ClassStatus::EvidenceAgainst {
            k_max: cfg.k_max,
            depth: cfg.depth,
        }
    };
    ClassResult { status, per_k }
}

/// Runs all five probes and cross-links their results.
pub fn classify(g: &Generator, cfg: &ProbeConfig) -> Result<ClassificationReport, GeneratorError> {
    let ((constant, compact), (weakly_constant, weakly_compact)) = rayon::join(
        || (probe_constant(g, cfg), probe_compact(g, cfg)),
        || (probe_weakly_constant(g, cfg), probe_weakly_compact(g, cfg)),
    );
    let (constant, compact) = (constant?, compact?);
    let (mut weakly_constant, mut weakly_compact) = (weakly_constant?, weakly_compact?);
    // z ∉ M implies z ∉∞ M, and every fpc is a wfpc.
    upgrade(&mut weakly_constant, &constant);
    upgrade(&mut weakly_compact, &compact);
    let accretive = probe_accretive(g, cfg, Some((&constant, &compact)));
    let mut notes = vec![
        "statuses assume the input is a (weak) fpc generator".to_string(),
        "moduli are the least k found within bounds, not proven minimal".to_string(),
    ];
    if weakly_compact.status.is_positive() && accretive.status.is_positive() {
        notes.push("weak compactness and accretivity evidence conflict; raise depth".to_string());
    }
    Ok(ClassificationReport {
        generator: g.clone(),
        config: *cfg,
        constant,
        weakly_constant,
        compact,
        weakly_compact,
        accretive,
        notes,
    })
}

fn upgrade(weak: &mut ClassResult, strong: &ClassResult) {
    if let (ClassStatus::Verified { k, witness }, ClassStatus::EvidenceFor { k: kw, .. }) =
        (&strong.status, &weak.status)
    {
        if k == kw {
            weak.status = ClassStatus::Verified {
                k: *k,
                witness: witness.clone(),
            };
        }
    }
}

/// Values of k at which weak constancy and weak compactness received
/// opposite definitive-or-evidential outcomes.
pub fn coherence_violations(r: &ClassificationReport) -> Vec<usize> {
    let positive = |o: Outcome| matches!(o, Outcome::Holds | Outcome::Evidence);
    (0..=r.config.k_max)
        .filter(
            |&k| match (r.weakly_constant.outcome_at(k), r.weakly_compact.outcome_at(k)) {
                (Some(a), Some(b)) => (positive(a) && b == Outcome::Fails) || (a == Outcome::Fails && positive(b)),
                _ => false,
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::battery;

    fn cfg() -> ProbeConfig {
        ProbeConfig {
            bounds: Bounds::default().with_nodes(3000),
            ..ProbeConfig::default()
        }
    }

    #[test]
    fn constant_generator() {
        let r = classify(&battery::k_theta(), &cfg()).unwrap();
        assert!(
            matches!(r.constant.status, ClassStatus::Verified { k: 1, .. }),
            "{:?}",
            r.constant
        );
        assert!(matches!(r.compact.status, ClassStatus::Verified { k: 1, .. }));
        assert!(matches!(r.weakly_constant.status, ClassStatus::Verified { k: 1, .. }));
        assert!(matches!(r.accretive.status, ClassStatus::Refuted { .. }));
        assert!(coherence_violations(&r).is_empty());
    }

    #[test]
    fn delta_is_accretive() {
        let r = classify(&battery::delta_gen(), &cfg()).unwrap();
        assert_eq!(r.weakly_constant.status, ClassStatus::RefutedUpTo { k_max: 3 });
        assert_eq!(r.weakly_compact.status, ClassStatus::RefutedUpTo { k_max: 3 });
        assert!(matches!(r.accretive.status, ClassStatus::EvidenceFor { k: 3, .. }));
        assert!(!matches!(r.constant.status, ClassStatus::Verified { .. }));
    }

    #[test]
    fn trivial_generator_is_rejected() {
        assert_eq!(
            probe_constant(&Generator::trivial(), &cfg()),
            Err(GeneratorError::Trivial)
        );
    }
}
