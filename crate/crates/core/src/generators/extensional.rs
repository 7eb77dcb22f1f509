//! Sample-based checks over a fixed battery of fpcs.
//!
//! Statements quantified over all fpcs can only be tested on samples, so
//! agreement here is evidence and only a pair of distinct normal forms
//! refutes.

use serde::{Deserialize, Serialize};

use super::fixpoint::build_fixed_point;
use super::{apply, battery, compose, expansion, Generator};
use crate::combinators::{delta, i, k, theta, theta_param, y_curry};
use crate::fpc::{is_fpc_bounded, is_wfpc_bounded, FpcVerdict};
use crate::join::{join_bounded, JoinVerdict};
use crate::reduction::Bounds;
use crate::term::{Name, Term};

/// `Θ`, Curry's `Y`, `Θ_I`, `Θ_K` and the fixed point of `(λy. Θ_y)`.
pub fn default_samples() -> Vec<(String, Term)> {
    let g = battery::theta_sub();
    let z = g.fresh("z");
    let f0 = expansion(&g, 1, &z).expect("non-trivial");
    let (_, fixed) = build_fixed_point(&g, &z, &f0, &f0);
    vec![
        ("Theta".to_string(), theta()),
        ("Y_curry".to_string(), y_curry()),
        ("Theta_I".to_string(), theta_param(&i())),
        ("Theta_K".to_string(), theta_param(&k())),
        ("fix(\\y. Theta_y)".to_string(), fixed),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleResult {
    pub sample: String,
    pub fpc: FpcVerdict,
    pub wfpc: FpcVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FgvReport {
    pub generator: Generator,
    pub samples: Vec<SampleResult>,
    /// Every sample image verified as an fpc. Never definitive.
    pub fgv_evidence: bool,
    /// Some sample image has the wfpc shape, which suffices for a weak generator.
    pub wfgv_evidence: bool,
    /// Some sample image is definitively not a wfpc.
    pub refuted: bool,
    pub bounds: Bounds,
}

/// Images `Y G⃗` of the samples, checked as fpcs and as wfpcs.
pub fn is_fgv_evidence(
    g: &Generator,
    samples: &[(String, Term)],
    bounds: &Bounds,
    depth: usize,
    fuel: usize,
) -> FgvReport {
    let samples: Vec<SampleResult> = samples
        .iter()
        .map(|(name, y)| {
            let img = apply(y, g);
            SampleResult {
                sample: name.clone(),
                fpc: is_fpc_bounded(&img, bounds),
                wfpc: is_wfpc_bounded(&img, depth, fuel),
            }
        })
        .collect();
    FgvReport {
        generator: g.clone(),
        fgv_evidence: !samples.is_empty() && samples.iter().all(|s| s.fpc.is_verified()),
        wfgv_evidence: samples.iter().any(|s| s.wfpc.is_verified()),
        refuted: samples.iter().any(|s| s.wfpc.is_refuted() || s.fpc.is_refuted()),
        samples,
        bounds: *bounds,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtEqReport {
    pub left: Generator,
    pub right: Generator,
    pub per_sample: Vec<(String, JoinVerdict)>,
    /// Joined on every sample; evidence for extensional equality only.
    pub all_joined: bool,
    /// Distinct normal forms on some sample: the generators differ.
    pub refuted: bool,
    pub note: String,
}

/// Joins `Y G⃗` with `Y H⃗` for each sample `Y`.
pub fn ext_eq_bounded(g: &Generator, h: &Generator, samples: &[(String, Term)], bounds: &Bounds) -> ExtEqReport {
    let per_sample: Vec<(String, JoinVerdict)> = samples
        .iter()
        .map(|(name, y)| (name.clone(), join_bounded(&apply(y, g), &apply(y, h), bounds)))
        .collect();
    ExtEqReport {
        left: g.clone(),
        right: h.clone(),
        all_joined: per_sample.iter().all(|(_, v)| v.is_joined()),
        refuted: per_sample.iter().any(|(_, v)| v.is_refuted()),
        per_sample,
        note: format!("tested on {} sample fpcs only", samples.len()),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonInjectivityReport {
    pub generator: Generator,
    pub y: Term,
    pub y_prime: Term,
    pub y_fpc: FpcVerdict,
    pub y_prime_fpc: FpcVerdict,
    /// `Y G⃗` against `Y' G⃗`.
    pub images: JoinVerdict,
    /// `Y` against `Y'`.
    pub preimages: JoinVerdict,
}

/// The two fpcs `λx. Θ_{x (K I) I} x` and `λx. Θ_{x (K I) I I} x`.
///
/// Under `(δ)` both images reduce to `Θ_I δ` because `δ (K I) I ↠ I`.
pub fn non_injectivity_pair() -> (Term, Term) {
    let x = Name::new("x");
    let ki = Term::app(k(), i());
    let build = |params: Vec<Term>| {
        let m = Term::apps(Term::var(x.clone()), params);
        Term::lam(x.clone(), Term::app(theta_param(&m), Term::var(x.clone())))
    };
    (build(vec![ki.clone(), i()]), build(vec![ki, i(), i()]))
}

pub fn non_injectivity(bounds: &Bounds) -> NonInjectivityReport {
    let g = Generator::single(delta()).labelled("(delta)");
    let (y, y_prime) = non_injectivity_pair();
    NonInjectivityReport {
        y_fpc: is_fpc_bounded(&y, bounds),
        y_prime_fpc: is_fpc_bounded(&y_prime, bounds),
        images: join_bounded(&apply(&y, &g), &apply(&y_prime, &g), bounds),
        preimages: join_bounded(&y, &y_prime, bounds),
        generator: g,
        y,
        y_prime,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZerosumEntry {
    pub composition: Generator,
    pub fixes_y: JoinVerdict,
    pub fixes_y_prime: JoinVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZerosumReport {
    pub entries: Vec<ZerosumEntry>,
    /// No composition was seen to fix both members of the pair.
    pub consistent: bool,
}

/// For each `H⃗`, checks that `(δ) ⊙ H⃗` does not act as the identity on the
/// non-injectivity pair. It cannot: both images coincide under `(δ)`, so
/// fixing both would identify `Y` and `Y'`.
pub fn zerosum_consistency(others: &[Generator], bounds: &Bounds) -> ZerosumReport {
    let (y, y_prime) = non_injectivity_pair();
    let d = Generator::single(delta());
    let entries: Vec<ZerosumEntry> = others
        .iter()
        .map(|h| {
            let c = compose(&d, h);
            ZerosumEntry {
                fixes_y: join_bounded(&apply(&y, &c), &y, bounds),
                fixes_y_prime: join_bounded(&apply(&y_prime, &c), &y_prime, bounds),
                composition: c,
            }
        })
        .collect();
    ZerosumReport {
        consistent: entries
            .iter()
            .all(|e| !(e.fixes_y.is_joined() && e.fixes_y_prime.is_joined())),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{c, g_ck};

    #[test]
    fn samples_are_fpcs() {
        for (name, y) in default_samples() {
            assert!(is_fpc_bounded(&y, &Bounds::default()).is_verified(), "{name}");
        }
    }

    #[test]
    fn delta_generates_fpcs() {
        let samples = &default_samples()[..2];
        let r = is_fgv_evidence(&battery::delta_gen(), samples, &Bounds::default(), 5, 500);
        assert!(r.fgv_evidence);
    }

    #[test]
    fn k_omega_is_not_a_generator() {
        let g = Generator::single(Term::app(k(), crate::combinators::omega()));
        let r = is_fgv_evidence(&g, &default_samples()[..1], &Bounds::default(), 5, 500);
        assert!(r.samples[0].wfpc.is_refuted());
        assert!(r.refuted);
    }

    #[test]
    fn swapped_k_generators_agree() {
        let g = Generator::new(vec![g_ck(), k()]);
        let h = Generator::new(vec![g_ck(), Term::app(c(), k())]);
        let r = ext_eq_bounded(&g, &h, &default_samples()[..2], &Bounds::default());
        assert!(r.all_joined, "{:?}", r.per_sample);
        assert!(ext_eq_bounded(&g, &g, &default_samples(), &Bounds::default()).all_joined);
    }
}
