//! Generator vectors `(G_0, ..., G_n)`, acting on a term `Y` by application
//! `Y G_0 ... G_n`, and the bounded analyses built on them.

mod absorbers;
mod classify;
mod extensional;
mod fixpoint;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::combinators::{delta, resolve};
use crate::syntax::{parse_lenient, ParseError};
use crate::term::{iterate, Name, Term};

pub use absorbers::{
    left_absorber, right_absorber, AbsorberCheck, LeftAbsorber, RightAbsorber, RightAbsorberError, V0Binding,
};
pub use classify::{
    classify, coherence_violations, probe_accretive, probe_compact, probe_constant, probe_weakly_compact,
    probe_weakly_constant, ClassResult, ClassStatus, ClassificationReport, KOutcome, Outcome, ProbeConfig,
};
pub use extensional::{
    default_samples, ext_eq_bounded, is_fgv_evidence, non_injectivity, non_injectivity_pair, zerosum_consistency,
    ExtEqReport, FgvReport, NonInjectivityReport, SampleResult, ZerosumEntry, ZerosumReport,
};
pub use fixpoint::{
    build_fixed_point, construct_fixed_point, ConstructionError, ConstructionPath, FixedPointCertificate,
};

#[derive(Clone, Debug, Default)]
pub struct Generator {
    pub components: Vec<Term>,
    pub label: Option<String>,
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for Generator {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("the trivial generator has no expansion")]
    Trivial,
    #[error("generator literal must be a bracketed, semicolon separated list of terms")]
    Literal,
    #[error("component {index}: {source}")]
    Component { index: usize, source: ParseError },
}

impl Generator {
    pub fn new(components: Vec<Term>) -> Generator {
        Generator {
            components,
            label: None,
        }
    }

    pub fn trivial() -> Generator {
        Generator::default()
    }

    pub fn single(t: Term) -> Generator {
        Generator::new(vec![t])
    }

    pub fn labelled(mut self, label: &str) -> Generator {
        self.label = Some(label.to_string());
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of components minus one, the `n` of `(G_0, ..., G_n)`.
    pub fn n(&self) -> Option<usize> {
        self.components.len().checked_sub(1)
    }

    pub fn head(&self) -> Option<&Term> {
        self.components.first()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.components.iter().flat_map(|c| c.free_vars()).collect()
    }

    /// A reserved name not free in any component.
    pub fn fresh(&self, base: &str) -> Name {
        Name::fresh_reserved(base, &self.free_vars())
    }

    /// Parses `[t1; t2; ...]`, resolving library names in each component.
    pub fn parse(src: &str) -> Result<Generator, GeneratorError> {
        let inner = src
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(GeneratorError::Literal)?;
        if inner.trim().is_empty() {
            return Ok(Generator::trivial());
        }
        let components = inner
            .split(';')
            .enumerate()
            .map(|(index, part)| {
                parse_lenient(part)
                    .map(|t| resolve(&t))
                    .map_err(|source| GeneratorError::Component { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Generator::new(components))
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.to_string())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Generator {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Generator, GeneratorError> {
        Generator::parse(s)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Generator, D::Error> {
        Vec::<Term>::deserialize(d).map(Generator::new)
    }
}

/// `Y G_0 ... G_n`.
pub fn apply(y: &Term, g: &Generator) -> Term {
    Term::apps(y.clone(), g.components.iter().cloned())
}

/// Concatenation.
pub fn compose(g: &Generator, h: &Generator) -> Generator {
    Generator::new(g.components.iter().chain(&h.components).cloned().collect())
}

/// `G_0^k(z) G_1 ... G_n`.
pub fn expansion(g: &Generator, k: usize, z: &Name) -> Result<Term, GeneratorError> {
    let (g0, rest) = g.components.split_first().ok_or(GeneratorError::Trivial)?;
    Ok(Term::apps(iterate(g0, k, Term::var(z.clone())), rest.iter().cloned()))
}

/// `δ^k(z) G_0 ... G_n`.
pub fn delta_expansion(g: &Generator, k: usize, z: &Name) -> Term {
    apply(&iterate(&delta(), k, Term::var(z.clone())), g)
}

/// Generators used throughout the tests and the CLI.
pub mod battery {
    use super::Generator;
    use crate::combinators::{delta, g_bracket, k, p, q, r, theta, theta_param};
    use crate::term::{Name, Term};

    /// `(K Θ)`.
    pub fn k_theta() -> Generator {
        Generator::single(Term::app(k(), theta())).labelled("(K Theta)")
    }

    /// `(λy. Θ_y)`.
    pub fn theta_sub() -> Generator {
        let y = Name::new("y");
        Generator::single(Term::lam(y.clone(), theta_param(&Term::var(y)))).labelled("(\\y. Theta_y)")
    }

    pub fn delta_gen() -> Generator {
        Generator::single(delta()).labelled("(delta)")
    }

    pub fn pq() -> Generator {
        Generator::new(vec![p(), q()]).labelled("(P, Q)")
    }

    pub fn pr() -> Generator {
        Generator::new(vec![p(), r()]).labelled("(P, R)")
    }

    pub fn bracket() -> Generator {
        Generator::single(g_bracket()).labelled("(\\y x. x (y (K [y, x]) I))")
    }

    pub fn all() -> Vec<Generator> {
        vec![k_theta(), delta_gen(), theta_sub(), pq(), pr(), bracket()]
    }
}
