//! Generators absorbing others under composition, checked on samples.
//!
//! [`left_absorber`] builds `F⃗` with `F⃗ ⊙ G⃗ ≃ F⃗` from a fixed point
//! certificate of `G⃗`. [`right_absorber`] builds a compact `G⃗` with
//! `F⃗ ⊙ G⃗ ≃ G⃗` for any `F⃗` of length at least two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fixpoint::FixedPointCertificate;
use super::{apply, compose, Generator};
use crate::boehm::{head_normal_form, Head, HeadNormalization};
use crate::combinators::{delta, i, theta, theta_param, y_curry};
use crate::join::{join_bounded, JoinVerdict};
use crate::reduction::Bounds;
use crate::term::{Name, Term};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbsorberCheck {
    pub sample: String,
    pub join: JoinVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeftAbsorber {
    /// `(A, B)`.
    pub absorber: Generator,
    pub absorbed: Generator,
    /// `Y F⃗ G⃗` against `Y F⃗` per sample.
    pub checks: Vec<AbsorberCheck>,
    /// `Θ F⃗` against `Y_curry F⃗`; a join here would suggest `F⃗` is constant.
    pub non_constancy: JoinVerdict,
}

impl LeftAbsorber {
    pub fn all_joined(&self) -> bool {
        self.checks.iter().all(|c| c.join.is_joined())
    }
}

/// `A = λy b. b (y δ)` and `B = λy. F_0[z := y (λu. F_k[z := u G_0]) G_0]`.
pub fn left_absorber(cert: &FixedPointCertificate, samples: &[(String, Term)], bounds: &Bounds) -> LeftAbsorber {
    let g = &cert.generator;
    let g0 = g.head().expect("certificates come from non-trivial generators").clone();
    let a = crate::syntax::parse("\\y b. b (y D)")
        .expect("static term")
        .substitute(&Name::new("D"), &delta());
    let mut avoid = g.free_vars();
    avoid.extend(cert.f0.free_vars());
    avoid.extend(cert.fk.free_vars());
    let yv = Name::fresh_reserved("y", &avoid);
    avoid.insert(yv.clone());
    let uv = Name::fresh_reserved("u", &avoid);
    let inner = Term::lam(
        uv.clone(),
        cert.fk.substitute(&cert.z, &Term::app(Term::var(uv), g0.clone())),
    );
    let hole = Term::apps(Term::var(yv.clone()), [inner, g0]);
    let b = Term::lam(yv, cert.f0.substitute(&cert.z, &hole));
    let absorber = Generator::new(vec![a, b]).labelled("(A, B)");
    let checks = samples
        .iter()
        .map(|(name, y)| {
            let yf = apply(y, &absorber);
            AbsorberCheck {
                sample: name.clone(),
                join: join_bounded(&apply(&yf, g), &yf, bounds),
            }
        })
        .collect();
    LeftAbsorber {
        non_constancy: join_bounded(&apply(&theta(), &absorber), &apply(&y_curry(), &absorber), bounds),
        absorbed: g.clone(),
        absorber,
        checks,
    }
}

/// How the body of `G_m` refers to `F_0`'s first argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum V0Binding {
    /// The `j`-th argument of the head variable is exactly the first binder,
    /// so `G_m` receives it as its `j`-th parameter.
    Argument { j: usize },
    /// No argument exposes the first binder; it stays a free parameter and
    /// the resulting `G⃗` is constant up to that parameter.
    FreeParameter { name: Name },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RightAbsorberError {
    #[error("need at least two components, got {0}")]
    TooShort(usize),
    #[error("first component has no head normal form within fuel")]
    Unsolvable,
    #[error("first component's head normal form abstracts no variables")]
    NoBinders,
    #[error("head variable of the first component is free")]
    FreeHead,
    #[error("head variable of the first component is its first binder")]
    HeadIsFirstBinder,
    #[error("first component takes {binders} arguments but only {available} are supplied")]
    TooManyBinders { binders: usize, available: usize },
    #[error("head variable index {m} exceeds n = {n}")]
    HeadOutOfRange { m: usize, n: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RightAbsorber {
    pub f: Generator,
    /// `(F_0, G_1, ..., G_{n+1})`.
    pub g: Generator,
    /// `F_0` head-normalizes to `λv_0 ... v_l. v_m P⃗`.
    pub l: usize,
    pub m: usize,
    pub binding: V0Binding,
    /// Indices `i` whose `G_i` is the placeholder `λp. p`.
    pub placeholders: Vec<usize>,
    /// `Y G⃗` against `Y F⃗ G⃗` per sample.
    pub checks: Vec<AbsorberCheck>,
}

impl RightAbsorber {
    pub fn all_joined(&self) -> bool {
        self.checks.iter().all(|c| c.join.is_joined())
    }
}

/// Builds `G⃗ = (F_0, G_1, ..., G_{n+1})` with
/// `G_{n+1} = Θ (λg y. g (y F⃗))` and
/// `G_m = λp⃗. λg_{l+1} ... g_{n+1}. Θ_{G_{n+1} (F_0 v_0 F_1 ... F_n)}`.
pub fn right_absorber(
    f: &Generator,
    samples: &[(String, Term)],
    bounds: &Bounds,
    fuel: usize,
) -> Result<RightAbsorber, RightAbsorberError> {
    let n = f
        .components
        .len()
        .checked_sub(1)
        .filter(|&n| n >= 1)
        .ok_or(RightAbsorberError::TooShort(f.components.len()))?;
    let f0 = &f.components[0];
    let h = match head_normal_form(f0, fuel) {
        HeadNormalization::Hnf(h) => h,
        HeadNormalization::Unsolved { .. } => return Err(RightAbsorberError::Unsolvable),
    };
    let l = h.binders.len().checked_sub(1).ok_or(RightAbsorberError::NoBinders)?;
    let m = match h.head {
        Head::Bound(idx) => l.checked_sub(idx as usize).ok_or(RightAbsorberError::FreeHead)?,
        Head::Free(_) => return Err(RightAbsorberError::FreeHead),
    };
    if m == 0 {
        return Err(RightAbsorberError::HeadIsFirstBinder);
    }
    if l > n + 1 {
        return Err(RightAbsorberError::TooManyBinders {
            binders: l + 1,
            available: n + 2,
        });
    }
    if m > n {
        return Err(RightAbsorberError::HeadOutOfRange { m, n });
    }

    let mut avoid = f.free_vars();
    let mut fresh = |base: &str| {
        let x = Name::fresh_reserved(base, &avoid);
        avoid.insert(x.clone());
        x
    };
    let (gv, yv) = (fresh("g"), fresh("y"));
    let g_last = Term::app(
        theta(),
        Term::lams(
            &[gv.clone(), yv.clone()],
            Term::app(Term::var(gv), apply(&Term::var(yv), f)),
        ),
    );

    let ps: Vec<Name> = (0..h.args.len()).map(|_| fresh("p")).collect();
    let gs: Vec<Name> = (l + 1..=n + 1).map(|_| fresh("g")).collect();
    let v0_index = l as u32;
    let binding = match h.args.iter().position(|a| a == &Term::bound(v0_index)) {
        Some(j) => V0Binding::Argument { j },
        None => V0Binding::FreeParameter { name: fresh("v0") },
    };
    let v0 = match &binding {
        V0Binding::Argument { j } => Term::var(ps[*j].clone()),
        V0Binding::FreeParameter { name } => Term::var(name.clone()),
    };
    let unfolded = Term::apps(f0.clone(), std::iter::once(v0).chain(f.components[1..].iter().cloned()));
    let body = theta_param(&Term::app(g_last.clone(), unfolded));
    let binders: Vec<Name> = ps.iter().chain(&gs).cloned().collect();
    let g_m = Term::lams(&binders, body);

    let mut components = vec![f0.clone()];
    let mut placeholders = Vec::new();
    for idx in 1..=n {
        if idx == m {
            components.push(g_m.clone());
        } else {
            placeholders.push(idx);
            components.push(i());
        }
    }
    components.push(g_last);
    let g = Generator::new(components).labelled("right absorber");
    let fg = compose(f, &g);
    let checks = samples
        .iter()
        .map(|(name, y)| AbsorberCheck {
            sample: name.clone(),
            join: join_bounded(&apply(y, &g), &apply(y, &fg), bounds),
        })
        .collect();
    Ok(RightAbsorber {
        f: f.clone(),
        g,
        l,
        m,
        binding,
        placeholders,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{p, q};

    fn theta_only() -> Vec<(String, Term)> {
        vec![("Theta".to_string(), theta())]
    }

    #[test]
    fn delta_pair_keeps_a_free_parameter() {
        let f = Generator::new(vec![delta(), delta()]);
        let r = right_absorber(&f, &theta_only(), &Bounds::default(), 100).unwrap();
        assert_eq!((r.l, r.m), (1, 1));
        assert!(matches!(r.binding, V0Binding::FreeParameter { .. }));
        assert_eq!(r.g.components.len(), 3);
        assert!(r.all_joined(), "{:?}", r.checks);
    }

    #[test]
    fn left_absorber_of_theta_parametrization() {
        use crate::generators::{battery, construct_fixed_point, ProbeConfig};
        let cert = construct_fixed_point(&battery::theta_sub(), &ProbeConfig::default()).unwrap();
        let a = left_absorber(&cert, &theta_only(), &Bounds::default());
        assert_eq!(a.absorber.components.len(), 2);
        assert!(a.all_joined(), "{:?}", a.checks);
        assert!(!a.non_constancy.is_refuted());
    }

    #[test]
    fn pq_binds_the_first_argument() {
        let f = Generator::new(vec![p(), q()]);
        let r = right_absorber(&f, &theta_only(), &Bounds::default(), 100).unwrap();
        assert_eq!(r.binding, V0Binding::Argument { j: 0 });
        assert!(r.all_joined(), "{:?}", r.checks);
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            right_absorber(&Generator::single(delta()), &[], &Bounds::default(), 100).unwrap_err(),
            RightAbsorberError::TooShort(1)
        );
        let k = crate::combinators::k();
        assert_eq!(
            right_absorber(&Generator::new(vec![k.clone(), k]), &[], &Bounds::default(), 100).unwrap_err(),
            RightAbsorberError::HeadIsFirstBinder
        );
    }
}
