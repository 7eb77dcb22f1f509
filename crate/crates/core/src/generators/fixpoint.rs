//! Fixed points of (weakly) compact generators.
//!
//! With `F_0[z] = G_0^k(z) G_1 ... G_n` a (weak) fpc and `F_k` its k-th
//! unfolding stage, `Y = Θ (λy. F_k[z := y G_0])` and `X = F_0[z := Y G_0]`
//! satisfy `X G⃗ = X`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classify::{probe_compact, probe_weakly_compact, ClassStatus, ProbeConfig};
use super::{apply, expansion, Generator, GeneratorError};
use crate::combinators::theta;
use crate::fpc::{is_wfpc_bounded, unfold_wfpc_n, FpcVerdict, UnfoldError};
use crate::join::{join_bounded, JoinVerdict};
use crate::reduction::{head_redex, replay, step, subterm_at, Bounds, Move, RedexPosition};
use crate::term::{Name, Term, TermKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionPath {
    /// `F_0` is a verified fpc and `F_k = F_0`.
    Compact,
    /// `F_0` has the wfpc shape on its approximant; `F_k` comes from unfolding.
    Weak,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointCertificate {
    pub generator: Generator,
    pub path: ConstructionPath,
    pub k: usize,
    /// The hole variable of `f0` and `fk`.
    pub z: Name,
    pub f0: Term,
    pub fk: Term,
    pub y: Term,
    pub x: Term,
    /// `apply(X, G)` against `X`.
    pub join: JoinVerdict,
    /// Set when `join` was obtained by replaying the construction's own
    /// reductions rather than by blind search.
    pub guided: bool,
    pub x_wfpc: FpcVerdict,
    pub complete: bool,
    pub bounds: Bounds,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("no compactness modulus found for k <= {0}")]
    NoModulus(usize),
    #[error("unfolding failed: {0}")]
    Unfold(#[from] UnfoldError),
}

/// `(Y, X)` for given `F_0[z]` and `F_k[z]`.
pub fn build_fixed_point(g: &Generator, z: &Name, f0: &Term, fk: &Term) -> (Term, Term) {
    let g0 = g.head().expect("non-trivial generator").clone();
    let mut avoid = g.free_vars();
    avoid.extend(fk.free_vars());
    avoid.insert(z.clone());
    let yv = Name::fresh_reserved("y", &avoid);
    let body = fk.substitute(z, &Term::app(Term::var(yv.clone()), g0.clone()));
    let y = Term::app(theta(), Term::lam(yv, body));
    let x = f0.substitute(z, &Term::app(y.clone(), g0));
    (y, x)
}

/// Head-reduces `t` layer by layer until it reads `x (x (... (x N)))` with
/// `k` copies of `x`. Returns the steps taken and `N`.
fn layered_head_trace(t: &Term, x: &Name, k: usize, fuel: usize) -> Option<(Vec<RedexPosition>, Term)> {
    let mut cur = t.clone();
    let mut prefix: Vec<Move> = Vec::new();
    let mut steps = Vec::new();
    for _ in 0..k {
        loop {
            let sub = subterm_at(&cur, &RedexPosition(prefix.clone()))?;
            match head_redex(sub) {
                Some(p) => {
                    if steps.len() >= fuel {
                        return None;
                    }
                    let pos = p.prefixed(&prefix);
                    cur = step(&cur, &pos).ok()?;
                    steps.push(pos);
                }
                None => {
                    let (f, _) = sub.as_app()?;
                    if !matches!(f.kind(), TermKind::Free(n) if n == x) {
                        return None;
                    }
                    break;
                }
            }
        }
        prefix.push(Move::Arg);
    }
    let n = subterm_at(&cur, &RedexPosition(prefix))?.clone();
    Some((steps, n))
}

/// Replays the proof chain: both `X G⃗` and `X` reduce to
/// `G_0^k(N[x := G_0, z := Y G_0]) G_1 ... G_n` where `F_k = λx. N`.
fn guided_join(
    g: &Generator,
    k: usize,
    z: &Name,
    f0: &Term,
    y: &Term,
    x_term: &Term,
    cfg: &ProbeConfig,
) -> Option<JoinVerdict> {
    let (g0, rest) = g.components.split_first()?;
    let n = rest.len();
    let mut avoid = g.free_vars();
    avoid.insert(z.clone());
    let xv = Name::fresh_reserved("x", &avoid);
    let f0x = Term::app(f0.clone(), Term::var(xv.clone()));
    let (trace, nk) = layered_head_trace(&f0x, &xv, k, cfg.fuel)?;
    let yg0 = Term::app(y.clone(), g0.clone());
    let inner = nk.substitute(&xv, g0).substitute(z, &yg0);

    let lhs = apply(x_term, g);
    let steps_left: Vec<_> = trace.iter().map(|p| p.under_functions(n)).collect();
    let left_end = replay(&lhs, &steps_left).ok()?;

    let prefix: Vec<Move> = std::iter::repeat_n(Move::Fun, n)
        .chain(std::iter::repeat_n(Move::Arg, k))
        .collect();
    let mut steps_right = Vec::new();
    let mut cur = x_term.clone();
    while subterm_at(&cur, &RedexPosition(prefix.clone()))? != &inner {
        if steps_right.len() >= cfg.fuel {
            return None;
        }
        let sub = subterm_at(&cur, &RedexPosition(prefix.clone()))?;
        let pos = head_redex(sub)?.prefixed(&prefix);
        cur = step(&cur, &pos).ok()?;
        steps_right.push(pos);
    }
    (left_end == cur).then_some(JoinVerdict::Joined {
        witness: cur,
        steps_left,
        steps_right,
        bounds: cfg.bounds,
    })
}

/// Finds a modulus and builds the fixed point with its certificate.
///
/// A verified compact modulus is preferred; otherwise the weak path uses the
/// least k with wfpc evidence. The certificate is `complete` only if
/// `apply(X, G)` and `X` were actually joined.
pub fn construct_fixed_point(g: &Generator, cfg: &ProbeConfig) -> Result<FixedPointCertificate, ConstructionError> {
    let z = g.fresh("z");
    let compact = probe_compact(g, cfg)?;
    let (path, k, f0, fk) = if let ClassStatus::Verified { k, .. } = compact.status {
        let f0 = expansion(g, k, &z)?;
        (ConstructionPath::Compact, k, f0.clone(), f0)
    } else {
        let weak = probe_weakly_compact(g, cfg)?;
        let k = weak.status.modulus().ok_or(ConstructionError::NoModulus(cfg.k_max))?;
        let f0 = expansion(g, k, &z)?;
        let fk = unfold_wfpc_n(&f0, k, cfg.fuel)?;
        (ConstructionPath::Weak, k, f0, fk)
    };
    Ok(certify(g, path, k, z, f0, fk, cfg))
}

fn certify(
    g: &Generator,
    path: ConstructionPath,
    k: usize,
    z: Name,
    f0: Term,
    fk: Term,
    cfg: &ProbeConfig,
) -> FixedPointCertificate {
    let (y, x) = build_fixed_point(g, &z, &f0, &fk);
    let guided = match path {
        ConstructionPath::Weak => guided_join(g, k, &z, &f0, &y, &x, cfg),
        ConstructionPath::Compact => None,
    };
    let (join, guided) = match guided {
        Some(j) => (j, true),
        None => (join_bounded(&apply(&x, g), &x, &cfg.bounds), false),
    };
    let x_wfpc = is_wfpc_bounded(&x, cfg.depth, cfg.fuel);
    FixedPointCertificate {
        generator: g.clone(),
        path,
        k,
        z,
        complete: join.is_joined(),
        f0,
        fk,
        y,
        x,
        join,
        guided,
        x_wfpc,
        bounds: cfg.bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::theta;
    use crate::generators::battery;
    use crate::reduction::replay;

    fn cfg() -> ProbeConfig {
        ProbeConfig {
            bounds: Bounds::default().with_steps(200).with_nodes(5000),
            ..ProbeConfig::default()
        }
    }

    #[test]
    fn constant_generator_fixed_point_is_theta() {
        let c = construct_fixed_point(&battery::k_theta(), &cfg()).unwrap();
        assert_eq!(c.path, ConstructionPath::Compact);
        assert_eq!(c.k, 1);
        assert!(c.complete);
        assert!(join_bounded(&c.x, &theta(), &Bounds::default()).is_joined());
    }

    #[test]
    fn theta_parametrization_has_a_fixed_point() {
        let c = construct_fixed_point(&battery::theta_sub(), &cfg()).unwrap();
        assert_eq!(c.path, ConstructionPath::Compact);
        assert!(c.complete, "{:?}", c.join);
        assert!(c.x_wfpc.is_verified());
    }

    #[test]
    fn weak_path_replays_the_chain() {
        let g = battery::pr();
        let c = construct_fixed_point(&g, &cfg()).unwrap();
        assert_eq!(c.path, ConstructionPath::Weak);
        assert_eq!(c.k, 1);
        assert!(c.guided && c.complete);
        if let JoinVerdict::Joined {
            witness,
            steps_left,
            steps_right,
            ..
        } = &c.join
        {
            assert_eq!(&replay(&apply(&c.x, &g), steps_left).unwrap(), witness);
            assert_eq!(&replay(&c.x, steps_right).unwrap(), witness);
        }
        assert!(c.x_wfpc.is_verified());
    }

    #[test]
    fn accretive_generator_has_no_modulus() {
        let e = construct_fixed_point(&battery::delta_gen(), &cfg()).unwrap_err();
        assert_eq!(e, ConstructionError::NoModulus(3));
    }
}
