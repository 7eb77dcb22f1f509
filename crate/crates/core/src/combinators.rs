//! Named combinators and parameterized constructors.
//!
//! Recursive equations (`Q`, `W`, `Θ`, ...) are realized by self-application
//! so that each one holds by reduction from left to right.

use std::fmt;

use thiserror::Error;

use crate::syntax::parse;
use crate::term::{iterate, Name, Term};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown combinator `{0}`")]
pub struct UnknownName(pub String);

fn def(src: &str, parts: &[(&str, Term)]) -> Term {
    let mut t = parse(src).unwrap_or_else(|e| panic!("bad library definition {src:?}: {e}"));
    for (name, value) in parts {
        t = t.substitute(&Name::new(name), value);
    }
    t
}

pub fn i() -> Term {
    def("\\x. x", &[])
}

pub fn k() -> Term {
    def("\\x y. x", &[])
}

/// Argument swap `λf x y. f y x`.
pub fn c() -> Term {
    def("\\f x y. f y x", &[])
}

/// `λx y. x^k(y)`.
pub fn c_k(k: usize) -> Term {
    Term::lams(&["x", "y"], iterate(&Term::var("x"), k, Term::var("y")))
}

pub fn omega() -> Term {
    def("(\\x. x x) (\\x. x x)", &[])
}

pub fn delta() -> Term {
    def("\\y x. x (y x)", &[])
}

pub fn y_curry() -> Term {
    def("\\f. (\\x. f (x x)) (\\x. f (x x))", &[])
}

pub fn v() -> Term {
    def("\\v x. x (v v x)", &[])
}

pub fn theta() -> Term {
    Term::app(v(), v())
}

/// `Θ_M = V' V' M` where `V' = λv m x. x (v v m x)`.
pub fn theta_param(m: &Term) -> Term {
    let vp = def("\\v m x. x (v v m x)", &[]);
    Term::apps(vp.clone(), [vp, m.clone()])
}

/// `W_z W_z I` with `W_z = λw p x. x (w w (z p) x)`.
pub fn psi(z: &Name) -> Term {
    let wz = def("\\w p x. x (w w (z p) x)", &[("z", Term::var(z.clone()))]);
    Term::apps(wz.clone(), [wz, i()])
}

/// The auxiliary `V_x = λp v. x (v (c p) v)` of [`upsilon`], with `x` and `c` free.
pub fn upsilon_v(x: &Name, c: &Name) -> Term {
    def(
        "\\p v. x (v (c p) v)",
        &[("x", Term::var(x.clone())), ("c", Term::var(c.clone()))],
    )
}

/// `λx. V_x I V_x`, with `c` left free.
pub fn upsilon(c: &Name) -> Term {
    let x = Name::new("x");
    let vx = upsilon_v(&x, c);
    Term::lam(x, Term::apps(vx.clone(), [i(), vx]))
}

/// Stage `k` of the upsilon unfolding: `V_x (c^k I) V_x`.
pub fn upsilon_stage(x: &Name, c: &Name, k: usize) -> Term {
    let vx = upsilon_v(x, c);
    Term::apps(vx.clone(), [iterate(&Term::var(c.clone()), k, i()), vx])
}

/// `λx y. y x`.
pub fn p() -> Term {
    def("\\x y. y x", &[])
}

/// `B B` with `B = λb y z. z (y (b b) z)`, so that `Q y z ↠ z (y Q z)`.
pub fn q() -> Term {
    let b = def("\\b y z. z (y (b b) z)", &[]);
    Term::app(b.clone(), b)
}

/// `λw p z. z (w w (z p) z)`.
pub fn w_pr() -> Term {
    def("\\w p z. z (w w (z p) z)", &[])
}

/// `λy z. W W (y Q z) z`.
pub fn r() -> Term {
    def("\\y z. W W (y Q z) z", &[("W", w_pr()), ("Q", q())])
}

/// `λy z. z (y (C z)) (δ (y (C z)))`.
pub fn g_ck() -> Term {
    def("\\y z. z (y (C z)) (D (y (C z)))", &[("C", c()), ("D", delta())])
}

/// `λy x. x (y (K [y, x]) I)` with `[a, b] = λz. z a b`.
pub fn g_bracket() -> Term {
    def("\\y x. x (y (K (\\z. z y x)) I)", &[("K", k()), ("I", i())])
}

/// `λp q z. z p q`.
pub fn pair() -> Term {
    def("\\p q z. z p q", &[])
}

/// `[a, b] = λz. z a b`.
pub fn pair_of(a: &Term, b: &Term) -> Term {
    let z = Name::fresh_reserved("z", &a.free_vars().union(&b.free_vars()).cloned().collect());
    Term::lam(z.clone(), Term::apps(Term::var(z), [a.clone(), b.clone()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combinator {
    I,
    K,
    C,
    Ck(usize),
    Omega,
    Delta,
    YCurry,
    Theta,
    V,
    P,
    Q,
    WPr,
    R,
    GCk,
    GBracket,
    Pair,
}

impl Combinator {
    pub const ALL: [Combinator; 15] = [
        Combinator::I,
        Combinator::K,
        Combinator::C,
        Combinator::Omega,
        Combinator::Delta,
        Combinator::YCurry,
        Combinator::Theta,
        Combinator::V,
        Combinator::P,
        Combinator::Q,
        Combinator::WPr,
        Combinator::R,
        Combinator::GCk,
        Combinator::GBracket,
        Combinator::Pair,
    ];

    pub fn term(self) -> Term {
        match self {
            Combinator::I => i(),
            Combinator::K => k(),
            Combinator::C => c(),
            Combinator::Ck(n) => c_k(n),
            Combinator::Omega => omega(),
            Combinator::Delta => delta(),
            Combinator::YCurry => y_curry(),
            Combinator::Theta => theta(),
            Combinator::V => v(),
            Combinator::P => p(),
            Combinator::Q => q(),
            Combinator::WPr => w_pr(),
            Combinator::R => r(),
            Combinator::GCk => g_ck(),
            Combinator::GBracket => g_bracket(),
            Combinator::Pair => pair(),
        }
    }

    pub fn lookup(name: &str) -> Result<Combinator, UnknownName> {
        let c = match name {
            "I" => Combinator::I,
            "K" => Combinator::K,
            "C" => Combinator::C,
            "Omega" | "OMEGA" => Combinator::Omega,
            "delta" | "DELTA" => Combinator::Delta,
            "Y" | "Y_curry" | "Y_Curry" | "YCURRY" => Combinator::YCurry,
            "Theta" | "THETA" => Combinator::Theta,
            "V" => Combinator::V,
            "P" => Combinator::P,
            "Q" => Combinator::Q,
            "W" | "W_pr" => Combinator::WPr,
            "R" => Combinator::R,
            "G_ck" | "G" => Combinator::GCk,
            "G_bracket" => Combinator::GBracket,
            "pair" => Combinator::Pair,
            _ => match name.strip_prefix("C_").and_then(|k| k.parse().ok()) {
                Some(k) => Combinator::Ck(k),
                None => return Err(UnknownName(name.to_string())),
            },
        };
        Ok(c)
    }
}

impl fmt::Display for Combinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Combinator::I => f.write_str("I"),
            Combinator::K => f.write_str("K"),
            Combinator::C => f.write_str("C"),
            Combinator::Ck(k) => write!(f, "C_{k}"),
            Combinator::Omega => f.write_str("Omega"),
            Combinator::Delta => f.write_str("delta"),
            Combinator::YCurry => f.write_str("Y_curry"),
            Combinator::Theta => f.write_str("Theta"),
            Combinator::V => f.write_str("V"),
            Combinator::P => f.write_str("P"),
            Combinator::Q => f.write_str("Q"),
            Combinator::WPr => f.write_str("W_pr"),
            Combinator::R => f.write_str("R"),
            Combinator::GCk => f.write_str("G_ck"),
            Combinator::GBracket => f.write_str("G_bracket"),
            Combinator::Pair => f.write_str("pair"),
        }
    }
}

/// Library term by name. Besides [`Combinator::lookup`] names this accepts
/// `Psi` (free `z`), `Upsilon` (free `c`) and `Theta_<name>` for any library
/// name or variable.
pub fn named(name: &str) -> Result<Term, UnknownName> {
    match name {
        "Psi" | "PSI" => return Ok(psi(&Name::new("z"))),
        "Upsilon" | "UPSILON" => return Ok(upsilon(&Name::new("c"))),
        _ => {}
    }
    if let Some(param) = name.strip_prefix("Theta_").or_else(|| name.strip_prefix("THETA_")) {
        let m = named(param).unwrap_or_else(|_| Term::var(param));
        return Ok(theta_param(&m));
    }
    Combinator::lookup(name).map(Combinator::term)
}

/// Replaces every free name that is a library name by its definition.
pub fn resolve(t: &Term) -> Term {
    t.free_vars()
        .into_iter()
        .filter_map(|n| named(n.as_str()).ok().map(|d| (n, d)))
        .fold(t.clone(), |acc, (n, d)| acc.substitute(&n, &d))
}

/// A defining equation: `lhs` should join `rhs`.
#[derive(Clone, Debug)]
pub struct Equation {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

/// Instances of every defining equation in the library, over fresh free names.
pub fn defining_equations() -> Vec<Equation> {
    let x = || Term::var("x");
    let y = || Term::var("y");
    let z = || Term::var("z");
    let eq = |name: &str, lhs: Term, rhs: Term| Equation {
        name: name.to_string(),
        lhs,
        rhs,
    };
    let mut out = vec![
        eq("I", Term::app(i(), x()), x()),
        eq("K", Term::apps(k(), [x(), y()]), x()),
        eq(
            "C",
            Term::apps(c(), [Term::var("f"), x(), y()]),
            Term::apps(Term::var("f"), [y(), x()]),
        ),
        eq("Omega", omega(), omega()),
        eq(
            "delta",
            Term::apps(delta(), [y(), x()]),
            Term::app(x(), Term::app(y(), x())),
        ),
        eq(
            "Y_curry",
            Term::app(y_curry(), x()),
            Term::app(x(), Term::app(y_curry(), x())),
        ),
        eq(
            "Theta",
            Term::app(theta(), x()),
            Term::app(x(), Term::app(theta(), x())),
        ),
        {
            let tm = theta_param(&Term::var("m"));
            eq(
                "Theta_M",
                Term::app(tm.clone(), x()),
                Term::app(x(), Term::app(tm, x())),
            )
        },
        {
            let zn = Name::new("z");
            let wz = def("\\w p x. x (w w (z p) x)", &[("z", z())]);
            eq(
                "Psi",
                Term::app(psi(&zn), x()),
                Term::app(x(), Term::apps(wz.clone(), [wz, Term::app(z(), i()), x()])),
            )
        },
        {
            let (xn, cn) = (Name::new("x"), Name::new("c"));
            eq("Upsilon", Term::app(upsilon(&cn), x()), upsilon_stage(&xn, &cn, 0))
        },
        {
            let (xn, cn) = (Name::new("x"), Name::new("c"));
            let vx = upsilon_v(&xn, &cn);
            let pv = Term::var("p");
            let vv = Term::var("v");
            eq(
                "V_x",
                Term::apps(vx, [pv.clone(), vv.clone()]),
                Term::app(x(), Term::apps(vv.clone(), [Term::app(Term::var("c"), pv), vv])),
            )
        },
        eq("P", Term::apps(p(), [x(), y()]), Term::app(y(), x())),
        eq(
            "Q",
            Term::apps(q(), [y(), z()]),
            Term::app(z(), Term::apps(y(), [q(), z()])),
        ),
        {
            let w = Term::var("w");
            let pv = Term::var("p");
            eq(
                "W",
                Term::apps(w_pr(), [w.clone(), pv.clone(), z()]),
                Term::app(z(), Term::apps(w.clone(), [w, Term::app(z(), pv), z()])),
            )
        },
        eq(
            "R",
            Term::apps(r(), [y(), z()]),
            Term::apps(w_pr(), [w_pr(), Term::apps(y(), [q(), z()]), z()]),
        ),
        {
            let ycz = Term::app(y(), Term::app(c(), z()));
            eq(
                "G_ck",
                Term::apps(g_ck(), [y(), z()]),
                Term::apps(z(), [ycz.clone(), Term::app(delta(), ycz)]),
            )
        },
        eq(
            "G_bracket",
            Term::apps(g_bracket(), [y(), x()]),
            Term::app(x(), Term::apps(y(), [Term::app(k(), pair_of(&y(), &x())), i()])),
        ),
        eq("pair", Term::apps(pair(), [x(), y(), z()]), Term::apps(z(), [x(), y()])),
        eq("C K", Term::app(c(), k()), Term::app(k(), i())),
        eq("C (C K)", Term::app(c(), Term::app(c(), k())), k()),
    ];
    for n in 0..=3 {
        out.push(eq(
            &format!("C_{n}"),
            Term::apps(c_k(n), [x(), y()]),
            iterate(&x(), n, y()),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::join::join_bounded;
    use crate::reduction::{normalize, Bounds};

    #[test]
    fn delta_prints_as_defined() {
        assert_eq!(named("delta").unwrap().to_string(), "\\y x. x (y x)");
        assert_eq!(named("C_2").unwrap().to_string(), "\\x y. x (x y)");
        assert!(named("nope").is_err());
    }

    #[test]
    fn every_defining_equation_joins() {
        let b = Bounds::default().with_steps(200);
        for e in defining_equations() {
            let v = join_bounded(&e.lhs, &e.rhs, &b);
            assert!(v.is_joined(), "{}: {} vs {} gave {v:?}", e.name, e.lhs, e.rhs);
        }
    }

    #[test]
    fn library_terms_are_closed_except_parameters() {
        for c in Combinator::ALL {
            assert!(c.term().is_closed(), "{c}");
        }
        assert_eq!(
            theta_param(&Term::var("z")).free_vars().into_iter().collect::<Vec<_>>(),
            vec![Name::new("z")]
        );
        assert_eq!(psi(&Name::new("z")).free_vars().len(), 1);
        assert_eq!(upsilon(&Name::new("c")).free_vars().len(), 1);
    }

    #[test]
    fn iterate_identity_normalizes() {
        let t = iterate(&i(), 3, Term::var("z"));
        assert_eq!(normalize(&t, &Bounds::default()).normal_form(), Some(&Term::var("z")));
        assert_eq!(iterate(&delta(), 0, Term::var("z")), Term::var("z"));
    }

    #[test]
    fn resolve_substitutes_library_names_only() {
        let t = parse("THETA x").unwrap();
        assert_eq!(resolve(&t), Term::app(theta(), Term::var("x")));
        let t = parse("Theta_I").unwrap();
        assert_eq!(resolve(&t), theta_param(&i()));
    }
}
