//! Bundled derivations, each a chain of conversions checked link by link.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinators::{
    c, c_k, delta, g_bracket, g_ck, i, k, p, q, r, theta, theta_param, upsilon, upsilon_stage, y_curry,
};
use crate::fpc::{is_fpc_bounded, is_wfpc_bounded, x_hat, FpcVerdict};
use crate::generators::{apply, battery, construct_fixed_point, non_injectivity_pair, Generator, ProbeConfig};
use crate::graph::reduct_set;
use crate::join::{join_bounded, reaches, JoinVerdict};
use crate::reduction::{Bounds, RedexPosition};
use crate::term::{iterate, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Joins,
    ReducesTo,
    AlphaEq,
}

#[derive(Clone, Debug, Serialize)]
pub struct Link {
    pub lhs: Term,
    pub rhs: Term,
    pub relation: Relation,
}

impl Link {
    pub fn joins(lhs: Term, rhs: Term) -> Link {
        Link {
            lhs,
            rhs,
            relation: Relation::Joins,
        }
    }

    pub fn reduces_to(lhs: Term, rhs: Term) -> Link {
        Link {
            lhs,
            rhs,
            relation: Relation::ReducesTo,
        }
    }

    pub fn alpha_eq(lhs: Term, rhs: Term) -> Link {
        Link {
            lhs,
            rhs,
            relation: Relation::AlphaEq,
        }
    }
}

/// Properties checked alongside the chain.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// The first `nodes` reducts form a single path.
    SimplePath {
        term: Term,
        nodes: usize,
    },
    /// No common reduct within the script bounds.
    NotJoined {
        lhs: Term,
        rhs: Term,
    },
    Fpc {
        term: Term,
    },
    Wfpc {
        term: Term,
        depth: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayScript {
    pub name: String,
    /// The derivation being replayed.
    pub source: String,
    pub setup: Vec<(String, Term)>,
    pub chain: Vec<Link>,
    pub checks: Vec<Check>,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    Join(JoinVerdict),
    Path { steps: Option<Vec<RedexPosition>> },
    Alpha { equal: bool },
    Graph { nodes: usize, simple_path: bool },
    Fpc(FpcVerdict),
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkResult {
    pub link: Link,
    pub passed: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScriptResult {
    pub name: String,
    pub source: String,
    pub passed: bool,
    pub links: Vec<LinkResult>,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub scripts: Vec<ScriptResult>,
    pub passed: bool,
}

fn run_link(link: &Link, b: &Bounds) -> LinkResult {
    let (passed, evidence) = match link.relation {
        Relation::Joins => {
            let v = join_bounded(&link.lhs, &link.rhs, b);
            (v.is_joined(), Evidence::Join(v))
        }
        Relation::ReducesTo => {
            let steps = reaches(&link.lhs, &link.rhs, b);
            (steps.is_some(), Evidence::Path { steps })
        }
        Relation::AlphaEq => {
            let equal = link.lhs == link.rhs;
            (equal, Evidence::Alpha { equal })
        }
    };
    LinkResult {
        link: link.clone(),
        passed,
        evidence,
    }
}

fn run_check(check: &Check, b: &Bounds) -> CheckResult {
    let (passed, evidence) = match check {
        Check::SimplePath { term, nodes } => {
            let g = reduct_set(term, &b.with_nodes(*nodes));
            let simple_path = g.is_simple_path();
            (
                simple_path && g.nodes.len() == *nodes,
                Evidence::Graph {
                    nodes: g.nodes.len(),
                    simple_path,
                },
            )
        }
        Check::NotJoined { lhs, rhs } => {
            let v = join_bounded(lhs, rhs, b);
            (!v.is_joined(), Evidence::Join(v))
        }
        Check::Fpc { term } => {
            let v = is_fpc_bounded(term, b);
            (v.is_verified(), Evidence::Fpc(v))
        }
        Check::Wfpc { term, depth } => {
            let v = is_wfpc_bounded(term, *depth, b.max_steps);
            (v.is_verified(), Evidence::Fpc(v))
        }
    };
    CheckResult {
        check: check.clone(),
        passed,
        evidence,
    }
}

pub fn run_script(s: &ReplayScript) -> ScriptResult {
    let links: Vec<LinkResult> = s.chain.iter().map(|l| run_link(l, &s.bounds)).collect();
    let checks: Vec<CheckResult> = s.checks.iter().map(|c| run_check(c, &s.bounds)).collect();
    ScriptResult {
        name: s.name.clone(),
        source: s.source.clone(),
        passed: links.iter().all(|l| l.passed) && checks.iter().all(|c| c.passed),
        links,
        checks,
    }
}

/// Runs every bundled script, concurrently, reporting in bundle order.
pub fn replay_all() -> ReplayReport {
    let scripts: Vec<ScriptResult> = scripts().par_iter().map(run_script).collect();
    ReplayReport {
        passed: scripts.iter().all(|s| s.passed),
        scripts,
    }
}

fn app(f: Term, a: Term) -> Term {
    Term::app(f, a)
}

fn script(name: &str, source: &str, setup: Vec<(&str, Term)>, chain: Vec<Link>, checks: Vec<Check>) -> ReplayScript {
    ReplayScript {
        name: name.to_string(),
        source: source.to_string(),
        setup: setup.into_iter().map(|(n, t)| (n.to_string(), t)).collect(),
        chain,
        checks,
        bounds: Bounds::default(),
    }
}

fn fpc_unfolding(name: &str, source: &str, y: Term) -> ReplayScript {
    let x = Term::var(x_hat(&y));
    let yx = app(y.clone(), x.clone());
    script(
        name,
        source,
        vec![("Y", y)],
        vec![Link::joins(yx.clone(), app(x, yx))],
        Vec::new(),
    )
}

/// The bundled scripts, in a fixed order.
pub fn scripts() -> Vec<ReplayScript> {
    let z = Name::reserved("z");
    let zt = Term::var(z.clone());
    let cn = Name::new("c");

    let turing = {
        let x = Term::var(x_hat(&theta()));
        let tx = app(theta(), x.clone());
        script(
            "turing-fpc",
            "Theta x reduces to x (Theta x)",
            vec![("Theta", theta())],
            vec![
                Link::reduces_to(tx.clone(), app(x.clone(), tx.clone())),
                Link::joins(tx.clone(), app(x, tx)),
            ],
            vec![Check::Fpc { term: theta() }],
        )
    };

    let curry_delta = {
        let x = Term::var(x_hat(&y_curry()));
        let yx = app(y_curry(), x.clone());
        script(
            "curry-delta",
            "Curry's Y applied to delta is Turing's Theta",
            vec![("Y_curry", y_curry()), ("delta", delta())],
            vec![
                Link::joins(app(y_curry(), delta()), theta()),
                Link::joins(yx.clone(), app(x, yx)),
            ],
            Vec::new(),
        )
    };

    let theta_params = {
        let (ti, tk) = (theta_param(&i()), theta_param(&k()));
        let x = Term::var(Name::reserved("x"));
        script(
            "theta-param",
            "Theta_M x reduces to x (Theta_M x); distinct parameters stay apart",
            vec![("Theta_I", ti.clone()), ("Theta_K", tk.clone())],
            vec![
                Link::reduces_to(app(ti.clone(), x.clone()), app(x.clone(), app(ti.clone(), x.clone()))),
                Link::reduces_to(app(tk.clone(), x.clone()), app(x.clone(), app(tk.clone(), x))),
            ],
            vec![Check::NotJoined { lhs: ti, rhs: tk }],
        )
    };

    let bracket = {
        let y = apply(&theta(), &battery::bracket());
        let mut s = fpc_unfolding(
            "bracket-chain",
            "Theta G x = x (Theta G x) for the bracket generator",
            y,
        );
        s.setup.push(("G".to_string(), g_bracket()));
        s
    };

    let pq = {
        let y = Term::var("y");
        let zv = Term::var("z");
        let mut s = fpc_unfolding(
            "pq-chain",
            "Theta P Q x = x (Theta P Q x)",
            apply(&theta(), &battery::pq()),
        );
        s.setup.extend([("P".to_string(), p()), ("Q".to_string(), q())]);
        s.chain.insert(
            0,
            Link::reduces_to(
                Term::apps(q(), [y.clone(), zv.clone()]),
                app(zv.clone(), Term::apps(y, [q(), zv])),
            ),
        );
        s
    };

    let pr = {
        let mut s = fpc_unfolding(
            "pr-chain",
            "Theta P R x = x (Theta P R x)",
            apply(&theta(), &battery::pr()),
        );
        s.setup.extend([("P".to_string(), p()), ("R".to_string(), r())]);
        s
    };

    let upsilon_ladder = {
        let ups = upsilon(&cn);
        let x = x_hat(&ups);
        let xt = Term::var(x.clone());
        let ux = app(ups.clone(), xt.clone());
        let chain = (0..=3)
            .map(|k| Link::reduces_to(ux.clone(), iterate(&xt, k, upsilon_stage(&x, &cn, k))))
            .collect();
        script(
            "upsilon-ladder",
            "Upsilon x reduces deterministically through x^k (V_x (c^k I) V_x)",
            vec![("Upsilon", ups.clone())],
            chain,
            vec![
                Check::SimplePath {
                    term: upsilon_stage(&x, &cn, 0),
                    nodes: 60,
                },
                Check::NotJoined {
                    lhs: ux.clone(),
                    rhs: app(xt, ux),
                },
                Check::Wfpc { term: ups, depth: 5 },
            ],
        )
    };

    let gk = {
        let g = g_ck();
        let ck = app(c(), k());
        let ygk = Term::apps(theta(), [g.clone(), k()]);
        let ygck = Term::apps(theta(), [g.clone(), ck.clone()]);
        script(
            "gk-chain",
            "Y G K = Y G (C K) = delta (Y G K), an fpc",
            vec![("G", g), ("C", c())],
            vec![
                Link::joins(ygk.clone(), ygck.clone()),
                Link::joins(ygck, app(delta(), ygk.clone())),
            ],
            vec![Check::Fpc {
                term: app(delta(), ygk),
            }],
        )
    };

    let ck_ids = {
        let (f, y) = (Term::var("f"), Term::var("y"));
        script(
            "ck-identities",
            "C K = K I, C (C K) = K, C_k f y = f^k(y)",
            vec![("C", c()), ("K", k()), ("I", i())],
            vec![
                Link::joins(app(c(), k()), app(k(), i())),
                Link::joins(app(c(), app(c(), k())), k()),
                Link::joins(Term::apps(c_k(0), [f.clone(), y.clone()]), y.clone()),
                Link::joins(Term::apps(c_k(2), [f.clone(), y.clone()]), iterate(&f, 2, y)),
            ],
            Vec::new(),
        )
    };

    let delta_power = {
        let x = Name::new("x");
        let xt = Term::var(x.clone());
        let chain = (1..=3)
            .map(|k| {
                let lhs = app(iterate(&delta(), k, zt.clone()), delta());
                let rhs = Term::lam(
                    x.clone(),
                    iterate(&xt, k, Term::apps(zt.clone(), [delta(), xt.clone()])),
                );
                Link::joins(lhs, rhs)
            })
            .collect();
        script(
            "delta-power",
            "delta^k(z) delta = \\x. x^k(z delta x)",
            vec![("delta", delta())],
            chain,
            Vec::new(),
        )
    };

    let fix_theta = {
        let g = battery::theta_sub();
        let mut chain = Vec::new();
        let mut checks = Vec::new();
        let mut setup = vec![("G", g.components[0].clone())];
        if let Ok(cert) = construct_fixed_point(&g, &ProbeConfig::default()) {
            chain.push(Link::joins(apply(&cert.x, &g), cert.x.clone()));
            checks.push(Check::Fpc { term: cert.x.clone() });
            setup.push(("X", cert.x));
        }
        script(
            "fix-theta-generator",
            "a fixed point X of (\\y. Theta_y): X G = X",
            setup,
            chain,
            checks,
        )
    };

    let non_inj = {
        let (y, y2) = non_injectivity_pair();
        let d = Generator::single(delta());
        script(
            "non-injectivity",
            "two distinct fpcs with the same image under (delta)",
            vec![("Y", y.clone()), ("Y'", y2.clone())],
            vec![Link::joins(apply(&y, &d), apply(&y2, &d))],
            vec![
                Check::Fpc { term: y.clone() },
                Check::Fpc { term: y2.clone() },
                Check::NotJoined { lhs: y, rhs: y2 },
            ],
        )
    };

    vec![
        turing,
        curry_delta,
        theta_params,
        bracket,
        pq,
        pr,
        upsilon_ladder,
        gk,
        ck_ids,
        delta_power,
        fix_theta,
        non_inj,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_script_passes() {
        for s in scripts() {
            let r = run_script(&s);
            assert!(r.passed, "{}: {}", s.name, serde_json::to_string_pretty(&r).unwrap());
        }
    }

    #[test]
    fn failing_links_are_reported() {
        let s = script(
            "bogus",
            "",
            Vec::new(),
            vec![Link::alpha_eq(i(), k()), Link::joins(i(), k())],
            Vec::new(),
        );
        let r = run_script(&s);
        assert!(!r.passed);
        assert!(r.links.iter().all(|l| !l.passed));
    }
}
