use std::time::{Duration, Instant};

use fpclab_core::boehm::{approximant, BoehmApprox};
use fpclab_core::combinators::{c, delta, g_ck, i, k, psi, theta, theta_param, upsilon, upsilon_stage, y_curry};
use fpclab_core::fpc::{is_fpc_bounded, is_wfpc_bounded, x_hat};
use fpclab_core::generators::{
    apply, battery, classify, coherence_violations, compose, construct_fixed_point, ext_eq_bounded, non_injectivity,
    ClassStatus, ConstructionPath, Generator, ProbeConfig,
};
use fpclab_core::graph::reduct_set;
use fpclab_core::join::{join_bounded, JoinVerdict};
use fpclab_core::lab::hunt_double_fpc;
use fpclab_core::reduction::{head_step, one_step_reducts, Bounds};
use fpclab_core::syntax::parse;
use fpclab_core::term::{Name, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

fn joined_within(v: &JoinVerdict, steps: usize) -> Result<usize, String> {
    match v.steps_per_side() {
        Some(n) if n <= steps => Ok(n),
        Some(n) => Err(format!("joined but needed {n} steps on one side")),
        None => Err(format!("not joined: {}", v.class_name())),
    }
}

fn turing_fpc() -> Outcome {
    let x = Term::var(x_hat(&theta()));
    let tx = Term::app(theta(), x.clone());
    let rhs = Term::app(x, tx.clone());
    let (v, dt) = timed(|| join_bounded(&tx, &rhs, &Bounds::default()));
    let n = joined_within(&v, 10)?;
    ensure(dt < Duration::from_millis(10), format!("took {dt:?}"))?;
    Ok(format!("{n} steps/side in {dt:?}"))
}

fn curry_to_turing() -> Outcome {
    let lhs = Term::app(y_curry(), delta());
    let (v, dt) = timed(|| join_bounded(&lhs, &theta(), &Bounds::default()));
    let n = joined_within(&v, 20)?;
    ensure(dt < Duration::from_millis(10), format!("took {dt:?}"))?;
    Ok(format!("{n} steps/side in {dt:?}"))
}

fn parametrized_fpc() -> Outcome {
    let (ti, tk) = (theta_param(&i()), theta_param(&k()));
    for (name, t) in [("Theta_I", &ti), ("Theta_K", &tk)] {
        ensure(
            is_fpc_bounded(t, &Bounds::default()).is_verified(),
            format!("{name} not verified"),
        )?;
    }
    let v = join_bounded(&ti, &tk, &Bounds::default().with_nodes(10_000));
    match v {
        JoinVerdict::NotJoinedWithin { explored, .. } => Ok(format!("both verified; apart after {explored} nodes")),
        other => Err(format!("expected not joined, got {}", other.class_name())),
    }
}

fn upsilon_ladder() -> Outcome {
    let c = Name::new("c");
    let ups = upsilon(&c);
    let x = x_hat(&ups);
    let xt = Term::var(x.clone());
    let ux = Term::app(ups.clone(), xt.clone());
    let stage0 = upsilon_stage(&x, &c, 0);
    ensure(
        head_step(&ux).as_ref() == Some(&stage0),
        "Upsilon x does not head-step to its first stage",
    )?;
    let g = reduct_set(&stage0, &Bounds::default().with_nodes(60));
    ensure(g.nodes.len() == 60, format!("{} nodes", g.nodes.len()))?;
    ensure(g.is_simple_path(), "reduct graph branches")?;
    let v = join_bounded(&ux, &Term::app(xt, ux.clone()), &Bounds::default().with_nodes(10_000));
    ensure(!v.is_joined(), "Upsilon x joined x (Upsilon x)")?;
    ensure(is_wfpc_bounded(&ups, 5, 500).is_verified(), "wfpc check not verified")?;
    Ok("60-node path, not joined within 10^4 nodes, wfpc at depth 5".to_string())
}

fn boehm_shape() -> Outcome {
    let z = Name::new("z");
    let c = Name::new("c");
    let samples = [
        ("Theta", theta()),
        ("Y_curry", y_curry()),
        ("Psi_z", psi(&z)),
        ("Upsilon", upsilon(&c)),
    ];
    let (res, dt) = timed(|| {
        for (name, y) in &samples {
            let x = x_hat(y);
            let yx = Term::app(y.clone(), Term::var(x.clone()));
            for d in 0..=8 {
                let a = approximant(&yx, d, 10_000);
                ensure(a == BoehmApprox::unfolding(&x, d), format!("{name} at depth {d}: {a}"))?;
            }
        }
        Ok::<(), String>(())
    });
    res?;
    ensure(dt < Duration::from_secs(1), format!("took {dt:?}"))?;
    Ok(format!("4 combinators, depths 0..=8, in {dt:?}"))
}

fn classification_battery() -> Outcome {
    let cfg = ProbeConfig::default();
    let report = |g: &Generator| classify(g, &cfg).map_err(|e| e.to_string());
    let kt = report(&battery::k_theta())?;
    ensure(
        matches!(kt.constant.status, ClassStatus::Verified { k: 1, .. }),
        format!("(K Theta) constant: {}", kt.constant.status),
    )?;
    let ts = report(&battery::theta_sub())?;
    ensure(
        matches!(ts.compact.status, ClassStatus::Verified { k: 1, .. }),
        format!("(\\y. Theta_y) compact: {}", ts.compact.status),
    )?;
    let d = report(&battery::delta_gen())?;
    ensure(
        matches!(d.accretive.status, ClassStatus::EvidenceFor { .. }),
        format!("(delta) accretive: {}", d.accretive.status),
    )?;
    ensure(
        matches!(d.weakly_constant.status, ClassStatus::RefutedUpTo { k_max: 3 }),
        format!("(delta) weakly constant: {}", d.weakly_constant.status),
    )?;
    let pq = report(&battery::pq())?;
    ensure(
        matches!(pq.accretive.status, ClassStatus::EvidenceFor { .. }),
        format!("(P, Q) accretive: {}", pq.accretive.status),
    )?;
    let pr = report(&battery::pr())?;
    ensure(
        matches!(pr.weakly_constant.status, ClassStatus::EvidenceFor { k: 1, .. }),
        format!("(P, R) weakly constant: {}", pr.weakly_constant.status),
    )?;
    ensure(
        matches!(pr.compact.status, ClassStatus::Unknown { .. }),
        format!("(P, R) compact: {}", pr.compact.status),
    )?;
    Ok("all five statuses as expected".to_string())
}

fn fixed_point_construction() -> Outcome {
    let cfg = ProbeConfig::default();
    let ts = construct_fixed_point(&battery::theta_sub(), &cfg).map_err(|e| e.to_string())?;
    let n = joined_within(&ts.join, 200)?;
    let kt = construct_fixed_point(&battery::k_theta(), &cfg).map_err(|e| e.to_string())?;
    ensure(
        join_bounded(&kt.x, &theta(), &Bounds::default()).is_joined(),
        "fixed point of (K Theta) does not join Theta",
    )?;
    let big = ProbeConfig {
        bounds: Bounds::default().with_nodes(100_000),
        ..cfg
    };
    let pr = construct_fixed_point(&battery::pr(), &big).map_err(|e| e.to_string())?;
    ensure(pr.path == ConstructionPath::Weak, "(P, R) did not take the weak path")?;
    ensure(
        pr.join.is_joined(),
        format!("(P, R) certificate: {}", pr.join.class_name()),
    )?;
    Ok(format!(
        "(\\y. Theta_y) in {n} steps/side; (K Theta) joins Theta; (P, R) weak k={}",
        pr.k
    ))
}

fn random_term(rng: &mut ChaCha8Rng, budget: usize, depth: u32) -> Term {
    let leaf = |rng: &mut ChaCha8Rng| {
        if depth > 0 && rng.gen_bool(0.7) {
            Term::bound(rng.gen_range(0..depth))
        } else {
            Term::var(["a", "b", "c"][rng.gen_range(0..3)])
        }
    };
    if budget <= 1 {
        return leaf(rng);
    }
    match rng.gen_range(0..10) {
        0..=1 => leaf(rng),
        2..=4 => Term::lam_db(
            ["x", "y", "z"][rng.gen_range(0..3)],
            random_term(rng, budget - 1, depth + 1),
        ),
        _ => {
            let left = rng.gen_range(1..budget);
            let f = random_term(rng, left, depth);
            let a = random_term(rng, budget - left, depth);
            Term::app(f, a)
        }
    }
}

fn random_generator(rng: &mut ChaCha8Rng) -> Generator {
    let n = rng.gen_range(0..4);
    Generator::new((0..n).map(|_| random_term(rng, 6, 0)).collect())
}

fn extensional_equality() -> Outcome {
    let g = Generator::new(vec![g_ck(), k()]);
    let h = Generator::new(vec![g_ck(), Term::app(c(), k())]);
    let samples = vec![("Theta".to_string(), theta()), ("Y_curry".to_string(), y_curry())];
    let r = ext_eq_bounded(&g, &h, &samples, &Bounds::default());
    ensure(r.all_joined, "(G, K) and (G, C K) not joined on every sample")?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let y = Term::var("Y");
    for _ in 0..100 {
        let (a, b, d) = (
            random_generator(&mut rng),
            random_generator(&mut rng),
            random_generator(&mut rng),
        );
        ensure(
            compose(&compose(&a, &b), &d) == compose(&a, &compose(&b, &d)),
            "associativity",
        )?;
        ensure(
            compose(&Generator::trivial(), &a) == a && compose(&a, &Generator::trivial()) == a,
            "identity",
        )?;
        ensure(
            apply(&y, &compose(&a, &b)) == apply(&apply(&y, &a), &b),
            "apply/compose coherence",
        )?;
    }
    Ok("joined on Theta and Y_curry; monoid laws on 100 random triples".to_string())
}

fn non_injectivity_replay() -> Outcome {
    let r = non_injectivity(&Bounds::default());
    ensure(r.images.is_joined(), format!("images: {}", r.images.class_name()))?;
    ensure(
        matches!(r.preimages, JoinVerdict::NotJoinedWithin { .. }),
        format!("preimages: {}", r.preimages.class_name()),
    )?;
    Ok("images joined, preimages not joined".to_string())
}

fn coherence() -> Outcome {
    let cfg = ProbeConfig::default();
    for g in battery::all() {
        let r = classify(&g, &cfg).map_err(|e| e.to_string())?;
        let bad = coherence_violations(&r);
        ensure(
            bad.is_empty(),
            format!("{} contradicts itself at k = {bad:?}", g.name()),
        )?;
    }
    Ok(format!("{} generators coherent", battery::all().len()))
}

fn hunt_consistency() -> Outcome {
    let b = Bounds::default().with_steps(300).with_nodes(10_000);
    let (r, dt) = timed(|| hunt_double_fpc(9, &b));
    ensure(dt < Duration::from_secs(300), format!("took {dt:?}"))?;
    ensure(
        r.double_fpc_found.is_empty(),
        format!("found {}", r.double_fpc_found.len()),
    )?;
    Ok(format!(
        "{} candidates, {} fpcs, no double fpc, in {dt:.2?}",
        r.candidates_scanned, r.fpc_verified
    ))
}

fn engine_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let t = random_term(&mut rng, 20, 0);
        let back = parse(&t.to_string()).map_err(|e| format!("{t}: {e}"))?;
        ensure(back == t, format!("round trip changed {t} into {back}"))?;
    }
    let walk = |rng: &mut ChaCha8Rng, t: &Term| {
        let mut cur = t.clone();
        for _ in 0..rng.gen_range(0..=8) {
            match one_step_reducts(&cur).choose(rng) {
                Some((_, r)) => cur = r.clone(),
                None => break,
            }
        }
        cur
    };
    let mut moved = 0;
    for _ in 0..100 {
        let t = random_term(&mut rng, 12, 0);
        let (l, r) = (walk(&mut rng, &t), walk(&mut rng, &t));
        if l != t || r != t {
            moved += 1;
        }
        ensure(
            join_bounded(&l, &r, &Bounds::default()).is_joined(),
            format!("reducts {l} and {r} of {t} not joined"),
        )?;
    }
    Ok(format!("1000 round trips; 100 diamonds ({moved} non-trivial) joined"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Turing fpc", turing_fpc),
        ("Curry to Turing", curry_to_turing),
        ("parametrized fpc", parametrized_fpc),
        ("upsilon ladder", upsilon_ladder),
        ("Boehm shape", boehm_shape),
        ("classification battery", classification_battery),
        ("fixed point construction", fixed_point_construction),
        ("extensional equality", extensional_equality),
        ("non-injectivity", non_injectivity_replay),
        ("weak class coherence", coherence),
        ("hunt consistency", hunt_consistency),
        ("engine properties", engine_properties),
    ];
    let mut failures = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
