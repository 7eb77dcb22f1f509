use fpclab_core::combinators::{delta, p, q, theta, y_curry};
use fpclab_core::generators::{
    apply, battery, construct_fixed_point, default_samples, delta_expansion, ext_eq_bounded, is_fgv_evidence,
    left_absorber, probe_compact, probe_constant, right_absorber, zerosum_consistency, ClassStatus, Generator,
    ProbeConfig,
};
use fpclab_core::join::{join_bounded, JoinVerdict};
use fpclab_core::reduction::Bounds;
use fpclab_core::term::{Name, Term};

fn theta_only() -> Vec<(String, Term)> {
    vec![("Theta".to_string(), theta())]
}

#[test]
fn pq_delta_expansion_unfolds_once() {
    let z = Name::reserved("z");
    let x = Term::var("x");
    let lhs = Term::app(delta_expansion(&battery::pq(), 1, &z), x.clone());
    let rhs = Term::app(x.clone(), Term::apps(Term::var(z), [p(), q(), x]));
    assert!(join_bounded(&lhs, &rhs, &Bounds::default()).is_joined());
}

#[test]
fn bracket_generator_maps_theta_to_an_fpc() {
    let r = is_fgv_evidence(&battery::bracket(), &theta_only(), &Bounds::default(), 5, 500);
    assert!(r.samples[0].fpc.is_verified());
    assert!(r.wfgv_evidence);
}

#[test]
fn constant_generator_sends_every_sample_to_its_witness() {
    let g = battery::k_theta();
    let status = probe_constant(&g, &ProbeConfig::default()).unwrap().status;
    let ClassStatus::Verified { k: 1, witness } = status else {
        panic!("{status}");
    };
    let z = fpclab_core::syntax::parse(&witness).unwrap();
    for (name, y) in default_samples() {
        assert!(
            join_bounded(&apply(&y, &g), &z, &Bounds::default()).is_joined(),
            "{name}"
        );
    }
}

#[test]
fn delta_and_theta_parametrization_stay_apart() {
    let r = ext_eq_bounded(
        &battery::delta_gen(),
        &battery::theta_sub(),
        &theta_only(),
        &Bounds::default(),
    );
    assert!(!r.all_joined);
    assert!(matches!(r.per_sample[0].1, JoinVerdict::NotJoinedWithin { .. }));
}

#[test]
fn left_absorbers_absorb() {
    for g in [battery::k_theta(), battery::theta_sub()] {
        let cert = construct_fixed_point(&g, &ProbeConfig::default()).unwrap();
        let a = left_absorber(&cert, &theta_only(), &Bounds::default());
        assert!(a.all_joined(), "{}: {:?}", g.name(), a.checks);
    }
}

#[test]
fn left_absorber_is_not_seen_to_be_constant() {
    let cert = construct_fixed_point(&battery::theta_sub(), &ProbeConfig::default()).unwrap();
    let a = left_absorber(&cert, &theta_only(), &Bounds::default());
    assert!(
        matches!(a.non_constancy, JoinVerdict::NotJoinedWithin { .. }),
        "{:?}",
        a.non_constancy
    );
}

#[test]
fn right_absorber_is_compact() {
    let f = Generator::new(vec![delta(), delta()]);
    let r = right_absorber(&f, &theta_only(), &Bounds::default(), 100).unwrap();
    assert!(r.all_joined());
    let status = probe_compact(&r.g, &ProbeConfig::default()).unwrap().status;
    assert!(matches!(status, ClassStatus::Verified { .. }), "{status}");
}

#[test]
fn right_absorber_joins_on_curry_too() {
    let f = Generator::new(vec![p(), q()]);
    let samples = vec![("Y_curry".to_string(), y_curry())];
    let r = right_absorber(&f, &samples, &Bounds::default(), 100).unwrap();
    assert!(r.all_joined(), "{:?}", r.checks);
}

#[test]
fn no_composition_with_delta_fixes_the_pair() {
    let r = zerosum_consistency(&battery::all(), &Bounds::default());
    assert!(r.consistent);
    assert_eq!(r.entries.len(), battery::all().len());
}
