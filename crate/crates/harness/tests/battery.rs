use ncvx_core::text::Workspace;
use ncvx_core::Rat;
use ncvx_harness::checks::{kernel_check, qualified_run};
use ncvx_harness::{gen_fn, gen_map, gen_set, theorem_check, theorem_check_range, verify, InstanceSpec, THEOREM_IDS};

#[test]
fn separation_battery_is_clean() {
    let r = theorem_check("SEPARATION_IFF", &InstanceSpec::default(), 500).unwrap();
    assert_eq!(r.passes, 500, "{:?}", r.failures);
}

#[test]
fn one_dimensional_near_convexity_is_convexity() {
    let r = theorem_check("DIM1_CONVEX", &InstanceSpec::with_seed(3).dims(1, 1), 300).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    assert_eq!(r.passes + r.skips, 300);
    assert!(r.skip_ratio() < 0.5);
}

#[test]
fn fixed_counterexamples_reproduce() {
    for id in ["SUM_FN_NEGATIVE", "SUM_MAP_NEGATIVE", "VALUE_NEGATIVE", "NCONE_INTERSECT_NEGATIVE"] {
        let r = theorem_check(id, &InstanceSpec::default(), 1).unwrap();
        assert_eq!(r.passes, 1, "{id}: {:?}", r.failures);
    }
}

#[test]
fn every_id_runs_at_low_dimension() {
    let spec = InstanceSpec::with_seed(11).dims(2, 1);
    for r in verify("all", &spec, 6).unwrap() {
        assert_eq!(r.passes + r.skips + r.failures.len(), r.trials);
        assert!(r.failures.is_empty(), "{}: {:?}", r.id, r.failures);
    }
    assert!(THEOREM_IDS.len() >= 29);
}

#[test]
fn single_trials_replay_the_batch() {
    let spec = InstanceSpec::with_seed(5).dims(2, 2);
    let batch = theorem_check("CODERIV_SUM", &spec, 6).unwrap();
    let mut passes = 0;
    for t in 0..6 {
        passes += theorem_check_range("CODERIV_SUM", &spec, t..t + 1).unwrap().passes;
    }
    assert_eq!(passes, batch.passes);
}

#[test]
fn generation_is_a_function_of_the_spec() {
    let spec = InstanceSpec::with_seed(1).dims(2, 2);
    let render = |s: &InstanceSpec| {
        let mut ws = Workspace::<Rat>::new();
        ws.sets.insert("S".into(), gen_set(s));
        ws.maps.insert("F".into(), gen_map(s));
        ws.functions.insert("f".into(), gen_fn(s));
        ws.render()
    };
    let text = render(&spec);
    assert_eq!(text, render(&spec));
    let back = Workspace::<Rat>::parse(&text).unwrap();
    assert_eq!(back.render(), text);
    assert_ne!(text, render(&InstanceSpec::with_seed(2).dims(2, 2)));
}

#[test]
fn invalid_specs_are_rejected() {
    let e = theorem_check("SEGMENT", &InstanceSpec::default().dims(5, 1), 1).unwrap_err();
    assert_eq!(e.code(), "InvalidSpec");
}

#[test]
fn kernel_suite_small() {
    let r = kernel_check(3, 60);
    assert!(r.ok(), "{:?}", r.failures);
    assert_eq!(r.cases, 60);
}

#[test]
fn qualified_runs_reach_their_quota() {
    let r = qualified_run("SUBDIFF_SUM", &InstanceSpec::with_seed(9).dims(2, 1), 20).unwrap();
    assert!(r.passes >= 20 && r.failures.is_empty());
}
