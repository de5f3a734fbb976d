//! Runs every example's `run_example` so the examples stay working.

#[allow(dead_code)]
#[path = "../examples/abl_vaidman.rs"]
mod abl_vaidman;
#[allow(dead_code)]
#[path = "../examples/hardy_states.rs"]
mod hardy_states;
#[allow(dead_code)]
#[path = "../examples/lattice_enumeration.rs"]
mod lattice_enumeration;
#[allow(dead_code)]
#[path = "../examples/li1_invariance.rs"]
mod li1_invariance;
#[allow(dead_code)]
#[path = "../examples/light_cone_regions.rs"]
mod light_cone_regions;
#[allow(dead_code)]
#[path = "../examples/lorentz_frames.rs"]
mod lorentz_frames;
#[allow(dead_code)]
#[path = "../examples/product_rule_classification.rs"]
mod product_rule_classification;
#[allow(dead_code)]
#[path = "../examples/projection_free_certainty.rs"]
mod projection_free_certainty;
#[allow(dead_code)]
#[path = "../examples/scenario_files.rs"]
mod scenario_files;

use hardylab::causal::Criterion;

#[test]
fn hardy_states_rate() {
    assert!((hardy_states::run_example().unwrap() - 0.0625).abs() < 1e-12);
}

#[test]
fn projection_free_certainties() {
    for v in projection_free_certainty::run_example().unwrap() {
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn abl_single_violation() {
    assert_eq!(abl_vaidman::run_example().unwrap(), 1);
}

#[test]
fn geometry_examples_run() {
    lorentz_frames::run_example().unwrap();
    light_cone_regions::run_example().unwrap();
    scenario_files::run_example().unwrap();
}

#[test]
fn only_light_cone_criterion_is_frame_independent() {
    let v = li1_invariance::run_example().unwrap();
    assert_eq!(v[&Criterion::Er3], [Some(true); 3]);
    assert!(v[&Criterion::Er1].iter().all(Option::is_none));
}

#[test]
fn product_rule_examples() {
    assert_eq!(product_rule_classification::run_example().unwrap(), 0);
    assert_eq!(lattice_enumeration::run_example().unwrap(), [9, 17, 33]);
}
