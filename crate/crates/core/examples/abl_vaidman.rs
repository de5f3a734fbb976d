//! The ABL rule on the ensemble pre-selected after the overlap point and
//! post-selected on clicks at both `D+` and `D-`.
//!
//! Each of `U+` and `U-` would be found with certainty, their product never.
//! Reading those certainties as elements of reality breaks the product rule
//! on exactly one pair.

use hardylab::abl::{
    abl_distribution, abl_probability, assign_elements, audit_product_rule, hardy_ensemble,
    hardy_observables, ProjectorFamily,
};
use hardylab::hardy::{Experiment, ExperimentStage};

pub fn run_example() -> hardylab::Result<usize> {
    let experiment = Experiment::default();
    let ensemble = hardy_ensemble(&experiment)?;
    let observables = hardy_observables(&experiment, ExperimentStage::AfterP)?;
    for o in &observables {
        let family = ProjectorFamily::binary(&o.projector);
        let amp = ensemble.amplitude(&o.projector)?;
        println!(
            "{:<5} <post|P|pre> = {:+.4}{:+.4}i   P(1) = {}   distribution {:?}",
            o.name,
            amp.re,
            amp.im,
            abl_probability(&ensemble, &family, 0)?,
            abl_distribution(&ensemble, &family)?
        );
    }

    let assignment = assign_elements(&ensemble, &observables)?;
    let [u_plus, u_minus, _] = observables;
    let report = audit_product_rule(&assignment, &[(u_plus, u_minus)])?;
    for v in &report.violations {
        println!(
            "f({}) f({}) = {} but f({}) = {}",
            v.a,
            v.b,
            v.f_a * v.f_b,
            v.product,
            v.f_product
        );
    }
    Ok(report.violations.len())
}

fn main() {
    run_example().expect("example runs");
}
