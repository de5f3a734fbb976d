//! Amplitudes of the two-interferometer state at every stage, and the rate
//! of runs in which both `D+` and `D-` click.

use hardylab::hardy::{Experiment, ExperimentStage, Observable};

pub fn run_example() -> hardylab::Result<f64> {
    let experiment = Experiment::default();
    for stage in ExperimentStage::ALL {
        println!("{stage}");
        for (label, amp) in experiment.evolve_to(stage).state.iter() {
            if amp.norm() > 1e-12 {
                println!("  {label:<5} {:>8.5} {:+8.5}i", amp.re, amp.im);
            }
        }
    }
    let both = Observable::d_plus().times(&Observable::d_minus());
    let rate = experiment.observable_probability(ExperimentStage::AfterBoth, &both)?;
    println!("P(D+ and D-) = {rate} (1 in {})", (1.0 / rate).round());
    Ok(rate)
}

fn main() {
    run_example().expect("example runs");
}
