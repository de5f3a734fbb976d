//! Conditional certainties read off the frame-dependent snapshots.
//!
//! In the frame where the positron crosses its second splitter first, a
//! click at `D+` makes it certain that the electron is on `u-`. The ratio is
//! computed from the state alone; nothing is collapsed.

use hardylab::hardy::{Experiment, ExperimentStage, Observable};

pub fn run_example() -> hardylab::Result<[f64; 2]> {
    let experiment = Experiment::default();
    let cases = [
        (
            Observable::u_minus(),
            Observable::d_plus(),
            ExperimentStage::AfterBs2Plus,
        ),
        (
            Observable::u_plus(),
            Observable::d_minus(),
            ExperimentStage::AfterBs2Minus,
        ),
    ];
    let mut values = [0.0; 2];
    for (k, (target, condition, stage)) in cases.into_iter().enumerate() {
        let legs = experiment.conditional_legs(
            stage,
            &experiment.projector(stage, &target)?,
            &experiment.projector(stage, &condition)?,
        )?;
        println!(
            "P({target} | {condition}) at {stage} = {} / {} = {}",
            legs.joint,
            legs.condition,
            legs.value()
        );
        values[k] = legs.value();
    }

    // The pair never reaches u+u- together, so conditioning on it is refused.
    let stage = ExperimentStage::AfterP;
    let both_u: Observable = "u+u-".parse()?;
    let refused = experiment.conditional_probability(
        stage,
        &experiment.projector(stage, &Observable::u_plus())?,
        &experiment.projector(stage, &both_u)?,
    );
    println!("P(U+ | u+u-) at {stage}: {}", refused.unwrap_err());
    Ok(values)
}

fn main() {
    run_example().expect("example runs");
}
