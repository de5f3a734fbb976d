//! Elements of reality for `U+`, `U-` and `U+U-` under each criterion, seen
//! from frames moving either way. The constant-time criterion depends on the
//! frame; the light-cone criteria do not.

use std::collections::BTreeMap;

use hardylab::causal::{
    hardy_assignment, li1_check, Criterion, HardyGeometry, LorentzBoost, NonlocalKind,
};
use hardylab::hardy::Experiment;

pub fn run_example() -> hardylab::Result<BTreeMap<Criterion, Vec<Option<bool>>>> {
    let experiment = Experiment::default();
    let geometry = HardyGeometry::default();
    let mut verdicts = BTreeMap::new();
    for criterion in Criterion::ALL {
        let mut frames = BTreeMap::new();
        for beta in [-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9] {
            let frame = LorentzBoost::new(beta)?;
            let a = hardy_assignment(
                &experiment,
                &geometry,
                criterion,
                Some(&frame),
                NonlocalKind::Union,
            )?;
            println!("{criterion} beta {beta:+.1}: {a:?}");
            frames.insert(format!("{beta:+.1}"), a);
        }
        let holds = ["U+", "U-", "U+U-"].map(|o| li1_check(&frames, o).ok());
        println!("{criterion} same value in every frame (U+, U-, U+U-): {holds:?}");
        verdicts.insert(criterion, holds.to_vec());
    }
    Ok(verdicts)
}

fn main() {
    run_example().expect("example runs");
}
