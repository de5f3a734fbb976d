//! Scenario files: build one in code, write it as JSON, read it back and
//! run it, exactly as `hardylab --scenario <path>` does.

use hardylab::cli::to_rounded_json;
use hardylab::scenario::{run_abl, run_causal, AblScenario, CausalScenario, ScenarioFile};

pub fn run_example() -> hardylab::Result<()> {
    let abl = ScenarioFile::Abl(AblScenario {
        counterfactual: true,
        ..AblScenario::default()
    });
    let text = abl.to_json();
    println!("{text}");
    if let ScenarioFile::Abl(s) = ScenarioFile::from_json(&text)? {
        print!("{}", to_rounded_json(&run_abl(&s)?));
    }

    let causal = CausalScenario {
        boosts: vec![0.6],
        ..CausalScenario::default()
    };
    let report = run_causal(&causal)?;
    let first = &report.orderings[0].events[0];
    println!(
        "earliest event for beta 0.6: {} at t = {}",
        first.name, first.t
    );
    Ok(())
}

fn main() {
    run_example().expect("example runs");
}
