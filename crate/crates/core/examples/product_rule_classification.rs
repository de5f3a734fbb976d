//! Members of the product-rule families: how they look on rank-one
//! projectors, the identities that pin the single-index case down, and
//! seeded random product-rule trials.

use hardylab::prodrule::{
    case_derivation_trace, classify_on_projectors, random_product_rule_trials, Factor,
    ProductRuleFunction, PRODUCT_RULE_TOLERANCE,
};

pub fn run_example() -> hardylab::Result<usize> {
    let functions = [
        ProductRuleFunction::const1(4)?,
        ProductRuleFunction::case2(4, 2, 1.5, false)?,
        ProductRuleFunction::case2(4, 3, 1.0 / 3.0, true)?,
        ProductRuleFunction::case3(
            4,
            vec![
                Factor {
                    index: 1,
                    alpha: 2.0,
                    signed: false,
                },
                Factor {
                    index: 4,
                    alpha: 0.5,
                    signed: true,
                },
            ],
        )?,
        ProductRuleFunction::const0(4)?,
    ];
    let mut failures = 0;
    for f in &functions {
        let json = serde_json::to_string(f).expect("function serializes");
        let case = classify_on_projectors(f)?;
        let trials = random_product_rule_trials(f, 1000, 7, PRODUCT_RULE_TOLERANCE)?;
        println!(
            "{json}\n  {:?}, singletons at 1: {:?}, minimal: {:?}\n  {} trials, max residual {:e}",
            case.case,
            case.unit_singletons,
            case.minimal_unit_projectors,
            trials.trials,
            trials.max_residual
        );
        failures += trials.failures;
    }

    for step in case_derivation_trace(&functions[1])?.iter().take(4) {
        println!("  {}  ({} = {})", step.identity, step.lhs, step.rhs);
    }
    Ok(failures)
}

fn main() {
    run_example().expect("example runs");
}
