#![allow(dead_code)]

use hardylab::hardy::ExperimentStage;
use hardylab::statespace::{ModeLabel, StateVector};
use num_complex::Complex64;

pub const TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn label(s: &str) -> ModeLabel {
    s.parse().expect("label")
}

/// Hand-derived amplitudes of every stage with both second splitters in
/// place. Labels not listed have amplitude 0.
pub fn closed_form(stage: ExperimentStage) -> Vec<(&'static str, Complex64)> {
    let r = 1.0 / (2.0 * 2f64.sqrt());
    match stage {
        ExperimentStage::Initial => vec![("s+s-", c(1.0, 0.0))],
        ExperimentStage::AfterP => vec![
            ("gamma", c(-0.5, 0.0)),
            ("u+v-", c(0.0, 0.5)),
            ("v+u-", c(0.0, 0.5)),
            ("v+v-", c(0.5, 0.0)),
        ],
        ExperimentStage::AfterBs2Minus => vec![
            ("gamma", c(-0.5, 0.0)),
            ("u+c-", c(-r, 0.0)),
            ("v+c-", c(0.0, 2.0 * r)),
            ("u+d-", c(0.0, r)),
        ],
        ExperimentStage::AfterBs2Plus => vec![
            ("gamma", c(-0.5, 0.0)),
            ("c+u-", c(-r, 0.0)),
            ("c+v-", c(0.0, 2.0 * r)),
            ("d+u-", c(0.0, r)),
        ],
        ExperimentStage::AfterBoth => vec![
            ("gamma", c(-0.5, 0.0)),
            ("c+c-", c(-0.75, 0.0)),
            ("c+d-", c(0.0, 0.25)),
            ("d+c-", c(0.0, 0.25)),
            ("d+d-", c(-0.25, 0.0)),
        ],
    }
}

/// Largest componentwise deviation of `state` from the closed form, or
/// `None` if a closed-form label is missing from the state's basis.
pub fn deviation_from_closed_form(stage: ExperimentStage, state: &StateVector) -> Option<f64> {
    let expected = closed_form(stage);
    let mut worst: f64 = 0.0;
    for (l, _) in &expected {
        state.amplitude(&label(l))?;
    }
    for (l, amp) in state.iter() {
        let want = expected
            .iter()
            .find(|(e, _)| label(e) == *l)
            .map_or(c(0.0, 0.0), |(_, a)| *a);
        worst = worst.max((amp - want).norm());
    }
    Some(worst)
}
