//! Versioned JSON scenario files and the reports produced by running them.
//!
//! A scenario file is one flat JSON object carrying `version` (always 1),
//! `kind` and the fields of that kind's body. Unknown fields are rejected.
//!
//! ```
//! use hardylab::scenario::{run_hardy, ScenarioFile};
//!
//! let file = ScenarioFile::from_json(
//!     r#"{"version": 1, "kind": "hardy", "stage": "after_both", "outcome": ["d+d-"]}"#,
//! )
//! .unwrap();
//! let ScenarioFile::Hardy(s) = file else { unreachable!() };
//! let report = run_hardy(&s, 1e-12).unwrap();
//! assert!((report.outcome.unwrap().probability - 1.0 / 16.0).abs() < 1e-12);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abl::{
    abl_probability, assign_elements, audit_product_rule, experiment_ensemble, NamedProjector,
    ProjectorFamily, RealityAssignment, SkippedPair, Violation,
};
use crate::causal::{
    hardy_assignment, hellwig_kraus_validity, li1_check, nonlocal_region, CausalRegion, Criterion,
    HardyGeometry, LorentzBoost, NonlocalKind, SpacetimeEvent,
};
use crate::error::{Error, Result};
use crate::hardy::{ConditionalLegs, Experiment, ExperimentStage, Observable, Setup};
use crate::prodrule::{
    case_derivation_trace, classify_on_projectors, enumerate_lattice_assignments,
    random_product_rule_trials, uniqueness_theorem_check, CaseReport, LatticeAssignment,
    ProductRuleFunction, TraceStep, TrialReport,
};
use crate::statespace::ModeLabel;

pub const SCENARIO_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Hardy,
    Abl,
    Causal,
    Prodrule,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Hardy => "hardy",
            ScenarioKind::Abl => "abl",
            ScenarioKind::Causal => "causal",
            ScenarioKind::Prodrule => "prodrule",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidScenario(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioFile {
    Hardy(HardyScenario),
    Abl(AblScenario),
    Causal(CausalScenario),
    Prodrule(ProdruleScenario),
}

fn invalid(e: impl fmt::Display) -> Error {
    Error::InvalidScenario(e.to_string())
}

impl ScenarioFile {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            ScenarioFile::Hardy(_) => ScenarioKind::Hardy,
            ScenarioFile::Abl(_) => ScenarioKind::Abl,
            ScenarioFile::Causal(_) => ScenarioKind::Causal,
            ScenarioFile::Prodrule(_) => ScenarioKind::Prodrule,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(invalid)?;
        let serde_json::Value::Object(mut map) = value else {
            return Err(invalid("expected a JSON object"));
        };
        match map.remove("version") {
            Some(v) if v.as_u64() == Some(SCENARIO_VERSION) => {}
            Some(v) => return Err(invalid(format!("unsupported version {v}"))),
            None => return Err(invalid("missing `version`")),
        }
        let kind: ScenarioKind = match map.remove("kind") {
            Some(serde_json::Value::String(s)) => s.parse()?,
            Some(v) => return Err(invalid(format!("`kind` must be a string, got {v}"))),
            None => return Err(invalid("missing `kind`")),
        };
        let body = serde_json::Value::Object(map);
        let file = match kind {
            ScenarioKind::Hardy => {
                ScenarioFile::Hardy(serde_json::from_value(body).map_err(invalid)?)
            }
            ScenarioKind::Abl => ScenarioFile::Abl(serde_json::from_value(body).map_err(invalid)?),
            ScenarioKind::Causal => {
                ScenarioFile::Causal(serde_json::from_value(body).map_err(invalid)?)
            }
            ScenarioKind::Prodrule => {
                ScenarioFile::Prodrule(serde_json::from_value(body).map_err(invalid)?)
            }
        };
        Ok(file)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let body = match self {
            ScenarioFile::Hardy(s) => serde_json::to_value(s),
            ScenarioFile::Abl(s) => serde_json::to_value(s),
            ScenarioFile::Causal(s) => serde_json::to_value(s),
            ScenarioFile::Prodrule(s) => serde_json::to_value(s),
        }
        .expect("scenario bodies serialize");
        let serde_json::Value::Object(mut map) = body else {
            unreachable!("scenario bodies are structs")
        };
        map.insert("version".into(), SCENARIO_VERSION.into());
        map.insert("kind".into(), self.kind().name().into());
        serde_json::Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("scenario serializes")
    }
}

fn yes() -> bool {
    true
}

fn final_stage() -> ExperimentStage {
    ExperimentStage::AfterBoth
}

/// State and outcome probabilities at one stage of the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyScenario {
    #[serde(default = "yes")]
    pub bs2_plus_present: bool,
    #[serde(default = "yes")]
    pub bs2_minus_present: bool,
    #[serde(default = "final_stage")]
    pub stage: ExperimentStage,
    /// Labels whose total probability is reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<BTreeSet<ModeLabel>>,
    /// When present, the outcome probability is conditioned on these labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<BTreeSet<ModeLabel>>,
}

impl Default for HardyScenario {
    fn default() -> Self {
        HardyScenario {
            bs2_plus_present: true,
            bs2_minus_present: true,
            stage: ExperimentStage::AfterBoth,
            outcome: None,
            condition: None,
        }
    }
}

impl HardyScenario {
    pub fn setup(&self) -> Setup {
        Setup {
            bs2_plus_present: self.bs2_plus_present,
            bs2_minus_present: self.bs2_minus_present,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeEntry {
    pub label: ModeLabel,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityEntry {
    pub label: ModeLabel,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub labels: BTreeSet<ModeLabel>,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<BTreeSet<ModeLabel>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legs: Option<ConditionalLegs>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyReport {
    pub stage: ExperimentStage,
    /// Basis labels whose amplitude exceeds the tolerance in magnitude.
    pub amplitudes: Vec<AmplitudeEntry>,
    pub probabilities: Vec<ProbabilityEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<OutcomeReport>,
}

pub fn run_hardy(s: &HardyScenario, tolerance: f64) -> Result<HardyReport> {
    let experiment = Experiment::new(s.setup());
    let state = experiment.evolve_to(s.stage).state;
    let amplitudes = state
        .iter()
        .filter(|(_, a)| a.norm() > tolerance)
        .map(|(l, a)| AmplitudeEntry {
            label: l.clone(),
            re: a.re,
            im: a.im,
        })
        .collect();
    let probabilities = experiment
        .label_probabilities(s.stage)
        .into_iter()
        .filter(|(_, p)| *p > tolerance * tolerance)
        .map(|(label, probability)| ProbabilityEntry { label, probability })
        .collect();

    let outcome = match &s.outcome {
        None => None,
        Some(labels) => {
            let target = experiment.projector(s.stage, &Observable::Labels(labels.clone()))?;
            let (probability, legs) = match &s.condition {
                None => (experiment.outcome_probability(s.stage, &target)?, None),
                Some(cond) => {
                    let condition =
                        experiment.projector(s.stage, &Observable::Labels(cond.clone()))?;
                    let legs = experiment.conditional_legs(s.stage, &target, &condition)?;
                    (legs.value(), Some(legs))
                }
            };
            Some(OutcomeReport {
                labels: labels.clone(),
                probability,
                condition: s.condition.clone(),
                legs,
            })
        }
    };
    Ok(HardyReport {
        stage: s.stage,
        amplitudes,
        probabilities,
        outcome,
    })
}

fn after_p() -> ExperimentStage {
    ExperimentStage::AfterP
}

fn both_detectors() -> ModeLabel {
    "d+d-".parse().expect("label")
}

fn hardy_triple() -> Vec<Observable> {
    vec![
        Observable::u_plus(),
        Observable::u_minus(),
        Observable::u_plus_u_minus(),
    ]
}

/// Pre-selection at `pre_stage`, post-selection on one final label, and
/// intermediate observables evaluated by the ABL rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AblScenario {
    #[serde(default = "yes")]
    pub bs2_plus_present: bool,
    #[serde(default = "yes")]
    pub bs2_minus_present: bool,
    #[serde(default = "after_p")]
    pub pre_stage: ExperimentStage,
    #[serde(default = "both_detectors")]
    pub post_outcome: ModeLabel,
    #[serde(default = "hardy_triple")]
    pub observables: Vec<Observable>,
    /// Treat ABL certainties of unperformed measurements as elements of
    /// reality and audit the product rule on them.
    #[serde(default)]
    pub counterfactual: bool,
}

impl Default for AblScenario {
    fn default() -> Self {
        AblScenario {
            bs2_plus_present: true,
            bs2_minus_present: true,
            pre_stage: after_p(),
            post_outcome: both_detectors(),
            observables: hardy_triple(),
            counterfactual: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableProbability {
    pub observable: Observable,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblReport {
    pub pre_stage: ExperimentStage,
    pub post_outcome: ModeLabel,
    pub counterfactual: bool,
    /// ABL probability that each observable yields 1.
    pub probabilities: Vec<ObservableProbability>,
    /// Only with `counterfactual`.
    pub assignment: Option<RealityAssignment>,
    /// Only with `counterfactual`.
    pub violations: Option<Vec<Violation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<Vec<SkippedPair>>,
}

pub fn run_abl(s: &AblScenario) -> Result<AblReport> {
    let experiment = Experiment::new(Setup {
        bs2_plus_present: s.bs2_plus_present,
        bs2_minus_present: s.bs2_minus_present,
    });
    let ensemble = experiment_ensemble(&experiment, s.pre_stage, &s.post_outcome)?;
    let named = s
        .observables
        .iter()
        .map(|o| {
            Ok(NamedProjector::new(
                o.name(),
                experiment.projector(s.pre_stage, o)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let probabilities = s
        .observables
        .iter()
        .zip(&named)
        .map(|(o, np)| {
            Ok(ObservableProbability {
                observable: o.clone(),
                probability: abl_probability(
                    &ensemble,
                    &ProjectorFamily::binary(&np.projector),
                    0,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (assignment, violations, skipped) = if s.counterfactual {
        let assignment = assign_elements(&ensemble, &named)?;
        let mut pairs = Vec::new();
        for (i, a) in s.observables.iter().enumerate() {
            for (j, b) in s.observables.iter().enumerate().skip(i + 1) {
                if s.observables.contains(&a.times(b)) {
                    pairs.push((named[i].clone(), named[j].clone()));
                }
            }
        }
        let audit = audit_product_rule(&assignment, &pairs)?;
        (
            Some(assignment),
            Some(audit.violations),
            Some(audit.skipped),
        )
    } else {
        (None, None, None)
    };
    Ok(AblReport {
        pre_stage: s.pre_stage,
        post_outcome: s.post_outcome.clone(),
        counterfactual: s.counterfactual,
        probabilities,
        assignment,
        violations,
        skipped,
    })
}

/// Two separated particles checked non-destructively at `t = −epsilon`
/// (positions `±separation`), then the left one measured at
/// `(collapse_time, −separation)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AharonovAlbert {
    pub separation: f64,
    pub epsilon: f64,
    pub collapse_time: f64,
}

impl AharonovAlbert {
    pub fn check_events(&self) -> Result<[SpacetimeEvent; 2]> {
        Ok([
            SpacetimeEvent::try_new(-self.epsilon, -self.separation)?.labeled("check-left"),
            SpacetimeEvent::try_new(-self.epsilon, self.separation)?.labeled("check-right"),
        ])
    }

    pub fn collapse_event(&self) -> Result<SpacetimeEvent> {
        Ok(SpacetimeEvent::try_new(self.collapse_time, -self.separation)?.labeled("collapse"))
    }

    /// Where the checked two-particle state stays valid when the local
    /// checks and the later measurement collapse along backward cones.
    pub fn validity_region(&self) -> Result<CausalRegion> {
        Ok(hellwig_kraus_validity(
            &self.check_events()?,
            &[self.collapse_event()?],
        ))
    }
}

fn default_boosts() -> Vec<f64> {
    vec![-0.6, 0.0, 0.6]
}

fn union_kind() -> NonlocalKind {
    NonlocalKind::Union
}

/// Geometry of the two interferometers, observed from several frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausalScenario {
    /// Event coordinates in the rest frame. The box positions along the
    /// `u` arms are a modeling choice.
    #[serde(default)]
    pub geometry: HardyGeometry,
    /// Boost velocities of the observing frames.
    #[serde(default = "default_boosts")]
    pub boosts: Vec<f64>,
    /// Which combination of the boxes' forward-cone exteriors is probed.
    #[serde(default = "union_kind")]
    pub region: NonlocalKind,
    /// Rest-frame events to test; defaults to the two detectors.
    #[serde(default)]
    pub queries: Vec<SpacetimeEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aharonov_albert: Option<AharonovAlbert>,
}

impl Default for CausalScenario {
    fn default() -> Self {
        CausalScenario {
            geometry: HardyGeometry::default(),
            boosts: default_boosts(),
            region: union_kind(),
            queries: Vec::new(),
            aharonov_albert: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub event: SpacetimeEvent,
    pub region: NonlocalKind,
    pub inside: bool,
    /// Boxes whose forward light cone the event is on or outside of.
    pub outside_forward_cone_of: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedEvent {
    pub name: String,
    pub t: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameOrdering {
    pub beta: f64,
    /// Events sorted by boosted time.
    pub events: Vec<NamedEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErVerdict {
    pub beta: f64,
    pub criterion: Criterion,
    pub assignment: RealityAssignment,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Li1Verdict {
    pub criterion: Criterion,
    pub observable: String,
    /// `None` when some frame attributes no value.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityEntry {
    pub event: SpacetimeEvent,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalReport {
    pub memberships: Vec<Membership>,
    pub orderings: Vec<FrameOrdering>,
    pub er_verdicts: Vec<ErVerdict>,
    pub li1: Vec<Li1Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aharonov_albert: Option<Vec<ValidityEntry>>,
}

pub fn run_causal(s: &CausalScenario) -> Result<CausalReport> {
    let g = &s.geometry;
    g.validate()?;
    let frames = s
        .boosts
        .iter()
        .map(|&b| LorentzBoost::new(b))
        .collect::<Result<Vec<_>>>()?;
    let queries = if s.queries.is_empty() {
        vec![g.d_plus.clone(), g.d_minus.clone()]
    } else {
        s.queries.clone()
    };

    let region = nonlocal_region(s.region, &g.boxes())?;
    let boxes = [("U+box", &g.u_plus_box), ("U-box", &g.u_minus_box)];
    let memberships = queries
        .iter()
        .map(|q| Membership {
            event: q.clone(),
            region: s.region,
            inside: region.contains(q),
            outside_forward_cone_of: boxes
                .iter()
                .filter(|(_, b)| CausalRegion::forward_exterior((*b).clone()).contains(q))
                .map(|(n, _)| n.to_string())
                .collect(),
        })
        .collect();

    let orderings = frames
        .iter()
        .map(|f| FrameOrdering {
            beta: f.beta(),
            events: g
                .ordering(f)
                .into_iter()
                .map(|(name, e)| NamedEvent {
                    name: name.to_string(),
                    t: e.t,
                    x: e.x,
                })
                .collect(),
        })
        .collect();

    let experiment = Experiment::default();
    let mut er_verdicts = Vec::new();
    let mut per_criterion: BTreeMap<Criterion, BTreeMap<String, RealityAssignment>> =
        BTreeMap::new();
    for criterion in Criterion::ALL {
        for f in &frames {
            let assignment = hardy_assignment(&experiment, g, criterion, Some(f), s.region)?;
            per_criterion
                .entry(criterion)
                .or_default()
                .insert(format!("beta={}", f.beta()), assignment.clone());
            er_verdicts.push(ErVerdict {
                beta: f.beta(),
                criterion,
                assignment,
            });
        }
    }

    let mut li1 = Vec::new();
    for (criterion, frames) in &per_criterion {
        for observable in ["U+", "U-", "U+U-"] {
            li1.push(Li1Verdict {
                criterion: *criterion,
                observable: observable.to_string(),
                holds: li1_check(frames, observable).ok(),
            });
        }
    }

    let aharonov_albert = match &s.aharonov_albert {
        None => None,
        Some(aa) => {
            let valid = aa.validity_region()?;
            let mut events: Vec<SpacetimeEvent> = aa.check_events()?.to_vec();
            if !s.queries.is_empty() {
                events.extend(s.queries.iter().cloned());
            }
            Some(
                events
                    .into_iter()
                    .map(|e| ValidityEntry {
                        valid: valid.contains(&e),
                        event: e,
                    })
                    .collect(),
            )
        }
    };

    Ok(CausalReport {
        memberships,
        orderings,
        er_verdicts,
        li1,
        aharonov_albert,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProdruleAction {
    Enumerate,
    Uniqueness,
    Check,
    Classify,
    Trace,
}

fn default_trials() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProdruleScenario {
    pub action: ProdruleAction,
    /// Dimension for `enumerate` and `uniqueness`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Function for `check`, `classify` and `trace`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<ProductRuleFunction>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ProdruleScenario {
    pub fn new(action: ProdruleAction) -> Self {
        ProdruleScenario {
            action,
            n: None,
            function: None,
            trials: default_trials(),
            seed: 0,
        }
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| {
            Error::InvalidScenario(format!("`{:?}` needs `n`", self.action).to_lowercase())
        })
    }

    fn function(&self) -> Result<&ProductRuleFunction> {
        self.function.as_ref().ok_or_else(|| {
            Error::InvalidScenario(format!("`{:?}` needs `function`", self.action).to_lowercase())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub assignments: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub function: ProductRuleFunction,
    #[serde(flatten)]
    pub trials: TrialReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub function: ProductRuleFunction,
    #[serde(flatten)]
    pub report: CaseReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub function: ProductRuleFunction,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ProdruleReport {
    Enumerate(Vec<LatticeAssignment>),
    Uniqueness(UniquenessReport),
    Check(CheckReport),
    Classify(ClassifyReport),
    Trace(TraceReport),
}

pub fn run_prodrule(s: &ProdruleScenario, tolerance: f64) -> Result<ProdruleReport> {
    let report = match s.action {
        ProdruleAction::Enumerate => {
            ProdruleReport::Enumerate(enumerate_lattice_assignments(s.n()?)?)
        }
        ProdruleAction::Uniqueness => {
            let n = s.n()?;
            ProdruleReport::Uniqueness(UniquenessReport {
                n,
                assignments: enumerate_lattice_assignments(n)?.len(),
                holds: uniqueness_theorem_check(n)?,
            })
        }
        ProdruleAction::Check => {
            let function = s.function()?.clone();
            let trials = random_product_rule_trials(&function, s.trials, s.seed, tolerance)?;
            ProdruleReport::Check(CheckReport {
                function,
                passed: trials.passed(),
                trials,
            })
        }
        ProdruleAction::Classify => {
            let function = s.function()?.clone();
            ProdruleReport::Classify(ClassifyReport {
                report: classify_on_projectors(&function)?,
                function,
            })
        }
        ProdruleAction::Trace => {
            let function = s.function()?.clone();
            ProdruleReport::Trace(TraceReport {
                steps: case_derivation_trace(&function)?,
                function,
            })
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_and_kind_are_checked() {
        assert!(ScenarioFile::from_json(r#"{"version":2,"kind":"hardy"}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"kind":"hardy"}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"version":1,"kind":"optics"}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"version":1,"kind":"hardy","colour":"red"}"#).is_err());
        assert!(ScenarioFile::from_json("[]").is_err());
        let f = ScenarioFile::from_json(r#"{"version":1,"kind":"hardy"}"#).unwrap();
        assert_eq!(f, ScenarioFile::Hardy(HardyScenario::default()));
    }

    #[test]
    fn scenario_round_trips() {
        let files = [
            ScenarioFile::Hardy(HardyScenario {
                outcome: Some(["u-".parse().unwrap()].into()),
                condition: Some(["d+".parse().unwrap()].into()),
                stage: ExperimentStage::AfterBs2Plus,
                ..HardyScenario::default()
            }),
            ScenarioFile::Abl(AblScenario {
                counterfactual: true,
                ..AblScenario::default()
            }),
            ScenarioFile::Causal(CausalScenario {
                queries: vec![SpacetimeEvent::new(1.0, 0.0)],
                aharonov_albert: Some(AharonovAlbert {
                    separation: 1.0,
                    epsilon: 0.1,
                    collapse_time: 1.0,
                }),
                ..CausalScenario::default()
            }),
            ScenarioFile::Prodrule(ProdruleScenario {
                function: Some(ProductRuleFunction::case2(3, 1, 2.0, true).unwrap()),
                ..ProdruleScenario::new(ProdruleAction::Check)
            }),
        ];
        for f in files {
            assert_eq!(ScenarioFile::from_json(&f.to_json()).unwrap(), f);
        }
    }

    #[test]
    fn hardy_conditional_outcome() {
        let s = HardyScenario {
            stage: ExperimentStage::AfterBs2Plus,
            outcome: Some(["c+u-".parse().unwrap(), "d+u-".parse().unwrap()].into()),
            condition: Some(["d+u-".parse().unwrap(), "d+v-".parse().unwrap()].into()),
            ..HardyScenario::default()
        };
        let r = run_hardy(&s, 1e-12).unwrap();
        let o = r.outcome.unwrap();
        assert!((o.probability - 1.0).abs() < 1e-12);
        let legs = o.legs.unwrap();
        assert!((legs.joint - 0.125).abs() < 1e-12 && (legs.condition - 0.125).abs() < 1e-12);
    }

    #[test]
    fn abl_needs_counterfactual_flag_for_assignment() {
        let r = run_abl(&AblScenario::default()).unwrap();
        assert!(r.assignment.is_none() && r.violations.is_none());
        let p: Vec<f64> = r.probabilities.iter().map(|p| p.probability).collect();
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12 && p[2].abs() < 1e-12);

        let r = run_abl(&AblScenario {
            counterfactual: true,
            ..AblScenario::default()
        })
        .unwrap();
        assert_eq!(r.violations.unwrap().len(), 1);
    }

    #[test]
    fn causal_defaults() {
        let r = run_causal(&CausalScenario::default()).unwrap();
        assert!(r.memberships.iter().all(|m| m.inside));
        let plus = r.orderings.iter().find(|o| o.beta == 0.6).unwrap();
        let pos = |n: &str| plus.events.iter().position(|e| e.name == n).unwrap();
        assert!(pos("BS2+") < pos("BS2-"));
        let aa = run_causal(&CausalScenario {
            aharonov_albert: Some(AharonovAlbert {
                separation: 1.0,
                epsilon: 0.1,
                collapse_time: 1.0,
            }),
            ..CausalScenario::default()
        })
        .unwrap()
        .aharonov_albert
        .unwrap();
        let valid: Vec<bool> = aa.iter().map(|v| v.valid).collect();
        assert_eq!(valid, [false, true]);
    }

    #[test]
    fn prodrule_needs_inputs() {
        assert!(run_prodrule(&ProdruleScenario::new(ProdruleAction::Enumerate), 1e-9).is_err());
        assert!(run_prodrule(&ProdruleScenario::new(ProdruleAction::Check), 1e-9).is_err());
        let s = ProdruleScenario {
            n: Some(3),
            ..ProdruleScenario::new(ProdruleAction::Enumerate)
        };
        let ProdruleReport::Enumerate(list) = run_prodrule(&s, 1e-9).unwrap() else {
            panic!()
        };
        assert_eq!(list.len(), 9);
    }
}
