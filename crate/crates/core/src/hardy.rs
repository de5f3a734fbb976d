//! Stage-by-stage simulation of Hardy's two-interferometer experiment.
//!
//! A positron (`+`) and an electron (`-`) each cross a Mach-Zehnder
//! interferometer. The first beam splitters send `s±` into the paths `u±`
//! and `v±`; where the two `u` paths overlap the pair annihilates into `γ`;
//! the second beam splitters recombine `u±`, `v±` into the detector modes
//! `c±`, `d±`. Detection at `D±` is the projector onto `d±`.
//!
//! Free evolution between optical elements is trivial and all mirror phases
//! are taken as 1, so every stage is reached by composing discrete maps.
//! The two intermediate snapshots ([`ExperimentStage::AfterBs2Minus`] and
//! [`ExperimentStage::AfterBs2Plus`]) are what moving frames in which one
//! particle reaches its second splitter first would see.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statespace::{
    parse_modes, project, Basis, LinearMap, Mode, ModeLabel, Particle, Path, Projector, StateVector,
};

/// Conditioning events with probability at or below this are rejected.
pub const MIN_CONDITION_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentStage {
    /// `|s+⟩|s-⟩`.
    Initial,
    /// Past both first splitters and the overlap point.
    AfterP,
    /// Electron has crossed its second splitter, positron has not.
    AfterBs2Minus,
    /// Positron has crossed its second splitter, electron has not.
    AfterBs2Plus,
    /// Both particles have crossed their second splitters.
    AfterBoth,
}

impl ExperimentStage {
    pub const ALL: [ExperimentStage; 5] = [
        ExperimentStage::Initial,
        ExperimentStage::AfterP,
        ExperimentStage::AfterBs2Minus,
        ExperimentStage::AfterBs2Plus,
        ExperimentStage::AfterBoth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentStage::Initial => "initial",
            ExperimentStage::AfterP => "after_p",
            ExperimentStage::AfterBs2Minus => "after_bs2_minus",
            ExperimentStage::AfterBs2Plus => "after_bs2_plus",
            ExperimentStage::AfterBoth => "after_both",
        }
    }

    /// Immediate predecessors in the stage DAG.
    pub fn parents(self) -> &'static [ExperimentStage] {
        use ExperimentStage::*;
        match self {
            Initial => &[],
            AfterP => &[Initial],
            AfterBs2Minus | AfterBs2Plus => &[AfterP],
            AfterBoth => &[AfterBs2Minus, AfterBs2Plus],
        }
    }

    /// `true` if `later` is reachable from `self` (or equal to it).
    pub fn precedes(self, later: ExperimentStage) -> bool {
        self == later || later.parents().iter().any(|&p| self.precedes(p))
    }
}

impl fmt::Display for ExperimentStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentStage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let stage = match key.as_str() {
            "initial" => ExperimentStage::Initial,
            "afterp" => ExperimentStage::AfterP,
            "afterbs2minus" | "fminus" => ExperimentStage::AfterBs2Minus,
            "afterbs2plus" | "fplus" => ExperimentStage::AfterBs2Plus,
            "afterboth" | "final" => ExperimentStage::AfterBoth,
            _ => return Err(Error::UnknownStage(s.to_string())),
        };
        Ok(stage)
    }
}

/// Which second beam splitters are in place. An absent splitter passes
/// `u`/`v` straight through to its detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Setup {
    #[serde(default = "present")]
    pub bs2_plus_present: bool,
    #[serde(default = "present")]
    pub bs2_minus_present: bool,
}

fn present() -> bool {
    true
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            bs2_plus_present: true,
            bs2_minus_present: true,
        }
    }
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arm(particle: Particle, paths: &[Path]) -> Basis {
    Basis::paths(particle, paths).expect("distinct paths")
}

/// `|s⟩ → (i|u⟩ + |v⟩)/√2`.
fn first_splitter(particle: Particle) -> LinearMap {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    LinearMap::from_action(
        arm(particle, &[Path::S]),
        arm(particle, &[Path::U, Path::V]),
        |_| {
            vec![
                (ModeLabel::single(Mode::new(Path::U, particle)), cx(0.0, r)),
                (ModeLabel::single(Mode::new(Path::V, particle)), cx(r, 0.0)),
            ]
        },
    )
    .expect("first splitter")
}

/// `|u⟩ → (|c⟩ + i|d⟩)/√2`, `|v⟩ → (i|c⟩ + |d⟩)/√2`; identity when absent.
fn second_splitter(particle: Particle, present: bool) -> LinearMap {
    let uv = arm(particle, &[Path::U, Path::V]);
    if !present {
        return LinearMap::identity(uv);
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = ModeLabel::single(Mode::new(Path::C, particle));
    let d = ModeLabel::single(Mode::new(Path::D, particle));
    LinearMap::from_action(uv, arm(particle, &[Path::C, Path::D]), |label| match label
        .path_of(particle)
    {
        Some(Path::U) => vec![(c.clone(), cx(r, 0.0)), (d.clone(), cx(0.0, r))],
        _ => vec![(c.clone(), cx(0.0, r)), (d.clone(), cx(r, 0.0))],
    })
    .expect("second splitter")
}

fn idle(particle: Particle) -> LinearMap {
    LinearMap::identity(arm(particle, &[Path::U, Path::V]))
}

/// Every map of the experiment; each is an isometry on its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct StageMaps {
    /// `BS1+ ⊗ BS1-`: `{s+s-}` → `{u,v}⊗{u,v}`.
    pub bs1: LinearMap,
    /// `u+u- → γ`, identity on the other three products.
    pub annihilation: LinearMap,
    pub bs2_minus: LinearMap,
    pub bs2_plus: LinearMap,
    pub bs2_both: LinearMap,
    /// BS2+ applied to the after-BS2- snapshot.
    pub bs2_plus_after_minus: LinearMap,
    /// BS2- applied to the after-BS2+ snapshot.
    pub bs2_minus_after_plus: LinearMap,
}

impl StageMaps {
    pub fn build(setup: Setup) -> Self {
        let gamma = [ModeLabel::Gamma];
        let with_gamma = |m: LinearMap| m.with_passthrough(&gamma).expect("γ is a fresh label");
        let bs2p = second_splitter(Particle::Positron, setup.bs2_plus_present);
        let bs2m = second_splitter(Particle::Electron, setup.bs2_minus_present);

        let bs1 = first_splitter(Particle::Positron)
            .tensor(&first_splitter(Particle::Electron))
            .expect("bs1 tensor");

        let uv_pairs = bs1.codomain().clone();
        let after_p = uv_pairs.extended(gamma.clone()).expect("after-P basis");
        let uu = ModeLabel::pair(Path::U, Path::U);
        let annihilation = LinearMap::from_action(uv_pairs, after_p, |label| {
            let image = if *label == uu {
                ModeLabel::Gamma
            } else {
                label.clone()
            };
            vec![(image, cx(1.0, 0.0))]
        })
        .expect("annihilation");

        let tensor = |a: &LinearMap, b: &LinearMap| with_gamma(a.tensor(b).expect("bs2 tensor"));
        StageMaps {
            bs1,
            annihilation,
            bs2_minus: tensor(&idle(Particle::Positron), &bs2m),
            bs2_plus: tensor(&bs2p, &idle(Particle::Electron)),
            bs2_both: tensor(&bs2p, &bs2m),
            bs2_plus_after_minus: tensor(&bs2p, &LinearMap::identity(bs2m.codomain().clone())),
            bs2_minus_after_plus: tensor(&LinearMap::identity(bs2p.codomain().clone()), &bs2m),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &LinearMap)> {
        [
            ("bs1", &self.bs1),
            ("annihilation", &self.annihilation),
            ("bs2_minus", &self.bs2_minus),
            ("bs2_plus", &self.bs2_plus),
            ("bs2_both", &self.bs2_both),
            ("bs2_plus_after_minus", &self.bs2_plus_after_minus),
            ("bs2_minus_after_plus", &self.bs2_minus_after_plus),
        ]
        .into_iter()
    }
}

/// The stage maps for the standard setup (both second splitters present).
pub fn build_stage_maps() -> StageMaps {
    StageMaps::build(Setup::default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardyState {
    pub stage: ExperimentStage,
    pub state: StateVector,
}

/// An observable of the experiment that can be realized as a diagonal
/// projector on any stage basis where it makes sense.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    /// Product of path projectors, written `U+`, `D-`, `U+U-`, ...
    Paths(Vec<Mode>),
    /// Projector onto an explicit set of basis labels.
    Labels(BTreeSet<ModeLabel>),
}

impl Observable {
    pub fn path(path: Path, particle: Particle) -> Self {
        Observable::Paths(vec![Mode::new(path, particle)])
    }

    pub fn u_plus() -> Self {
        Observable::path(Path::U, Particle::Positron)
    }

    pub fn u_minus() -> Self {
        Observable::path(Path::U, Particle::Electron)
    }

    /// `U+U-`.
    pub fn u_plus_u_minus() -> Self {
        Observable::u_plus().times(&Observable::u_minus())
    }

    pub fn d_plus() -> Self {
        Observable::path(Path::D, Particle::Positron)
    }

    pub fn d_minus() -> Self {
        Observable::path(Path::D, Particle::Electron)
    }

    pub fn labels<I: IntoIterator<Item = ModeLabel>>(labels: I) -> Self {
        Observable::Labels(labels.into_iter().collect())
    }

    /// Product observable; path products concatenate, label sets intersect.
    pub fn times(&self, other: &Observable) -> Observable {
        match (self, other) {
            (Observable::Paths(a), Observable::Paths(b)) => {
                let mut modes = a.clone();
                modes.extend(b.iter().copied().filter(|m| !a.contains(m)));
                Observable::Paths(modes)
            }
            (Observable::Labels(a), Observable::Labels(b)) => {
                Observable::Labels(a.intersection(b).cloned().collect())
            }
            (Observable::Paths(modes), Observable::Labels(set))
            | (Observable::Labels(set), Observable::Paths(modes)) => Observable::Labels(
                set.iter()
                    .filter(|l| modes.iter().all(|&m| l.contains(m)))
                    .cloned()
                    .collect(),
            ),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Realizes the observable on `basis`. A path factor that no basis
    /// label carries, or a label outside the basis, makes it illegal there.
    pub fn projector(&self, basis: &Basis, stage: &str) -> Result<Projector> {
        let illegal = |reason: String| Error::IllegalProjector {
            stage: stage.to_string(),
            reason,
        };
        match self {
            Observable::Paths(modes) => {
                for &m in modes {
                    if !basis.labels().iter().any(|l| l.contains(m)) {
                        return Err(illegal(format!("mode {m} is not present")));
                    }
                }
                Ok(Projector::from_predicate(basis.clone(), |l| {
                    modes.iter().all(|&m| l.contains(m))
                }))
            }
            Observable::Labels(set) => {
                if let Some(missing) = set.iter().find(|l| !basis.contains(l)) {
                    return Err(illegal(format!("label {missing} is not in the basis")));
                }
                Projector::onto_labels(basis.clone(), set.iter())
            }
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Paths(modes) => {
                for m in modes {
                    write!(
                        f,
                        "{}{}",
                        m.path.letter().to_ascii_uppercase(),
                        m.particle.sign()
                    )?;
                }
                Ok(())
            }
            Observable::Labels(set) => {
                let names: Vec<String> = set.iter().map(|l| l.to_string()).collect();
                write!(f, "{{{}}}", names.join(","))
            }
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// `U+`, `D-`, `U+U-` (upper-case path letters) name path observables;
    /// anything else is a comma-separated label set such as `d+d-,c+c-`
    /// or `gamma`, optionally wrapped in braces.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidObservable(s.to_string());
        if s.starts_with(|c: char| c.is_ascii_uppercase()) && !s.eq_ignore_ascii_case("gamma") {
            let modes = parse_modes(s).ok_or_else(bad)?;
            return Ok(Observable::Paths(modes));
        }
        let inner = s.trim_start_matches('{').trim_end_matches('}');
        let labels = inner
            .split(',')
            .map(|part| part.parse::<ModeLabel>())
            .collect::<Result<BTreeSet<_>>>()
            .map_err(|_| bad())?;
        Ok(Observable::Labels(labels))
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The two numbers behind a conditional probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalLegs {
    /// `P(target and condition)`.
    pub joint: f64,
    /// `P(condition)`.
    pub condition: f64,
}

impl ConditionalLegs {
    pub fn value(&self) -> f64 {
        (self.joint / self.condition).clamp(0.0, 1.0)
    }
}

/// The experiment for one [`Setup`], with its maps and the state at every
/// stage computed once.
#[derive(Debug, Clone)]
pub struct Experiment {
    setup: Setup,
    maps: StageMaps,
    states: [StateVector; 5],
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment::new(Setup::default())
    }
}

impl Experiment {
    pub fn new(setup: Setup) -> Self {
        let maps = StageMaps::build(setup);
        let initial = StateVector::basis_state(
            maps.bs1.domain().clone(),
            &ModeLabel::pair(Path::S, Path::S),
        )
        .expect("initial label");
        let after_bs1 = maps.bs1.apply(&initial).expect("bs1 domain");
        let after_p = maps
            .annihilation
            .apply(&after_bs1)
            .expect("annihilation domain");
        let minus = maps.bs2_minus.apply(&after_p).expect("bs2- domain");
        let plus = maps.bs2_plus.apply(&after_p).expect("bs2+ domain");
        let both = maps.bs2_both.apply(&after_p).expect("bs2 domain");
        Experiment {
            setup,
            maps,
            states: [initial, after_p, minus, plus, both],
        }
    }

    pub fn setup(&self) -> Setup {
        self.setup
    }

    pub fn maps(&self) -> &StageMaps {
        &self.maps
    }

    fn state(&self, stage: ExperimentStage) -> &StateVector {
        let k = ExperimentStage::ALL
            .iter()
            .position(|&s| s == stage)
            .expect("stage");
        &self.states[k]
    }

    pub fn basis(&self, stage: ExperimentStage) -> &Basis {
        self.state(stage).basis()
    }

    pub fn evolve_to(&self, stage: ExperimentStage) -> HardyState {
        HardyState {
            stage,
            state: self.state(stage).clone(),
        }
    }

    /// Maps carrying a state at `from` to `to`, in application order.
    pub fn maps_between(
        &self,
        from: ExperimentStage,
        to: ExperimentStage,
    ) -> Result<Vec<&LinearMap>> {
        use ExperimentStage::*;
        let m = &self.maps;
        let maps = match (from, to) {
            _ if from == to => vec![],
            (Initial, AfterP) => vec![&m.bs1, &m.annihilation],
            (AfterP, AfterBs2Minus) => vec![&m.bs2_minus],
            (AfterP, AfterBs2Plus) => vec![&m.bs2_plus],
            (AfterP, AfterBoth) => vec![&m.bs2_both],
            (AfterBs2Minus, AfterBoth) => vec![&m.bs2_plus_after_minus],
            (AfterBs2Plus, AfterBoth) => vec![&m.bs2_minus_after_plus],
            (Initial, later) => {
                let mut maps = self.maps_between(Initial, AfterP)?;
                maps.extend(self.maps_between(AfterP, later)?);
                maps
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "stage {to} is not reachable from {from}"
                )))
            }
        };
        Ok(maps)
    }

    pub fn projector(&self, stage: ExperimentStage, observable: &Observable) -> Result<Projector> {
        observable.projector(self.basis(stage), stage.name())
    }

    fn check_legal(&self, stage: ExperimentStage, p: &Projector) -> Result<()> {
        if p.basis() == self.basis(stage) {
            Ok(())
        } else {
            Err(Error::IllegalProjector {
                stage: stage.name().to_string(),
                reason: format!("projector basis [{}] differs from stage basis", p.basis()),
            })
        }
    }

    pub fn outcome_probability(&self, stage: ExperimentStage, outcome: &Projector) -> Result<f64> {
        self.check_legal(stage, outcome)?;
        Ok(project(outcome, self.state(stage))?.1)
    }

    pub fn observable_probability(
        &self,
        stage: ExperimentStage,
        observable: &Observable,
    ) -> Result<f64> {
        self.outcome_probability(stage, &self.projector(stage, observable)?)
    }

    /// Born probability of every basis label at `stage`.
    pub fn label_probabilities(&self, stage: ExperimentStage) -> Vec<(ModeLabel, f64)> {
        let state = self.state(stage);
        let n2 = state.norm_sqr();
        state
            .iter()
            .map(|(l, a)| (l.clone(), a.norm_sqr() / n2))
            .collect()
    }

    /// Both legs of `P(target | condition)`, computed from the stage state
    /// without any projection postulate.
    pub fn conditional_legs(
        &self,
        stage: ExperimentStage,
        target: &Projector,
        condition: &Projector,
    ) -> Result<ConditionalLegs> {
        self.check_legal(stage, target)?;
        self.check_legal(stage, condition)?;
        let joint_projector = target.product(condition)?;
        let condition_p = self.outcome_probability(stage, condition)?;
        if condition_p <= MIN_CONDITION_PROBABILITY {
            return Err(Error::ZeroProbabilityCondition);
        }
        let joint = self.outcome_probability(stage, &joint_projector)?;
        Ok(ConditionalLegs {
            joint,
            condition: condition_p,
        })
    }

    pub fn conditional_probability(
        &self,
        stage: ExperimentStage,
        target: &Projector,
        condition: &Projector,
    ) -> Result<f64> {
        Ok(self.conditional_legs(stage, target, condition)?.value())
    }
}

/// State of the standard experiment at `stage`.
pub fn evolve_to(stage: ExperimentStage) -> HardyState {
    Experiment::default().evolve_to(stage)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> ModeLabel {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12
    }

    #[test]
    fn annihilation_map_sends_uu_to_gamma() {
        let maps = build_stage_maps();
        let uu =
            StateVector::basis_state(maps.annihilation.domain().clone(), &label("u+u-")).unwrap();
        let out = maps.annihilation.apply(&uu).unwrap();
        assert_eq!(out.amplitude(&ModeLabel::Gamma), Some(cx(1.0, 0.0)));
        assert_eq!(out.norm_sqr(), 1.0);

        let vv =
            StateVector::basis_state(maps.annihilation.domain().clone(), &label("v+v-")).unwrap();
        let out = maps.annihilation.apply(&vv).unwrap();
        assert_eq!(out.amplitude(&label("v+v-")), Some(cx(1.0, 0.0)));
        assert_eq!(out.amplitude(&ModeLabel::Gamma), Some(cx(0.0, 0.0)));
    }

    #[test]
    fn second_splitters_on_vv() {
        // (i c+ + d+)(i c- + d-)/2 expanded by hand.
        let maps = build_stage_maps();
        let vv = StateVector::basis_state(maps.bs2_both.domain().clone(), &label("v+v-")).unwrap();
        let out = maps.bs2_both.apply(&vv).unwrap();
        assert!(close(out.amplitude(&label("c+c-")).unwrap(), cx(-0.5, 0.0)));
        assert!(close(out.amplitude(&label("c+d-")).unwrap(), cx(0.0, 0.5)));
        assert!(close(out.amplitude(&label("d+c-")).unwrap(), cx(0.0, 0.5)));
        assert!(close(out.amplitude(&label("d+d-")).unwrap(), cx(0.5, 0.0)));
    }

    #[test]
    fn single_splitter_actions() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bs1 = first_splitter(Particle::Positron);
        let s = StateVector::basis_state(bs1.domain().clone(), &label("s+")).unwrap();
        let out = bs1.apply(&s).unwrap();
        assert!(close(out.amplitude(&label("u+")).unwrap(), cx(0.0, r)));
        assert!(close(out.amplitude(&label("v+")).unwrap(), cx(r, 0.0)));

        let bs2 = second_splitter(Particle::Electron, true);
        let u = StateVector::basis_state(bs2.domain().clone(), &label("u-")).unwrap();
        let out = bs2.apply(&u).unwrap();
        assert!(close(out.amplitude(&label("c-")).unwrap(), cx(r, 0.0)));
        assert!(close(out.amplitude(&label("d-")).unwrap(), cx(0.0, r)));
    }

    #[test]
    fn every_map_is_isometric() {
        for setup in [
            Setup::default(),
            Setup {
                bs2_plus_present: false,
                bs2_minus_present: true,
            },
            Setup {
                bs2_plus_present: false,
                bs2_minus_present: false,
            },
        ] {
            for (name, m) in StageMaps::build(setup).iter() {
                assert!(m.is_isometry(1e-12), "{name}: {}", m.isometry_defect());
            }
        }
    }

    #[test]
    fn stage_dag() {
        use ExperimentStage::*;
        assert!(Initial.precedes(AfterBoth));
        assert!(AfterBs2Minus.precedes(AfterBoth));
        assert!(!AfterBs2Minus.precedes(AfterBs2Plus));
        assert!(!AfterBoth.precedes(AfterP));
        let exp = Experiment::default();
        assert!(exp.maps_between(AfterBs2Plus, AfterBs2Minus).is_err());
        assert_eq!(exp.maps_between(Initial, AfterBoth).unwrap().len(), 3);
    }

    #[test]
    fn stage_names_parse() {
        for stage in ExperimentStage::ALL {
            assert_eq!(stage.name().parse::<ExperimentStage>().unwrap(), stage);
        }
        assert_eq!(
            "AfterBS2Plus".parse::<ExperimentStage>().unwrap(),
            ExperimentStage::AfterBs2Plus
        );
        assert!("later".parse::<ExperimentStage>().is_err());
    }

    #[test]
    fn no_detector_modes_before_second_splitters() {
        let exp = Experiment::default();
        let after_p = exp.basis(ExperimentStage::AfterP);
        assert!(after_p
            .labels()
            .iter()
            .all(|l| l.path_of(Particle::Positron) != Some(Path::D)));
        let err = exp
            .projector(ExperimentStage::AfterP, &Observable::d_plus())
            .unwrap_err();
        assert!(matches!(err, Error::IllegalProjector { .. }));
        let foreign = Projector::identity(exp.basis(ExperimentStage::AfterBoth).clone());
        assert!(exp
            .outcome_probability(ExperimentStage::AfterP, &foreign)
            .is_err());
    }

    #[test]
    fn zero_probability_condition_is_an_error() {
        let exp = Experiment::default();
        let stage = ExperimentStage::AfterP;
        let uu = exp.projector(stage, &Observable::u_plus_u_minus()).unwrap();
        let u = exp.projector(stage, &Observable::u_plus()).unwrap();
        assert_eq!(
            exp.conditional_probability(stage, &u, &uu),
            Err(Error::ZeroProbabilityCondition)
        );
    }

    #[test]
    fn observable_parsing() {
        assert_eq!(
            "U+U-".parse::<Observable>().unwrap(),
            Observable::u_plus_u_minus()
        );
        assert_eq!("D+".parse::<Observable>().unwrap(), Observable::d_plus());
        assert_eq!(
            "d+d-,c+c-".parse::<Observable>().unwrap(),
            Observable::labels([label("c+c-"), label("d+d-")])
        );
        assert_eq!(
            "gamma".parse::<Observable>().unwrap(),
            Observable::labels([ModeLabel::Gamma])
        );
        assert!("Q+".parse::<Observable>().is_err());
        assert_eq!(Observable::u_plus_u_minus().to_string(), "U+U-");
    }

    #[test]
    fn removed_splitter_leaves_paths_unchanged() {
        let exp = Experiment::new(Setup {
            bs2_plus_present: false,
            bs2_minus_present: true,
        });
        let after_p = exp.evolve_to(ExperimentStage::AfterP).state;
        let plus = exp.evolve_to(ExperimentStage::AfterBs2Plus).state;
        assert_eq!(after_p, plus);
        let both = exp.evolve_to(ExperimentStage::AfterBoth).state;
        assert!(both.basis().contains(&label("u+c-")));
        assert!(both.is_normalized(1e-12));
    }
}
