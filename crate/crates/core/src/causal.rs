//! Minkowski geometry in one space and one time dimension (units with
//! `c = 1`): events, boosts, light-cone regions, and the geometric gates of
//! the three element-of-reality criteria.
//!
//! Cone boundaries belong to whichever side a region names: the forward
//! interior is "on or inside", the forward exterior "on or outside", and so
//! on, each with a [`LIGHTLIKE_BAND`] tolerance in its own favour.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abl::{
    abl_probability, hardy_ensemble, hardy_observables, ProjectorFamily, RealityAssignment,
    ASSIGNMENT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::hardy::{Experiment, ExperimentStage, Observable};

/// Width of the band around `Δs² = 0` (and around cone boundaries) treated
/// as lightlike.
pub const LIGHTLIKE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SpacetimeEvent {
    /// # Panics
    /// If either coordinate is not finite.
    pub fn new(t: f64, x: f64) -> Self {
        Self::try_new(t, x).expect("finite event coordinates")
    }

    pub fn try_new(t: f64, x: f64) -> Result<Self> {
        if !t.is_finite() || !x.is_finite() {
            return Err(Error::NonFinite("event coordinates"));
        }
        Ok(SpacetimeEvent { t, x, label: None })
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite()
    }
}

impl fmt::Display for SpacetimeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "{label}")?;
        }
        write!(f, "(t={}, x={})", self.t, self.x)
    }
}

impl FromStr for SpacetimeEvent {
    type Err = Error;

    /// Parses `t,x`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected `t,x`, got `{s}`"));
        let (t, x) = s.split_once(',').ok_or_else(bad)?;
        let t: f64 = t.trim().parse().map_err(|_| bad())?;
        let x: f64 = x.trim().parse().map_err(|_| bad())?;
        SpacetimeEvent::try_new(t, x)
    }
}

/// Boost along `x` with velocity `beta` (in units of `c`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzBoost {
    beta: f64,
}

impl LorentzBoost {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta.abs() >= 1.0 {
            return Err(Error::InvalidBoost(beta));
        }
        Ok(LorentzBoost { beta })
    }

    pub fn identity() -> Self {
        LorentzBoost { beta: 0.0 }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }

    pub fn inverse(&self) -> Self {
        LorentzBoost { beta: -self.beta }
    }

    /// The single boost equal to applying `self` and then `next`.
    pub fn then(&self, next: &LorentzBoost) -> Self {
        let (a, b) = (self.beta, next.beta);
        LorentzBoost {
            beta: (a + b) / (1.0 + a * b),
        }
    }

    /// `t' = γ(t − βx)`, `x' = γ(x − βt)`.
    pub fn apply(&self, e: &SpacetimeEvent) -> SpacetimeEvent {
        let g = self.gamma();
        SpacetimeEvent {
            t: g * (e.t - self.beta * e.x),
            x: g * (e.x - self.beta * e.t),
            label: e.label.clone(),
        }
    }
}

impl<'de> Deserialize<'de> for LorentzBoost {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            beta: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        LorentzBoost::new(raw.beta).map_err(serde::de::Error::custom)
    }
}

pub fn boost(b: &LorentzBoost, e: &SpacetimeEvent) -> SpacetimeEvent {
    b.apply(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalClass {
    Timelike,
    Lightlike,
    Spacelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    /// `−Δt² + Δx²`.
    pub value: f64,
    pub class: IntervalClass,
}

pub fn interval(a: &SpacetimeEvent, b: &SpacetimeEvent) -> Interval {
    let (dt, dx) = (b.t - a.t, b.x - a.x);
    let value = -dt * dt + dx * dx;
    let class = if value.abs() <= LIGHTLIKE_BAND {
        IntervalClass::Lightlike
    } else if value < 0.0 {
        IntervalClass::Timelike
    } else {
        IntervalClass::Spacelike
    };
    Interval { value, class }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// On or inside the cone.
    Inside,
    /// On or outside the cone.
    Outside,
}

/// Region of spacetime given as an expression over light cones.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalRegion {
    Everything,
    Nothing,
    Cone {
        apex: SpacetimeEvent,
        cone: Cone,
        side: Side,
    },
    Union(Vec<CausalRegion>),
    Intersection(Vec<CausalRegion>),
    Complement(Box<CausalRegion>),
}

impl CausalRegion {
    pub fn forward_interior(apex: SpacetimeEvent) -> Self {
        CausalRegion::Cone {
            apex,
            cone: Cone::Forward,
            side: Side::Inside,
        }
    }

    pub fn forward_exterior(apex: SpacetimeEvent) -> Self {
        CausalRegion::Cone {
            apex,
            cone: Cone::Forward,
            side: Side::Outside,
        }
    }

    pub fn backward_interior(apex: SpacetimeEvent) -> Self {
        CausalRegion::Cone {
            apex,
            cone: Cone::Backward,
            side: Side::Inside,
        }
    }

    pub fn backward_exterior(apex: SpacetimeEvent) -> Self {
        CausalRegion::Cone {
            apex,
            cone: Cone::Backward,
            side: Side::Outside,
        }
    }

    pub fn complement(self) -> Self {
        CausalRegion::Complement(Box::new(self))
    }

    pub fn contains(&self, e: &SpacetimeEvent) -> bool {
        match self {
            CausalRegion::Everything => true,
            CausalRegion::Nothing => false,
            CausalRegion::Cone { apex, cone, side } => {
                // Time elapsed towards the cone's opening minus the spatial
                // separation: ≥ 0 inside, ≤ 0 outside.
                let dt = match cone {
                    Cone::Forward => e.t - apex.t,
                    Cone::Backward => apex.t - e.t,
                };
                let margin = dt - (e.x - apex.x).abs();
                match side {
                    Side::Inside => margin >= -LIGHTLIKE_BAND,
                    Side::Outside => margin <= LIGHTLIKE_BAND,
                }
            }
            CausalRegion::Union(parts) => parts.iter().any(|r| r.contains(e)),
            CausalRegion::Intersection(parts) => parts.iter().all(|r| r.contains(e)),
            CausalRegion::Complement(inner) => !inner.contains(e),
        }
    }

    /// The same region described in the boosted frame (apexes boosted).
    pub fn boosted(&self, b: &LorentzBoost) -> Self {
        match self {
            CausalRegion::Everything | CausalRegion::Nothing => self.clone(),
            CausalRegion::Cone { apex, cone, side } => CausalRegion::Cone {
                apex: b.apply(apex),
                cone: *cone,
                side: *side,
            },
            CausalRegion::Union(parts) => {
                CausalRegion::Union(parts.iter().map(|r| r.boosted(b)).collect())
            }
            CausalRegion::Intersection(parts) => {
                CausalRegion::Intersection(parts.iter().map(|r| r.boosted(b)).collect())
            }
            CausalRegion::Complement(inner) => CausalRegion::Complement(Box::new(inner.boosted(b))),
        }
    }
}

pub fn region_membership(r: &CausalRegion, e: &SpacetimeEvent) -> bool {
    r.contains(e)
}

/// How the forward-cone exteriors of several measurement events combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlocalKind {
    /// `𝒰`: outside at least one forward cone.
    Union,
    /// `ℐ`: outside every forward cone.
    Intersection,
}

impl fmt::Display for NonlocalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonlocalKind::Union => "union",
            NonlocalKind::Intersection => "intersection",
        })
    }
}

impl FromStr for NonlocalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "union" | "u" => Ok(NonlocalKind::Union),
            "intersection" | "i" => Ok(NonlocalKind::Intersection),
            _ => Err(Error::InvalidParameter(format!(
                "unknown region kind `{s}`"
            ))),
        }
    }
}

pub fn nonlocal_region(kind: NonlocalKind, apexes: &[SpacetimeEvent]) -> Result<CausalRegion> {
    if apexes.is_empty() {
        return Err(Error::EmptyApexes);
    }
    let parts = apexes
        .iter()
        .cloned()
        .map(CausalRegion::forward_exterior)
        .collect();
    Ok(match kind {
        NonlocalKind::Union => CausalRegion::Union(parts),
        NonlocalKind::Intersection => CausalRegion::Intersection(parts),
    })
}

/// Where a pre-collapse state stays attributed when collapses happen on the
/// backward light cones of `collapses`: inside the causal future of the
/// preparation events and outside every collapse's backward cone. An empty
/// preparation list leaves the future unconstrained.
pub fn hellwig_kraus_validity(
    preparation: &[SpacetimeEvent],
    collapses: &[SpacetimeEvent],
) -> CausalRegion {
    let future = if preparation.is_empty() {
        CausalRegion::Everything
    } else {
        CausalRegion::Union(
            preparation
                .iter()
                .cloned()
                .map(CausalRegion::forward_interior)
                .collect(),
        )
    };
    if collapses.is_empty() {
        return future;
    }
    let collapsed = CausalRegion::Union(
        collapses
            .iter()
            .cloned()
            .map(CausalRegion::backward_interior)
            .collect(),
    );
    CausalRegion::Intersection(vec![future, collapsed.complement()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Criterion {
    /// Prediction from an earlier constant-time slice of one frame.
    #[serde(rename = "ER1")]
    Er1,
    /// Inference from on or inside the backward light cone.
    #[serde(rename = "ER2")]
    Er2,
    /// Inference from on or outside the forward light cone.
    #[serde(rename = "ER3")]
    Er3,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Er1, Criterion::Er2, Criterion::Er3];
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Er1 => "ER1",
            Criterion::Er2 => "ER2",
            Criterion::Er3 => "ER3",
        })
    }
}

/// Geometric gate of a criterion: does every information event lie where
/// the criterion allows relative to `target`? The quantum certainty
/// condition is checked separately.
///
/// ER2 and ER3 are frame-free; when a frame is supplied they are evaluated
/// on boosted coordinates, which gives the same verdict.
pub fn er_criterion(
    kind: Criterion,
    info_events: &[SpacetimeEvent],
    target: &SpacetimeEvent,
    frame: Option<&LorentzBoost>,
) -> Result<bool> {
    let to_frame = |e: &SpacetimeEvent| frame.map_or_else(|| e.clone(), |b| b.apply(e));
    let target = to_frame(target);
    let verdict = match kind {
        Criterion::Er1 => {
            if frame.is_none() {
                return Err(Error::MissingFrame);
            }
            info_events
                .iter()
                .all(|e| to_frame(e).t < target.t - LIGHTLIKE_BAND)
        }
        Criterion::Er2 => {
            let region = CausalRegion::backward_interior(target);
            info_events.iter().all(|e| region.contains(&to_frame(e)))
        }
        Criterion::Er3 => {
            let region = CausalRegion::forward_exterior(target);
            info_events.iter().all(|e| region.contains(&to_frame(e)))
        }
    };
    Ok(verdict)
}

/// Named events of the two-interferometer layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyGeometry {
    pub u_plus_box: SpacetimeEvent,
    pub u_minus_box: SpacetimeEvent,
    pub bs2_plus: SpacetimeEvent,
    pub bs2_minus: SpacetimeEvent,
    pub d_plus: SpacetimeEvent,
    pub d_minus: SpacetimeEvent,
}

impl Default for HardyGeometry {
    /// Boxes at `(−1, ±1)`, second splitters at `(0, ±1)`, detectors at
    /// `(0.5, ±1.5)`. Where the boxes sit along the `u` arms is a modeling
    /// choice.
    fn default() -> Self {
        HardyGeometry {
            u_plus_box: SpacetimeEvent::new(-1.0, 1.0).labeled("U+box"),
            u_minus_box: SpacetimeEvent::new(-1.0, -1.0).labeled("U-box"),
            bs2_plus: SpacetimeEvent::new(0.0, 1.0).labeled("BS2+"),
            bs2_minus: SpacetimeEvent::new(0.0, -1.0).labeled("BS2-"),
            d_plus: SpacetimeEvent::new(0.5, 1.5).labeled("D+"),
            d_minus: SpacetimeEvent::new(0.5, -1.5).labeled("D-"),
        }
    }
}

impl HardyGeometry {
    pub fn events(&self) -> [(&'static str, &SpacetimeEvent); 6] {
        [
            ("U+box", &self.u_plus_box),
            ("U-box", &self.u_minus_box),
            ("BS2+", &self.bs2_plus),
            ("BS2-", &self.bs2_minus),
            ("D+", &self.d_plus),
            ("D-", &self.d_minus),
        ]
    }

    /// Both particles must reach their second splitters simultaneously in
    /// the rest frame.
    pub fn validate(&self) -> Result<()> {
        if let Some((name, _)) = self.events().into_iter().find(|(_, e)| !e.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "event {name} is not finite"
            )));
        }
        if (self.bs2_plus.t - self.bs2_minus.t).abs() > LIGHTLIKE_BAND {
            return Err(Error::InvalidParameter(
                "BS2+ and BS2- must be simultaneous in the rest frame".into(),
            ));
        }
        Ok(())
    }

    pub fn boxes(&self) -> [SpacetimeEvent; 2] {
        [self.u_plus_box.clone(), self.u_minus_box.clone()]
    }

    /// Events sorted by time in the boosted frame (ties by name).
    pub fn ordering(&self, frame: &LorentzBoost) -> Vec<(&'static str, SpacetimeEvent)> {
        let mut events: Vec<(&'static str, SpacetimeEvent)> = self
            .events()
            .into_iter()
            .map(|(n, e)| (n, frame.apply(e)))
            .collect();
        events.sort_by(|a, b| a.1.t.total_cmp(&b.1.t).then(a.0.cmp(b.0)));
        events
    }
}

/// Elements of reality for `U+`, `U-` and `U+U-` in a run with clicks at
/// both `D+` and `D-`, under one criterion and (for ER1) one frame.
///
/// A value is attributed when the detector information passes the
/// criterion's geometric gate and determines the outcome with probability
/// one. For ER1 the `U∓` measurement is placed just before `BS2∓`, the
/// latest moment it can occur; for ER2 and ER3 it sits at the `U∓` box. The
/// joint observable `U+U-` is gated by the `joint` combination of the two
/// boxes' cones under ER3 and gets its value from the counterfactual ABL
/// rule.
pub fn hardy_assignment(
    experiment: &Experiment,
    geometry: &HardyGeometry,
    kind: Criterion,
    frame: Option<&LorentzBoost>,
    joint: NonlocalKind,
) -> Result<RealityAssignment> {
    let mut assignment = RealityAssignment::new();
    let local = [
        (
            Observable::u_minus(),
            Observable::d_plus(),
            ExperimentStage::AfterBs2Plus,
            &geometry.bs2_minus,
            &geometry.u_minus_box,
            &geometry.d_plus,
        ),
        (
            Observable::u_plus(),
            Observable::d_minus(),
            ExperimentStage::AfterBs2Minus,
            &geometry.bs2_plus,
            &geometry.u_plus_box,
            &geometry.d_minus,
        ),
    ];
    for (observable, detector, stage, slice_target, box_target, click) in local {
        let target = if kind == Criterion::Er1 {
            slice_target
        } else {
            box_target
        };
        if !er_criterion(kind, std::slice::from_ref(click), target, frame)? {
            continue;
        }
        let certainty = experiment.conditional_probability(
            stage,
            &experiment.projector(stage, &observable)?,
            &experiment.projector(stage, &detector)?,
        )?;
        if (certainty - 1.0).abs() <= ASSIGNMENT_TOLERANCE {
            assignment.insert(observable.name(), 1.0);
        }
    }

    let clicks = [geometry.d_plus.clone(), geometry.d_minus.clone()];
    let joint_gate = match kind {
        Criterion::Er3 => {
            let region = nonlocal_region(joint, &geometry.boxes())?;
            clicks.iter().all(|e| region.contains(e))
        }
        Criterion::Er1 => {
            er_criterion(kind, &clicks, &geometry.bs2_plus, frame)?
                && er_criterion(kind, &clicks, &geometry.bs2_minus, frame)?
        }
        Criterion::Er2 => {
            er_criterion(kind, &clicks, &geometry.u_plus_box, frame)?
                && er_criterion(kind, &clicks, &geometry.u_minus_box, frame)?
        }
    };
    if joint_gate {
        let ensemble = hardy_ensemble(experiment)?;
        let [_, _, uu] = hardy_observables(experiment, ExperimentStage::AfterP)?;
        let p = abl_probability(&ensemble, &ProjectorFamily::binary(&uu.projector), 0)?;
        if p.abs() <= ASSIGNMENT_TOLERANCE {
            assignment.insert(uu.name, 0.0);
        } else if (p - 1.0).abs() <= ASSIGNMENT_TOLERANCE {
            assignment.insert(uu.name, 1.0);
        }
    }
    Ok(assignment)
}

/// LI1: the value attributed to `observable` is the same in every frame.
/// A frame without a value for it is an error.
pub fn li1_check(
    assignments_per_frame: &BTreeMap<String, RealityAssignment>,
    observable: &str,
) -> Result<bool> {
    let mut values = Vec::with_capacity(assignments_per_frame.len());
    for (frame, assignment) in assignments_per_frame {
        let v = assignment
            .get(observable)
            .ok_or_else(|| Error::MissingObservable {
                frame: frame.clone(),
                observable: observable.to_string(),
            })?;
        values.push(v);
    }
    Ok(values.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(t: f64, x: f64) -> SpacetimeEvent {
        SpacetimeEvent::new(t, x)
    }

    #[test]
    fn identity_boost() {
        let b = LorentzBoost::new(0.0).unwrap();
        assert_eq!(b.apply(&ev(2.0, 3.0)), ev(2.0, 3.0));
    }

    #[test]
    fn boost_orders_second_splitters() {
        let g = HardyGeometry::default();
        let plus_frame = LorentzBoost::new(0.6).unwrap();
        assert!((plus_frame.gamma() - 1.25).abs() < 1e-15);
        let m = plus_frame.apply(&g.bs2_minus);
        let p = plus_frame.apply(&g.bs2_plus);
        assert!((m.t - 0.75).abs() < 1e-12 && (m.x + 1.25).abs() < 1e-12);
        assert!((p.t + 0.75).abs() < 1e-12 && (p.x - 1.25).abs() < 1e-12);

        let minus_frame = LorentzBoost::new(-0.6).unwrap();
        assert!(minus_frame.apply(&g.bs2_minus).t < minus_frame.apply(&g.bs2_plus).t);
    }

    #[test]
    fn superluminal_boost_rejected() {
        for beta in [1.0, -1.0, 1.5, f64::NAN] {
            assert!(LorentzBoost::new(beta).is_err());
        }
    }

    #[test]
    fn interval_classes() {
        let o = ev(0.0, 0.0);
        assert_eq!(
            interval(&o, &o),
            Interval {
                value: 0.0,
                class: IntervalClass::Lightlike
            }
        );
        assert_eq!(
            interval(&o, &ev(1.0, 0.0)),
            Interval {
                value: -1.0,
                class: IntervalClass::Timelike
            }
        );
        assert_eq!(
            interval(&o, &ev(0.0, 1.0)),
            Interval {
                value: 1.0,
                class: IntervalClass::Spacelike
            }
        );
    }

    #[test]
    fn apex_is_in_its_own_cones() {
        let e = ev(0.3, -0.7);
        for r in [
            CausalRegion::forward_interior(e.clone()),
            CausalRegion::forward_exterior(e.clone()),
            CausalRegion::backward_interior(e.clone()),
        ] {
            assert!(r.contains(&e));
        }
    }

    #[test]
    fn detector_outside_opposite_box_cone() {
        let g = HardyGeometry::default();
        assert!(CausalRegion::forward_exterior(g.u_plus_box.clone()).contains(&g.d_minus));
        assert!(CausalRegion::forward_exterior(g.u_minus_box.clone()).contains(&g.d_plus));
        assert!(!CausalRegion::forward_exterior(g.u_plus_box.clone()).contains(&g.d_plus));
    }

    #[test]
    fn union_and_intersection_of_box_cones() {
        let g = HardyGeometry::default();
        let u = nonlocal_region(NonlocalKind::Union, &g.boxes()).unwrap();
        let i = nonlocal_region(NonlocalKind::Intersection, &g.boxes()).unwrap();
        for d in [&g.d_plus, &g.d_minus] {
            assert!(u.contains(d));
            assert!(!i.contains(d));
        }
        let single = nonlocal_region(NonlocalKind::Intersection, &g.boxes()[..1]).unwrap();
        let probe = ev(-3.0, 0.2);
        assert_eq!(
            single.contains(&probe),
            CausalRegion::forward_exterior(g.u_plus_box.clone()).contains(&probe)
        );
        assert_eq!(
            nonlocal_region(NonlocalKind::Union, &[]),
            Err(Error::EmptyApexes)
        );
    }

    #[test]
    fn criteria_gates() {
        let g = HardyGeometry::default();
        let info = [g.d_minus.clone()];
        assert!(er_criterion(Criterion::Er3, &info, &g.u_plus_box, None).unwrap());
        assert!(!er_criterion(Criterion::Er2, &info, &g.u_plus_box, None).unwrap());
        assert_eq!(
            er_criterion(Criterion::Er1, &info, &g.u_plus_box, None),
            Err(Error::MissingFrame)
        );

        let click = [g.d_plus.clone()];
        let fplus = LorentzBoost::new(0.6).unwrap();
        let fminus = LorentzBoost::new(-0.6).unwrap();
        assert!(er_criterion(Criterion::Er1, &click, &g.bs2_minus, Some(&fplus)).unwrap());
        assert!(!er_criterion(Criterion::Er1, &click, &g.bs2_minus, Some(&fminus)).unwrap());
    }

    #[test]
    fn er2_accepts_the_causal_past() {
        let target = ev(2.0, 0.0);
        assert!(
            er_criterion(Criterion::Er2, &[ev(0.0, 0.5), ev(1.0, 1.0)], &target, None).unwrap()
        );
        assert!(er_criterion(Criterion::Er2, &[], &target, None).unwrap());
    }

    #[test]
    fn hellwig_kraus_regions() {
        let prep = [ev(-5.0, 0.0)];
        let free = hellwig_kraus_validity(&prep, &[]);
        assert!(free.contains(&ev(0.0, 1.0)));
        assert!(!free.contains(&ev(-6.0, 0.0)));

        let m = ev(1.0, 0.0);
        let r = hellwig_kraus_validity(&prep, std::slice::from_ref(&m));
        assert!(!r.contains(&m));
        assert!(r.contains(&ev(1.0, 3.0)));
    }

    #[test]
    fn aharonov_albert_check_point_keeps_singlet() {
        let (l, eps) = (1.0, 0.1);
        let checks = [ev(-eps, -l), ev(-eps, l)];
        let valid_at =
            |t0: f64| hellwig_kraus_validity(&checks, &[ev(t0, -l)]).contains(&checks[1]);
        assert!(valid_at(1.0)); // t0 + ε < 2L
        assert!(!valid_at(2.5));
    }

    #[test]
    fn li1_errors_on_missing_frame() {
        let mut frames = BTreeMap::new();
        let mut a = RealityAssignment::new();
        a.insert("U-", 1.0);
        frames.insert("F+".to_string(), a);
        assert!(li1_check(&frames, "U-").unwrap());
        frames.insert("F-".to_string(), RealityAssignment::new());
        assert!(matches!(
            li1_check(&frames, "U-"),
            Err(Error::MissingObservable { .. })
        ));
    }

    #[test]
    fn geometry_requires_simultaneous_splitters() {
        let mut g = HardyGeometry::default();
        assert!(g.validate().is_ok());
        g.bs2_plus.t = 0.1;
        assert!(g.validate().is_err());
    }

    #[test]
    fn query_parsing() {
        let e: SpacetimeEvent = "0.5, -1.5".parse().unwrap();
        assert_eq!(e, ev(0.5, -1.5));
        assert!("0.5".parse::<SpacetimeEvent>().is_err());
    }
}
