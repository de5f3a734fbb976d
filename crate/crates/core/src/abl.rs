//! Aharonov-Bergmann-Lebowitz probabilities for pre- and post-selected
//! ensembles, element-of-reality assignment from them, and a product-rule
//! audit of the resulting assignment.
//!
//! All ensembles here are pure, so `Tr(P_ψ P_i P_φ P_i)` is evaluated as
//! `|⟨ψ|P_i|φ⟩|²` with `ψ` already evolved back to the intermediate time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{Experiment, ExperimentStage, Observable};
use crate::statespace::{LinearMap, ModeLabel, Projector, StateVector, STATE_TOLERANCE};

/// ABL denominators at or below this mean the post-selection cannot occur.
pub const MIN_ABL_DENOMINATOR: f64 = 1e-15;

/// How close to 0 or 1 a probability must be for a value to be assigned.
pub const ASSIGNMENT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PrePostEnsemble {
    pre: StateVector,
    post: StateVector,
}

impl PrePostEnsemble {
    /// `pre` is the preparation evolved forward to the intermediate time,
    /// `post` the final state evolved backward to it.
    pub fn new(pre: StateVector, post: StateVector) -> Result<Self> {
        pre.basis().ensure_same(post.basis())?;
        for s in [&pre, &post] {
            if !s.is_normalized(STATE_TOLERANCE) {
                return Err(Error::NotNormalized(s.norm_sqr()));
            }
        }
        Ok(PrePostEnsemble { pre, post })
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    /// `⟨ψ|P|φ⟩`.
    pub fn amplitude(&self, p: &Projector) -> Result<num_complex::Complex64> {
        p.sandwich(&self.post, &self.pre)
    }
}

/// Mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily {
    projectors: Vec<Projector>,
}

impl ProjectorFamily {
    pub fn new(projectors: Vec<Projector>) -> Result<Self> {
        let first = projectors
            .first()
            .ok_or_else(|| Error::InvalidFamily("empty family".into()))?;
        let basis = first.basis().clone();
        for p in &projectors {
            basis.ensure_same(p.basis())?;
        }
        for (i, a) in projectors.iter().enumerate() {
            for b in &projectors[i + 1..] {
                if a.overlap(b)? > STATE_TOLERANCE {
                    return Err(Error::InvalidFamily("projectors are not orthogonal".into()));
                }
            }
        }
        let n = basis.len();
        let mut sum = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
        for p in &projectors {
            for (s, x) in sum.iter_mut().zip(p.matrix()) {
                *s += x;
            }
        }
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                if (sum[r * n + c] - target).norm() > STATE_TOLERANCE {
                    return Err(Error::InvalidFamily(
                        "projectors do not sum to the identity".into(),
                    ));
                }
            }
        }
        Ok(ProjectorFamily { projectors })
    }

    /// `{P, 1 − P}`.
    pub fn binary(p: &Projector) -> Self {
        ProjectorFamily {
            projectors: vec![p.clone(), p.complement()],
        }
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }
}

/// ABL weight of every family member, normalized to sum to one.
pub fn abl_distribution(e: &PrePostEnsemble, family: &ProjectorFamily) -> Result<Vec<f64>> {
    let weights = family
        .projectors()
        .iter()
        .map(|p| e.amplitude(p).map(|a| a.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    if total <= MIN_ABL_DENOMINATOR {
        return Err(Error::PostSelectionIncompatible(total));
    }
    Ok(weights
        .into_iter()
        .map(|w| (w / total).clamp(0.0, 1.0))
        .collect())
}

/// `Prob(P_i → 1 | φ, ψ)`.
pub fn abl_probability(e: &PrePostEnsemble, family: &ProjectorFamily, i: usize) -> Result<f64> {
    if i >= family.len() {
        return Err(Error::InvalidParameter(format!(
            "family has {} members, index {i} requested",
            family.len()
        )));
    }
    Ok(abl_distribution(e, family)?[i])
}

/// Evolves a final state back through `maps` (given in forward order) by
/// applying their adjoints in reverse.
pub fn back_evolve(post: &StateVector, maps: &[&LinearMap]) -> Result<StateVector> {
    let mut state = post.clone();
    for m in maps.iter().rev() {
        let defect = m.isometry_defect();
        if defect > STATE_TOLERANCE {
            return Err(Error::NotIsometric(defect));
        }
        state = m.adjoint().apply(&state)?;
    }
    Ok(state)
}

/// Values `f(A)` attributed to named observables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealityAssignment {
    values: BTreeMap<String, f64>,
}

impl RealityAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, observable: impl Into<String>, value: f64) {
        self.values.insert(observable.into(), value);
    }

    pub fn get(&self, observable: &str) -> Option<f64> {
        self.values.get(observable).copied()
    }

    pub fn is_assigned(&self, observable: &str) -> bool {
        self.values.contains_key(observable)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, f64)> for RealityAssignment {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        RealityAssignment {
            values: iter.into_iter().collect(),
        }
    }
}

/// A projector with the name under which its element of reality is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProjector {
    pub name: String,
    pub projector: Projector,
}

impl NamedProjector {
    pub fn new(name: impl Into<String>, projector: Projector) -> Self {
        NamedProjector {
            name: name.into(),
            projector,
        }
    }

    /// The product `AB`, named by concatenation.
    pub fn times(&self, other: &NamedProjector) -> Result<NamedProjector> {
        Ok(NamedProjector {
            name: format!("{}{}", self.name, other.name),
            projector: self.projector.product(&other.projector)?,
        })
    }
}

/// Assigns `f(A) = 1` (or 0) to every observable whose ABL probability of
/// yielding 1 is 1 (or 0) within [`ASSIGNMENT_TOLERANCE`]; others stay
/// unassigned.
pub fn assign_elements(
    e: &PrePostEnsemble,
    observables: &[NamedProjector],
) -> Result<RealityAssignment> {
    let mut assignment = RealityAssignment::new();
    for obs in observables {
        let p = abl_probability(e, &ProjectorFamily::binary(&obs.projector), 0)?;
        if (p - 1.0).abs() <= ASSIGNMENT_TOLERANCE {
            assignment.insert(obs.name.clone(), 1.0);
        } else if p.abs() <= ASSIGNMENT_TOLERANCE {
            assignment.insert(obs.name.clone(), 0.0);
        }
    }
    Ok(assignment)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub a: String,
    pub b: String,
    pub product: String,
    pub f_a: f64,
    pub f_b: f64,
    pub f_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPair {
    pub a: String,
    pub b: String,
    /// Observables of the triple that carry no value.
    pub unassigned: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    pub skipped: Vec<SkippedPair>,
}

/// Reports every pair with `f(AB) ≠ f(A) f(B)`. Pairs with an unassigned
/// member are skipped and listed in the report.
pub fn audit_product_rule(
    a: &RealityAssignment,
    pairs: &[(NamedProjector, NamedProjector)],
) -> Result<AuditReport> {
    let mut report = AuditReport::default();
    for (x, y) in pairs {
        let product = x.times(y)?;
        let names = [&x.name, &y.name, &product.name];
        let unassigned: Vec<String> = names
            .iter()
            .filter(|n| !a.is_assigned(n))
            .map(|n| n.to_string())
            .collect();
        if !unassigned.is_empty() {
            report.skipped.push(SkippedPair {
                a: x.name.clone(),
                b: y.name.clone(),
                unassigned,
            });
            continue;
        }
        let (fa, fb, fab) = (
            a.get(&x.name).unwrap(),
            a.get(&y.name).unwrap(),
            a.get(&product.name).unwrap(),
        );
        if (fa * fb - fab).abs() > ASSIGNMENT_TOLERANCE {
            report.violations.push(Violation {
                a: x.name.clone(),
                b: y.name.clone(),
                product: product.name,
                f_a: fa,
                f_b: fb,
                f_product: fab,
            });
        }
    }
    Ok(report)
}

/// Ensemble pre-selected in the experiment's state at `intermediate` and
/// post-selected on the final label `post`, evolved back to `intermediate`.
pub fn experiment_ensemble(
    experiment: &Experiment,
    intermediate: ExperimentStage,
    post: &ModeLabel,
) -> Result<PrePostEnsemble> {
    let pre = experiment.evolve_to(intermediate).state;
    let final_basis = experiment.basis(ExperimentStage::AfterBoth).clone();
    let post_final = StateVector::basis_state(final_basis, post)?;
    let maps = experiment.maps_between(intermediate, ExperimentStage::AfterBoth)?;
    let post_back = back_evolve(&post_final, &maps)?;
    PrePostEnsemble::new(pre, post_back)
}

/// Pre-selection after P, post-selection on a click in both `D+` and `D-`.
pub fn hardy_ensemble(experiment: &Experiment) -> Result<PrePostEnsemble> {
    experiment_ensemble(
        experiment,
        ExperimentStage::AfterP,
        &ModeLabel::pair(crate::statespace::Path::D, crate::statespace::Path::D),
    )
}

/// `U+`, `U-` and `U+U-` realized at `stage`.
pub fn hardy_observables(
    experiment: &Experiment,
    stage: ExperimentStage,
) -> Result<[NamedProjector; 3]> {
    let named = |o: Observable| -> Result<NamedProjector> {
        Ok(NamedProjector::new(
            o.name(),
            experiment.projector(stage, &o)?,
        ))
    };
    Ok([
        named(Observable::u_plus())?,
        named(Observable::u_minus())?,
        named(Observable::u_plus_u_minus())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::Basis;
    use num_complex::Complex64;

    fn label(s: &str) -> ModeLabel {
        s.parse().unwrap()
    }

    #[test]
    fn eigenstate_ensemble_gives_membership() {
        let exp = Experiment::default();
        let basis = exp.basis(ExperimentStage::AfterP).clone();
        let uv = StateVector::basis_state(basis, &label("u+v-")).unwrap();
        let e = PrePostEnsemble::new(uv.clone(), uv).unwrap();
        let [u_plus, u_minus, _] = hardy_observables(&exp, ExperimentStage::AfterP).unwrap();
        assert_eq!(
            abl_probability(&e, &ProjectorFamily::binary(&u_plus.projector), 0).unwrap(),
            1.0
        );
        assert_eq!(
            abl_probability(&e, &ProjectorFamily::binary(&u_minus.projector), 0).unwrap(),
            0.0
        );
        let a = assign_elements(&e, &[u_plus]).unwrap();
        assert_eq!(a.get("U+"), Some(1.0));
    }

    #[test]
    fn orthogonal_pre_and_post_is_incompatible() {
        let basis = Basis::new(["u+", "v+"].map(label)).unwrap();
        let u = StateVector::basis_state(basis.clone(), &label("u+")).unwrap();
        let v = StateVector::basis_state(basis.clone(), &label("v+")).unwrap();
        let e = PrePostEnsemble::new(u, v).unwrap();
        let p = Projector::identity(basis);
        assert!(matches!(
            abl_probability(&e, &ProjectorFamily::new(vec![p]).unwrap(), 0),
            Err(Error::PostSelectionIncompatible(_))
        ));
    }

    #[test]
    fn family_validation() {
        let basis = Basis::new(["u+", "v+"].map(label)).unwrap();
        let u = Projector::onto_labels(basis.clone(), [&label("u+")]).unwrap();
        assert!(ProjectorFamily::new(vec![u.clone()]).is_err());
        assert!(ProjectorFamily::new(vec![u.clone(), u.clone()]).is_err());
        assert!(ProjectorFamily::new(vec![u.clone(), u.complement()]).is_ok());
        assert!(ProjectorFamily::new(vec![]).is_err());
    }

    #[test]
    fn unnormalized_states_rejected() {
        let basis = Basis::new(["u+", "v+"].map(label)).unwrap();
        let v = StateVector::new(basis.clone(), vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(
            PrePostEnsemble::new(v.clone(), v),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn back_evolve_rejects_non_isometry() {
        let basis = Basis::new(["u+", "v+"].map(label)).unwrap();
        let m = LinearMap::from_matrix(
            basis.clone(),
            basis.clone(),
            vec![Complex64::new(2.0, 0.0); 4],
        )
        .unwrap();
        let v = StateVector::basis_state(basis, &label("u+")).unwrap();
        assert!(matches!(
            back_evolve(&v, &[&m]),
            Err(Error::NotIsometric(_))
        ));
        assert_eq!(back_evolve(&v, &[]).unwrap(), v);
    }

    #[test]
    fn audit_skips_unassigned_pairs() {
        let exp = Experiment::default();
        let [u_plus, u_minus, _] = hardy_observables(&exp, ExperimentStage::AfterP).unwrap();
        let mut a = RealityAssignment::new();
        a.insert("U+", 1.0);
        let report = audit_product_rule(&a, &[(u_plus, u_minus)]).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.skipped[0].unassigned, ["U-", "U+U-"]);
    }

    #[test]
    fn audit_accepts_consistent_zero() {
        let exp = Experiment::default();
        let [u_plus, u_minus, _] = hardy_observables(&exp, ExperimentStage::AfterP).unwrap();
        let a: RealityAssignment = [("U+", 1.0), ("U-", 0.0), ("U+U-", 0.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let report = audit_product_rule(&a, &[(u_plus, u_minus)]).unwrap();
        assert!(report.violations.is_empty() && report.skipped.is_empty());
    }
}
