//! Real functions on a maximal set of commuting Hermitian operators that
//! satisfy the product rule `f(A) f(B) = f(AB)`.
//!
//! The commuting set is fixed as all operators diagonal in one basis of an
//! `N`-dimensional space (`N > 2`), so an operator is just its spectrum and
//! a product is the entrywise product. Indices are 1-based throughout.
//!
//! On projectors the product rule forces `f(P) ∈ {0, 1}` and the set of
//! projectors valued 1 must be closed under intersection and upward closed:
//! it is empty, everything, or a principal filter. [`enumerate_lattice_assignments`]
//! finds these by search; the parametric families of [`ProductRuleFunction`]
//! extend them to arbitrary spectra.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of continuous product-rule checks.
pub const PRODUCT_RULE_TOLERANCE: f64 = 1e-9;

/// Smallest supported dimension.
pub const MIN_DIMENSION: usize = 3;

/// Largest dimension for exhaustive lattice enumeration.
pub const MAX_ENUMERATION_DIMENSION: usize = 5;

/// Largest dimension for which every projector is visited when classifying.
pub const MAX_CLASSIFY_DIMENSION: usize = 20;

fn check_dimension(n: usize) -> Result<()> {
    if !(MIN_DIMENSION..=63).contains(&n) {
        return Err(Error::DimensionOutOfRange {
            found: n,
            min: MIN_DIMENSION,
            max: 63,
        });
    }
    Ok(())
}

fn check_index(n: usize, index: usize) -> Result<()> {
    if index == 0 || index > n {
        return Err(Error::InvalidParameter(format!(
            "index {index} outside 1..={n}"
        )));
    }
    Ok(())
}

/// `H = Σ λ_i |u_i⟩⟨u_i|`, stored as its spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalOperator {
    lambdas: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        check_dimension(lambdas.len())?;
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::NonFinite("spectrum"));
        }
        Ok(DiagonalOperator { lambdas })
    }

    pub fn zero(n: usize) -> Result<Self> {
        DiagonalOperator::new(vec![0.0; n])
    }

    /// `λ P_i`.
    pub fn scaled_projector(n: usize, index: usize, lambda: f64) -> Result<Self> {
        check_index(n, index)?;
        let mut lambdas = vec![0.0; n];
        lambdas[index - 1] = lambda;
        DiagonalOperator::new(lambdas)
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `λ_index` (1-based).
    pub fn lambda(&self, index: usize) -> f64 {
        self.lambdas[index - 1]
    }

    /// Entrywise product, i.e. the operator product within the commuting set.
    pub fn product(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(DiagonalOperator {
            lambdas: self
                .lambdas
                .iter()
                .zip(&other.lambdas)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn sum(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(DiagonalOperator {
            lambdas: self
                .lambdas
                .iter()
                .zip(&other.lambdas)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// The projector with this spectrum, if every entry is exactly 0 or 1.
    pub fn as_projector(&self) -> Option<DiagonalProjector> {
        let mut mask = 0u64;
        for (k, &l) in self.lambdas.iter().enumerate() {
            if l == 1.0 {
                mask |= 1 << k;
            } else if l != 0.0 {
                return None;
            }
        }
        Some(DiagonalProjector {
            n: self.dim(),
            mask,
        })
    }
}

impl fmt::Display for DiagonalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        write!(f, "diag({})", parts.join(", "))
    }
}

/// Projector onto the span of `{u_k : k ∈ S}`, stored as a bit mask
/// (bit `k − 1` for index `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalProjector {
    n: usize,
    mask: u64,
}

impl DiagonalProjector {
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        check_dimension(n)?;
        let mut mask = 0u64;
        for &k in indices {
            check_index(n, k)?;
            mask |= 1 << (k - 1);
        }
        Ok(DiagonalProjector { n, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_dimension(n)?;
        if mask >> n != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask {mask:#b} exceeds dimension {n}"
            )));
        }
        Ok(DiagonalProjector { n, mask })
    }

    /// `P_index`.
    pub fn rank_one(n: usize, index: usize) -> Result<Self> {
        DiagonalProjector::new(n, &[index])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn rank(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|k| self.mask & (1 << (k - 1)) != 0)
            .collect()
    }

    pub fn operator(&self) -> DiagonalOperator {
        DiagonalOperator {
            lambdas: (0..self.n).map(|k| ((self.mask >> k) & 1) as f64).collect(),
        }
    }
}

impl fmt::Display for DiagonalProjector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(|k| k.to_string()).collect();
        write!(f, "P{{{}}}", idx.join(","))
    }
}

/// A 0/1 value on every projector of an `N`-dimensional commuting set,
/// indexed by subset mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeAssignment {
    n: usize,
    values: Vec<bool>,
}

impl LatticeAssignment {
    /// Assignment equal to 1 exactly on the listed subsets (1-based index
    /// lists). No product-rule check is made here.
    pub fn from_ones(n: usize, ones: &[Vec<usize>]) -> Result<Self> {
        check_dimension(n)?;
        if n > MAX_CLASSIFY_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                found: n,
                min: MIN_DIMENSION,
                max: MAX_CLASSIFY_DIMENSION,
            });
        }
        let mut values = vec![false; 1 << n];
        for subset in ones {
            values[DiagonalProjector::new(n, subset)?.mask as usize] = true;
        }
        Ok(LatticeAssignment { n, values })
    }

    pub fn from_values(n: usize, values: Vec<bool>) -> Result<Self> {
        check_dimension(n)?;
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        Ok(LatticeAssignment { n, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self, p: &DiagonalProjector) -> bool {
        self.values[p.mask as usize]
    }

    pub fn value_at(&self, mask: u64) -> bool {
        self.values[mask as usize]
    }

    /// Masks valued 1, ascending.
    pub fn ones(&self) -> Vec<u64> {
        (0..self.values.len() as u64)
            .filter(|&m| self.values[m as usize])
            .collect()
    }

    /// `f(A ∩ B) = f(A) f(B)` for every pair of subsets.
    pub fn is_multiplicative(&self) -> bool {
        let size = self.values.len();
        (0..size)
            .all(|a| (0..size).all(|b| self.values[a & b] == (self.values[a] && self.values[b])))
    }

    /// The subset `S` when the assignment is 1 exactly on supersets of `S`.
    pub fn principal_generator(&self) -> Option<u64> {
        let ones = self.ones();
        let meet = ones.iter().fold(u64::MAX, |acc, &m| acc & m);
        let size = self.values.len() as u64;
        let principal =
            !ones.is_empty() && (0..size).all(|m| self.values[m as usize] == (m & meet == meet));
        principal.then_some(meet)
    }

    /// Rank-one indices valued 1.
    pub fn unit_singletons(&self) -> Vec<usize> {
        (1..=self.n).filter(|k| self.values[1 << (k - 1)]).collect()
    }

    fn ones_as_indices(&self) -> Vec<Vec<usize>> {
        self.ones()
            .into_iter()
            .map(|m| DiagonalProjector { n: self.n, mask: m }.indices())
            .collect()
    }

    /// Sort key: by generator (rank, then mask), the empty assignment last.
    fn canonical_key(&self) -> (u8, u32, u64) {
        match self.ones().into_iter().reduce(|a, b| a & b) {
            Some(meet) if self.principal_generator().is_some() => (0, meet.count_ones(), meet),
            Some(_) => (1, 0, 0),
            None => (2, 0, 0),
        }
    }
}

impl Serialize for LatticeAssignment {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("LatticeAssignment", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("ones", &self.ones_as_indices())?;
        s.end()
    }
}

/// One factor `|λ_index|^alpha` of a single- or multi-index function, with
/// the sign of `λ_index` carried along when `signed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub index: usize,
    pub alpha: f64,
    #[serde(default)]
    pub signed: bool,
}

impl Factor {
    /// A zero eigenvalue gives 0 for every exponent: the projectors
    /// orthogonal to `P_index` must be valued 0.
    fn eval(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return 0.0;
        }
        let magnitude = lambda.abs().powf(self.alpha);
        if self.signed && lambda < 0.0 {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Members of the product-rule families, plus explicit lattice assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionSpec", into = "FunctionSpec")]
pub enum ProductRuleFunction {
    /// `f ≡ 1`.
    Const1 { n: usize },
    /// `f ≡ 0`.
    Const0 { n: usize },
    /// `f(H) = |λ_i|^α` (or its sign-carrying variant), `α ≥ 0`.
    Case2 { n: usize, factor: Factor },
    /// `f(H) = Π_{k∈S} |λ_k|^{α_k}` over `|S| ≥ 2` indices, `α_k > 0`.
    Case3 { n: usize, factors: Vec<Factor> },
    /// Values on projectors only.
    Lattice(LatticeAssignment),
}

impl ProductRuleFunction {
    pub fn const1(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(ProductRuleFunction::Const1 { n })
    }

    pub fn const0(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(ProductRuleFunction::Const0 { n })
    }

    pub fn case2(n: usize, index: usize, alpha: f64, signed: bool) -> Result<Self> {
        check_dimension(n)?;
        check_index(n, index)?;
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponent must be finite and ≥ 0, got {alpha}"
            )));
        }
        Ok(ProductRuleFunction::Case2 {
            n,
            factor: Factor {
                index,
                alpha,
                signed,
            },
        })
    }

    pub fn case3(n: usize, factors: Vec<Factor>) -> Result<Self> {
        check_dimension(n)?;
        let mut seen = Vec::with_capacity(factors.len());
        for f in &factors {
            check_index(n, f.index)?;
            if !f.alpha.is_finite() || f.alpha <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "exponent must be finite and > 0, got {}",
                    f.alpha
                )));
            }
            if seen.contains(&f.index) {
                return Err(Error::InvalidParameter(format!(
                    "index {} repeated",
                    f.index
                )));
            }
            seen.push(f.index);
        }
        if factors.len() < 2 {
            return Err(Error::InvalidParameter(
                "multi-index function needs at least two indices".into(),
            ));
        }
        Ok(ProductRuleFunction::Case3 { n, factors })
    }

    pub fn lattice(assignment: LatticeAssignment) -> Self {
        ProductRuleFunction::Lattice(assignment)
    }

    pub fn dim(&self) -> usize {
        match self {
            ProductRuleFunction::Const1 { n }
            | ProductRuleFunction::Const0 { n }
            | ProductRuleFunction::Case2 { n, .. }
            | ProductRuleFunction::Case3 { n, .. } => *n,
            ProductRuleFunction::Lattice(a) => a.n,
        }
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self, ProductRuleFunction::Lattice(_))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase", deny_unknown_fields)]
enum FunctionSpec {
    Const1 {
        n: usize,
    },
    Const0 {
        n: usize,
    },
    Case2 {
        n: usize,
        i: usize,
        alpha: f64,
        #[serde(default)]
        signed: bool,
    },
    Case3 {
        n: usize,
        factors: Vec<Factor>,
    },
    Lattice {
        n: usize,
        ones: Vec<Vec<usize>>,
    },
}

impl TryFrom<FunctionSpec> for ProductRuleFunction {
    type Error = Error;

    fn try_from(spec: FunctionSpec) -> Result<Self> {
        match spec {
            FunctionSpec::Const1 { n } => ProductRuleFunction::const1(n),
            FunctionSpec::Const0 { n } => ProductRuleFunction::const0(n),
            FunctionSpec::Case2 {
                n,
                i,
                alpha,
                signed,
            } => ProductRuleFunction::case2(n, i, alpha, signed),
            FunctionSpec::Case3 { n, factors } => ProductRuleFunction::case3(n, factors),
            FunctionSpec::Lattice { n, ones } => Ok(ProductRuleFunction::Lattice(
                LatticeAssignment::from_ones(n, &ones)?,
            )),
        }
    }
}

impl From<ProductRuleFunction> for FunctionSpec {
    fn from(f: ProductRuleFunction) -> Self {
        match f {
            ProductRuleFunction::Const1 { n } => FunctionSpec::Const1 { n },
            ProductRuleFunction::Const0 { n } => FunctionSpec::Const0 { n },
            ProductRuleFunction::Case2 { n, factor } => FunctionSpec::Case2 {
                n,
                i: factor.index,
                alpha: factor.alpha,
                signed: factor.signed,
            },
            ProductRuleFunction::Case3 { n, factors } => FunctionSpec::Case3 { n, factors },
            ProductRuleFunction::Lattice(a) => FunctionSpec::Lattice {
                n: a.n,
                ones: a.ones_as_indices(),
            },
        }
    }
}

pub fn evaluate(f: &ProductRuleFunction, h: &DiagonalOperator) -> Result<f64> {
    if h.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: h.dim(),
        });
    }
    let value = match f {
        ProductRuleFunction::Const1 { .. } => 1.0,
        ProductRuleFunction::Const0 { .. } => 0.0,
        ProductRuleFunction::Case2 { factor, .. } => factor.eval(h.lambda(factor.index)),
        ProductRuleFunction::Case3 { factors, .. } => factors
            .iter()
            .map(|fa| fa.eval(h.lambda(fa.index)))
            .product(),
        ProductRuleFunction::Lattice(a) => {
            let p = h.as_projector().ok_or(Error::NotAProjectorSpectrum)?;
            if a.value(&p) {
                1.0
            } else {
                0.0
            }
        }
    };
    Ok(value)
}

/// `|f(a) f(b) − f(ab)| / max(1, |f(ab)|)`.
pub fn product_rule_residual(
    f: &ProductRuleFunction,
    a: &DiagonalOperator,
    b: &DiagonalOperator,
) -> Result<f64> {
    let ab = a.product(b)?;
    let (fa, fb, fab) = (evaluate(f, a)?, evaluate(f, b)?, evaluate(f, &ab)?);
    Ok((fa * fb - fab).abs() / fab.abs().max(1.0))
}

pub fn check_product_rule(
    f: &ProductRuleFunction,
    a: &DiagonalOperator,
    b: &DiagonalOperator,
) -> Result<bool> {
    check_product_rule_within(f, a, b, PRODUCT_RULE_TOLERANCE)
}

pub fn check_product_rule_within(
    f: &ProductRuleFunction,
    a: &DiagonalOperator,
    b: &DiagonalOperator,
    tolerance: f64,
) -> Result<bool> {
    Ok(product_rule_residual(f, a, b)? <= tolerance)
}

/// Which of the three disjoint collections a function falls in, judged by
/// its values on the rank-one projectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectorCase {
    /// `f(P_i) = 1` for all `i`.
    #[serde(rename = "case1")]
    AllOne,
    /// `f(P_i) = 1` for some `i` and 0 for others.
    #[serde(rename = "case2")]
    SomeOne,
    /// `f(P_i) = 0` for all `i`.
    #[serde(rename = "case3")]
    AllZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: ProjectorCase,
    /// Indices `i` with `f(P_i) = 1`.
    pub unit_singletons: Vec<usize>,
    /// For the all-zero case: the lowest-rank projectors valued 1.
    pub minimal_unit_projectors: Vec<Vec<usize>>,
}

pub fn classify_on_projectors(f: &ProductRuleFunction) -> Result<CaseReport> {
    let n = f.dim();
    let value = |mask: u64| -> Result<bool> {
        let p = DiagonalProjector { n, mask };
        Ok(evaluate(f, &p.operator())? == 1.0)
    };
    let mut unit_singletons = Vec::new();
    for k in 1..=n {
        if value(1 << (k - 1))? {
            unit_singletons.push(k);
        }
    }
    let case = match unit_singletons.len() {
        0 => ProjectorCase::AllZero,
        c if c == n => ProjectorCase::AllOne,
        _ => ProjectorCase::SomeOne,
    };
    let mut minimal_unit_projectors = Vec::new();
    if case == ProjectorCase::AllZero {
        if n > MAX_CLASSIFY_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                found: n,
                min: MIN_DIMENSION,
                max: MAX_CLASSIFY_DIMENSION,
            });
        }
        let mut best: Option<u32> = None;
        for mask in 0..(1u64 << n) {
            if !value(mask)? {
                continue;
            }
            let rank = mask.count_ones();
            match best {
                Some(r) if rank > r => continue,
                Some(r) if rank < r => minimal_unit_projectors.clear(),
                _ => {}
            }
            best = Some(rank);
            minimal_unit_projectors.push(DiagonalProjector { n, mask }.indices());
        }
    }
    Ok(CaseReport {
        case,
        unit_singletons,
        minimal_unit_projectors,
    })
}

/// Partial assignment over subsets taken in (rank, mask) order.
struct Search<'a> {
    order: &'a [u64],
    values: Vec<Option<bool>>,
}

impl Search<'_> {
    /// Would `f(order[depth]) = v` keep every pair among assigned subsets
    /// multiplicative? Intersections with earlier subsets are earlier subsets
    /// themselves, so they are always assigned.
    fn consistent(&self, depth: usize, v: bool) -> bool {
        let a = self.order[depth];
        self.order[..depth].iter().all(|&b| {
            let fb = self.values[b as usize].expect("assigned");
            let meet = a & b;
            let fm = if meet == a {
                v
            } else {
                self.values[meet as usize].expect("assigned")
            };
            fm == (v && fb)
        })
    }

    fn extend(&mut self, depth: usize, stop: usize, out: &mut Vec<Vec<Option<bool>>>) {
        if depth == stop {
            out.push(self.values.clone());
            return;
        }
        let mask = self.order[depth] as usize;
        for v in [false, true] {
            if self.consistent(depth, v) {
                self.values[mask] = Some(v);
                self.extend(depth + 1, stop, out);
                self.values[mask] = None;
            }
        }
    }
}

/// Every `f` on the subsets of `{1..N}` with values in `{0, 1}` and
/// `f(A ∩ B) = f(A) f(B)`, for `3 ≤ N ≤ 5`.
///
/// Subsets are assigned in order of increasing rank, and each value is
/// only tried if it stays consistent with everything already assigned. The
/// search splits after the empty set and the singletons and finishes each
/// branch in parallel; the result is sorted by generating subset with the
/// all-zero assignment last.
pub fn enumerate_lattice_assignments(n: usize) -> Result<Vec<LatticeAssignment>> {
    if !(MIN_DIMENSION..=MAX_ENUMERATION_DIMENSION).contains(&n) {
        return Err(Error::DimensionOutOfRange {
            found: n,
            min: MIN_DIMENSION,
            max: MAX_ENUMERATION_DIMENSION,
        });
    }
    let size = 1usize << n;
    let mut order: Vec<u64> = (0..size as u64).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));

    let split = n + 1;
    let mut roots = Vec::new();
    Search {
        order: &order,
        values: vec![None; size],
    }
    .extend(0, split, &mut roots);

    let mut found: Vec<LatticeAssignment> = roots
        .into_par_iter()
        .flat_map_iter(|values| {
            let mut leaves = Vec::new();
            Search {
                order: &order,
                values,
            }
            .extend(split, size, &mut leaves);
            leaves
        })
        .map(|values| LatticeAssignment {
            n,
            values: values.into_iter().map(|v| v.expect("complete")).collect(),
        })
        .collect();

    assert!(
        found.iter().all(LatticeAssignment::is_multiplicative),
        "search produced a non-multiplicative assignment"
    );
    found.sort_by_key(LatticeAssignment::canonical_key);
    Ok(found)
}

/// Every enumerated assignment that is 1 on some but not all rank-one
/// projectors is 1 on exactly one of them, `P_i`, and is then 1 exactly on
/// the projectors containing `P_i`.
pub fn uniqueness_theorem_check(n: usize) -> Result<bool> {
    let ok = enumerate_lattice_assignments(n)?.iter().all(|a| {
        let singles = a.unit_singletons();
        if singles.is_empty() || singles.len() == n {
            return true;
        }
        singles.len() == 1 && a.principal_generator() == Some(1 << (singles[0] - 1))
    });
    Ok(ok)
}

/// One numerically instantiated identity of a derivation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl TraceStep {
    fn new(identity: String, lhs: f64, rhs: f64) -> Self {
        let holds = (lhs - rhs).abs() <= PRODUCT_RULE_TOLERANCE * rhs.abs().max(1.0);
        TraceStep {
            identity,
            lhs,
            rhs,
            holds,
        }
    }
}

/// Eigenvalues used by [`case_derivation_trace`].
pub const DEFAULT_TRACE_SAMPLES: [f64; 4] = [3.0, -0.5, 2.0, 1.0];

pub fn case_derivation_trace(f: &ProductRuleFunction) -> Result<Vec<TraceStep>> {
    case_derivation_trace_with(f, &DEFAULT_TRACE_SAMPLES)
}

/// Evaluates, on each sampled eigenvalue, the chain of identities by which
/// the product rule pins down a constant-one or single-index function.
pub fn case_derivation_trace_with(
    f: &ProductRuleFunction,
    samples: &[f64],
) -> Result<Vec<TraceStep>> {
    let n = f.dim();
    let ev = |h: &DiagonalOperator| evaluate(f, h);
    let rank_one = |k: usize| DiagonalProjector::rank_one(n, k).map(|p| p.operator());
    let scaled = |k: usize, l: f64| DiagonalOperator::scaled_projector(n, k, l);
    // Spectrum cycling through the samples, used as a generic H.
    let generic = DiagonalOperator::new((0..n).map(|k| samples[k % samples.len()]).collect())?;
    let mut steps = Vec::new();

    match f {
        ProductRuleFunction::Const1 { .. } => {
            let (i, j) = (1, 2);
            let pi = rank_one(i)?;
            let pj = rank_one(j)?;
            for &l in samples.iter().filter(|&&l| l != 0.0) {
                let k = pi.sum(&scaled(j, l)?)?;
                let name = format!("P{i} + {l}·P{j}");
                let (fk, fpi, fpj) = (ev(&k)?, ev(&pi)?, ev(&pj)?);
                steps.push(TraceStep::new(
                    format!("f({name}) = f({name}) f(P{i})"),
                    fk,
                    fk * fpi,
                ));
                steps.push(TraceStep::new(
                    format!("f({name}) f(P{i}) = f(P{i})"),
                    fk * fpi,
                    ev(&k.product(&pi)?)?,
                ));
                steps.push(TraceStep::new(format!("f(P{i}) = 1"), fpi, 1.0));
                steps.push(TraceStep::new(
                    format!("f({name}) = f({name}) f(P{j})"),
                    fk,
                    fk * fpj,
                ));
                steps.push(TraceStep::new(
                    format!("f({name}) f(P{j}) = f({l}·P{j})"),
                    fk * fpj,
                    ev(&k.product(&pj)?)?,
                ));
                steps.push(TraceStep::new(
                    format!("f({l}·P{j}) = 1"),
                    ev(&scaled(j, l)?)?,
                    1.0,
                ));
            }
            let k = generic
                .lambdas()
                .iter()
                .position(|&l| l != 0.0)
                .map(|p| p + 1)
                .unwrap_or(1);
            let lk = generic.lambda(k);
            let (fh, fpk) = (ev(&generic)?, ev(&rank_one(k)?)?);
            steps.push(TraceStep::new(
                format!("f(H) = f(H) f(P{k}) for H = {generic}"),
                fh,
                fh * fpk,
            ));
            steps.push(TraceStep::new(
                format!("f(H) f(P{k}) = f({lk}·P{k})"),
                fh * fpk,
                ev(&generic.product(&rank_one(k)?)?)?,
            ));
            steps.push(TraceStep::new(
                format!("f({lk}·P{k}) = 1"),
                ev(&scaled(k, lk)?)?,
                1.0,
            ));
            steps.push(TraceStep::new(
                format!("f(0) = f(P{i} P{j}) = f(P{i}) f(P{j})"),
                ev(&DiagonalOperator::zero(n)?)?,
                ev(&pi)? * ev(&pj)?,
            ));
            steps.push(TraceStep::new(
                "f(0) = 1".into(),
                ev(&DiagonalOperator::zero(n)?)?,
                1.0,
            ));
        }
        ProductRuleFunction::Case2 { factor, .. } => {
            let i = factor.index;
            let pi = rank_one(i)?;
            let li = generic.lambda(i);
            let (fh, fpi) = (ev(&generic)?, ev(&pi)?);
            steps.push(TraceStep::new(
                format!("f(H) = f(H) f(P{i}) for H = {generic}"),
                fh,
                fh * fpi,
            ));
            steps.push(TraceStep::new(
                format!("f(H) f(P{i}) = f(H P{i})"),
                fh * fpi,
                ev(&generic.product(&pi)?)?,
            ));
            steps.push(TraceStep::new(
                format!("f(H) = f({li}·P{i})"),
                fh,
                ev(&scaled(i, li)?)?,
            ));
            for (a, &l) in samples.iter().enumerate() {
                let l2 = samples[(a + 1) % samples.len()];
                for (x, y) in [(l, l2), (1.0, 1.0)] {
                    steps.push(TraceStep::new(
                        format!("f({x}·P{i}) f({y}·P{i}) = f({}·P{i})", x * y),
                        ev(&scaled(i, x)?)? * ev(&scaled(i, y)?)?,
                        ev(&scaled(i, x * y)?)?,
                    ));
                }
            }
        }
        _ => return Err(Error::UnsupportedCase),
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks the product rule on `trials` seeded random operator pairs with
/// spectra uniform in `[−2, 2]` (random 0/1 spectra for lattice functions).
pub fn random_product_rule_trials(
    f: &ProductRuleFunction,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<TrialReport> {
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<DiagonalOperator> {
        let lambdas = (0..n)
            .map(|_| {
                if f.is_lattice() {
                    f64::from(u8::from(rng.gen_bool(0.5)))
                } else {
                    rng.gen_range(-2.0..=2.0)
                }
            })
            .collect();
        DiagonalOperator::new(lambdas)
    };
    let mut failures = 0;
    let mut max_residual: f64 = 0.0;
    for _ in 0..trials {
        let a = draw(&mut rng)?;
        let b = draw(&mut rng)?;
        let r = product_rule_residual(f, &a, &b)?;
        max_residual = max_residual.max(r);
        if r > tolerance {
            failures += 1;
        }
    }
    Ok(TrialReport {
        seed,
        trials,
        failures,
        max_residual,
        tolerance,
    })
}
