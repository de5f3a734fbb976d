//! Complex linear algebra over small labeled bases.
//!
//! Every vector space in the workbench is spanned by a finite set of
//! [`ModeLabel`]s: products of single-particle path modes (`u+v-`, `c+d-`,
//! ...) plus the one-dimensional annihilation sector `γ`. Bases are kept in
//! canonical order (lexicographic over mode names, `γ` last) so that two
//! states over the same set of labels always line up component by component
//! and serialize identically.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default tolerance for state-level equalities.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Squared norms at or below this are treated as the zero vector.
const ZERO_NORM_SQR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Particle {
    /// `+`
    Positron,
    /// `-`
    Electron,
}

impl Particle {
    pub fn sign(self) -> char {
        match self {
            Particle::Positron => '+',
            Particle::Electron => '-',
        }
    }

    fn from_sign(c: char) -> Option<Self> {
        match c {
            '+' => Some(Particle::Positron),
            '-' => Some(Particle::Electron),
            _ => None,
        }
    }
}

/// Interferometer path. Declaration order is alphabetical so the derived
/// ordering matches the lexicographic order of the mode names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    C,
    D,
    S,
    U,
    V,
}

impl Path {
    pub fn letter(self) -> char {
        match self {
            Path::C => 'c',
            Path::D => 'd',
            Path::S => 's',
            Path::U => 'u',
            Path::V => 'v',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'c' => Some(Path::C),
            'd' => Some(Path::D),
            's' => Some(Path::S),
            'u' => Some(Path::U),
            'v' => Some(Path::V),
            _ => None,
        }
    }
}

/// A single-particle mode such as `u+` or `d-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub path: Path,
    pub particle: Particle,
}

impl Mode {
    pub const fn new(path: Path, particle: Particle) -> Self {
        Mode { path, particle }
    }

    pub const fn positron(path: Path) -> Self {
        Mode::new(path, Particle::Positron)
    }

    pub const fn electron(path: Path) -> Self {
        Mode::new(path, Particle::Electron)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.path.letter(), self.particle.sign())
    }
}

/// Parses a run of `<path><sign>` pairs, e.g. `u+v-`. Path letters may be
/// upper or lower case.
pub(crate) fn parse_modes(s: &str) -> Option<Vec<Mode>> {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() || !chars.len().is_multiple_of(2) {
        return None;
    }
    chars
        .chunks(2)
        .map(|pair| {
            Some(Mode::new(
                Path::from_letter(pair[0])?,
                Particle::from_sign(pair[1])?,
            ))
        })
        .collect()
}

/// Basis label: a product of single-particle modes (one per particle), or
/// the annihilation sector `γ`, which is orthogonal to every product mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeLabel {
    Modes(Vec<Mode>),
    Gamma,
}

impl ModeLabel {
    /// Product label, positron factor first.
    pub fn pair(positron: Path, electron: Path) -> Self {
        ModeLabel::Modes(vec![Mode::positron(positron), Mode::electron(electron)])
    }

    pub fn single(mode: Mode) -> Self {
        ModeLabel::Modes(vec![mode])
    }

    pub fn modes(&self) -> &[Mode] {
        match self {
            ModeLabel::Modes(m) => m,
            ModeLabel::Gamma => &[],
        }
    }

    pub fn contains(&self, mode: Mode) -> bool {
        self.modes().contains(&mode)
    }

    pub fn is_gamma(&self) -> bool {
        matches!(self, ModeLabel::Gamma)
    }

    /// Path occupied by `particle` in this label, if any.
    pub fn path_of(&self, particle: Particle) -> Option<Path> {
        self.modes()
            .iter()
            .find(|m| m.particle == particle)
            .map(|m| m.path)
    }

    /// Concatenates two product labels. Fails for `γ` or when both factors
    /// carry the same particle.
    pub fn tensor(&self, other: &ModeLabel) -> Result<ModeLabel> {
        match (self, other) {
            (ModeLabel::Modes(a), ModeLabel::Modes(b)) => {
                let mut modes = a.clone();
                modes.extend_from_slice(b);
                ModeLabel::from_modes(modes)
            }
            _ => Err(Error::InvalidLabel(format!("{self}⊗{other}"))),
        }
    }

    fn from_modes(modes: Vec<Mode>) -> Result<ModeLabel> {
        let particles: BTreeSet<Particle> = modes.iter().map(|m| m.particle).collect();
        if modes.is_empty() || particles.len() != modes.len() {
            let text: String = modes.iter().map(|m| m.to_string()).collect();
            return Err(Error::InvalidLabel(text));
        }
        Ok(ModeLabel::Modes(modes))
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::Gamma => f.write_str("γ"),
            ModeLabel::Modes(modes) => modes.iter().try_for_each(|m| write!(f, "{m}")),
        }
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "γ" || s.eq_ignore_ascii_case("gamma") {
            return Ok(ModeLabel::Gamma);
        }
        let modes = parse_modes(s).ok_or_else(|| Error::InvalidLabel(s.to_string()))?;
        ModeLabel::from_modes(modes).map_err(|_| Error::InvalidLabel(s.to_string()))
    }
}

impl Serialize for ModeLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModeLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered orthonormal basis of distinct labels, in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    labels: Arc<[ModeLabel]>,
}

impl Basis {
    pub fn new<I: IntoIterator<Item = ModeLabel>>(labels: I) -> Result<Self> {
        let mut labels: Vec<ModeLabel> = labels.into_iter().collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].to_string()));
        }
        Ok(Basis {
            labels: labels.into(),
        })
    }

    /// Single-particle basis over the given paths.
    pub fn paths(particle: Particle, paths: &[Path]) -> Result<Self> {
        Basis::new(
            paths
                .iter()
                .map(|&p| ModeLabel::single(Mode::new(p, particle))),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: &ModeLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn contains(&self, label: &ModeLabel) -> bool {
        self.index_of(label).is_some()
    }

    /// All products `a ⊗ b` of labels from the two bases.
    pub fn tensor(&self, other: &Basis) -> Result<Basis> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in self.labels() {
            for b in other.labels() {
                labels.push(a.tensor(b)?);
            }
        }
        Basis::new(labels)
    }

    /// This basis with `extra` labels appended (re-sorted).
    pub fn extended<I: IntoIterator<Item = ModeLabel>>(&self, extra: I) -> Result<Basis> {
        Basis::new(self.labels.iter().cloned().chain(extra))
    }

    pub(crate) fn ensure_same(&self, other: &Basis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, label) in self.labels.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Basis[{self}]")
    }
}

/// A vector of complex amplitudes over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Basis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn zero(basis: Basis) -> Self {
        let amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
        StateVector { basis, amplitudes }
    }

    /// The unit vector `|label⟩`.
    pub fn basis_state(basis: Basis, label: &ModeLabel) -> Result<Self> {
        let k = basis
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let mut v = StateVector::zero(basis);
        v.amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Builds a state from `(label, amplitude)` terms; repeated labels add up.
    pub fn from_terms<'a, I>(basis: Basis, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a ModeLabel, Complex64)>,
    {
        let mut v = StateVector::zero(basis);
        for (label, amp) in terms {
            let k = v
                .basis
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            v.amplitudes[k] += amp;
        }
        StateVector::new(v.basis, v.amplitudes)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude on `label`, or `None` if the label is outside the basis.
    pub fn amplitude(&self, label: &ModeLabel) -> Option<Complex64> {
        self.basis.index_of(label).map(|k| self.amplitudes[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeLabel, Complex64)> + '_ {
        self.basis
            .labels()
            .iter()
            .zip(self.amplitudes.iter().copied())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= ZERO_NORM_SQR {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        StateVector {
            basis: self.basis.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        inner_product(self, other)
    }

    /// Largest component-wise deviation from `other` over the same basis.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.basis.ensure_same(&other.basis)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &StateVector, tolerance: f64) -> bool {
        self.max_deviation(other).is_ok_and(|d| d <= tolerance)
    }

    /// Labels carrying an amplitude larger than `tolerance` in modulus.
    pub fn support(&self, tolerance: f64) -> Vec<&ModeLabel> {
        self.iter()
            .filter(|(_, a)| a.norm() > tolerance)
            .map(|(l, _)| l)
            .collect()
    }
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.basis.ensure_same(&b.basis)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateRepr {
    basis: Vec<ModeLabel>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            basis: self.basis.labels().to_vec(),
            re: self.amplitudes.iter().map(|a| a.re).collect(),
            im: self.amplitudes.iter().map(|a| a.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = StateRepr::deserialize(deserializer)?;
        if repr.re.len() != repr.basis.len() || repr.im.len() != repr.basis.len() {
            return Err(D::Error::custom("basis, re and im must have equal length"));
        }
        // Labels may arrive in any order; carry amplitudes along when sorting.
        let mut entries: Vec<(ModeLabel, Complex64)> = repr
            .basis
            .into_iter()
            .zip(repr.re.into_iter().zip(repr.im))
            .map(|(l, (re, im))| (l, Complex64::new(re, im)))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let amplitudes = entries.iter().map(|e| e.1).collect();
        let basis = Basis::new(entries.into_iter().map(|e| e.0)).map_err(D::Error::custom)?;
        StateVector::new(basis, amplitudes).map_err(D::Error::custom)
    }
}

/// Dense complex matrix from a domain basis to a codomain basis, stored
/// row-major (`codomain.len()` rows).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    domain: Basis,
    codomain: Basis,
    matrix: Vec<Complex64>,
}

impl LinearMap {
    pub fn from_matrix(domain: Basis, codomain: Basis, matrix: Vec<Complex64>) -> Result<Self> {
        let expected = domain.len() * codomain.len();
        if matrix.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: matrix.len(),
            });
        }
        if matrix
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("map entries"));
        }
        Ok(LinearMap {
            domain,
            codomain,
            matrix,
        })
    }

    /// Defines the map by its action on each domain basis vector.
    pub fn from_action<F>(domain: Basis, codomain: Basis, mut action: F) -> Result<Self>
    where
        F: FnMut(&ModeLabel) -> Vec<(ModeLabel, Complex64)>,
    {
        let cols = domain.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); cols * codomain.len()];
        for (col, label) in domain.labels().iter().enumerate() {
            for (image, amp) in action(label) {
                let row = codomain
                    .index_of(&image)
                    .ok_or_else(|| Error::UnknownLabel(image.to_string()))?;
                matrix[row * cols + col] += amp;
            }
        }
        LinearMap::from_matrix(domain, codomain, matrix)
    }

    pub fn identity(basis: Basis) -> Self {
        let n = basis.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            matrix[k * n + k] = Complex64::new(1.0, 0.0);
        }
        LinearMap {
            domain: basis.clone(),
            codomain: basis,
            matrix,
        }
    }

    pub fn domain(&self) -> &Basis {
        &self.domain
    }

    pub fn codomain(&self) -> &Basis {
        &self.codomain
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.domain.len() + col]
    }

    /// Matrix element `⟨to|M|from⟩`, zero when either label is foreign.
    pub fn element(&self, to: &ModeLabel, from: &ModeLabel) -> Complex64 {
        match (self.codomain.index_of(to), self.domain.index_of(from)) {
            (Some(r), Some(c)) => self.entry(r, c),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        apply(self, v)
    }

    pub fn adjoint(&self) -> LinearMap {
        let (rows, cols) = (self.codomain.len(), self.domain.len());
        let mut matrix = vec![Complex64::new(0.0, 0.0); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                matrix[c * rows + r] = self.matrix[r * cols + c].conj();
            }
        }
        LinearMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap> {
        self.codomain.ensure_same(&next.domain)?;
        let (n, m, k) = (next.codomain.len(), self.codomain.len(), self.domain.len());
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * k];
        for r in 0..n {
            for mid in 0..m {
                let a = next.matrix[r * m + mid];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..k {
                    matrix[r * k + c] += a * self.matrix[mid * k + c];
                }
            }
        }
        LinearMap::from_matrix(self.domain.clone(), next.codomain.clone(), matrix)
    }

    /// Tensor product over product labels: `(A⊗B)|a b⟩ = A|a⟩ ⊗ B|b⟩`.
    pub fn tensor(&self, other: &LinearMap) -> Result<LinearMap> {
        let domain = self.domain.tensor(&other.domain)?;
        let codomain = self.codomain.tensor(&other.codomain)?;
        let mut matrix = vec![Complex64::new(0.0, 0.0); domain.len() * codomain.len()];
        let cols = domain.len();
        for (ca, la) in self.domain.labels().iter().enumerate() {
            for (cb, lb) in other.domain.labels().iter().enumerate() {
                let col = domain.index_of(&la.tensor(lb)?).expect("tensor label");
                for (ra, ia) in self.codomain.labels().iter().enumerate() {
                    let a = self.entry(ra, ca);
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (rb, ib) in other.codomain.labels().iter().enumerate() {
                        let row = codomain.index_of(&ia.tensor(ib)?).expect("tensor label");
                        matrix[row * cols + col] += a * other.entry(rb, cb);
                    }
                }
            }
        }
        LinearMap::from_matrix(domain, codomain, matrix)
    }

    /// Extends the map by the identity on `extra` labels, which must be new
    /// to both domain and codomain.
    pub fn with_passthrough(&self, extra: &[ModeLabel]) -> Result<LinearMap> {
        let domain = self.domain.extended(extra.iter().cloned())?;
        let codomain = self.codomain.extended(extra.iter().cloned())?;
        LinearMap::from_action(domain, codomain, |label| {
            if extra.contains(label) {
                return vec![(label.clone(), Complex64::new(1.0, 0.0))];
            }
            let col = self.domain.index_of(label).expect("domain label");
            self.codomain
                .labels()
                .iter()
                .enumerate()
                .map(|(row, image)| (image.clone(), self.entry(row, col)))
                .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
                .collect()
        })
    }

    /// Largest entry of `|M†M − 1|`.
    pub fn isometry_defect(&self) -> f64 {
        let (rows, cols) = (self.codomain.len(), self.domain.len());
        let mut worst: f64 = 0.0;
        for i in 0..cols {
            for j in 0..cols {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    s += self.matrix[r * cols + i].conj() * self.matrix[r * cols + j];
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn is_isometry(&self, tolerance: f64) -> bool {
        self.isometry_defect() <= tolerance
    }
}

pub fn apply(m: &LinearMap, v: &StateVector) -> Result<StateVector> {
    m.domain.ensure_same(&v.basis)?;
    let cols = m.domain.len();
    let amplitudes = (0..m.codomain.len())
        .map(|r| {
            m.matrix[r * cols..(r + 1) * cols]
                .iter()
                .zip(&v.amplitudes)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    StateVector::new(m.codomain.clone(), amplitudes)
}

#[derive(Debug, Clone, PartialEq)]
enum ProjectorKind {
    /// Membership mask over the basis.
    Diagonal(Vec<bool>),
    /// Hermitian idempotent matrix, row-major.
    Dense(Vec<Complex64>),
}

/// Orthogonal projector on a labeled basis: either diagonal (a subset of
/// labels) or an explicit Hermitian idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    basis: Basis,
    kind: ProjectorKind,
}

impl Projector {
    pub fn onto_labels<'a, I>(basis: Basis, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ModeLabel>,
    {
        let mut mask = vec![false; basis.len()];
        for label in labels {
            let k = basis
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            mask[k] = true;
        }
        Ok(Projector {
            basis,
            kind: ProjectorKind::Diagonal(mask),
        })
    }

    pub fn from_predicate<F: Fn(&ModeLabel) -> bool>(basis: Basis, predicate: F) -> Self {
        let mask = basis.labels().iter().map(predicate).collect();
        Projector {
            basis,
            kind: ProjectorKind::Diagonal(mask),
        }
    }

    pub fn identity(basis: Basis) -> Self {
        Projector::from_predicate(basis, |_| true)
    }

    /// Rank-one projector `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn onto_state(v: &StateVector) -> Result<Self> {
        let u = v.normalized()?;
        let n = u.basis.len();
        let mut matrix = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                matrix.push(u.amplitudes[r] * u.amplitudes[c].conj());
            }
        }
        Ok(Projector {
            basis: u.basis,
            kind: ProjectorKind::Dense(matrix),
        })
    }

    /// Validates `P = P†` and `P² = P` within [`STATE_TOLERANCE`].
    pub fn dense(basis: Basis, matrix: Vec<Complex64>) -> Result<Self> {
        let n = basis.len();
        if matrix.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: matrix.len(),
            });
        }
        for r in 0..n {
            for c in 0..n {
                if (matrix[r * n + c] - matrix[c * n + r].conj()).norm() > STATE_TOLERANCE {
                    return Err(Error::NotAProjector("not Hermitian".into()));
                }
                let sq: Complex64 = (0..n).map(|k| matrix[r * n + k] * matrix[k * n + c]).sum();
                if (sq - matrix[r * n + c]).norm() > STATE_TOLERANCE {
                    return Err(Error::NotAProjector("not idempotent".into()));
                }
            }
        }
        Ok(Projector {
            basis,
            kind: ProjectorKind::Dense(matrix),
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, ProjectorKind::Diagonal(_))
    }

    /// Labels spanned by a diagonal projector.
    pub fn labels(&self) -> Option<Vec<&ModeLabel>> {
        match &self.kind {
            ProjectorKind::Diagonal(mask) => Some(
                self.basis
                    .labels()
                    .iter()
                    .zip(mask)
                    .filter(|(_, &m)| m)
                    .map(|(l, _)| l)
                    .collect(),
            ),
            ProjectorKind::Dense(_) => None,
        }
    }

    pub fn matrix(&self) -> Vec<Complex64> {
        let n = self.basis.len();
        match &self.kind {
            ProjectorKind::Dense(m) => m.clone(),
            ProjectorKind::Diagonal(mask) => {
                let mut m = vec![Complex64::new(0.0, 0.0); n * n];
                for (k, &on) in mask.iter().enumerate() {
                    if on {
                        m[k * n + k] = Complex64::new(1.0, 0.0);
                    }
                }
                m
            }
        }
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            ProjectorKind::Diagonal(mask) => mask.iter().filter(|&&m| m).count(),
            ProjectorKind::Dense(m) => {
                let n = self.basis.len();
                (0..n).map(|k| m[k * n + k].re).sum::<f64>().round() as usize
            }
        }
    }

    pub fn complement(&self) -> Projector {
        let kind = match &self.kind {
            ProjectorKind::Diagonal(mask) => {
                ProjectorKind::Diagonal(mask.iter().map(|m| !m).collect())
            }
            ProjectorKind::Dense(m) => {
                let n = self.basis.len();
                let mut c: Vec<Complex64> = m.iter().map(|a| -a).collect();
                for k in 0..n {
                    c[k * n + k] += 1.0;
                }
                ProjectorKind::Dense(c)
            }
        };
        Projector {
            basis: self.basis.clone(),
            kind,
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.basis.ensure_same(&v.basis)?;
        let amplitudes = match &self.kind {
            ProjectorKind::Diagonal(mask) => v
                .amplitudes
                .iter()
                .zip(mask)
                .map(|(&a, &m)| if m { a } else { Complex64::new(0.0, 0.0) })
                .collect(),
            ProjectorKind::Dense(m) => {
                let n = self.basis.len();
                (0..n)
                    .map(|r| (0..n).map(|c| m[r * n + c] * v.amplitudes[c]).sum())
                    .collect()
            }
        };
        StateVector::new(v.basis.clone(), amplitudes)
    }

    /// `⟨a|P|b⟩`.
    pub fn sandwich(&self, a: &StateVector, b: &StateVector) -> Result<Complex64> {
        inner_product(a, &self.apply(b)?)
    }

    fn dense_product(&self, other: &Projector) -> Vec<Complex64> {
        let n = self.basis.len();
        let (a, b) = (self.matrix(), other.matrix());
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r * n + k];
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += x * b[k * n + c];
                }
            }
        }
        out
    }

    pub fn commutes_with(&self, other: &Projector) -> Result<bool> {
        self.basis.ensure_same(&other.basis)?;
        if self.is_diagonal() && other.is_diagonal() {
            return Ok(true);
        }
        let ab = self.dense_product(other);
        let ba = other.dense_product(self);
        Ok(ab
            .iter()
            .zip(&ba)
            .all(|(x, y)| (x - y).norm() <= STATE_TOLERANCE))
    }

    /// `PQ` for commuting projectors (itself a projector).
    pub fn product(&self, other: &Projector) -> Result<Projector> {
        if !self.commutes_with(other)? {
            return Err(Error::NonCommuting);
        }
        let kind = match (&self.kind, &other.kind) {
            (ProjectorKind::Diagonal(a), ProjectorKind::Diagonal(b)) => {
                ProjectorKind::Diagonal(a.iter().zip(b).map(|(x, y)| *x && *y).collect())
            }
            _ => ProjectorKind::Dense(self.dense_product(other)),
        };
        Ok(Projector {
            basis: self.basis.clone(),
            kind,
        })
    }

    /// Largest entry of `|PQ|`; zero for mutually orthogonal projectors.
    pub fn overlap(&self, other: &Projector) -> Result<f64> {
        self.basis.ensure_same(&other.basis)?;
        Ok(self
            .dense_product(other)
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max))
    }
}

/// Applies `p` to `v`, returning the unnormalized image and the Born
/// probability `‖Pv‖² / ‖v‖²`.
pub fn project(p: &Projector, v: &StateVector) -> Result<(StateVector, f64)> {
    let n2 = v.norm_sqr();
    if n2 <= ZERO_NORM_SQR {
        return Err(Error::ZeroVector);
    }
    let image = p.apply(v)?;
    let probability = (image.norm_sqr() / n2).clamp(0.0, 1.0);
    Ok((image, probability))
}
