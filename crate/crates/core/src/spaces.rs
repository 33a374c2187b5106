//! Domains, weights, orthonormal monomial bases and reproducing kernels.
//!
//! Three domains are supported: the Fock plane `ℂ`, the unit disk `𝔹¹` and the
//! unit ball `𝔹²`. On each, `dv_λ` is a probability measure:
//!
//! * Fock: `(λ/π) e^{−λ|z|²} dA`, `λ > 0`;
//! * disk: `((λ+1)/π) (1−|z|²)^λ dA`, `λ > −1`;
//! * ball: `Γ(λ+3)/(π² Γ(λ+1)) (1−|z|²)^λ dV`, `λ > −1`.
//!
//! Orthonormal bases consist of normalized monomials. The pluriharmonic space
//! is the orthogonal sum of the holomorphic space and the anti-holomorphic
//! space with constants removed, so its basis is `Holo(a), a ≥ 0` followed by
//! `Anti(b), b ≥ 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::special::{ln_factorial, ln_gamma};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    FockPlane,
    UnitDisk,
    UnitBall2,
}

impl DomainKind {
    pub fn dimension(self) -> usize {
        match self {
            DomainKind::FockPlane | DomainKind::UnitDisk => 1,
            DomainKind::UnitBall2 => 2,
        }
    }

    pub fn contains(self, p: &Point) -> bool {
        match (self, p) {
            (DomainKind::FockPlane, Point::Plane(z)) => z.re.is_finite() && z.im.is_finite(),
            (DomainKind::UnitDisk, Point::Plane(z)) => z.norm_sqr() < 1.0,
            (DomainKind::UnitBall2, Point::Pair(z1, z2)) => z1.norm_sqr() + z2.norm_sqr() < 1.0,
            _ => false,
        }
    }

    pub fn check(self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("{p} is not a point of {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFlavor {
    Holo,
    AntiHolo,
    Plurih,
    /// Pluriharmonic in `z₁`, holomorphic in `z₂`; only on `𝔹²`.
    #[serde(rename = "plurih_holo2d")]
    PlurihHolo2D,
}

/// A point of `ℂ` or `ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Plane(C64),
    Pair(C64, C64),
}

impl Point {
    pub fn plane(re: f64, im: f64) -> Self {
        Point::Plane(C64::new(re, im))
    }

    /// The first coordinate (the only one on one-dimensional domains).
    pub fn z1(&self) -> C64 {
        match *self {
            Point::Plane(z) | Point::Pair(z, _) => z,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            Point::Plane(z) => z.norm_sqr(),
            Point::Pair(a, b) => a.norm_sqr() + b.norm_sqr(),
        }
    }
}

/// Serialized as `[re, im]` or `[re₁, im₁, re₂, im₂]`.
impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Point::Plane(z) => [z.re, z.im].serialize(s),
            Point::Pair(a, b) => [a.re, a.im, b.re, b.im].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        match v[..] {
            [re, im] => Ok(Point::plane(re, im)),
            [a, b, c, e] => Ok(Point::Pair(C64::new(a, b), C64::new(c, e))),
            _ => Err(serde::de::Error::custom(format!(
                "a point has 2 or 4 real coordinates, got {}",
                v.len()
            ))),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Plane(z) => write!(f, "({}{:+}i)", z.re, z.im),
            Point::Pair(a, b) => write!(f, "({}{:+}i, {}{:+}i)", a.re, a.im, b.re, b.im),
        }
    }
}

/// Domain, weight and flavor of a function space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub domain: DomainKind,
    #[serde(rename = "lambda")]
    pub weight: f64,
    pub flavor: SpaceFlavor,
}

impl SpaceSpec {
    pub fn new(domain: DomainKind, weight: f64, flavor: SpaceFlavor) -> Result<Self> {
        let spec = SpaceSpec {
            domain,
            weight,
            flavor,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.weight.is_finite() {
            return Err(Error::config("weight λ must be finite"));
        }
        match self.domain {
            DomainKind::FockPlane if self.weight <= 0.0 => {
                return Err(Error::config(format!(
                    "Fock spaces need λ > 0, got {}",
                    self.weight
                )))
            }
            DomainKind::UnitDisk | DomainKind::UnitBall2 if self.weight <= -1.0 => {
                return Err(Error::config(format!(
                    "ball weights need λ > −1, got {}",
                    self.weight
                )))
            }
            _ => {}
        }
        let ok = match self.flavor {
            SpaceFlavor::PlurihHolo2D => self.domain == DomainKind::UnitBall2,
            _ => self.domain != DomainKind::UnitBall2,
        };
        if !ok {
            return Err(Error::config(format!(
                "flavor {:?} is not available on {:?}",
                self.flavor, self.domain
            )));
        }
        Ok(())
    }

    /// Same domain and weight, different flavor.
    pub fn with_flavor(&self, flavor: SpaceFlavor) -> Result<Self> {
        SpaceSpec::new(self.domain, self.weight, flavor)
    }

    pub fn with_weight(&self, weight: f64) -> Result<Self> {
        SpaceSpec::new(self.domain, weight, self.flavor)
    }
}

/// Index of an orthonormal basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisIndex {
    /// `e_a`, a normalized `z^a`. `Holo(0)` is the constant function.
    Holo { a: u32 },
    /// `ē_b`, a normalized `z̄^b`, `b ≥ 1`.
    Anti { b: u32 },
    /// `𝔢⁺_(a₁,a₂)`, a normalized `z₁^{a₁} z₂^{a₂}`.
    Plus { a1: u32, a2: u32 },
    /// `𝔢⁻_(b₁,b₂)`, a normalized `z̄₁^{b₁} z₂^{b₂}`, `b₁ ≥ 1`.
    Minus { b1: u32, b2: u32 },
}

impl BasisIndex {
    /// Degree `a₂` of the second coordinate, the block label on `𝔹²`.
    pub fn second_degree(&self) -> Option<u32> {
        match *self {
            BasisIndex::Plus { a2, .. } => Some(a2),
            BasisIndex::Minus { b2, .. } => Some(b2),
            _ => None,
        }
    }

    /// True for indices spanning the anti-holomorphic part (`Anti`, `Minus`).
    pub fn is_anti(&self) -> bool {
        matches!(self, BasisIndex::Anti { .. } | BasisIndex::Minus { .. })
    }

    /// The one-dimensional index on the disk that this `𝔹²` index reduces to.
    pub fn first_coordinate(&self) -> BasisIndex {
        match *self {
            BasisIndex::Plus { a1, .. } => BasisIndex::Holo { a: a1 },
            BasisIndex::Minus { b1, .. } => BasisIndex::Anti { b: b1 },
            other => other,
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Holo { a } => write!(f, "Holo {a}"),
            BasisIndex::Anti { b } => write!(f, "Anti {b}"),
            BasisIndex::Plus { a1, a2 } => write!(f, "Plus({a1},{a2})"),
            BasisIndex::Minus { b1, b2 } => write!(f, "Minus({b1},{b2})"),
        }
    }
}

/// Finite basis cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    /// Largest holomorphic degree `D⁺` (first coordinate on `𝔹²`).
    #[serde(default)]
    pub max_holo: u32,
    /// Largest anti-holomorphic degree `D⁻`.
    #[serde(default)]
    pub max_anti: u32,
    /// Largest second-coordinate degree `D₂` (`𝔹²` only).
    #[serde(default)]
    pub max_second: u32,
}

impl Truncation {
    pub fn holo(d: u32) -> Self {
        Truncation {
            max_holo: d,
            ..Default::default()
        }
    }

    pub fn anti(d: u32) -> Self {
        Truncation {
            max_anti: d,
            ..Default::default()
        }
    }

    /// `D⁺ = D⁻ = d`.
    pub fn plurih(d: u32) -> Self {
        Truncation {
            max_holo: d,
            max_anti: d,
            max_second: 0,
        }
    }

    pub fn phh(d_holo: u32, d_anti: u32, d_second: u32) -> Self {
        Truncation {
            max_holo: d_holo,
            max_anti: d_anti,
            max_second: d_second,
        }
    }

    /// The symmetric truncation with every cutoff of `flavor` set to `d`.
    pub fn uniform(flavor: SpaceFlavor, d: u32) -> Self {
        match flavor {
            SpaceFlavor::Holo => Truncation::holo(d),
            SpaceFlavor::AntiHolo => Truncation::anti(d),
            SpaceFlavor::Plurih => Truncation::plurih(d),
            SpaceFlavor::PlurihHolo2D => Truncation::phh(d, d, d),
        }
    }

    /// `D⁺ = D⁻`; the basis is then closed under complex conjugation.
    pub fn is_conjugation_symmetric(&self) -> bool {
        self.max_holo == self.max_anti
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &Truncation) -> bool {
        self.max_holo >= other.max_holo
            && self.max_anti >= other.max_anti
            && self.max_second >= other.max_second
    }

    /// Every cutoff in use increased by `extra`. `D⁺` counts as in use unless
    /// the truncation is anti-holomorphic.
    pub fn widened(&self, extra: u32) -> Self {
        let bump = |d: u32, used: bool| if used { d + extra } else { d };
        Truncation {
            max_holo: bump(self.max_holo, self.max_holo > 0 || self.max_anti == 0),
            max_anti: bump(self.max_anti, self.max_anti > 0),
            max_second: bump(self.max_second, self.max_second > 0),
        }
    }

    pub fn check_for(&self, flavor: SpaceFlavor) -> Result<()> {
        let bad = match flavor {
            SpaceFlavor::Holo => self.max_anti != 0 || self.max_second != 0,
            SpaceFlavor::AntiHolo => self.max_holo != 0 || self.max_second != 0,
            SpaceFlavor::Plurih => self.max_second != 0,
            SpaceFlavor::PlurihHolo2D => false,
        };
        if bad {
            Err(Error::config(format!(
                "truncation {self:?} does not fit flavor {flavor:?}"
            )))
        } else {
            Ok(())
        }
    }
}

/// Ordered basis of the truncated space.
///
/// Holomorphic indices come first in ascending degree, then anti-holomorphic
/// ones. On `𝔹²` the basis is grouped by the second degree `a₂` and ordered as
/// above within each group. The anti-holomorphic space keeps its constant as
/// `Holo 0`.
pub fn enumerate_basis(space: &SpaceSpec, trunc: &Truncation) -> Result<Vec<BasisIndex>> {
    space.validate()?;
    trunc.check_for(space.flavor)?;
    let holo = |d: u32| (0..=d).map(|a| BasisIndex::Holo { a });
    let anti = |d: u32| (1..=d).map(|b| BasisIndex::Anti { b });
    let basis = match space.flavor {
        SpaceFlavor::Holo => holo(trunc.max_holo).collect(),
        SpaceFlavor::AntiHolo => holo(0).chain(anti(trunc.max_anti)).collect(),
        SpaceFlavor::Plurih => holo(trunc.max_holo).chain(anti(trunc.max_anti)).collect(),
        SpaceFlavor::PlurihHolo2D => {
            let mut out = Vec::new();
            for a2 in 0..=trunc.max_second {
                out.extend((0..=trunc.max_holo).map(|a1| BasisIndex::Plus { a1, a2 }));
                out.extend((1..=trunc.max_anti).map(|b1| BasisIndex::Minus { b1, b2: a2 }));
            }
            out
        }
    };
    Ok(basis)
}

fn check_index(space: &SpaceSpec, idx: &BasisIndex) -> Result<()> {
    let ok = match (space.flavor, idx) {
        (SpaceFlavor::Holo, BasisIndex::Holo { .. }) => true,
        (SpaceFlavor::AntiHolo, BasisIndex::Holo { a }) => *a == 0,
        (SpaceFlavor::AntiHolo | SpaceFlavor::Plurih, BasisIndex::Anti { b }) => *b >= 1,
        (SpaceFlavor::Plurih, BasisIndex::Holo { .. }) => true,
        (SpaceFlavor::PlurihHolo2D, BasisIndex::Plus { .. }) => true,
        (SpaceFlavor::PlurihHolo2D, BasisIndex::Minus { b1, .. }) => *b1 >= 1,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!(
            "index {idx} is not admissible for {:?}",
            space.flavor
        )))
    }
}

/// `ln N²` where `N` normalizes the monomial of `idx` in `L²(dv_λ)`.
pub fn ln_norm_sq_coefficient(domain: DomainKind, weight: f64, idx: &BasisIndex) -> f64 {
    match (domain, *idx) {
        (DomainKind::FockPlane, BasisIndex::Holo { a } | BasisIndex::Anti { b: a }) => {
            f64::from(a) * weight.ln() - ln_factorial(a)
        }
        (DomainKind::UnitDisk, BasisIndex::Holo { a } | BasisIndex::Anti { b: a }) => {
            let a_f = f64::from(a);
            ln_gamma(a_f + weight + 2.0) - ln_factorial(a) - ln_gamma(weight + 2.0)
        }
        (
            DomainKind::UnitBall2,
            BasisIndex::Plus { a1, a2 } | BasisIndex::Minus { b1: a1, b2: a2 },
        ) => {
            let total = f64::from(a1 + a2);
            ln_gamma(total + weight + 3.0)
                - ln_factorial(a1)
                - ln_factorial(a2)
                - ln_gamma(weight + 3.0)
        }
        _ => f64::NAN,
    }
}

/// Normalization constant `N` with `‖N · monomial‖_λ = 1`.
pub fn basis_coefficient(space: &SpaceSpec, idx: &BasisIndex) -> Result<f64> {
    space.validate()?;
    check_index(space, idx)?;
    let ln_n2 = ln_norm_sq_coefficient(space.domain, space.weight, idx);
    let n = (0.5 * ln_n2).exp();
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(Error::Range(format!(
            "normalization of {idx} at λ = {} is not representable (ln N² = {ln_n2})",
            space.weight
        )))
    }
}

/// Value of the orthonormal basis function `idx` at `p`.
pub fn eval_basis(space: &SpaceSpec, idx: &BasisIndex, p: &Point) -> Result<C64> {
    space.domain.check(p)?;
    let n = basis_coefficient(space, idx)?;
    Ok(n * monomial(idx, p))
}

/// The bare monomial of `idx` (no normalization). The point must have the
/// dimension of the index.
pub(crate) fn monomial(idx: &BasisIndex, p: &Point) -> C64 {
    match (*idx, *p) {
        (BasisIndex::Holo { a }, Point::Plane(z)) => z.powu(a),
        (BasisIndex::Anti { b }, Point::Plane(z)) => z.conj().powu(b),
        (BasisIndex::Plus { a1, a2 }, Point::Pair(z1, z2)) => z1.powu(a1) * z2.powu(a2),
        (BasisIndex::Minus { b1, b2 }, Point::Pair(z1, z2)) => z1.conj().powu(b1) * z2.powu(b2),
        _ => C64::new(f64::NAN, f64::NAN),
    }
}

/// Holomorphic kernel `K^λ(w, z)` of the domain.
fn holo_kernel(domain: DomainKind, weight: f64, w: &Point, z: &Point) -> C64 {
    match (domain, *w, *z) {
        (DomainKind::FockPlane, Point::Plane(w), Point::Plane(z)) => (weight * w * z.conj()).exp(),
        (DomainKind::UnitDisk, Point::Plane(w), Point::Plane(z)) => {
            (-(weight + 2.0) * (C64::new(1.0, 0.0) - w * z.conj()).ln()).exp()
        }
        (DomainKind::UnitBall2, Point::Pair(w1, w2), Point::Pair(z1, z2)) => {
            let inner = w1 * z1.conj() + w2 * z2.conj();
            (-(weight + 3.0) * (C64::new(1.0, 0.0) - inner).ln()).exp()
        }
        _ => C64::new(f64::NAN, f64::NAN),
    }
}

/// Reproducing kernel of the space, `K(w, z)`, holomorphic in the first argument
/// for the holomorphic flavor.
///
/// For the `𝔹²` flavor the kernel is summed in closed form:
/// `(1 − w·z̄)^{−(λ+3)} + (1 − w̄₁z₁ − w₂z̄₂)^{−(λ+3)} − (1 − w₂z̄₂)^{−(λ+3)}`.
pub fn kernel(space: &SpaceSpec, w: &Point, z: &Point) -> Result<C64> {
    space.validate()?;
    space.domain.check(w)?;
    space.domain.check(z)?;
    let lam = space.weight;
    let k = match space.flavor {
        SpaceFlavor::Holo => holo_kernel(space.domain, lam, w, z),
        SpaceFlavor::AntiHolo => holo_kernel(space.domain, lam, z, w),
        SpaceFlavor::Plurih => {
            let k = holo_kernel(space.domain, lam, w, z);
            k + k.conj() - 1.0
        }
        SpaceFlavor::PlurihHolo2D => {
            let (Point::Pair(w1, w2), Point::Pair(z1, z2)) = (*w, *z) else {
                unreachable!("checked by domain")
            };
            let one = C64::new(1.0, 0.0);
            let pow = |base: C64| (-(lam + 3.0) * base.ln()).exp();
            holo_kernel(space.domain, lam, w, z) + pow(one - w1.conj() * z1 - w2 * z2.conj())
                - pow(one - w2 * z2.conj())
        }
    };
    Ok(k)
}

/// Diagonal `K(z, z)` in real arithmetic.
pub fn kernel_diagonal(space: &SpaceSpec, z: &Point) -> Result<f64> {
    let k = kernel(space, z, z)?;
    Ok(k.re)
}

/// Euclidean distance on `ℂ`, hyperbolic distance `β = artanh ρ` on the balls,
/// with `ρ` the pseudo-hyperbolic distance.
pub fn metric_distance(domain: DomainKind, z: &Point, w: &Point) -> Result<f64> {
    domain.check(z)?;
    domain.check(w)?;
    let d = match domain {
        DomainKind::FockPlane => (z.z1() - w.z1()).norm(),
        DomainKind::UnitDisk => pseudo_hyperbolic_disk(z.z1(), w.z1()).atanh(),
        DomainKind::UnitBall2 => {
            let (Point::Pair(z1, z2), Point::Pair(w1, w2)) = (*z, *w) else {
                unreachable!("checked by domain")
            };
            let inner = z1 * w1.conj() + z2 * w2.conj();
            let denom = (C64::new(1.0, 0.0) - inner).norm_sqr();
            let rho_sq = 1.0 - (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / denom;
            rho_sq.max(0.0).sqrt().min(1.0).atanh()
        }
    };
    Ok(d)
}

fn pseudo_hyperbolic_disk(z: C64, w: C64) -> f64 {
    let num = (z - w).norm();
    if num == 0.0 {
        return 0.0;
    }
    (num / (C64::new(1.0, 0.0) - z.conj() * w).norm()).min(1.0)
}

/// The disk involution `φ_z(u) = (z − u)/(1 − z̄u)` exchanging `z` and 0.
pub fn disk_involution(z: C64, u: C64) -> C64 {
    (z - u) / (C64::new(1.0, 0.0) - z.conj() * u)
}
