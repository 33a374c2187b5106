//! Tensor quadrature rules for the probability measures `dv_λ`.
//!
//! Every rule is a product of radial Gauss rules and an equispaced angular
//! rule per complex coordinate:
//!
//! * disk: `x = |z|²` with weight `(1−x)^λ` on `[0, 1]`;
//! * Fock: `t = λ|z|²` with weight `e^{−t}` on `[0, ∞)`;
//! * ball: `x₁ = |z₁|²`, `x₂ = |z₂|²/(1−|z₁|²)` with weights `(1−x₁)^{λ+1}`
//!   and `(1−x₂)^λ`, so that `z₂ = √(x₂(1−x₁)) e^{iθ₂}`.
//!
//! A rule declared exact to `max_degree = d` reproduces `∫ z^α z̄^β dv_λ` whenever
//! every exponent is at most `d`. The exactness audit runs on construction.

pub mod gauss;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spaces::{DomainKind, Point, SpaceSpec};
use crate::special::{ln_factorial, ln_gamma};
use crate::symbol::Symbol;
use crate::{Error, Result, C64};
use gauss::{Family, GaussRule};

/// Relative tolerance of the construction-time moment audit.
pub const AUDIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    domain: DomainKind,
    weight: f64,
    max_degree: u32,
    angular_order: u32,
    /// One factor per complex coordinate, in the substituted variable.
    radial: Vec<GaussRule>,
    nodes: Vec<Point>,
    weights: Vec<f64>,
}

/// Rule exact for all moments with exponents `≤ max_degree`, with
/// `angular_order` equispaced angles per coordinate.
pub fn rule_for(space: &SpaceSpec, max_degree: u32, angular_order: u32) -> Result<QuadratureRule> {
    space.validate()?;
    QuadratureRule::new(space.domain, space.weight, max_degree, angular_order)
}

fn radial_families(domain: DomainKind, weight: f64) -> Vec<Family> {
    match domain {
        DomainKind::FockPlane => vec![Family::Laguerre],
        DomainKind::UnitDisk => vec![Family::Jacobi { alpha: weight }],
        DomainKind::UnitBall2 => vec![
            Family::Jacobi {
                alpha: weight + 1.0,
            },
            Family::Jacobi { alpha: weight },
        ],
    }
}

/// Radial node counts: `x^k` with `k ≤ d` (and `k ≤ 2d` for the first ball factor).
fn radial_counts(domain: DomainKind, d: u32) -> Vec<usize> {
    let half = (d / 2 + 1) as usize;
    match domain {
        DomainKind::FockPlane | DomainKind::UnitDisk => vec![half],
        DomainKind::UnitBall2 => vec![(d + 1) as usize, half],
    }
}

fn radial_degrees(domain: DomainKind, d: u32) -> Vec<u32> {
    match domain {
        DomainKind::FockPlane | DomainKind::UnitDisk => vec![d],
        DomainKind::UnitBall2 => vec![2 * d, d],
    }
}

/// `e^{2πik/M}`, with `e^{iθ_{M−k}} = conj e^{iθ_k}` holding exactly.
fn angles(m: u32) -> impl Iterator<Item = C64> + Clone {
    let unit = move |k: u32| C64::from_polar(1.0, 2.0 * PI * f64::from(k) / f64::from(m));
    (0..m).map(move |k| {
        if 2 * k == m {
            C64::new(-1.0, 0.0)
        } else if 2 * k > m {
            unit(m - k).conj()
        } else {
            unit(k)
        }
    })
}

impl QuadratureRule {
    pub fn new(
        domain: DomainKind,
        weight: f64,
        max_degree: u32,
        angular_order: u32,
    ) -> Result<Self> {
        if angular_order <= 2 * max_degree {
            return Err(Error::config(format!(
                "angular order {angular_order} too small for declared degree {max_degree} (need > {})",
                2 * max_degree
            )));
        }
        let families = radial_families(domain, weight);
        let radial = families
            .iter()
            .zip(radial_counts(domain, max_degree))
            .map(|(fam, n)| fam.gauss(n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_radial(domain, weight, max_degree, angular_order, radial)
    }

    fn from_radial(
        domain: DomainKind,
        weight: f64,
        max_degree: u32,
        angular_order: u32,
        radial: Vec<GaussRule>,
    ) -> Result<Self> {
        let (nodes, weights) = materialize(domain, weight, angular_order, &radial);
        let rule = QuadratureRule {
            domain,
            weight,
            max_degree,
            angular_order,
            radial,
            nodes,
            weights,
        };
        rule.audit()?;
        Ok(rule)
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn angular_order(&self) -> u32 {
        self.angular_order
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Radial factors in the substituted variables (`x`, `t`, or `x₁, x₂`).
    pub fn radial_factors(&self) -> &[GaussRule] {
        &self.radial
    }

    /// Radii `|z|` and weights of the radial factor of a one-dimensional rule.
    pub fn radii(&self) -> Vec<(f64, f64)> {
        let f = &self.radial[0];
        f.nodes
            .iter()
            .zip(&f.weights)
            .map(|(&x, &w)| {
                let r = match self.domain {
                    DomainKind::FockPlane => (x / self.weight).sqrt(),
                    _ => x.sqrt(),
                };
                (r, w)
            })
            .collect()
    }

    /// Unit-modulus angular nodes `e^{iθ_k}`; each carries weight `1/M`.
    pub fn angular_nodes(&self) -> Vec<C64> {
        angles(self.angular_order).collect()
    }

    /// For Fock rules, the magnitude of the last radial weight, reported as
    /// the truncation estimate of the Laguerre family.
    pub fn tail_estimate(&self) -> Option<f64> {
        match self.domain {
            DomainKind::FockPlane => self.radial[0].weights.last().copied(),
            _ => None,
        }
    }

    /// True if `self` was built for `domain` at weight `weight`.
    pub fn matches(&self, domain: DomainKind, weight: f64) -> bool {
        self.domain == domain && self.weight == weight
    }

    fn audit(&self) -> Result<()> {
        let degrees = radial_degrees(self.domain, self.max_degree);
        for ((fam, rule), &deg) in radial_families(self.domain, self.weight)
            .iter()
            .zip(&self.radial)
            .zip(&degrees)
        {
            for k in 0..=deg {
                // Relative to the exact value, in the log domain: high Laguerre
                // moments overflow.
                let ln_exact = fam.ln_moment(k);
                let kf = f64::from(k);
                let ratio: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| {
                        if k == 0 {
                            *w
                        } else {
                            (w.ln() + kf * x.ln() - ln_exact).exp()
                        }
                    })
                    .sum();
                if (ratio - 1.0).abs() > AUDIT_TOLERANCE {
                    return Err(Error::numeric(format!(
                        "quadrature audit failed: radial moment {k} of {fam:?} is off by a factor {ratio}"
                    )));
                }
            }
        }
        let m = self.angular_order;
        for freq in 1..=(2 * self.max_degree).min(m - 1) {
            let s: C64 = angles(m).map(|e| e.powu(freq)).sum::<C64>() / f64::from(m);
            if s.norm() > 1e-13 {
                return Err(Error::numeric(format!(
                    "quadrature audit failed: angular frequency {freq} sums to {s}"
                )));
            }
        }
        let total = compensated_sum(&self.weights);
        if (total - 1.0).abs() > 1e-13 {
            return Err(Error::numeric(format!("quadrature weights sum to {total}")));
        }
        Ok(())
    }

    /// Serialized form with nodes as `[re, im]` pairs and weights as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let fmt = |v: &[f64]| v.iter().map(|w| format!("{w:e}")).collect::<Vec<_>>();
        let doc = RuleDoc {
            domain: self.domain,
            lambda: self.weight,
            max_degree: self.max_degree,
            angular_order: self.angular_order,
            radial: self
                .radial
                .iter()
                .map(|r| RadialDoc {
                    nodes: fmt(&r.nodes),
                    weights: fmt(&r.weights),
                })
                .collect(),
            nodes: self
                .nodes
                .iter()
                .map(|p| match *p {
                    Point::Plane(z) => vec![[z.re, z.im]],
                    Point::Pair(a, b) => vec![[a.re, a.im], [b.re, b.im]],
                })
                .collect(),
            weights: fmt(&self.weights),
        };
        serde_json::to_value(doc).expect("rule documents serialize")
    }

    /// Rebuild a rule from [`to_json`](Self::to_json) output. The audit is rerun.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: RuleDoc = serde_json::from_value(value.clone())?;
        let parse = |v: &[String]| {
            v.iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::config(format!("bad rule number {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()
        };
        let radial = doc
            .radial
            .iter()
            .map(|r| {
                Ok(GaussRule {
                    nodes: parse(&r.nodes)?,
                    weights: parse(&r.weights)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if radial.len() != doc.domain.dimension() {
            return Err(Error::config(
                "rule document has the wrong number of radial factors",
            ));
        }
        let rule = Self::from_radial(
            doc.domain,
            doc.lambda,
            doc.max_degree,
            doc.angular_order,
            radial,
        )?;
        if rule.weights.len() != doc.weights.len() {
            return Err(Error::config(
                "rule document node count does not match its radial factors",
            ));
        }
        Ok(rule)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    domain: DomainKind,
    lambda: f64,
    max_degree: u32,
    angular_order: u32,
    radial: Vec<RadialDoc>,
    nodes: Vec<Vec<[f64; 2]>>,
    weights: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadialDoc {
    nodes: Vec<String>,
    weights: Vec<String>,
}

fn materialize(
    domain: DomainKind,
    weight: f64,
    m: u32,
    radial: &[GaussRule],
) -> (Vec<Point>, Vec<f64>) {
    let ang: Vec<C64> = angles(m).collect();
    let wa = 1.0 / f64::from(m);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    match domain {
        DomainKind::FockPlane | DomainKind::UnitDisk => {
            for (&x, &w) in radial[0].nodes.iter().zip(&radial[0].weights) {
                let r = if domain == DomainKind::FockPlane {
                    (x / weight).sqrt()
                } else {
                    x.sqrt()
                };
                for e in &ang {
                    nodes.push(Point::Plane(e * r));
                    weights.push(w * wa);
                }
            }
        }
        DomainKind::UnitBall2 => {
            for (&x1, &w1) in radial[0].nodes.iter().zip(&radial[0].weights) {
                for (&x2, &w2) in radial[1].nodes.iter().zip(&radial[1].weights) {
                    let (r1, r2) = (x1.sqrt(), (x2 * (1.0 - x1)).sqrt());
                    for e1 in &ang {
                        for e2 in &ang {
                            nodes.push(Point::Pair(e1 * r1, e2 * r2));
                            weights.push(w1 * w2 * wa * wa);
                        }
                    }
                }
            }
        }
    }
    (nodes, weights)
}

/// Neumaier-compensated sum.
fn compensated_sum(xs: &[f64]) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = sum + x;
        c += if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        sum = t;
    }
    sum + c
}

/// `∫ z^α z̄^β dv_λ` in closed form. Exponents are per coordinate; one-dimensional
/// domains use only the first entry.
pub fn moment_closed_form(domain: DomainKind, weight: f64, holo: [u32; 2], anti: [u32; 2]) -> f64 {
    if holo != anti {
        return 0.0;
    }
    let [a1, a2] = holo;
    match domain {
        DomainKind::FockPlane => (ln_factorial(a1) - f64::from(a1) * weight.ln()).exp(),
        DomainKind::UnitDisk => (ln_factorial(a1) + ln_gamma(weight + 2.0)
            - ln_gamma(f64::from(a1) + weight + 2.0))
        .exp(),
        DomainKind::UnitBall2 => (ln_factorial(a1) + ln_factorial(a2) + ln_gamma(weight + 3.0)
            - ln_gamma(f64::from(a1 + a2) + weight + 3.0))
        .exp(),
    }
}

fn check_domain(rule: &QuadratureRule, p: &Point) -> Result<()> {
    let ok = matches!(
        (rule.domain, p),
        (DomainKind::UnitBall2, Point::Pair(..))
            | (
                DomainKind::FockPlane | DomainKind::UnitDisk,
                Point::Plane(_)
            )
    );
    if ok {
        Ok(())
    } else {
        Err(Error::config("symbol and rule dimensions differ"))
    }
}

/// `Σ wᵢ f(nodeᵢ)` for a closure. Node values are computed in parallel and
/// summed sequentially in node order, so results are bit-stable.
pub fn integrate_fn<F>(rule: &QuadratureRule, f: F) -> Result<C64>
where
    F: Fn(&Point) -> Result<C64> + Sync,
{
    let values: Vec<Result<C64>> = rule.nodes.par_iter().map(&f).collect();
    let mut acc = C64::new(0.0, 0.0);
    for ((v, w), p) in values.into_iter().zip(&rule.weights).zip(&rule.nodes) {
        let v = v?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::numeric(format!(
                "integrand is {v} at quadrature node {p}"
            )));
        }
        acc += v * *w;
    }
    Ok(acc)
}

/// `Σ wᵢ f(nodeᵢ)`.
pub fn integrate<S: Symbol + ?Sized>(f: &S, rule: &QuadratureRule) -> Result<C64> {
    if let Some(p) = rule.nodes.first() {
        check_domain(rule, p)?;
    }
    integrate_fn(rule, |p| f.eval(p))
}

/// `⟨f, g⟩ = Σ wᵢ f(nodeᵢ) conj g(nodeᵢ)`. Swapping the arguments conjugates the
/// result exactly.
pub fn inner_product<F: Symbol + ?Sized, G: Symbol + ?Sized>(
    f: &F,
    g: &G,
    rule: &QuadratureRule,
) -> Result<C64> {
    integrate_fn(rule, |p| Ok(f.eval(p)? * g.eval(p)?.conj()))
}
