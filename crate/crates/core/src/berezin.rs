//! Berezin transforms of symbols and operators, mean oscillation and sampled
//! oscillation.
//!
//! Symbol transforms use the closed-form kernels through a change of
//! variables that moves `z` to the origin:
//!
//! * disk: `B(f)(z) = ∫ f(φ_z(u)) dv_λ(u)` with `φ_z(u) = (z − u)/(1 − z̄u)`;
//! * Fock: `B(f)(z) = ∫ f(z + u) dv_λ(u)`.
//!
//! With `Q = K(φ_z(u), z) = e^{s + iφ}` the pluriharmonic transform carries the
//! extra density `(2cos φ − e^{−s})² · K(z,z)/(2K(z,z) − 1)`, evaluated in the
//! log domain so that large `λ` or `|z|` near the boundary do not overflow. The
//! anti-holomorphic transform of a function equals the holomorphic one since
//! `|K_ah(w,z)| = |K(w,z)|`.
//!
//! On the ball the transform is integrated directly against
//! `|K(w,z)|² / K(z,z)`.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::operators::OperatorMatrix;
use crate::quadrature::{integrate_fn, QuadratureRule};
use crate::spaces::{
    disk_involution, eval_basis, kernel, kernel_diagonal, DomainKind, Point, SpaceFlavor, SpaceSpec,
};
use crate::symbol::{Symbol, SymbolClassTags};
use crate::{Error, Result, C64};

/// Partial-kernel mass below which an operator-Berezin value is flagged.
pub const MASS_WARNING: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct BerezinSample {
    pub point: Point,
    #[serde(serialize_with = "ser_c64")]
    pub value: C64,
    pub flavor: SpaceFlavor,
    pub lambda: f64,
    pub rule_degree: u32,
    pub rule_angular_order: u32,
}

pub(crate) fn ser_c64<S: serde::Serializer>(c: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

fn ensure_rule(space: &SpaceSpec, rule: &QuadratureRule) -> Result<()> {
    if !rule.matches(space.domain, space.weight) {
        return Err(Error::config(format!(
            "Berezin transform at λ = {} needs a rule for {:?} at that weight",
            space.weight, space.domain
        )));
    }
    Ok(())
}

/// Pluriharmonic density relative to the holomorphic one, at `w = φ_z(u)`.
fn plurih_density(ln_q: C64, ln_k0: f64) -> f64 {
    let t = 2.0 * ln_q.im.cos() - (-ln_q.re).exp();
    t * t / (2.0 - (-ln_k0).exp())
}

/// `⟨f k_z, k_z⟩` with the flavor's normalized closed-form kernel.
pub fn berezin_symbol<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    z: &Point,
    rule: &QuadratureRule,
) -> Result<C64> {
    space.validate()?;
    space.domain.check(z)?;
    ensure_rule(space, rule)?;
    if let Some(c) = f.constant_value() {
        return Ok(c);
    }
    let lam = space.weight;
    let zc = z.z1();
    if space.domain != DomainKind::UnitBall2 && zc == C64::new(0.0, 0.0) && f.is_radial() {
        let mut acc = C64::new(0.0, 0.0);
        for (r, w) in rule.radii() {
            acc += f.eval(&Point::Plane(C64::new(r, 0.0)))? * w;
        }
        return finite(acc, z);
    }
    let value = match (space.domain, space.flavor) {
        (DomainKind::UnitBall2, _) => {
            let k0 = kernel_diagonal(space, z)?;
            if !(k0.is_finite() && k0 > 0.0) {
                return Err(Error::numeric(format!("kernel diagonal at {z} is {k0}")));
            }
            integrate_fn(rule, |w| {
                let k = kernel(space, w, z)?;
                Ok(f.eval(w)? * (k.norm_sqr() / k0))
            })?
        }
        (DomainKind::UnitDisk, flavor) => {
            let ln_k0 = -(lam + 2.0) * (1.0 - zc.norm_sqr()).ln();
            let one = C64::new(1.0, 0.0);
            integrate_fn(rule, |u| {
                let u = u.z1();
                let w = Point::Plane(disk_involution(zc, u));
                let v = f.eval(&w)?;
                if flavor == SpaceFlavor::Plurih {
                    let ln_q = (lam + 2.0) * (one - zc.conj() * u).ln() + ln_k0;
                    Ok(v * plurih_density(ln_q, ln_k0))
                } else {
                    Ok(v)
                }
            })?
        }
        (DomainKind::FockPlane, flavor) => {
            let ln_k0 = lam * zc.norm_sqr();
            integrate_fn(rule, |u| {
                let u = u.z1();
                let v = f.eval(&Point::Plane(zc + u))?;
                if flavor == SpaceFlavor::Plurih {
                    let uz = u * zc.conj();
                    let ln_q = C64::new(lam * (zc.norm_sqr() + uz.re), lam * uz.im);
                    Ok(v * plurih_density(ln_q, ln_k0))
                } else {
                    Ok(v)
                }
            })?
        }
    };
    finite(value, z)
}

fn finite(v: C64, z: &Point) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::numeric(format!(
            "Berezin transform at {z} is not finite"
        )))
    }
}

/// Operator-Berezin value with the partial-kernel mass `‖c‖²/K(z,z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorBerezin {
    #[serde(serialize_with = "ser_c64")]
    pub value: C64,
    pub mass: f64,
    /// Set when `mass < 0.5`: the truncation misses most of the kernel.
    pub low_mass: bool,
}

/// Truncated kernel coefficients `c_idx = conj(e_idx(z))` over `basis`.
pub fn kernel_coefficients(
    space: &SpaceSpec,
    basis: &[crate::BasisIndex],
    z: &Point,
) -> Result<Vec<C64>> {
    basis
        .iter()
        .map(|idx| eval_basis(space, idx, z).map(|v| v.conj()))
        .collect()
}

/// `cᴴ m c / ‖c‖²` with `c` the truncated kernel at `z`.
pub fn berezin_operator(m: &OperatorMatrix, z: &Point) -> Result<OperatorBerezin> {
    if !m.is_square() {
        return Err(Error::config(
            "operator Berezin transform needs a square operator",
        ));
    }
    let space = m.space;
    let c = kernel_coefficients(&space, &m.row_basis, z)?;
    let norm_sq: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    if !(norm_sq > 0.0 && norm_sq.is_finite()) {
        return Err(Error::numeric(format!(
            "truncated kernel at {z} has norm² {norm_sq}"
        )));
    }
    let n = c.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += m.entries[(i, j)] * c[j];
        }
        acc += c[i].conj() * row;
    }
    let value = acc / norm_sq;
    let k0 = kernel_diagonal(&space, z)?;
    let mass = if k0.is_finite() { norm_sq / k0 } else { 0.0 };
    Ok(OperatorBerezin {
        value,
        mass,
        low_mass: mass < MASS_WARNING,
    })
}

fn holomorphic(space: &SpaceSpec) -> SpaceSpec {
    match space.domain {
        DomainKind::UnitBall2 => *space,
        _ => SpaceSpec {
            flavor: SpaceFlavor::Holo,
            ..*space
        },
    }
}

/// `MO_λ(f, z) = B(|f|²)(z) − |B(f)(z)|²` with the holomorphic transform
/// (the space's own flavor on the ball), clipped at 0.
pub fn mean_oscillation<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    z: &Point,
    rule: &QuadratureRule,
) -> Result<f64> {
    let h = holomorphic(space);
    let b = berezin_symbol(&h, f, z, rule)?;
    let sq = crate::symbol::FnSymbol::new(|p: &Point| Ok(C64::new(f.eval(p)?.norm_sqr(), 0.0)));
    let b2 = berezin_symbol(&h, &sq, z, rule)?;
    Ok((b2.re - b.norm_sqr()).max(0.0))
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn seed_phase(seed: u64) -> f64 {
    // Fractional part of seed·(golden ratio), computed without overflow.
    let frac = ((seed % 1_000_000_007) as f64 * GOLDEN).fract();
    2.0 * PI * frac
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Ball automorphism `φ_a` exchanging `a` and the origin.
pub fn ball_involution(a: (C64, C64), z: (C64, C64)) -> (C64, C64) {
    let a_sq = a.0.norm_sqr() + a.1.norm_sqr();
    if a_sq == 0.0 {
        return (-z.0, -z.1);
    }
    let za = z.0 * a.0.conj() + z.1 * a.1.conj();
    let p = (a.0 * (za / a_sq), a.1 * (za / a_sq));
    let q = (z.0 - p.0, z.1 - p.1);
    let s = (1.0 - a_sq).sqrt();
    let denom = C64::new(1.0, 0.0) - za;
    ((a.0 - p.0 - q.0 * s) / denom, (a.1 - p.1 - q.1 * s) / denom)
}

/// Sample points of the metric ball `{w : d(z, w) ≤ 1}`: half on its boundary,
/// half spread over the interior. Deterministic for fixed inputs.
pub fn metric_ball_samples(
    domain: DomainKind,
    z: &Point,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    domain.check(z)?;
    let phase = seed_phase(seed);
    let n_boundary = n_samples.div_ceil(2);
    let n_inner = n_samples - n_boundary;
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(n_samples);
    match domain {
        DomainKind::FockPlane | DomainKind::UnitDisk => {
            let rho = if domain == DomainKind::FockPlane {
                1.0
            } else {
                1f64.tanh()
            };
            let mut offsets: Vec<C64> = (0..n_boundary)
                .map(|k| C64::from_polar(rho, phase + 2.0 * PI * k as f64 / n_boundary as f64))
                .collect();
            offsets.extend((0..n_inner).map(|k| {
                let r = rho * ((k as f64 + 0.5) / n_inner as f64).sqrt();
                C64::from_polar(r, phase + k as f64 * golden_angle)
            }));
            let zc = z.z1();
            for u in offsets {
                let w = if domain == DomainKind::FockPlane {
                    zc + u
                } else {
                    disk_involution(zc, u)
                };
                out.push(Point::Plane(w));
            }
        }
        DomainKind::UnitBall2 => {
            let Point::Pair(a1, a2) = *z else {
                unreachable!("checked by domain")
            };
            let rho = 1f64.tanh();
            for k in 0..n_samples {
                let i = k as u64 + 1;
                let radius = if k < n_boundary {
                    rho
                } else {
                    rho * halton(i, 2).powf(0.25)
                };
                let alpha = (halton(i, 3)).sqrt().asin();
                let t1 = phase + 2.0 * PI * halton(i, 5);
                let t2 = phase + 2.0 * PI * halton(i, 7);
                let u = (
                    C64::from_polar(radius * alpha.cos(), t1),
                    C64::from_polar(radius * alpha.sin(), t2),
                );
                let (w1, w2) = ball_involution((a1, a2), u);
                out.push(Point::Pair(w1, w2));
            }
        }
    }
    out.retain(|p| domain.contains(p));
    Ok(out)
}

/// Sampled `Osc(f)(z) = sup{|f(z) − f(w)| : d(z, w) ≤ 1}`; a lower bound of the
/// supremum.
pub fn oscillation<S: Symbol + ?Sized>(
    f: &S,
    z: &Point,
    domain: DomainKind,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    let fz = f.eval(z)?;
    let mut best = 0.0f64;
    for w in metric_ball_samples(domain, z, n_samples, seed)? {
        best = best.max((fz - f.eval(&w)?).norm());
    }
    Ok(best)
}

/// Berezin transforms at many points, in parallel and in input order.
pub fn berezin_batch<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    points: &[Point],
    rule: &QuadratureRule,
) -> Result<Vec<BerezinSample>> {
    points
        .par_iter()
        .map(|p| {
            Ok(BerezinSample {
                point: *p,
                value: berezin_symbol(space, f, p, rule)?,
                flavor: space.flavor,
                lambda: space.weight,
                rule_degree: rule.max_degree(),
                rule_angular_order: rule.angular_order(),
            })
        })
        .collect()
}

/// CSV with columns `lambda,flavor,re_z,im_z,re_z2,im_z2,re_value,im_value`;
/// the `z2` columns are empty on one-dimensional domains.
pub fn write_berezin_csv<W: Write>(samples: &[BerezinSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda", "flavor", "re_z", "im_z", "re_z2", "im_z2", "re_value", "im_value",
    ])?;
    for s in samples {
        let (z1, z2) = match s.point {
            Point::Plane(z) => (z, None),
            Point::Pair(a, b) => (a, Some(b)),
        };
        let flavor = serde_json::to_value(s.flavor)?
            .as_str()
            .unwrap_or_default()
            .to_string();
        w.write_record([
            format!("{}", s.lambda),
            flavor,
            format!("{:e}", z1.re),
            format!("{:e}", z1.im),
            z2.map(|v| format!("{:e}", v.re)).unwrap_or_default(),
            z2.map(|v| format!("{:e}", v.im)).unwrap_or_default(),
            format!("{:e}", s.value.re),
            format!("{:e}", s.value.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of the numerical check attached to one class tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TagCheck {
    pub tag: &'static str,
    /// Statistic the verdict is based on (see [`check_tags`]).
    pub statistic: f64,
    pub consistent: bool,
}

/// Boundary shells used by the tag checks.
fn probe_radii(domain: DomainKind) -> [f64; 3] {
    match domain {
        DomainKind::UnitDisk | DomainKind::UnitBall2 => [0.9, 0.99, 0.999],
        DomainKind::FockPlane => [5.0, 10.0, 20.0],
    }
}

fn shell_points(domain: DomainKind, r: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let z = C64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
            match domain {
                DomainKind::UnitBall2 => Point::Pair(z, C64::new(0.0, 0.0)),
                _ => Point::Plane(z),
            }
        })
        .collect()
}

/// Runs the diagnostic tied to each asserted tag:
///
/// * `bounded`: `max |f|` over the probe shells; consistent when finite.
/// * `continuous_up_to_boundary`: largest radial jump `|f(r₂ζ) − f(r₃ζ)|`
///   between the two outer shells; consistent below `0.05·(1 + max|f|)`.
/// * `vanishes_at_boundary`: `max |f|` on the outermost shell; consistent below `1e-3`.
/// * `vanishing_oscillation`: sampled `Osc` on the outermost shell; consistent
///   when it does not exceed the value on the innermost shell.
pub fn check_tags<S: Symbol + ?Sized>(
    domain: DomainKind,
    f: &S,
    tags: &SymbolClassTags,
) -> Result<Vec<TagCheck>> {
    let radii = probe_radii(domain);
    let n = 64;
    let shell_max = |r: f64| -> Result<f64> {
        let mut m = 0.0f64;
        for p in shell_points(domain, r, n) {
            m = m.max(f.eval(&p)?.norm());
        }
        Ok(m)
    };
    let mut out = Vec::new();
    if tags.bounded {
        let mut m = 0.0f64;
        for r in radii {
            m = m.max(shell_max(r)?);
        }
        out.push(TagCheck {
            tag: "bounded",
            statistic: m,
            consistent: m.is_finite(),
        });
    }
    if tags.continuous_up_to_boundary {
        let (a, b) = (
            shell_points(domain, radii[1], n),
            shell_points(domain, radii[2], n),
        );
        let mut jump = 0.0f64;
        let mut sup = 0.0f64;
        for (p, q) in a.iter().zip(&b) {
            let (fp, fq) = (f.eval(p)?, f.eval(q)?);
            jump = jump.max((fp - fq).norm());
            sup = sup.max(fp.norm()).max(fq.norm());
        }
        out.push(TagCheck {
            tag: "continuous_up_to_boundary",
            statistic: jump,
            consistent: jump < 0.05 * (1.0 + sup),
        });
    }
    if tags.vanishes_at_boundary {
        let m = shell_max(radii[2])?;
        out.push(TagCheck {
            tag: "vanishes_at_boundary",
            statistic: m,
            consistent: m < 1e-3,
        });
    }
    if tags.vanishing_oscillation {
        let osc_on = |r: f64| -> Result<f64> {
            let mut m = 0.0f64;
            for p in shell_points(domain, r, 16) {
                m = m.max(oscillation(f, &p, domain, 32, 0)?);
            }
            Ok(m)
        };
        let (inner, outer) = (osc_on(radii[0])?, osc_on(radii[2])?);
        out.push(TagCheck {
            tag: "vanishing_oscillation",
            statistic: outer,
            consistent: outer <= inner + 1e-12,
        });
    }
    Ok(out)
}
