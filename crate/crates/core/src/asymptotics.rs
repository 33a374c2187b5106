//! λ-sweeps of norms, semi-commutators, commutators and Berezin transforms.
//!
//! Each sweep visits the weights in ascending order, builds the truncation and
//! quadrature rule for that weight from the configured policies, and hands one
//! [`SweepRecord`] to a sink as soon as it is computed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::berezin::{berezin_operator, berezin_symbol};
use crate::operators::{
    assemble_toeplitz, commutator, extract_blocks, node_sup, operator_norm, semi_commutator,
};
use crate::quadrature::{rule_for, QuadratureRule};
use crate::spaces::{DomainKind, Point, SpaceFlavor, SpaceSpec, Truncation};
use crate::symbol::{PolyDegree, Symbol, SymbolExpr};
use crate::{Error, Result, C64};

/// How the basis cutoff depends on λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TruncationPolicy {
    /// `D(λ) = base + ⌈slope·λ⌉`.
    Scaled {
        base: u32,
        slope: f64,
    },
    Fixed {
        degree: u32,
    },
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::Scaled {
            base: 10,
            slope: 2.0,
        }
    }
}

impl TruncationPolicy {
    pub fn degree(&self, lambda: f64) -> Result<u32> {
        match *self {
            TruncationPolicy::Fixed { degree } => Ok(degree),
            TruncationPolicy::Scaled { base, slope } => {
                let extra = (slope * lambda).ceil();
                if !(0.0..1e6).contains(&extra) {
                    return Err(Error::config(format!(
                        "truncation slope {slope} at λ = {lambda} gives {extra}"
                    )));
                }
                Ok(base + extra as u32)
            }
        }
    }
}

/// How the quadrature rule depends on the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuadraturePolicy {
    /// Exact for every product the sweep forms, plus `margin` degrees; a
    /// non-polynomial symbol counts as degree `margin`.
    Auto { margin: u32 },
    /// The same orders at every λ.
    Fixed { max_degree: u32, angular_order: u32 },
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy::Auto { margin: 16 }
    }
}

impl QuadraturePolicy {
    /// `(max_degree, angular_order)` for basis degrees up to `basis_degree`
    /// and symbols with the given total polynomial degree.
    pub fn orders(&self, basis_degree: u32, symbol_degree: Option<u32>) -> (u32, u32) {
        match *self {
            QuadraturePolicy::Fixed {
                max_degree,
                angular_order,
            } => (max_degree, angular_order),
            QuadraturePolicy::Auto { margin } => {
                let d = 2 * basis_degree + symbol_degree.unwrap_or(margin) + margin;
                (d, 2 * d + 1)
            }
        }
    }
}

fn default_flavor() -> SpaceFlavor {
    SpaceFlavor::Plurih
}

fn default_inner_extra() -> u32 {
    10
}

fn default_berezin_quadrature() -> QuadraturePolicy {
    QuadraturePolicy::Fixed {
        max_degree: 120,
        angular_order: 241,
    }
}

/// Parameters shared by all sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub domain: DomainKind,
    #[serde(default = "default_flavor")]
    pub flavor: SpaceFlavor,
    pub lambdas: Vec<f64>,
    pub f: SymbolExpr,
    #[serde(default)]
    pub g: Option<SymbolExpr>,
    /// Candidate bracket for the third quantization property.
    #[serde(default)]
    pub h: Option<SymbolExpr>,
    #[serde(default)]
    pub truncation: TruncationPolicy,
    #[serde(default)]
    pub quadrature: QuadraturePolicy,
    /// Rule for closed-form-kernel Berezin transforms at the sample points.
    #[serde(default = "default_berezin_quadrature")]
    pub berezin_quadrature: QuadraturePolicy,
    /// Extra degrees of the inner sum in operator products.
    #[serde(default = "default_inner_extra")]
    pub inner_extra: u32,
    /// Berezin sample points.
    #[serde(default)]
    pub points: Vec<Point>,
    /// Number of extra points from [`sample_grid`].
    #[serde(default)]
    pub grid: usize,
}

impl SweepConfig {
    pub fn new(domain: DomainKind, lambdas: Vec<f64>, f: SymbolExpr) -> Self {
        SweepConfig {
            domain,
            flavor: SpaceFlavor::Plurih,
            lambdas,
            f,
            g: None,
            h: None,
            truncation: TruncationPolicy::default(),
            quadrature: QuadraturePolicy::default(),
            berezin_quadrature: default_berezin_quadrature(),
            inner_extra: default_inner_extra(),
            points: Vec::new(),
            grid: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain == DomainKind::UnitBall2 {
            return Err(Error::config("sweeps run on the disk or the Fock plane"));
        }
        if self.flavor == SpaceFlavor::PlurihHolo2D {
            return Err(Error::config("sweeps need a one-dimensional flavor"));
        }
        if self.lambdas.is_empty() {
            return Err(Error::config("sweep needs at least one λ"));
        }
        for w in self.lambdas.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::config(format!(
                    "λ list must be strictly ascending, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &lam in &self.lambdas {
            SpaceSpec::new(self.domain, lam, self.flavor)?;
        }
        for s in [Some(&self.f), self.g.as_ref(), self.h.as_ref()]
            .into_iter()
            .flatten()
        {
            s.check_dimension(1)?;
        }
        for p in &self.points {
            self.domain.check(p)?;
        }
        Ok(())
    }

    /// Explicit points followed by the sample grid.
    pub fn sample_points(&self) -> Vec<Point> {
        let mut pts = self.points.clone();
        pts.extend(sample_grid(self.domain, self.grid));
        pts
    }

    fn space(&self, lambda: f64) -> Result<SpaceSpec> {
        SpaceSpec::new(self.domain, lambda, self.flavor)
    }

    fn g(&self) -> Result<&SymbolExpr> {
        self.g
            .as_ref()
            .ok_or_else(|| Error::config("this sweep needs a second symbol g"))
    }
}

/// `n` deterministic interior points: a sunflower spiral filling the disk of
/// radius 0.8, or radius 2 on the Fock plane.
pub fn sample_grid(domain: DomainKind, n: usize) -> Vec<Point> {
    let radius = match domain {
        DomainKind::UnitDisk | DomainKind::UnitBall2 => 0.8,
        DomainKind::FockPlane => 2.0,
    };
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = C64::from_polar(
                radius * ((k as f64 + 0.5) / n as f64).sqrt(),
                k as f64 * golden_angle,
            );
            match domain {
                DomainKind::UnitBall2 => Point::Pair(z * 0.7, z * 0.5),
                _ => Point::Plane(z),
            }
        })
        .collect()
}

/// Diagnostics at one Berezin sample point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDiagnostic {
    pub point: Point,
    /// `|B(f)(z) − f(z)|` with the closed-form kernel.
    pub berezin_error: f64,
    /// Partial-kernel mass of the truncation at `z`, when one is used.
    pub mass: Option<f64>,
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub truncation: u32,
    pub rule_degree: u32,
    pub rule_angular_order: u32,
    pub sup_node: f64,
    pub norm_ph: Option<f64>,
    pub norm_holo: Option<f64>,
    /// `sup_node − norm_ph`.
    pub gap: Option<f64>,
    pub semicommutator: Option<f64>,
    /// Norms of the holo/anti blocks `(1,1), (1,2), (2,1), (2,2)`.
    pub semicommutator_blocks: Option<[f64; 4]>,
    pub commutator: Option<f64>,
    pub lambda_commutator: Option<f64>,
    /// `‖(λ/i)[T_f, T_g] − T_h‖`.
    pub third: Option<f64>,
    /// Largest `|B([T_f, T_g])(z)|` over the sample points.
    pub commutator_berezin_max: Option<f64>,
    /// Largest `|B(T_h)(z)|`, the lower bound for `third`.
    pub h_berezin_max: Option<f64>,
    pub samples: Vec<SampleDiagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Norm,
    Semicommutator,
    Third,
    BerezinConvergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn column(&self, pick: impl Fn(&SweepRecord) -> Option<f64>) -> Vec<Option<f64>> {
        self.records.iter().map(pick).collect()
    }
}

struct Setup {
    space: SpaceSpec,
    d: u32,
    trunc: Truncation,
    inner: Truncation,
    rule: QuadratureRule,
    berezin_rule: QuadratureRule,
}

fn total_degree(syms: &[&SymbolExpr]) -> Option<u32> {
    let mut acc = PolyDegree::ZERO;
    for s in syms {
        acc = acc.add(s.polynomial_degree()?);
    }
    Some(acc.max_exponent())
}

fn setup(cfg: &SweepConfig, lambda: f64, syms: &[&SymbolExpr], products: bool) -> Result<Setup> {
    let space = cfg.space(lambda)?;
    let d = cfg.truncation.degree(lambda)?;
    let trunc = Truncation::uniform(cfg.flavor, d);
    let inner = if products {
        trunc.widened(cfg.inner_extra)
    } else {
        trunc
    };
    let top = if products { d + cfg.inner_extra } else { d };
    let (deg, ang) = cfg.quadrature.orders(top, total_degree(syms));
    let rule = rule_for(&space, deg, ang)?;
    let (bdeg, bang) = cfg.berezin_quadrature.orders(d, total_degree(&syms[..1]));
    let berezin_rule = if (bdeg, bang) == (deg, ang) {
        rule.clone()
    } else {
        rule_for(&space, bdeg, bang)?
    };
    Ok(Setup {
        space,
        d,
        trunc,
        inner,
        rule,
        berezin_rule,
    })
}

fn base_record(s: &Setup, sup_node: f64) -> SweepRecord {
    SweepRecord {
        lambda: s.space.weight,
        truncation: s.d,
        rule_degree: s.rule.max_degree(),
        rule_angular_order: s.rule.angular_order(),
        sup_node,
        ..Default::default()
    }
}

fn sample_diagnostics(
    s: &Setup,
    f: &SymbolExpr,
    points: &[Point],
    with_mass: bool,
) -> Result<Vec<SampleDiagnostic>> {
    let id = if with_mass {
        Some(crate::operators::OperatorMatrix::identity(
            &s.space, &s.trunc,
        )?)
    } else {
        None
    };
    points
        .iter()
        .map(|p| {
            let b = berezin_symbol(&s.space, f, p, &s.berezin_rule)?;
            let mass = match &id {
                Some(m) => Some(berezin_operator(m, p)?.mass),
                None => None,
            };
            Ok(SampleDiagnostic {
                point: *p,
                berezin_error: (b - f.eval(p)?).norm(),
                mass,
            })
        })
        .collect()
}

fn run<F>(
    kind: SweepKind,
    cfg: &SweepConfig,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
    mut one: F,
) -> Result<SweepReport>
where
    F: FnMut(f64) -> Result<SweepRecord>,
{
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.lambdas.len());
    for &lam in &cfg.lambdas {
        let rec = one(lam)?;
        sink(&rec)?;
        records.push(rec);
    }
    Ok(SweepReport {
        kind,
        config: cfg.clone(),
        records,
    })
}

/// A sink that drops records.
pub fn discard(_: &SweepRecord) -> Result<()> {
    Ok(())
}

/// `‖T_f‖` on the configured flavor and on its holomorphic block, against
/// the node sup of `|f|`.
pub fn norm_sweep(
    cfg: &SweepConfig,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
) -> Result<SweepReport> {
    let points = cfg.sample_points();
    run(SweepKind::Norm, cfg, sink, |lam| {
        let s = setup(cfg, lam, &[&cfg.f], false)?;
        let t = assemble_toeplitz(&s.space, &cfg.f, &s.trunc, &s.rule)?;
        let norm = operator_norm(&t);
        let norm_holo = match cfg.flavor {
            SpaceFlavor::Plurih => Some(operator_norm(&extract_blocks(&t)?.t)),
            SpaceFlavor::Holo => Some(norm),
            _ => None,
        };
        let mut rec = base_record(&s, node_sup(&cfg.f, &s.rule)?);
        rec.norm_ph = Some(norm);
        rec.norm_holo = norm_holo;
        rec.gap = Some(rec.sup_node - norm);
        rec.samples = sample_diagnostics(&s, &cfg.f, &points, true)?;
        Ok(rec)
    })
}

/// `‖T_f T_g − T_{fg}‖` with its block norms on the pluriharmonic flavor.
pub fn semicommutator_sweep(
    cfg: &SweepConfig,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
) -> Result<SweepReport> {
    let g = cfg.g()?;
    run(SweepKind::Semicommutator, cfg, sink, |lam| {
        let s = setup(cfg, lam, &[&cfg.f, g], true)?;
        let sc = semi_commutator(&s.space, &cfg.f, g, &s.trunc, &s.inner, &s.rule)?;
        let sup = node_sup(&cfg.f, &s.rule)?.max(node_sup(g, &s.rule)?);
        let mut rec = base_record(&s, sup);
        rec.semicommutator = Some(operator_norm(&sc));
        if cfg.flavor == SpaceFlavor::Plurih {
            let b = extract_blocks(&sc)?;
            rec.semicommutator_blocks = Some([
                operator_norm(&b.t),
                operator_norm(&b.a),
                operator_norm(&b.b),
                operator_norm(&b.tah),
            ]);
        }
        Ok(rec)
    })
}

/// `‖(λ/i)[T_f, T_g] − T_h‖` together with the Berezin transforms of the
/// commutator and of `T_h` at the sample points. Without `h` the zero symbol
/// is used.
pub fn third_property_probe(
    cfg: &SweepConfig,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
) -> Result<SweepReport> {
    let g = cfg.g()?;
    let zero = SymbolExpr::constant(C64::new(0.0, 0.0));
    let h = cfg.h.as_ref().unwrap_or(&zero);
    let h_is_zero = h.constant_value() == Some(C64::new(0.0, 0.0));
    let points = cfg.sample_points();
    run(SweepKind::Third, cfg, sink, |lam| {
        let s = setup(cfg, lam, &[&cfg.f, g], true)?;
        let c = commutator(&s.space, &cfg.f, g, &s.trunc, &s.inner, &s.rule)?;
        let comm = operator_norm(&c);
        let (third, h_max) = if h_is_zero {
            (lam * comm, 0.0)
        } else {
            let th = assemble_toeplitz(&s.space, h, &s.trunc, &s.rule)?;
            let d = c.scale(C64::new(0.0, -lam)).sub(&th)?;
            let mut h_max = 0.0f64;
            for p in &points {
                h_max = h_max.max(berezin_operator(&th, p)?.value.norm());
            }
            (operator_norm(&d), h_max)
        };
        let mut c_max = 0.0f64;
        for p in &points {
            c_max = c_max.max(berezin_operator(&c, p)?.value.norm());
        }
        let sup = node_sup(&cfg.f, &s.rule)?.max(node_sup(g, &s.rule)?);
        let mut rec = base_record(&s, sup);
        rec.commutator = Some(comm);
        rec.lambda_commutator = Some(lam * comm);
        rec.third = Some(third);
        rec.commutator_berezin_max = Some(c_max);
        rec.h_berezin_max = Some(h_max);
        Ok(rec)
    })
}

/// `|B(f)(z) − f(z)|` at the sample points with the closed-form kernel of the
/// configured flavor.
pub fn berezin_convergence_sweep(
    cfg: &SweepConfig,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
) -> Result<SweepReport> {
    let points = cfg.sample_points();
    if points.is_empty() {
        return Err(Error::config(
            "Berezin convergence sweep needs sample points",
        ));
    }
    run(SweepKind::BerezinConvergence, cfg, sink, |lam| {
        let s = setup(cfg, lam, &[&cfg.f], false)?;
        let mut rec = base_record(&s, node_sup(&cfg.f, &s.rule)?);
        rec.samples = sample_diagnostics(&s, &cfg.f, &points, false)?;
        Ok(rec)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbol;
    use approx::assert_relative_eq;

    fn cfg(domain: DomainKind, lambdas: &[f64], f: &str) -> SweepConfig {
        SweepConfig::new(domain, lambdas.to_vec(), parse_symbol(f).unwrap())
    }

    #[test]
    fn policies() {
        assert_eq!(TruncationPolicy::default().degree(40.0).unwrap(), 90);
        assert_eq!(TruncationPolicy::default().degree(2.5).unwrap(), 15);
        assert_eq!(
            TruncationPolicy::Fixed { degree: 7 }.degree(100.0).unwrap(),
            7
        );
        assert_eq!(
            QuadraturePolicy::Auto { margin: 4 }.orders(10, Some(2)),
            (26, 53)
        );
        assert_eq!(
            QuadraturePolicy::Auto { margin: 4 }.orders(10, None),
            (28, 57)
        );
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(DomainKind::UnitDisk, &[1.0, 0.5], "z");
        assert!(c.validate().unwrap_err().is_config());
        c.lambdas = vec![-2.0, 1.0];
        assert!(c.validate().is_err());
        c.lambdas = vec![1.0];
        c.points = vec![Point::plane(1.5, 0.0)];
        assert!(c.validate().is_err());
        c.points.clear();
        c.f = parse_symbol("z2").unwrap();
        assert!(c.validate().is_err());
        let text = r#"{"domain":"fock_plane","lambdas":[1,2],"f":"re(z)","bogus":1}"#;
        assert!(serde_json::from_str::<SweepConfig>(text).is_err());
        let text = r#"{"domain":"fock_plane","lambdas":[1,2],"f":"re(z)","truncation":{"kind":"fixed","degree":5},"points":[[0.5,0.1]]}"#;
        let c: SweepConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.truncation, TruncationPolicy::Fixed { degree: 5 });
        assert_eq!(c.points, vec![Point::plane(0.5, 0.1)]);
    }

    #[test]
    fn constant_symbol_has_no_gap() {
        let mut c = cfg(DomainKind::UnitDisk, &[0.0, 1.0, 4.0], "2-1i");
        c.grid = 5;
        let r = norm_sweep(&c, &mut discard).unwrap();
        for rec in &r.records {
            assert!(rec.gap.unwrap().abs() < 1e-12);
            assert!(rec.samples.iter().all(|s| s.berezin_error < 1e-12));
        }
    }

    #[test]
    fn fixed_truncation_norm_of_z_decays() {
        let mut c = cfg(DomainKind::UnitDisk, &[1.0, 5.0, 20.0], "z");
        c.flavor = SpaceFlavor::Holo;
        c.truncation = TruncationPolicy::Fixed { degree: 8 };
        let r = norm_sweep(&c, &mut discard).unwrap();
        for rec in &r.records {
            // T_z maps e_a to √((a+1)/(a+λ+2)) e_{a+1}; the largest kept entry has a = D−1.
            assert_relative_eq!(
                rec.norm_ph.unwrap(),
                (8.0 / (9.0 + rec.lambda)).sqrt(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn sandwich_and_contractivity() {
        let c = cfg(DomainKind::UnitDisk, &[0.5, 3.0], "re(z)^2 - 0.5i*im(z)");
        let mut seen = 0;
        let r = norm_sweep(&c, &mut |_| {
            seen += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, 2);
        for rec in &r.records {
            assert!(rec.norm_holo.unwrap() <= rec.norm_ph.unwrap());
            assert!(rec.norm_ph.unwrap() <= rec.sup_node + 1e-10);
        }
    }

    #[test]
    fn semicommutator_trivial_and_holomorphic() {
        let mut c = cfg(DomainKind::FockPlane, &[1.0, 4.0], "re(z)");
        c.g = Some(parse_symbol("1").unwrap());
        c.truncation = TruncationPolicy::Scaled {
            base: 4,
            slope: 1.0,
        };
        for rec in semicommutator_sweep(&c, &mut discard).unwrap().records {
            assert!(rec.semicommutator.unwrap() < 1e-12);
        }
        let mut c = cfg(DomainKind::UnitDisk, &[1.0, 4.0], "z");
        c.g = Some(parse_symbol("z").unwrap());
        c.flavor = SpaceFlavor::Holo;
        for rec in semicommutator_sweep(&c, &mut discard).unwrap().records {
            assert!(rec.semicommutator.unwrap() < 1e-12, "{rec:?}");
        }
    }

    #[test]
    fn semicommutator_adjoint_symmetry() {
        let mut a = cfg(DomainKind::UnitDisk, &[1.0, 3.0], "z + 0.5*conj(z)^2");
        a.g = Some(parse_symbol("re(z) + 1i*z*z").unwrap());
        a.truncation = TruncationPolicy::Scaled {
            base: 5,
            slope: 1.0,
        };
        let mut b = a.clone();
        b.f = parse_symbol("conj(re(z) + 1i*z*z)").unwrap();
        b.g = Some(parse_symbol("conj(z + 0.5*conj(z)^2)").unwrap());
        let ra = semicommutator_sweep(&a, &mut discard).unwrap();
        let rb = semicommutator_sweep(&b, &mut discard).unwrap();
        for (x, y) in ra.records.iter().zip(&rb.records) {
            assert!((x.semicommutator.unwrap() - y.semicommutator.unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn third_probe_zero_candidate_and_berezin() {
        let mut c = cfg(DomainKind::FockPlane, &[1.0, 3.0], "re(z)");
        c.g = Some(parse_symbol("im(z)").unwrap());
        c.truncation = TruncationPolicy::Scaled {
            base: 6,
            slope: 1.0,
        };
        c.grid = 12;
        for rec in third_property_probe(&c, &mut discard).unwrap().records {
            assert_eq!(rec.third, rec.lambda_commutator);
            assert!(rec.commutator_berezin_max.unwrap() < 1e-10);
        }
        c.g = Some(parse_symbol("re(z)").unwrap());
        for rec in third_property_probe(&c, &mut discard).unwrap().records {
            assert_eq!(rec.commutator.unwrap(), 0.0);
        }
    }

    #[test]
    fn berezin_convergence_examples() {
        let mut c = cfg(DomainKind::FockPlane, &[1.0, 2.0, 8.0], "z*conj(z)");
        c.points = vec![Point::plane(0.0, 0.0)];
        for rec in berezin_convergence_sweep(&c, &mut discard).unwrap().records {
            assert_relative_eq!(
                rec.samples[0].berezin_error,
                1.0 / rec.lambda,
                max_relative = 1e-12
            );
        }
        c.f = parse_symbol("3").unwrap();
        c.grid = 4;
        for rec in berezin_convergence_sweep(&c, &mut discard).unwrap().records {
            assert!(rec.samples.iter().all(|s| s.berezin_error < 1e-12));
        }
        c.points.clear();
        c.grid = 0;
        assert!(berezin_convergence_sweep(&c, &mut discard).is_err());
    }

    #[test]
    fn sink_errors_stop_the_sweep() {
        let c = cfg(DomainKind::UnitDisk, &[0.0, 1.0, 2.0], "z");
        let mut n = 0;
        let err = norm_sweep(&c, &mut |_| {
            n += 1;
            Err(Error::numeric("disk full"))
        });
        assert!(err.is_err());
        assert_eq!(n, 1);
    }
}
