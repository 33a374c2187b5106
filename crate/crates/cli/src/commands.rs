//! One function per subcommand. Each parses its typed config, computes, and
//! writes CSV and JSON artifacts that embed the resolved config.

use std::io::Write;

use plurispec_core::asymptotics::{
    berezin_convergence_sweep, norm_sweep, semicommutator_sweep, third_property_probe, SweepConfig,
    SweepKind, SweepRecord, SweepReport,
};
use plurispec_core::berezin::{
    berezin_batch, mean_oscillation, oscillation, write_berezin_csv, BerezinSample,
};
use plurispec_core::operators::{
    assemble_toeplitz, commutator, extract_blocks, operator_norm, required_degree,
};
use plurispec_core::quadrature::{rule_for, QuadratureRule};
use plurispec_core::report::{
    num, write_block_diagnostics_csv, write_compactness_csv, write_json, write_table, SweepCsv,
};
use plurispec_core::spaces::enumerate_basis;
use plurispec_core::spectral::{
    compactness_proxy, default_shells, essential_spectrum_estimate, phh_fredholm_sweep,
    phh_two_route_check, truncated_spectrum, weak_null_sequence_bound, FredholmOptions,
};
use plurispec_core::symbol::PolyDegree;
use plurispec_core::{Error, Point, Result, SpaceSpec, Symbol, SymbolExpr, Truncation, C64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{parse, Artifact, OutputSpec};

const AUTO_MARGIN: u32 = 16;

/// Quadrature orders; the angular order defaults to `2·max_degree + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Orders {
    pub max_degree: u32,
    #[serde(default)]
    pub angular_order: Option<u32>,
}

impl Orders {
    fn rule(&self, space: &SpaceSpec) -> Result<QuadratureRule> {
        rule_for(
            space,
            self.max_degree,
            self.angular_order.unwrap_or(2 * self.max_degree + 1),
        )
    }

    /// Exact for `f·e_j·conj(e_i)` over the truncation, 16 extra degrees, and
    /// 16 degrees for a non-polynomial symbol.
    fn auto(space: &SpaceSpec, trunc: &Truncation, f: &SymbolExpr) -> Result<Orders> {
        let basis = enumerate_basis(space, trunc)?;
        let deg = required_degree(
            f.polynomial_degree().unwrap_or(PolyDegree {
                z1: 16,
                ..PolyDegree::ZERO
            }),
            &basis,
            &basis,
        );
        Ok(Orders {
            max_degree: deg + AUTO_MARGIN,
            angular_order: None,
        })
    }

    fn fixed(max_degree: u32) -> Orders {
        Orders {
            max_degree,
            angular_order: None,
        }
    }
}

/// What a command hands back to the driver.
pub struct Outcome {
    pub files: Vec<std::path::PathBuf>,
    /// Set when the command ran but a check it performs failed.
    pub failed_checks: usize,
}

struct Ctx<'a> {
    command: &'a str,
    output: OutputSpec,
}

impl Ctx<'_> {
    fn artifact(&self, ext: &str) -> Result<Artifact> {
        Artifact::create(self.output.path(self.command, ext))
    }

    fn json<C: Serialize, R: Serialize>(
        &self,
        config: &C,
        report: &R,
    ) -> Result<std::path::PathBuf> {
        let mut a = self.artifact("json")?;
        let mut resolved = serde_json::to_value(config)?;
        if let Value::Object(m) = &mut resolved {
            m.insert("output".into(), serde_json::to_value(&self.output)?);
        }
        write_json(a.file(), self.command, &resolved, report)?;
        a.commit()
    }
}

fn split_output(doc: &mut Value) -> Result<OutputSpec> {
    match doc.as_object_mut().and_then(|m| m.remove("output")) {
        Some(v) => parse(&v),
        None => Ok(OutputSpec::default()),
    }
}

pub fn run(command: &str, mut doc: Value) -> Result<Outcome> {
    let output = split_output(&mut doc)?;
    let ctx = Ctx { command, output };
    match command {
        "assemble" => assemble(&ctx, parse(&doc)?),
        "blocks" => blocks(&ctx, parse(&doc)?),
        "berezin" => berezin(&ctx, parse(&doc)?),
        "quantize-norm" => sweep(&ctx, SweepKind::Norm, parse(&doc)?),
        "quantize-semicomm" => sweep(&ctx, SweepKind::Semicommutator, parse(&doc)?),
        "quantize-third" => sweep(&ctx, SweepKind::Third, parse(&doc)?),
        "berezin-converge" => sweep(&ctx, SweepKind::BerezinConvergence, parse(&doc)?),
        "spectrum" => spectrum(&ctx, parse(&doc)?),
        "compactness" => compactness(&ctx, parse(&doc)?),
        "phh-check" => phh_check(&ctx, parse(&doc)?),
        "phh-fredholm" => phh_fredholm(&ctx, parse(&doc)?),
        "selftest" => selftest(),
        other => Err(Error::Config(format!("unknown command `{other}`"))),
    }
}

fn validated(space: SpaceSpec) -> Result<SpaceSpec> {
    space.validate()?;
    Ok(space)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssembleConfig {
    pub space: SpaceSpec,
    pub truncation: Truncation,
    pub symbol: SymbolExpr,
    #[serde(default)]
    pub quadrature: Option<Orders>,
}

impl AssembleConfig {
    fn resolved(mut self) -> Result<Self> {
        validated(self.space)?;
        self.symbol.check_dimension(self.space.domain.dimension())?;
        if self.quadrature.is_none() {
            self.quadrature = Some(Orders::auto(&self.space, &self.truncation, &self.symbol)?);
        }
        Ok(self)
    }
}

fn assemble(ctx: &Ctx, cfg: AssembleConfig) -> Result<Outcome> {
    let cfg = cfg.resolved()?;
    let rule = cfg.quadrature.expect("resolved").rule(&cfg.space)?;
    let m = assemble_toeplitz(&cfg.space, &cfg.symbol, &cfg.truncation, &rule)?;
    let norm = operator_norm(&m);
    let mut csv = ctx.artifact("csv")?;
    m.write_csv(csv.file())?;
    let files = vec![
        csv.commit()?,
        ctx.json(&cfg, &json!({ "norm": norm, "matrix": m.to_json() }))?,
    ];
    println!(
        "assemble: {}x{} matrix, λ = {}, norm {norm:e}",
        m.nrows(),
        m.ncols(),
        cfg.space.weight
    );
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

fn blocks(ctx: &Ctx, cfg: AssembleConfig) -> Result<Outcome> {
    let cfg = cfg.resolved()?;
    let rule = cfg.quadrature.expect("resolved").rule(&cfg.space)?;
    let m = assemble_toeplitz(&cfg.space, &cfg.symbol, &cfg.truncation, &rule)?;
    let b = extract_blocks(&m)?;
    let named = [
        ("T", &b.t),
        ("A", &b.a),
        ("B", &b.b),
        ("Tah", &b.tah),
        ("E", &b.e),
        ("G", &b.g),
    ];
    let rows: Vec<Vec<String>> = named
        .iter()
        .map(|(name, blk)| {
            vec![
                num(cfg.space.weight),
                name.to_string(),
                blk.nrows().to_string(),
                blk.ncols().to_string(),
                num(operator_norm(blk)),
            ]
        })
        .collect();
    let mut csv = ctx.artifact("csv")?;
    write_table(
        csv.file(),
        &["lambda", "block", "rows", "cols", "norm"],
        &rows,
    )?;
    let report: serde_json::Map<String, Value> = named
        .iter()
        .map(|(name, blk)| {
            (
                name.to_string(),
                json!({ "norm": operator_norm(blk), "matrix": blk.to_json() }),
            )
        })
        .collect();
    let files = vec![csv.commit()?, ctx.json(&cfg, &report)?];
    println!(
        "blocks: λ = {}, |T| = {:e}, |A| = {:e}, |B| = {:e}, |Tah| = {:e}",
        cfg.space.weight,
        operator_norm(&b.t),
        operator_norm(&b.a),
        operator_norm(&b.b),
        operator_norm(&b.tah)
    );
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BerezinConfig {
    pub space: SpaceSpec,
    pub symbol: SymbolExpr,
    #[serde(default = "berezin_orders")]
    pub quadrature: Orders,
    #[serde(default)]
    pub points: Vec<Point>,
    #[serde(default)]
    pub grid: usize,
    /// Samples per point for the oscillation; 0 skips `Osc` and `MO`.
    #[serde(default)]
    pub oscillation_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn berezin_orders() -> Orders {
    Orders::fixed(120)
}

#[derive(Serialize)]
struct PointReport {
    #[serde(flatten)]
    sample: BerezinSample,
    oscillation: Option<f64>,
    mean_oscillation: Option<f64>,
}

fn berezin(ctx: &Ctx, cfg: BerezinConfig) -> Result<Outcome> {
    let space = validated(cfg.space)?;
    cfg.symbol.check_dimension(space.domain.dimension())?;
    let mut points = cfg.points.clone();
    points.extend(plurispec_core::asymptotics::sample_grid(
        space.domain,
        cfg.grid,
    ));
    if points.is_empty() {
        return Err(Error::Config("berezin needs `points` or `grid`".into()));
    }
    for p in &points {
        space.domain.check(p)?;
    }
    let rule = cfg.quadrature.rule(&space)?;
    let samples = berezin_batch(&space, &cfg.symbol, &points, &rule)?;
    let mut reports = Vec::with_capacity(samples.len());
    for s in &samples {
        let (osc, mo) = if cfg.oscillation_samples > 0 {
            (
                Some(oscillation(
                    &cfg.symbol,
                    &s.point,
                    space.domain,
                    cfg.oscillation_samples,
                    cfg.seed,
                )?),
                Some(mean_oscillation(&space, &cfg.symbol, &s.point, &rule)?),
            )
        } else {
            (None, None)
        };
        println!(
            "berezin: z = {}, B(f) = {:e}{:+e}i",
            s.point, s.value.re, s.value.im
        );
        reports.push(PointReport {
            sample: s.clone(),
            oscillation: osc,
            mean_oscillation: mo,
        });
    }
    let mut csv = ctx.artifact("csv")?;
    write_berezin_csv(&samples, csv.file())?;
    let files = vec![csv.commit()?, ctx.json(&cfg, &reports)?];
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

fn summary(kind: SweepKind, r: &SweepRecord) -> String {
    let f = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_else(|| "-".into());
    match kind {
        SweepKind::Norm => format!(
            "λ = {}: D = {}, |T_ph| = {}, |T_holo| = {}, gap = {}",
            r.lambda,
            r.truncation,
            f(r.norm_ph),
            f(r.norm_holo),
            f(r.gap)
        ),
        SweepKind::Semicommutator => format!(
            "λ = {}: D = {}, |semi-commutator| = {}",
            r.lambda,
            r.truncation,
            f(r.semicommutator)
        ),
        SweepKind::Third => format!(
            "λ = {}: D = {}, λ|[Tf,Tg]| = {}, third = {}, max |B(commutator)| = {}",
            r.lambda,
            r.truncation,
            f(r.lambda_commutator),
            f(r.third),
            f(r.commutator_berezin_max)
        ),
        SweepKind::BerezinConvergence => format!(
            "λ = {}: max |B(f) - f| = {}",
            r.lambda,
            f(r.samples.iter().map(|s| s.berezin_error).reduce(f64::max))
        ),
    }
}

fn sweep(ctx: &Ctx, kind: SweepKind, cfg: SweepConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut csv_file = ctx.artifact("csv")?;
    let report: SweepReport = {
        let mut csv = SweepCsv::new(kind, csv_file.file())?;
        let mut sink = |r: &SweepRecord| -> Result<()> {
            println!("{}", summary(kind, r));
            csv.push(r)
        };
        match kind {
            SweepKind::Norm => norm_sweep(&cfg, &mut sink)?,
            SweepKind::Semicommutator => semicommutator_sweep(&cfg, &mut sink)?,
            SweepKind::Third => third_property_probe(&cfg, &mut sink)?,
            SweepKind::BerezinConvergence => berezin_convergence_sweep(&cfg, &mut sink)?,
        }
    };
    let files = vec![csv_file.commit()?, ctx.json(&cfg, &report.records)?];
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub space: SpaceSpec,
    pub symbol: SymbolExpr,
    #[serde(default = "berezin_orders")]
    pub quadrature: Orders,
    /// Defaults to the domain's boundary shells.
    #[serde(default)]
    pub shells: Option<Vec<f64>>,
    #[serde(default = "default_points_per_shell")]
    pub points_per_shell: usize,
    /// Also report eigenvalues of this truncation.
    #[serde(default)]
    pub truncation: Option<Truncation>,
}

fn default_points_per_shell() -> usize {
    64
}

fn spectrum(ctx: &Ctx, mut cfg: SpectrumConfig) -> Result<Outcome> {
    let space = validated(cfg.space)?;
    cfg.symbol.check_dimension(space.domain.dimension())?;
    let shells = cfg
        .shells
        .get_or_insert_with(|| default_shells(space.domain, space.weight))
        .clone();
    let rule = cfg.quadrature.rule(&space)?;
    let mut est = essential_spectrum_estimate(
        &space,
        &cfg.symbol,
        cfg.symbol.source(),
        &shells,
        cfg.points_per_shell,
        &rule,
    )?;
    if let Some(trunc) = cfg.truncation {
        let orders = Orders::auto(&space, &trunc, &cfg.symbol)?;
        let m = assemble_toeplitz(&space, &cfg.symbol, &trunc, &orders.rule(&space)?)?;
        est.eigenvalues = truncated_spectrum(&m)?;
        est.truncation = Some(trunc);
    }
    let unstable = est.cloud.iter().filter(|c| c.unstable).count();
    println!(
        "spectrum: {} cloud points, drift {:e}, dist(0, cloud) {:e}, 0 outside: {}, unstable points: {unstable}",
        est.cloud.len(),
        est.drift,
        est.zero_distance,
        est.zero_outside
    );
    let mut csv = ctx.artifact("csv")?;
    est.write_cloud_csv(csv.file())?;
    let files = vec![csv.commit()?, ctx.json(&cfg, &est)?];
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactnessConfig {
    pub space: SpaceSpec,
    pub symbol: SymbolExpr,
    pub ladder: Vec<Truncation>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub quadrature: Option<Orders>,
}

fn default_k() -> usize {
    10
}

fn compactness(ctx: &Ctx, mut cfg: CompactnessConfig) -> Result<Outcome> {
    let space = validated(cfg.space)?;
    cfg.symbol.check_dimension(space.domain.dimension())?;
    let top = *cfg
        .ladder
        .last()
        .ok_or_else(|| Error::Config("empty truncation ladder".into()))?;
    let orders = match cfg.quadrature {
        Some(o) => o,
        None => *cfg
            .quadrature
            .insert(Orders::auto(&space, &top, &cfg.symbol)?),
    };
    let report = compactness_proxy(
        &space,
        &cfg.symbol,
        &cfg.ladder,
        cfg.k,
        &orders.rule(&space)?,
    )?;
    for r in &report.rows {
        println!(
            "compactness: dim {}, sigma_{} = {:?}, tail norm {:e}",
            r.dimension, cfg.k, r.sigma_k, r.tail_norm
        );
    }
    let mut csv = ctx.artifact("csv")?;
    write_compactness_csv(space.weight, &report, csv.file())?;
    let files = vec![csv.commit()?, ctx.json(&cfg, &report)?];
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

/// A single cutoff for every degree, or explicit cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cutoffs {
    Uniform(u32),
    Explicit(Truncation),
}

impl Cutoffs {
    fn truncation(self) -> Truncation {
        match self {
            Cutoffs::Uniform(d) => Truncation::phh(d, d, d),
            Cutoffs::Explicit(t) => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhhCheckConfig {
    pub lambda: f64,
    pub g: SymbolExpr,
    pub cutoffs: Cutoffs,
    /// Degree of the `𝔹²` rule; defaults to what the cutoffs and `g` need.
    /// The block rule defaults to the same degree.
    #[serde(default)]
    pub quadrature_degree: Option<u32>,
    #[serde(default)]
    pub block_degree: Option<u32>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-8
}

fn phh_check(ctx: &Ctx, mut cfg: PhhCheckConfig) -> Result<Outcome> {
    cfg.g.check_dimension(1)?;
    let trunc = cfg.cutoffs.truncation();
    let space = validated(SpaceSpec {
        domain: plurispec_core::DomainKind::UnitBall2,
        weight: cfg.lambda,
        flavor: plurispec_core::SpaceFlavor::PlurihHolo2D,
    })?;
    // Exact for polynomial `g`; the ball rule grows quickly, so no margin.
    let auto = Orders::auto(&space, &trunc, &cfg.g)?.max_degree - AUTO_MARGIN;
    let d2 = *cfg.quadrature_degree.get_or_insert(auto);
    let d1 = *cfg.block_degree.get_or_insert(auto);
    let rule2d = rule_for(&space, d2, 2 * d2 + 1)?;
    let check = phh_two_route_check(&cfg.g, cfg.lambda, &trunc, &rule2d, d1)?;
    let failed = usize::from(
        !(check.max_matched_discrepancy <= cfg.tolerance && check.max_mismatched <= 1e-12),
    );
    println!(
        "phh-check: λ = {}, {} pairs, max two-route discrepancy {:e}, max off-block {:e}",
        cfg.lambda, check.pairs, check.max_matched_discrepancy, check.max_mismatched
    );
    let row = vec![
        num(cfg.lambda),
        check.pairs.to_string(),
        num(check.max_matched_discrepancy),
        num(check.max_mismatched),
    ];
    let mut csv = ctx.artifact("csv")?;
    write_table(
        csv.file(),
        &[
            "lambda",
            "pairs",
            "max_matched_discrepancy",
            "max_mismatched",
        ],
        &[row],
    )?;
    let files = vec![csv.commit()?, ctx.json(&cfg, &check)?];
    Ok(Outcome {
        files,
        failed_checks: failed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakNullConfig {
    /// Defaults to the block symbol `g`.
    #[serde(default)]
    pub g: Option<SymbolExpr>,
    pub z1: Point,
    pub j: Vec<u32>,
    #[serde(default = "default_weak_degree")]
    pub max_degree: u32,
}

fn default_weak_degree() -> u32 {
    120
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhhFredholmConfig {
    pub lambda: f64,
    pub g: SymbolExpr,
    #[serde(default = "default_a2")]
    pub a2: Vec<u32>,
    #[serde(default = "default_block_truncation")]
    pub truncation: Truncation,
    #[serde(default = "default_fredholm_degree")]
    pub max_degree: u32,
    #[serde(default = "default_inner_extra")]
    pub inner_extra: u32,
    /// Compute regularizer defects with `1/g`.
    #[serde(default = "default_true")]
    pub inverse: bool,
    #[serde(default)]
    pub weak_null: Option<WeakNullConfig>,
}

fn default_a2() -> Vec<u32> {
    (0..=40).collect()
}
fn default_block_truncation() -> Truncation {
    Truncation::plurih(20)
}
fn default_fredholm_degree() -> u32 {
    80
}
fn default_inner_extra() -> u32 {
    10
}
fn default_true() -> bool {
    true
}

fn phh_fredholm(ctx: &Ctx, cfg: PhhFredholmConfig) -> Result<Outcome> {
    cfg.g.check_dimension(1)?;
    cfg.truncation
        .check_for(plurispec_core::SpaceFlavor::Plurih)?;
    let opts = FredholmOptions {
        max_degree: cfg.max_degree,
        inner_extra: cfg.inner_extra,
        with_inverse: cfg.inverse,
    };
    let diag = phh_fredholm_sweep(&cfg.g, cfg.lambda, &cfg.a2, &cfg.truncation, opts)?;
    for r in &diag.records {
        println!(
            "phh-fredholm: a2 = {}, weight {}, min singular value {:e}, defects {:?} {:?}",
            r.a2, r.effective_weight, r.min_singular_value, r.defect_right, r.defect_left
        );
    }
    let weak = match &cfg.weak_null {
        Some(w) => {
            let z1 = match w.z1 {
                Point::Plane(z) => z,
                Point::Pair(..) => {
                    return Err(Error::Config("weak_null.z1 is a disk point".into()))
                }
            };
            let g = w.g.as_ref().unwrap_or(&cfg.g);
            g.check_dimension(1)?;
            let values = weak_null_sequence_bound(g, cfg.lambda, z1, &w.j, w.max_degree)?;
            for (j, v) in w.j.iter().zip(&values) {
                println!("phh-fredholm: weak null j = {j}: {v:e}");
            }
            Some(
                w.j.iter()
                    .zip(&values)
                    .map(|(j, v)| json!({ "j": j, "bound": v }))
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    let mut csv = ctx.artifact("csv")?;
    write_block_diagnostics_csv(&diag, csv.file())?;
    let files = vec![
        csv.commit()?,
        ctx.json(&cfg, &json!({ "blocks": diag, "weak_null": weak }))?,
    ];
    Ok(Outcome {
        files,
        failed_checks: 0,
    })
}

fn selftest() -> Result<Outcome> {
    use plurispec_core::{DomainKind, SpaceFlavor};
    let mut failed = 0;
    let mut report = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    };
    let spaces = [
        (DomainKind::UnitDisk, 0.0, SpaceFlavor::Plurih),
        (DomainKind::UnitDisk, 5.0, SpaceFlavor::Holo),
        (DomainKind::FockPlane, 1.0, SpaceFlavor::Plurih),
        (DomainKind::FockPlane, 20.0, SpaceFlavor::AntiHolo),
        (DomainKind::UnitBall2, 1.0, SpaceFlavor::PlurihHolo2D),
    ];
    let one = SymbolExpr::constant(C64::new(1.0, 0.0));
    for (domain, lam, flavor) in spaces {
        let space = SpaceSpec::new(domain, lam, flavor)?;
        let d = if domain == DomainKind::UnitBall2 {
            8
        } else {
            40
        };
        match rule_for(&space, d, 2 * d + 1) {
            Ok(rule) => {
                report(
                    "quadrature audit",
                    true,
                    format!("{domain:?} λ = {lam}, degree {d}, {} nodes", rule.len()),
                );
                let trunc = Truncation::uniform(
                    flavor,
                    if domain == DomainKind::UnitBall2 {
                        3
                    } else {
                        15
                    },
                );
                let m = assemble_toeplitz(&space, &one, &trunc, &rule)?;
                let id = plurispec_core::OperatorMatrix::identity(&space, &trunc)?;
                let err = m.sub(&id)?.max_abs_entry();
                report(
                    "identity symbol",
                    err <= 1e-12,
                    format!("{domain:?} {flavor:?}: max |T_1 - I| = {err:e}"),
                );
            }
            Err(e) => report(
                "quadrature audit",
                false,
                format!("{domain:?} λ = {lam}: {e}"),
            ),
        }
    }
    for domain in [DomainKind::UnitDisk, DomainKind::FockPlane] {
        let space = SpaceSpec::new(domain, 3.0, SpaceFlavor::Plurih)?;
        let rule = rule_for(&space, 60, 121)?;
        let f = plurispec_core::symbol::parse_symbol("re(z) + 0.5*im(z)^2")?;
        let g = plurispec_core::symbol::parse_symbol("im(z) - re(z)*im(z)")?;
        let c = commutator(
            &space,
            &f,
            &g,
            &Truncation::plurih(12),
            &Truncation::plurih(20),
            &rule,
        )?;
        let mut worst = 0.0f64;
        for p in plurispec_core::asymptotics::sample_grid(domain, 20) {
            worst = worst.max(
                plurispec_core::berezin::berezin_operator(&c, &p)?
                    .value
                    .norm(),
            );
        }
        report(
            "commutator Berezin antisymmetry",
            worst <= 1e-10,
            format!("{domain:?}: max |B([Tf,Tg])| = {worst:e}"),
        );
    }
    std::io::stdout().flush()?;
    Ok(Outcome {
        files: Vec::new(),
        failed_checks: failed,
    })
}
