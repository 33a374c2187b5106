//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach stdout.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use plurispec_core::asymptotics::{
    berezin_convergence_sweep, discard, norm_sweep, semicommutator_sweep, third_property_probe,
    SweepConfig, SweepRecord,
};
use plurispec_core::operators::assemble_toeplitz;
use plurispec_core::quadrature::{integrate_fn, rule_for};
use plurispec_core::spectral::{
    essential_spectrum_estimate, hausdorff_distance, phh_fredholm_sweep, phh_two_route_check,
    weak_null_sequence_bound, FredholmOptions,
};
use plurispec_core::symbol::parse_symbol;
use plurispec_core::{DomainKind, OperatorMatrix, Point, SpaceFlavor, SpaceSpec, Truncation, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(format!("{:.2}s", t.as_secs_f64()))
    } else {
        Err(format!(
            "took {:.2}s, limit {}s",
            t.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn sym(text: &str) -> plurispec_core::SymbolExpr {
    parse_symbol(text).unwrap()
}

fn space(domain: DomainKind, lambda: f64, flavor: SpaceFlavor) -> SpaceSpec {
    SpaceSpec::new(domain, lambda, flavor).unwrap()
}

/// `∫ |z|^{2a} dv_λ` as a running product, independent of the Gamma-based
/// closed form used by the library.
fn diagonal_moment(domain: DomainKind, lambda: f64, a: u32) -> f64 {
    (1..=a)
        .map(|k| {
            let k = f64::from(k);
            match domain {
                DomainKind::FockPlane => k / lambda,
                _ => k / (k + lambda + 1.0),
            }
        })
        .product()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let cases = [0.0, 0.5, 1.0, 5.0, 20.0]
        .map(|l| (DomainKind::UnitDisk, l))
        .into_iter()
        .chain([0.5, 1.0, 5.0, 20.0].map(|l| (DomainKind::FockPlane, l)));
    for (domain, lambda) in cases {
        let s = space(domain, lambda, SpaceFlavor::Holo);
        let rule = rule_for(&s, 24, 49).map_err(|e| e.to_string())?;
        for a in 0..=12u32 {
            for b in 0..=12u32 {
                let q = integrate_fn(&rule, |p| {
                    let z = p.z1();
                    Ok(z.powu(a) * z.conj().powu(b))
                })
                .map_err(|e| e.to_string())?;
                // Off-diagonal moments vanish; measure them against the
                // Cauchy–Schwarz bound √(m_aa m_bb).
                let scale = (diagonal_moment(domain, lambda, a)
                    * diagonal_moment(domain, lambda, b))
                .sqrt();
                let exact = if a == b {
                    diagonal_moment(domain, lambda, a)
                } else {
                    0.0
                };
                worst = worst.max((q - exact).norm() / scale);
            }
        }
    }
    let t = within(Duration::from_secs(5), start)?;
    check(
        worst <= 1e-12,
        format!("max relative moment error {worst:.2e}, {t}"),
    )
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let symbols = [
        "z",
        "conj(z)",
        "z*conj(z)",
        "(z+conj(z))/2",
        "im(z)^2 + i*z",
        "z^3 - 2*conj(z)^2",
        "exp(-z*conj(z))",
        "abs(z)",
        "step(0.5 - abs(z))",
        "sin(re(z))*z",
    ];
    let mut id_err = 0.0f64;
    let mut adj_err = 0.0f64;
    for (domain, lambda) in [(DomainKind::UnitDisk, 2.0), (DomainKind::FockPlane, 3.0)] {
        for flavor in [SpaceFlavor::Holo, SpaceFlavor::Plurih] {
            let s = space(domain, lambda, flavor);
            let trunc = Truncation::uniform(flavor, 10);
            let rule = rule_for(&s, 60, 121).map_err(|e| e.to_string())?;
            let t1 = assemble_toeplitz(&s, &sym("1"), &trunc, &rule).map_err(|e| e.to_string())?;
            let id = OperatorMatrix::identity(&s, &trunc).map_err(|e| e.to_string())?;
            id_err = id_err.max(t1.sub(&id).map_err(|e| e.to_string())?.max_abs_entry());
            for text in symbols {
                let f =
                    assemble_toeplitz(&s, &sym(text), &trunc, &rule).map_err(|e| e.to_string())?;
                let g = assemble_toeplitz(&s, &sym(&format!("conj({text})")), &trunc, &rule)
                    .map_err(|e| e.to_string())?;
                adj_err = adj_err.max(
                    f.adjoint()
                        .sub(&g)
                        .map_err(|e| e.to_string())?
                        .max_abs_entry(),
                );
            }
        }
    }
    let t = within(Duration::from_secs(10), start)?;
    check(
        id_err <= 1e-12 && adj_err <= 1e-12,
        format!("max |T_1 - I| {id_err:.2e}, max |T_f^H - T_conj f| {adj_err:.2e}, {t}"),
    )
}

fn ac3() -> Outcome {
    let mut worst = 0.0f64;
    for lambda in [1.0, 5.0, 20.0] {
        let fock = space(DomainKind::FockPlane, lambda, SpaceFlavor::Holo);
        let rule = rule_for(&fock, 62, 125).map_err(|e| e.to_string())?;
        let t = assemble_toeplitz(&fock, &sym("conj(z)"), &Truncation::holo(31), &rule)
            .map_err(|e| e.to_string())?;
        for b in 0..=30usize {
            let expected = ((b as f64 + 1.0) / lambda).sqrt();
            worst = worst.max((t.entries[(b, b + 1)] - expected).norm());
        }
        let disk = space(DomainKind::UnitDisk, lambda, SpaceFlavor::Holo);
        let rule = rule_for(&disk, 62, 125).map_err(|e| e.to_string())?;
        let t = assemble_toeplitz(&disk, &sym("z"), &Truncation::holo(31), &rule)
            .map_err(|e| e.to_string())?;
        for a in 0..=30usize {
            let expected = ((a as f64 + 1.0) / (a as f64 + lambda + 2.0)).sqrt();
            worst = worst.max((t.entries[(a + 1, a)] - expected).norm());
        }
    }
    check(worst <= 1e-10, format!("max entry error {worst:.2e}"))
}

fn sandwich(records: &[SweepRecord]) -> Result<f64, String> {
    let mut slack = f64::INFINITY;
    for r in records {
        let (ph, holo) = (
            r.norm_ph.ok_or("missing norm_ph")?,
            r.norm_holo.ok_or("missing norm_holo")?,
        );
        if holo > ph + 1e-12 || ph > r.sup_node + 1e-10 {
            return Err(format!(
                "λ = {}: holo {holo}, ph {ph}, sup {}",
                r.lambda, r.sup_node
            ));
        }
        slack = slack.min(r.sup_node - ph);
    }
    Ok(slack)
}

fn real_part_config() -> SweepConfig {
    SweepConfig::new(
        DomainKind::FockPlane,
        vec![2.0, 5.0, 10.0, 20.0, 40.0],
        sym("(z+conj(z))/2"),
    )
}

fn ac4() -> Outcome {
    let mut n = 0;
    let mut cfgs = vec![real_part_config()];
    let mut disk = SweepConfig::new(
        DomainKind::UnitDisk,
        vec![0.0, 1.0, 5.0, 20.0],
        sym("z*conj(z) + im(z)"),
    );
    disk.grid = 10;
    cfgs.push(disk);
    let mut holo = SweepConfig::new(
        DomainKind::FockPlane,
        vec![1.0, 4.0],
        sym("exp(-z*conj(z))*re(z)"),
    );
    holo.flavor = SpaceFlavor::Holo;
    cfgs.push(holo);
    let mut slack = f64::INFINITY;
    for cfg in &cfgs {
        let report = norm_sweep(cfg, &mut discard).map_err(|e| e.to_string())?;
        slack = slack.min(sandwich(&report.records)?);
        n += report.records.len();
    }
    check(
        true,
        format!("{n} records satisfy holo ≤ ph ≤ sup-node; min sup - ph {slack:.3e}"),
    )
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let report = norm_sweep(&real_part_config(), &mut discard).map_err(|e| e.to_string())?;
    sandwich(&report.records)?;
    let gaps: Vec<f64> = report
        .records
        .iter()
        .map(|r| r.gap.unwrap_or(f64::NAN))
        .collect();
    let t = within(Duration::from_secs(120), start)?;
    let ratio = gaps[gaps.len() - 1] / gaps[0];
    check(
        strictly_decreasing(&gaps) && ratio < 0.5,
        format!("gaps {gaps:.3?}, last/first {ratio:.3}, {t}"),
    )
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let mut cfg = real_part_config();
    cfg.g = cfg.f.clone().into();
    let report = semicommutator_sweep(&cfg, &mut discard).map_err(|e| e.to_string())?;
    let norms: Vec<f64> = report
        .records
        .iter()
        .map(|r| r.semicommutator.unwrap_or(f64::NAN))
        .collect();
    let t = within(Duration::from_secs(180), start)?;
    let ratio = norms[norms.len() - 1] / norms[0];
    check(
        norms.iter().all(|&x| x > 0.0) && strictly_decreasing(&norms) && ratio < 0.25,
        format!("norms {norms:.4?}, last/first {ratio:.3}, {t}"),
    )
}

fn ac7() -> Outcome {
    let mut cfg = SweepConfig::new(
        DomainKind::FockPlane,
        vec![2.0, 5.0, 10.0, 20.0, 40.0],
        sym("re(z)"),
    );
    cfg.g = Some(sym("im(z)"));
    cfg.h = Some(sym("0.5"));
    cfg.grid = 50;
    let report = third_property_probe(&cfg, &mut discard).map_err(|e| e.to_string())?;
    let berezin = report
        .records
        .iter()
        .filter_map(|r| r.commutator_berezin_max)
        .fold(0.0f64, f64::max);
    let third = report
        .records
        .iter()
        .map(|r| r.third.unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let symmetric = report
        .records
        .iter()
        .all(|r| r.commutator_berezin_max.is_some());
    check(
        symmetric && berezin <= 1e-10 && third >= 0.4,
        format!("max |B([T_f,T_g])| {berezin:.2e}, min ‖(λ/i)[T_f,T_g] - T_h‖ {third:.4}"),
    )
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let trunc = Truncation::phh(5, 5, 5);
    let (mut matched, mut mismatched) = (0.0f64, 0.0f64);
    for g in ["1", "z*conj(z)", "(z+conj(z))/2"] {
        for lambda in [0.0, 1.0] {
            let s = space(DomainKind::UnitBall2, lambda, SpaceFlavor::PlurihHolo2D);
            let rule = rule_for(&s, 12, 25).map_err(|e| e.to_string())?;
            let c = phh_two_route_check(&sym(g), lambda, &trunc, &rule, 30)
                .map_err(|e| e.to_string())?;
            matched = matched.max(c.max_matched_discrepancy);
            mismatched = mismatched.max(c.max_mismatched);
        }
    }
    let t = within(Duration::from_secs(120), start)?;
    check(
        matched <= 1e-8 && mismatched <= 1e-12,
        format!("max matched discrepancy {matched:.2e}, max mismatched {mismatched:.2e}, {t}"),
    )
}

fn ac9() -> Outcome {
    let opts = FredholmOptions {
        max_degree: 80,
        inner_extra: 10,
        with_inverse: true,
    };
    let d = phh_fredholm_sweep(
        &sym("2 + re(z)"),
        1.0,
        &[2, 40],
        &Truncation::plurih(20),
        opts,
    )
    .map_err(|e| e.to_string())?;
    let defect = |i: usize| {
        let r = &d.records[i];
        r.defect_right
            .unwrap_or(f64::NAN)
            .max(r.defect_left.unwrap_or(f64::NAN))
    };
    let (d2, d40) = (defect(0), defect(1));
    let js = [0, 10, 20, 30, 40, 50, 60];
    let weak = weak_null_sequence_bound(&sym("z - 0.3"), 1.0, C64::new(0.3, 0.0), &js, 120)
        .map_err(|e| e.to_string())?;
    let last = weak[weak.len() - 1];
    check(
        d40 < 0.25 * d2 && strictly_decreasing(&weak) && last < 0.05,
        format!("defect a2=2 {d2:.3e}, a2=40 {d40:.3e}; weak-null bound at j=60 {last:.4}"),
    )
}

fn ac10() -> Outcome {
    let s = space(DomainKind::UnitDisk, 5.0, SpaceFlavor::Holo);
    let rule = rule_for(&s, 120, 241).map_err(|e| e.to_string())?;
    let shells = [0.9, 0.99, 0.999];
    let z = essential_spectrum_estimate(&s, &sym("z"), "z", &shells, 360, &rule)
        .map_err(|e| e.to_string())?;
    let circle: Vec<C64> = (0..20_000)
        .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 20_000.0))
        .collect();
    let dz = hausdorff_distance(&z.outer_cloud(), &circle);
    let bump_text = "max(0, 1 - abs(z)^2/0.81)^2";
    let bump = essential_spectrum_estimate(&s, &sym(bump_text), bump_text, &shells, 64, &rule)
        .map_err(|e| e.to_string())?;
    let db = hausdorff_distance(&bump.outer_cloud(), &[C64::new(0.0, 0.0)]);
    check(
        dz < 0.01 && db < 1e-3,
        format!("f = z: distance to circle {dz:.2e}; bump: distance to 0 {db:.2e}"),
    )
}

fn ac11() -> Outcome {
    let mut cfg = SweepConfig::new(
        DomainKind::UnitDisk,
        vec![5.0, 10.0, 20.0, 40.0, 80.0],
        sym("step(0.5 - abs(z))"),
    );
    cfg.points = vec![Point::plane(0.0, 0.0)];
    let report = berezin_convergence_sweep(&cfg, &mut discard).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = report
        .records
        .iter()
        .map(|r| r.samples[0].berezin_error)
        .collect();
    // B(1_{|z|<1/2})(0) = 1 − (3/4)^{λ+1}; the Gauss rule does not resolve
    // the jump, so this is reported rather than enforced.
    let deviation = cfg
        .lambdas
        .iter()
        .zip(&errs)
        .map(|(l, e)| (e - 0.75f64.powf(l + 1.0)).abs())
        .fold(0.0, f64::max);
    let shown: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
    check(
        strictly_decreasing(&errs) && errs[errs.len() - 1] < 0.05,
        format!("errors {shown:?}, max deviation from closed form {deviation:.1e}"),
    )
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(command: &str, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_plurispec"))
        .arg(command)
        .arg("--config")
        .arg(configs_dir().join(format!("{command}.json")))
        .arg("--set")
        .arg(format!(
            "output.dir={}",
            serde_json::Value::from(out.to_string_lossy().into_owned())
        ))
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "{command} exited with {}: {}",
            status.status,
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    std::fs::read(out.join(format!("{command}.csv"))).map_err(|e| e.to_string())
}

fn ac12() -> Outcome {
    let commands = [
        "assemble",
        "blocks",
        "berezin",
        "quantize-norm",
        "quantize-semicomm",
        "quantize-third",
        "berezin-converge",
        "spectrum",
        "compactness",
        "phh-check",
        "phh-fredholm",
    ];
    let (a, b) = (
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    );
    let mut differing = Vec::new();
    for c in commands {
        if run_cli(c, a.path())? != run_cli(c, b.path())? {
            differing.push(c);
        }
    }
    check(
        differing.is_empty(),
        format!(
            "{} commands, CSVs differing between runs: {differing:?}",
            commands.len()
        ),
    )
}

fn main() {
    // Keep `cargo test -- --list` and filters harmless.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [Criterion; 12] = [
        ("AC1 quadrature moments", ac1),
        ("AC2 identity and adjoint", ac2),
        ("AC3 closed-form entries", ac3),
        ("AC4 sandwich and bound", ac4),
        ("AC5 norm gap trend", ac5),
        ("AC6 semi-commutator trend", ac6),
        ("AC7 third-property obstruction", ac7),
        ("AC8 two-route oracle", ac8),
        ("AC9 Fredholm mechanism", ac9),
        ("AC10 essential-spectrum estimate", ac10),
        ("AC11 Berezin convergence", ac11),
        ("AC12 determinism", ac12),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
