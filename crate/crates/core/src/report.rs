//! CSV and JSON report writers.
//!
//! JSON reports wrap the payload with the artifact version, the command and
//! the fully resolved configuration. CSV tables put `lambda` first and split
//! complex numbers into `re`/`im` columns. Floats use Rust's shortest
//! round-trip formatting, so identical inputs give identical bytes.

use std::io::Write;

use serde::Serialize;

use crate::asymptotics::{SweepKind, SweepRecord};
use crate::spectral::{BlockDiagnostics, CompactnessReport};
use crate::{Result, VERSION};

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    version: &'static str,
    command: &'a str,
    config: &'a C,
    report: &'a R,
}

/// Writes `{version, command, config, report}` as pretty JSON.
pub fn write_json<W: Write, C: Serialize, R: Serialize>(
    mut out: W,
    command: &str,
    config: &C,
    report: &R,
) -> Result<()> {
    let env = Envelope {
        version: VERSION,
        command,
        config,
        report,
    };
    serde_json::to_writer_pretty(&mut out, &env)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Column names of the sweep CSV of each kind:
///
/// * norm: `lambda,truncation,rule_degree,sup_node,norm_ph,norm_holo,gap,max_berezin_error,min_mass`
/// * semicommutator: `lambda,truncation,rule_degree,sup_node,semicommutator,block_11,block_12,block_21,block_22`
/// * third: `lambda,truncation,rule_degree,commutator,lambda_commutator,third,commutator_berezin_max,h_berezin_max`
/// * berezin_convergence, one row per sample point: `lambda,rule_degree,point,re_z,im_z,error`
pub fn sweep_header(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::Norm => &[
            "lambda",
            "truncation",
            "rule_degree",
            "sup_node",
            "norm_ph",
            "norm_holo",
            "gap",
            "max_berezin_error",
            "min_mass",
        ],
        SweepKind::Semicommutator => &[
            "lambda",
            "truncation",
            "rule_degree",
            "sup_node",
            "semicommutator",
            "block_11",
            "block_12",
            "block_21",
            "block_22",
        ],
        SweepKind::Third => &[
            "lambda",
            "truncation",
            "rule_degree",
            "commutator",
            "lambda_commutator",
            "third",
            "commutator_berezin_max",
            "h_berezin_max",
        ],
        SweepKind::BerezinConvergence => {
            &["lambda", "rule_degree", "point", "re_z", "im_z", "error"]
        }
    }
}

/// CSV rows of one record (several for the convergence sweep).
pub fn sweep_rows(kind: SweepKind, r: &SweepRecord) -> Vec<Vec<String>> {
    let lead = [
        num(r.lambda),
        r.truncation.to_string(),
        r.rule_degree.to_string(),
    ];
    match kind {
        SweepKind::Norm => {
            let max_err = r.samples.iter().map(|s| s.berezin_error).reduce(f64::max);
            let min_mass = r.samples.iter().filter_map(|s| s.mass).reduce(f64::min);
            let mut row = lead.to_vec();
            row.extend([
                num(r.sup_node),
                opt(r.norm_ph),
                opt(r.norm_holo),
                opt(r.gap),
                opt(max_err),
                opt(min_mass),
            ]);
            vec![row]
        }
        SweepKind::Semicommutator => {
            let b = r.semicommutator_blocks;
            let mut row = lead.to_vec();
            row.extend([num(r.sup_node), opt(r.semicommutator)]);
            row.extend((0..4).map(|i| opt(b.map(|b| b[i]))));
            vec![row]
        }
        SweepKind::Third => {
            let mut row = lead.to_vec();
            row.extend(
                [
                    r.commutator,
                    r.lambda_commutator,
                    r.third,
                    r.commutator_berezin_max,
                    r.h_berezin_max,
                ]
                .map(opt),
            );
            vec![row]
        }
        SweepKind::BerezinConvergence => r
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let z = s.point.z1();
                vec![
                    num(r.lambda),
                    r.rule_degree.to_string(),
                    i.to_string(),
                    num(z.re),
                    num(z.im),
                    num(s.berezin_error),
                ]
            })
            .collect(),
    }
}

/// Streams sweep records to CSV as they arrive.
pub struct SweepCsv<W: Write> {
    kind: SweepKind,
    writer: csv::Writer<W>,
}

impl<W: Write> SweepCsv<W> {
    pub fn new(kind: SweepKind, out: W) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(sweep_header(kind))?;
        writer.flush()?;
        Ok(SweepCsv { kind, writer })
    }

    pub fn push(&mut self, r: &SweepRecord) -> Result<()> {
        for row in sweep_rows(self.kind, r) {
            self.writer.write_record(&row)?;
        }
        self.writer.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.writer
            .into_inner()
            .map_err(|e| crate::Error::Io(e.into_error()))
    }
}

/// A plain CSV table.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `lambda,a2,effective_weight,min_singular_value,defect_right,defect_left`.
pub fn write_block_diagnostics_csv<W: Write>(d: &BlockDiagnostics, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda",
        "a2",
        "effective_weight",
        "min_singular_value",
        "defect_right",
        "defect_left",
    ])?;
    for r in &d.records {
        w.write_record([
            num(d.lambda),
            r.a2.to_string(),
            num(r.effective_weight),
            num(r.min_singular_value),
            opt(r.defect_right),
            opt(r.defect_left),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `lambda,max_holo,max_anti,dimension,sigma_k,tail_norm`.
pub fn write_compactness_csv<W: Write>(lambda: f64, c: &CompactnessReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda",
        "max_holo",
        "max_anti",
        "dimension",
        "sigma_k",
        "tail_norm",
    ])?;
    for r in &c.rows {
        w.write_record([
            num(lambda),
            r.truncation.max_holo.to_string(),
            r.truncation.max_anti.to_string(),
            r.dimension.to_string(),
            opt(r.sigma_k),
            num(r.tail_norm),
        ])?;
    }
    w.flush()?;
    Ok(())
}
