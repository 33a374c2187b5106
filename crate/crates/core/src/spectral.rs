//! Truncated spectra, essential-spectrum estimates from Berezin boundary
//! values, compactness and Fredholm diagnostics, and the block reduction of
//! the pluriharmonic-holomorphic space on `𝔹²`.
//!
//! On `𝔹²` a symbol `g̃(z₁, z₂) = g(z₁)` acts block-diagonally in the second
//! degree `a₂`, and on block `a₂` it acts as the pluriharmonic Toeplitz
//! operator on the disk with weight `a₂ + λ + 1`.

use std::f64::consts::PI;

use nalgebra::{Schur, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::berezin::{berezin_symbol, ser_c64};
use crate::operators::{
    assemble_between, assemble_on, assemble_toeplitz, matrix_element, operator_norm,
    singular_values, AssemblyPath, OperatorMatrix,
};
use crate::quadrature::{rule_for, QuadratureRule};
use crate::spaces::{BasisIndex, DomainKind, Point, SpaceFlavor, SpaceSpec, Truncation};
use crate::symbol::{Lifted, Reciprocal, Symbol};
use crate::{Error, Result, C64};

fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn is_hermitian(m: &OperatorMatrix) -> bool {
    let n = m.nrows();
    let scale = m.max_abs_entry().max(f64::MIN_POSITIVE);
    (0..n).all(|i| {
        (i..n).all(|j| (m.entries[(i, j)] - m.entries[(j, i)].conj()).norm() <= 1e-14 * scale)
    })
}

/// Triangular up to entries below `1e-14·max|entry|`, the assembly noise floor.
fn is_triangular(m: &OperatorMatrix) -> bool {
    let n = m.nrows();
    let floor = 1e-14 * m.max_abs_entry();
    let small = |i: usize, j: usize| m.entries[(i, j)].norm() <= floor;
    let lower = (0..n).all(|i| (i + 1..n).all(|j| small(i, j)));
    let upper = (0..n).all(|i| (0..i).all(|j| small(i, j)));
    lower || upper
}

/// Eigenvalues of the dense truncated matrix, sorted by real then imaginary
/// part. Hermitian matrices go through the symmetric solver and return real
/// values.
pub fn truncated_spectrum(m: &OperatorMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::config("truncated spectrum needs a square operator"));
    }
    let n = m.nrows();
    let mut eig: Vec<C64> = if is_triangular(m) {
        (0..n).map(|i| m.entries[(i, i)]).collect()
    } else if is_hermitian(m) {
        let h = (&m.entries + m.entries.adjoint()) * C64::new(0.5, 0.0);
        let se = SymmetricEigen::try_new(h, f64::EPSILON, 100_000).ok_or_else(|| {
            Error::numeric(format!(
                "Hermitian eigensolver did not converge for n = {n}"
            ))
        })?;
        se.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect()
    } else {
        let schur = Schur::try_new(m.entries.clone(), f64::EPSILON, 100_000).ok_or_else(|| {
            Error::numeric(format!("Schur iteration did not converge for n = {n}"))
        })?;
        let (_, t) = schur.unpack();
        (0..n).map(|i| t[(i, i)]).collect()
    };
    sort_complex(&mut eig);
    Ok(eig)
}

/// Default boundary shells: `{0.9, 0.99, 0.999}` on the disk and
/// `{4, 6, 8}/√λ` on the Fock plane.
pub fn default_shells(domain: DomainKind, lambda: f64) -> Vec<f64> {
    match domain {
        DomainKind::FockPlane => [4.0, 6.0, 8.0].iter().map(|r| r / lambda.sqrt()).collect(),
        _ => vec![0.9, 0.99, 0.999],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloudPoint {
    pub shell: usize,
    pub radius: f64,
    pub point: Point,
    #[serde(serialize_with = "ser_c64")]
    pub value: C64,
    /// The value moved by more than `1e-8·(1 + |value|)` under a finer rule.
    pub unstable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub space: SpaceSpec,
    pub symbol: String,
    pub truncation: Option<Truncation>,
    #[serde(serialize_with = "ser_c64_list")]
    pub eigenvalues: Vec<C64>,
    pub shells: Vec<f64>,
    pub cloud: Vec<CloudPoint>,
    /// Hausdorff distance between the two outermost shell clouds.
    pub drift: f64,
    /// Distance from 0 to the outermost cloud.
    pub zero_distance: f64,
    /// 0 is reported outside the estimated essential spectrum when
    /// `zero_distance > 2·drift`.
    pub zero_outside: bool,
}

fn ser_c64_list<S: serde::Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
    pairs.serialize(s)
}

impl SpectrumEstimate {
    /// Values on the outermost shell: the essential-spectrum estimate.
    pub fn outer_cloud(&self) -> Vec<C64> {
        let last = self.shells.len().saturating_sub(1);
        self.cloud
            .iter()
            .filter(|c| c.shell == last)
            .map(|c| c.value)
            .collect()
    }

    /// CSV with columns `shell,radius,re,im,unstable`.
    pub fn write_cloud_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["shell", "radius", "re", "im", "unstable"])?;
        for c in &self.cloud {
            w.write_record([
                c.shell.to_string(),
                format!("{:e}", c.radius),
                format!("{:e}", c.value.re),
                format!("{:e}", c.value.im),
                c.unstable.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Hausdorff distance between two finite point sets of `ℂ`.
pub fn hausdorff_distance(a: &[C64], b: &[C64]) -> f64 {
    let one_sided = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    one_sided(a, b).max(one_sided(b, a))
}

/// Berezin transforms of `f` on boundary shells, `points_per_shell` equally
/// spaced angles each. Every value is recomputed with a rule of 1.5 times the
/// degree and flagged when the two disagree.
pub fn essential_spectrum_estimate<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    symbol_text: &str,
    shells: &[f64],
    points_per_shell: usize,
    rule: &QuadratureRule,
) -> Result<SpectrumEstimate> {
    if space.domain == DomainKind::UnitBall2 {
        return Err(Error::config(
            "essential-spectrum shells are implemented on the disk and the Fock plane",
        ));
    }
    if shells.is_empty() || points_per_shell == 0 {
        return Err(Error::config(
            "need at least one shell and one point per shell",
        ));
    }
    if shells.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::config("shell radii must be strictly ascending"));
    }
    let fine_degree = rule.max_degree() + rule.max_degree().div_ceil(2);
    let fine = rule_for(space, fine_degree, 2 * fine_degree + 1)?;
    let jobs: Vec<(usize, f64, usize)> = shells
        .iter()
        .enumerate()
        .flat_map(|(s, &r)| (0..points_per_shell).map(move |k| (s, r, k)))
        .collect();
    let cloud = jobs
        .par_iter()
        .map(|&(shell, radius, k)| {
            let point = Point::Plane(C64::from_polar(
                radius,
                2.0 * PI * k as f64 / points_per_shell as f64,
            ));
            let value = berezin_symbol(space, f, &point, rule)?;
            let check = berezin_symbol(space, f, &point, &fine)?;
            let unstable = (value - check).norm() > 1e-8 * (1.0 + value.norm());
            Ok(CloudPoint {
                shell,
                radius,
                point,
                value,
                unstable,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let shell_values = |s: usize| -> Vec<C64> {
        cloud
            .iter()
            .filter(|c| c.shell == s)
            .map(|c| c.value)
            .collect()
    };
    let last = shells.len() - 1;
    let outer = shell_values(last);
    let drift = if last == 0 {
        0.0
    } else {
        hausdorff_distance(&outer, &shell_values(last - 1))
    };
    let zero_distance = outer.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    Ok(SpectrumEstimate {
        space: *space,
        symbol: symbol_text.to_string(),
        truncation: None,
        eigenvalues: Vec::new(),
        shells: shells.to_vec(),
        cloud,
        drift,
        zero_distance,
        zero_outside: zero_distance > 2.0 * drift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessRow {
    pub truncation: Truncation,
    pub dimension: usize,
    /// `σ_k` of the truncated matrix, when it has more than `k` singular values.
    pub sigma_k: Option<f64>,
    /// Norm of the compression of `T_f` to the upper half of the degrees.
    pub tail_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub k: usize,
    pub rows: Vec<CompactnessRow>,
    /// Tail norms strictly decrease along the ladder.
    pub tail_decreasing: bool,
}

fn degree_of(idx: &BasisIndex) -> u32 {
    match *idx {
        BasisIndex::Holo { a } => a,
        BasisIndex::Anti { b } => b,
        BasisIndex::Plus { a1, a2 } => a1 + a2,
        BasisIndex::Minus { b1, b2 } => b1 + b2,
    }
}

/// Singular-value diagnostics of `T_f` along a ladder of truncations. For a
/// compact operator the compression to high degrees becomes small; for
/// `f = z` or `f ≡ 1` it does not.
pub fn compactness_proxy<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    ladder: &[Truncation],
    k: usize,
    rule: &QuadratureRule,
) -> Result<CompactnessReport> {
    if ladder.len() < 3 {
        return Err(Error::config(
            "compactness proxy needs a ladder of at least 3 truncations",
        ));
    }
    if ladder
        .windows(2)
        .any(|w| !(w[1].dominates(&w[0]) && w[1] != w[0]))
    {
        return Err(Error::config(
            "truncation ladder must be strictly increasing",
        ));
    }
    let mut rows = Vec::with_capacity(ladder.len());
    for trunc in ladder {
        let t = assemble_toeplitz(space, f, trunc, rule)?;
        let sv = singular_values(&t);
        let top = t.row_basis.iter().map(degree_of).max().unwrap_or(0);
        let tail: Vec<BasisIndex> = t
            .row_basis
            .iter()
            .copied()
            .filter(|i| 2 * degree_of(i) > top)
            .collect();
        let tail_norm = operator_norm(&t.restrict(&tail, &tail)?);
        rows.push(CompactnessRow {
            truncation: *trunc,
            dimension: t.nrows(),
            sigma_k: sv.get(k).copied(),
            tail_norm,
        });
    }
    let tail_decreasing = rows.windows(2).all(|w| w[1].tail_norm < w[0].tail_norm);
    Ok(CompactnessReport {
        k,
        rows,
        tail_decreasing,
    })
}

/// `SpaceSpec{UnitDisk, a₂ + λ + 1, Plurih}`: the block of `𝔹²` with second degree `a₂`.
pub fn block_space(lambda: f64, a2: u32) -> Result<SpaceSpec> {
    SpaceSpec::new(
        DomainKind::UnitDisk,
        f64::from(a2) + lambda + 1.0,
        SpaceFlavor::Plurih,
    )
}

/// The pluriharmonic Toeplitz truncation of `g` on the disk at weight `a₂ + λ + 1`.
pub fn phh_block_elements<S: Symbol + ?Sized>(
    g: &S,
    lambda: f64,
    a2: u32,
    trunc: &Truncation,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    let space = block_space(lambda, a2)?;
    assemble_toeplitz(&space, g, trunc, rule)
}

/// `⟨g̃ 𝔢_col, 𝔢_row⟩` by direct quadrature on `𝔹²` with `g̃(z₁, z₂) = g(z₁)`.
pub fn phh_matrix_element_2d<S: Symbol + ?Sized>(
    g: &S,
    lambda: f64,
    row: &BasisIndex,
    col: &BasisIndex,
    rule: &QuadratureRule,
) -> Result<C64> {
    let space = SpaceSpec::new(DomainKind::UnitBall2, lambda, SpaceFlavor::PlurihHolo2D)?;
    matrix_element(&space, &Lifted(g), row, col, rule)
}

/// Result of comparing direct `𝔹²` elements with the reduced disk blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoRouteCheck {
    pub lambda: f64,
    pub pairs: usize,
    /// Largest `|2D element − block element|` over pairs with equal `a₂`.
    pub max_matched_discrepancy: f64,
    /// Largest `|2D element|` over pairs with different `a₂`.
    pub max_mismatched: f64,
}

/// Every pair of `PlurihHolo2D` indices within `trunc`, computed both ways:
/// all `𝔹²` elements at once by sampled-basis quadrature, and the reduced
/// blocks on the disk with a rule of degree `block_degree`.
pub fn phh_two_route_check<S: Symbol + ?Sized>(
    g: &S,
    lambda: f64,
    trunc: &Truncation,
    rule2d: &QuadratureRule,
    block_degree: u32,
) -> Result<TwoRouteCheck> {
    let space = SpaceSpec::new(DomainKind::UnitBall2, lambda, SpaceFlavor::PlurihHolo2D)?;
    let basis = crate::spaces::enumerate_basis(&space, trunc)?;
    let block_trunc = Truncation {
        max_second: 0,
        ..*trunc
    };
    let mut blocks = Vec::with_capacity(trunc.max_second as usize + 1);
    for a2 in 0..=trunc.max_second {
        let bs = block_space(lambda, a2)?;
        // The block rule is fixed; only the weight changes with a₂.
        let rule = rule_for(&bs, block_degree, 2 * block_degree + 1)?;
        blocks.push(assemble_toeplitz(&bs, g, &block_trunc, &rule)?);
    }
    let direct = assemble_on(
        &space,
        &Lifted(g),
        basis.clone(),
        basis.clone(),
        rule2d,
        AssemblyPath::Generic,
    )?;
    let (mut matched, mut mismatched) = (0.0f64, 0.0f64);
    for (i, r) in basis.iter().enumerate() {
        for (j, c) in basis.iter().enumerate() {
            let v = direct.entries[(i, j)];
            let (ra2, ca2) = (
                r.second_degree().unwrap_or(0),
                c.second_degree().unwrap_or(0),
            );
            if ra2 == ca2 {
                let block = &blocks[ra2 as usize];
                let bi = index_of(&block.row_basis, &r.first_coordinate())?;
                let bj = index_of(&block.col_basis, &c.first_coordinate())?;
                matched = matched.max((v - block.entries[(bi, bj)]).norm());
            } else {
                mismatched = mismatched.max(v.norm());
            }
        }
    }
    let pairs = basis.len() * basis.len();
    Ok(TwoRouteCheck {
        lambda,
        pairs,
        max_matched_discrepancy: matched,
        max_mismatched: mismatched,
    })
}

fn index_of(basis: &[BasisIndex], idx: &BasisIndex) -> Result<usize> {
    basis
        .iter()
        .position(|b| b == idx)
        .ok_or_else(|| Error::config(format!("{idx} is not in the block basis")))
}

/// Splits a coefficient vector over a `PlurihHolo2D` basis into its
/// contiguous `a₂` blocks.
pub fn split_by_second_degree<'a>(
    basis: &[BasisIndex],
    coeffs: &'a [C64],
) -> Result<Vec<(u32, &'a [C64])>> {
    if basis.len() != coeffs.len() {
        return Err(Error::config(format!(
            "{} coefficients for a basis of {}",
            coeffs.len(),
            basis.len()
        )));
    }
    let mut out: Vec<(u32, &[C64])> = Vec::new();
    let mut start = 0;
    for i in 1..=basis.len() {
        let here = basis[start].second_degree().unwrap_or(0);
        if i == basis.len() || basis[i].second_degree().unwrap_or(0) != here {
            if out.iter().any(|(a, _)| *a == here) {
                return Err(Error::config(format!(
                    "second degree {here} appears in two separate runs"
                )));
            }
            out.push((here, &coeffs[start..i]));
            start = i;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRecord {
    pub a2: u32,
    pub effective_weight: f64,
    pub min_singular_value: f64,
    /// `‖T_g T_{1/g} − I‖`, when `1/g` was requested.
    pub defect_right: Option<f64>,
    /// `‖T_{1/g} T_g − I‖`.
    pub defect_left: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDiagnostics {
    pub lambda: f64,
    pub truncation: Truncation,
    pub records: Vec<BlockRecord>,
}

/// Options for [`phh_fredholm_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmOptions {
    pub max_degree: u32,
    pub inner_extra: u32,
    /// Compute the regularizer defects with `1/g`.
    pub with_inverse: bool,
}

/// Per-block smallest singular value of `T_g` and the defects of `T_{1/g}`
/// as a regularizer, for the given `a₂`.
pub fn phh_fredholm_sweep<S: Symbol + ?Sized>(
    g: &S,
    lambda: f64,
    a2_values: &[u32],
    trunc: &Truncation,
    opts: FredholmOptions,
) -> Result<BlockDiagnostics> {
    let inner = trunc.widened(opts.inner_extra);
    let inv = Reciprocal {
        inner: g,
        floor: 1e-12,
    };
    let records = a2_values
        .par_iter()
        .map(|&a2| {
            let space = block_space(lambda, a2)?;
            let rule = rule_for(&space, opts.max_degree, 2 * opts.max_degree + 1)?;
            let t = assemble_toeplitz(&space, g, trunc, &rule)?;
            let min_sv = singular_values(&t).last().copied().unwrap_or(0.0);
            let (mut right, mut left) = (None, None);
            if opts.with_inverse {
                let id = OperatorMatrix::identity(&space, trunc)?;
                let g_oi = assemble_between(&space, g, trunc, &inner, &rule)?;
                let g_io = assemble_between(&space, g, &inner, trunc, &rule)?;
                let v_oi = assemble_between(&space, &inv, trunc, &inner, &rule)?;
                let v_io = assemble_between(&space, &inv, &inner, trunc, &rule)?;
                right = Some(operator_norm(&g_oi.compose(&v_io)?.sub(&id)?));
                left = Some(operator_norm(&v_oi.compose(&g_io)?.sub(&id)?));
            }
            Ok(BlockRecord {
                a2,
                effective_weight: space.weight,
                min_singular_value: min_sv,
                defect_right: right,
                defect_left: left,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockDiagnostics {
        lambda,
        truncation: *trunc,
        records,
    })
}

/// `B_{j+λ+1}(|g|²)(z₁)` on the disk for each `j`, with the holomorphic
/// closed-form kernel and a fixed rule of degree `max_degree`.
pub fn weak_null_sequence_bound<S: Symbol + ?Sized>(
    g: &S,
    lambda: f64,
    z1: C64,
    j_values: &[u32],
    max_degree: u32,
) -> Result<Vec<f64>> {
    let z = Point::Plane(z1);
    DomainKind::UnitDisk.check(&z)?;
    let sq = crate::symbol::FnSymbol::new(|p: &Point| Ok(C64::new(g.eval(p)?.norm_sqr(), 0.0)));
    j_values
        .par_iter()
        .map(|&j| {
            let space = SpaceSpec::new(
                DomainKind::UnitDisk,
                f64::from(j) + lambda + 1.0,
                SpaceFlavor::Holo,
            )?;
            let rule = rule_for(&space, max_degree, 2 * max_degree + 1)?;
            Ok(berezin_symbol(&space, &sq, &z, &rule)?.re)
        })
        .collect()
}
