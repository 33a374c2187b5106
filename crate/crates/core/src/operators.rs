//! Truncated Toeplitz matrices `⟨f e_j, e_i⟩_λ`, their block structure over
//! the pluriharmonic decomposition, and (semi-)commutators with an explicit
//! inner truncation.
//!
//! Products never pretend that truncated Toeplitz matrices multiply exactly:
//! `T̂_f` maps the inner truncation to the outer one, so `T̂_f T̂_g` sums over the
//! inner basis. For polynomial symbols of bandwidth `k` the product is exact
//! once the inner cutoffs exceed the outer ones by `k`.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::quadrature::{integrate_fn, QuadratureRule};
use crate::spaces::{
    enumerate_basis, ln_norm_sq_coefficient, monomial, BasisIndex, DomainKind, SpaceFlavor,
    SpaceSpec, Truncation,
};
use crate::symbol::{PolyDegree, Product, Symbol};
use crate::{Error, Result, C64};

/// Dense complex matrix with the basis indices of its rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub row_basis: Vec<BasisIndex>,
    pub col_basis: Vec<BasisIndex>,
    pub entries: DMatrix<C64>,
    pub space: SpaceSpec,
    /// Short description of the operation that built the matrix.
    pub provenance: String,
}

impl OperatorMatrix {
    pub fn new(
        space: SpaceSpec,
        row_basis: Vec<BasisIndex>,
        col_basis: Vec<BasisIndex>,
        entries: DMatrix<C64>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if entries.nrows() != row_basis.len() || entries.ncols() != col_basis.len() {
            return Err(Error::config(format!(
                "matrix is {}×{} but bases have {} and {} elements",
                entries.nrows(),
                entries.ncols(),
                row_basis.len(),
                col_basis.len()
            )));
        }
        if let Some(v) = entries
            .iter()
            .find(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::numeric(format!("matrix entry {v} is not finite")));
        }
        Ok(OperatorMatrix {
            row_basis,
            col_basis,
            entries,
            space,
            provenance: provenance.into(),
        })
    }

    pub fn identity(space: &SpaceSpec, trunc: &Truncation) -> Result<Self> {
        let basis = enumerate_basis(space, trunc)?;
        let n = basis.len();
        Self::new(
            *space,
            basis.clone(),
            basis,
            DMatrix::identity(n, n),
            "identity",
        )
    }

    pub fn zeros_like(&self) -> Self {
        let mut out = self.clone();
        out.entries.fill(C64::new(0.0, 0.0));
        out.provenance = "zero".into();
        out
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.row_basis == self.col_basis
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            row_basis: self.col_basis.clone(),
            col_basis: self.row_basis.clone(),
            entries: self.entries.adjoint(),
            space: self.space,
            provenance: format!("adjoint of {}", self.provenance),
        }
    }

    /// Matrix product; the inner bases must agree.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<Self> {
        if self.col_basis != rhs.row_basis {
            return Err(Error::config(
                "cannot compose operators with different inner bases",
            ));
        }
        Ok(OperatorMatrix {
            row_basis: self.row_basis.clone(),
            col_basis: rhs.col_basis.clone(),
            entries: &self.entries * &rhs.entries,
            space: self.space,
            provenance: format!("({}) · ({})", self.provenance, rhs.provenance),
        })
    }

    fn zip_with(
        &self,
        rhs: &OperatorMatrix,
        op: &str,
        f: impl Fn(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>,
    ) -> Result<Self> {
        if self.row_basis != rhs.row_basis || self.col_basis != rhs.col_basis {
            return Err(Error::config(format!(
                "cannot {op} operators over different bases"
            )));
        }
        Ok(OperatorMatrix {
            row_basis: self.row_basis.clone(),
            col_basis: self.col_basis.clone(),
            entries: f(&self.entries, &rhs.entries),
            space: self.space,
            provenance: format!("({}) {op} ({})", self.provenance, rhs.provenance),
        })
    }

    pub fn sub(&self, rhs: &OperatorMatrix) -> Result<Self> {
        self.zip_with(rhs, "-", |a, b| a - b)
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> Result<Self> {
        self.zip_with(rhs, "+", |a, b| a + b)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.entries *= c;
        out.provenance = format!("{c} · ({})", self.provenance);
        out
    }

    /// Sub-matrix on the given row and column indices (in the given order).
    pub fn restrict(&self, rows: &[BasisIndex], cols: &[BasisIndex]) -> Result<Self> {
        let lookup = |basis: &[BasisIndex], wanted: &[BasisIndex]| -> Result<Vec<usize>> {
            let pos: HashMap<&BasisIndex, usize> =
                basis.iter().enumerate().map(|(k, b)| (b, k)).collect();
            wanted
                .iter()
                .map(|b| {
                    pos.get(b)
                        .copied()
                        .ok_or_else(|| Error::config(format!("index {b} not in basis")))
                })
                .collect()
        };
        let (ri, ci) = (
            lookup(&self.row_basis, rows)?,
            lookup(&self.col_basis, cols)?,
        );
        let entries = DMatrix::from_fn(ri.len(), ci.len(), |i, j| self.entries[(ri[i], ci[j])]);
        Ok(OperatorMatrix {
            row_basis: rows.to_vec(),
            col_basis: cols.to_vec(),
            entries,
            space: self.space,
            provenance: self.provenance.clone(),
        })
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// JSON document: basis descriptors and row-major `[re, im]` entries.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            space: &'a SpaceSpec,
            provenance: &'a str,
            rows: &'a [BasisIndex],
            cols: &'a [BasisIndex],
            entries: Vec<Vec<[f64; 2]>>,
        }
        let entries = (0..self.nrows())
            .map(|i| {
                (0..self.ncols())
                    .map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im])
                    .collect()
            })
            .collect();
        serde_json::to_value(Doc {
            space: &self.space,
            provenance: &self.provenance,
            rows: &self.row_basis,
            cols: &self.col_basis,
            entries,
        })
        .expect("operator documents serialize")
    }

    /// Flattened CSV: `row,col,row_index,col_index,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "col", "row_index", "col_index", "re", "im"])?;
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let v = self.entries[(i, j)];
                w.write_record([
                    i.to_string(),
                    j.to_string(),
                    self.row_basis[i].to_string(),
                    self.col_basis[j].to_string(),
                    format!("{:e}", v.re),
                    format!("{:e}", v.im),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Which assembly algorithm to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AssemblyPath {
    /// Separable radial×angular sums on one-dimensional domains, matrix
    /// products of sampled basis values on the ball; `c·I` for constant symbols.
    #[default]
    Auto,
    /// Always `Vᴴ diag(w f) V` over the full node set.
    Generic,
}

fn ensure_rule(space: &SpaceSpec, rule: &QuadratureRule) -> Result<()> {
    if !rule.matches(space.domain, space.weight) {
        return Err(Error::config(format!(
            "quadrature rule for {:?}, λ = {} cannot integrate against {:?}, λ = {}",
            rule.domain(),
            rule.weight(),
            space.domain,
            space.weight
        )));
    }
    Ok(())
}

/// Exponent bounds of the basis functions in a list.
fn basis_degrees(basis: &[BasisIndex]) -> PolyDegree {
    let mut d = PolyDegree::ZERO;
    for idx in basis {
        let e = match *idx {
            BasisIndex::Holo { a } => PolyDegree {
                z1: a,
                ..PolyDegree::ZERO
            },
            BasisIndex::Anti { b } => PolyDegree {
                z1_bar: b,
                ..PolyDegree::ZERO
            },
            BasisIndex::Plus { a1, a2 } => PolyDegree {
                z1: a1,
                z2: a2,
                ..PolyDegree::ZERO
            },
            BasisIndex::Minus { b1, b2 } => PolyDegree {
                z1_bar: b1,
                z2: b2,
                ..PolyDegree::ZERO
            },
        };
        d = d.max(e);
    }
    d
}

/// Largest exponent in `f · e_col · conj(e_row)` for a polynomial symbol.
pub fn required_degree(symbol_degree: PolyDegree, rows: &[BasisIndex], cols: &[BasisIndex]) -> u32 {
    symbol_degree
        .add(basis_degrees(cols))
        .add(basis_degrees(rows).conj())
        .max_exponent()
}

fn check_rule_degree<S: Symbol + ?Sized>(
    f: &S,
    rows: &[BasisIndex],
    cols: &[BasisIndex],
    rule: &QuadratureRule,
) -> Result<()> {
    if let Some(deg) = f.polynomial_degree() {
        let need = required_degree(deg, rows, cols);
        if need > rule.max_degree() {
            return Err(Error::config(format!(
                "quadrature rule exact to degree {} but the polynomial symbol needs {need}",
                rule.max_degree()
            )));
        }
    }
    Ok(())
}

/// `T_f` on the truncated basis: entry `(i, j) = ⟨f e_j, e_i⟩_λ`.
pub fn assemble_toeplitz<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    trunc: &Truncation,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    assemble_between(space, f, trunc, trunc, rule)
}

/// `T̂_f` from the `cols` truncation into the `rows` truncation.
pub fn assemble_between<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    rows: &Truncation,
    cols: &Truncation,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    let row_basis = enumerate_basis(space, rows)?;
    let col_basis = enumerate_basis(space, cols)?;
    assemble_on(space, f, row_basis, col_basis, rule, AssemblyPath::Auto)
}

/// Assembly over explicit basis lists.
pub fn assemble_on<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    row_basis: Vec<BasisIndex>,
    col_basis: Vec<BasisIndex>,
    rule: &QuadratureRule,
    path: AssemblyPath,
) -> Result<OperatorMatrix> {
    space.validate()?;
    ensure_rule(space, rule)?;
    check_rule_degree(f, &row_basis, &col_basis, rule)?;
    let constant = f.constant_value().filter(|_| path == AssemblyPath::Auto);
    let entries = match (path, space.domain) {
        // T_c = c·I in an orthonormal basis.
        _ if constant.is_some() => {
            let c = constant.unwrap_or_default();
            DMatrix::from_fn(row_basis.len(), col_basis.len(), |i, j| {
                if row_basis[i] == col_basis[j] {
                    c
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        }
        (AssemblyPath::Auto, DomainKind::FockPlane | DomainKind::UnitDisk) => {
            assemble_separable(space, f, &row_basis, &col_basis, rule)?
        }
        _ => assemble_generic(space, f, &row_basis, &col_basis, rule)?,
    };
    OperatorMatrix::new(*space, row_basis, col_basis, entries, "toeplitz")
}

/// Radial/angular separation on one-dimensional domains.
///
/// With `e(re^{iθ}) = N r^d e^{isθ}` and `F_k(m) = Σ_θ w_θ f(r_k e^{iθ}) e^{imθ}`,
/// the entry is `Σ_k w_k N_i r_k^{d_i} N_j r_k^{d_j} F_k(s_j − s_i)`.
fn assemble_separable<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    rows: &[BasisIndex],
    cols: &[BasisIndex],
    rule: &QuadratureRule,
) -> Result<DMatrix<C64>> {
    let radii = rule.radii();
    let angles = rule.angular_nodes();
    let m = angles.len();
    let ra = |idx: &BasisIndex| -> (u32, i64) {
        match *idx {
            BasisIndex::Holo { a } => (a, i64::from(a)),
            BasisIndex::Anti { b } => (b, -i64::from(b)),
            _ => unreachable!("one-dimensional bases only"),
        }
    };
    let row_ra: Vec<(u32, i64)> = rows.iter().map(ra).collect();
    let col_ra: Vec<(u32, i64)> = cols.iter().map(ra).collect();
    let (Some(fmin), Some(fmax)) = (
        col_ra
            .iter()
            .map(|c| c.1)
            .min()
            .zip(row_ra.iter().map(|r| r.1).max())
            .map(|(a, b)| a - b),
        col_ra
            .iter()
            .map(|c| c.1)
            .max()
            .zip(row_ra.iter().map(|r| r.1).min())
            .map(|(a, b)| a - b),
    ) else {
        return Ok(DMatrix::zeros(rows.len(), cols.len()));
    };
    let nfreq = (fmax - fmin + 1) as usize;
    let radial_shortcut = f.is_radial();

    // F[k][m − fmin]
    let fourier: Vec<Vec<C64>> = radii
        .par_iter()
        .map(|&(r, _)| -> Result<Vec<C64>> {
            let mut out = vec![C64::new(0.0, 0.0); nfreq];
            if radial_shortcut {
                if fmin <= 0 && 0 <= fmax {
                    out[(-fmin) as usize] =
                        eval_checked(f, &crate::Point::Plane(C64::new(r, 0.0)))?;
                }
                return Ok(out);
            }
            let vals: Vec<C64> = angles
                .iter()
                .map(|e| eval_checked(f, &crate::Point::Plane(e * r)))
                .collect::<Result<_>>()?;
            let wa = 1.0 / m as f64;
            for (slot, freq) in out.iter_mut().zip(fmin..=fmax) {
                let mut acc = C64::new(0.0, 0.0);
                for (q, v) in vals.iter().enumerate() {
                    let k = (freq * q as i64).rem_euclid(m as i64) as usize;
                    acc += v * angles[k];
                }
                *slot = acc * wa;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let factors = |basis: &[BasisIndex], ra: &[(u32, i64)]| -> Vec<Vec<f64>> {
        basis
            .iter()
            .zip(ra)
            .map(|(idx, &(d, _))| {
                let half_ln_n2 = 0.5 * ln_norm_sq_coefficient(space.domain, space.weight, idx);
                radii
                    .iter()
                    .map(|&(r, _)| (half_ln_n2 + f64::from(d) * r.ln()).exp())
                    .collect()
            })
            .collect()
    };
    let row_f = factors(rows, &row_ra);
    let col_f = factors(cols, &col_ra);
    let weights: Vec<f64> = radii.iter().map(|&(_, w)| w).collect();

    let data: Vec<Vec<C64>> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            (0..cols.len())
                .map(|j| {
                    let slot = (col_ra[j].1 - row_ra[i].1 - fmin) as usize;
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..weights.len() {
                        let c = row_f[i][k] * col_f[j][k] * weights[k];
                        acc += fourier[k][slot] * c;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let out = DMatrix::from_fn(rows.len(), cols.len(), |i, j| data[i][j]);
    if let Some((pos, v)) = out
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
    {
        let (i, j) = (pos % rows.len(), pos / rows.len());
        return Err(Error::numeric(format!(
            "Toeplitz entry ({}, {}) is {v}",
            rows[i], cols[j]
        )));
    }
    Ok(out)
}

fn eval_checked<S: Symbol + ?Sized>(f: &S, p: &crate::Point) -> Result<C64> {
    let v = f.eval(p)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::numeric(format!(
            "symbol value {v} at quadrature node {p}"
        )))
    }
}

/// Basis values at every rule node, `V[q, j] = e_j(node_q)`.
fn basis_values(space: &SpaceSpec, basis: &[BasisIndex], rule: &QuadratureRule) -> DMatrix<C64> {
    let coeffs: Vec<f64> = basis
        .iter()
        .map(|idx| (0.5 * ln_norm_sq_coefficient(space.domain, space.weight, idx)).exp())
        .collect();
    let nodes = rule.nodes();
    DMatrix::from_fn(nodes.len(), basis.len(), |q, j| {
        monomial(&basis[j], &nodes[q]) * coeffs[j]
    })
}

fn assemble_generic<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    rows: &[BasisIndex],
    cols: &[BasisIndex],
    rule: &QuadratureRule,
) -> Result<DMatrix<C64>> {
    let wf: Vec<C64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights())
        .map(|(p, &w)| eval_checked(f, p).map(|v| v * w))
        .collect::<Result<_>>()?;
    let v_col = basis_values(space, cols, rule);
    let v_row = if rows == cols {
        v_col.clone()
    } else {
        basis_values(space, rows, rule)
    };
    let mut weighted = v_col;
    for (q, w) in wf.iter().enumerate() {
        for j in 0..weighted.ncols() {
            weighted[(q, j)] *= w;
        }
    }
    let out = v_row.adjoint() * weighted;
    if out.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::numeric(
            "non-finite Toeplitz entry in generic assembly",
        ));
    }
    Ok(out)
}

/// Single entry `⟨f e_col, e_row⟩` by direct quadrature over all nodes.
pub fn matrix_element<S: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &S,
    row: &BasisIndex,
    col: &BasisIndex,
    rule: &QuadratureRule,
) -> Result<C64> {
    ensure_rule(space, rule)?;
    let nr = crate::spaces::basis_coefficient(space, row)?;
    let nc = crate::spaces::basis_coefficient(space, col)?;
    integrate_fn(rule, |p| {
        Ok(f.eval(p)? * monomial(col, p) * monomial(row, p).conj() * (nr * nc))
    })
}

/// Block operators of a pluriharmonic Toeplitz matrix.
///
/// With the basis split into `Holo a` (the holomorphic space) and `Anti b`
/// (anti-holomorphic functions orthogonal to constants):
///
/// * `t`: holo → holo, `a`: anti → holo, `b`: holo → anti, `tah`: anti → anti;
/// * `e`: the constant → anti (a column), `g`: anti → the constant (a row).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMap {
    pub t: OperatorMatrix,
    pub a: OperatorMatrix,
    pub b: OperatorMatrix,
    pub tah: OperatorMatrix,
    pub e: OperatorMatrix,
    pub g: OperatorMatrix,
}

fn split_plurih(basis: &[BasisIndex]) -> (Vec<BasisIndex>, Vec<BasisIndex>) {
    basis
        .iter()
        .partition(|idx| matches!(idx, BasisIndex::Holo { .. }))
}

pub fn extract_blocks(m: &OperatorMatrix) -> Result<BlockMap> {
    if m.space.flavor != SpaceFlavor::Plurih {
        return Err(Error::config(format!(
            "block extraction needs a Plurih operator, got {:?}",
            m.space.flavor
        )));
    }
    let (rh, ra) = split_plurih(&m.row_basis);
    let (ch, ca) = split_plurih(&m.col_basis);
    if ra
        .iter()
        .chain(&ca)
        .any(|i| !matches!(i, BasisIndex::Anti { .. }))
    {
        return Err(Error::config(
            "Plurih operator has non one-dimensional indices",
        ));
    }
    let constant = [BasisIndex::Holo { a: 0 }];
    let blocks = BlockMap {
        t: m.restrict(&rh, &ch)?,
        a: m.restrict(&rh, &ca)?,
        b: m.restrict(&ra, &ch)?,
        tah: m.restrict(&ra, &ca)?,
        e: m.restrict(&ra, &constant)?,
        g: m.restrict(&constant, &ca)?,
    };
    Ok(blocks)
}

impl BlockMap {
    /// The full matrix `[[T, A], [B, Tah]]` over the concatenated bases.
    pub fn reassemble(&self) -> Result<OperatorMatrix> {
        let (nh, na) = (self.t.nrows(), self.b.nrows());
        let (mh, ma) = (self.t.ncols(), self.a.ncols());
        let mut entries = DMatrix::zeros(nh + na, mh + ma);
        entries
            .view_mut((0, 0), (nh, mh))
            .copy_from(&self.t.entries);
        entries
            .view_mut((0, mh), (nh, ma))
            .copy_from(&self.a.entries);
        entries
            .view_mut((nh, 0), (na, mh))
            .copy_from(&self.b.entries);
        entries
            .view_mut((nh, mh), (na, ma))
            .copy_from(&self.tah.entries);
        let rows = self
            .t
            .row_basis
            .iter()
            .chain(&self.b.row_basis)
            .copied()
            .collect();
        let cols = self
            .t
            .col_basis
            .iter()
            .chain(&self.a.col_basis)
            .copied()
            .collect();
        OperatorMatrix::new(self.t.space, rows, cols, entries, "reassembled blocks")
    }
}

fn check_inner(trunc: &Truncation, inner: &Truncation) -> Result<()> {
    if !inner.dominates(trunc) {
        return Err(Error::config(format!(
            "inner truncation {inner:?} is smaller than outer {trunc:?}"
        )));
    }
    Ok(())
}

/// `T̂_f T̂_g − T_{fg}` on the outer truncation, with the product summed over
/// the inner truncation.
pub fn semi_commutator<F: Symbol + ?Sized, G: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &F,
    g: &G,
    trunc: &Truncation,
    inner: &Truncation,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    check_inner(trunc, inner)?;
    let tf = assemble_between(space, f, trunc, inner, rule)?;
    let tg = assemble_between(space, g, inner, trunc, rule)?;
    let tfg = assemble_toeplitz(space, &Product(f, g), trunc, rule)?;
    let mut out = tf.compose(&tg)?.sub(&tfg)?;
    out.provenance = "semi-commutator".into();
    Ok(out)
}

/// `T̂_f T̂_g − T̂_g T̂_f` on the outer truncation.
pub fn commutator<F: Symbol + ?Sized, G: Symbol + ?Sized>(
    space: &SpaceSpec,
    f: &F,
    g: &G,
    trunc: &Truncation,
    inner: &Truncation,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    check_inner(trunc, inner)?;
    let tf_oi = assemble_between(space, f, trunc, inner, rule)?;
    let tg_io = assemble_between(space, g, inner, trunc, rule)?;
    let tg_oi = assemble_between(space, g, trunc, inner, rule)?;
    let tf_io = assemble_between(space, f, inner, trunc, rule)?;
    let mut out = tf_oi.compose(&tg_io)?.sub(&tg_oi.compose(&tf_io)?)?;
    out.provenance = "commutator".into();
    Ok(out)
}

/// Largest singular value.
pub fn operator_norm(m: &OperatorMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &OperatorMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .entries
        .clone()
        .singular_values()
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `max |f|` over the rule's nodes: a lower estimate of `‖f‖_∞`.
pub fn node_sup<S: Symbol + ?Sized>(f: &S, rule: &QuadratureRule) -> Result<f64> {
    let vals: Vec<f64> = rule
        .nodes()
        .par_iter()
        .map(|p| eval_checked(f, p).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}
