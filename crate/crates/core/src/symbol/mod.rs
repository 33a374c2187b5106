//! Symbol functions: a small expression language and the [`Symbol`] trait
//! consumed by quadrature, Toeplitz assembly and Berezin transforms.
//!
//! ```
//! use plurispec_core::symbol::parse_symbol;
//! use plurispec_core::{Point, Symbol};
//!
//! let f = parse_symbol("(z + conj(z))/2").unwrap();
//! let v = f.eval(&Point::plane(0.3, 0.4)).unwrap();
//! assert!((v.re - 0.3).abs() < 1e-15 && v.im == 0.0);
//! ```
//!
//! `^` takes a nonnegative integer literal and binds tighter than `*` but
//! applies to a whole unary, so `-z^2` is `(-z)^2`. Beyond the usual functions
//! the language has `step(x)` (1 where `re x > 0`, else 0) and two-argument
//! `max`/`min` on real parts, enough for radial steps and compactly supported
//! bumps.

mod ast;
mod lexer;
mod parser;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use ast::{BinOp, Func, Node, NodeKind, PolyDegree, Span, Var};

use crate::spaces::Point;
use crate::{Error, Result, C64};

/// A function on a domain that can be sampled at points.
pub trait Symbol: Send + Sync {
    fn eval(&self, p: &Point) -> Result<C64>;

    /// True when the value depends only on `|z|` (one-dimensional domains).
    fn is_radial(&self) -> bool {
        false
    }

    /// Degree bounds when the symbol is a polynomial in `z, z̄`.
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        None
    }

    /// The value when the symbol is known to be constant.
    fn constant_value(&self) -> Option<C64> {
        None
    }
}

/// Parsed symbol expression.
#[derive(Debug, Clone)]
pub struct SymbolExpr {
    root: Node,
    source: String,
}

/// Equality ignores spans and source text.
impl PartialEq for SymbolExpr {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

pub fn parse_symbol(text: &str) -> Result<SymbolExpr> {
    let root = parser::parse(text)?;
    Ok(SymbolExpr {
        root,
        source: text.to_string(),
    })
}

pub fn eval_symbol(expr: &SymbolExpr, p: &Point) -> Result<C64> {
    expr.root.eval(p)
}

impl SymbolExpr {
    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The text the expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn uses_second_coordinate(&self) -> bool {
        self.root.uses(Var::Z2)
    }

    /// Domain error when the expression mentions `z2` on a one-dimensional domain.
    pub fn check_dimension(&self, dimension: usize) -> Result<()> {
        if dimension < 2 && self.uses_second_coordinate() {
            Err(Error::domain(format!(
                "symbol {:?} uses z2 on a one-dimensional domain",
                self.source
            )))
        } else {
            Ok(())
        }
    }

    pub fn constant(c: C64) -> Self {
        let root = Node {
            kind: NodeKind::Num(c),
            span: (0, 0),
        };
        let source = root.to_string();
        SymbolExpr { root, source }
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl Serialize for SymbolExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

/// Accepts expression text or a bare real number.
impl<'de> Deserialize<'de> for SymbolExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Number(x) => x.to_string(),
        };
        parse_symbol(&text).map_err(serde::de::Error::custom)
    }
}

impl Symbol for SymbolExpr {
    fn eval(&self, p: &Point) -> Result<C64> {
        self.root.eval(p)
    }

    fn is_radial(&self) -> bool {
        self.root.is_radial()
    }

    fn polynomial_degree(&self) -> Option<PolyDegree> {
        self.root.degree()
    }

    fn constant_value(&self) -> Option<C64> {
        if self.root.is_constant() {
            self.root.eval(&Point::plane(0.0, 0.0)).ok()
        } else {
            None
        }
    }
}

impl<S: Symbol + ?Sized> Symbol for &S {
    fn eval(&self, p: &Point) -> Result<C64> {
        (**self).eval(p)
    }
    fn is_radial(&self) -> bool {
        (**self).is_radial()
    }
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        (**self).polynomial_degree()
    }
    fn constant_value(&self) -> Option<C64> {
        (**self).constant_value()
    }
}

impl<S: Symbol + ?Sized> Symbol for Arc<S> {
    fn eval(&self, p: &Point) -> Result<C64> {
        (**self).eval(p)
    }
    fn is_radial(&self) -> bool {
        (**self).is_radial()
    }
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        (**self).polynomial_degree()
    }
    fn constant_value(&self) -> Option<C64> {
        (**self).constant_value()
    }
}

/// A closure as a symbol, with no structural information.
pub struct FnSymbol<F>(F);

impl<F> FnSymbol<F>
where
    F: Fn(&Point) -> Result<C64> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        FnSymbol(f)
    }
}

impl<F> Symbol for FnSymbol<F>
where
    F: Fn(&Point) -> Result<C64> + Send + Sync,
{
    fn eval(&self, p: &Point) -> Result<C64> {
        (self.0)(p)
    }
}

/// Pointwise product `f·g`.
pub struct Product<A, B>(pub A, pub B);

impl<A: Symbol, B: Symbol> Symbol for Product<A, B> {
    fn eval(&self, p: &Point) -> Result<C64> {
        Ok(self.0.eval(p)? * self.1.eval(p)?)
    }
    fn is_radial(&self) -> bool {
        self.0.is_radial() && self.1.is_radial()
    }
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        Some(self.0.polynomial_degree()?.add(self.1.polynomial_degree()?))
    }
    fn constant_value(&self) -> Option<C64> {
        Some(self.0.constant_value()? * self.1.constant_value()?)
    }
}

/// Complex conjugate `f̄`.
pub struct Conj<A>(pub A);

impl<A: Symbol> Symbol for Conj<A> {
    fn eval(&self, p: &Point) -> Result<C64> {
        Ok(self.0.eval(p)?.conj())
    }
    fn is_radial(&self) -> bool {
        self.0.is_radial()
    }
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        Some(self.0.polynomial_degree()?.conj())
    }
    fn constant_value(&self) -> Option<C64> {
        self.0.constant_value().map(|c| c.conj())
    }
}

/// `1/f`; evaluation fails where `|f| < floor`.
pub struct Reciprocal<A> {
    pub inner: A,
    pub floor: f64,
}

impl<A: Symbol> Symbol for Reciprocal<A> {
    fn eval(&self, p: &Point) -> Result<C64> {
        let v = self.inner.eval(p)?;
        if v.norm() < self.floor {
            return Err(Error::numeric(format!(
                "|g| = {:e} below {:e} at {p}, 1/g undefined",
                v.norm(),
                self.floor
            )));
        }
        Ok(v.inv())
    }
    fn is_radial(&self) -> bool {
        self.inner.is_radial()
    }
    fn constant_value(&self) -> Option<C64> {
        self.inner.constant_value().map(|c| c.inv())
    }
}

/// A symbol on the disk viewed on the ball through the first coordinate,
/// `g̃(z₁, z₂) = g(z₁)`.
pub struct Lifted<A>(pub A);

impl<A: Symbol> Symbol for Lifted<A> {
    fn eval(&self, p: &Point) -> Result<C64> {
        self.0.eval(&Point::Plane(p.z1()))
    }
    fn polynomial_degree(&self) -> Option<PolyDegree> {
        let d = self.0.polynomial_degree()?;
        Some(PolyDegree {
            z1: d.z1,
            z1_bar: d.z1_bar,
            z2: 0,
            z2_bar: 0,
        })
    }
    fn constant_value(&self) -> Option<C64> {
        self.0.constant_value()
    }
}

/// User assertions about a symbol's class. They select experiments and each
/// one triggers a numerical check (see `berezin::check_tags`); none is proved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymbolClassTags {
    pub bounded: bool,
    pub continuous_up_to_boundary: bool,
    /// `C₀`.
    pub vanishes_at_boundary: bool,
    /// `VO`.
    pub vanishing_oscillation: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at(s: &str, re: f64, im: f64) -> C64 {
        parse_symbol(s)
            .unwrap()
            .eval(&Point::plane(re, im))
            .unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(at("1", 0.1, 0.2), C64::new(1.0, 0.0));
        assert!((at("z*conj(z)", 0.5, 0.0) - 0.25).norm() < 1e-15);
        assert!((at("(z+conj(z))/2", 0.3, 0.4) - 0.3).norm() < 1e-15);
        assert_eq!(at("exp(z)", 0.0, 0.0), C64::new(1.0, 0.0));
        assert!((at("abs(z)^2", 1.0, 1.0) - 2.0).norm() < 1e-14);
        assert_eq!(at("sin(log(1-z*conj(z)))", 0.0, 0.0), C64::new(0.0, 0.0));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(at("2+3*4", 0.0, 0.0).re, 14.0);
        assert_eq!(at("8/4/2", 0.0, 0.0).re, 1.0);
        assert_eq!(at("2*3^2", 0.0, 0.0).re, 18.0);
        assert_eq!(at("-2^2", 0.0, 0.0).re, 4.0);
        assert_eq!(at("1-2-3", 0.0, 0.0).re, -4.0);
        assert_eq!(at("2i*i", 0.0, 0.0).re, -2.0);
        assert_eq!(at("max(0, 1 - 2)", 0.0, 0.0).re, 0.0);
        assert_eq!(at("step(1/2 - abs(z))", 0.3, 0.0).re, 1.0);
        assert_eq!(at("step(1/2 - abs(z))", 0.6, 0.0).re, 0.0);
    }

    #[test]
    fn second_coordinate() {
        let f = parse_symbol("z1*conj(z2)").unwrap();
        let v = f
            .eval(&Point::Pair(C64::new(0.0, 1.0), C64::new(0.0, 1.0)))
            .unwrap();
        assert_eq!(v, C64::new(1.0, 0.0));
        assert!(matches!(
            f.eval(&Point::plane(0.1, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(f.check_dimension(1).is_err());
        assert!(f.check_dimension(2).is_ok());
    }

    #[test]
    fn syntax_errors_report_positions() {
        let pos = |s: &str| match parse_symbol(s) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{s:?} parsed: {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("z +"), 3);
        assert_eq!(pos("(z"), 2);
        assert_eq!(pos("foo(z)"), 0);
        assert_eq!(pos("z + w"), 4);
        assert_eq!(pos("conj(z, z)"), 0);
        assert_eq!(pos("z^1.5"), 2);
        assert_eq!(pos("z^-1"), 2);
        assert_eq!(pos("z z"), 2);
        assert_eq!(pos("abs"), 0);
    }

    #[test]
    fn singular_evaluations() {
        let f = parse_symbol("1/(z - 1/2)").unwrap();
        match f.eval(&Point::plane(0.5, 0.0)) {
            Err(Error::Numeric(m)) => {
                assert!(m.contains("division by zero") && m.contains("0..11"), "{m}")
            }
            other => panic!("{other:?}"),
        }
        let g = parse_symbol("log(z)").unwrap();
        assert!(matches!(
            g.eval(&Point::plane(0.0, 0.0)),
            Err(Error::Numeric(_))
        ));
        // Principal branch.
        let v = g.eval(&Point::plane(-1.0, 0.0)).unwrap();
        assert!((v.im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn structural_queries() {
        let deg = |s: &str| parse_symbol(s).unwrap().polynomial_degree();
        assert_eq!(deg("1"), Some(PolyDegree::ZERO));
        assert_eq!(
            deg("(z+conj(z))/2"),
            Some(PolyDegree {
                z1: 1,
                z1_bar: 1,
                ..PolyDegree::ZERO
            })
        );
        assert_eq!(
            deg("abs(z)^4"),
            Some(PolyDegree {
                z1: 2,
                z1_bar: 2,
                ..PolyDegree::ZERO
            })
        );
        assert_eq!(
            deg("re(z)^3"),
            Some(PolyDegree {
                z1: 3,
                z1_bar: 3,
                ..PolyDegree::ZERO
            })
        );
        assert_eq!(
            deg("z2*z^2"),
            Some(PolyDegree {
                z1: 2,
                z2: 1,
                ..PolyDegree::ZERO
            })
        );
        assert_eq!(deg("exp(z)"), None);
        assert_eq!(deg("1/z"), None);
        assert_eq!(
            deg("exp(1)*z"),
            Some(PolyDegree {
                z1: 1,
                ..PolyDegree::ZERO
            })
        );

        let radial = |s: &str| parse_symbol(s).unwrap().is_radial();
        assert!(radial("step(1/2 - abs(z))"));
        assert!(radial("max(0, 1 - abs(z)^2/0.81)^2"));
        assert!(radial("exp(-z*conj(z))"));
        assert!(!radial("z"));
        assert!(!radial("abs(z - 0.3)"));

        assert_eq!(
            parse_symbol("2*pi").unwrap().constant_value(),
            Some(C64::new(2.0 * std::f64::consts::PI, 0.0))
        );
        assert_eq!(parse_symbol("z").unwrap().constant_value(), None);
    }

    #[test]
    fn wrappers() {
        let f = parse_symbol("z + 1").unwrap();
        let g = parse_symbol("conj(z)").unwrap();
        let p = Point::plane(0.2, 0.3);
        let prod = Product(&f, &g);
        assert_eq!(
            prod.eval(&p).unwrap(),
            f.eval(&p).unwrap() * g.eval(&p).unwrap()
        );
        assert_eq!(
            prod.polynomial_degree(),
            Some(PolyDegree {
                z1: 1,
                z1_bar: 1,
                ..PolyDegree::ZERO
            })
        );
        assert_eq!(Conj(&f).eval(&p).unwrap(), f.eval(&p).unwrap().conj());
        let r = Reciprocal {
            inner: parse_symbol("z").unwrap(),
            floor: 1e-12,
        };
        assert!(r.eval(&Point::plane(0.0, 0.0)).is_err());
        let lifted = Lifted(&f);
        assert_eq!(
            lifted
                .eval(&Point::Pair(C64::new(0.2, 0.3), C64::new(0.5, 0.0)))
                .unwrap(),
            f.eval(&p).unwrap()
        );
    }

    #[test]
    fn serde_uses_source_text() {
        let f: SymbolExpr = serde_json::from_str("\"z*conj(z)\"").unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "\"z*conj(z)\"");
        assert!(serde_json::from_str::<SymbolExpr>("\"z*\"").is_err());
        let c: SymbolExpr = serde_json::from_str("-0.5").unwrap();
        assert_eq!(c.constant_value(), Some(C64::new(-0.5, 0.0)));
    }

    fn arb_node() -> impl Strategy<Value = Node> {
        let leaf = prop_oneof![
            (0.0f64..1e6).prop_map(|x| NodeKind::Num(C64::new(x, 0.0))),
            (0.0f64..10.0).prop_map(|x| NodeKind::Num(C64::new(0.0, x))),
            Just(NodeKind::Var(Var::Z1)),
            Just(NodeKind::Var(Var::Z2)),
        ]
        .prop_map(|kind| Node { kind, span: (0, 0) });
        leaf.prop_recursive(5, 48, 3, |inner| {
            let funcs = [
                Func::Conj,
                Func::Abs,
                Func::Re,
                Func::Im,
                Func::Exp,
                Func::Sin,
                Func::Cos,
                Func::Log,
                Func::Arg,
                Func::Sqrt,
                Func::Step,
            ];
            prop_oneof![
                inner.clone().prop_map(|e| NodeKind::Neg(Box::new(e))),
                (0..4usize, inner.clone(), inner.clone()).prop_map(|(k, l, r)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k];
                    NodeKind::Bin(op, Box::new(l), Box::new(r))
                }),
                (inner.clone(), 0u32..6).prop_map(|(b, n)| NodeKind::Pow(Box::new(b), n)),
                (0..funcs.len(), inner.clone())
                    .prop_map(move |(k, a)| NodeKind::Call(funcs[k], vec![a])),
                (inner.clone(), inner).prop_map(|(a, b)| NodeKind::Call(Func::Max, vec![a, b])),
            ]
            .prop_map(|kind| Node { kind, span: (0, 0) })
        })
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5)
            .prop_map(|(a, b, c, d)| Point::Pair(C64::new(a, b), C64::new(c, d)))
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(node in arb_node()) {
            let printed = node.to_string();
            let back = parse_symbol(&printed).unwrap();
            prop_assert_eq!(back.root(), &node);
            let again = parse_symbol(&back.to_string()).unwrap();
            prop_assert_eq!(again, back);
        }

        #[test]
        fn conjugation_identity(node in arb_node(), p in arb_point()) {
            let expr = SymbolExpr { source: node.to_string(), root: node };
            let conj = parse_symbol(&format!("conj({expr})")).unwrap();
            if let Ok(v) = expr.eval(&p) {
                let c = conj.eval(&p).unwrap();
                prop_assert!(c == v.conj() || (v.re.is_nan() || v.im.is_nan()));
            }
        }

        #[test]
        fn eval_is_deterministic(node in arb_node(), p in arb_point()) {
            let a = node.eval(&p).map_err(|e| e.to_string());
            let b = node.eval(&p).map_err(|e| e.to_string());
            match (a, b) {
                (Ok(x), Ok(y)) => prop_assert!(x == y || (x.re.is_nan() || x.im.is_nan())),
                (Err(x), Err(y)) => prop_assert_eq!(x, y),
                _ => prop_assert!(false),
            }
        }
    }
}
