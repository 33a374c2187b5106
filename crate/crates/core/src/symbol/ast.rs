use std::fmt;

use crate::spaces::Point;
use crate::{Error, Result, C64};

/// Byte range of a node in the source text.
pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// `z` or `z1`: the first coordinate.
    Z1,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Conj,
    Abs,
    Re,
    Im,
    Exp,
    Sin,
    Cos,
    Log,
    Arg,
    Sqrt,
    /// Heaviside step of the real part: 1 for `re x > 0`, else 0.
    Step,
    /// Larger real part.
    Max,
    /// Smaller real part.
    Min,
}

impl Func {
    pub fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "conj" => Func::Conj,
            "abs" => Func::Abs,
            "re" => Func::Re,
            "im" => Func::Im,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "log" => Func::Log,
            "arg" => Func::Arg,
            "sqrt" => Func::Sqrt,
            "step" => Func::Step,
            "max" => Func::Max,
            "min" => Func::Min,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Conj => "conj",
            Func::Abs => "abs",
            Func::Re => "re",
            Func::Im => "im",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Arg => "arg",
            Func::Sqrt => "sqrt",
            Func::Step => "step",
            Func::Max => "max",
            Func::Min => "min",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Max | Func::Min => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    Num(C64),
    Var(Var),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Call(Func, Vec<Node>),
}

/// Equality ignores spans.
impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        use NodeKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a == b,
            (Var(a), Var(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Bin(o1, l1, r1), Bin(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Pow(b1, n1), Pow(b2, n2)) => n1 == n2 && b1 == b2,
            (Call(f1, a1), Call(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

fn fmt_f64(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that reparses to the same value.
    write!(f, "{x:?}")
}

/// Fully parenthesized; reparses to an equal tree.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NodeKind::Num(c) => {
                if c.im == 0.0 {
                    fmt_f64(f, c.re)
                } else if c.re == 0.0 {
                    fmt_f64(f, c.im)?;
                    write!(f, "i")
                } else {
                    write!(f, "(")?;
                    fmt_f64(f, c.re)?;
                    write!(f, "+")?;
                    fmt_f64(f, c.im)?;
                    write!(f, "i)")
                }
            }
            NodeKind::Var(Var::Z1) => write!(f, "z1"),
            NodeKind::Var(Var::Z2) => write!(f, "z2"),
            NodeKind::Neg(e) => write!(f, "(-{e})"),
            NodeKind::Bin(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({l} {sym} {r})")
            }
            NodeKind::Pow(b, n) => write!(f, "({b}^{n})"),
            NodeKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn err_at(span: Span, msg: impl fmt::Display) -> Error {
    Error::Numeric(format!("{msg} at bytes {}..{}", span.0, span.1))
}

impl Node {
    pub fn eval(&self, p: &Point) -> Result<C64> {
        Ok(match &self.kind {
            NodeKind::Num(c) => *c,
            NodeKind::Var(Var::Z1) => p.z1(),
            NodeKind::Var(Var::Z2) => match p {
                Point::Pair(_, z2) => *z2,
                Point::Plane(_) => {
                    return Err(Error::Domain(format!(
                        "z2 at bytes {}..{} needs a point of the ball",
                        self.span.0, self.span.1
                    )))
                }
            },
            NodeKind::Neg(e) => -e.eval(p)?,
            NodeKind::Bin(op, l, r) => {
                let (a, b) = (l.eval(p)?, r.eval(p)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.re == 0.0 && b.im == 0.0 {
                            return Err(err_at(self.span, "division by zero"));
                        }
                        a / b
                    }
                }
            }
            NodeKind::Pow(b, n) => b.eval(p)?.powu(*n),
            NodeKind::Call(func, args) => {
                let x = args[0].eval(p)?;
                let real = |v: f64| C64::new(v, 0.0);
                match func {
                    Func::Conj => x.conj(),
                    Func::Abs => real(x.norm()),
                    Func::Re => real(x.re),
                    Func::Im => real(x.im),
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Log => {
                        if x.re == 0.0 && x.im == 0.0 {
                            return Err(err_at(self.span, "log(0)"));
                        }
                        x.ln()
                    }
                    Func::Arg => real(x.arg()),
                    Func::Sqrt => x.sqrt(),
                    Func::Step => real(if x.re > 0.0 { 1.0 } else { 0.0 }),
                    Func::Max => real(x.re.max(args[1].eval(p)?.re)),
                    Func::Min => real(x.re.min(args[1].eval(p)?.re)),
                }
            }
        })
    }

    pub fn uses(&self, v: Var) -> bool {
        match &self.kind {
            NodeKind::Num(_) => false,
            NodeKind::Var(w) => *w == v,
            NodeKind::Neg(e) | NodeKind::Pow(e, _) => e.uses(v),
            NodeKind::Bin(_, l, r) => l.uses(v) || r.uses(v),
            NodeKind::Call(_, args) => args.iter().any(|a| a.uses(v)),
        }
    }

    pub fn is_constant(&self) -> bool {
        !self.uses(Var::Z1) && !self.uses(Var::Z2)
    }

    pub fn degree(&self) -> Option<PolyDegree> {
        use NodeKind::*;
        match &self.kind {
            Num(_) => Some(PolyDegree::ZERO),
            Var(self::Var::Z1) => Some(PolyDegree {
                z1: 1,
                ..PolyDegree::ZERO
            }),
            Var(self::Var::Z2) => Some(PolyDegree {
                z2: 1,
                ..PolyDegree::ZERO
            }),
            Neg(e) => e.degree(),
            Bin(BinOp::Add | BinOp::Sub, l, r) => Some(l.degree()?.max(r.degree()?)),
            Bin(BinOp::Mul, l, r) => Some(l.degree()?.add(r.degree()?)),
            Bin(BinOp::Div, l, r) => {
                if r.is_constant() {
                    l.degree()
                } else {
                    None
                }
            }
            Pow(b, n) => {
                if let Call(Func::Abs, args) = &b.kind {
                    if n % 2 == 0 {
                        let d = args[0].degree()?;
                        return Some(d.add(d.conj()).scale(n / 2));
                    }
                }
                Some(b.degree()?.scale(*n))
            }
            Call(Func::Conj, args) => Some(args[0].degree()?.conj()),
            Call(Func::Re | Func::Im, args) => {
                let d = args[0].degree()?;
                Some(d.max(d.conj()))
            }
            Call(..) if self.is_constant() => Some(PolyDegree::ZERO),
            Call(..) => None,
        }
    }

    /// Syntactic radiality in `z₁`: every occurrence of the variable sits in
    /// `abs(z)` or in a `z*conj(z)` product.
    pub fn is_radial(&self) -> bool {
        use NodeKind::*;
        if self.uses(self::Var::Z2) {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let is_z = |n: &Node| match &n.kind {
            Var(self::Var::Z1) => true,
            Neg(e) => matches!(e.kind, Var(self::Var::Z1)),
            _ => false,
        };
        let is_conj_z = |n: &Node| matches!(&n.kind, Call(Func::Conj, a) if is_z(&a[0]));
        match &self.kind {
            Call(Func::Abs, args) if is_z(&args[0]) => true,
            Bin(BinOp::Mul, l, r) if (is_z(l) && is_conj_z(r)) || (is_conj_z(l) && is_z(r)) => true,
            Num(_) | Var(_) => false,
            Neg(e) | Pow(e, _) => e.is_radial(),
            Bin(_, l, r) => l.is_radial() && r.is_radial(),
            Call(_, args) => args.iter().all(Node::is_radial),
        }
    }
}

/// Degree bounds of a polynomial symbol in `z₁, z̄₁, z₂, z̄₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PolyDegree {
    pub z1: u32,
    pub z1_bar: u32,
    pub z2: u32,
    pub z2_bar: u32,
}

impl PolyDegree {
    pub const ZERO: PolyDegree = PolyDegree {
        z1: 0,
        z1_bar: 0,
        z2: 0,
        z2_bar: 0,
    };

    pub fn max(self, o: Self) -> Self {
        PolyDegree {
            z1: self.z1.max(o.z1),
            z1_bar: self.z1_bar.max(o.z1_bar),
            z2: self.z2.max(o.z2),
            z2_bar: self.z2_bar.max(o.z2_bar),
        }
    }

    pub fn add(self, o: Self) -> Self {
        PolyDegree {
            z1: self.z1 + o.z1,
            z1_bar: self.z1_bar + o.z1_bar,
            z2: self.z2 + o.z2,
            z2_bar: self.z2_bar + o.z2_bar,
        }
    }

    pub fn scale(self, n: u32) -> Self {
        PolyDegree {
            z1: self.z1 * n,
            z1_bar: self.z1_bar * n,
            z2: self.z2 * n,
            z2_bar: self.z2_bar * n,
        }
    }

    pub fn conj(self) -> Self {
        PolyDegree {
            z1: self.z1_bar,
            z1_bar: self.z1,
            z2: self.z2_bar,
            z2_bar: self.z2,
        }
    }

    /// Largest single exponent.
    pub fn max_exponent(self) -> u32 {
        self.z1.max(self.z1_bar).max(self.z2).max(self.z2_bar)
    }
}
