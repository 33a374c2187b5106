//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary | unary '^' integer
//! unary  := '-'? atom
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the coordinates `z`, `z1`, `z2`, the constants `i` and `pi`,
//! and the functions listed in [`Func`].

use super::ast::{BinOp, Func, Node, NodeKind, Var};
use super::lexer::{tokenize, Tok, Token};
use crate::{Error, Result, C64};

pub(crate) fn parse(text: &str) -> Result<Node> {
    if text.trim().is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty symbol".into(),
        });
    }
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        len: text.len(),
    };
    let node = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(Error::Parse {
            pos: t.start,
            msg: format!("unexpected {:?} after expression", t.tok),
        });
    }
    Ok(node)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len, |t| t.start)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Token> {
        match self.next() {
            Some(t) if &t.tok == tok => Ok(t),
            Some(t) => Err(Error::Parse {
                pos: t.start,
                msg: format!("expected {what}, found {:?}", t.tok),
            }),
            None => Err(Error::Parse {
                pos: self.len,
                msg: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = bin(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Node> {
        let base = self.unary()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        match self.next() {
            Some(Token {
                tok: Tok::Num {
                    integer: Some(n), ..
                },
                end,
                ..
            }) => {
                let span = (base.span.0, end);
                Ok(Node {
                    kind: NodeKind::Pow(Box::new(base), n),
                    span,
                })
            }
            Some(t) => Err(Error::Parse {
                pos: t.start,
                msg: "exponent must be a nonnegative integer literal".into(),
            }),
            None => Err(Error::Parse {
                pos: self.len,
                msg: "missing exponent after '^'".into(),
            }),
        }
    }

    fn unary(&mut self) -> Result<Node> {
        let start = self.here();
        if self.eat(&Tok::Minus) {
            let inner = self.atom()?;
            let span = (start, inner.span.1);
            return Ok(Node {
                kind: NodeKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Node> {
        let Some(t) = self.next() else {
            return Err(Error::Parse {
                pos: self.len,
                msg: "unexpected end of input".into(),
            });
        };
        let span = (t.start, t.end);
        match t.tok {
            Tok::Num { value, imag, .. } => {
                let c = if imag {
                    C64::new(0.0, value)
                } else {
                    C64::new(value, 0.0)
                };
                Ok(Node {
                    kind: NodeKind::Num(c),
                    span,
                })
            }
            Tok::LParen => {
                let mut inner = self.expr()?;
                let close = self.expect(&Tok::RParen, "')'")?;
                inner.span = (t.start, close.end);
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(name, span),
            other => Err(Error::Parse {
                pos: t.start,
                msg: format!("unexpected {other:?}"),
            }),
        }
    }

    fn ident(&mut self, name: String, span: (usize, usize)) -> Result<Node> {
        let leaf = |kind| Ok(Node { kind, span });
        if self.peek().is_some_and(|t| t.tok == Tok::LParen) {
            let Some(func) = Func::lookup(&name) else {
                return Err(Error::Parse {
                    pos: span.0,
                    msg: format!("unknown function {name:?}"),
                });
            };
            self.pos += 1;
            let mut args = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
            let close = self.expect(&Tok::RParen, "')' or ','")?;
            if args.len() != func.arity() {
                return Err(Error::Parse {
                    pos: span.0,
                    msg: format!(
                        "{name} takes {} argument(s), got {}",
                        func.arity(),
                        args.len()
                    ),
                });
            }
            return Ok(Node {
                kind: NodeKind::Call(func, args),
                span: (span.0, close.end),
            });
        }
        match name.as_str() {
            "z" | "z1" => leaf(NodeKind::Var(Var::Z1)),
            "z2" => leaf(NodeKind::Var(Var::Z2)),
            "i" => leaf(NodeKind::Num(C64::new(0.0, 1.0))),
            "pi" => leaf(NodeKind::Num(C64::new(std::f64::consts::PI, 0.0))),
            _ if Func::lookup(&name).is_some() => Err(Error::Parse {
                pos: span.0,
                msg: format!("function {name} needs arguments"),
            }),
            _ => Err(Error::Parse {
                pos: span.0,
                msg: format!("unknown identifier {name:?}"),
            }),
        }
    }
}

fn bin(op: BinOp, l: Node, r: Node) -> Node {
    let span = (l.span.0, r.span.1);
    Node {
        kind: NodeKind::Bin(op, Box::new(l), Box::new(r)),
        span,
    }
}
