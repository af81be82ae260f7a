//! Complex-valued coordinate expressions.
//!
//! Expressions are immutable trees over complex literals, the holomorphic
//! coordinates `z1..zn`, named real parameters, the four arithmetic
//! operators, integer powers and the functions `exp`, `log`, `sin`, `cos`,
//! `conj` and `abs2` (modulus squared). The anti-holomorphic coordinate
//! `z̄k` is always written `conj(zk)`.
//!
//! Three operations live here: [`parse_expr`], [`eval_expr`] and
//! [`wirtinger_diff`]. Derivatives are exact symbolic trees; the only
//! simplification performed is constant folding and zero/one elimination.

mod diff;
mod fd;
mod table;
mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use diff::wirtinger_diff;
pub use eval::{eval_expr, Params};
pub use fd::{fd_jet, fd_jets, FdOptions};
pub use parse::parse_expr;
pub use table::DerivativeTable;

use crate::error::ExprError;

/// Elementary functions understood by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Conj,
    Abs2,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Conj => "conj",
            Func::Abs2 => "abs2",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "conj" => Func::Conj,
            "abs2" => Func::Abs2,
            _ => return None,
        })
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    /// Holomorphic coordinate, zero-based (`Coord(0)` is `z1`).
    Coord(usize),
    Param(Arc<str>),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Shared, immutable expression tree.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn constant(c: Complex64) -> Expr {
        Expr::wrap(Node::Const(c))
    }

    pub fn real(x: f64) -> Expr {
        Expr::constant(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn one() -> Expr {
        Expr::real(1.0)
    }

    /// `z_{index+1}`.
    pub fn coord(index: usize) -> Expr {
        Expr::wrap(Node::Coord(index))
    }

    pub fn param(name: &str) -> Expr {
        Expr::wrap(Node::Param(Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            _ if self.is_zero() => other.clone(),
            _ if other.is_zero() => self.clone(),
            _ => Expr::wrap(Node::Add(self.clone(), other.clone())),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a - b),
            _ if other.is_zero() => self.clone(),
            _ if self.is_zero() => other.neg(),
            _ => Expr::wrap(Node::Sub(self.clone(), other.clone())),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            _ if self.is_zero() || other.is_zero() => Expr::zero(),
            _ if self.is_one() => other.clone(),
            _ if other.is_one() => self.clone(),
            _ => Expr::wrap(Node::Mul(self.clone(), other.clone())),
        }
    }

    pub fn div(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) if b != Complex64::new(0.0, 0.0) => Expr::constant(a / b),
            _ if self.is_zero() && !other.is_zero() => Expr::zero(),
            _ if other.is_one() => self.clone(),
            _ => Expr::wrap(Node::Div(self.clone(), other.clone())),
        }
    }

    pub fn powi(&self, exponent: i32) -> Expr {
        match exponent {
            0 => Expr::one(),
            1 => self.clone(),
            _ => match self.as_const() {
                Some(c) if c != Complex64::new(0.0, 0.0) || exponent > 0 => {
                    Expr::constant(c.powi(exponent))
                }
                _ => Expr::wrap(Node::Pow(self.clone(), exponent)),
            },
        }
    }

    pub fn call(func: Func, arg: &Expr) -> Expr {
        if let Some(c) = arg.as_const() {
            let folded = match func {
                Func::Exp => Some(c.exp()),
                Func::Sin => Some(c.sin()),
                Func::Cos => Some(c.cos()),
                Func::Conj => Some(c.conj()),
                Func::Abs2 => Some(Complex64::new(c.norm_sqr(), 0.0)),
                Func::Log if c != Complex64::new(0.0, 0.0) => Some(c.ln()),
                Func::Log => None,
            };
            if let Some(v) = folded {
                return Expr::constant(v);
            }
        }
        if func == Func::Conj {
            if let Node::Call(Func::Conj, inner) = arg.node() {
                return inner.clone();
            }
        }
        Expr::wrap(Node::Call(func, arg.clone()))
    }

    pub fn exp(&self) -> Expr {
        Expr::call(Func::Exp, self)
    }

    pub fn ln(&self) -> Expr {
        Expr::call(Func::Log, self)
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Func::Cos, self)
    }

    pub fn conj(&self) -> Expr {
        Expr::call(Func::Conj, self)
    }

    pub fn abs2(&self) -> Expr {
        Expr::call(Func::Abs2, self)
    }

    /// `(z + conj(z)) / 2`
    pub fn re_part(&self) -> Expr {
        self.add(&self.conj()).mul(&Expr::real(0.5))
    }

    /// `(z - conj(z)) / (2i)`
    pub fn im_part(&self) -> Expr {
        self.sub(&self.conj())
            .mul(&Expr::constant(Complex64::new(0.0, -0.5)))
    }

    /// Zero-based indices of every coordinate the expression references,
    /// through `zk` or `conj(zk)`.
    pub fn coordinates(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| {
            if let Node::Coord(k) = node {
                out.insert(*k);
            }
        });
        out
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| {
            if let Node::Param(name) = node {
                out.insert(name.to_string());
            }
        });
        out
    }

    /// Largest referenced coordinate index plus one (0 for constants).
    pub fn min_dimension(&self) -> usize {
        self.coordinates().iter().next_back().map_or(0, |k| k + 1)
    }

    fn visit(&self, f: &mut impl FnMut(&Node)) {
        f(self.node());
        match self.node() {
            Node::Const(_) | Node::Coord(_) | Node::Param(_) => {}
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.visit(f),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Replaces named parameters by their values.
    pub fn bind(&self, params: &Params) -> Result<Expr, ExprError> {
        Ok(match self.node() {
            Node::Const(_) | Node::Coord(_) => self.clone(),
            Node::Param(name) => match params.get(name.as_ref()) {
                Some(v) => Expr::real(*v),
                None => return Err(ExprError::UnboundParameter(name.to_string())),
            },
            Node::Neg(a) => a.bind(params)?.neg(),
            Node::Add(a, b) => a.bind(params)?.add(&b.bind(params)?),
            Node::Sub(a, b) => a.bind(params)?.sub(&b.bind(params)?),
            Node::Mul(a, b) => a.bind(params)?.mul(&b.bind(params)?),
            Node::Div(a, b) => a.bind(params)?.div(&b.bind(params)?),
            Node::Pow(a, k) => a.bind(params)?.powi(*k),
            Node::Call(func, a) => Expr::call(*func, &a.bind(params)?),
        })
    }

    /// Number of nodes in the tree, shared subtrees counted once per use.
    pub fn size(&self) -> usize {
        let mut count = 0;
        self.visit(&mut |_| count += 1);
        count
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        if c.re < 0.0 || (c.re == 0.0 && c.re.is_sign_negative()) {
            write!(f, "(-{:?})", -c.re)
        } else {
            write!(f, "{:?}", c.re)
        }
    } else if c.re == 0.0 {
        write!(f, "({:?}*i)", c.im)
    } else {
        write!(f, "({:?}+{:?}*i)", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Every compound node is parenthesised, which keeps printing trivially
        // re-parseable at the cost of some noise.
        match self.node() {
            Node::Const(c) => write_const(f, *c),
            Node::Coord(k) => write!(f, "z{}", k + 1),
            Node::Param(name) => write!(f, "{name}"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, k) => write!(f, "({a}^({k}))"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
