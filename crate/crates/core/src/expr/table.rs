use num_complex::Complex64;

use super::eval::eval_node;
use super::{fd_jets, wirtinger_diff, Expr, FdOptions, Params};
use crate::error::{ExprError, ModelError};
use crate::jet::Jet;

/// A list of expressions over a chart of dimension `n` together with their
/// first and second Wirtinger derivative trees.
///
/// Variables are numbered `0..2n` as `z_1..z_n, z̄_1..z̄_n`. Derivatives in
/// coordinates no expression mentions are known to vanish and are not built.
#[derive(Clone, Debug)]
pub struct DerivativeTable {
    n: usize,
    exprs: Vec<Expr>,
    active: Vec<bool>,
    first: Vec<Vec<Expr>>,
    second: Vec<Vec<Expr>>,
}

impl DerivativeTable {
    pub fn new(n: usize, exprs: Vec<Expr>) -> DerivativeTable {
        let nvars = 2 * n;
        let mut active = vec![false; n];
        for e in &exprs {
            for k in e.coordinates() {
                if k < n {
                    active[k] = true;
                }
            }
        }
        let var_active = |a: usize| active[a % n];
        let mut first = Vec::with_capacity(exprs.len());
        let mut second = Vec::with_capacity(exprs.len());
        for e in &exprs {
            let d1: Vec<Expr> = (0..nvars)
                .map(|a| {
                    if var_active(a) {
                        wirtinger_diff(e, a % n, a >= n)
                    } else {
                        Expr::zero()
                    }
                })
                .collect();
            let mut d2 = vec![Expr::zero(); nvars * nvars];
            for a in 0..nvars {
                if !var_active(a) || d1[a].is_zero() {
                    continue;
                }
                for b in a..nvars {
                    if var_active(b) {
                        let d = wirtinger_diff(&d1[a], b % n, b >= n);
                        d2[b * nvars + a] = d.clone();
                        d2[a * nvars + b] = d;
                    }
                }
            }
            first.push(d1);
            second.push(d2);
        }
        DerivativeTable {
            n,
            exprs,
            active,
            first,
            second,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    /// Complex coordinates referenced by at least one expression.
    pub fn active(&self) -> &[bool] {
        &self.active
    }

    fn check(&self, point: &[Complex64]) -> Result<(), ExprError> {
        if point.len() < self.n {
            return Err(ExprError::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        Ok(())
    }

    pub fn values(&self, point: &[Complex64]) -> Result<Vec<Complex64>, ExprError> {
        self.check(point)?;
        let params = Params::new();
        self.exprs
            .iter()
            .map(|e| eval_node(e, point, &params))
            .collect()
    }

    /// Exact second-order jets from the symbolic derivative trees.
    pub fn jets(&self, point: &[Complex64]) -> Result<Vec<Jet>, ExprError> {
        self.check(point)?;
        let params = Params::new();
        let zero = Complex64::new(0.0, 0.0);
        let eval = |e: &Expr| -> Result<Complex64, ExprError> {
            match e.as_const() {
                Some(c) => Ok(c),
                None => eval_node(e, point, &params),
            }
        };
        let nvars = 2 * self.n;
        let mut out = Vec::with_capacity(self.exprs.len());
        for (i, e) in self.exprs.iter().enumerate() {
            let value = eval(e)?;
            let grad = self.first[i]
                .iter()
                .map(&eval)
                .collect::<Result<Vec<_>, _>>()?;
            let mut hess = vec![zero; nvars * nvars];
            for a in 0..nvars {
                for b in a..nvars {
                    let v = eval(&self.second[i][a * nvars + b])?;
                    hess[a * nvars + b] = v;
                    hess[b * nvars + a] = v;
                }
            }
            out.push(Jet::from_parts(value, grad, hess));
        }
        Ok(out)
    }

    /// Second-order jets by central differences of the expression values.
    pub fn fd_jets(&self, point: &[Complex64], opts: &FdOptions) -> Result<Vec<Jet>, ModelError> {
        let f = |q: &[Complex64]| self.values(q);
        fd_jets(&f, point, &self.active, opts)
    }
}
