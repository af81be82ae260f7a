use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Expr, Func, Node};
use crate::error::ExprError;

/// Real parameter bindings, keyed by name.
pub type Params = BTreeMap<String, f64>;

/// Evaluates `e` at `point` (one complex value per holomorphic coordinate).
pub fn eval_expr(e: &Expr, point: &[Complex64], params: &Params) -> Result<Complex64, ExprError> {
    let needed = e.min_dimension();
    if point.len() < needed {
        return Err(ExprError::DimensionMismatch {
            expected: needed,
            got: point.len(),
        });
    }
    eval_node(e, point, params)
}

fn domain(func: &str, point: &[Complex64]) -> ExprError {
    ExprError::Domain {
        func: func.to_string(),
        point: point.to_vec(),
    }
}

pub(crate) fn eval_node(
    e: &Expr,
    point: &[Complex64],
    params: &Params,
) -> Result<Complex64, ExprError> {
    Ok(match e.node() {
        Node::Const(c) => *c,
        Node::Coord(k) => point[*k],
        Node::Param(name) => match params.get(name.as_ref()) {
            Some(v) => Complex64::new(*v, 0.0),
            None => return Err(ExprError::UnboundParameter(name.to_string())),
        },
        Node::Neg(a) => -eval_node(a, point, params)?,
        Node::Add(a, b) => eval_node(a, point, params)? + eval_node(b, point, params)?,
        Node::Sub(a, b) => eval_node(a, point, params)? - eval_node(b, point, params)?,
        Node::Mul(a, b) => eval_node(a, point, params)? * eval_node(b, point, params)?,
        Node::Div(a, b) => {
            let num = eval_node(a, point, params)?;
            let den = eval_node(b, point, params)?;
            if den == Complex64::new(0.0, 0.0) {
                return Err(domain("division", point));
            }
            num / den
        }
        Node::Pow(a, k) => {
            let base = eval_node(a, point, params)?;
            if *k < 0 && base == Complex64::new(0.0, 0.0) {
                return Err(domain("negative power", point));
            }
            base.powi(*k)
        }
        Node::Call(func, a) => {
            let x = eval_node(a, point, params)?;
            match func {
                Func::Exp => x.exp(),
                Func::Log => {
                    if x == Complex64::new(0.0, 0.0) {
                        return Err(domain("log", point));
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Conj => x.conj(),
                Func::Abs2 => Complex64::new(x.norm_sqr(), 0.0),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn constant_everywhere() {
        let e = parse_expr("2", 2).unwrap();
        let p = [Complex64::new(0.4, 9.0), Complex64::new(-3.0, 1.0)];
        assert_eq!(eval_expr(&e, &p, &Params::new()).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn conjugate_coordinate() {
        let e = parse_expr("conj(z2)", 2).unwrap();
        let p = [Complex64::new(0.0, 0.0), Complex64::new(3.0, -4.0)];
        assert_eq!(eval_expr(&e, &p, &Params::new()).unwrap(), Complex64::new(3.0, 4.0));
    }

    #[test]
    fn sine_of_imaginary_unit() {
        let e = parse_expr("sin(z1)", 1).unwrap();
        let v = eval_expr(&e, &[Complex64::new(0.0, 1.0)], &Params::new()).unwrap();
        // sin(i) = i sinh(1); the oracle is the odd power series of sinh.
        let mut sinh = 0.0;
        let mut term = 1.0;
        for k in 0..30 {
            let n = 2 * k + 1;
            if k > 0 {
                term /= ((n - 1) * n) as f64;
            }
            sinh += term;
        }
        assert!((v - Complex64::new(0.0, sinh)).norm() <= 1e-15);
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        let e = parse_expr("eps * z1", 1).unwrap();
        let err = eval_expr(&e, &[Complex64::new(1.0, 0.0)], &Params::new()).unwrap_err();
        assert_eq!(err, ExprError::UnboundParameter("eps".into()));
        let mut params = Params::new();
        params.insert("eps".into(), 0.5);
        let v = eval_expr(&e, &[Complex64::new(1.0, 0.0)], &params).unwrap();
        assert_eq!(v, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn log_of_zero_reports_point() {
        let e = parse_expr("log(z1)", 1).unwrap();
        match eval_expr(&e, &[Complex64::new(0.0, 0.0)], &Params::new()) {
            Err(ExprError::Domain { func, point }) => {
                assert_eq!(func, "log");
                assert_eq!(point, vec![Complex64::new(0.0, 0.0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let e = parse_expr("z2", 2).unwrap();
        assert!(matches!(
            eval_expr(&e, &[Complex64::new(0.0, 0.0)], &Params::new()),
            Err(ExprError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }
}
