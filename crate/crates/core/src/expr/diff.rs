use super::{Expr, Func, Node};

/// Symbolic Wirtinger derivative `∂/∂z_k` (`barred = false`) or `∂/∂z̄_k`
/// (`barred = true`), with `k` zero-based.
///
/// `z_k` and `conj(z_k)` are independent variables: `∂_{z̄k} conj(z_k) = 1`
/// and `∂_{z̄k} z_k = 0`. Parameters are real constants.
pub fn wirtinger_diff(e: &Expr, k: usize, barred: bool) -> Expr {
    match e.node() {
        Node::Const(_) | Node::Param(_) => Expr::zero(),
        Node::Coord(j) => {
            if !barred && *j == k {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Neg(a) => wirtinger_diff(a, k, barred).neg(),
        Node::Add(a, b) => wirtinger_diff(a, k, barred).add(&wirtinger_diff(b, k, barred)),
        Node::Sub(a, b) => wirtinger_diff(a, k, barred).sub(&wirtinger_diff(b, k, barred)),
        Node::Mul(a, b) => {
            let da = wirtinger_diff(a, k, barred);
            let db = wirtinger_diff(b, k, barred);
            da.mul(b).add(&a.mul(&db))
        }
        Node::Div(a, b) => {
            let da = wirtinger_diff(a, k, barred);
            let db = wirtinger_diff(b, k, barred);
            if db.is_zero() {
                da.div(b)
            } else {
                da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
            }
        }
        Node::Pow(a, n) => {
            let da = wirtinger_diff(a, k, barred);
            Expr::real(*n as f64).mul(&a.powi(n - 1)).mul(&da)
        }
        Node::Call(func, a) => {
            if *func == Func::Conj {
                // ∂_k conj(f) = conj(∂_{k̄} f)
                return wirtinger_diff(a, k, !barred).conj();
            }
            let da = wirtinger_diff(a, k, barred);
            match func {
                Func::Exp => e.mul(&da),
                Func::Log => da.div(a),
                Func::Sin => a.cos().mul(&da),
                Func::Cos => a.sin().neg().mul(&da),
                Func::Abs2 => {
                    // |f|² = f·conj(f)
                    let dconj = wirtinger_diff(a, k, !barred).conj();
                    da.mul(&a.conj()).add(&a.mul(&dconj))
                }
                Func::Conj => unreachable!(),
            }
        }
    }
}
