//! Extra metrics on the unit torus used to exercise the formulas away from
//! the homogeneous built-ins.

use super::ManifoldModel;
use crate::expr::{parse_expr, wirtinger_diff, Expr};

const TORUS: &str = "z ~ z + m + i·m' for integer vectors m, m'";

/// `g_{αβ̄} = δ_{αβ} + ∂_α∂_{β̄}φ` on the 2-torus for a periodic potential
/// `φ`: Kähler, with nonzero curvature.
pub fn kahler_torus() -> ManifoldModel {
    let phi = parse_expr(
        "0.01*cos(2*pi*re(z1)) + 0.008*sin(2*pi*(re(z1) + im(z2))) + 0.005*cos(2*pi*(im(z1) - re(z2)))",
        2,
    )
    .expect("potential");
    let mut entries = Vec::with_capacity(4);
    for a in 0..2 {
        let da = wirtinger_diff(&phi, a, false);
        for b in 0..2 {
            let dd = wirtinger_diff(&da, b, true);
            entries.push(if a == b { Expr::one().add(&dd) } else { dd });
        }
    }
    ManifoldModel::from_entries("kahler_torus", 2, entries, vec![[0.0, 1.0]; 4], TORUS)
        .expect("kahler torus")
}

/// A non-diagonal, non-Kähler, non-balanced metric on the 2-torus.
pub fn skew_torus() -> ManifoldModel {
    let rows = [
        "2 + 0.3*cos(2*pi*re(z1)) + 0.2*sin(2*pi*im(z2))",
        "0.25*exp(2*pi*i*re(z2)) + 0.1*i*sin(2*pi*im(z1))",
        "0.25*exp(-2*pi*i*re(z2)) - 0.1*i*sin(2*pi*im(z1))",
        "1.5 + 0.2*cos(2*pi*(re(z1) + im(z2)))",
    ];
    let entries = rows
        .iter()
        .map(|t| parse_expr(t, 2).expect("entry"))
        .collect();
    ManifoldModel::from_entries("skew_torus", 2, entries, vec![[0.0, 1.0]; 4], TORUS)
        .expect("skew torus")
}
