use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PointGeometry;
use crate::jet::Jet;

/// The three Laplacians of a real function at a point.
///
/// `dbar` and `del` are complex in general; on balanced manifolds both are
/// real and equal to `d / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplacianSet {
    /// `Δ_d f = δ(df)` with `δ` from the Chern-covariant codifferential.
    pub d: f64,
    /// `Δ_{∂̄} f = −ρ⁻¹ ∂_α(ρ g^{αβ̄} ∂_{β̄} f)`
    pub dbar: Complex64,
    /// `Δ_∂ f = −ρ⁻¹ ∂_{β̄}(ρ g^{αβ̄} ∂_α f)`
    pub del: Complex64,
}

impl LaplacianSet {
    /// `max(|Δ_{∂̄}f − ½Δ_d f|, |Δ_∂f − ½Δ_d f|)`
    pub fn balanced_deviation(&self) -> f64 {
        let half = Complex64::new(0.5 * self.d, 0.0);
        (self.dbar - half).norm().max((self.del - half).norm())
    }
}

/// Laplacians of the real function whose second-order jet is `f`.
pub fn laplacians(geo: &PointGeometry, f: &Jet) -> LaplacianSet {
    let n = geo.dimension();
    let mut dbar = Complex64::new(0.0, 0.0);
    let mut del = Complex64::new(0.0, 0.0);
    let mut trace = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let m = geo.ginv_jet(a, b);
            let mixed = f.dd(a, n + b);
            trace += m.value() * mixed;
            dbar -= m.d(a) * f.d(n + b)
                + m.value() * mixed
                + m.value() * f.d(n + b) * geo.dlog_det(a);
            del -= m.d(n + b) * f.d(a)
                + m.value() * mixed
                + m.value() * f.d(a) * geo.dlog_det(n + b);
        }
    }
    let theta_up = geo.lee_vector();
    let lee: Complex64 = (0..n).map(|a| theta_up[a] * f.d(a)).sum();
    LaplacianSet {
        d: -2.0 * trace.re - 2.0 * lee.re,
        dbar,
        del,
    }
}
