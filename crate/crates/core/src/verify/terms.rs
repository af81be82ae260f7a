use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::{norm2_11, norm2_20, FieldPoint};
use crate::geometry::{real_form, CurvatureTensors, PointGeometry};
use crate::jet::Jet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two sides of a pointwise identity at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    /// Largest componentwise `|lhs − rhs|`.
    pub difference: f64,
    /// Largest `|lhs|` or `|rhs|` component.
    pub magnitude: f64,
}

impl Sides {
    fn from_components(lhs: &[Complex64], rhs: &[Complex64]) -> Sides {
        let mut s = Sides::default();
        for (l, r) in lhs.iter().zip(rhs) {
            s.difference = s.difference.max((l - r).norm());
            s.magnitude = s.magnitude.max(l.norm()).max(r.norm());
        }
        s
    }

    /// `|lhs − rhs| / max(1, |lhs|, |rhs|)`
    pub fn relative(&self) -> f64 {
        self.difference / self.magnitude.max(1.0)
    }
}

/// Every integrand and pointwise identity of one field at one point.
///
/// `ξ` and `ω` name the same real field through its two index positions;
/// quadratic forms `B(ξ, ξ)` are real forms `2 Re(B_{αβ̄}ξ^αξ̄^β)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointTerms {
    /// `‖D_α ω_{β̄}‖`
    pub analytic_form: f64,
    /// `‖D_α ξ_β‖`
    pub analytic_vector: f64,
    /// `‖D_α ω_{β̄} − D_{β̄} ω_α‖`
    pub closed_11: f64,
    /// `‖D_α ω_β − D_β ω_α + T^σ_{αβ} ω_σ‖`
    pub closed_20: f64,
    /// `‖D_α ξ_β + D_β ξ_α‖`
    pub killing_holomorphic: f64,
    /// `‖D_αξ_β‖² + 2Re[ξ^β D^αD_αξ_β + ξ^β θ^α D_αξ_β]`
    pub vec7: f64,
    /// `‖D_αξ_β‖² − ‖D_αξ_{β̄}‖² + k*(ξ, ξ)`
    pub int46: f64,
    /// `2Re[D_βξ_α D^αξ^β] + k(ξ, ξ) − ½(δω_ξ)² − ½(δω_{Jξ})²`
    pub kill12: f64,
    /// `‖D_βξ_α‖² − k(ξ, ξ) + ½(δω_{Jξ})²`
    pub kill14: f64,
    /// `½‖dω^{2,0}‖² − [‖D_αω_{β̄}‖² + k − k* + ½t] + ½(δω)² + ½(δJω)² − 2Re[T^σ_{αβ}ω_σ(D^αω^β − D^βω^α)]`
    pub form47: f64,
    /// `k − k* + ½·2Re[T^σ_{αβ}ω_σ(D^αω^β − D^βω^α)] + 2Re[T^σ_{αβ}D^αω_σ ω^β]`
    pub form48: f64,
    /// `‖D_αω_{β̄}‖² + H(ω#, ω#)`
    pub lem43: f64,
    /// `½‖D_αω_β − D_βω_α + T^σ_{αβ}ω_σ‖² + H(ω#, ω#)`
    pub lem44: f64,
    /// `‖D_αω_β‖² + k(ω#, ω#) − ½t(ω#, ω#)`
    pub lem43p: f64,
    /// `D^αD_αξ_β = D_αD^αξ_β + k*_{βσ̄}ξ^{σ̄}`
    pub ricci7s: Sides,
    /// `2Re[D^αT^σ_{αβ}ω_σω^β] = s(ω#, ω#) − k*(ω#, ω#)`
    pub bianchi410: Sides,
    /// `D^αD_αξ_β`, largest component.
    pub laplace_ii: f64,
    /// `D_αD^αξ_β + k*_{βσ̄}ξ^{σ̄}`, largest component.
    pub laplace_iii: f64,
    /// `H(ω#, ω#)`
    pub h: f64,
    pub k: f64,
    pub kstar: f64,
    pub t: f64,
    /// `|ω#|²`
    pub norm2: f64,
    /// `δω`
    pub delta: f64,
    /// `δ(Jω)`
    pub delta_j: f64,
}

impl PointTerms {
    pub fn new(
        geo: &PointGeometry,
        curv: &CurvatureTensors,
        fp: &FieldPoint,
        theta_up: &[Complex64],
    ) -> PointTerms {
        let n = geo.dimension();
        let m = |a: usize, b: usize| geo.ginv(a, b);
        let up = fp.ups();
        let low = fp.lows();
        let a = fp.a_matrix();
        let s = fp.d_omega_20(geo);
        let na = norm2_20(geo, &a);
        let nb = norm2_11(geo, &fp.b_matrix());
        let ns = norm2_20(geo, &s);
        let sym: Vec<Complex64> = (0..n * n).map(|i| a[i] + a[(i % n) * n + i / n]).collect();
        let k = real_form(&curv.k, &up);
        let kstar = real_form(&curv.kstar, &up);
        let third = real_form(&curv.s, &up);
        let t = real_form(&curv.t, &up);
        let h = real_form(&curv.h, &up);
        let delta = fp.codifferential(geo, theta_up);
        let delta_j = fp.codifferential_j(geo, theta_up);

        // D^αD_αξ_β = Σ g^{αμ̄} ∂_{μ̄} A_{αβ}
        let lhs: Vec<Complex64> = (0..n)
            .map(|b| {
                let mut acc = ZERO;
                for x in 0..n {
                    for u in 0..n {
                        acc += m(x, u) * fp.a_jet(x, b).d(n + u);
                    }
                }
                acc
            })
            .collect();
        // V[α][β] = D^αξ_β = Σ g^{αμ̄} D_{μ̄}ξ_β
        let v: Vec<Jet> = (0..n * n)
            .map(|i| {
                let (x, b) = (i / n, i % n);
                let mut acc = Jet::zero(geo.nvars(), 1);
                for u in 0..n {
                    acc.add_mul(geo.ginv_jet(x, u), fp.c_jet(b, u));
                }
                acc
            })
            .collect();
        let vv = |x: usize, b: usize| v[x * n + b].value();
        let div: Vec<Complex64> = (0..n)
            .map(|b| {
                let mut acc = ZERO;
                for x in 0..n {
                    acc += v[x * n + b].d(x);
                    for l in 0..n {
                        acc += geo.gamma(x, x, l) * vv(l, b) - geo.gamma(l, x, b) * vv(x, l);
                    }
                }
                acc
            })
            .collect();
        let rhs: Vec<Complex64> = (0..n)
            .map(|b| div[b] + (0..n).map(|s| curv.kstar[(b, s)] * up[s].conj()).sum::<Complex64>())
            .collect();
        let ricci7s = Sides::from_components(&lhs, &rhs);

        let mut vec7 = ZERO;
        for b in 0..n {
            let lee: Complex64 = (0..n).map(|x| theta_up[x] * a[x * n + b]).sum();
            vec7 += up[b] * (lhs[b] + lee);
        }
        let vec7 = na + 2.0 * vec7.re;

        // D^αω^β = Σ g^{αμ̄} g^{βν̄} conj(D_μω_ν)
        let mut raised = vec![ZERO; n * n];
        for x in 0..n {
            for b in 0..n {
                let mut acc = ZERO;
                for u in 0..n {
                    for w in 0..n {
                        acc += m(x, u) * m(b, w) * a[u * n + w].conj();
                    }
                }
                raised[x * n + b] = acc;
            }
        }
        let mut cross12 = ZERO;
        let mut t_cross = ZERO;
        let mut t_dw = ZERO;
        let mut bianchi = ZERO;
        for x in 0..n {
            for b in 0..n {
                cross12 += a[b * n + x] * raised[x * n + b];
                let mut tw = ZERO;
                for sg in 0..n {
                    let tor = geo.torsion(sg, x, b);
                    tw += tor * low[sg];
                    t_dw += tor * vv(x, sg) * up[b];
                    for u in 0..n {
                        bianchi += m(x, u) * geo.dtorsion(sg, x, b, n + u) * low[sg] * up[b];
                    }
                }
                t_cross += tw * (raised[x * n + b] - raised[b * n + x]);
            }
        }
        let (cross12, t_cross, t_dw) = (2.0 * cross12.re, 2.0 * t_cross.re, 2.0 * t_dw.re);
        let half_sq = 0.5 * delta * delta;
        let half_sq_j = 0.5 * delta_j * delta_j;
        let bianchi410 = Sides::from_components(
            &[Complex64::new(2.0 * bianchi.re, 0.0)],
            &[Complex64::new(third - kstar, 0.0)],
        );
        let norm2 = crate::geometry::frame::metric(geo, &fp.vector(), &fp.vector()).re;

        PointTerms {
            analytic_form: nb.max(0.0).sqrt(),
            analytic_vector: na.max(0.0).sqrt(),
            closed_11: norm2_11(geo, &fp.d_omega_11()).max(0.0).sqrt(),
            closed_20: ns.max(0.0).sqrt(),
            killing_holomorphic: norm2_20(geo, &sym).max(0.0).sqrt(),
            vec7,
            int46: na - nb + kstar,
            kill12: cross12 + k - half_sq - half_sq_j,
            kill14: na - k + half_sq_j,
            form47: 0.5 * ns - (nb + k - kstar + 0.5 * t) + half_sq + half_sq_j - t_cross,
            form48: k - kstar + 0.5 * t_cross + t_dw,
            lem43: nb + h,
            lem44: 0.5 * ns + h,
            lem43p: na + k - 0.5 * t,
            ricci7s,
            bianchi410,
            laplace_ii: lhs.iter().map(|x| x.norm()).fold(0.0, f64::max),
            laplace_iii: rhs.iter().map(|x| x.norm()).fold(0.0, f64::max),
            h,
            k,
            kstar,
            t,
            norm2,
            delta,
            delta_j,
        }
    }
}
