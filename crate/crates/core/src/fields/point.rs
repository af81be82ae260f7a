use num_complex::Complex64;

use super::FieldKind;
use crate::geometry::frame::{self, full_dgamma, full_gamma, FrameData};
use crate::geometry::PointGeometry;
use crate::jet::Jet;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A real field and its Chern derivatives at one point.
///
/// With `ω_α` the lowered (1,0) components and `ω^α` the raised ones:
///
/// * `a(α, β) = D_α ω_β = ∂_α ω_β − Γ^λ_{αβ} ω_λ`
/// * `b(α, β) = D_α ω_{β̄} = ∂_α conj(ω_β)`
/// * `c(α, β) = D_{β̄} ω_α = ∂_{β̄} ω_α`
#[derive(Clone, Debug)]
pub struct FieldPoint {
    n: usize,
    kind: FieldKind,
    low: Vec<Jet>,
    up: Vec<Jet>,
    a: Vec<Jet>,
    c: Vec<Jet>,
}

impl FieldPoint {
    /// `jets` are second-order jets of the stored components: `ω_α` for a
    /// form, `ξ^α` for a vector field.
    pub fn new(geo: &PointGeometry, kind: FieldKind, jets: Vec<Jet>) -> FieldPoint {
        let n = geo.dimension();
        let nvars = geo.nvars();
        let conj: Vec<Jet> = jets.iter().map(Jet::conj).collect();
        let contract = |x: usize| {
            let mut acc = Jet::zero(nvars, 2);
            for (y, cy) in conj.iter().enumerate() {
                let m = match kind {
                    FieldKind::Form => geo.ginv_jet(x, y),
                    FieldKind::Vector => geo.g_jet(x, y),
                };
                acc.add_mul(m, cy);
            }
            acc
        };
        let other: Vec<Jet> = (0..n).map(contract).collect();
        let (low, up) = match kind {
            FieldKind::Form => (jets, other),
            FieldKind::Vector => (other, jets),
        };
        let mut a = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut acc = low[y].derivative(x);
                for l in 0..n {
                    acc = acc.sub(&geo.gamma_jet(l, x, y).mul(&low[l]));
                }
                a.push(acc);
            }
        }
        let mut c = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                c.push(low[x].derivative(n + y));
            }
        }
        FieldPoint {
            n,
            kind,
            low,
            up,
            a,
            c,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// `ω_α`
    pub fn low(&self, a: usize) -> Complex64 {
        self.low[a].value()
    }

    /// `ω^α`
    pub fn up(&self, a: usize) -> Complex64 {
        self.up[a].value()
    }

    pub fn low_jet(&self, a: usize) -> &Jet {
        &self.low[a]
    }

    pub fn up_jet(&self, a: usize) -> &Jet {
        &self.up[a]
    }

    pub fn lows(&self) -> Vec<Complex64> {
        self.low.iter().map(Jet::value).collect()
    }

    pub fn ups(&self) -> Vec<Complex64> {
        self.up.iter().map(Jet::value).collect()
    }

    /// `D_α ω_β`
    pub fn a(&self, x: usize, y: usize) -> Complex64 {
        self.a[x * self.n + y].value()
    }

    pub fn a_jet(&self, x: usize, y: usize) -> &Jet {
        &self.a[x * self.n + y]
    }

    /// `D_α ω_{β̄}`
    pub fn b(&self, x: usize, y: usize) -> Complex64 {
        self.c[y * self.n + x].value().conj()
    }

    /// `D_{β̄} ω_α`
    pub fn c(&self, x: usize, y: usize) -> Complex64 {
        self.c[x * self.n + y].value()
    }

    pub fn c_jet(&self, x: usize, y: usize) -> &Jet {
        &self.c[x * self.n + y]
    }

    fn matrix(&self, f: impl Fn(usize, usize) -> Complex64) -> Vec<Complex64> {
        let n = self.n;
        (0..n * n).map(|i| f(i / n, i % n)).collect()
    }

    pub fn a_matrix(&self) -> Vec<Complex64> {
        self.matrix(|x, y| self.a(x, y))
    }

    pub fn b_matrix(&self) -> Vec<Complex64> {
        self.matrix(|x, y| self.b(x, y))
    }

    /// `(dω)_{αβ̄} = D_α ω_{β̄} − D_{β̄} ω_α`
    pub fn d_omega_11(&self) -> Vec<Complex64> {
        self.matrix(|x, y| self.b(x, y) - self.c(x, y))
    }

    /// `(dω)_{αβ} = D_α ω_β − D_β ω_α + T^σ_{αβ} ω_σ`
    pub fn d_omega_20(&self, geo: &PointGeometry) -> Vec<Complex64> {
        self.matrix(|x, y| {
            let t: Complex64 = (0..self.n).map(|s| geo.torsion(s, x, y) * self.low(s)).sum();
            self.a(x, y) - self.a(y, x) + t
        })
    }

    /// `Σ g^{αβ̄} D_{β̄} ω_α`
    fn trace_c(&self, geo: &PointGeometry) -> Complex64 {
        let n = self.n;
        let mut acc = ZERO;
        for x in 0..n {
            for y in 0..n {
                acc += geo.ginv(x, y) * self.c(x, y);
            }
        }
        acc
    }

    /// `Σ θ^α ω_α`
    fn lee_pairing(&self, theta_up: &[Complex64]) -> Complex64 {
        (0..self.n).map(|a| theta_up[a] * self.low(a)).sum()
    }

    /// `δω = −Σ (D_{e_i}ω)(e_i) − θ(ω#)`; `theta_up` is `θ^α`.
    pub fn codifferential(&self, geo: &PointGeometry, theta_up: &[Complex64]) -> f64 {
        -2.0 * (self.trace_c(geo) + self.lee_pairing(theta_up)).re
    }

    /// `δ(Jω)` with `(Jω)_α = −i ω_α`.
    pub fn codifferential_j(&self, geo: &PointGeometry, theta_up: &[Complex64]) -> f64 {
        -2.0 * (self.trace_c(geo) + self.lee_pairing(theta_up)).im
    }

    /// `ω#` in Wirtinger components.
    pub fn vector(&self) -> Vec<Complex64> {
        let mut v = self.ups();
        v.extend(self.up.iter().map(|j| j.value().conj()));
        v
    }

    /// `(D_a ω)_b` over Wirtinger indices.
    pub fn covariant(&self) -> Vec<Complex64> {
        let n = self.n;
        let m = 2 * n;
        let mut d = vec![ZERO; m * m];
        for x in 0..n {
            for y in 0..n {
                d[x * m + y] = self.a(x, y);
                d[x * m + n + y] = self.b(x, y);
                d[(n + x) * m + y] = self.c(y, x);
                d[(n + x) * m + n + y] = self.a(x, y).conj();
            }
        }
        d
    }

    /// `(∇_a ω)_b = (D_a ω)_b − ½ dΩ(J∂_a, ∂_b, ω#)`.
    pub fn levi_civita(&self, geo: &PointGeometry) -> Vec<Complex64> {
        let n = self.n;
        let m = 2 * n;
        let v = self.vector();
        let mut d = self.covariant();
        for x in 0..m {
            let j = if x < n { I } else { -I };
            for y in 0..m {
                let mut acc = ZERO;
                for (z, vz) in v.iter().enumerate() {
                    acc += geo.d_omega(x, y, z) * vz;
                }
                d[x * m + y] -= 0.5 * j * acc;
            }
        }
        d
    }

    /// `(∇_a ω)_b + (∇_b ω)_a`
    pub fn killing_tensor(&self, geo: &PointGeometry) -> Vec<Complex64> {
        let m = 2 * self.n;
        let d = self.levi_civita(geo);
        let mut k = vec![ZERO; m * m];
        for x in 0..m {
            for y in 0..m {
                k[x * m + y] = d[x * m + y] + d[y * m + x];
            }
        }
        k
    }

    /// `(L_ξ D)^c_{ab}` flattened as `[c][a][b]` over Wirtinger indices,
    /// where `D_{∂_a}∂_b = Γ^c_{ab}∂_c`.
    pub fn lie_connection(&self, geo: &PointGeometry) -> Vec<Complex64> {
        let n = self.n;
        let m = 2 * n;
        let xi: Vec<Jet> = self
            .up
            .iter()
            .cloned()
            .chain(self.up.iter().map(Jet::conj))
            .collect();
        let mut gamma = vec![ZERO; m * m * m];
        let mut dgamma = vec![ZERO; m * m * m * m];
        for c in 0..m {
            for a in 0..m {
                for b in 0..m {
                    gamma[(c * m + a) * m + b] = full_gamma(geo, c, a, b);
                    for e in 0..m {
                        dgamma[((c * m + a) * m + b) * m + e] = full_dgamma(geo, c, a, b, e);
                    }
                }
            }
        }
        let g = |c: usize, a: usize, b: usize| gamma[(c * m + a) * m + b];
        let mut out = vec![ZERO; m * m * m];
        for c in 0..m {
            for a in 0..m {
                for b in 0..m {
                    let mut v = xi[c].dd(a, b);
                    for e in 0..m {
                        v += xi[e].value() * dgamma[((c * m + a) * m + b) * m + e]
                            + g(c, e, b) * xi[e].d(a)
                            + g(c, a, e) * xi[e].d(b)
                            - g(e, a, b) * xi[c].d(e);
                    }
                    out[(c * m + a) * m + b] = v;
                }
            }
        }
        out
    }
}

/// `‖x‖² = 2 Σ g^{αμ̄} g^{βν̄} x_{αβ} conj(x_{μν})` for a (2,0) tensor.
pub fn norm2_20(geo: &PointGeometry, x: &[Complex64]) -> f64 {
    let n = geo.dimension();
    let mut acc = ZERO;
    for a in 0..n {
        for b in 0..n {
            let xab = x[a * n + b];
            if xab == ZERO {
                continue;
            }
            for u in 0..n {
                for v in 0..n {
                    acc += geo.ginv(a, u) * geo.ginv(b, v) * xab * x[u * n + v].conj();
                }
            }
        }
    }
    2.0 * acc.re
}

/// `‖x‖² = 2 Σ g^{αμ̄} g^{νβ̄} x_{αβ̄} conj(x_{μν̄})` for a (1,1) tensor.
pub fn norm2_11(geo: &PointGeometry, x: &[Complex64]) -> f64 {
    let n = geo.dimension();
    let mut acc = ZERO;
    for a in 0..n {
        for b in 0..n {
            let xab = x[a * n + b];
            if xab == ZERO {
                continue;
            }
            for u in 0..n {
                for v in 0..n {
                    acc += geo.ginv(a, u) * geo.ginv(v, b) * xab * x[u * n + v].conj();
                }
            }
        }
    }
    2.0 * acc.re
}

/// `Σ_{ij} |B(e_i, e_j)|²` for a real bilinear form given in Wirtinger
/// components, over a real orthonormal frame.
pub fn frame_norm2_bilinear(frame: &FrameData, x: &[Complex64]) -> f64 {
    let m = frame.real.len();
    let mut acc = 0.0;
    for ei in &frame.real {
        for ej in &frame.real {
            let mut v = ZERO;
            for a in 0..m {
                for b in 0..m {
                    v += x[a * m + b] * ei[a] * ej[b];
                }
            }
            acc += v.norm_sqr();
        }
    }
    acc
}

/// `Σ_{ij} |L(e_i, e_j)|²` for a real vector-valued bilinear map
/// `L^c_{ab}` flattened as `[c][a][b]`.
pub fn frame_norm2_vector(geo: &PointGeometry, frame: &FrameData, x: &[Complex64]) -> f64 {
    let m = frame.real.len();
    let mut acc = 0.0;
    for ei in &frame.real {
        for ej in &frame.real {
            let v: Vec<Complex64> = (0..m)
                .map(|c| {
                    let mut s = ZERO;
                    for a in 0..m {
                        for b in 0..m {
                            s += x[(c * m + a) * m + b] * ei[a] * ej[b];
                        }
                    }
                    s
                })
                .collect();
            let vbar: Vec<Complex64> = (0..m).map(|c| v[(c + m / 2) % m].conj()).collect();
            acc += frame::metric(geo, &v, &vbar).re;
        }
    }
    acc
}
