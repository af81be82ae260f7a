//! Chern connection, torsion, curvature and the Ricci-type tensors at a point.
//!
//! Indices follow one convention throughout. With `G[α][β] = g_{αβ̄}`:
//!
//! * `g^{αβ̄}` is the `(α, β)` entry of `M = (G⁻¹)ᵀ`, so `Σ_β g^{αβ̄} g_{γβ̄} = δ^α_γ`;
//! * `Γ^λ_{αβ} = Σ_ν g^{λν̄} ∂_α g_{βν̄}` (the only nonzero block);
//! * `T^λ_{αβ} = Γ^λ_{αβ} − Γ^λ_{βα}` and `T_{αβγ̄} = Σ_λ T^λ_{αβ} g_{λγ̄}`;
//! * `R_{αβ̄γδ̄} = −Σ_λ ∂_{β̄}Γ^λ_{αγ} g_{λδ̄}`;
//! * `k_{αβ̄} = g^{γδ̄}R_{αβ̄γδ̄} = −∂_α∂_{β̄} log det g`,
//!   `k*_{γδ̄} = g^{αβ̄}R_{αβ̄γδ̄}`, `s_{γδ̄} = g^{αβ̄}R_{γβ̄αδ̄}`;
//! * `t_{γδ̄} = Σ g^{μρ̄} g^{νσ̄} T_{μνδ̄} conj(T_{ρσγ̄})`;
//! * `H = k − k* − ½t`.
//!
//! A Hermitian matrix `B_{αβ̄}` stands for the real symmetric J-invariant form
//! `B(X, Y) = B_{αβ̄}X^αȲ^β + B_{αβ̄}Y^αX̄^β` on real vectors, so
//! `B(X, X) = 2 Re(B_{αβ̄}X^αX̄^β)`. The frame-sum definitions are checked
//! against these formulas in [`frame`].

mod balanced;
pub mod frame;
mod laplacian;

use num_complex::Complex64;

use crate::error::ModelError;
use crate::jet::Jet;
use crate::linalg::{self, CMatrix};
use crate::manifold::{metric_sample, ManifoldModel, MetricSample};

pub use balanced::{balanced_grid, is_balanced, test_functions, BalancedReport, BalancedTolerances};
pub use laplacian::{laplacians, LaplacianSet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Metric jets and the Chern connection at one point.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    n: usize,
    point: Vec<Complex64>,
    sample: MetricSample,
    g: Vec<Jet>,
    ginv: Vec<Jet>,
    gamma: Vec<Jet>,
    dlog: Vec<Complex64>,
    ddlog: Vec<Complex64>,
}

impl PointGeometry {
    pub fn new(model: &ManifoldModel, point: &[Complex64]) -> Result<PointGeometry, ModelError> {
        let n = model.dimension();
        let nvars = 2 * n;
        let g = model.metric.jets(point, model.mode)?;
        let values: Vec<Complex64> = g.iter().map(Jet::value).collect();
        let sample = metric_sample(linalg::from_rows(n, &values), point)?;
        let p = &sample.inverse;

        let ga: Vec<Option<CMatrix>> = (0..nvars)
            .map(|a| {
                let m = CMatrix::from_fn(n, n, |i, j| g[i * n + j].d(a));
                (m.iter().any(|x| *x != ZERO)).then_some(m)
            })
            .collect();
        let pa: Vec<Option<CMatrix>> = ga
            .iter()
            .map(|m| m.as_ref().map(|m| -(p * m * p)))
            .collect();

        let mut dlog = vec![ZERO; nvars];
        let mut ddlog = vec![ZERO; nvars * nvars];
        let mut ginv_grad = vec![vec![ZERO; nvars]; n * n];
        let mut ginv_hess = vec![vec![ZERO; nvars * nvars]; n * n];
        for a in 0..nvars {
            let Some(gam) = &ga[a] else { continue };
            let pg_a = p * gam;
            dlog[a] = pg_a.trace();
            let pam = pa[a].as_ref().unwrap();
            for i in 0..n {
                for j in 0..n {
                    ginv_grad[i * n + j][a] = pam[(j, i)];
                }
            }
            for b in a..nvars {
                let gab = CMatrix::from_fn(n, n, |i, j| g[i * n + j].dd(a, b));
                let has_gab = gab.iter().any(|x| *x != ZERO);
                // ∂_a∂_b P = −P_b G_a P − P G_ab P − P G_a P_b
                let mut pab = CMatrix::zeros(n, n);
                let mut dd = ZERO;
                if has_gab {
                    pab -= p * &gab * p;
                    dd += (p * &gab).trace();
                }
                if let (Some(gbm), Some(pbm)) = (&ga[b], &pa[b]) {
                    pab -= pbm * gam * p + p * gam * pbm;
                    dd -= (&pg_a * (p * gbm)).trace();
                }
                ddlog[a * nvars + b] = dd;
                ddlog[b * nvars + a] = dd;
                for i in 0..n {
                    for j in 0..n {
                        ginv_hess[i * n + j][a * nvars + b] = pab[(j, i)];
                        ginv_hess[i * n + j][b * nvars + a] = pab[(j, i)];
                    }
                }
            }
        }
        let ginv: Vec<Jet> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                Jet::from_parts(
                    p[(j, i)],
                    std::mem::take(&mut ginv_grad[k]),
                    std::mem::take(&mut ginv_hess[k]),
                )
            })
            .collect();

        let mut gamma = Vec::with_capacity(n * n * n);
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut acc = Jet::zero(nvars, 1);
                    for v in 0..n {
                        let dg = g[b * n + v].derivative(a);
                        acc.add_mul(&ginv[l * n + v], &dg);
                    }
                    gamma.push(acc);
                }
            }
        }

        Ok(PointGeometry {
            n,
            point: point.to_vec(),
            sample,
            g,
            ginv,
            gamma,
            dlog,
            ddlog,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.n
    }

    pub fn point(&self) -> &[Complex64] {
        &self.point
    }

    pub fn sample(&self) -> &MetricSample {
        &self.sample
    }

    pub fn det(&self) -> f64 {
        self.sample.det
    }

    /// `g_{αβ̄}`
    #[inline]
    pub fn g(&self, a: usize, b: usize) -> Complex64 {
        self.sample.g[(a, b)]
    }

    /// `g^{αβ̄}`
    #[inline]
    pub fn ginv(&self, a: usize, b: usize) -> Complex64 {
        self.sample.inverse[(b, a)]
    }

    pub fn g_jet(&self, a: usize, b: usize) -> &Jet {
        &self.g[a * self.n + b]
    }

    pub fn ginv_jet(&self, a: usize, b: usize) -> &Jet {
        &self.ginv[a * self.n + b]
    }

    /// `∂_a log det g`
    pub fn dlog_det(&self, a: usize) -> Complex64 {
        self.dlog[a]
    }

    /// `∂_a∂_b log det g`
    pub fn ddlog_det(&self, a: usize, b: usize) -> Complex64 {
        self.ddlog[a * self.nvars() + b]
    }

    /// `Γ^λ_{αβ}`
    #[inline]
    pub fn gamma(&self, l: usize, a: usize, b: usize) -> Complex64 {
        self.gamma[(l * self.n + a) * self.n + b].value()
    }

    /// First-order jet of `Γ^λ_{αβ}`.
    pub fn gamma_jet(&self, l: usize, a: usize, b: usize) -> &Jet {
        &self.gamma[(l * self.n + a) * self.n + b]
    }

    /// `∂_c Γ^λ_{αβ}` for a Wirtinger variable `c`.
    #[inline]
    pub fn dgamma(&self, l: usize, a: usize, b: usize, c: usize) -> Complex64 {
        self.gamma[(l * self.n + a) * self.n + b].d(c)
    }

    /// `T^λ_{αβ}`
    #[inline]
    pub fn torsion(&self, l: usize, a: usize, b: usize) -> Complex64 {
        self.gamma(l, a, b) - self.gamma(l, b, a)
    }

    /// `∂_c T^λ_{αβ}`
    pub fn dtorsion(&self, l: usize, a: usize, b: usize, c: usize) -> Complex64 {
        self.dgamma(l, a, b, c) - self.dgamma(l, b, a, c)
    }

    /// `T_{αβγ̄}`
    pub fn torsion_lower(&self, a: usize, b: usize, c: usize) -> Complex64 {
        (0..self.n).map(|l| self.torsion(l, a, b) * self.g(l, c)).sum()
    }

    /// `R_{αβ̄γδ̄}`
    pub fn riemann(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        let n = self.n;
        -(0..n)
            .map(|l| self.dgamma(l, a, c, n + b) * self.g(l, d))
            .sum::<Complex64>()
    }

    pub fn connection(&self) -> ConnectionTensors {
        let n = self.n;
        let mut gamma = Vec::with_capacity(n * n * n);
        let mut torsion = Vec::with_capacity(n * n * n);
        let mut torsion_lower = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    gamma.push(self.gamma(x, y, z));
                    torsion.push(self.torsion(x, y, z));
                    torsion_lower.push(self.torsion_lower(x, y, z));
                }
            }
        }
        ConnectionTensors {
            n,
            gamma,
            torsion,
            torsion_lower,
        }
    }

    fn riemann_all(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut r = vec![ZERO; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        r[((a * n + b) * n + c) * n + d] = self.riemann(a, b, c, d);
                    }
                }
            }
        }
        r
    }

    /// `k_{αβ̄} = −∂_α∂_{β̄} log det g`
    pub fn k_from_log_det(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |a, b| -self.ddlog_det(a, n + b))
    }

    /// `t_{γδ̄}`, evaluated as `Σ_{μν} X_{μνδ} conj(X_{μνγ})` with `X` the lowered
    /// torsion in a unitary frame of the first two slots.
    pub fn t(&self) -> CMatrix {
        let n = self.n;
        let e = linalg::unitary_frame(&self.sample.g).expect("positive definite metric");
        let tl: Vec<Complex64> = (0..n * n * n)
            .map(|i| self.torsion_lower(i / (n * n), (i / n) % n, i % n))
            .collect();
        // X_{abδ} = Σ_{μν} E_a^μ E_b^ν T_{μνδ̄}
        let mut x = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let mut acc = ZERO;
                    for m in 0..n {
                        for v in 0..n {
                            acc += e[(m, a)] * e[(v, b)] * tl[(m * n + v) * n + d];
                        }
                    }
                    x[(a * n + b) * n + d] = acc;
                }
            }
        }
        CMatrix::from_fn(n, n, |c, d| {
            let mut acc = ZERO;
            for a in 0..n {
                for b in 0..n {
                    acc += x[(a * n + b) * n + d] * x[(a * n + b) * n + c].conj();
                }
            }
            acc
        })
    }

    /// `t_{γδ̄}` by direct contraction with two inverse metrics.
    pub fn t_contracted(&self) -> CMatrix {
        let n = self.n;
        let tl: Vec<Complex64> = (0..n * n * n)
            .map(|i| self.torsion_lower(i / (n * n), (i / n) % n, i % n))
            .collect();
        CMatrix::from_fn(n, n, |c, d| {
            let mut acc = ZERO;
            for m in 0..n {
                for r in 0..n {
                    let gmr = self.ginv(m, r);
                    for v in 0..n {
                        for s in 0..n {
                            acc += gmr
                                * self.ginv(v, s)
                                * tl[(m * n + v) * n + d]
                                * tl[(r * n + s) * n + c].conj();
                        }
                    }
                }
            }
            acc
        })
    }

    pub fn curvature(&self) -> CurvatureTensors {
        let n = self.n;
        let r = self.riemann_all();
        let at = |a: usize, b: usize, c: usize, d: usize| r[((a * n + b) * n + c) * n + d];
        let mut k = CMatrix::zeros(n, n);
        let mut kstar = CMatrix::zeros(n, n);
        let mut s = CMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                for u in 0..n {
                    for v in 0..n {
                        let h = self.ginv(u, v);
                        k[(x, y)] += h * at(x, y, u, v);
                        kstar[(x, y)] += h * at(u, v, x, y);
                        s[(x, y)] += h * at(x, v, u, y);
                    }
                }
            }
        }
        let t = self.t();
        let h = &k - &kstar - &t * Complex64::new(0.5, 0.0);
        CurvatureTensors {
            n,
            r,
            k,
            kstar,
            s_raw: s.clone(),
            s: linalg::hermitian_part(&s),
            t,
            h,
        }
    }

    /// `Ω_{ab}` over Wirtinger variables: `Ω_{αβ̄} = i g_{αβ̄}`, `Ω_{β̄α} = −i g_{αβ̄}`.
    pub fn omega(&self, a: usize, b: usize) -> Complex64 {
        let n = self.n;
        match (a < n, b < n) {
            (true, false) => I * self.g(a, b - n),
            (false, true) => -I * self.g(b, a - n),
            _ => ZERO,
        }
    }

    fn domega_part(&self, c: usize, a: usize, b: usize) -> Complex64 {
        let n = self.n;
        match (a < n, b < n) {
            (true, false) => I * self.g_jet(a, b - n).d(c),
            (false, true) => -I * self.g_jet(b, a - n).d(c),
            _ => ZERO,
        }
    }

    /// `dΩ_{abc} = ∂_aΩ_{bc} − ∂_bΩ_{ac} + ∂_cΩ_{ab}`.
    pub fn d_omega(&self, a: usize, b: usize, c: usize) -> Complex64 {
        self.domega_part(a, b, c) - self.domega_part(b, a, c) + self.domega_part(c, a, b)
    }

    /// `(δΩ)_{ᾱ}` from the divergence
    /// `(δΩ)^{ν̄} = i ρ⁻¹ ∂_μ(ρ g^{μν̄})`, `ρ = det g`, lowered and conjugated.
    pub fn delta_omega_bar(&self) -> Vec<Complex64> {
        let n = self.n;
        // div[μ] = ρ⁻¹ Σ_ν ∂_{ν̄}(ρ g^{μν̄})
        let div: Vec<Complex64> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|v| self.ginv_jet(m, v).d(n + v) + self.ginv(m, v) * self.dlog_det(n + v))
                    .sum()
            })
            .collect();
        (0..n)
            .map(|k| -I * (0..n).map(|m| self.g(m, k) * div[m]).sum::<Complex64>())
            .collect()
    }

    /// `θ_α` (the (1,0) block; the (0,1) block is its conjugate), from
    /// `θ = −δΩ∘J`.
    pub fn lee_form(&self) -> Vec<Complex64> {
        self.delta_omega_bar()
            .into_iter()
            .map(|d| (I * d).conj())
            .collect()
    }

    /// `θ_α = Σ_λ T^λ_{αλ}`, the torsion trace.
    pub fn torsion_trace(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|a| (0..self.n).map(|l| self.torsion(l, a, l)).sum())
            .collect()
    }

    /// `θ^α = Σ_β g^{αβ̄} conj(θ_β)`
    pub fn lee_vector(&self) -> Vec<Complex64> {
        let th = self.lee_form();
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.ginv(a, b) * th[b].conj()).sum())
            .collect()
    }

    /// `Σ_{αβ} g^{αβ̄} dΩ(∂_γ, ∂_α, ∂_{β̄})`, the contraction carrying the
    /// `dΩ^{n−1}` condition.
    pub fn d_omega_trace(&self) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|c| {
                let mut acc = ZERO;
                for a in 0..n {
                    for b in 0..n {
                        acc += self.ginv(a, b) * self.d_omega(c, a, n + b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `max |∂_α g_{βγ̄} − Γ^λ_{αβ} g_{λγ̄}|`
    pub fn compatibility_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.g_jet(b, c).d(a);
                    let rhs: Complex64 = (0..n).map(|l| self.gamma(l, a, b) * self.g(l, c)).sum();
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

/// `Γ`, `T^λ_{αβ}` and `T_{αβγ̄}`, each flattened as `[x][y][z]` with the
/// last index fastest.
#[derive(Clone, Debug)]
pub struct ConnectionTensors {
    pub n: usize,
    pub gamma: Vec<Complex64>,
    pub torsion: Vec<Complex64>,
    pub torsion_lower: Vec<Complex64>,
}

impl ConnectionTensors {
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    pub fn max_torsion(&self) -> f64 {
        self.torsion.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Curvature and its traces at a point.
#[derive(Clone, Debug)]
pub struct CurvatureTensors {
    pub n: usize,
    /// `R_{αβ̄γδ̄}` flattened as `[α][β][γ][δ]`.
    pub r: Vec<Complex64>,
    pub k: CMatrix,
    pub kstar: CMatrix,
    /// Hermitian part of the mixed trace.
    pub s: CMatrix,
    /// The mixed trace before symmetrization.
    pub s_raw: CMatrix,
    pub t: CMatrix,
    pub h: CMatrix,
}

impl CurvatureTensors {
    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        let n = self.n;
        self.r[((a * n + b) * n + c) * n + d]
    }

    pub fn k_minus_half_t(&self) -> CMatrix {
        &self.k - &self.t * Complex64::new(0.5, 0.0)
    }
}

/// Evaluates `B(X, X) = 2 Re(B_{αβ̄} X^α X̄^β)`.
pub fn real_form(b: &CMatrix, x: &[Complex64]) -> f64 {
    let n = x.len();
    let mut acc = ZERO;
    for a in 0..n {
        for c in 0..n {
            acc += b[(a, c)] * x[a] * x[c].conj();
        }
    }
    2.0 * acc.re
}

pub fn christoffel(model: &ManifoldModel, p: &[Complex64]) -> Result<ConnectionTensors, ModelError> {
    Ok(PointGeometry::new(model, p)?.connection())
}

pub fn curvature(model: &ManifoldModel, p: &[Complex64]) -> Result<CurvatureTensors, ModelError> {
    Ok(PointGeometry::new(model, p)?.curvature())
}

pub fn torsion_quadratic(model: &ManifoldModel, p: &[Complex64]) -> Result<CMatrix, ModelError> {
    Ok(PointGeometry::new(model, p)?.t())
}

pub fn tensor_h(model: &ManifoldModel, p: &[Complex64]) -> Result<CMatrix, ModelError> {
    Ok(PointGeometry::new(model, p)?.curvature().h)
}

pub fn lee_form(model: &ManifoldModel, p: &[Complex64]) -> Result<Vec<Complex64>, ModelError> {
    Ok(PointGeometry::new(model, p)?.lee_form())
}
