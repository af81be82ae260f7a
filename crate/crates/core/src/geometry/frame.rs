//! Literal orthonormal-frame sums for the Ricci-type tensors.
//!
//! Vectors of `T_cM` are written in Wirtinger components `X^a`, `a < 2n`,
//! and every tensor is extended complex-multilinearly. The real metric is
//! `g(∂_α, ∂_{β̄}) = g_{αβ̄}` and the curvature endomorphism is built from the
//! full connection coefficients with the textbook commutator formula, so
//! these sums share nothing with the index formulas in the parent module
//! beyond `Γ` itself.

use num_complex::Complex64;

use super::PointGeometry;
use crate::linalg::{self, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A unitary frame and the real orthonormal basis it induces.
#[derive(Clone, Debug)]
pub struct FrameData {
    /// Columns `E_j` with `Σ E_j^α g_{αβ̄} conj(E_k^β) = δ_jk`.
    pub unitary: CMatrix,
    /// `e_j = (E_j + Ē_j)/√2` followed by `J e_j`, in Wirtinger components.
    pub real: Vec<Vec<Complex64>>,
}

impl FrameData {
    pub fn new(geo: &PointGeometry) -> FrameData {
        let n = geo.dimension();
        let e = linalg::unitary_frame(&geo.sample().g).expect("positive definite metric");
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut real = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut v = vec![ZERO; 2 * n];
            for a in 0..n {
                v[a] = e[(a, j)] * s;
                v[n + a] = e[(a, j)].conj() * s;
            }
            real.push(v);
        }
        for j in 0..n {
            let v = apply_j(&real[j]);
            real.push(v);
        }
        FrameData { unitary: e, real }
    }

    /// `E_j` as a Wirtinger vector.
    pub fn holomorphic(&self, j: usize) -> Vec<Complex64> {
        let n = self.unitary.nrows();
        let mut v = vec![ZERO; 2 * n];
        for a in 0..n {
            v[a] = self.unitary[(a, j)];
        }
        v
    }

    /// `Ē_j` as a Wirtinger vector.
    pub fn antiholomorphic(&self, j: usize) -> Vec<Complex64> {
        let n = self.unitary.nrows();
        let mut v = vec![ZERO; 2 * n];
        for a in 0..n {
            v[n + a] = self.unitary[(a, j)].conj();
        }
        v
    }

    /// `max |g(e_i, e_j) − δ_ij|`
    pub fn gram_defect(&self, geo: &PointGeometry) -> f64 {
        let mut worst = 0.0f64;
        for (i, x) in self.real.iter().enumerate() {
            for (j, y) in self.real.iter().enumerate() {
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((metric(geo, x, y) - d).norm());
            }
        }
        worst
    }
}

pub fn apply_j(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len() / 2;
    x.iter()
        .enumerate()
        .map(|(a, v)| if a < n { I * v } else { -I * v })
        .collect()
}

/// `g(X, Y)`
pub fn metric(geo: &PointGeometry, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let n = geo.dimension();
    let mut acc = ZERO;
    for a in 0..n {
        for b in 0..n {
            let gab = geo.g(a, b);
            acc += gab * (x[a] * y[n + b] + x[n + b] * y[a]);
        }
    }
    acc
}

/// Connection coefficient `Γ^c_{ab}` of `D_{∂_a}∂_b = Γ^c_{ab}∂_c` over all
/// Wirtinger indices.
pub fn full_gamma(geo: &PointGeometry, c: usize, a: usize, b: usize) -> Complex64 {
    let n = geo.dimension();
    match (c < n, a < n, b < n) {
        (true, true, true) => geo.gamma(c, a, b),
        (false, false, false) => geo.gamma(c - n, a - n, b - n).conj(),
        _ => ZERO,
    }
}

/// `∂_e Γ^c_{ab}`
pub fn full_dgamma(geo: &PointGeometry, c: usize, a: usize, b: usize, e: usize) -> Complex64 {
    let n = geo.dimension();
    let bar = |x: usize| if x < n { x + n } else { x - n };
    match (c < n, a < n, b < n) {
        (true, true, true) => geo.dgamma(c, a, b, e),
        (false, false, false) => geo.dgamma(c - n, a - n, b - n, bar(e)).conj(),
        _ => ZERO,
    }
}

/// Components `K[a][b][c][d]` of `K(∂_a, ∂_b)∂_c = Σ_d K[a][b][c][d] ∂_d`.
pub fn curvature_endomorphism(geo: &PointGeometry) -> Vec<Complex64> {
    let m = geo.nvars();
    let mut k = vec![ZERO; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mut v = full_dgamma(geo, d, b, c, a) - full_dgamma(geo, d, a, c, b);
                    for e in 0..m {
                        v += full_gamma(geo, e, b, c) * full_gamma(geo, d, a, e)
                            - full_gamma(geo, e, a, c) * full_gamma(geo, d, b, e);
                    }
                    k[((a * m + b) * m + c) * m + d] = v;
                }
            }
        }
    }
    k
}

/// `T(X, Y)` from `T^c_{ab} = Γ^c_{ab} − Γ^c_{ba}`.
pub fn torsion_vector(geo: &PointGeometry, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let m = geo.nvars();
    (0..m)
        .map(|c| {
            let mut acc = ZERO;
            for a in 0..m {
                for b in 0..m {
                    let t = full_gamma(geo, c, a, b) - full_gamma(geo, c, b, a);
                    acc += t * x[a] * y[b];
                }
            }
            acc
        })
        .collect()
}

struct Oracle<'a> {
    geo: &'a PointGeometry,
    k: Vec<Complex64>,
    frame: FrameData,
}

impl Oracle<'_> {
    fn apply(&self, x: &[Complex64], y: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
        let m = self.geo.nvars();
        (0..m)
            .map(|d| {
                let mut acc = ZERO;
                for a in 0..m {
                    if x[a] == ZERO {
                        continue;
                    }
                    for b in 0..m {
                        if y[b] == ZERO {
                            continue;
                        }
                        for c in 0..m {
                            acc += self.k[((a * m + b) * m + c) * m + d] * x[a] * y[b] * z[c];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    fn g(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        metric(self.geo, x, y)
    }
}

fn unit(m: usize, a: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; m];
    v[a] = Complex64::new(1.0, 0.0);
    v
}

/// Frame-sum values `k(∂_a,∂_b)`, `k*(∂_a,∂_b)`, `s(∂_a,∂_b)`,
/// `t(∂_a,∂_b)` as `2n × 2n` matrices.
#[derive(Clone, Debug)]
pub struct FrameSums {
    pub k: CMatrix,
    pub kstar: CMatrix,
    pub s: CMatrix,
    pub t: CMatrix,
}

pub fn frame_sums(geo: &PointGeometry) -> FrameSums {
    let m = geo.nvars();
    let n = geo.dimension();
    let oracle = Oracle {
        geo,
        k: curvature_endomorphism(geo),
        frame: FrameData::new(geo),
    };
    let basis: Vec<Vec<Complex64>> = (0..m).map(|a| unit(m, a)).collect();
    let half = Complex64::new(-0.5, 0.0);
    let mut out = FrameSums {
        k: CMatrix::zeros(m, m),
        kstar: CMatrix::zeros(m, m),
        s: CMatrix::zeros(m, m),
        t: CMatrix::zeros(m, m),
    };
    let torsions: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| {
            let (ea, eb) = (oracle.frame.holomorphic(a), oracle.frame.holomorphic(b));
            let (fa, fb) = (
                oracle.frame.antiholomorphic(a),
                oracle.frame.antiholomorphic(b),
            );
            (torsion_vector(geo, &ea, &eb), torsion_vector(geo, &fa, &fb))
        })
        .collect();
    for a in 0..m {
        let x = &basis[a];
        for b in 0..m {
            let y = &basis[b];
            let jy = apply_j(y);
            let mut k = ZERO;
            let mut ks = ZERO;
            let mut s = ZERO;
            for e in &oracle.frame.real {
                let je = apply_j(e);
                k += oracle.g(&oracle.apply(x, &jy, e), &je);
                ks += oracle.g(&oracle.apply(e, &je, x), &jy);
                s += oracle.g(&oracle.apply(e, x, y), e);
            }
            out.k[(a, b)] = half * k;
            out.kstar[(a, b)] = half * ks;
            out.s[(a, b)] = s;
            out.t[(a, b)] = torsions
                .iter()
                .map(|(t, tb)| oracle.g(t, x) * oracle.g(tb, y))
                .sum();
        }
    }
    out
}
