use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ExprError, ModelError};
use crate::jet::Jet;

/// Step control for the finite-difference fallback.
///
/// Steps are relative to the coordinate scale `max(1, |x|)`. With
/// `richardson` set, every difference quotient is taken at `h` and `h/2` and
/// combined as `(4·D(h/2) − D(h))/3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdOptions {
    pub step: f64,
    pub second_step: f64,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            step: 1e-5,
            second_step: 1e-4,
            richardson: false,
        }
    }
}

impl FdOptions {
    pub fn richardson() -> FdOptions {
        FdOptions {
            step: 1e-3,
            second_step: 2e-3,
            richardson: true,
        }
    }
}

/// Real axis `u` of a chart with `n` complex coordinates: `u = 2k` is
/// `Re z_k`, `u = 2k + 1` is `Im z_k`.
fn shift(point: &[Complex64], u: usize, h: f64) -> Complex64 {
    let k = u / 2;
    if u % 2 == 0 {
        point[k] + Complex64::new(h, 0.0)
    } else {
        point[k] + Complex64::new(0.0, h)
    }
}

fn axis_value(point: &[Complex64], u: usize) -> f64 {
    if u % 2 == 0 {
        point[u / 2].re
    } else {
        point[u / 2].im
    }
}

struct Stencil<'a, F> {
    f: &'a F,
    point: &'a [Complex64],
    center: Vec<Complex64>,
}

impl<F> Stencil<'_, F>
where
    F: Fn(&[Complex64]) -> Result<Vec<Complex64>, ExprError>,
{
    fn at(&self, moves: &[(usize, f64)]) -> Result<Vec<Complex64>, ExprError> {
        let mut q = self.point.to_vec();
        for &(u, h) in moves {
            q[u / 2] = shift(&q, u, h);
        }
        (self.f)(&q)
    }

    fn first(&self, u: usize, h: f64) -> Result<Vec<Complex64>, ExprError> {
        let plus = self.at(&[(u, h)])?;
        let minus = self.at(&[(u, -h)])?;
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect())
    }

    fn second(&self, u: usize, v: usize, h: f64) -> Result<Vec<Complex64>, ExprError> {
        if u == v {
            let plus = self.at(&[(u, h)])?;
            let minus = self.at(&[(u, -h)])?;
            Ok((0..plus.len())
                .map(|j| (plus[j] - 2.0 * self.center[j] + minus[j]) / (h * h))
                .collect())
        } else {
            let pp = self.at(&[(u, h), (v, h)])?;
            let pm = self.at(&[(u, h), (v, -h)])?;
            let mp = self.at(&[(u, -h), (v, h)])?;
            let mm = self.at(&[(u, -h), (v, -h)])?;
            Ok((0..pp.len())
                .map(|j| (pp[j] - pm[j] - mp[j] + mm[j]) / (4.0 * h * h))
                .collect())
        }
    }
}

fn scaled_step(point: &[Complex64], u: usize, base: f64) -> Result<f64, ModelError> {
    let x = axis_value(point, u);
    let scale = x.abs().max(1.0);
    let h = base * scale;
    if !(h > 0.0) || x + h == x || x - h == x {
        return Err(ModelError::StepUnderflow { step: h, scale });
    }
    Ok(h)
}

/// Second-order Wirtinger jet of `f` at `point` by central differences in the
/// `2n` real coordinates.
///
/// `active[k]` marks the complex coordinates `f` may depend on; derivatives in
/// the others are set to zero without evaluating `f`.
pub fn fd_jet<F>(
    f: &F,
    point: &[Complex64],
    active: &[bool],
    opts: &FdOptions,
) -> Result<Jet, ModelError>
where
    F: Fn(&[Complex64]) -> Result<Complex64, ExprError>,
{
    let g = |q: &[Complex64]| f(q).map(|v| vec![v]);
    Ok(fd_jets(&g, point, active, opts)?.pop().unwrap())
}

/// Vector-valued form of [`fd_jet`]: one jet per component of `f`, sharing
/// the stencil evaluations.
pub fn fd_jets<F>(
    f: &F,
    point: &[Complex64],
    active: &[bool],
    opts: &FdOptions,
) -> Result<Vec<Jet>, ModelError>
where
    F: Fn(&[Complex64]) -> Result<Vec<Complex64>, ExprError>,
{
    let n = point.len();
    let nvars = 2 * n;
    let center = f(point)?;
    let m = center.len();
    let zero = Complex64::new(0.0, 0.0);
    let stencil = Stencil {
        f,
        point,
        center: center.clone(),
    };
    let axes: Vec<usize> = (0..nvars).filter(|u| active[u / 2]).collect();

    let mut first = vec![vec![zero; nvars]; m];
    let mut hess = vec![vec![zero; nvars * nvars]; m];
    for &u in &axes {
        let h = scaled_step(point, u, opts.step)?;
        let d = if opts.richardson {
            let coarse = stencil.first(u, h)?;
            let fine = stencil.first(u, 0.5 * h)?;
            combine(&fine, &coarse)
        } else {
            stencil.first(u, h)?
        };
        for (j, v) in d.into_iter().enumerate() {
            first[j][u] = v;
        }
    }
    for (i, &u) in axes.iter().enumerate() {
        for &v in &axes[i..] {
            let h = scaled_step(point, u, opts.second_step)?
                .max(scaled_step(point, v, opts.second_step)?);
            let d = if opts.richardson {
                let coarse = stencil.second(u, v, h)?;
                let fine = stencil.second(u, v, 0.5 * h)?;
                combine(&fine, &coarse)
            } else {
                stencil.second(u, v, h)?
            };
            for (j, x) in d.into_iter().enumerate() {
                hess[j][u * nvars + v] = x;
                hess[j][v * nvars + u] = x;
            }
        }
    }

    // ∂_{z_k} = ½(∂_x − i∂_y), ∂_{z̄_k} = ½(∂_x + i∂_y)
    let coeff = |a: usize| -> [(usize, Complex64); 2] {
        let k = a % n;
        let sign = if a < n { -0.5 } else { 0.5 };
        [
            (2 * k, Complex64::new(0.5, 0.0)),
            (2 * k + 1, Complex64::new(0.0, sign)),
        ]
    };
    let mut jets = Vec::with_capacity(m);
    for j in 0..m {
        let grad: Vec<Complex64> = (0..nvars)
            .map(|a| coeff(a).iter().map(|&(u, c)| c * first[j][u]).sum())
            .collect();
        let mut wh = vec![zero; nvars * nvars];
        for a in 0..nvars {
            for b in 0..nvars {
                let mut acc = zero;
                for &(u, cu) in &coeff(a) {
                    for &(v, cv) in &coeff(b) {
                        acc += cu * cv * hess[j][u * nvars + v];
                    }
                }
                wh[a * nvars + b] = acc;
            }
        }
        jets.push(Jet::from_parts(center[j], grad, wh));
    }
    Ok(jets)
}

fn combine(fine: &[Complex64], coarse: &[Complex64]) -> Vec<Complex64> {
    fine.iter()
        .zip(coarse)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect()
}
