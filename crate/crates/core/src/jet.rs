//! Second-order jets in Wirtinger variables.
//!
//! A chart of complex dimension `n` has `2n` Wirtinger variables ordered as
//! `z_1..z_n, z̄_1..z̄_n`. A [`Jet`] stores a complex value together with its
//! first and (optionally) second derivatives in those variables, and the
//! arithmetic on jets is the product/chain rule truncated at the stored
//! order. Geometric quantities are assembled from jets of the metric and of
//! the fields.

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    value: Complex64,
    grad: Vec<Complex64>,
    hess: Vec<Complex64>,
    nvars: usize,
    order: u8,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Jet {
    pub fn constant(nvars: usize, value: Complex64, order: u8) -> Jet {
        let mut jet = Jet::zero(nvars, order);
        jet.value = value;
        jet
    }

    pub fn zero(nvars: usize, order: u8) -> Jet {
        Jet {
            value: ZERO,
            grad: if order >= 1 { vec![ZERO; nvars] } else { Vec::new() },
            hess: if order >= 2 {
                vec![ZERO; nvars * nvars]
            } else {
                Vec::new()
            },
            nvars,
            order,
        }
    }

    /// Builds a second-order jet; `hess` is row-major `nvars × nvars` and is
    /// symmetrised on the way in.
    pub fn from_parts(value: Complex64, grad: Vec<Complex64>, mut hess: Vec<Complex64>) -> Jet {
        let nvars = grad.len();
        assert_eq!(hess.len(), nvars * nvars, "hessian shape");
        for a in 0..nvars {
            for b in (a + 1)..nvars {
                let avg = 0.5 * (hess[a * nvars + b] + hess[b * nvars + a]);
                hess[a * nvars + b] = avg;
                hess[b * nvars + a] = avg;
            }
        }
        Jet {
            value,
            grad,
            hess,
            nvars,
            order: 2,
        }
    }

    pub fn first_order(value: Complex64, grad: Vec<Complex64>) -> Jet {
        let nvars = grad.len();
        Jet {
            value,
            grad,
            hess: Vec::new(),
            nvars,
            order: 1,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// `∂_a` of the underlying function.
    pub fn d(&self, a: usize) -> Complex64 {
        debug_assert!(self.order >= 1, "jet has no first derivatives");
        self.grad[a]
    }

    /// `∂_a ∂_b` of the underlying function.
    pub fn dd(&self, a: usize, b: usize) -> Complex64 {
        debug_assert!(self.order >= 2, "jet has no second derivatives");
        self.hess[a * self.nvars + b]
    }

    pub fn grad(&self) -> &[Complex64] {
        &self.grad
    }

    /// Jet of `∂_a f`, one order lower.
    pub fn derivative(&self, a: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate a value-only jet");
        if self.order == 1 {
            return Jet::constant(self.nvars, self.grad[a], 0);
        }
        let n = self.nvars;
        Jet {
            value: self.grad[a],
            grad: self.hess[a * n..(a + 1) * n].to_vec(),
            hess: Vec::new(),
            nvars: n,
            order: 1,
        }
    }

    pub fn truncate(&self, order: u8) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            value: self.value,
            grad: if order >= 1 { self.grad.clone() } else { Vec::new() },
            hess: Vec::new(),
            nvars: self.nvars,
            order,
        }
    }

    /// Index of the conjugate variable: `z_k ↔ z̄_k`.
    #[inline]
    pub fn bar_index(a: usize, nvars: usize) -> usize {
        let n = nvars / 2;
        if a < n {
            a + n
        } else {
            a - n
        }
    }

    /// Jet of `conj(f)`: `∂_a conj(f) = conj(∂_{ā} f)`.
    pub fn conj(&self) -> Jet {
        let n = self.nvars;
        let bar = |a| Jet::bar_index(a, n);
        let grad = if self.order >= 1 {
            (0..n).map(|a| self.grad[bar(a)].conj()).collect()
        } else {
            Vec::new()
        };
        let hess = if self.order >= 2 {
            let mut h = vec![ZERO; n * n];
            for a in 0..n {
                for b in 0..n {
                    h[a * n + b] = self.hess[bar(a) * n + bar(b)].conj();
                }
            }
            h
        } else {
            Vec::new()
        };
        Jet {
            value: self.value.conj(),
            grad,
            hess,
            nvars: n,
            order: self.order,
        }
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
            nvars: self.nvars,
            order: self.order,
        }
    }

    pub fn neg(&self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    fn lower_to(&mut self, order: u8) {
        if order < self.order {
            if order < 2 {
                self.hess.clear();
            }
            if order < 1 {
                self.grad.clear();
            }
            self.order = order;
        }
    }

    /// `self += c·a`
    pub fn add_scaled(&mut self, a: &Jet, c: Complex64) {
        self.lower_to(a.order);
        self.value += c * a.value;
        for (s, x) in self.grad.iter_mut().zip(&a.grad) {
            *s += c * x;
        }
        for (s, x) in self.hess.iter_mut().zip(&a.hess) {
            *s += c * x;
        }
    }

    pub fn add_assign(&mut self, a: &Jet) {
        self.add_scaled(a, Complex64::new(1.0, 0.0));
    }

    /// `self += a·b` with the product rule.
    pub fn add_mul(&mut self, a: &Jet, b: &Jet) {
        self.lower_to(a.order.min(b.order));
        let n = self.nvars;
        self.value += a.value * b.value;
        if self.order >= 1 {
            for k in 0..n {
                self.grad[k] += a.grad[k] * b.value + a.value * b.grad[k];
            }
        }
        if self.order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let idx = i * n + j;
                    self.hess[idx] += a.hess[idx] * b.value
                        + a.grad[i] * b.grad[j]
                        + a.grad[j] * b.grad[i]
                        + a.value * b.hess[idx];
                }
            }
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let mut out = Jet::zero(self.nvars, self.order.min(other.order));
        out.add_mul(self, other);
        out
    }
}
