//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn from_rows(n: usize, entries: &[Complex64]) -> CMatrix {
    CMatrix::from_row_slice(n, n, entries)
}

/// `max |m_ab − conj(m_ba)|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((m[(a, b)] - m[(b, a)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = hermitian_part(m);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Lower-triangular `L` with `g = L·L†`, or `None` when `g` is not positive
/// definite.
pub fn cholesky_lower(g: &CMatrix) -> Option<CMatrix> {
    // nalgebra's complex Cholesky takes complex square roots of the pivots and
    // so never rejects an indefinite input.
    let n = g.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = g[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0) {
            return None;
        }
        let d = pivot.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in (j + 1)..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Columns `E_j` of a `g`-unitary frame of (1,0)-vectors:
/// `Σ_{αβ} E_j^α g_{αβ̄} conj(E_k^β) = δ_jk`, i.e. `E = L^{-T}` for the
/// Cholesky factor of `g`.
pub fn unitary_frame(g: &CMatrix) -> Option<CMatrix> {
    let l = cholesky_lower(g)?;
    let linv = l.try_inverse()?;
    Some(linv.transpose())
}

/// Eigenvalues of the Hermitian form `b_{αβ̄}` relative to `g`, i.e. of the
/// matrix of `b` in a unitary frame.
pub fn relative_eigenvalues(g: &CMatrix, b: &CMatrix) -> Option<Vec<f64>> {
    let e = unitary_frame(g)?;
    let in_frame = e.transpose() * b * e.map(|x| x.conj());
    Some(hermitian_eigenvalues(&in_frame))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> CMatrix {
        from_rows(
            2,
            &[c(2.0, 0.0), c(0.5, -0.25), c(0.5, 0.25), c(1.0, 0.0)],
        )
    }

    #[test]
    fn frame_is_unitary() {
        let g = sample();
        let e = unitary_frame(&g).unwrap();
        let gram = e.transpose() * &g * e.map(|x| x.conj());
        assert!((gram - CMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn metric_relative_to_itself_has_unit_spectrum() {
        let g = sample();
        let ev = relative_eigenvalues(&g, &g).unwrap();
        assert!(ev.iter().all(|v| (v - 1.0).abs() < 1e-13));
    }

    #[test]
    fn eigenvalues_of_a_hermitian_matrix() {
        // trace 3, det 2 - 0.3125
        let ev = hermitian_eigenvalues(&sample());
        let disc = (1.0f64 + 4.0 * 0.3125).sqrt();
        assert!((ev[0] - (3.0 - disc) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (3.0 + disc) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_matrix_has_no_frame() {
        let m = from_rows(2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(unitary_frame(&m).is_none());
        assert!(hermitian_defect(&m) == 0.0);
    }
}
