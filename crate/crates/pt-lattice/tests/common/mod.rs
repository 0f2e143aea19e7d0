//! Shared oracles for the integration tests.
//!
//! Eigenvalue results are cross-checked against two routes that share no code
//! with the library's QR iteration: Sturm-sequence bisection for real
//! symmetric tridiagonal matrices, and characteristic-polynomial roots via
//! Faddeev-LeVerrier coefficients plus Durand-Kerner iteration.

#![allow(dead_code)]

use pt_lattice::{Complex64, Matrix};

/// Eigenvalues of a real symmetric tridiagonal matrix by Sturm bisection.
/// `diag` has length n, `off` length n-1. Returned ascending.
pub fn sturm_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len(), n - 1);

    // Gershgorin bound for the search interval.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    lo -= 1e-8;
    hi += 1e-8;

    // Number of eigenvalues strictly below x, from the Sturm sequence of
    // leading principal minors evaluated as the recurrence d_i = (a_i - x)
    // - b_{i-1}^2 / d_{i-1}; sign agreements count eigenvalues below x.
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..n {
            let b2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = (diag[i] - x) - b2 / d;
            if d == 0.0 {
                d = 1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };

    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if count_below(m) <= k {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-14 * (1.0 + m.abs()) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Monic characteristic polynomial coefficients of a complex matrix via
/// Faddeev-LeVerrier: p(z) = z^n + c[0] z^(n-1) + ... + c[n-1].
pub fn charpoly_coeffs(h: &Matrix) -> Vec<Complex64> {
    let n = h.dim();
    let mut coeffs = Vec::with_capacity(n);
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        m = h.mul(&m).unwrap();
        let c = m.trace() * Complex64::new(-1.0 / k as f64, 0.0);
        coeffs.push(c);
        for i in 0..n {
            m[(i, i)] += c;
        }
    }
    coeffs
}

/// All roots of a monic polynomial z^n + c[0] z^(n-1) + ... + c[n-1]
/// by Durand-Kerner iteration. Adequate for n <= 8.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let eval = |z: Complex64| -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for &c in coeffs {
            p = p * z + c;
        }
        p
    };

    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1) * radius).collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Eigenvalues by the characteristic-polynomial route.
pub fn charpoly_eigenvalues(h: &Matrix) -> Vec<Complex64> {
    durand_kerner(&charpoly_coeffs(h))
}

/// Greedy multiset match: every value in `a` must have a distinct partner in
/// `b` within `tol`. Returns the largest matched distance.
pub fn match_spectra(a: &[Complex64], b: &[Complex64], tol: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        assert!(
            best_d <= tol,
            "unmatched eigenvalue {x}: nearest unused partner at distance {best_d:e} (tol {tol:e})"
        );
        used[best] = true;
        worst = worst.max(best_d);
    }
    worst
}

/// Largest entrywise distance between two matrices.
pub fn max_entry_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let n = a.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}
