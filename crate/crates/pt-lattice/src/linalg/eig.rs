//! Dense non-symmetric eigensolver: unitary reduction to Hessenberg form,
//! single-shift QR iteration to Schur form, then back-substitution for right
//! eigenvectors.

use num_complex::Complex;

use super::{CMatrix, CVector};
use crate::error::{Error, Result};
use crate::scalar::{r, tol, Real};

/// Eigenvalues and unit-norm right eigenvectors.
///
/// Eigenvalues are sorted by real part, then imaginary part; `right_vectors`
/// holds the matching eigenvectors as columns. Each eigenvector is scaled so
/// its largest-magnitude entry is real and positive, which fixes the phase
/// deterministically.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T: Real> {
    pub values: Vec<Complex<T>>,
    pub right_vectors: CMatrix<T>,
    /// Largest 2-norm of `H v - lambda v` over all pairs.
    pub residual: T,
}

/// Eigenvalues only, sorted by `(re, im)`.
///
/// No residual gate is applied, so this stays usable arbitrarily close to
/// eigenvalue degeneracies where eigenvectors lose meaning.
pub fn eig_values<T: Real>(h: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let (t, _q) = schur(h)?;
    let mut values: Vec<Complex<T>> = (0..h.dim()).map(|i| t[(i, i)]).collect();
    sort_complex(&mut values);
    Ok(values)
}

/// Full eigendecomposition with a residual acceptance gate: the result is
/// rejected if any pair's residual exceeds `1e-8 * ||H||_F`.
pub fn eig<T: Real>(h: &CMatrix<T>) -> Result<EigenDecomposition<T>> {
    let d = eig_ungated(h)?;
    let gate = tol::<T>(1e-8) * h.fro_norm();
    if d.residual > gate && h.dim() > 0 {
        return Err(Error::NumericalFailure {
            operation: "eigendecomposition",
            step: format!(
                "residual {:e} exceeds acceptance gate {:e}",
                d.residual.to_f64().unwrap_or(f64::NAN),
                gate.to_f64().unwrap_or(f64::NAN)
            ),
        });
    }
    Ok(d)
}

/// Condition estimate of the right-eigenvector basis,
/// `||V||_F * ||V^-1||_F`. Large values flag proximity to an eigenvalue
/// coalescence.
pub fn eigenbasis_condition<T: Real>(h: &CMatrix<T>) -> Result<T> {
    let d = eig_ungated(h)?;
    let inv = d
        .right_vectors
        .inverse()
        .map_err(|_| Error::NumericalFailure {
            operation: "eigenbasis condition",
            step: "eigenvector matrix is numerically singular".into(),
        })?;
    Ok(d.right_vectors.fro_norm() * inv.fro_norm())
}

/// Same as `eig` without the residual gate; for callers that must keep
/// working near degeneracies and interpret large residuals themselves.
pub(crate) fn eig_ungated<T: Real>(h: &CMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = h.dim();
    let (t, q) = schur(h)?;
    let tnorm = t.fro_norm();
    let smin = T::epsilon() * if tnorm > T::one() { tnorm } else { T::one() };

    let mut pairs: Vec<(Complex<T>, CVector<T>)> = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        // Solve (T - lambda I) y = 0 with y[k] = 1 by back-substitution.
        let mut y = vec![Complex::new(T::zero(), T::zero()); n];
        y[k] = Complex::new(T::one(), T::zero());
        for i in (0..k).rev() {
            let mut s = Complex::new(T::zero(), T::zero());
            for j in (i + 1)..=k {
                s = s + t[(i, j)] * y[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = Complex::new(smin, T::zero());
            }
            y[i] = -s / d;
        }
        let mut v = CVector::zeros(n);
        for i in 0..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..=k {
                acc = acc + q[(i, j)] * y[j];
            }
            v[i] = acc;
        }
        let nrm = v.norm();
        if nrm == T::zero() || !nrm.is_finite() {
            return Err(Error::NumericalFailure {
                operation: "eigendecomposition",
                step: format!("degenerate eigenvector for mode {k}"),
            });
        }
        v = v.scale(Complex::new(T::one() / nrm, T::zero()));
        // Phase gauge: largest-magnitude entry real and positive.
        let imax = v.argmax_abs();
        let phase = v[imax] / Complex::new(v[imax].norm(), T::zero());
        v = v.scale(phase.conj());
        pairs.push((lambda, v));
    }

    pairs.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("eigenvalues are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut right_vectors = CMatrix::zeros(n);
    let mut residual = T::zero();
    for (j, (lambda, v)) in pairs.iter().enumerate() {
        values.push(*lambda);
        right_vectors.set_col(j, v);
        let hv = h.mul_vec(v)?;
        let res = hv.sub(&v.scale(*lambda))?.norm();
        if res > residual {
            residual = res;
        }
    }

    Ok(EigenDecomposition {
        values,
        right_vectors,
        residual,
    })
}

fn sort_complex<T: Real>(values: &mut [Complex<T>]) {
    values.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("eigenvalues are finite")
    });
}

/// Unitary Schur decomposition `A = Q T Q^dagger` with `T` upper triangular.
fn schur<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    if !a.is_finite() {
        return Err(Error::NonFiniteInput {
            operation: "eigendecomposition",
        });
    }
    let n = a.dim();
    if n > 64 {
        return Err(Error::InvalidSpec {
            field: "dim",
            message: format!("eigensolver supports dimension <= 64, got {n}"),
        });
    }
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n <= 1 {
        return Ok((h, q));
    }
    hessenberg(&mut h, &mut q);

    let fro = h.fro_norm();
    let eps = T::epsilon();
    let budget = 30 * n;
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    while hi > 0 {
        // Deflate: find the start of the trailing unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == T::zero() { fro } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = Complex::new(T::zero(), T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Error::NumericalFailure {
                operation: "eigendecomposition",
                step: format!("QR iteration budget ({budget}) exhausted"),
            });
        }

        let shift = if since_deflation % 12 == 0 {
            // Exceptional shift to break rare cycling.
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * r::<T>(1.5), T::zero())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] - shift;
        }
        // QR factor the shifted block by Givens rotations (left), then apply
        // their adjoints from the right: H <- R G^dagger + shift I.
        let mut rots: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            for j in i..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = x.scale(c) + s * y;
                h[(i + 1, j)] = y.scale(c) - s.conj() * x;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            let row_end = if i + 2 < hi { i + 2 } else { hi };
            for rw in 0..=row_end {
                let x = h[(rw, i)];
                let y = h[(rw, i + 1)];
                h[(rw, i)] = x.scale(c) + s.conj() * y;
                h[(rw, i + 1)] = y.scale(c) - s * x;
            }
            for rw in 0..n {
                let x = q[(rw, i)];
                let y = q[(rw, i + 1)];
                q[(rw, i)] = x.scale(c) + s.conj() * y;
                q[(rw, i + 1)] = y.scale(c) - s * x;
            }
        }
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] + shift;
        }
    }

    // Clear subdiagonal residue so T is exactly triangular.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Complex::new(T::zero(), T::zero());
        }
    }
    Ok((h, q))
}

/// In-place Householder reduction to upper Hessenberg form, accumulating the
/// unitary transform into `q`.
fn hessenberg<T: Real>(h: &mut CMatrix<T>, q: &mut CMatrix<T>) {
    let n = h.dim();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut x = vec![Complex::new(T::zero(), T::zero()); m];
        for i in 0..m {
            x[i] = h[(k + 1 + i, k)];
        }
        let xnorm = x
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let alpha = if x[0].norm() == T::zero() {
            Complex::new(-xnorm, T::zero())
        } else {
            -(x[0] / Complex::new(x[0].norm(), T::zero())).scale(xnorm)
        };
        let mut u = x;
        u[0] = u[0] - alpha;
        let unorm = u
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if unorm <= T::epsilon() * xnorm {
            continue;
        }
        for z in u.iter_mut() {
            *z = z.unscale(unorm);
        }
        let two = r::<T>(2.0);
        // Left: rows k+1..n of all columns.
        for j in k..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for i in 0..m {
                s = s + u[i].conj() * h[(k + 1 + i, j)];
            }
            s = s.scale(two);
            for i in 0..m {
                h[(k + 1 + i, j)] = h[(k + 1 + i, j)] - u[i] * s;
            }
        }
        // Right: columns k+1..n of all rows.
        for i in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                s = s + h[(i, k + 1 + j)] * u[j];
            }
            s = s.scale(two);
            for j in 0..m {
                h[(i, k + 1 + j)] = h[(i, k + 1 + j)] - s * u[j].conj();
            }
        }
        // Accumulate into q.
        for i in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                s = s + q[(i, k + 1 + j)] * u[j];
            }
            s = s.scale(two);
            for j in 0..m {
                q[(i, k + 1 + j)] = q[(i, k + 1 + j)] - s * u[j].conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = Complex::new(T::zero(), T::zero());
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c >= 0` mapping `(f, g)` to
/// `(r, 0)`.
fn givens<T: Real>(f: Complex<T>, g: Complex<T>) -> (T, Complex<T>) {
    if g.norm_sqr() == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    if f.norm_sqr() == T::zero() {
        return (T::zero(), g.conj().unscale(g.norm()));
    }
    let fa = f.norm();
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = fa / d;
    let s = (f * g.conj()).unscale(fa * d);
    (c, s)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let half = r::<T>(0.5);
    let tr = (a + d).scale(half);
    let diff = (a - d).scale(half);
    let disc = (diff * diff + b * c).sqrt();
    let l1 = tr + disc;
    let l2 = tr - disc;
    if (l1 - d).norm_sqr() <= (l2 - d).norm_sqr() {
        l1
    } else {
        l2
    }
}
