//! Conserved quantities of non-unitary evolution: the parity bilinear form,
//! general intertwiner expectation values along trajectories, expansion in
//! the bi-orthogonal eigenbasis, and numerical enumeration of all Hermitian
//! intertwiners of a given Hamiltonian.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::evolve::StateTrajectory;
use crate::linalg::{eig_ungated, CMatrix, CVector};
use crate::models::ParityOperator;
use crate::scalar::{r, tol, Real};

/// The bilinear form `sum_k conj(psi_{k_bar}) psi_k = <psi|P|psi>`, the
/// quantity conserved by mirror-symmetric gain/loss evolution. Real for any
/// state (P is Hermitian), but returned as complex so tests can check that.
pub fn pt_product<T: Real>(psi: &CVector<T>, p: &ParityOperator) -> Result<Complex<T>> {
    if psi.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            context: "parity product",
            expected: p.dim(),
            got: psi.dim(),
        });
    }
    let n = psi.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        acc = acc + psi[n - 1 - k].conj() * psi[k];
    }
    Ok(acc)
}

/// Expectation series `e^{2 l(t)} <state(t)|eta|state(t)>` along a
/// trajectory, with an overflow-safe drift statistic.
///
/// `log_magnitude`/`phase_angle` hold the series in log-polar form, which
/// stays finite even when the physical scale `e^{2 l}` overflows; `values`
/// is the reconstructed series (saturating if out of range).
#[derive(Clone, Debug)]
pub struct InvariantSeries<T: Real> {
    pub values: Vec<Complex<T>>,
    pub reference: Complex<T>,
    /// `max_t |value(t) - reference| / max(|reference|, 1e-12)`.
    pub max_relative_drift: T,
    pub log_magnitude: Vec<T>,
    pub phase_angle: Vec<T>,
}

/// Evaluates `<state|eta|state>` scaled back to the physical state at every
/// grid point. `eta` must be Hermitian to relative 1e-12.
pub fn invariant_series<T: Real>(
    traj: &StateTrajectory<T>,
    eta: &CMatrix<T>,
) -> Result<InvariantSeries<T>> {
    if eta.dim() != traj.dim() {
        return Err(Error::DimensionMismatch {
            context: "invariant series",
            expected: traj.dim(),
            got: eta.dim(),
        });
    }
    let eta_norm = eta.fro_norm();
    let asym = eta.sub(&eta.dagger())?.fro_norm();
    let denom = if eta_norm > T::zero() {
        eta_norm
    } else {
        T::one()
    };
    if asym / denom > tol::<T>(1e-12) {
        return Err(Error::NotHermitian {
            residual: (asym / denom).to_f64().unwrap_or(f64::NAN),
        });
    }

    let steps = traj.len();
    let mut log_magnitude = Vec::with_capacity(steps);
    let mut phase_angle = Vec::with_capacity(steps);
    let mut values = Vec::with_capacity(steps);
    for i in 0..steps {
        let s = &traj.states[i];
        let q = s.dot_conj(&eta.mul_vec(s)?)?;
        let mag = q.norm();
        let two_l = traj.log_scale[i] + traj.log_scale[i];
        let (m, ph) = if mag > T::zero() {
            (two_l + mag.ln(), q.arg())
        } else {
            (T::neg_infinity(), T::zero())
        };
        log_magnitude.push(m);
        phase_angle.push(ph);
        values.push(Complex::from_polar(m.exp(), ph));
    }

    // Drift evaluated in log space:
    // |v_t - v_0|^2 = (e^a - e^b)^2 + 4 e^{a+b} sin^2(dphi/2), scaled by
    // e^{2M} with M = max(m_t, m_0), so every exponent stays <= 0 until the
    // single final exponential.
    let m0 = log_magnitude[0];
    let ph0 = phase_angle[0];
    let ln_denom = m0.max(r::<T>(1e-12).ln());
    let mut max_relative_drift = T::zero();
    for i in 0..steps {
        let mt = log_magnitude[i];
        let big = mt.max(m0);
        if big == T::neg_infinity() {
            continue;
        }
        let a = (mt - big).exp();
        let b = (m0 - big).exp();
        let half_dphi = (phase_angle[i] - ph0) * r::<T>(0.5);
        let s = half_dphi.sin();
        let diff_sq = (a - b) * (a - b) + r::<T>(4.0) * a * b * s * s;
        if diff_sq == T::zero() {
            continue;
        }
        let log_drift = big + diff_sq.ln() * r::<T>(0.5) - ln_denom;
        let drift = log_drift.exp();
        if drift > max_relative_drift {
            max_relative_drift = drift;
        }
    }

    Ok(InvariantSeries {
        reference: values[0],
        values,
        max_relative_drift,
        log_magnitude,
        phase_angle,
    })
}

/// Expansion of a state in the bi-orthogonal eigenbasis of a
/// complex-symmetric matrix: `c_mu = (v_mu^T psi) / (v_mu^T v_mu)`.
#[derive(Clone, Debug)]
pub struct ModeCoefficients<T: Real> {
    pub coefficients: Vec<Complex<T>>,
    /// Bilinear self-products `v_mu^T v_mu`; small magnitudes flag
    /// coalescing modes.
    pub self_products: Vec<Complex<T>>,
    /// `|| sum_mu c_mu v_mu - psi ||`.
    pub reconstruction_residual: T,
}

/// Decomposes `psi` over the right eigenvectors of `h`, which must be
/// complex-symmetric (its left eigenvectors are then the plain transposes).
/// Fails with a self-orthogonality error when any `|v^T v| < 1e-6`, the
/// signature of an exceptional point.
pub fn biorthogonal_decompose<T: Real>(
    h: &CMatrix<T>,
    psi: &CVector<T>,
) -> Result<ModeCoefficients<T>> {
    if h.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            context: "biorthogonal decomposition",
            expected: h.dim(),
            got: psi.dim(),
        });
    }
    let hnorm = h.fro_norm();
    let asym = h.sub(&h.transpose())?.fro_norm();
    let denom = if hnorm > T::zero() { hnorm } else { T::one() };
    if asym / denom > tol::<T>(1e-12) {
        return Err(Error::NotSymmetric {
            residual: (asym / denom).to_f64().unwrap_or(f64::NAN),
        });
    }

    let d = eig_ungated(h)?;
    let n = h.dim();
    let mut coefficients = Vec::with_capacity(n);
    let mut self_products = Vec::with_capacity(n);
    for mu in 0..n {
        let v = d.right_vectors.col(mu);
        let sp = v.dot_transpose(&v)?;
        if sp.norm() < tol::<T>(1e-6) {
            return Err(Error::SelfOrthogonalMode {
                mode: mu,
                magnitude: sp.norm().to_f64().unwrap_or(f64::NAN),
            });
        }
        let c = v.dot_transpose(psi)? / sp;
        coefficients.push(c);
        self_products.push(sp);
    }
    let mut recon = CVector::zeros(n);
    for mu in 0..n {
        recon = recon.add(&d.right_vectors.col(mu).scale(coefficients[mu]))?;
    }
    let reconstruction_residual = recon.sub(psi)?.norm();
    Ok(ModeCoefficients {
        coefficients,
        self_products,
        reconstruction_residual,
    })
}

/// Orthonormal basis (Frobenius inner product) of the Hermitian solutions of
/// `eta H = H^dagger eta`.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis<T: Real> {
    /// Hermitian matrices with unit Frobenius norm, pairwise orthogonal.
    pub basis: Vec<CMatrix<T>>,
    pub dimension: usize,
    /// `|| eta H - H^dagger eta ||_F` per basis element.
    pub residuals: Vec<T>,
}

impl<T: Real> IntertwinerBasis<T> {
    /// Frobenius distance from `m` (normalized) to its projection onto the
    /// basis span; near zero means `m` is (a multiple of) an intertwiner in
    /// the span.
    pub fn projection_residual(&self, m: &CMatrix<T>) -> T {
        let norm = m.fro_norm();
        if norm == T::zero() {
            return T::zero();
        }
        let mut rem = m.scale(Complex::new(T::one() / norm, T::zero()));
        for b in &self.basis {
            let coef = frobenius_inner(b, &rem);
            rem = rem
                .sub(&b.scale(coef))
                .expect("basis and target share dimensions");
        }
        rem.fro_norm()
    }
}

fn frobenius_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let n = a.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            acc = acc + a[(i, j)].conj() * b[(i, j)];
        }
    }
    acc
}

/// Enumerates all Hermitian `eta` with `eta H = H^dagger eta` by solving the
/// homogeneous linear system over the `N^2` real parameters of a Hermitian
/// matrix (rank-revealing elimination, pivot threshold 1e-10 relative), then
/// orthonormalizing the nullspace in the Frobenius inner product.
pub fn find_intertwiners<T: Real>(h: &CMatrix<T>) -> Result<IntertwinerBasis<T>> {
    let n = h.dim();
    if n > 16 {
        return Err(Error::InvalidSpec {
            field: "dim",
            message: format!("intertwiner search supports dimension <= 16, got {n}"),
        });
    }
    if !h.is_finite() {
        return Err(Error::NonFiniteInput {
            operation: "intertwiner search",
        });
    }
    let params = hermitian_parameter_basis::<T>(n);
    let n_params = params.len();
    let hd = h.dagger();

    // Row-major real system: 2 N^2 equations (re and im of every entry of
    // eta H - H^dagger eta) by N^2 unknowns.
    let mut rows = vec![vec![T::zero(); n_params]; 2 * n * n];
    for (col, b) in params.iter().enumerate() {
        let m = b.mul(h)?.sub(&hd.mul(b)?)?;
        for i in 0..n {
            for j in 0..n {
                let e = m[(i, j)];
                rows[2 * (i * n + j)][col] = e.re;
                rows[2 * (i * n + j) + 1][col] = e.im;
            }
        }
    }

    let null_vectors = nullspace(&mut rows, n_params, r::<T>(1e-10));

    // Materialize eta candidates and Gram-Schmidt them in the Frobenius
    // metric (the parameter basis is not Frobenius-orthonormal: off-diagonal
    // parameter matrices have norm sqrt(2)).
    let mut basis: Vec<CMatrix<T>> = Vec::new();
    let mut residuals: Vec<T> = Vec::new();
    for x in &null_vectors {
        let mut eta = CMatrix::zeros(n);
        for (k, b) in params.iter().enumerate() {
            if x[k] != T::zero() {
                eta = eta.add(&b.scale(Complex::new(x[k], T::zero())))?;
            }
        }
        for prev in &basis {
            let coef = frobenius_inner(prev, &eta);
            eta = eta.sub(&prev.scale(coef))?;
        }
        let norm = eta.fro_norm();
        if norm < tol::<T>(1e-8) {
            continue;
        }
        eta = eta.scale(Complex::new(T::one() / norm, T::zero()));
        let res = eta.mul(h)?.sub(&hd.mul(&eta)?)?.fro_norm();
        residuals.push(res);
        basis.push(eta);
    }

    Ok(IntertwinerBasis {
        dimension: basis.len(),
        basis,
        residuals,
    })
}

/// Real basis of Hermitian matrices: `E_ii`, then for each `i < j` the pair
/// `E_ij + E_ji` and `i(E_ij - E_ji)`.
fn hermitian_parameter_basis<T: Real>(n: usize) -> Vec<CMatrix<T>> {
    let one = T::one();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = CMatrix::zeros(n);
        m[(i, i)] = Complex::new(one, T::zero());
        out.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut re = CMatrix::zeros(n);
            re[(i, j)] = Complex::new(one, T::zero());
            re[(j, i)] = Complex::new(one, T::zero());
            out.push(re);
            let mut im = CMatrix::zeros(n);
            im[(i, j)] = Complex::new(T::zero(), one);
            im[(j, i)] = Complex::new(T::zero(), -one);
            out.push(im);
        }
    }
    out
}

/// Nullspace basis of a real matrix by full-pivot Gauss-Jordan elimination.
/// Pivots smaller than `rel_tol` times the largest pivot terminate the rank
/// sweep. Deterministic: ties resolved by lowest row/column index.
fn nullspace<T: Real>(rows: &mut [Vec<T>], n_cols: usize, rel_tol: T) -> Vec<Vec<T>> {
    let n_rows = rows.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut first_pivot = T::zero();
    let mut rank = 0usize;
    let mut col_is_pivot = vec![false; n_cols];

    loop {
        // Full pivot over the untouched block.
        let mut best = T::zero();
        let mut best_rc = (0usize, 0usize);
        for i in rank..n_rows {
            for (j, flag) in col_is_pivot.iter().enumerate() {
                if *flag {
                    continue;
                }
                let v = rows[i][j].abs();
                if v > best {
                    best = v;
                    best_rc = (i, j);
                }
            }
        }
        if rank == 0 {
            first_pivot = best;
        }
        if best == T::zero() || (rank > 0 && best <= rel_tol * first_pivot) {
            break;
        }
        let (pr, pc) = best_rc;
        rows.swap(rank, pr);
        let piv = rows[rank][pc];
        for j in 0..n_cols {
            rows[rank][j] = rows[rank][j] / piv;
        }
        for i in 0..n_rows {
            if i == rank {
                continue;
            }
            let f = rows[i][pc];
            if f != T::zero() {
                for j in 0..n_cols {
                    let sub = f * rows[rank][j];
                    rows[i][j] = rows[i][j] - sub;
                }
            }
        }
        col_is_pivot[pc] = true;
        pivot_cols.push(pc);
        rank += 1;
        if rank == n_cols || rank == n_rows {
            break;
        }
    }

    let mut null_vectors = Vec::new();
    for free in 0..n_cols {
        if col_is_pivot[free] {
            continue;
        }
        let mut x = vec![T::zero(); n_cols];
        x[free] = T::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = -rows[row][free];
        }
        null_vectors.push(x);
    }
    null_vectors
}
