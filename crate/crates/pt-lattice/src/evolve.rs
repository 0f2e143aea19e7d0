//! Time evolution under `exp(-iHt)` with overflow-safe renormalization, plus
//! extraction of adjacent-site phase differences.
//!
//! States in a broken-symmetry run grow like `exp(Lambda t)`; storing them
//! raw would overflow. Every step therefore renormalizes to unit Dirac norm
//! and accumulates the log of the discarded scale, so the physical state at
//! step `i` is `exp(log_scale[i]) * states[i]` exactly.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix, CVector};
use crate::scalar::{r, tol, Real};

/// Phases with magnitude below this (on a unit-norm state) are masked.
pub const AMPLITUDE_FLOOR: f64 = 1e-9;

/// Uniform output grid `0, dt, 2 dt, ..` covering `[0, t_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid<T: Real> {
    t_max: T,
    dt: T,
    len: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_max: T, dt: T) -> Result<Self> {
        if !(t_max.is_finite() && t_max > T::zero()) {
            return Err(Error::InvalidSpec {
                field: "t_max",
                message: "final time must be finite and positive".into(),
            });
        }
        if !(dt.is_finite() && dt > T::zero() && dt <= t_max) {
            return Err(Error::InvalidSpec {
                field: "dt",
                message: "step must be finite, positive, and at most t_max".into(),
            });
        }
        let ratio = t_max / dt;
        // Nudge protects ratios like 0.15/0.05 that land just below an
        // integer in floating point.
        let nudged = ratio * (T::one() + T::epsilon() * r::<T>(8.0));
        let steps = nudged.floor().to_usize().ok_or(Error::InvalidSpec {
            field: "dt",
            message: "grid has too many points".into(),
        })?;
        if steps > 50_000_000 {
            return Err(Error::InvalidSpec {
                field: "dt",
                message: format!("grid would hold {} points", steps + 1),
            });
        }
        Ok(TimeGrid {
            t_max,
            dt,
            len: steps + 1,
        })
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Number of grid points, including `t = 0`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time_at(&self, i: usize) -> T {
        r::<T>(i as f64) * self.dt
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.len).map(|i| self.time_at(i)).collect()
    }
}

/// Trajectory of unit-norm states plus the accumulated log scale `l(t)`;
/// the physical state is `exp(l(t)) * state(t)`.
#[derive(Clone, Debug)]
pub struct StateTrajectory<T: Real> {
    pub grid: TimeGrid<T>,
    pub states: Vec<CVector<T>>,
    pub log_scale: Vec<T>,
}

impl<T: Real> StateTrajectory<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.dim())
    }
}

/// Adjacent-site phase differences `theta_k = phi_k - phi_{k-1}` for
/// `k = 2..N`, stored in units of pi on `[0, 2)`; `theta[b]` is the series
/// for bond `b` (0-based, bond `b` couples sites `b+1` and `b+2`).
#[derive(Clone, Debug)]
pub struct PhaseSeries<T: Real> {
    pub dt: T,
    pub theta: Vec<Vec<T>>,
    pub mask: Vec<Vec<bool>>,
}

impl<T: Real> PhaseSeries<T> {
    pub fn n_bonds(&self) -> usize {
        self.theta.len()
    }

    /// Number of time samples.
    pub fn len(&self) -> usize {
        self.theta.first().map_or(0, |b| b.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Random state with amplitudes uniform on (0, 1] and phases uniform on
/// (0, 2 pi], Dirac-normalized. Deterministic per seed, and identical across
/// scalar types because the draws happen at `f64`.
pub fn random_state<T: Real>(n: usize, seed: u64) -> CVector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<f64> = (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let phases: Vec<f64> = (0..n)
        .map(|_| (1.0 - rng.gen::<f64>()) * 2.0 * std::f64::consts::PI)
        .collect();
    let mut v = CVector::zeros(n);
    for i in 0..n {
        v[i] = Complex::from_polar(r::<T>(amps[i]), r::<T>(phases[i]));
    }
    let norm = v.norm();
    v.scale(Complex::new(T::one() / norm, T::zero()))
}

/// Closed-form dimer propagator `exp(-i H t)` for
/// `H = [[i gamma, -J], [-J, -i gamma]]`:
/// `cos(lambda t) I - i sin(lambda t)/lambda H` with
/// `lambda = sqrt(J^2 - gamma^2)`, continued analytically through
/// `gamma = J` (linear growth) and `gamma > J` (cosh/sinh).
pub fn dimer_propagator_closed_form<T: Real>(j: T, gamma: T, t: T) -> CMatrix<T> {
    let d = j * j - gamma * gamma;
    let x = d * t * t;
    // cos_part = cos(lambda t); sinc_part = sin(lambda t)/lambda, both as
    // functions of x = (lambda t)^2 so the gamma = J limit is smooth.
    let (cos_part, sinc_part) = if x.abs() < r::<T>(1e-6) {
        let half = r::<T>(0.5);
        let c = T::one() - x * half * (T::one() - x / r::<T>(12.0) * (T::one() - x / r::<T>(30.0)));
        let s = t
            * (T::one()
                - x / r::<T>(6.0) * (T::one() - x / r::<T>(20.0) * (T::one() - x / r::<T>(42.0))));
        (c, s)
    } else if d > T::zero() {
        let l = d.sqrt();
        (((l * t).cos()), (l * t).sin() / l)
    } else {
        let m = (-d).sqrt();
        (((m * t).cosh()), (m * t).sinh() / m)
    };
    let mut u = CMatrix::zeros(2);
    let factor = Complex::new(T::zero(), -sinc_part);
    // -i sinc * H entries: diagonal i gamma / -i gamma, off-diagonal -J.
    u[(0, 0)] = Complex::new(cos_part, T::zero()) + factor * Complex::new(T::zero(), gamma);
    u[(1, 1)] = Complex::new(cos_part, T::zero()) + factor * Complex::new(T::zero(), -gamma);
    u[(0, 1)] = factor * Complex::new(-j, T::zero());
    u[(1, 0)] = factor * Complex::new(-j, T::zero());
    u
}

/// Evolves `psi0` under `exp(-iHt)` on the grid. The one-step propagator
/// `exp(-iH dt)` is computed once and applied repeatedly, renormalizing at
/// every step.
pub fn propagate<T: Real>(
    h: &CMatrix<T>,
    psi0: &CVector<T>,
    grid: &TimeGrid<T>,
) -> Result<StateTrajectory<T>> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            context: "propagation",
            expected: h.dim(),
            got: psi0.dim(),
        });
    }
    if !psi0.is_finite() {
        return Err(Error::NonFiniteInput {
            operation: "propagation",
        });
    }
    let norm0 = psi0.norm();
    if norm0 == T::zero() {
        return Err(Error::InvalidSpec {
            field: "psi0",
            message: "initial state must be nonzero".into(),
        });
    }
    let minus_i_dt = Complex::new(T::zero(), -grid.dt());
    let g = expm(&h.scale(minus_i_dt))?;

    let mut states = Vec::with_capacity(grid.len());
    let mut log_scale = Vec::with_capacity(grid.len());
    let mut s = psi0.scale(Complex::new(T::one() / norm0, T::zero()));
    let mut l = norm0.ln();
    states.push(s.clone());
    log_scale.push(l);
    for i in 1..grid.len() {
        s = g.mul_vec(&s)?;
        let nr = s.norm();
        if !(nr.is_finite() && nr > T::zero()) || !s.is_finite() {
            return Err(Error::NumericalFailure {
                operation: "propagation",
                step: format!("step {i} (t = {})", grid.time_at(i)),
            });
        }
        s = s.scale(Complex::new(T::one() / nr, T::zero()));
        l += nr.ln();
        states.push(s.clone());
        log_scale.push(l);
    }
    Ok(StateTrajectory {
        grid: grid.clone(),
        states,
        log_scale,
    })
}

/// Extracts adjacent-site phase differences from a trajectory. Entries are
/// masked wherever either amplitude sits below the floor (1e-9 relative to
/// the unit-norm state).
pub fn phases<T: Real>(traj: &StateTrajectory<T>) -> PhaseSeries<T> {
    let n = traj.dim();
    let steps = traj.len();
    let bonds = n.saturating_sub(1);
    let floor = tol::<T>(AMPLITUDE_FLOOR);
    let two_pi = T::PI() + T::PI();
    let mut theta = vec![vec![T::zero(); steps]; bonds];
    let mut mask = vec![vec![false; steps]; bonds];
    for (ti, s) in traj.states.iter().enumerate() {
        for b in 0..bonds {
            let lo = s[b];
            let hi = s[b + 1];
            if lo.norm() < floor || hi.norm() < floor {
                mask[b][ti] = true;
                continue;
            }
            let mut d = hi.arg() - lo.arg();
            while d < T::zero() {
                d += two_pi;
            }
            while d >= two_pi {
                d -= two_pi;
            }
            let in_pi = d / T::PI();
            theta[b][ti] = if in_pi >= r::<T>(2.0) {
                T::zero()
            } else {
                in_pi
            };
        }
    }
    PhaseSeries {
        dt: traj.grid.dt(),
        theta,
        mask,
    }
}
