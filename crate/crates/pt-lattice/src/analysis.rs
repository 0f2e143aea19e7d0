//! Spectral and dynamical diagnostics: locate the gain/loss strength where
//! eigenvalues first leave the real axis (and where the complex count
//! saturates), detect phase locking in a trajectory, and estimate
//! oscillation periods below threshold.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::evolve::PhaseSeries;
use crate::linalg::eig_values;
use crate::models::LatticeSpec;
use crate::scalar::{r, tol, Real};

/// Default trailing-window fraction for locking detection.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.2;
/// Default locking tolerance, in units of pi.
pub const DEFAULT_LOCK_TOL: f64 = 0.02;
/// Snap window around multiples of pi/2, in units of pi.
pub const SNAP_TOL: f64 = 0.05;

/// Result of a gain/loss threshold scan.
#[derive(Clone, Debug)]
pub struct ThresholdResult<T: Real> {
    /// Smallest gamma with a complex eigenvalue; `None` when none appears up
    /// to the scanned maximum.
    pub gamma_pt: Option<T>,
    /// Smallest gamma at which the complex-eigenvalue count attains its
    /// maximum over the scanned range.
    pub gamma_full: Option<T>,
    /// `(gamma, complex count)` at every scan point.
    pub complex_count_curve: Vec<(T, usize)>,
    /// Width of the final bisection bracket.
    pub bracket_width: T,
}

/// Scans gamma over `[0, gamma_max]` on a 200-point grid, counting
/// eigenvalues with `|Im| > 1e-8 J`, then bisects the first
/// reality-breaking bracket down to `tol` (and likewise the bracket where
/// the count first reaches its maximum).
pub fn pt_threshold<T: Real>(
    spec: &LatticeSpec<T>,
    gamma_max: T,
    tol_gamma: T,
) -> Result<ThresholdResult<T>> {
    if !(gamma_max.is_finite() && gamma_max > T::zero()) {
        return Err(Error::InvalidSpec {
            field: "gamma_max",
            message: "scan maximum must be finite and positive".into(),
        });
    }
    if !(tol_gamma.is_finite() && tol_gamma > T::zero()) {
        return Err(Error::InvalidSpec {
            field: "tol",
            message: "bisection tolerance must be finite and positive".into(),
        });
    }
    let count_at = |g: T| -> Result<usize> {
        let h = spec.clone().with_gamma(g).hamiltonian()?;
        let vals = eig_values(&h)?;
        let cut = tol::<T>(1e-8) * spec.j;
        Ok(vals.iter().filter(|l| l.im.abs() > cut).count())
    };

    const GRID: usize = 200;
    let mut curve = Vec::with_capacity(GRID);
    for i in 0..GRID {
        let g = gamma_max * r::<T>(i as f64) / r::<T>((GRID - 1) as f64);
        curve.push((g, count_at(g)?));
    }

    let first_complex = curve.iter().position(|&(_, c)| c > 0);
    let Some(i) = first_complex else {
        return Ok(ThresholdResult {
            gamma_pt: None,
            gamma_full: None,
            complex_count_curve: curve,
            bracket_width: T::zero(),
        });
    };
    // gamma = 0 is Hermitian for every variant, so the first complex count
    // sits strictly inside the grid.
    debug_assert!(i > 0);

    let bisect = |mut lo: T, mut hi: T, pred: &dyn Fn(usize) -> bool| -> Result<(T, T)> {
        while hi - lo > tol_gamma {
            let mid = (lo + hi) * r::<T>(0.5);
            if pred(count_at(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(((lo + hi) * r::<T>(0.5), hi - lo))
    };

    let (gamma_pt, width_pt) = bisect(curve[i - 1].0, curve[i].0, &|c| c > 0)?;

    let cmax = curve.iter().map(|&(_, c)| c).max().unwrap_or(0);
    let jfull = curve
        .iter()
        .position(|&(_, c)| c == cmax)
        .expect("max exists");
    let (gamma_full, width_full) = bisect(curve[jfull - 1].0, curve[jfull].0, &|c| c >= cmax)?;

    Ok(ThresholdResult {
        gamma_pt: Some(gamma_pt),
        gamma_full: Some(gamma_full),
        complex_count_curve: curve,
        bracket_width: if width_pt > width_full {
            width_pt
        } else {
            width_full
        },
    })
}

/// Per-bond locking verdict.
#[derive(Clone, Debug)]
pub struct BondLocking<T: Real> {
    /// Circular spread over the trailing window stayed below tolerance.
    pub saturated: bool,
    /// Circular mean of the trailing window, units of pi; `None` when every
    /// window sample was masked (undetermined).
    pub value: Option<T>,
    /// `value` snapped to the nearest multiple of 1/2 (units of pi) when
    /// within the snap window; in {0, 0.5, 1, 1.5}.
    pub snapped: Option<T>,
    /// Earliest time from which the spread criterion holds through the end
    /// of the run; only reported for saturated bonds.
    pub convergence_time: Option<T>,
    /// Spread actually measured over the trailing window, units of pi.
    pub window_spread: Option<T>,
}

impl<T: Real> BondLocking<T> {
    /// True when every sample in the window was masked.
    pub fn undetermined(&self) -> bool {
        self.value.is_none()
    }
}

/// Locking verdicts for all bonds plus the parameters used.
#[derive(Clone, Debug)]
pub struct LockingReport<T: Real> {
    pub bonds: Vec<BondLocking<T>>,
    pub window_fraction: T,
    pub tolerance: T,
}

impl<T: Real> LockingReport<T> {
    pub fn all_saturated(&self) -> bool {
        self.bonds.iter().all(|b| b.saturated)
    }

    pub fn snapped_values(&self) -> Vec<Option<T>> {
        self.bonds.iter().map(|b| b.snapped).collect()
    }

    /// Largest per-bond convergence time, when every bond saturated.
    pub fn convergence_time(&self) -> Option<T> {
        if !self.all_saturated() {
            return None;
        }
        let mut worst = T::zero();
        for b in &self.bonds {
            match b.convergence_time {
                Some(t) => {
                    if t > worst {
                        worst = t;
                    }
                }
                None => return None,
            }
        }
        Some(worst)
    }
}

/// Circular mean (units of pi, in `[0, 2)`) and mean-centered spread
/// (max deviation minus min deviation) of angles given in units of pi.
fn circular_stats<T: Real>(vals: &[T]) -> (T, T) {
    let pi = T::PI();
    let two = r::<T>(2.0);
    let mut z = Complex::new(T::zero(), T::zero());
    for &v in vals {
        z = z + Complex::from_polar(T::one(), v * pi);
    }
    let mut mean = z.arg();
    if mean < T::zero() {
        mean += two * pi;
    }
    let mut dmin = T::infinity();
    let mut dmax = T::neg_infinity();
    for &v in vals {
        let mut d = v * pi - mean;
        while d <= -pi {
            d += two * pi;
        }
        while d > pi {
            d -= two * pi;
        }
        if d < dmin {
            dmin = d;
        }
        if d > dmax {
            dmax = d;
        }
    }
    let mean_pi = if mean / pi >= two {
        T::zero()
    } else {
        mean / pi
    };
    (mean_pi, (dmax - dmin) / pi)
}

/// Detects per-bond phase locking: a bond is saturated when the circular
/// spread of its unmasked trailing-window samples falls below `tol` (both in
/// units of pi). `window_fraction` sets the window as a fraction of the run.
pub fn detect_locking<T: Real>(
    ps: &PhaseSeries<T>,
    window_fraction: T,
    tol_pi: T,
) -> Result<LockingReport<T>> {
    let n = ps.len();
    if !(window_fraction > T::zero() && window_fraction <= T::one()) {
        return Err(Error::InvalidSpec {
            field: "window_fraction",
            message: "window fraction must lie in (0, 1]".into(),
        });
    }
    if !(tol_pi.is_finite() && tol_pi > T::zero()) {
        return Err(Error::InvalidSpec {
            field: "tol",
            message: "locking tolerance must be finite and positive".into(),
        });
    }
    let w = (window_fraction * r::<T>(n as f64))
        .ceil()
        .to_usize()
        .unwrap_or(0)
        .max(1)
        .min(n);
    if w < 20 {
        return Err(Error::InvalidSpec {
            field: "window_fraction",
            message: format!("trailing window holds {w} samples; at least 20 are required"),
        });
    }

    let two = r::<T>(2.0);
    let half = r::<T>(0.5);
    let snap_tol = r::<T>(SNAP_TOL);
    let mut bonds = Vec::with_capacity(ps.n_bonds());
    for b in 0..ps.n_bonds() {
        let series = &ps.theta[b];
        let masked = &ps.mask[b];
        let window: Vec<T> = (n - w..n)
            .filter(|&i| !masked[i])
            .map(|i| series[i])
            .collect();
        if window.is_empty() {
            bonds.push(BondLocking {
                saturated: false,
                value: None,
                snapped: None,
                convergence_time: None,
                window_spread: None,
            });
            continue;
        }
        let (mean, spread) = circular_stats(&window);
        let saturated = spread < tol_pi;
        let mut snapped = None;
        for k in 0..=4 {
            let mult = half * r::<T>(k as f64);
            let mut d = (mean - mult).abs();
            if two - d < d {
                d = two - d;
            }
            if d < snap_tol {
                let folded = if mult >= two { mult - two } else { mult };
                snapped = Some(folded);
                break;
            }
        }
        let convergence_time = if saturated {
            first_locked_suffix(series, masked, tol_pi).map(|idx| ps.dt * r::<T>(idx as f64))
        } else {
            None
        };
        bonds.push(BondLocking {
            saturated,
            value: Some(mean),
            snapped,
            convergence_time,
            window_spread: Some(spread),
        });
    }
    Ok(LockingReport {
        bonds,
        window_fraction,
        tolerance: tol_pi,
    })
}

/// Smallest start index whose suffix of unmasked samples all fit in a
/// circular arc narrower than `tol_pi` (units of pi). Scans forward with an
/// early abort as soon as a suffix provably exceeds the tolerance.
fn first_locked_suffix<T: Real>(series: &[T], masked: &[bool], tol_pi: T) -> Option<usize> {
    let n = series.len();
    let two = r::<T>(2.0);
    'outer: for start in 0..n {
        let mut center: Option<T> = None;
        let mut dmin = T::zero();
        let mut dmax = T::zero();
        for i in start..n {
            if masked[i] {
                continue;
            }
            let c = match center {
                Some(c) => c,
                None => {
                    center = Some(series[i]);
                    series[i]
                }
            };
            let mut d = series[i] - c;
            while d <= -T::one() {
                d += two;
            }
            while d > T::one() {
                d -= two;
            }
            if d < dmin {
                dmin = d;
            }
            if d > dmax {
                dmax = d;
            }
            if dmax - dmin >= tol_pi {
                continue 'outer;
            }
        }
        if center.is_some() {
            return Some(start);
        }
        return None;
    }
    None
}

/// Oscillation-period estimate from the autocorrelation of a phase series.
#[derive(Clone, Debug)]
pub struct PeriodEstimate<T: Real> {
    /// `None` when no prominent autocorrelation peak exists.
    pub period: Option<T>,
    /// Normalized height of the accepted peak, clamped to [0, 1].
    pub confidence: T,
}

/// Estimates the oscillation period of bond `bond` as the lag of the first
/// prominent maximum of the autocorrelation of the mean-subtracted series,
/// refined by parabolic interpolation. A maximum is prominent when its
/// normalized height reaches `max(0.2, 0.6 * tallest peak)`.
pub fn estimate_period<T: Real>(ps: &PhaseSeries<T>, bond: usize) -> Result<PeriodEstimate<T>> {
    if bond >= ps.n_bonds() {
        return Err(Error::DimensionMismatch {
            context: "period estimate",
            expected: ps.n_bonds(),
            got: bond,
        });
    }
    let masked_count = ps.mask[bond].iter().filter(|&&m| m).count();
    if masked_count > 0 {
        return Err(Error::InvalidSpec {
            field: "bond",
            message: format!(
                "phase series for bond {bond} is masked at {masked_count} samples; the \
                 autocorrelation needs a gap-free series"
            ),
        });
    }
    let series = &ps.theta[bond];
    let n = series.len();
    if n < 8 {
        return Err(Error::InvalidSpec {
            field: "bond",
            message: format!("series of {n} samples is too short for a period estimate"),
        });
    }
    let mean = series.iter().copied().sum::<T>() / r::<T>(n as f64);
    let x: Vec<T> = series.iter().map(|&v| v - mean).collect();
    let mut ac = vec![T::zero(); n];
    for lag in 0..n {
        let mut s = T::zero();
        for i in 0..n - lag {
            s += x[i] * x[i + lag];
        }
        ac[lag] = s;
    }
    if ac[0] <= T::zero() {
        return Ok(PeriodEstimate {
            period: None,
            confidence: T::zero(),
        });
    }
    let r0 = ac[0];
    for v in ac.iter_mut() {
        *v = *v / r0;
    }

    let mut peaks: Vec<usize> = Vec::new();
    for lag in 1..n - 1 {
        if ac[lag] > ac[lag - 1] && ac[lag] >= ac[lag + 1] {
            peaks.push(lag);
        }
    }
    let tallest = peaks
        .iter()
        .map(|&l| ac[l])
        .fold(T::neg_infinity(), |a, b| if b > a { b } else { a });
    if peaks.is_empty() || tallest <= T::zero() {
        return Ok(PeriodEstimate {
            period: None,
            confidence: T::zero(),
        });
    }
    let cut = r::<T>(0.2).max(r::<T>(0.6) * tallest);
    let Some(&lag) = peaks.iter().find(|&&l| ac[l] >= cut) else {
        return Ok(PeriodEstimate {
            period: None,
            confidence: T::zero(),
        });
    };

    // Parabolic refinement around the discrete peak.
    let (ym, y0, yp) = (ac[lag - 1], ac[lag], ac[lag + 1]);
    let den = ym - y0 - y0 + yp;
    let shift = if den < T::zero() {
        (ym - yp) / (r::<T>(2.0) * den)
    } else {
        T::zero()
    };
    let shift = shift.max(-r::<T>(0.5)).min(r::<T>(0.5));
    let period = (r::<T>(lag as f64) + shift) * ps.dt;
    let confidence = ac[lag].max(T::zero()).min(T::one());
    Ok(PeriodEstimate {
        period: Some(period),
        confidence,
    })
}
