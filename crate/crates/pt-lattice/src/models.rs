//! Lattice Hamiltonian construction: a declarative spec names one of seven
//! tight-binding variants with balanced gain/loss; `hamiltonian` realizes it
//! as a complex-symmetric matrix in the site basis.
//!
//! Site indices are 1-based in `LatticeSpec` (matching the physics
//! convention `k = 1..N`) and 0-based in matrix storage.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::scalar::{r, Real};

/// The seven lattice families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Two sites: `-J sigma_x + i gamma sigma_z`.
    Dimer,
    /// Three sites: `-J S_x + i gamma S_z` in the spin-1 representation.
    Trimer,
    /// Uniform open chain, gain at `m0`, loss at the mirror site.
    UniformChain,
    /// Open chain with alternating bond strengths `-J`, `-J(1-delta)`;
    /// bond 1 (sites 1-2) is the strong one.
    Ssh,
    /// Open chain with a period-`p` tunneling profile.
    Aah,
    /// Perfect-state-transfer couplings `-J sqrt(k(N-k))/2` with a linear
    /// imaginary potential `i gamma (k-1-S)`, `S = (N-1)/2`.
    Pst,
    /// Ring with tunneling `J` on the arc from the gain site to the loss
    /// site (increasing index) and `J'` elsewhere, including the wraparound
    /// bond `N -> 1`.
    TwoTunnelingRing,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Dimer,
        Variant::Trimer,
        Variant::UniformChain,
        Variant::Ssh,
        Variant::Aah,
        Variant::Pst,
        Variant::TwoTunnelingRing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Dimer => "dimer",
            Variant::Trimer => "trimer",
            Variant::UniformChain => "chain",
            Variant::Ssh => "ssh",
            Variant::Aah => "aah",
            Variant::Pst => "pst",
            Variant::TwoTunnelingRing => "ring",
        }
    }

    /// True for the open/ring chains that carry a movable gain site.
    pub fn uses_gain_site(self) -> bool {
        matches!(
            self,
            Variant::UniformChain | Variant::Ssh | Variant::Aah | Variant::TwoTunnelingRing
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimer" => Ok(Variant::Dimer),
            "trimer" => Ok(Variant::Trimer),
            "chain" => Ok(Variant::UniformChain),
            "ssh" => Ok(Variant::Ssh),
            "aah" => Ok(Variant::Aah),
            "pst" => Ok(Variant::Pst),
            "ring" => Ok(Variant::TwoTunnelingRing),
            other => Err(Error::InvalidSpec {
                field: "model",
                message: format!(
                    "unknown model `{other}`; expected one of dimer, trimer, chain, ssh, aah, pst, ring"
                ),
            }),
        }
    }
}

/// Declarative description of a lattice.
///
/// Energies are in units of `J` and times in `1/J`. Fields not used by the
/// chosen variant are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec<T: Real> {
    pub variant: Variant,
    /// Site count.
    pub n: usize,
    /// Tunneling energy; the unit of energy.
    pub j: T,
    /// Gain/loss strength. Negative values are allowed only for `Pst`,
    /// where the sign selects which half of the lattice carries gain.
    pub gamma: T,
    /// Gain-site index, 1-based. Used by chain/ring variants.
    pub m0: usize,
    /// Bond-strength differential for `Ssh`.
    pub delta: T,
    /// Period-`p` tunneling magnitudes for `Aah` (absolute energies).
    pub profile: Vec<T>,
    /// Second tunneling energy for `TwoTunnelingRing`.
    pub jprime: T,
}

impl<T: Real> LatticeSpec<T> {
    pub fn new(variant: Variant, n: usize) -> Self {
        LatticeSpec {
            variant,
            n,
            j: T::one(),
            gamma: T::zero(),
            m0: 1,
            delta: T::zero(),
            profile: Vec::new(),
            jprime: T::zero(),
        }
    }

    pub fn with_j(mut self, j: T) -> Self {
        self.j = j;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_gain_site(mut self, m0: usize) -> Self {
        self.m0 = m0;
        self
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_profile(mut self, profile: Vec<T>) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_jprime(mut self, jprime: T) -> Self {
        self.jprime = jprime;
        self
    }

    /// Loss-site index `N + 1 - m0`, 1-based.
    pub fn mirror_site(&self) -> usize {
        self.n + 1 - self.m0
    }

    /// Checks every field; returns non-fatal warnings (currently only for
    /// tunneling profiles that break mirror symmetry).
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.n < 2 {
            return Err(Error::InvalidSpec {
                field: "n",
                message: format!("site count must be at least 2, got {}", self.n),
            });
        }
        match self.variant {
            Variant::Dimer if self.n != 2 => {
                return Err(Error::InvalidSpec {
                    field: "n",
                    message: format!("dimer fixes n = 2, got {}", self.n),
                });
            }
            Variant::Trimer if self.n != 3 => {
                return Err(Error::InvalidSpec {
                    field: "n",
                    message: format!("trimer fixes n = 3, got {}", self.n),
                });
            }
            _ => {}
        }
        if !(self.j.is_finite() && self.j > T::zero()) {
            return Err(Error::InvalidSpec {
                field: "j",
                message: "tunneling energy must be finite and positive".into(),
            });
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidSpec {
                field: "gamma",
                message: "gain/loss strength must be finite".into(),
            });
        }
        if self.gamma < T::zero() && self.variant != Variant::Pst {
            return Err(Error::InvalidSpec {
                field: "gamma",
                message: "negative gain/loss strength is only defined for the pst variant".into(),
            });
        }
        if self.variant.uses_gain_site() {
            if self.m0 < 1 || self.m0 > self.n {
                return Err(Error::InvalidSpec {
                    field: "m0",
                    message: format!("gain site must lie in 1..={}, got {}", self.n, self.m0),
                });
            }
            if self.m0 == self.mirror_site() {
                return Err(Error::InvalidSpec {
                    field: "m0",
                    message: format!(
                        "gain site {} coincides with its mirror; gain and loss must sit on \
                         distinct sites",
                        self.m0
                    ),
                });
            }
        }
        if self.variant == Variant::Ssh
            && !(self.delta.is_finite() && self.delta >= T::zero() && self.delta <= T::one())
        {
            return Err(Error::InvalidSpec {
                field: "delta",
                message: "bond differential must lie in [0, 1]".into(),
            });
        }
        if self.variant == Variant::Aah {
            let p = self.profile.len();
            if p < 3 {
                return Err(Error::InvalidSpec {
                    field: "profile",
                    message: format!("tunneling profile needs at least 3 entries, got {p}"),
                });
            }
            if !self.profile.iter().all(|v| v.is_finite() && *v > T::zero()) {
                return Err(Error::InvalidSpec {
                    field: "profile",
                    message: "tunneling profile entries must be finite and positive".into(),
                });
            }
            if (self.n + 1) % p != 0 {
                warnings.push(format!(
                    "profile period {p} does not divide n+1 = {}; the tunneling profile is not \
                     mirror-symmetric and the lattice loses its parity symmetry",
                    self.n + 1
                ));
            }
            if self.m0 % p != 0 {
                warnings.push(format!(
                    "gain site {} is not a multiple of the profile period {p}",
                    self.m0
                ));
            }
        }
        if self.variant == Variant::TwoTunnelingRing
            && !(self.jprime.is_finite() && self.jprime >= T::zero())
        {
            return Err(Error::InvalidSpec {
                field: "jprime",
                message: "second tunneling energy must be finite and non-negative".into(),
            });
        }
        Ok(warnings)
    }

    /// Builds the Hamiltonian. Validation errors surface here as well.
    pub fn hamiltonian(&self) -> Result<CMatrix<T>> {
        self.validate()?;
        let n = self.n;
        let j = self.j;
        let mut h = CMatrix::zeros(n);
        let bond = |h: &mut CMatrix<T>, k: usize, v: T| {
            // Bond k couples sites k and k+1 (1-based).
            h[(k - 1, k)] = Complex::new(-v, T::zero());
            h[(k, k - 1)] = Complex::new(-v, T::zero());
        };
        match self.variant {
            Variant::Dimer => {
                bond(&mut h, 1, j);
                h[(0, 0)] = Complex::new(T::zero(), self.gamma);
                h[(1, 1)] = Complex::new(T::zero(), -self.gamma);
            }
            Variant::Trimer => {
                let s = j / r::<T>(2.0).sqrt();
                bond(&mut h, 1, s);
                bond(&mut h, 2, s);
                h[(0, 0)] = Complex::new(T::zero(), self.gamma);
                h[(2, 2)] = Complex::new(T::zero(), -self.gamma);
            }
            Variant::Pst => {
                let half = r::<T>(0.5);
                for k in 1..n {
                    let kk = r::<T>(k as f64) * r::<T>((n - k) as f64);
                    bond(&mut h, k, j * kk.sqrt() * half);
                }
                let s = r::<T>((n - 1) as f64) * half;
                for k in 1..=n {
                    let site = r::<T>((k - 1) as f64) - s;
                    h[(k - 1, k - 1)] = Complex::new(T::zero(), self.gamma * site);
                }
            }
            Variant::UniformChain | Variant::Ssh | Variant::Aah | Variant::TwoTunnelingRing => {
                let mbar = self.mirror_site();
                for k in 1..n {
                    let v = match self.variant {
                        Variant::UniformChain => j,
                        Variant::Ssh => {
                            if k % 2 == 1 {
                                j
                            } else {
                                j * (T::one() - self.delta)
                            }
                        }
                        Variant::Aah => self.profile[(k - 1) % self.profile.len()],
                        Variant::TwoTunnelingRing => {
                            if self.m0 <= k && k < mbar {
                                j
                            } else {
                                self.jprime
                            }
                        }
                        _ => unreachable!(),
                    };
                    bond(&mut h, k, v);
                }
                if self.variant == Variant::TwoTunnelingRing {
                    h[(n - 1, 0)] = Complex::new(-self.jprime, T::zero());
                    h[(0, n - 1)] = Complex::new(-self.jprime, T::zero());
                }
                h[(self.m0 - 1, self.m0 - 1)] = Complex::new(T::zero(), self.gamma);
                h[(mbar - 1, mbar - 1)] = Complex::new(T::zero(), -self.gamma);
            }
        }
        Ok(h)
    }
}

/// Site-reflection operator `k -> N + 1 - k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityOperator {
    n: usize,
}

impl ParityOperator {
    pub fn new(n: usize) -> Self {
        ParityOperator { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Anti-diagonal permutation matrix.
    pub fn matrix<T: Real>(&self) -> CMatrix<T> {
        let mut p = CMatrix::zeros(self.n);
        for i in 0..self.n {
            p[(i, self.n - 1 - i)] = Complex::new(T::one(), T::zero());
        }
        p
    }

    /// Applies the reflection to a state (reverses the site order).
    pub fn reverse<T: Real>(&self, v: &CVector<T>) -> Result<CVector<T>> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch {
                context: "parity application",
                expected: self.n,
                got: v.dim(),
            });
        }
        let mut out = CVector::zeros(self.n);
        for i in 0..self.n {
            out[i] = v[self.n - 1 - i];
        }
        Ok(out)
    }
}

/// Constructs the parity operator for `n` sites.
pub fn parity_matrix(n: usize) -> ParityOperator {
    ParityOperator::new(n)
}

/// Frobenius norm of `P conj(H) P - H`; zero (to machine precision) exactly
/// when `H` commutes with the combined reflection-conjugation symmetry.
pub fn check_pt_symmetry<T: Real>(h: &CMatrix<T>, p: &ParityOperator) -> Result<T> {
    if h.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            context: "PT symmetry check",
            expected: p.dim(),
            got: h.dim(),
        });
    }
    let n = h.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for jj in 0..n {
            let mirrored = h[(n - 1 - i, n - 1 - jj)].conj();
            let d = mirrored - h[(i, jj)];
            acc += d.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}
