//! Matrix exponential via order-13 Padé approximation with scaling and
//! squaring. The input is scaled by a power of two until its 1-norm is at
//! most 0.5, well inside the approximant's accuracy region, then the result
//! is squared back up.

use num_complex::Complex;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{r, Real};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Computes `exp(a)`.
pub fn expm<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !a.is_finite() {
        return Err(Error::NonFiniteInput {
            operation: "matrix exponential",
        });
    }
    let n = a.dim();
    let norm = a.one_norm();
    let mut squarings = 0u32;
    let mut scaled = norm;
    let half = r::<T>(0.5);
    while scaled > half {
        scaled = scaled * half;
        squarings += 1;
        if squarings > 64 {
            return Err(Error::NumericalFailure {
                operation: "matrix exponential",
                step: format!(
                    "input norm {:e} too large to scale",
                    norm.to_f64().unwrap_or(f64::NAN)
                ),
            });
        }
    }
    let s = Complex::new(r::<T>(0.5f64.powi(squarings as i32)), T::zero());
    let a = a.scale(s);

    let b: Vec<Complex<T>> = PADE13
        .iter()
        .map(|&c| Complex::new(r::<T>(c), T::zero()))
        .collect();
    let id = CMatrix::identity(n);
    let a2 = a.mul(&a)?;
    let a4 = a2.mul(&a2)?;
    let a6 = a4.mul(&a2)?;

    // u = a (a6 (b13 a6 + b11 a4 + b9 a2) + b7 a6 + b5 a4 + b3 a2 + b1 I)
    let inner_u = a6
        .scale(b[13])
        .add(&a4.scale(b[11]))?
        .add(&a2.scale(b[9]))?;
    let u = a.mul(
        &a6.mul(&inner_u)?
            .add(&a6.scale(b[7]))?
            .add(&a4.scale(b[5]))?
            .add(&a2.scale(b[3]))?
            .add(&id.scale(b[1]))?,
    )?;
    // v = a6 (b12 a6 + b10 a4 + b8 a2) + b6 a6 + b4 a4 + b2 a2 + b0 I
    let inner_v = a6
        .scale(b[12])
        .add(&a4.scale(b[10]))?
        .add(&a2.scale(b[8]))?;
    let v = a6
        .mul(&inner_v)?
        .add(&a6.scale(b[6]))?
        .add(&a4.scale(b[4]))?
        .add(&a2.scale(b[2]))?
        .add(&id.scale(b[0]))?;

    // exp(a) ≈ (v - u)^{-1} (v + u), then undo the scaling by squaring.
    let num = v.add(&u)?;
    let den = v.sub(&u)?;
    let mut e = den.solve(&num).map_err(|err| match err {
        Error::NumericalFailure { step, .. } => Error::NumericalFailure {
            operation: "matrix exponential",
            step: format!("Pade denominator singular ({step})"),
        },
        other => other,
    })?;
    for _ in 0..squarings {
        e = e.mul(&e)?;
    }
    if !e.is_finite() {
        return Err(Error::NumericalFailure {
            operation: "matrix exponential",
            step: "overflow during squaring".into(),
        });
    }
    Ok(e)
}
