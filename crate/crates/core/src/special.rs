//! Inverse error function.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_HALLEY_STEPS: usize = 8;

/// Inverse of the error function on (-1, 1).
///
/// A rational initial guess (Giles' single-precision approximation, relative
/// error around 1e-7) is polished with Halley steps until they stall. They run on
/// `erf` in the centre and on `erfc` once |p| > 0.5, where the complement is
/// exact and the tail stays well conditioned. The result is odd in `p`
/// bit-for-bit because only |p| is ever processed.
pub fn inverse_erf<T: Scalar>(p: T) -> Result<T> {
    if p.is_nan() || p.abs() >= T::one() {
        return Err(Error::Domain(format!(
            "inverse_erf requires |p| < 1, got {}",
            p
        )));
    }
    if p == T::zero() {
        return Ok(T::zero());
    }
    let a = p.abs();
    let mut t = initial_guess(a);
    let two_over_sqrt_pi = T::FRAC_2_SQRT_PI();
    let half = T::lit(0.5);
    let tiny = T::lit(4.0) * T::epsilon();
    for _ in 0..MAX_HALLEY_STEPS {
        let slope = two_over_sqrt_pi * (-t * t).exp();
        // f / f' for f(t) = erf(t) - a, evaluated through erfc in the tail
        let ratio = if a > half {
            -(t.erfc() - (T::one() - a)) / slope
        } else {
            (t.erf() - a) / slope
        };
        // Halley: f'' / f' = -2t
        let step = ratio / (T::one() + t * ratio);
        t = t - step;
        if step.abs() <= tiny * t.abs() {
            break;
        }
    }
    Ok(if p < T::zero() { -t } else { t })
}

fn initial_guess<T: Scalar>(x: T) -> T {
    let one = T::one();
    let w = -((one - x) * (one + x)).ln();
    let horner = |w: T, coeffs: &[f64]| {
        coeffs
            .iter()
            .fold(T::zero(), |acc, &c| acc * w + T::lit(c))
    };
    let p = if w < T::lit(5.0) {
        horner(
            w - T::lit(2.5),
            &[
                2.810_226_36e-08,
                3.432_739_39e-07,
                -3.523_387_7e-06,
                -4.391_506_54e-06,
                0.000_218_580_87,
                -0.001_253_725_03,
                -0.004_177_681_64,
                0.246_640_727,
                1.501_409_41,
            ],
        )
    } else {
        horner(
            w.sqrt() - T::lit(3.0),
            &[
                -0.000_200_214_257,
                0.000_100_950_558,
                0.001_349_343_22,
                -0.003_673_428_44,
                0.005_739_507_73,
                -0.007_622_461_3,
                0.009_438_870_47,
                1.001_674_06,
                2.832_976_82,
            ],
        )
    };
    p * x
}
