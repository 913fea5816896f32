//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Brent's method: bisection safeguarding secant and inverse quadratic
/// interpolation steps. `f(lo)` and `f(hi)` must differ in sign.
///
/// Terminates when the bracket is narrower than `xtol` (plus a few ulps of
/// the iterate) or an exact zero is hit.
pub fn brent<T: Scalar, F>(mut f: F, lo: T, hi: T, xtol: T, max_iter: usize) -> Result<T>
where
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa * fb > T::zero() {
        return Err(Error::Bracket {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb * fc > T::zero() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + half * xtol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else if m > T::zero() {
            b + tol
        } else {
            b - tol
        };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Numerical(format!(
                "function returned NaN at {} during root refinement",
                b
            )));
        }
    }
    Err(Error::Numerical(format!(
        "root refinement did not converge in {} iterations",
        max_iter
    )))
}

/// Sign changes of `f` on `points + 1` equally spaced abscissae in [lo, hi].
///
/// Returns the sampled profile and the consecutive pairs that bracket a
/// sign change. Non-finite samples never participate in a bracket.
pub fn scan_sign_changes<T: Scalar, F>(mut f: F, lo: T, hi: T, points: usize) -> (Vec<(T, T)>, Vec<(T, T)>)
where
    F: FnMut(T) -> T,
{
    let step = (hi - lo) / T::from_usize_lossy(points);
    let profile: Vec<(T, T)> = (0..=points)
        .map(|i| {
            let x = if i == points {
                hi
            } else {
                lo + step * T::from_usize_lossy(i)
            };
            (x, f(x))
        })
        .collect();
    let brackets = profile
        .windows(2)
        .filter(|w| {
            let (f0, f1) = (w[0].1, w[1].1);
            f0.is_finite() && f1.is_finite() && (f0 == T::zero() || f0 * f1 < T::zero())
        })
        .map(|w| (w[0].0, w[1].0))
        .collect();
    (profile, brackets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn handles_flat_then_steep() {
        let r = brent(|x: f64| (x - 0.3).powi(3) * 1e6, -1.0, 1.0, 1e-14, 500).unwrap();
        assert!((r - 0.3).abs() < 1e-4);
        let r = brent(|x: f64| x.exp() - 1e-8, -40.0, 1.0, 1e-14, 500).unwrap();
        assert!((r - (1e-8f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_bracket() {
        match brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12, 100) {
            Err(Error::Bracket { f_lo, f_hi, .. }) => {
                assert_eq!(f_lo, 2.0);
                assert_eq!(f_hi, 2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scan_reports_every_crossing() {
        let (profile, brackets) = scan_sign_changes(|x: f64| (3.0 * x).sin(), 0.1, 6.0, 512);
        assert_eq!(profile.len(), 513);
        assert_eq!(brackets.len(), 5);
        assert!(brackets[0].0 < std::f64::consts::FRAC_PI_3 && std::f64::consts::FRAC_PI_3 < brackets[0].1);
    }

    #[test]
    fn scan_skips_non_finite_samples() {
        let (_, brackets) = scan_sign_changes(|x: f64| if x < 0.5 { f64::NAN } else { x - 0.75 }, 0.0, 1.0, 100);
        assert_eq!(brackets.len(), 1);
    }
}
