//! Bracketed root finding: bisection, optionally polished by Newton.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Bisect `f` on `[lo, hi]` until the bracket width falls below a few ulps.
/// Fails if `f` has the same sign at both ends.
pub(crate) fn bisect<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, what: &str) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::Bracket {
            what: what.to_string(),
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    // enough iterations to exhaust the mantissa of any sane bracket
    for _ in 0..200 {
        let mid = (a + b) * real(0.5);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok((a + b) * real(0.5))
}

/// Bisection to a loose bracket followed by Newton polishing.
pub(crate) fn bisect_then_newton<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    lo: T,
    hi: T,
    what: &str,
) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    if (fa > T::zero()) == (f(b) > T::zero()) {
        return Err(Error::Bracket {
            what: what.to_string(),
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    for _ in 0..40 {
        let mid = (a + b) * real(0.5);
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = (a + b) * real(0.5);
    for _ in 0..8 {
        let fx = f(x);
        let dfx = df(x);
        if dfx == T::zero() {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        if !(next > a && next < b) {
            break;
        }
        x = next;
        if step.abs() <= x.abs() * T::epsilon() {
            break;
        }
    }
    Ok(x)
}
