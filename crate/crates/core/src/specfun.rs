//! Special-function primitives: the first zero of the Bessel function J0
//! and the Jacobi elliptic cosine with modulus `k = 1/sqrt(2)`.
//!
//! At this modulus `cn` solves `cn'' + cn^3 = 0`, which is exactly the
//! one-dimensional profile equation the strip bound is built from, and its
//! quarter period equals the complete elliptic integral `K(1/2)`.

use crate::error::Result;
use crate::quadrature::{self, QuadratureRule};
use crate::roots;
use crate::scalar::{int, real, Real};

/// The two spectral constants everything in the bounds depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConstants<T> {
    /// First positive zero of `J0`, approximately 2.40483.
    pub mu0: T,
    /// First positive zero of `cn`, approximately 1.85407.
    pub alpha: T,
}

impl<T: Real> SpectralConstants<T> {
    pub fn compute() -> Result<Self> {
        let mu0 = bessel_j0_first_zero()?;
        let alpha = cn_first_zero()?;
        debug_assert!(mu0 > real(2.4048) && mu0 < real(2.4049));
        debug_assert!(alpha > real(1.8540) && alpha < real(1.8541));
        Ok(Self { mu0, alpha })
    }
}

/// Bessel function of the first kind, order zero, by its power series.
///
/// The series is alternating with terms `(x^2/4)^k / (k!)^2`; for
/// `|x| <= 12` the cancellation costs at most four digits, leaving
/// absolute accuracy well below 1e-12. Only moderate arguments are needed
/// here (the first zero lies in (2,3)).
pub fn bessel_j0<T: Real>(x: T) -> T {
    let q = -(x * x) * real(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..SERIES_MAX_TERMS {
        let kf = int::<T>(k as i64);
        term = term * q / (kf * kf);
        sum += term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    sum
}

/// Bessel function of the first kind, order one (series, moderate `|x|`).
pub fn bessel_j1<T: Real>(x: T) -> T {
    let q = -(x * x) * real(0.25);
    let mut term = x * real(0.5);
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        let kf = int::<T>(k as i64);
        term = term * q / (kf * (kf + T::one()));
        sum += term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    sum
}

const SERIES_MAX_TERMS: usize = 60;

/// First positive zero of `J0`: bisection on the hard-coded bracket (2,3)
/// refined by Newton steps using `J0' = -J1`.
pub fn bessel_j0_first_zero<T: Real>() -> Result<T> {
    roots::bisect_then_newton(
        |x| bessel_j0(x),
        |x| -bessel_j1(x),
        int(2),
        int(3),
        "first zero of J0",
    )
}

/// Squared modulus of the elliptic functions used throughout: `m = 1/2`.
const MODULUS_SQ: f64 = 0.5;

/// Quarter period `K(1/2)` of `cn`, from the arithmetic-geometric mean.
fn quarter_period<T: Real>() -> T {
    let mut a = T::one();
    let mut b = real::<T>(1.0 - MODULUS_SQ).sqrt();
    for _ in 0..32 {
        let an = (a + b) * real(0.5);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= an * T::epsilon() {
            a = an;
            break;
        }
        a = an;
        b = bn;
    }
    T::PI() / (int::<T>(2) * a)
}

/// `cn`, `sn`, `dn` at modulus `k = 1/sqrt(2)` via the descending Landen
/// (AGM) recursion, after folding the argument into `[0, K]` with the
/// quarter-period symmetries.
fn jacobi_cn_sn_dn<T: Real>(t: T) -> (T, T, T) {
    let big_k = quarter_period::<T>();
    let two_k = big_k + big_k;
    let four_k = two_k + two_k;

    let mut sn_sign = if t < T::zero() { -T::one() } else { T::one() };
    let mut u = t.abs() % four_k;
    if u > two_k {
        u = four_k - u;
        sn_sign = -sn_sign;
    }
    let mut cn_sign = T::one();
    if u > big_k {
        u = two_k - u;
        cn_sign = -cn_sign;
    }

    // AGM ladder
    let mut a_seq = [T::zero(); 32];
    let mut c_seq = [T::zero(); 32];
    let mut a = T::one();
    let mut b = real::<T>(1.0 - MODULUS_SQ).sqrt();
    let mut c = real::<T>(MODULUS_SQ).sqrt();
    let mut n = 0;
    a_seq[0] = a;
    c_seq[0] = c;
    while c.abs() > a * T::epsilon() && n < 31 {
        let an = (a + b) * real(0.5);
        let cn_ = (a - b) * real(0.5);
        b = (a * b).sqrt();
        a = an;
        c = cn_;
        n += 1;
        a_seq[n] = a;
        c_seq[n] = c;
    }

    // amplitude back-recursion
    let mut phi = int::<T>(1 << n) * a * u;
    for i in (1..=n).rev() {
        let s = (c_seq[i] / a_seq[i]) * phi.sin();
        let s = s.max(-T::one()).min(T::one());
        phi = (phi + s.asin()) * real(0.5);
    }

    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (T::one() - real::<T>(MODULUS_SQ) * sn * sn).sqrt();
    (cn_sign * cn, sn_sign * sn, dn)
}

/// Jacobi elliptic cosine `cn(t | k = 1/sqrt(2))`.
pub fn jacobi_cn<T: Real>(t: T) -> T {
    jacobi_cn_sn_dn(t).0
}

/// Derivative `cn'(t) = -sn(t) dn(t)` at the same modulus.
pub fn jacobi_cn_deriv<T: Real>(t: T) -> T {
    let (_, sn, dn) = jacobi_cn_sn_dn(t);
    -sn * dn
}

/// First positive zero of `cn`, evaluated as the complete elliptic
/// integral `sqrt(2) * int_0^{pi/2} dt / sqrt(2 - sin^2 t)`.
pub fn cn_first_zero<T: Real>() -> Result<T> {
    let rule = QuadratureRule::default_rule();
    let half_pi = T::PI() * real(0.5);
    let est = quadrature::integrate_interval(
        T::zero(),
        half_pi,
        |t| {
            let s = t.sin();
            (int::<T>(2) - s * s).sqrt().recip()
        },
        &rule,
    )?;
    Ok(real::<T>(2.0).sqrt() * est.value)
}
