//! Separated-variables upper bound for the Sobolev constant of the
//! infinite strip.
//!
//! The transverse profile is `W_h(y) = cn(alpha y / h) / mu_h`, normalized
//! to unit `L^4` norm. At the calibration height `h0` where additionally
//! `||W'_{h0}||_{L2} = 1`, the longitudinal minimizer is the explicit
//! sech profile `V(x) = 1 / cosh(x / ||W_{h0}||_{L2})`, a solution of the
//! Euler-Lagrange equation with multiplier 2. Evaluating the separated
//! Rayleigh quotient there and rescaling gives the height-independent
//! constant `c` of the bound `c / h` (about 5.151).

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};
use crate::roots;
use crate::scalar::{int, real, Real};
use crate::specfun;

/// Output of the separated-variables pipeline at the calibration height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripMinimizerResult<T> {
    /// First zero of `cn`.
    pub alpha: T,
    /// Height with `||W'_{h0}||_{L2} = 1`.
    pub h0: T,
    /// `L^4` normalization of the `cn` profile at `h0`.
    pub mu_h0: T,
    /// Separated Rayleigh quotient at `h0`.
    pub quotient: T,
    /// Height-independent constant `quotient * h0` of the strip bound.
    pub c_upper: T,
    /// Lagrange multiplier of the sech profile; identically 2.
    pub lambda: T,
    /// `||W_{h0}||_{L2}`, the length scale of the sech profile.
    pub w_l2: T,
}

/// Half-width of the truncated line integrals, in units of the sech length
/// scale; the discarded tails are below 1e-12 relative.
const TRUNCATION_SCALES: f64 = 40.0;

/// `L^4` normalization constant: `mu_h = (int_{-h}^{h} cn(alpha y/h)^4 dy)^{1/4}`.
pub fn normalization_mu<T: Real>(h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::domain(format!("normalization requires h > 0, got {h}")));
    }
    let alpha = specfun::cn_first_zero::<T>()?;
    let rule = QuadratureRule::default_rule();
    let integral = quadrature::integrate_interval(
        -h,
        h,
        |y| {
            let c = specfun::jacobi_cn(alpha * y / h);
            let c2 = c * c;
            c2 * c2
        },
        &rule,
    )?;
    Ok(integral.value.sqrt().sqrt())
}

/// Transverse profile `W_h(y) = cn(alpha y / h) / mu_h` on `[-h, h]`.
pub fn profile_w<T: Real>(h: T, y: T) -> Result<T> {
    let alpha = specfun::cn_first_zero::<T>()?;
    let mu = normalization_mu(h)?;
    Ok(specfun::jacobi_cn(alpha * y / h) / mu)
}

/// `||W'_h||_{L2(-h,h)}`, computed from the `cn` derivative by quadrature.
pub fn w_prime_l2<T: Real>(h: T) -> Result<T> {
    let alpha = specfun::cn_first_zero::<T>()?;
    let mu = normalization_mu(h)?;
    let scale = alpha / (h * mu);
    let rule = QuadratureRule::default_rule();
    let integral = quadrature::integrate_interval(
        -h,
        h,
        |y| {
            let d = specfun::jacobi_cn_deriv(alpha * y / h) * scale;
            d * d
        },
        &rule,
    )?;
    Ok(integral.value.sqrt())
}

/// `||W_h||_{L2(-h,h)}`.
fn w_l2<T: Real>(h: T) -> Result<T> {
    let alpha = specfun::cn_first_zero::<T>()?;
    let mu = normalization_mu(h)?;
    let rule = QuadratureRule::default_rule();
    let integral = quadrature::integrate_interval(
        -h,
        h,
        |y| {
            let w = specfun::jacobi_cn(alpha * y / h) / mu;
            w * w
        },
        &rule,
    )?;
    Ok(integral.value.sqrt())
}

/// Calibration height `h0` with `||W'_{h0}||_{L2} = 1`, by bisection.
///
/// `||W'_h||^2` scales like `h^{-3/2}`, so the bracket `(1.1, 10)` always
/// contains exactly one root; failure to find a sign change indicates a
/// broken `cn` or quadrature implementation.
pub fn find_h0<T: Real>() -> Result<T> {
    let g = |h: T| w_prime_l2(h).expect("norm evaluation inside bracket") - T::one();
    let h0 = roots::bisect(g, real(1.1), int(10), "strip calibration height")?;
    let res = g(h0).abs();
    if res > real(1e-10) {
        return Err(Error::Bracket {
            what: format!("calibration height residual {res} exceeds 1e-10"),
            lo: 1.1,
            hi: 10.0,
        });
    }
    Ok(h0)
}

/// Longitudinal profile `V(x) = sech(x / w_l2)`.
pub fn profile_v<T: Real>(w_l2: T, x: T) -> T {
    (x / w_l2).cosh().recip()
}

/// Pointwise residual of the Euler-Lagrange equation
/// `-w_l2^2 V'' + V = 2 V^3`, with `V''` from a fourth-order stencil.
pub fn euler_lagrange_residual<T: Real>(w_l2: T, x: T) -> T {
    let s = T::epsilon().powf(real(1.0 / 6.0)).max(real(1e-6));
    let f = |t: T| profile_v(w_l2, t);
    let second = (-f(x - s - s) + int::<T>(16) * f(x - s) - int::<T>(30) * f(x)
        + int::<T>(16) * f(x + s)
        - f(x + s + s))
        / (int::<T>(12) * s * s);
    let v = f(x);
    (-(w_l2 * w_l2) * second + v - int::<T>(2) * v * v * v).abs()
}

/// Full pipeline: calibration height, normalizations, separated quotient
/// and the height-independent constant of the strip bound.
pub fn separated_quotient<T: Real>() -> Result<StripMinimizerResult<T>> {
    let alpha = specfun::cn_first_zero::<T>()?;
    let h0 = find_h0::<T>()?;
    let mu_h0 = normalization_mu(h0)?;
    let quotient = separated_quotient_at_scaled(h0, h0)?;
    Ok(StripMinimizerResult {
        alpha,
        h0,
        mu_h0,
        quotient,
        c_upper: quotient * h0,
        lambda: int(2),
        w_l2: w_l2(h0)?,
    })
}

/// Separated Rayleigh quotient at height `h`, using the calibrated profiles
/// rescaled from `h0`; satisfies `quotient(h) * h = quotient(h0) * h0`.
pub fn separated_quotient_at<T: Real>(h: T) -> Result<T> {
    let h0 = find_h0::<T>()?;
    separated_quotient_at_scaled(h, h0)
}

fn separated_quotient_at_scaled<T: Real>(h: T, h0: T) -> Result<T> {
    if !(h > T::one()) {
        return Err(Error::domain(format!("strip quotient requires h > 1, got {h}")));
    }
    let alpha = specfun::cn_first_zero::<T>()?;
    let mu = normalization_mu(h)?;
    let rule = QuadratureRule::default_rule();

    // transverse integrals on (-h, h)
    let w = |y: T| specfun::jacobi_cn(alpha * y / h) / mu;
    let w2 = quadrature::integrate_interval(-h, h, |y| w(y) * w(y), &rule)?.value;
    let w4 = quadrature::integrate_interval(
        -h,
        h,
        |y| {
            let v = w(y) * w(y);
            v * v
        },
        &rule,
    )?
    .value;
    let wp_scale = alpha / (h * mu);
    let wp2 = quadrature::integrate_interval(
        -h,
        h,
        |y| {
            let d = specfun::jacobi_cn_deriv(alpha * y / h) * wp_scale;
            d * d
        },
        &rule,
    )?
    .value;

    // longitudinal sech profile, rescaled with the height: the calibrated
    // length scale is ||W_{h0}||_{L2} stretched by h/h0
    let b0 = w_l2(h0)?;
    let b = b0 * h / h0;
    let v = |x: T| profile_v(b, x);
    let half_width = b * real(TRUNCATION_SCALES);
    let v2 = quadrature::integrate_interval(-half_width, half_width, |x| v(x) * v(x), &rule)?.value;
    let v4 = quadrature::integrate_interval(
        -half_width,
        half_width,
        |x| {
            let q = v(x) * v(x);
            q * q
        },
        &rule,
    )?
    .value;
    let vp2 = quadrature::integrate_interval(
        -half_width,
        half_width,
        |x| {
            let u = x / b;
            let d = -u.tanh() / (b * u.cosh());
            d * d
        },
        &rule,
    )?
    .value;

    Ok((vp2 * w2 + v2 * wp2) / (v4.sqrt() * w4.sqrt()))
}
