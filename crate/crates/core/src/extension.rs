//! Explicit divergence-free extension of constant inflow data.
//!
//! A piecewise-cubic `C^1` cutoff `phi_eps` (1 on `[-1,1]`, 0 outside
//! `[-1-eps, 1+eps]`) with `eps = h - 1` builds the corner function
//! `omega = 1 - phi(x) phi(y)`; the field
//!
//! ```text
//! Psi(x, y) = U * (omega + y d_y omega, -y d_x omega)
//! ```
//!
//! is divergence-free, equals `(U, 0)` for `|x| >= h`, and vanishes on the
//! square `[-1,1]^2` covering the obstacle. Its gradient `L^2` norm and
//! `L^4` norm have closed forms `sqrt(B1) U` and `B2^{1/4} U`; both are
//! piecewise-polynomial integrals, so kink-aligned Gauss panels reproduce
//! them to machine precision and serve as the acceptance oracle.

use crate::error::{Error, Result};
use crate::geometry::ChannelGeometry;
use crate::quadrature::{self, IntegrationRegion, QuadratureRule};
use crate::scalar::{int, real, Real};

/// The `C^1` plateau cutoff with ramp width `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile<T> {
    eps: T,
}

impl<T: Real> CutoffProfile<T> {
    pub fn new(eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps.is_finite()) {
            return Err(Error::domain(format!("cutoff ramp width eps = {eps} must be positive")));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    /// Support endpoints `(-(1+eps), 1+eps)`.
    pub fn support(&self) -> (T, T) {
        (-(T::one() + self.eps), T::one() + self.eps)
    }

    /// `phi_eps(t)`: 1 on the plateau, cubic ramp, 0 outside the support.
    pub fn value(&self, t: T) -> T {
        let a = t.abs();
        let e = self.eps;
        if a <= T::one() {
            T::one()
        } else if a >= T::one() + e {
            T::zero()
        } else {
            (int::<T>(2) * a * a * a - int::<T>(3) * (e + int(2)) * a * a
                + int::<T>(6) * (T::one() + e) * a
                + e * e * e
                - int::<T>(3) * e
                - int(2))
                / (e * e * e)
        }
    }

    /// `phi_eps'(t)`; vanishes at `|t| = 1` and `|t| = 1 + eps`, with
    /// maximum magnitude `3/(2 eps)` midway up the ramp.
    pub fn deriv(&self, t: T) -> T {
        let a = t.abs();
        let e = self.eps;
        if a <= T::one() || a >= T::one() + e {
            T::zero()
        } else {
            let inner = int::<T>(6) * (a - T::one()) * (a - T::one() - e) / (e * e * e);
            if t < T::zero() {
                -inner
            } else {
                inner
            }
        }
    }

    /// `phi_eps''(t)` on the open ramp; maximum magnitude `6/eps^2`.
    pub fn second(&self, t: T) -> T {
        let a = t.abs();
        let e = self.eps;
        if a <= T::one() || a >= T::one() + e {
            T::zero()
        } else {
            (int::<T>(12) * a - int::<T>(6) * (e + int(2))) / (e * e * e)
        }
    }
}

/// Closed form of `||grad Psi||^2 / U^2`; depends only on `h`.
pub fn b1_constant<T: Real>(h: T) -> Result<T> {
    if !(h > T::one()) {
        return Err(Error::domain(format!("B1 requires h > 1, got {h}")));
    }
    let hm = h - T::one();
    let hm2 = hm * hm;
    let hm3 = hm2 * hm;
    let t1 = real::<T>(36.0 / 5.0) * (int::<T>(2) * h * h + int::<T>(3) * h + int(2)) / hm2;
    let t2 = real::<T>(6.0 / 5.0) * (int::<T>(13) * h + int(22))
        * (int::<T>(3) * h * h - h + int(3))
        / hm3;
    let t3 = (int::<T>(19) * h * h * h + int::<T>(51) * h * h + int::<T>(75) * h + int(65))
        / (int::<T>(3) * hm3);
    Ok(real::<T>(8.0 / 35.0) * (t1 + t2 + t3))
}

/// Closed form of `||Psi||_L4^4 / U^4`: `4Rh` from the far field plus an
/// `h`-only remainder with the expected `(h-1)` poles.
pub fn b2_constant<T: Real>(r: T, h: T) -> Result<T> {
    if !(h > T::one()) {
        return Err(Error::domain(format!("B2 requires h > 1, got {h}")));
    }
    if !(r > T::one()) {
        return Err(Error::domain(format!("B2 requires R > 1, got {r}")));
    }
    Ok(int::<T>(4) * r * h + b2_remainder(h))
}

fn b2_remainder<T: Real>(h: T) -> T {
    let hm = h - T::one();
    let num = ((((int::<T>(1011981090) * h + int(1495360527)) * h - int(173841573)) * h
        + int(41135272))
        * h
        + int(362811451))
        * h
        + int(416279809);
    int::<T>(4) * num / (int::<T>(1277551275) * hm * hm * hm)
}

/// The extension field for one geometry and inflow speed, with its
/// closed-form norm constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionField<T> {
    geom: ChannelGeometry<T>,
    inflow: T,
    b1: T,
    b2: T,
    cutoff: CutoffProfile<T>,
}

impl<T: Real> ExtensionField<T> {
    pub fn new(geom: ChannelGeometry<T>, inflow: T) -> Result<Self> {
        if !(inflow > T::zero() && inflow.is_finite()) {
            return Err(Error::domain(format!("inflow speed U = {inflow} must be positive")));
        }
        let h = geom.half_height();
        Ok(Self {
            geom,
            inflow,
            b1: b1_constant(h)?,
            b2: b2_constant(geom.half_length(), h)?,
            cutoff: CutoffProfile::new(h - T::one())?,
        })
    }

    pub fn geometry(&self) -> &ChannelGeometry<T> {
        &self.geom
    }

    pub fn inflow(&self) -> T {
        self.inflow
    }

    pub fn b1(&self) -> T {
        self.b1
    }

    pub fn b2(&self) -> T {
        self.b2
    }

    /// `||grad Psi||_{L^2}` from the closed form.
    pub fn grad_norm(&self) -> T {
        self.b1.sqrt() * self.inflow
    }

    /// `||Psi||_{L^4}` from the closed form.
    pub fn l4_norm(&self) -> T {
        self.b2.sqrt().sqrt() * self.inflow
    }

    /// Corner function `omega`; 0 on `[-1,1]^2`, 1 for `|x| >= h`.
    pub fn omega(&self, x: T, y: T) -> T {
        T::one() - self.cutoff.value(x) * self.cutoff.value(y)
    }

    /// Partial derivatives of `omega`.
    pub fn omega_grad(&self, x: T, y: T) -> (T, T) {
        (
            -self.cutoff.deriv(x) * self.cutoff.value(y),
            -self.cutoff.value(x) * self.cutoff.deriv(y),
        )
    }

    /// The field `Psi(x, y)`.
    pub fn velocity(&self, x: T, y: T) -> (T, T) {
        let p = &self.cutoff;
        let u = self.inflow;
        (
            u * (T::one() - p.value(x) * p.value(y) - y * p.value(x) * p.deriv(y)),
            u * (y * p.deriv(x) * p.value(y)),
        )
    }

    /// All four entries of `grad Psi` (where the second derivatives of the
    /// cutoff exist).
    pub fn velocity_gradient(&self, x: T, y: T) -> [[T; 2]; 2] {
        let p = &self.cutoff;
        let u = self.inflow;
        let (px, py) = (p.value(x), p.value(y));
        let (dx, dy) = (p.deriv(x), p.deriv(y));
        let (sx, sy) = (p.second(x), p.second(y));
        [
            [
                u * (-dx * py - y * dx * dy),
                u * (-(int::<T>(2)) * px * dy - y * px * sy),
            ],
            [u * (y * sx * py), u * (dx * py + y * dx * dy)],
        ]
    }

    /// Divergence by centered differences; an oracle for the analytic
    /// divergence-free construction, meaningful away from the kink lines.
    pub fn divergence_fd(&self, x: T, y: T, step: T) -> T {
        let two = int::<T>(2);
        let dxx = (self.velocity(x + step, y).0 - self.velocity(x - step, y).0) / (two * step);
        let dyy = (self.velocity(x, y + step).1 - self.velocity(x, y - step).1) / (two * step);
        dxx + dyy
    }

    /// `(||grad Psi||_{L^2}, ||Psi||_{L^4})` by panel quadrature over the
    /// pierced rectangle; the independent check of [`ExtensionField::b1`]
    /// and [`ExtensionField::b2`].
    pub fn norms_quadrature(&self, rule: &QuadratureRule<T>) -> Result<(T, T)> {
        let region = IntegrationRegion::pierced_rectangle(self.geom);
        let grad_sq = quadrature::integrate(
            &region,
            |x, y| {
                let g = self.velocity_gradient(x, y);
                g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1]
            },
            rule,
        )?;
        let l4 = quadrature::norm_lp(
            &region,
            |x, y| {
                let (a, b) = self.velocity(x, y);
                (a * a + b * b).sqrt()
            },
            4,
            rule,
        )?;
        Ok((grad_sq.value.max(T::zero()).sqrt(), l4))
    }

    /// Net flux of `Psi` through the boundary of the pierced rectangle
    /// (outer rectangle plus obstacle circle); zero for a divergence-free
    /// extension of compatible data.
    pub fn boundary_flux(&self, rule: &QuadratureRule<T>) -> Result<T> {
        let r = self.geom.half_length();
        let h = self.geom.half_height();
        let right = quadrature::integrate_interval(-h, h, |y| self.velocity(r, y).0, rule)?.value;
        let left = quadrature::integrate_interval(-h, h, |y| self.velocity(-r, y).0, rule)?.value;
        let top = quadrature::integrate_interval(-r, r, |x| self.velocity(x, h).1, rule)?.value;
        let bottom =
            quadrature::integrate_interval(-r, r, |x| self.velocity(x, -h).1, rule)?.value;
        // outward normal on the obstacle circle points into the disk
        let circle = quadrature::integrate_interval(
            T::zero(),
            int::<T>(2) * T::PI(),
            |t| {
                let (c, s) = (t.cos(), t.sin());
                let (a, b) = self.velocity(c, s);
                -(a * c + b * s)
            },
            rule,
        )?
        .value;
        Ok(right - left + top - bottom + circle)
    }

    /// Uniform sample of the field on the closed rectangle, as
    /// `(x, y, psi_x, psi_y)` rows, for CSV export.
    pub fn sample_grid(&self, nx: usize, ny: usize) -> Vec<(T, T, T, T)> {
        let r = self.geom.half_length();
        let h = self.geom.half_height();
        let mut rows = Vec::with_capacity((nx + 1) * (ny + 1));
        for i in 0..=nx {
            let x = -r + int::<T>(2) * r * int::<T>(i as i64) / int(nx as i64);
            for j in 0..=ny {
                let y = -h + int::<T>(2) * h * int::<T>(j as i64) / int(ny as i64);
                let (vx, vy) = self.velocity(x, y);
                rows.push((x, y, vx, vy));
            }
        }
        rows
    }
}
