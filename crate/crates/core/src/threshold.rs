//! Uniqueness certification for the stationary flow problem.
//!
//! The sufficient condition compares the size of the solenoidal extension
//! against the Sobolev constant of the domain:
//!
//! ```text
//! 2 ||grad Psi|| + sqrt(S) ||Psi||_{L4} < eta S
//! ```
//!
//! The unknown constant `S` is replaced on both sides by its certified
//! Poincare lower bound. The substituted condition is sufficient because
//! the admissible-speed threshold `S / (2 sqrt(B1) + sqrt(S) B2^{1/4})` is
//! increasing in `S`, so shrinking `S` only makes certification harder.
//! Solving for the speed ratio yields the explicit Reynolds threshold
//! `re_bar`, which decays like `R^{-1/4}` for long channels: no solenoidal
//! extension can beat that rate, as the growth constant `eps(h)` quantifies.

use crate::bounds;
use crate::error::{Error, Result};
use crate::extension;
use crate::geometry::{ChannelGeometry, FlowParams};
use crate::roots;
use crate::scalar::{int, real, Real};

/// Outcome of the uniqueness check for one geometry and flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport<T> {
    pub geom: ChannelGeometry<T>,
    pub flow: FlowParams<T>,
    /// Certified lower bound substituted for the Sobolev constant (the
    /// Poincare arm; shrinking it can only revoke certification).
    pub s_r_lower: T,
    /// `2 ||grad Psi|| + sqrt(S) ||Psi||_{L4}` with the surrogate `S`.
    pub lhs_umbral: T,
    /// `eta S` with the surrogate `S`.
    pub rhs_umbral: T,
    /// Whether the sufficient condition holds.
    pub unique_certified: bool,
    /// Explicit threshold on `U/eta` equivalent to the condition.
    pub re_bar: T,
    /// A-priori bound `3 ||grad Psi||` on the solution gradient, valid
    /// whenever certification holds.
    pub grad_u_bound: T,
    /// Minimal-growth constant `eps(h)`.
    pub eps_h: T,
}

/// Evaluate the sufficient uniqueness condition.
pub fn certify_uniqueness<T: Real>(
    geom: ChannelGeometry<T>,
    flow: FlowParams<T>,
) -> Result<ThresholdReport<T>> {
    let h = geom.half_height();
    let u = flow.inflow();
    let s = bounds::poincare_lower(&geom);
    let b1 = extension::b1_constant(h)?;
    let b2 = extension::b2_constant(geom.half_length(), h)?;
    let lhs = int::<T>(2) * b1.sqrt() * u + s.sqrt() * b2.sqrt().sqrt() * u;
    let rhs = flow.viscosity() * s;
    Ok(ThresholdReport {
        geom,
        flow,
        s_r_lower: s,
        lhs_umbral: lhs,
        rhs_umbral: rhs,
        unique_certified: lhs < rhs,
        re_bar: re_bar(&geom)?,
        grad_u_bound: int::<T>(3) * b1.sqrt() * u,
        eps_h: eps_growth(h)?,
    })
}

/// The explicit Reynolds threshold: the largest `U/eta` the certificate
/// admits, with the Poincare lower bound substituted for the Sobolev
/// constant.
pub fn re_bar<T: Real>(geom: &ChannelGeometry<T>) -> Result<T> {
    let r = geom.half_length();
    let h = geom.half_height();
    let b1 = extension::b1_constant(h)?;
    let b2 = extension::b2_constant(r, h)?;
    let num = bounds::poincare_lower(geom);
    let quartic = (int::<T>(3) * T::PI() * b2 * real::<T>(0.5) * (r * r + h * h))
        .sqrt()
        .sqrt();
    let den = int::<T>(2) * b1.sqrt() + (T::PI() / (int::<T>(2) * r * h)).sqrt() * quartic;
    Ok(num / den)
}

/// Admissible-speed threshold as a function of a substituted Sobolev
/// constant `s`; increasing in `s`, which is what makes lower-bound
/// substitution sound.
pub fn speed_threshold<T: Real>(geom: &ChannelGeometry<T>, s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::domain(format!("Sobolev surrogate {s} must be positive")));
    }
    let h = geom.half_height();
    let b1 = extension::b1_constant(h)?;
    let b2 = extension::b2_constant(geom.half_length(), h)?;
    Ok(s / (int::<T>(2) * b1.sqrt() + s.sqrt() * b2.sqrt().sqrt()))
}

/// Unique positive root of `(2h / 3 pi^3) e^4 + (2 sqrt(2) / h^{1/4}) e = 1`.
///
/// The left side increases strictly from 0, so bisection on
/// `[0, h^{1/4} / (2 sqrt 2)]` (where the linear term alone reaches 1)
/// always brackets the root; Newton polishing brings the residual to
/// machine level.
pub fn eps_growth<T: Real>(h: T) -> Result<T> {
    if !(h > T::one()) {
        return Err(Error::domain(format!("eps(h) requires h > 1, got {h}")));
    }
    let quartic_coeff = int::<T>(2) * h / (int::<T>(3) * T::PI() * T::PI() * T::PI());
    let linear_coeff = int::<T>(2) * real::<T>(2.0).sqrt() / h.powf(real(0.25));
    let f = |e: T| quartic_coeff * e * e * e * e + linear_coeff * e - T::one();
    let df = |e: T| int::<T>(4) * quartic_coeff * e * e * e + linear_coeff;
    let hi = linear_coeff.recip() * (T::one() + T::epsilon().sqrt());
    roots::bisect_then_newton(f, df, T::zero(), hi, "growth constant eps(h)")
}

/// One row of the extension-growth diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow<T> {
    pub r: T,
    /// `(||grad Psi|| + ||Psi||_{L4}) / (R^{1/4} U)`.
    pub full_ratio: T,
    /// Gradient contribution alone, `sqrt(B1) / R^{1/4}`.
    pub grad_term: T,
    /// `L^4` contribution alone, `B2^{1/4} / R^{1/4}`.
    pub l4_term: T,
    /// `||Psi||_{L4} / ((4hR)^{1/4} U)`, tending to 1 from above.
    pub l4_vs_limit: T,
}

/// Tabulate the growth of the extension norms along a family of lengths.
/// The combined ratio approaches `(4h)^{1/4}` from above and stays above
/// `eps(h)` for every listed length.
pub fn growth_diagnostic<T: Real>(h: T, r_list: &[T]) -> Result<Vec<GrowthRow<T>>> {
    let quarter = real::<T>(0.25);
    let b1 = extension::b1_constant(h)?;
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        if !(r > h) {
            return Err(Error::domain(format!("growth diagnostic requires R > h, got R = {r}")));
        }
        let b2 = extension::b2_constant(r, h)?;
        let grad_term = b1.sqrt() / r.powf(quarter);
        let l4_term = b2.sqrt().sqrt() / r.powf(quarter);
        rows.push(GrowthRow {
            r,
            full_ratio: grad_term + l4_term,
            grad_term,
            l4_term,
            l4_vs_limit: (b2 / (int::<T>(4) * h * r)).sqrt().sqrt(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    // frozen 50-digit oracle values
    const RE_BAR_6_2: f64 = 0.04959865383688645671101528;
    const RE_BAR_6_5: f64 = 0.05389959563786590445406545;
    const EPS_15: f64 = 0.3909762755383200187995299;
    const EPS_2: f64 = 0.419886218251956995676907;
    const EPS_5: f64 = 0.5243879193457797438765126;
    const EPS_20: f64 = 0.6792377275599758567739659;

    fn geom(r: f64, h: f64) -> ChannelGeometry<f64> {
        ChannelGeometry::new(r, h).unwrap()
    }

    #[test]
    fn re_bar_matches_high_precision_oracle() {
        assert!((re_bar(&geom(6.0, 2.0)).unwrap() - RE_BAR_6_2).abs() < 1e-14);
        assert!((re_bar(&geom(6.0, 5.0)).unwrap() - RE_BAR_6_5).abs() < 1e-14);
        assert!(re_bar(&geom(6.0, 2.0)).unwrap() > 0.0);
    }

    #[test]
    fn re_bar_vanishes_as_the_walls_close_in() {
        let mut prev = re_bar(&geom(6.0, 1.1)).unwrap();
        for &h in &[1.01, 1.001, 1.0001] {
            let v = re_bar(&geom(6.0, h)).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn certification_agrees_with_re_bar() {
        for &(r, h, u, eta) in &[
            (6.0, 2.0, 0.01, 1.0),
            (6.0, 2.0, 0.06, 1.0),
            (6.0, 5.0, 0.05, 1.0),
            (10.0, 3.0, 0.001, 0.02),
        ] {
            let g = geom(r, h);
            let report =
                certify_uniqueness(g, FlowParams::new(u, eta).unwrap()).unwrap();
            let expected = u / eta < report.re_bar;
            assert_eq!(report.unique_certified, expected, "({r},{h},{u},{eta})");
            assert_eq!(report.unique_certified, report.lhs_umbral < report.rhs_umbral);
        }
    }

    #[test]
    fn small_speeds_are_always_certified() {
        for &(r, h) in &[(6.0, 2.0), (10.0, 3.0), (50.0, 5.0)] {
            let report = certify_uniqueness(
                geom(r, h),
                FlowParams::new(1e-9, 1.0).unwrap(),
            )
            .unwrap();
            assert!(report.unique_certified);
            // gradient estimate: 3||grad Psi|| < (3/2) eta S whenever certified
            assert!(report.grad_u_bound < 1.5 * 1.0 * report.s_r_lower);
        }
    }

    #[test]
    fn lower_bound_substitution_is_monotone() {
        // shrinking the Sobolev surrogate can only lose certification
        let g = geom(6.0, 2.0);
        let s0 = bounds::poincare_lower(&g);
        let mut prev = 0.0;
        for &f in &[0.1, 0.3, 0.6, 1.0, 2.0] {
            let t = speed_threshold(&g, s0 * f).unwrap();
            assert!(t > prev);
            prev = t;
        }
        assert!(speed_threshold(&g, 0.0).is_err());
    }

    #[test]
    fn eps_growth_matches_oracle_with_machine_residual() {
        for (h, expected) in [(1.5, EPS_15), (2.0, EPS_2), (5.0, EPS_5), (20.0, EPS_20)] {
            let e: f64 = eps_growth(h).unwrap();
            assert!((e - expected).abs() < 1e-13, "h={h}");
            let residual =
                2.0 * h / (3.0 * std::f64::consts::PI.powi(3)) * e.powi(4)
                    + 2.0 * 2.0f64.sqrt() / h.powf(0.25) * e
                    - 1.0;
            assert!(residual.abs() <= 1e-12, "h={h}: residual {residual}");
        }
        assert!((eps_growth(2.0f64).unwrap() - 0.4200).abs() < 1e-3);
        assert!(eps_growth(1.0f64).is_err());
    }

    #[test]
    fn eps_growth_root_is_unique_in_its_bracket() {
        // left side is strictly increasing: negative at 0, positive at the
        // bracket end
        let h = 2.0f64;
        let f = |e: f64| {
            2.0 * h / (3.0 * std::f64::consts::PI.powi(3)) * e.powi(4)
                + 2.0 * 2.0f64.sqrt() / h.powf(0.25) * e
                - 1.0
        };
        assert!(f(0.0) < 0.0);
        let hi = h.powf(0.25) / (2.0 * 2.0f64.sqrt());
        assert!(f(hi * (1.0 + 1e-12)) > 0.0);
        // linear bound from the defining equation
        for &h in &[1.5, 2.0, 5.0, 20.0, 100.0] {
            let e: f64 = eps_growth(h).unwrap();
            assert!(e * 2.0 * 2.0f64.sqrt() / h.powf(0.25) <= 1.0);
        }
    }

    #[test]
    fn growth_table_behaves_as_predicted() {
        let rows = growth_diagnostic(2.0f64, &[100.0, 1000.0, 10000.0]).unwrap();
        // frozen oracle for the combined ratio
        let expected: [f64; 3] = [
            6.676608308727946371223538,
            4.451546861573618518692012,
            3.235104056923682654111326,
        ];
        for (row, exp) in rows.iter().zip(expected) {
            assert!((row.full_ratio - exp).abs() < 1e-12);
        }
        // decreasing toward the far-field limit, always above eps(h)
        let eps = eps_growth(2.0).unwrap();
        let limit = (4.0f64 * 2.0).powf(0.25);
        let mut prev = f64::INFINITY;
        for row in &rows {
            assert!(row.full_ratio < prev);
            assert!(row.full_ratio > limit);
            assert!(row.full_ratio >= eps);
            prev = row.full_ratio;
        }
        // the pure L4 ratio is already within 1% of its limit at R = 1e4
        assert!((rows[2].l4_vs_limit - 1.0).abs() < 0.01);
        assert!(growth_diagnostic(2.0, &[1.5]).is_err());
    }

    #[test]
    fn re_bar_slope_is_far_from_asymptotic_in_the_near_range() {
        // the R^{-1/4} regime only sets in once the L4 term dominates the
        // R-independent gradient term (around R ~ 1e4 for h = 5); over
        //[1e2, 1e6] the log-log slope is about -0.144
        let h = 5.0;
        let n = 21;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let r = 10f64.powf(2.0 + 4.0 * i as f64 / (n - 1) as f64);
            xs.push(r.ln());
            ys.push(re_bar(&geom(r, h)).unwrap().ln());
        }
        let xm = xs.iter().sum::<f64>() / n as f64;
        let ym = ys.iter().sum::<f64>() / n as f64;
        let slope = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xm) * (y - ym))
            .sum::<f64>()
            / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
        assert!((slope - -0.144).abs() < 5e-3, "slope {slope}");
        // and it keeps steepening toward -1/4 further out
        let far = re_bar(&geom(1e12, h)).unwrap();
        let farther = re_bar(&geom(1e14, h)).unwrap();
        let tail_slope = (farther.ln() - far.ln()) / (1e14f64.ln() - 1e12f64.ln());
        assert!((tail_slope - -0.25).abs() < 5e-3, "tail slope {tail_slope}");
    }
}
