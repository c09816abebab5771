//! Computational domains: the pierced rectangle, the flow parameters and
//! the infinite strip.

use crate::error::{Error, Result};
use crate::scalar::{int, real, Real};

/// Radius of the circular obstacle; fixed at 1 throughout.
pub const OBSTACLE_RADIUS: f64 = 1.0;

/// The pierced rectangle `(-R,R) x (-h,h)` minus the closed unit disk,
/// with `R > h > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry<T> {
    half_length: T,
    half_height: T,
}

impl<T: Real> ChannelGeometry<T> {
    /// Validates `R > h > 1`; every formula downstream assumes it.
    pub fn new(half_length: T, half_height: T) -> Result<Self> {
        if !(half_height > T::one()) {
            return Err(Error::domain(format!(
                "half-height h = {half_height} must exceed the obstacle radius 1"
            )));
        }
        if !(half_length > half_height) {
            return Err(Error::domain(format!(
                "half-length R = {half_length} must exceed the half-height h = {half_height}"
            )));
        }
        if !half_length.is_finite() {
            return Err(Error::domain("half-length R must be finite".to_string()));
        }
        Ok(Self {
            half_length,
            half_height,
        })
    }

    /// Half-length `R` of the channel.
    #[inline]
    pub fn half_length(&self) -> T {
        self.half_length
    }

    /// Half-height `h` of the channel.
    #[inline]
    pub fn half_height(&self) -> T {
        self.half_height
    }

    #[inline]
    pub fn obstacle_radius(&self) -> T {
        real(OBSTACLE_RADIUS)
    }

    /// Point membership in the open pierced rectangle. Boundary points are
    /// outside: all integrals downstream are over open sets.
    pub fn contains(&self, x: T, y: T) -> bool {
        x.abs() < self.half_length && y.abs() < self.half_height && x * x + y * y > T::one()
    }

    /// Area `4Rh - pi` of the pierced rectangle.
    pub fn area(&self) -> T {
        int::<T>(4) * self.half_length * self.half_height - T::PI()
    }

    /// Geometry of the strip this channel converges to as `R -> infinity`.
    pub fn strip(&self) -> StripGeometry<T> {
        StripGeometry {
            half_height: self.half_height,
        }
    }
}

/// Constant inflow speed and kinematic viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams<T> {
    inflow: T,
    viscosity: T,
}

impl<T: Real> FlowParams<T> {
    pub fn new(inflow: T, viscosity: T) -> Result<Self> {
        if !(inflow > T::zero() && inflow.is_finite()) {
            return Err(Error::domain(format!("inflow speed U = {inflow} must be positive")));
        }
        if !(viscosity > T::zero() && viscosity.is_finite()) {
            return Err(Error::domain(format!(
                "kinematic viscosity eta = {viscosity} must be positive"
            )));
        }
        Ok(Self { inflow, viscosity })
    }

    /// Inflow speed `U`.
    #[inline]
    pub fn inflow(&self) -> T {
        self.inflow
    }

    /// Kinematic viscosity `eta`.
    #[inline]
    pub fn viscosity(&self) -> T {
        self.viscosity
    }

    /// Reynolds-type ratio `U / eta`.
    #[inline]
    pub fn speed_ratio(&self) -> T {
        self.inflow / self.viscosity
    }
}

/// The infinite strip `R x (-h,h)` with `h > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripGeometry<T> {
    half_height: T,
}

impl<T: Real> StripGeometry<T> {
    pub fn new(half_height: T) -> Result<Self> {
        if !(half_height > T::one() && half_height.is_finite()) {
            return Err(Error::domain(format!(
                "strip half-height h = {half_height} must exceed 1"
            )));
        }
        Ok(Self { half_height })
    }

    #[inline]
    pub fn half_height(&self) -> T {
        self.half_height
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geom(r: f64, h: f64) -> ChannelGeometry<f64> {
        ChannelGeometry::new(r, h).unwrap()
    }

    #[test]
    fn contains_classifies_obstacle_interior_and_boundary() {
        let g = geom(6.0, 2.0);
        assert!(!g.contains(0.0, 0.0)); // inside the obstacle
        assert!(g.contains(3.0, 0.0)); // interior point
        assert!(!g.contains(6.0, 0.0)); // outer boundary excluded
        assert!(!g.contains(1.0, 0.0)); // obstacle boundary excluded
        assert!(!g.contains(0.0, 2.0));
    }

    #[test]
    fn construction_rejects_degenerate_boxes() {
        assert!(ChannelGeometry::new(2.0, 3.0).is_err());
        assert!(ChannelGeometry::new(3.0, 1.0).is_err());
        assert!(ChannelGeometry::new(3.0, 0.5).is_err());
        assert!(ChannelGeometry::new(f64::NAN, 2.0).is_err());
        assert!(FlowParams::new(0.0, 1.0).is_err());
        assert!(FlowParams::new(1.0, -1.0).is_err());
        assert!(StripGeometry::new(1.0).is_err());
    }

    #[test]
    fn area_matches_rectangle_minus_disk() {
        let g = geom(6.0, 2.0);
        assert!((g.area() - (48.0 - std::f64::consts::PI)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn contains_is_mirror_symmetric(x in -8.0f64..8.0, y in -3.0f64..3.0) {
            let g = geom(6.0, 2.0);
            prop_assert_eq!(g.contains(x, y), g.contains(-x, y));
            prop_assert_eq!(g.contains(x, y), g.contains(x, -y));
        }
    }
}
