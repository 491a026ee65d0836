//! Fixed-coefficient polynomial flat-output trajectories.
//!
//! A trajectory is `p(t) = sum_i c_i (t / t_op)^i` on `[0, t_op]`. Two shapes
//! are used: the degree-15 smoothstep with seven vanishing derivatives at both
//! ends (for `d_l` and `x_l`) and the quintic smoothstep with vanishing
//! velocity and acceleration at both ends (for `x_h`, `y_h`, `y_l`).

use crate::error::{Error, Result};
use crate::model::{FlatDerivStack, MAX_ORDER, SLEW_SINGULARITY_MARGIN_DEG};

/// Motion coefficients `c_8..c_15` of the degree-15 smoothstep.
pub const SEPTIC_SMOOTHSTEP: [f64; 8] = [6435.0, -40040.0, 108108.0, -163800.0, 150150.0, -83160.0, 25740.0, -3432.0];

/// Motion coefficients `c_3..c_5` of the quintic smoothstep.
pub const QUINTIC_SMOOTHSTEP: [f64; 3] = [10.0, -15.0, 6.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Degree 15, derivatives 1..=7 vanish at both ends.
    Septic,
    /// Degree 5, derivatives 1..=2 vanish at both ends.
    Quintic,
}

impl Shape {
    pub fn degree(self) -> usize {
        match self {
            Shape::Septic => 15,
            Shape::Quintic => 5,
        }
    }

    /// Number of vanishing derivatives at each end.
    pub fn flat_orders(self) -> usize {
        match self {
            Shape::Septic => 7,
            Shape::Quintic => 2,
        }
    }

    fn unit_coeffs(self) -> Vec<f64> {
        let mut c = vec![0.0; self.degree() + 1];
        match self {
            Shape::Septic => c[8..].copy_from_slice(&SEPTIC_SMOOTHSTEP),
            Shape::Quintic => c[3..].copy_from_slice(&QUINTIC_SMOOTHSTEP),
        }
        c
    }
}

/// A rest-to-rest polynomial move `p(t) = start + delta * S(t / t_op)` with
/// `S` a smoothstep shape.
///
/// `S` is point-symmetric about `(1/2, 1/2)`, so for `tau > 1/2` the shape is
/// evaluated as `1 - S(1 - tau)`. This keeps the large alternating monomial
/// coefficients from cancelling near the end of the move.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatTrajectory {
    shape: Shape,
    start: f64,
    delta: f64,
    duration: f64,
    coeffs: Vec<f64>,
    // unit[n][i] is the coefficient of tau^i in d^n S / d tau^n
    unit: Vec<Vec<f64>>,
}

impl FlatTrajectory {
    /// Rest-to-rest move from `start` to `start + delta` over `duration`.
    pub fn smoothstep(shape: Shape, start: f64, delta: f64, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidTime(duration));
        }
        if !(start.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite boundary values {start}, {delta}")));
        }
        let mut unit = Vec::with_capacity(MAX_ORDER + 1);
        unit.push(shape.unit_coeffs());
        for n in 1..=MAX_ORDER {
            let prev: &Vec<f64> = &unit[n - 1];
            let next: Vec<f64> = prev.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
            unit.push(next);
        }
        let mut coeffs: Vec<f64> = unit[0].iter().map(|c| c * delta).collect();
        coeffs[0] = start;
        Ok(Self { shape, start, delta, duration, coeffs, unit })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.degree()
    }

    /// Monomial coefficients `c_0..c_k` in normalized time.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn end(&self) -> f64 {
        self.start + self.delta
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Position and derivatives up to `max_order` at time `t`.
    pub fn eval_derivs(&self, t: f64, max_order: usize) -> Result<FlatDerivStack> {
        if !(0.0..=self.duration).contains(&t) {
            return Err(Error::OutOfRange { t, t_op: self.duration });
        }
        self.eval_normalized(t / self.duration, max_order)
    }

    /// Same as [`eval_derivs`](Self::eval_derivs) but at normalized time
    /// `tau = t / t_op` in `[0, 1]`.
    pub fn eval_normalized(&self, tau: f64, max_order: usize) -> Result<FlatDerivStack> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::OutOfRange { t: tau * self.duration, t_op: self.duration });
        }
        if max_order > MAX_ORDER {
            return Err(Error::InvalidInput(format!("max_order {max_order} > {MAX_ORDER}")));
        }
        Ok(self.eval_unchecked(tau, max_order))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, tau: f64, max_order: usize) -> FlatDerivStack {
        let mut out = [0.0; MAX_ORDER + 1];
        let inv = 1.0 / self.duration;
        let mirrored = tau > 0.5;
        let u = if mirrored { 1.0 - tau } else { tau };
        let s0 = horner(&self.unit[0], u);
        out[0] = if mirrored { self.end() - self.delta * s0 } else { self.start + self.delta * s0 };
        let mut scale = self.delta;
        for n in 1..=max_order {
            scale *= inv;
            let sn = horner(&self.unit[n], u);
            // d^n/dtau^n [1 - S(1 - tau)] = (-1)^(n+1) S^(n)(1 - tau)
            let sign = if mirrored && n % 2 == 0 { -1.0 } else { 1.0 };
            out[n] = sign * sn * scale;
        }
        FlatDerivStack::from_raw(out, max_order + 1)
    }
}

#[inline]
fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc.mul_add(x, ci))
}

/// Flat output `d_l` of a trolley move from `d_ti` to `d_tf` in `t_t` seconds.
pub fn build_trolley_flat(d_ti: f64, d_tf: f64, t_t: f64) -> Result<FlatTrajectory> {
    FlatTrajectory::smoothstep(Shape::Septic, d_ti, d_tf - d_ti, t_t)
}

/// Flat outputs of a slew move.
#[derive(Debug, Clone, PartialEq)]
pub struct SlewFlats {
    pub xl: FlatTrajectory,
    pub xh: FlatTrajectory,
    pub yh: FlatTrajectory,
    pub yl: FlatTrajectory,
}

impl SlewFlats {
    pub fn duration(&self) -> f64 {
        self.xl.duration()
    }
}

/// Checks that a slew between two angles (rad) stays clear of 0 and pi.
pub fn check_slew_range(theta_i: f64, theta_f: f64) -> Result<()> {
    let margin = SLEW_SINGULARITY_MARGIN_DEG.to_radians();
    for th in [theta_i, theta_f] {
        if !th.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite slew angle {th}")));
        }
        if th < margin || th > std::f64::consts::PI - margin {
            return Err(Error::SlewSingularity { theta_deg: th.to_degrees() });
        }
    }
    Ok(())
}

/// Flat outputs of a slew from `theta_i` to `theta_f` (rad) with the trolley
/// parked at `jib_radius`, lasting `t_s` seconds.
///
/// `x_l` follows the degree-15 shape; `x_h`, `y_h` and `y_l` are quintics,
/// with `y_h` and `y_l` identical.
pub fn build_slew_flats(theta_i: f64, theta_f: f64, jib_radius: f64, t_s: f64) -> Result<SlewFlats> {
    if !(t_s.is_finite() && t_s > 0.0) {
        return Err(Error::InvalidTime(t_s));
    }
    if !(jib_radius.is_finite() && jib_radius > 0.0) {
        return Err(Error::InvalidInput(format!("jib radius must be > 0, got {jib_radius}")));
    }
    check_slew_range(theta_i, theta_f)?;
    let (si, ci) = theta_i.sin_cos();
    let (sf, cf) = theta_f.sin_cos();
    let dc = jib_radius * (cf - ci);
    let ds = jib_radius * (sf - si);
    let x0 = jib_radius * ci;
    let y0 = jib_radius * si;
    Ok(SlewFlats {
        xl: FlatTrajectory::smoothstep(Shape::Septic, x0, dc, t_s)?,
        xh: FlatTrajectory::smoothstep(Shape::Quintic, x0, dc, t_s)?,
        yh: FlatTrajectory::smoothstep(Shape::Quintic, y0, ds, t_s)?,
        yl: FlatTrajectory::smoothstep(Shape::Quintic, y0, ds, t_s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn trolley_coefficients() {
        let tr = build_trolley_flat(1.0, 2.0, 7.0).unwrap();
        let c = tr.coeffs();
        assert_eq!(c.len(), 16);
        assert_eq!(c[0], 1.0);
        assert!(c[1..8].iter().all(|&v| v == 0.0));
        assert_eq!(c[8], 6435.0);
        assert_eq!(c[15], -3432.0);
    }

    #[test]
    fn coefficient_sums_are_one() {
        assert_eq!(SEPTIC_SMOOTHSTEP.iter().sum::<f64>(), 1.0);
        assert_eq!(QUINTIC_SMOOTHSTEP.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn zero_delta_is_constant() {
        let tr = build_trolley_flat(1.0, 1.0, 3.0).unwrap();
        assert!(tr.coeffs()[1..].iter().all(|&v| v == 0.0));
        let s = tr.eval_derivs(1.3, 7).unwrap();
        assert_eq!(s.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn midpoint_value() {
        let tr = build_trolley_flat(1.0, 2.0, 7.0).unwrap();
        assert_relative_eq!(tr.eval_derivs(3.5, 0).unwrap().order(0), 1.5, epsilon = 1e-12);
        let q = FlatTrajectory::smoothstep(Shape::Quintic, 0.2, 0.6, 4.0).unwrap();
        assert_relative_eq!(q.eval_derivs(2.0, 0).unwrap().order(0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn invalid_time() {
        assert_eq!(build_trolley_flat(1.0, 2.0, 0.0).unwrap_err(), Error::InvalidTime(0.0));
        assert!(build_trolley_flat(1.0, 2.0, -1.0).is_err());
        let tr = build_trolley_flat(1.0, 2.0, 2.0).unwrap();
        assert!(matches!(tr.eval_derivs(2.5, 1), Err(Error::OutOfRange { .. })));
        assert!(tr.eval_derivs(-0.1, 1).is_err());
        assert!(tr.eval_derivs(1.0, 8).is_err());
    }

    #[test]
    fn septic_start_derivatives_exactly_zero() {
        let tr = build_trolley_flat(0.3, 2.9, 5.0).unwrap();
        let s = tr.eval_derivs(0.0, 7).unwrap();
        assert_eq!(s.order(0), 0.3);
        assert!(s.as_slice()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn quintic_end_rates_exactly_zero() {
        let q = FlatTrajectory::smoothstep(Shape::Quintic, 0.0, 1.0, 4.0).unwrap();
        let s = q.eval_derivs(4.0, 2).unwrap();
        assert_eq!(s.order(1), 0.0);
        assert_eq!(s.order(2), 0.0);
    }

    #[test]
    fn slew_boundary_values() {
        let f = build_slew_flats(30f64.to_radians(), 60f64.to_radians(), 1.0, 6.51).unwrap();
        assert_relative_eq!(f.xl.eval_derivs(0.0, 0).unwrap().order(0), 0.8660254037844387, epsilon = 1e-12);
        assert_relative_eq!(f.xl.eval_derivs(6.51, 0).unwrap().order(0), 0.5, epsilon = 1e-12);
        assert_eq!(f.yh.coeffs(), f.yl.coeffs());
        let mid = f.xh.eval_derivs(6.51 / 2.0, 0).unwrap().order(0);
        let ci = 30f64.to_radians().cos();
        assert_relative_eq!(mid, ci + 0.5 * (0.5 - ci), epsilon = 1e-12);
    }

    #[test]
    fn slew_zero_delta_constant() {
        let th = 45f64.to_radians();
        let f = build_slew_flats(th, th, 2.0, 3.0).unwrap();
        for tr in [&f.xl, &f.xh, &f.yh, &f.yl] {
            assert!(tr.coeffs()[1..].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn slew_singular_range_rejected() {
        assert!(matches!(
            build_slew_flats(0.5f64.to_radians(), 60f64.to_radians(), 1.0, 5.0),
            Err(Error::SlewSingularity { .. })
        ));
        assert!(build_slew_flats(30f64.to_radians(), 179.5f64.to_radians(), 1.0, 5.0).is_err());
        assert!(build_slew_flats(0.5, 1.0, 1.0, 0.0).is_err());
    }

    fn central_difference(tr: &FlatTrajectory, t: f64, order: usize, h: f64) -> f64 {
        let f = |x: f64| tr.eval_derivs(x, order - 1).unwrap().order(order - 1);
        (f(t + h) - f(t - h)) / (2.0 * h)
    }

    proptest! {
        #[test]
        fn derivatives_match_finite_differences(
            start in -5.0..5.0f64,
            delta in 0.1..5.0f64,
            t_op in 1.0..10.0f64,
            frac in 0.05..0.95f64,
            septic in any::<bool>(),
        ) {
            let shape = if septic { Shape::Septic } else { Shape::Quintic };
            let tr = FlatTrajectory::smoothstep(shape, start, delta, t_op).unwrap();
            let t = frac * t_op;
            let h = 1e-5 * t_op;
            let exact = tr.eval_derivs(t, 4).unwrap();
            for n in 1..=4 {
                let fd = central_difference(&tr, t, n, h);
                let scale = exact.order(n).abs().max(delta / t_op.powi(n as i32));
                prop_assert!((fd - exact.order(n)).abs() <= 1e-6 * scale,
                    "order {}: fd {} exact {}", n, fd, exact.order(n));
            }
        }

        #[test]
        fn linear_in_delta(delta in -3.0..3.0f64, t_op in 0.5..9.0f64, frac in 0.0..1.0f64) {
            let a = build_trolley_flat(1.0, 1.0 + delta, t_op).unwrap();
            let b = build_trolley_flat(1.0, 1.0 + 2.0 * delta, t_op).unwrap();
            let t = frac * t_op;
            let pa = a.eval_derivs(t, 0).unwrap().order(0) - 1.0;
            let pb = b.eval_derivs(t, 0).unwrap().order(0) - 1.0;
            prop_assert!((pb - 2.0 * pa).abs() <= 1e-12 * (1.0 + pb.abs()));
        }

        #[test]
        fn septic_time_reversal(start in -3.0..3.0f64, delta in -3.0..3.0f64,
                                t_op in 0.5..9.0f64, frac in 0.0..1.0f64) {
            let tr = FlatTrajectory::smoothstep(Shape::Septic, start, delta, t_op).unwrap();
            let t = frac * t_op;
            let a = tr.eval_derivs(t, 0).unwrap().order(0);
            let b = tr.eval_derivs(t_op - t, 0).unwrap().order(0);
            prop_assert!((a + b - (2.0 * start + delta)).abs() <= 1e-10);
        }

        #[test]
        fn derivative_time_scaling(delta in 0.1..3.0f64, t_op in 0.5..5.0f64, frac in 0.0..1.0f64) {
            let a = FlatTrajectory::smoothstep(Shape::Septic, 0.0, delta, t_op).unwrap();
            let b = FlatTrajectory::smoothstep(Shape::Septic, 0.0, delta, 2.0 * t_op).unwrap();
            let sa = a.eval_normalized(frac, 7).unwrap();
            let sb = b.eval_normalized(frac, 7).unwrap();
            for n in 0..=7 {
                let ratio = 2f64.powi(n as i32);
                prop_assert!((sa.order(n) - ratio * sb.order(n)).abs() <= 1e-12 * sa.order(n).abs().max(1e-300));
            }
        }
    }
}
