//! Crane constants and the differential-flatness maps of the linearized
//! double-pendulum hook-payload unit.
//!
//! For trolley moves the payload position along the jib, `d_l`, is the flat
//! output. For slew moves the hook and payload plan-view coordinates
//! `x_h, y_h, x_l, y_l` are. Every actuated and swing state is an algebraic
//! function of these outputs and finitely many of their time derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest derivative order carried by a [`FlatDerivStack`].
pub const MAX_ORDER: usize = 7;

/// Slew poses closer than this to 0 or 180 degrees are rejected, since the
/// slew rate maps divide by `sin(theta_S)`.
pub const SLEW_SINGULARITY_MARGIN_DEG: f64 = 1.0;

/// Round-off allowance on `|x_T / D_T|` before the arccos is rejected.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Sign of the fourth-derivative terms in the trolley maps.
///
/// The published hook-swing and trolley-position maps carry
/// `+ m_h D_l / (m_hl g²) d_l` and `- m_h D_h D_l / (m_hl g²) d_l`.
/// Eliminating the swings from the linearized equations of motion gives the
/// opposite sign on both terms. `Published` reproduces the reference optima;
/// `OdeConsistent` is the exact inverse of the simulated dynamics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapConvention {
    #[default]
    Published,
    OdeConsistent,
}

impl SnapConvention {
    fn sign(self) -> f64 {
        match self {
            SnapConvention::Published => 1.0,
            SnapConvention::OdeConsistent => -1.0,
        }
    }
}

/// Physical constants of the hook-payload unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CraneParams {
    /// Hook mass `m_h` (kg).
    pub hook_mass: f64,
    /// Payload mass `m_l` (kg).
    pub payload_mass: f64,
    /// Hoist-cable length `D_h` (m).
    pub hoist_length: f64,
    /// Rig-cable length `D_l` (m).
    pub rig_length: f64,
    /// Gravitational acceleration (m/s²).
    pub gravity: f64,
    #[serde(default)]
    pub convention: SnapConvention,
}

impl CraneParams {
    pub fn new(hook_mass: f64, payload_mass: f64, hoist_length: f64, rig_length: f64, gravity: f64) -> Result<Self> {
        let p =
            Self { hook_mass, payload_mass, hoist_length, rig_length, gravity, convention: SnapConvention::Published };
        p.validate()?;
        Ok(p)
    }

    /// The 1:10 scale crane used throughout the examples: 0.5 kg hook, 1 kg
    /// payload, 3 m hoist cable, 1.5 m rig cable, g = 9.8 m/s².
    pub fn scale_model() -> Self {
        Self {
            hook_mass: 0.5,
            payload_mass: 1.0,
            hoist_length: 3.0,
            rig_length: 1.5,
            gravity: 9.8,
            convention: SnapConvention::Published,
        }
    }

    pub fn with_convention(self, convention: SnapConvention) -> Self {
        Self { convention, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("hook_mass", self.hook_mass),
            ("payload_mass", self.payload_mass),
            ("hoist_length", self.hoist_length),
            ("rig_length", self.rig_length),
            ("gravity", self.gravity),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// `m_hl = m_h + m_l`.
    pub fn total_mass(&self) -> f64 {
        self.hook_mass + self.payload_mass
    }

    /// `D_H = D_h + D_l`.
    pub fn total_length(&self) -> f64 {
        self.hoist_length + self.rig_length
    }

    /// Gain on the second flat derivative in the trolley map, `D_H / g`.
    pub fn accel_gain(&self) -> f64 {
        self.total_length() / self.gravity
    }

    /// Gain subtracted from the fourth flat derivative in the trolley map,
    /// `±m_h D_h D_l / (m_hl g²)` with the sign of the convention.
    pub fn snap_gain(&self) -> f64 {
        self.convention.sign() * self.hook_mass * self.hoist_length * self.rig_length
            / (self.total_mass() * self.gravity * self.gravity)
    }

    /// Gain added to the fourth flat derivative in the hook swing map,
    /// `±m_h D_l / (m_hl g²)`.
    pub fn hook_snap_gain(&self) -> f64 {
        self.convention.sign() * self.hook_mass * self.rig_length / (self.total_mass() * self.gravity * self.gravity)
    }

    /// Applies the trolley map to a window of three derivatives
    /// `(p, p'', p'''')` shifted by `shift`: returns
    /// `p^(s) + (D_H/g) p^(s+2) - snap_gain p^(s+4)`.
    pub(crate) fn project(&self, stack: &FlatDerivStack, shift: usize) -> f64 {
        stack.order(shift) + self.accel_gain() * stack.order(shift + 2) - self.snap_gain() * stack.order(shift + 4)
    }
}

/// A flat output and its time derivatives, orders `0..=k` with `k <= 7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatDerivStack {
    values: [f64; MAX_ORDER + 1],
    len: usize,
}

impl FlatDerivStack {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_ORDER + 1 {
            return Err(Error::InvalidInput(format!(
                "derivative stack needs 1..={} entries, got {}",
                MAX_ORDER + 1,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite derivative value {v}")));
        }
        let mut buf = [0.0; MAX_ORDER + 1];
        buf[..values.len()].copy_from_slice(values);
        Ok(Self { values: buf, len: values.len() })
    }

    /// A stack at rest at `value`, with `max_order` vanishing derivatives.
    pub fn at_rest(value: f64, max_order: usize) -> Result<Self> {
        let mut buf = [0.0; MAX_ORDER + 1];
        buf[0] = value;
        Self::new(&buf[..=max_order.min(MAX_ORDER)])
    }

    pub(crate) fn from_raw(values: [f64; MAX_ORDER + 1], len: usize) -> Self {
        Self { values, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn max_order(&self) -> usize {
        self.len - 1
    }

    /// Derivative of order `n`. Panics if `n` exceeds the stack.
    pub fn order(&self, n: usize) -> f64 {
        assert!(n < self.len, "order {n} not present in stack of length {}", self.len);
        self.values[n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len]
    }

    fn require(&self, what: &str, min_len: usize) -> Result<()> {
        if self.len < min_len {
            return Err(Error::InvalidInput(format!(
                "{what} needs derivatives up to order {}, got {}",
                min_len - 1,
                self.max_order()
            )));
        }
        Ok(())
    }
}

/// Actuated and swing states of a trolley move.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrolleyState {
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
    pub hook_swing: f64,
    pub payload_swing: f64,
    pub hook_swing_rate: f64,
    pub payload_swing_rate: f64,
    pub hook_swing_accel: f64,
    pub payload_swing_accel: f64,
}

/// Actuated and swing states of a slew move.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlewState {
    /// Slew angle (rad).
    pub angle: f64,
    pub rate: f64,
    pub acceleration: f64,
    /// Radial hook swing `alpha_h`.
    pub hook_radial: f64,
    /// Tangential hook swing `beta_h`.
    pub hook_tangential: f64,
    /// Radial payload swing `alpha_l`.
    pub payload_radial: f64,
    /// Tangential payload swing `beta_l`.
    pub payload_tangential: f64,
    /// Projected trolley x coordinate `x_T` (m).
    pub trolley_x: f64,
}

/// Maps the payload flat output `d_l` (orders 0..=6) to the trolley state.
///
/// Swing rates and accelerations come from differentiating the swing maps
/// symbolically, which shifts the required orders up by one and two.
pub fn trolley_states_from_flat(dl: &FlatDerivStack, params: &CraneParams) -> Result<TrolleyState> {
    dl.require("trolley flatness map", 7)?;
    let g = params.gravity;
    let kh = params.hook_snap_gain();
    Ok(TrolleyState {
        position: params.project(dl, 0),
        velocity: params.project(dl, 1),
        acceleration: params.project(dl, 2),
        hook_swing: -dl.order(2) / g + kh * dl.order(4),
        payload_swing: -dl.order(2) / g,
        hook_swing_rate: -dl.order(3) / g + kh * dl.order(5),
        payload_swing_rate: -dl.order(3) / g,
        hook_swing_accel: -dl.order(4) / g + kh * dl.order(6),
        payload_swing_accel: -dl.order(4) / g,
    })
}

/// Radial and tangential swings `(alpha_h, beta_h, alpha_l, beta_l)` of hook
/// and payload positions seen from a jib at slew angle `angle`.
pub fn swing_angles_from_positions(
    angle: f64,
    jib_radius: f64,
    hook: (f64, f64),
    payload: (f64, f64),
    params: &CraneParams,
) -> (f64, f64, f64, f64) {
    let (s, c) = angle.sin_cos();
    swing_angles_cs(c, s, jib_radius, hook, payload, params)
}

fn swing_angles_cs(
    c: f64,
    s: f64,
    jib_radius: f64,
    (xh, yh): (f64, f64),
    (xl, yl): (f64, f64),
    params: &CraneParams,
) -> (f64, f64, f64, f64) {
    let dh = params.hoist_length;
    let dl = params.rig_length;
    let alpha_h = (xh * c + yh * s - jib_radius) / dh;
    let beta_h = (yh * c - xh * s) / dh;
    let alpha_l = (xl * c + yl * s - xh * c - yh * s) / dl;
    let beta_l = (yl * c - xl * s + xh * s - yh * c) / dl;
    (alpha_h, beta_h, alpha_l, beta_l)
}

/// `x_T / D_T` from the payload x flat output, clamped into `[-1, 1]` when
/// within [`PROJECTION_TOL`] of the boundary.
pub fn slew_cosine(xl: &FlatDerivStack, jib_radius: f64, params: &CraneParams) -> Result<(f64, f64)> {
    let trolley_x = params.project(xl, 0);
    let ratio = trolley_x / jib_radius;
    if !ratio.is_finite() || ratio.abs() > 1.0 + PROJECTION_TOL {
        return Err(Error::ProjectionOutOfRange { ratio });
    }
    Ok((ratio.clamp(-1.0, 1.0), trolley_x))
}

/// Maps the slew flat outputs to the slew state.
///
/// `xh`, `yh`, `yl` need orders 0..=2 and `xl` needs 0..=6. The slew angle is
/// taken on the arccos branch, so it lies in `[0, pi]`.
pub fn slew_states_from_flat(
    xh: &FlatDerivStack,
    yh: &FlatDerivStack,
    xl: &FlatDerivStack,
    yl: &FlatDerivStack,
    jib_radius: f64,
    params: &CraneParams,
) -> Result<SlewState> {
    if !(jib_radius.is_finite() && jib_radius > 0.0) {
        return Err(Error::InvalidInput(format!("jib radius must be > 0, got {jib_radius}")));
    }
    xh.require("slew map (x_h)", 3)?;
    yh.require("slew map (y_h)", 3)?;
    yl.require("slew map (y_l)", 3)?;
    xl.require("slew map (x_l)", 7)?;

    let (c, trolley_x) = slew_cosine(xl, jib_radius, params)?;
    let angle = c.acos();
    let s = angle.sin();
    if s.abs() < SLEW_SINGULARITY_MARGIN_DEG.to_radians().sin() {
        return Err(Error::SlewSingularity { theta_deg: angle.to_degrees() });
    }

    let (hook_radial, hook_tangential, payload_radial, payload_tangential) =
        swing_angles_cs(c, s, jib_radius, (xh.order(0), yh.order(0)), (xl.order(0), yl.order(0)), params);

    let vel = params.project(xl, 1) / jib_radius;
    let acc = params.project(xl, 2) / jib_radius;
    let rate = -vel / s;
    let acceleration = -c / (s * s * s) * vel * vel - acc / s;

    Ok(SlewState {
        angle,
        rate,
        acceleration,
        hook_radial,
        hook_tangential,
        payload_radial,
        payload_tangential,
        trolley_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn stack(v: &[f64]) -> FlatDerivStack {
        FlatDerivStack::new(v).unwrap()
    }

    #[test]
    fn derived_constants() {
        let p = CraneParams::scale_model();
        assert_eq!(p.total_mass(), 1.5);
        assert_eq!(p.total_length(), 4.5);
    }

    #[test]
    fn rejects_nonpositive_params() {
        assert!(CraneParams::new(0.0, 1.0, 3.0, 1.5, 9.8).is_err());
        assert!(CraneParams::new(0.5, 1.0, 3.0, f64::NAN, 9.8).is_err());
    }

    #[test]
    fn trolley_static_equilibrium() {
        let p = CraneParams::scale_model();
        let s = trolley_states_from_flat(&FlatDerivStack::at_rest(1.7, 6).unwrap(), &p).unwrap();
        assert_eq!(s, TrolleyState { position: 1.7, ..Default::default() });
    }

    #[test]
    fn trolley_swing_from_payload_acceleration() {
        let p = CraneParams::scale_model();
        let s = trolley_states_from_flat(&stack(&[0.0, 0.0, -0.098, 0.0, 0.0, 0.0, 0.0]), &p).unwrap();
        assert_relative_eq!(s.payload_swing, 0.01, epsilon = 1e-15);
        assert_relative_eq!(s.hook_swing, 0.01, epsilon = 1e-15);
    }

    #[test]
    fn trolley_needs_order_six() {
        let p = CraneParams::scale_model();
        assert!(trolley_states_from_flat(&stack(&[0.0; 6]), &p).is_err());
    }

    #[test]
    fn stack_rejects_non_finite() {
        assert!(FlatDerivStack::new(&[0.0, f64::INFINITY]).is_err());
        assert!(FlatDerivStack::new(&[0.0; 9]).is_err());
        assert!(FlatDerivStack::new(&[]).is_err());
    }

    #[test]
    fn slew_static_pose() {
        let p = CraneParams::scale_model();
        let th = 30f64.to_radians();
        let (x, y) = (th.cos(), th.sin());
        let s = slew_states_from_flat(
            &FlatDerivStack::at_rest(x, 2).unwrap(),
            &FlatDerivStack::at_rest(y, 2).unwrap(),
            &FlatDerivStack::at_rest(x, 6).unwrap(),
            &FlatDerivStack::at_rest(y, 2).unwrap(),
            1.0,
            &p,
        )
        .unwrap();
        assert_relative_eq!(s.angle, th, epsilon = 1e-12);
        for v in [s.hook_radial, s.hook_tangential, s.payload_radial, s.payload_tangential] {
            assert!(v.abs() < 1e-12, "{v}");
        }
        assert_eq!(s.rate, 0.0);
        assert_eq!(s.acceleration, 0.0);
    }

    #[test]
    fn payload_offset_inverts_to_radial_swing() {
        let p = CraneParams::scale_model();
        let th = 30f64.to_radians();
        let eps = 0.01;
        let hook = (th.cos(), th.sin());
        let payload = (hook.0 + p.rig_length * eps * th.cos(), hook.1 + p.rig_length * eps * th.sin());
        let (ah, bh, al, bl) = swing_angles_from_positions(th, 1.0, hook, payload, &p);
        assert!(ah.abs() < 1e-15 && bh.abs() < 1e-15);
        assert_relative_eq!(al, eps, epsilon = 1e-14);
        assert!(bl.abs() < 1e-15);
    }

    #[test]
    fn projection_out_of_range_rejected() {
        let p = CraneParams::scale_model();
        let xl = FlatDerivStack::at_rest(1.5, 6).unwrap();
        let z = FlatDerivStack::at_rest(0.0, 2).unwrap();
        let err = slew_states_from_flat(&z, &z, &xl, &z, 1.0, &p).unwrap_err();
        assert!(matches!(err, Error::ProjectionOutOfRange { .. }));
    }

    #[test]
    fn projection_clamped_within_tolerance() {
        let p = CraneParams::scale_model();
        let xl = FlatDerivStack::at_rest(1.0 + 1e-12, 6).unwrap();
        let (c, _) = slew_cosine(&xl, 1.0, &p).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn singular_pose_rejected() {
        let p = CraneParams::scale_model();
        let x = 0.5f64.to_radians().cos();
        let xl = FlatDerivStack::at_rest(x, 6).unwrap();
        let z = FlatDerivStack::at_rest(0.0, 2).unwrap();
        let err = slew_states_from_flat(&z, &z, &xl, &z, 1.0, &p).unwrap_err();
        assert!(matches!(err, Error::SlewSingularity { .. }));
    }

    /// Residuals of the two linearized swing equations for a trolley state.
    fn swing_residuals(s: &TrolleyState, p: &CraneParams) -> (f64, f64) {
        let mu = p.payload_mass / p.total_mass();
        let common = s.acceleration + p.hoist_length * s.hook_swing_accel;
        (
            common + mu * p.rig_length * s.payload_swing_accel + p.gravity * s.hook_swing,
            common + p.rig_length * s.payload_swing_accel + p.gravity * s.payload_swing,
        )
    }

    proptest::proptest! {
        #[test]
        fn ode_consistent_maps_invert_dynamics(v in proptest::collection::vec(-10.0..10.0f64, 7)) {
            let p = CraneParams::scale_model().with_convention(SnapConvention::OdeConsistent);
            let s = trolley_states_from_flat(&FlatDerivStack::new(&v).unwrap(), &p).unwrap();
            let (r4, r5) = swing_residuals(&s, &p);
            proptest::prop_assert!(r4.abs() <= 1e-9 && r5.abs() <= 1e-9, "{} {}", r4, r5);
        }

        #[test]
        fn published_maps_leave_snap_residual(v in proptest::collection::vec(-10.0..10.0f64, 7)) {
            let p = CraneParams::scale_model();
            let s = trolley_states_from_flat(&FlatDerivStack::new(&v).unwrap(), &p).unwrap();
            let (r4, r5) = swing_residuals(&s, &p);
            let expected = 2.0 * p.hook_mass * p.rig_length / (p.total_mass() * p.gravity) * v[4];
            proptest::prop_assert!((r4 - expected).abs() <= 1e-9, "{} vs {}", r4, expected);
            proptest::prop_assert!(r5.abs() <= 1e-9);
        }

        #[test]
        fn payload_position_identity(v in proptest::collection::vec(-10.0..10.0f64, 7), consistent in proptest::bool::ANY) {
            let conv = if consistent { SnapConvention::OdeConsistent } else { SnapConvention::Published };
            let p = CraneParams::scale_model().with_convention(conv);
            let s = trolley_states_from_flat(&FlatDerivStack::new(&v).unwrap(), &p).unwrap();
            let terms = [s.position, p.hoist_length * s.hook_swing, p.rig_length * s.payload_swing];
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            proptest::prop_assert!((terms.iter().sum::<f64>() - v[0]).abs() <= 1e-12 * scale);
        }
    }
}
