//! Single-photon polarization states, basis changes, reflection off the
//! cavity and detection statistics when the emitters are left in a
//! bright/dark superposition.
//!
//! Frames: the cavity axes are `(e1, e2)`; a lab frame `(x, y)` at angle
//! `φ` is related by `x = cos φ e1 - sin φ e2`, `y = sin φ e1 + cos φ e2`.
//! Angles of linear polarization are axes, so they are reported in
//! `(-π/2, π/2]`.

use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::{Complex64, Error, Result};

const UNITARITY_TOLERANCE: f64 = 1e-12;
const NORM_TOLERANCE: f64 = 1e-9;

/// `A|1⟩|0⟩ + B|0⟩|1⟩ + C|0⟩|0⟩` in some pair of orthogonal polarization
/// modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    pub a: Complex64,
    pub b: Complex64,
    /// Vacuum amplitude.
    pub c: Complex64,
}

impl PolarizationState {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    /// Photon linearly polarized along the first mode.
    pub fn first() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn second() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()
    }

    pub fn photon_probability(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        let s = 1.0 / n.sqrt();
        Ok(Self::new(self.a * s, self.b * s, self.c * s))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.a.conj() * other.a + self.b.conj() * other.b + self.c.conj() * other.c
    }

    fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }
}

/// Unitary change of polarization basis with matrix rows
/// `(α, β; -β* e^{iχ}, α* e^{iχ})`.
///
/// New mode operators follow `c_old1 = t11 c_new1 + t21 c_new2`,
/// `c_old2 = t12 c_new1 + t22 c_new2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTransform {
    m: [[Complex64; 2]; 2],
}

impl BasisTransform {
    pub fn new(alpha: Complex64, beta: Complex64, chi: f64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > UNITARITY_TOLERANCE || !chi.is_finite() {
            return Err(Error::NotUnitary((n - 1.0).abs()));
        }
        let phase = Complex64::from_polar(1.0, chi);
        Ok(Self { m: [[alpha, beta], [-beta.conj() * phase, alpha.conj() * phase]] })
    }

    /// Arbitrary 2×2 matrix, accepted if unitary to `1e-12`.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let t = Self { m };
        let dev = t.unitarity_deviation();
        if dev > UNITARITY_TOLERANCE || !dev.is_finite() {
            return Err(Error::NotUnitary(dev));
        }
        Ok(t)
    }

    /// Rotation of the axes by `φ`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { m: [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)]] }
    }

    /// From the Cartesian axes to circular modes `(e1 ± i e2)/√2`.
    pub fn circular() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self { m: [[Complex64::new(h, 0.0), Complex64::new(0.0, h)], [Complex64::new(h, 0.0), Complex64::new(0.0, -h)]] }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    /// Max-abs entry of `T T† - 1`.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.m;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let v = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((v - target).norm());
            }
        }
        dev
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Self {
        let (a, b) = (&next.m, &self.m);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    /// Creation operators of the old modes in terms of the new ones:
    /// `c†_old1 = t11* c†_new1 + t21* c†_new2`, and likewise for mode 2.
    pub fn creation_map(&self) -> [[Complex64; 2]; 2] {
        let m = &self.m;
        [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
    }
}

/// Expresses `state` in the new basis; the vacuum amplitude is untouched.
pub fn transform_state(state: &PolarizationState, t: &BasisTransform) -> Result<PolarizationState> {
    let dev = t.unitarity_deviation();
    if dev > UNITARITY_TOLERANCE || !dev.is_finite() {
        return Err(Error::NotUnitary(dev));
    }
    let m = &t.m;
    Ok(PolarizationState {
        a: state.a * m[0][0].conj() + state.b * m[0][1].conj(),
        b: state.a * m[1][0].conj() + state.b * m[1][1].conj(),
        c: state.c,
    })
}

/// Reduces an axis angle to `(-π/2, π/2]`.
pub fn reduce_axis_angle(angle: f64) -> f64 {
    let r = angle - (angle / PI).floor() * PI;
    if r > FRAC_PI_2 { r - PI } else { r }
}

/// Orientation of the reflected polarization relative to `e1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedAngle {
    /// `φ'` for real `R1`; major-axis orientation otherwise. NaN when no
    /// photon is reflected.
    pub angle: f64,
    /// The reflected light is elliptically polarized, so `angle` is the
    /// major axis rather than a plane of linear polarization.
    pub elliptical: bool,
}

/// `φ'` with `tan φ' = -tan φ / R1` for a photon polarized along `x`.
pub fn rotation_angle_after_reflection(phi: f64, r1: Complex64) -> ReflectedAngle {
    let (s, c) = phi.sin_cos();
    let e1 = r1 * c;
    let e2 = Complex64::new(-s, 0.0);
    polarization_axis(e1, e2)
}

/// Orientation (relative to the first mode) of the polarization with field
/// components `(e1, e2)`.
pub fn polarization_axis(e1: Complex64, e2: Complex64) -> ReflectedAngle {
    let scale = e1.norm_sqr() + e2.norm_sqr();
    if scale == 0.0 {
        return ReflectedAngle { angle: f64::NAN, elliptical: false };
    }
    let cross = e1 * e2.conj();
    let elliptical = cross.im.abs() > 1e-12 * scale;
    let angle = if e1.im == 0.0 && e2.im == 0.0 {
        e2.re.atan2(e1.re)
    } else if !elliptical {
        // linear with a common phase: rotate it away
        let phase = if e1.norm() >= e2.norm() { e1 / e1.norm() } else { e2 / e2.norm() };
        let (a, b) = (e1 * phase.conj(), e2 * phase.conj());
        b.re.atan2(a.re)
    } else {
        0.5 * (2.0 * cross.re).atan2(e1.norm_sqr() - e2.norm_sqr())
    };
    ReflectedAngle { angle: reduce_axis_angle(angle), elliptical }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionOutput {
    /// Reflected state in the cavity axes `(e1, e2)`.
    pub state: PolarizationState,
    pub phi_prime: ReflectedAngle,
    /// No photon amplitude survives (e.g. `R1 = 0` with the photon along `e1`).
    pub absorbed: bool,
}

/// Reflects a photon given in the lab frame `(x, y)`; the `e1` component is
/// multiplied by `r1`, `e2` is reflected unchanged, and the lost probability
/// moves into a real, nonnegative vacuum amplitude.
pub fn reflect_polarization(incident: &PolarizationState, phi: f64, r1: Complex64) -> Result<ReflectionOutput> {
    incident.check_normalized()?;
    if !r1.re.is_finite() || !r1.im.is_finite() {
        return Err(Error::InvalidParameter { name: "r1", reason: "must be finite" });
    }
    let cavity_frame = transform_state(incident, &BasisTransform::rotation(phi))?;
    let a = cavity_frame.a * r1;
    let b = cavity_frame.b;
    let lost = (cavity_frame.a.norm_sqr() * (1.0 - r1.norm_sqr())).max(0.0);
    let vacuum = (cavity_frame.c.norm_sqr() + lost).sqrt();
    let state = PolarizationState::new(a, b, Complex64::new(vacuum, 0.0));
    let photon = state.photon_probability();
    Ok(ReflectionOutput {
        state,
        phi_prime: polarization_axis(a, b),
        absorbed: photon <= 1e-12 * incident.norm_sqr(),
    })
}

/// Photon incident on emitters left in `G|ground⟩ + D|dark⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionInput {
    /// Real incident amplitudes along `e1`, `e2`.
    pub c1: f64,
    pub c2: f64,
    pub g: Complex64,
    pub d: Complex64,
    /// Reflection coefficient with the emitters coupled (ground branch).
    pub r_bright: Complex64,
    /// Reflection coefficient with the emitters decoupled (dark branch).
    pub r_dark: Complex64,
}

impl SuperpositionInput {
    /// Photon polarized along `x` at angle `φ` to the cavity axis, with the
    /// strong-coupling idealization `R1 = 1` (ground) and `R1 = -1` (dark).
    pub fn idealized(phi: f64, g: Complex64, d: Complex64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { c1: c, c2: -s, g, d, r_bright: Complex64::new(1.0, 0.0), r_dark: Complex64::new(-1.0, 0.0) }
    }
}

/// Reflected photon entangled with the emitter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledOutput {
    pub g: Complex64,
    pub d: Complex64,
    /// Photon state (cavity axes) accompanying the ground branch.
    pub bright: PolarizationState,
    /// Photon state (cavity axes) accompanying the dark branch.
    pub dark: PolarizationState,
    /// Incident polarization direction in the cavity axes; `θ` is measured
    /// from it.
    pub x_axis: [f64; 2],
}

impl EntangledOutput {
    /// Total probability that a photon is reflected.
    pub fn photon_probability(&self) -> f64 {
        self.g.norm_sqr() * self.bright.photon_probability() + self.d.norm_sqr() * self.dark.photon_probability()
    }

    /// Probability density of detecting the photon behind a linear
    /// polarizer at angle `θ ∈ [-π/2, π/2]` from the incident polarization,
    /// conditioned on a photon being present.
    pub fn detection_density(&self, theta: f64) -> f64 {
        let total = self.photon_probability();
        if total == 0.0 {
            return 0.0;
        }
        let [x1, x2] = self.x_axis;
        let (s, c) = theta.sin_cos();
        // y = (-x2, x1)
        let u1 = c * x1 - s * x2;
        let u2 = c * x2 + s * x1;
        let proj = |st: &PolarizationState| (st.a * u1 + st.b * u2).norm_sqr();
        let weight = self.g.norm_sqr() * proj(&self.bright) + self.d.norm_sqr() * proj(&self.dark);
        2.0 / PI * weight / total
    }

    /// Overlap `|⟨bright|dark⟩|` of the normalized photon states of the two
    /// branches.
    pub fn branch_overlap(&self) -> f64 {
        let nb = self.bright.photon_probability().sqrt();
        let nd = self.dark.photon_probability().sqrt();
        if nb == 0.0 || nd == 0.0 {
            return 0.0;
        }
        (self.bright.a.conj() * self.dark.a + self.bright.b.conj() * self.dark.b).norm() / (nb * nd)
    }
}

pub fn reflect_superposition(input: &SuperpositionInput) -> Result<EntangledOutput> {
    let branches = input.g.norm_sqr() + input.d.norm_sqr();
    if (branches - 1.0).abs() > NORM_TOLERANCE || !branches.is_finite() {
        return Err(Error::NotNormalized(branches));
    }
    let photon = input.c1 * input.c1 + input.c2 * input.c2;
    if (photon - 1.0).abs() > NORM_TOLERANCE || !photon.is_finite() {
        return Err(Error::NotNormalized(photon));
    }
    let branch = |r: Complex64| {
        let a = r * input.c1;
        let lost = (input.c1 * input.c1 * (1.0 - r.norm_sqr())).max(0.0);
        PolarizationState::new(a, Complex64::new(input.c2, 0.0), Complex64::new(lost.sqrt(), 0.0))
    };
    Ok(EntangledOutput {
        g: input.g,
        d: input.d,
        bright: branch(input.r_bright),
        dark: branch(input.r_dark),
        x_axis: [input.c1, input.c2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rotate_basis_vector() {
        let s = transform_state(&PolarizationState::first(), &BasisTransform::rotation(FRAC_PI_4)).unwrap();
        assert!((s.a - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.b + c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(s.c, c(0.0));
    }

    #[test]
    fn rotate_onto_axis() {
        let phi = 0.37;
        let st = PolarizationState::new(c(phi.cos()), c(phi.sin()), c(0.0));
        let s = transform_state(&st, &BasisTransform::rotation(phi)).unwrap();
        assert!((s.a - c(1.0)).norm() < 1e-15 && s.b.norm() < 1e-15);
    }

    #[test]
    fn circular_roundtrip() {
        let t = BasisTransform::circular();
        let alt = BasisTransform::new(c(FRAC_1_SQRT_2), Complex64::new(0.0, FRAC_1_SQRT_2), -FRAC_PI_2).unwrap();
        for (x, y) in t.matrix().iter().flatten().zip(alt.matrix().iter().flatten()) {
            assert!((x - y).norm() < 1e-15);
        }
        let st = PolarizationState::new(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5), Complex64::new(0.0, 0.2));
        let there = transform_state(&st, &t).unwrap();
        let back = transform_state(&there, &t.inverse()).unwrap();
        assert!((back.a - st.a).norm() < 1e-15 && (back.b - st.b).norm() < 1e-15 && back.c == st.c);
    }

    #[test]
    fn circular_modes() {
        // a photon along e1 is an equal superposition of the circular modes
        let s = transform_state(&PolarizationState::first(), &BasisTransform::circular()).unwrap();
        assert!((s.a.norm_sqr() - 0.5).abs() < 1e-15 && (s.b.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        assert!(BasisTransform::new(c(1.0), c(0.1), 0.0).is_err());
        assert!(BasisTransform::from_matrix([[c(1.0), c(0.0)], [c(0.0), c(2.0)]]).is_err());
    }

    #[test]
    fn perfect_mirror_preserves_polarization() {
        for phi in [-1.2, -0.3, 0.0, 0.4, 1.1] {
            let out = reflect_polarization(&PolarizationState::first(), phi, c(1.0)).unwrap();
            assert!((out.phi_prime.angle + phi).abs() < 1e-12);
            assert!(!out.phi_prime.elliptical);
        }
    }

    #[test]
    fn empty_cavity_rotates_by_right_angle() {
        let out = reflect_polarization(&PolarizationState::first(), FRAC_PI_4, c(-1.0)).unwrap();
        assert!((out.phi_prime.angle - FRAC_PI_4).abs() < 1e-12);
        // overlap with the incident polarization (cos φ, -sin φ) vanishes
        let overlap = out.state.a * FRAC_PI_4.cos() - out.state.b * FRAC_PI_4.sin();
        assert!(overlap.norm() < 1e-15);
    }

    #[test]
    fn critical_coupling_leaves_e2() {
        let out = reflect_polarization(&PolarizationState::first(), FRAC_PI_4, c(0.0)).unwrap();
        assert_eq!(out.state.a, c(0.0));
        assert!((out.state.b + c(FRAC_PI_4.sin())).norm() < 1e-15);
        assert!((out.state.c - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.state.norm_sqr() - 1.0).abs() < 1e-15);
        let gone = reflect_polarization(&PolarizationState::first(), 0.0, c(0.0)).unwrap();
        assert!(gone.absorbed && gone.phi_prime.angle.is_nan());
    }

    #[test]
    fn complex_reflection_is_elliptical() {
        let out = reflect_polarization(&PolarizationState::first(), 0.5, Complex64::new(0.3, 0.6)).unwrap();
        assert!(out.phi_prime.elliptical);
        let out = reflect_polarization(&PolarizationState::first(), 0.0, Complex64::new(0.3, 0.6)).unwrap();
        assert!(!out.phi_prime.elliptical && out.phi_prime.angle.abs() < 1e-15);
    }

    #[test]
    fn superposition_density() {
        let h = c(FRAC_1_SQRT_2);
        let out = reflect_superposition(&SuperpositionInput::idealized(FRAC_PI_4, h, h)).unwrap();
        for i in 0..=20 {
            let theta = -FRAC_PI_2 + PI * i as f64 / 20.0;
            assert!((out.detection_density(theta) - 1.0 / PI).abs() < 1e-12);
        }
        let ground = reflect_superposition(&SuperpositionInput::idealized(FRAC_PI_4, c(1.0), c(0.0))).unwrap();
        for theta in [-1.0, 0.0, 0.3, 1.5] {
            let expect = 2.0 / PI * theta.cos().powi(2);
            assert!((ground.detection_density(theta) - expect).abs() < 1e-12);
        }
        assert!(out.branch_overlap() < 1e-15);
    }

    #[test]
    fn superposition_along_axis_is_separable() {
        let out = reflect_superposition(&SuperpositionInput::idealized(0.0, c(0.6), c(0.8))).unwrap();
        assert!((out.bright.a - c(1.0)).norm() < 1e-15 && (out.dark.a + c(1.0)).norm() < 1e-15);
        assert!(out.bright.b.norm() < 1e-15 && out.dark.b.norm() < 1e-15);
    }

    #[test]
    fn superposition_requires_normalized_branches() {
        let bad = SuperpositionInput::idealized(0.3, c(1.0), c(1.0));
        assert!(matches!(reflect_superposition(&bad), Err(Error::NotNormalized(_))));
    }
}
