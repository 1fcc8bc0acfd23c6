//! Discretized external beam: periodic-boundary mode grid, Gaussian
//! single-photon wavepackets and their intensity profile.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::{Complex64, Error, Result};

/// Minimum number of mode spacings per unit of pulse bandwidth.
pub const MODES_PER_BANDWIDTH: f64 = 16.0;

/// Half-width of the pulse spectrum kept on the grid, in units of `σ`.
pub const SPECTRAL_MARGIN: f64 = 8.0;

/// Minimum distance of the initial pulse from the cavity, in pulse lengths.
pub const MIN_START_DISTANCE: f64 = 5.0;

/// Default relative tolerance for the locality checks.
pub const LOCALITY_TOLERANCE: f64 = 1e-3;

/// Equidistant wavenumbers `k_n = 2πn/L` (consecutive `n`) with linear
/// dispersion `ω_n = ω_c + v_g (k_n - k_c)`.
///
/// Detunings `Δ_n = ω_n - ω_c` are computed directly from the grid center so
/// they stay accurate even though `k_n` itself is large.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    length: f64,
    group_velocity: f64,
    omega_c: f64,
    center_detuning: f64,
    first_index: u64,
    modes: usize,
}

impl ModeGrid {
    pub fn len(&self) -> usize {
        self.modes
    }

    pub fn is_empty(&self) -> bool {
        self.modes == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn group_velocity(&self) -> f64 {
        self.group_velocity
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Detuning of the grid midpoint from the cavity.
    pub fn center_detuning(&self) -> f64 {
        self.center_detuning
    }

    /// Wavenumber spacing `2π/L`.
    pub fn k_spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Frequency spacing `2π v_g/L`.
    pub fn spacing(&self) -> f64 {
        self.group_velocity * self.k_spacing()
    }

    /// Time after which the discrete spectrum rephases, `L/v_g`.
    pub fn revival_period(&self) -> f64 {
        self.length / self.group_velocity
    }

    pub fn index(&self, j: usize) -> u64 {
        self.first_index + j as u64
    }

    pub fn k(&self, j: usize) -> f64 {
        self.k_spacing() * self.index(j) as f64
    }

    /// Wavenumber resonant with the cavity.
    pub fn k_c(&self) -> f64 {
        self.k(0) - self.detuning(0) / self.group_velocity
    }

    /// `Δ_j = ω_j - ω_c`.
    pub fn detuning(&self, j: usize) -> f64 {
        let offset = j as f64 - 0.5 * (self.modes as f64 - 1.0);
        self.center_detuning + offset * self.spacing()
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.omega_c + self.detuning(j)
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.modes).map(|j| self.detuning(j)).collect()
    }

    /// Largest `|Δ_j|` on the grid.
    pub fn max_abs_detuning(&self) -> f64 {
        self.detuning(0).abs().max(self.detuning(self.modes - 1).abs())
    }

    /// Span `k_max - k_min`.
    pub fn k_span(&self) -> f64 {
        self.k_spacing() * (self.modes as f64 - 1.0)
    }

    pub fn covers(&self, low_detuning: f64, high_detuning: f64) -> bool {
        let eps = 1e-12 * self.spacing();
        self.detuning(0) <= low_detuning + eps && self.detuning(self.modes - 1) >= high_detuning - eps
    }
}

/// Grid centered on the cavity frequency. See [`build_mode_grid_around`].
pub fn build_mode_grid(omega_c: f64, bandwidth: f64, modes: usize, length: f64, group_velocity: f64) -> Result<ModeGrid> {
    build_mode_grid_around(omega_c, 0.0, bandwidth, modes, length, group_velocity)
}

/// `modes` consecutive periodic-boundary modes centered at detuning
/// `center_detuning` from the cavity.
///
/// Rejects a spacing `2π v_g/L` coarser than `bandwidth / 16`. Whether the
/// grid also spans the pulse spectrum is checked by [`gaussian_wavepacket`].
pub fn build_mode_grid_around(
    omega_c: f64,
    center_detuning: f64,
    bandwidth: f64,
    modes: usize,
    length: f64,
    group_velocity: f64,
) -> Result<ModeGrid> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidParameter { name: "bandwidth", reason: "must be finite and > 0" });
    }
    if modes < 2 {
        return Err(Error::InvalidParameter { name: "modes", reason: "need at least two modes" });
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter { name: "length", reason: "must be finite and > 0" });
    }
    if !(group_velocity > 0.0) || !group_velocity.is_finite() {
        return Err(Error::InvalidParameter { name: "group_velocity", reason: "must be finite and > 0" });
    }
    if !omega_c.is_finite() || !center_detuning.is_finite() {
        return Err(Error::InvalidParameter { name: "center_detuning", reason: "must be finite" });
    }
    let spacing = 2.0 * PI * group_velocity / length;
    if spacing > bandwidth / MODES_PER_BANDWIDTH {
        return Err(Error::UndersampledSpectrum { spacing, bandwidth });
    }
    // keep every k, and k_c, positive
    let shift = (center_detuning.abs() / spacing).ceil() as u64;
    let first_index = modes as u64 + shift + 1;
    Ok(ModeGrid { length, group_velocity, omega_c, center_detuning, first_index, modes })
}

/// Incident single-photon pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec {
    /// Initial center position; the cavity sits at `s = 0`.
    pub s0: f64,
    /// RMS width of the spectral intensity in wavenumber.
    pub sigma_k: f64,
    /// Carrier detuning from the cavity, `ω_0 - ω_c = v_g (k_0 - k_c)`.
    pub carrier_detuning: f64,
    /// Amplitude along the cavity axis `e1`.
    pub e1: Complex64,
    /// Amplitude along `e2`.
    pub e2: Complex64,
}

impl WavepacketSpec {
    /// Nominal spectral width `Δk = 8σ_k` (the spectrum kept on the grid
    /// spans `k_0 ± Δk`).
    pub fn delta_k(&self) -> f64 {
        SPECTRAL_MARGIN * self.sigma_k
    }

    /// Pulse length `l_p = 2π/Δk`.
    pub fn pulse_length(&self) -> f64 {
        2.0 * PI / self.delta_k()
    }

    /// Distance from the pulse center beyond which the field envelope
    /// `exp(-σ_k² x²)` is below `tolerance` of its peak.
    pub fn support_half_width(&self, tolerance: f64) -> f64 {
        (1.0 / tolerance).ln().sqrt() / self.sigma_k
    }

    /// RMS width of the spectral intensity in frequency, `v_g σ_k`.
    pub fn bandwidth(&self, group_velocity: f64) -> f64 {
        group_velocity * self.sigma_k
    }

    /// Time for the pulse center to reach the cavity.
    pub fn arrival_time(&self, group_velocity: f64) -> f64 {
        -self.s0 / group_velocity
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_k > 0.0) || !self.sigma_k.is_finite() {
            return Err(Error::InvalidParameter { name: "sigma_k", reason: "must be finite and > 0" });
        }
        if !self.carrier_detuning.is_finite() {
            return Err(Error::InvalidParameter { name: "carrier_detuning", reason: "must be finite" });
        }
        if !(self.s0 < 0.0) || !self.s0.is_finite() {
            return Err(Error::NotLocalized("pulse must start at s0 < 0, left of the cavity"));
        }
        if -self.s0 < MIN_START_DISTANCE * self.pulse_length() {
            return Err(Error::NotLocalized("|s0| is less than five pulse lengths"));
        }
        let norm = self.e1.norm_sqr() + self.e2.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(())
    }
}

/// Initial amplitudes `C_1k(0)`, `C_2k(0)` over a [`ModeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Wavepacket {
    pub e1: Vec<Complex64>,
    pub e2: Vec<Complex64>,
}

impl Wavepacket {
    pub fn zeros(modes: usize) -> Self {
        Self { e1: alloc::vec![Complex64::new(0.0, 0.0); modes], e2: alloc::vec![Complex64::new(0.0, 0.0); modes] }
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.e1) + norm_sqr(&self.e2)
    }
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `C_k(0) ∝ exp(-(k-k_0)²/(4σ_k²)) exp(-i k s_0)`, normalized to one photon
/// and split between `e1` and `e2` as the spec requests.
///
/// Fails if the grid does not span `k_0 ± 8σ_k` or if the sampled pulse
/// overlaps the cavity at `t = 0`.
pub fn gaussian_wavepacket(grid: &ModeGrid, spec: &WavepacketSpec) -> Result<Wavepacket> {
    gaussian_wavepacket_with_tolerance(grid, spec, LOCALITY_TOLERANCE)
}

pub fn gaussian_wavepacket_with_tolerance(grid: &ModeGrid, spec: &WavepacketSpec, tolerance: f64) -> Result<Wavepacket> {
    spec.validate()?;
    let vg = grid.group_velocity();
    let half = spec.delta_k() * vg;
    let (low, high) = (spec.carrier_detuning - half, spec.carrier_detuning + half);
    if !grid.covers(low, high) {
        return Err(Error::SpectrumNotCovered { low, high });
    }
    if grid.revival_period() * vg < 2.0 * -spec.s0 {
        return Err(Error::NotLocalized("quantization length is shorter than twice the start distance"));
    }

    let k_c = grid.k_c();
    let k0 = k_c + spec.carrier_detuning / vg;
    let profile: Vec<Complex64> = (0..grid.len())
        .map(|j| {
            let dk = (grid.detuning(j) - spec.carrier_detuning) / vg;
            let envelope = (-dk * dk / (4.0 * spec.sigma_k * spec.sigma_k)).exp();
            // split k s0 to keep the large carrier phase exact modulo 2π
            let phase = -(dk * spec.s0) - wrap_phase(k0 * spec.s0);
            Complex64::from_polar(envelope, phase)
        })
        .collect();
    let scale = 1.0 / norm_sqr(&profile).sqrt();
    let e1: Vec<Complex64> = profile.iter().map(|c| c * scale * spec.e1).collect();
    let e2: Vec<Complex64> = profile.iter().map(|c| c * scale * spec.e2).collect();

    let locality = locality_ratio(&profile);
    if locality > tolerance {
        return Err(Error::NotLocalized("field at the cavity is not negligible at t = 0"));
    }
    Ok(Wavepacket { e1, e2 })
}

fn wrap_phase(x: f64) -> f64 {
    x - (x / (2.0 * PI)).floor() * 2.0 * PI
}

/// `|Σ_k C_k| / sqrt(Σ_k |C_k|²)`; zero amplitudes give zero.
pub fn locality_ratio(amplitudes: &[Complex64]) -> f64 {
    let n = norm_sqr(amplitudes);
    if n == 0.0 {
        return 0.0;
    }
    amplitudes.iter().sum::<Complex64>().norm() / n.sqrt()
}

/// `Σ_k C_k e^{i(k - k_c)(s - v_g t)}`: the freely propagated field
/// envelope, without the carrier phase `e^{i k_c (s - v_g t)}`.
pub fn field_envelope(amplitudes: &[Complex64], grid: &ModeGrid, s: f64, t: f64) -> Complex64 {
    let x = s - grid.group_velocity() * t;
    let vg = grid.group_velocity();
    let start = Complex64::from_polar(1.0, grid.detuning(0) / vg * x);
    let step = Complex64::from_polar(1.0, grid.k_spacing() * x);
    let mut phasor = start;
    let mut sum = Complex64::new(0.0, 0.0);
    for a in amplitudes {
        sum += a * phasor;
        phasor *= step;
    }
    sum
}

/// Intensity of one polarization component at position `s` and time `t`,
/// with `|E_0|²` set to `2π/L`: the signal `2 (2π/L) |Σ_k C_k e^{ik(s - v_g t)}|²`
/// plus, if requested, the vacuum contribution `Δk = k_max - k_min`.
///
/// With this normalization the profile does not depend on `L` in the
/// continuum limit.
pub fn intensity_profile(amplitudes: &[Complex64], grid: &ModeGrid, s: f64, t: f64, include_vacuum: bool) -> f64 {
    let field = field_envelope(amplitudes, grid, s, t);
    let signal = 2.0 * grid.k_spacing() * field.norm_sqr();
    if include_vacuum { signal + grid.k_span() } else { signal }
}
