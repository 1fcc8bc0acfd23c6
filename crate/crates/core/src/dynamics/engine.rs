use alloc::vec::Vec;


use super::{validate_run, AmplitudeState, RunSettings, Sample, TrajectoryRecord, T1_THRESHOLD};
use crate::pulse::{norm_sqr, ModeGrid};
use crate::{Complex64, Error, Result, SystemParams, I};

/// `0.05 / max(|Ω_c|, κ_Σ, γ/2, max_k |Δ_k|)`.
///
/// The grid always spans the pulse spectrum, so its largest detuning also
/// bounds the pulse bandwidth.
pub fn max_time_step(p: &SystemParams, grid: &ModeGrid) -> f64 {
    let fastest = p
        .rabi_abs()
        .max(p.kappa_sigma())
        .max(0.5 * p.gamma())
        .max(p.delta_e.abs())
        .max(grid.max_abs_detuning());
    if fastest == 0.0 { f64::INFINITY } else { 0.05 / fastest }
}

/// Receives the start-of-step populations after each deterministic step and
/// may add noise to the sink and emitter amplitudes.
pub(crate) trait Kick {
    fn kick(&mut self, step: usize, dt: f64, cavity_sq: f64, emitter_sq: f64, ground: &mut Complex64, emitter: &mut Complex64);
}

pub(crate) struct NoKick;

impl Kick for NoKick {
    fn kick(&mut self, _: usize, _: f64, _: f64, _: f64, _: &mut Complex64, _: &mut Complex64) {}
}

/// Stores the start-of-step populations of a deterministic run.
pub(crate) struct Recorder(pub Vec<[f64; 2]>);

impl Kick for Recorder {
    fn kick(&mut self, _: usize, _: f64, cavity_sq: f64, emitter_sq: f64, _: &mut Complex64, _: &mut Complex64) {
        self.0.push([cavity_sq, emitter_sq]);
    }
}

/// Integrates without noise.
pub fn evolve_deterministic(
    state0: &AmplitudeState,
    p: &SystemParams,
    grid: &ModeGrid,
    settings: &RunSettings,
) -> Result<TrajectoryRecord> {
    integrate(state0, p, grid, settings, &mut NoKick)
}

struct Sums {
    now: Complex64,
    half: Complex64,
    full: Complex64,
    beam: f64,
}

const LANES: usize = 4;

/// Beam modes stored as `u_k = s_k e^{-iΔ_k t}` in split real/imaginary
/// arrays, with the per-step phase factors `e^{-iΔ_k dt/2}`, `e^{-iΔ_k dt}`.
///
/// Keeping `u_k` instead of `s_k` makes the RK4 update a short linear
/// recurrence, `u ← e^{-iΔdt}(u + a) + e^{-iΔdt/2} b + c`, with no phasor
/// bookkeeping.
struct Modes {
    re: Vec<f64>,
    im: Vec<f64>,
    half_re: Vec<f64>,
    half_im: Vec<f64>,
    full_re: Vec<f64>,
    full_im: Vec<f64>,
}

impl Modes {
    fn new(s: &[Complex64], detunings: &[f64], dt: f64) -> Self {
        let half: Vec<Complex64> = detunings.iter().map(|d| Complex64::from_polar(1.0, -0.5 * d * dt)).collect();
        let full: Vec<Complex64> = detunings.iter().map(|d| Complex64::from_polar(1.0, -d * dt)).collect();
        Self {
            re: s.iter().map(|c| c.re).collect(),
            im: s.iter().map(|c| c.im).collect(),
            half_re: half.iter().map(|c| c.re).collect(),
            half_im: half.iter().map(|c| c.im).collect(),
            full_re: full.iter().map(|c| c.re).collect(),
            full_im: full.iter().map(|c| c.im).collect(),
        }
    }

    fn half_total(&self) -> Complex64 {
        Complex64::new(self.half_re.iter().sum(), self.half_im.iter().sum())
    }

    /// `s_k = u_k e^{iΔ_k t}`.
    fn interaction_picture(&self, detunings: &[f64], t: f64) -> Vec<Complex64> {
        (0..self.re.len())
            .map(|j| Complex64::new(self.re[j], self.im[j]) * Complex64::from_polar(1.0, detunings[j] * t))
            .collect()
    }

    /// Applies the update (if any) and returns the sums needed by the next
    /// step.
    fn sweep(&mut self, update: Option<[Complex64; 3]>) -> Sums {
        match update {
            Some(coefficients) => self.sweep_with::<true>(coefficients),
            None => self.sweep_with::<false>([Complex64::new(0.0, 0.0); 3]),
        }
    }

    fn sweep_with<const APPLY: bool>(&mut self, [a, b, c]: [Complex64; 3]) -> Sums {
        // slices go through a function boundary so they are known not to alias
        let mut acc = sweep_body::<APPLY>(&mut self.re, &mut self.im, &self.half_re, &self.half_im, &self.full_re, &self.full_im, [a, b, c]);
        let body = self.re.len() - self.re.len() % LANES;
        for j in body..self.re.len() {
            let (h, f) = (Complex64::new(self.half_re[j], self.half_im[j]), Complex64::new(self.full_re[j], self.full_im[j]));
            let mut x = Complex64::new(self.re[j], self.im[j]);
            if APPLY {
                x = f * (x + a) + h * b + c;
                self.re[j] = x.re;
                self.im[j] = x.im;
            }
            let (xh, xf) = (x * h, x * f);
            acc[0][0] += x.re;
            acc[1][0] += x.im;
            acc[2][0] += xh.re;
            acc[3][0] += xh.im;
            acc[4][0] += xf.re;
            acc[5][0] += xf.im;
            acc[6][0] += x.norm_sqr();
        }
        let mut total = [0.0; 7];
        for (t, lanes) in total.iter_mut().zip(&acc) {
            *t = lanes.iter().sum();
        }
        Sums {
            now: Complex64::new(total[0], total[1]),
            half: Complex64::new(total[2], total[3]),
            full: Complex64::new(total[4], total[5]),
            beam: total[6],
        }
    }
}

#[inline(never)]
fn sweep_body<const APPLY: bool>(
    re: &mut [f64],
    im: &mut [f64],
    half_re: &[f64],
    half_im: &[f64],
    full_re: &[f64],
    full_im: &[f64],
    [a, b, c]: [Complex64; 3],
) -> [[f64; LANES]; 7] {
    let mut acc = [[0.0f64; LANES]; 7];
    let chunks = re
        .chunks_exact_mut(LANES)
        .zip(im.chunks_exact_mut(LANES))
        .zip(half_re.chunks_exact(LANES))
        .zip(half_im.chunks_exact(LANES))
        .zip(full_re.chunks_exact(LANES))
        .zip(full_im.chunks_exact(LANES));
    for (((((ur, ui), hr), hi), fr), fi) in chunks {
        for l in 0..LANES {
            let (mut xr, mut xi) = (ur[l], ui[l]);
            if APPLY {
                let (pr, pi) = (xr + a.re, xi + a.im);
                xr = fr[l] * pr - fi[l] * pi + hr[l] * b.re - hi[l] * b.im + c.re;
                xi = fr[l] * pi + fi[l] * pr + hr[l] * b.im + hi[l] * b.re + c.im;
                ur[l] = xr;
                ui[l] = xi;
            }
            acc[0][l] += xr;
            acc[1][l] += xi;
            acc[2][l] += xr * hr[l] - xi * hi[l];
            acc[3][l] += xr * hi[l] + xi * hr[l];
            acc[4][l] += xr * fr[l] - xi * fi[l];
            acc[5][l] += xr * fi[l] + xi * fr[l];
            acc[6][l] += xr * xr + xi * xi;
        }
    }
    acc
}

pub(crate) fn integrate<K: Kick>(
    state0: &AmplitudeState,
    p: &SystemParams,
    grid: &ModeGrid,
    settings: &RunSettings,
    kick: &mut K,
) -> Result<TrajectoryRecord> {
    validate_run(p, grid, settings)?;
    state0.check(grid)?;

    let dt = settings.dt;
    let steps = settings.steps();
    let detunings = grid.detunings();
    let mut beam = Modes::new(&state0.e1, &detunings, dt);
    let half_total = beam.half_total();
    let modes = grid.len() as f64;

    let lc = Complex64::new(p.beam_coupling(grid.length(), grid.group_velocity()), 0.0);
    let omega = p.omega_rabi;
    let (mu_half, gamma_half) = (0.5 * p.mu_c, 0.5 * p.gamma());
    let (mu, gamma) = (p.mu_c, p.gamma());
    let de = p.delta_e;
    let in_coupling = I * lc;
    let out_coupling = I * lc.conj();

    let (mut c, mut f, mut ground) = (state0.cavity, state0.emitter, state0.ground);
    let e2_norm = norm_sqr(&state0.e2);

    let mut sums = beam.sweep(None);
    let mut samples = Vec::with_capacity(steps / settings.sample_every + 2);
    let sample = |t: f64, c: Complex64, f: Complex64, g: Complex64, beam: f64| Sample {
        t,
        cavity: c.norm_sqr(),
        emitter: f.norm_sqr(),
        beam_e1: beam,
        ground: g.norm_sqr(),
        norm: beam + e2_norm + c.norm_sqr() + f.norm_sqr() + g.norm_sqr(),
    };
    samples.push(sample(0.0, c, f, ground, sums.beam));

    let rhs = |c: Complex64, f: Complex64, feed: Complex64, t: f64| {
        let rot = Complex64::from_polar(1.0, de * t);
        let dc = -mu_half * c + in_coupling * feed + I * omega.conj() * f * rot.conj();
        let df = -gamma_half * f + I * omega * c * rot;
        (dc, df)
    };
    let leak = |c: Complex64, f: Complex64| mu * c.norm_sqr() + gamma * f.norm_sqr();

    let mut max_residual: f64 = 0.0;
    let mut peak = c.norm_sqr() + f.norm_sqr();
    let mut peak_time = 0.0;
    let mut t1 = None;

    for n in 0..steps {
        let t = n as f64 * dt;
        let (c1, f1) = (c, f);
        let (kc1, kf1) = rhs(c1, f1, sums.now, t);
        let (c2, f2) = (c + 0.5 * dt * kc1, f + 0.5 * dt * kf1);
        let (kc2, kf2) = rhs(c2, f2, sums.half + 0.5 * dt * out_coupling * c1 * half_total, t + 0.5 * dt);
        let (c3, f3) = (c + 0.5 * dt * kc2, f + 0.5 * dt * kf2);
        let (kc3, kf3) = rhs(c3, f3, sums.half + 0.5 * dt * out_coupling * c2 * modes, t + 0.5 * dt);
        let (c4, f4) = (c + dt * kc3, f + dt * kf3);
        let (kc4, kf4) = rhs(c4, f4, sums.full + dt * out_coupling * c3 * half_total, t + dt);
        let c_new = c + dt / 6.0 * (kc1 + 2.0 * (kc2 + kc3) + kc4);
        let f_new = f + dt / 6.0 * (kf1 + 2.0 * (kf2 + kf3) + kf4);

        let scale = dt / 6.0 * out_coupling;
        let next = beam.sweep(Some([scale * c1, scale * 2.0 * (c2 + c3), scale * c4]));

        if !(c_new.re.is_finite() && c_new.im.is_finite() && f_new.re.is_finite() && f_new.im.is_finite())
            || !next.beam.is_finite()
        {
            return Err(Error::NonFinite(t + dt));
        }

        let change = (next.beam - sums.beam) + (c_new.norm_sqr() - c.norm_sqr()) + (f_new.norm_sqr() - f.norm_sqr());
        let expected = dt / 6.0 * (leak(c1, f1) + 2.0 * (leak(c2, f2) + leak(c3, f3)) + leak(c4, f4));
        let residual = (change + expected).abs() / dt;
        max_residual = max_residual.max(residual);
        if residual > settings.leak_tolerance {
            return Err(Error::NormLeak { time: t + dt, residual, tolerance: settings.leak_tolerance });
        }

        let (cavity_sq, emitter_sq) = (c.norm_sqr(), f.norm_sqr());
        c = c_new;
        f = f_new;
        sums = next;
        kick.kick(n, dt, cavity_sq, emitter_sq, &mut ground, &mut f);

        let time = (n + 1) as f64 * dt;
        let excitation = c.norm_sqr() + f.norm_sqr();
        if excitation > peak {
            peak = excitation;
            peak_time = time;
            t1 = None;
        } else if t1.is_none() && peak > 0.0 && excitation < T1_THRESHOLD * peak {
            t1 = Some(time);
        }
        if (n + 1) % settings.sample_every == 0 || n + 1 == steps {
            samples.push(sample(time, c, f, ground, sums.beam));
        }
    }

    Ok(TrajectoryRecord {
        samples,
        final_state: AmplitudeState { e1: beam.interaction_picture(&detunings, steps as f64 * dt), e2: state0.e2.clone(), cavity: c, emitter: f, ground },
        t_end: steps as f64 * dt,
        dt,
        max_leak_residual: max_residual,
        peak_excitation: peak,
        peak_time,
        t1,
    })
}
