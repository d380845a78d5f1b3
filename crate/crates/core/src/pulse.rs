//! Control schedules Δ(t), Ω_R(t), Γ(t) with analytic derivatives, and the
//! adiabaticity monitors.
//!
//! Atomic schedules use ns for time and rad/ns for every rate.

use crate::ctrlh;
use crate::czmath::{eigensystem_2x2, Mat2, C64, DEFAULT_TOL};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Default half-window in units of the Gaussian width 1/√a.
pub const DEFAULT_WINDOW_FACTOR: f64 = 5.0;

/// Linearly chirped Gaussian pulse: Δ(t) = −2bt, Ω_R(t) = Ω₀ exp(−at²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpedGaussianParams {
    /// Peak Rabi frequency Ω₀ (rad/ns).
    pub omega0_rabi: f64,
    /// Envelope coefficient a (1/ns²).
    pub a_width: f64,
    /// Chirp coefficient b (1/ns²).
    pub b_chirp: f64,
    /// Excited-state decay rate Γ (rad/ns).
    pub gamma: f64,
}

impl ChirpedGaussianParams {
    /// Values of the reference RAP example, in rad/ns and 1/ns²:
    /// Γ = 2π × 2 MHz, a = (2π)² × 0.01 GHz², b = (2π)² × 0.00025 GHz²,
    /// Ω₀ = 2π × 100 MHz.
    pub fn reference() -> Self {
        let two_pi = 2.0 * core::f64::consts::PI;
        Self {
            omega0_rabi: two_pi * 0.1,
            a_width: two_pi * two_pi * 0.01,
            b_chirp: two_pi * two_pi * 0.00025,
            gamma: two_pi * 0.002,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_width > 0.0) {
            return Err(Error::InvalidParameter("a_width must be positive"));
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidParameter("gamma must be non-negative"));
        }
        if !(self.omega0_rabi >= 0.0) {
            return Err(Error::InvalidParameter("omega0_rabi must be non-negative"));
        }
        if !self.b_chirp.is_finite() {
            return Err(Error::InvalidParameter("b_chirp must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    ChirpedGaussian(ChirpedGaussianParams),
    /// Δ(t) = delta0 + delta_rate·t with constant Ω_R and Γ. A zero rate is
    /// the constant schedule.
    LinearSweep {
        delta0: f64,
        delta_rate: f64,
        rabi: f64,
        gamma: f64,
    },
}

/// Instantaneous values of a schedule and their time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseSample {
    pub delta: f64,
    pub delta_dot: f64,
    pub rabi: f64,
    pub rabi_dot: f64,
    pub gamma: f64,
    pub gamma_dot: f64,
}

impl PulseSample {
    /// Δ − iΓ/2, the complex detuning that fixes the mixing angle.
    pub fn complex_detuning(&self) -> C64 {
        C64::new(self.delta, -0.5 * self.gamma)
    }

    /// Ω = √(−(Γ + 2iΔ)² + 4Ω_R²), principal branch.
    pub fn generalized_rabi(&self) -> C64 {
        let g = C64::new(self.gamma, 2.0 * self.delta);
        (-(g * g) + 4.0 * self.rabi * self.rabi).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule {
    pub shape: PulseShape,
    pub t_start: f64,
    pub t_end: f64,
}

impl PulseSchedule {
    pub fn sample(&self, t: f64) -> PulseSample {
        match self.shape {
            PulseShape::ChirpedGaussian(p) => {
                let rabi = p.omega0_rabi * (-p.a_width * t * t).exp();
                PulseSample {
                    delta: -2.0 * p.b_chirp * t,
                    delta_dot: -2.0 * p.b_chirp,
                    rabi,
                    rabi_dot: -2.0 * p.a_width * t * rabi,
                    gamma: p.gamma,
                    gamma_dot: 0.0,
                }
            }
            PulseShape::LinearSweep {
                delta0,
                delta_rate,
                rabi,
                gamma,
            } => PulseSample {
                delta: delta0 + delta_rate * t,
                delta_dot: delta_rate,
                rabi,
                rabi_dot: 0.0,
                gamma,
                gamma_dot: 0.0,
            },
        }
    }

    pub fn delta(&self, t: f64) -> f64 {
        self.sample(t).delta
    }

    pub fn rabi(&self, t: f64) -> f64 {
        self.sample(t).rabi
    }

    pub fn gamma(&self, t: f64) -> f64 {
        self.sample(t).gamma
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Uniform grid over the window with `steps` intervals.
    pub fn grid(&self, steps: usize) -> alloc::vec::Vec<f64> {
        uniform_grid(self.t_start, self.t_end, steps)
    }
}

/// `steps + 1` equally spaced points from `t0` to `t1`, endpoints exact.
pub fn uniform_grid(t0: f64, t1: f64, steps: usize) -> alloc::vec::Vec<f64> {
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    (0..=steps)
        .map(|k| if k == steps { t1 } else { t0 + h * k as f64 })
        .collect()
}

/// Number of steps of size at most `dt` covering `[t0, t1]`.
pub fn steps_for(t0: f64, t1: f64, dt: f64) -> usize {
    let n = ((t1 - t0) / dt).round();
    if n < 1.0 {
        1
    } else {
        n as usize
    }
}

/// Chirped Gaussian over the symmetric window [−w, w], w = window_factor/√a.
pub fn chirped_gaussian(
    params: ChirpedGaussianParams,
    window_factor: f64,
) -> Result<PulseSchedule> {
    params.validate()?;
    if !(window_factor > 0.0) {
        return Err(Error::InvalidParameter("window_factor must be positive"));
    }
    let w = window_factor / params.a_width.sqrt();
    Ok(PulseSchedule {
        shape: PulseShape::ChirpedGaussian(params),
        t_start: -w,
        t_end: w,
    })
}

/// Linear detuning sweep at constant coupling over `[t_start, t_end]`.
pub fn linear_sweep(
    delta0: f64,
    delta_rate: f64,
    rabi: f64,
    gamma: f64,
    t_start: f64,
    t_end: f64,
) -> Result<PulseSchedule> {
    if !(rabi >= 0.0) || !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(
            "rabi and gamma must be non-negative",
        ));
    }
    if !(t_end > t_start) {
        return Err(Error::InvalidParameter("window must have positive length"));
    }
    Ok(PulseSchedule {
        shape: PulseShape::LinearSweep {
            delta0,
            delta_rate,
            rabi,
            gamma,
        },
        t_start,
        t_end,
    })
}

/// r(t) = 2|Ω_a|/|Ω| with Ω_a = −α̇/2; r ≪ 1 in the adiabatic regime.
pub fn adiabaticity_ratio(s: &PulseSchedule, t: f64) -> Result<f64> {
    let omega = s.sample(t).generalized_rabi().norm();
    if !(omega > f64::MIN_POSITIVE) {
        return Err(Error::ZeroGap { t });
    }
    let alpha_dot = ctrlh::alpha_dot(s, t)?;
    Ok(alpha_dot.norm() / omega)
}

/// ħ|⟨n̂|∂_t m⟩| / |E_n − E_m| from numerically differentiated eigenvectors.
///
/// The coupling is the geometric mean √|⟨l₊|∂r₋⟩⟨l₋|∂r₊⟩|, which does not
/// depend on how the two right eigenvectors are scaled relative to each other.
pub fn hermitian_adiabaticity_check<F>(hamiltonian: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Mat2>,
{
    let d = ctrlh::numeric_eigvec_derivative(&hamiltonian, t, h)?;
    let b = &d.basis;
    let gap = (b.values[1] - b.values[0]).norm();
    if !(gap > f64::MIN_POSITIVE) {
        return Err(Error::ZeroGap { t });
    }
    let c01 = b.left[0].dot(&d.derivative[1]);
    let c10 = b.left[1].dot(&d.derivative[0]);
    Ok((c01 * c10).norm().sqrt() / gap)
}

/// Hermitian two-level reduction of the check above, evaluated on the
/// eigenbasis of [`ctrlh::h_a0`].
pub fn hermitian_adiabaticity_check_atom(s: &PulseSchedule, t: f64, h: f64) -> Result<f64> {
    hermitian_adiabaticity_check(|tt| Ok(ctrlh::h_a0(s, tt)), t, h)
}

/// Largest adiabaticity ratio on a uniform grid and the time it occurs.
pub fn max_adiabaticity_ratio(s: &PulseSchedule, points: usize) -> Result<(f64, f64)> {
    let mut best = (0.0, s.t_start);
    for t in uniform_grid(s.t_start, s.t_end, points.max(2) - 1) {
        let r = adiabaticity_ratio(s, t)?;
        if r > best.0 {
            best = (r, t);
        }
    }
    Ok(best)
}

/// Eigenvalue gap |E₊ − E₋| = |Ω|/2 of the bare atom, for diagnostics.
pub fn bare_gap(s: &PulseSchedule, t: f64) -> Result<f64> {
    let b = eigensystem_2x2(&ctrlh::h_a0(s, t), DEFAULT_TOL)?;
    Ok((b.values[1] - b.values[0]).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> PulseSchedule {
        chirped_gaussian(ChirpedGaussianParams::reference(), DEFAULT_WINDOW_FACTOR).unwrap()
    }

    #[test]
    fn pulse_center() {
        let s = reference();
        let p = s.sample(0.0);
        assert_eq!(p.delta, 0.0);
        assert_eq!(p.rabi_dot, 0.0);
        assert_eq!(p.rabi, ChirpedGaussianParams::reference().omega0_rabi);
        assert!((p.rabi - 0.6283).abs() < 1e-4);
        assert_eq!(p.gamma_dot, 0.0);
    }

    #[test]
    fn window_tails() {
        let s = reference();
        // w = 5/√a = 5/(2π·0.1) ns
        assert!((s.t_end - 7.957747154594767).abs() < 1e-12);
        assert_eq!(s.t_start, -s.t_end);
        let r = s.rabi(s.t_end) / s.rabi(0.0);
        assert!((r / (-25.0_f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = ChirpedGaussianParams::reference();
        assert!(chirped_gaussian(p, 0.0).is_err());
        p.a_width = 0.0;
        assert!(chirped_gaussian(p, 5.0).is_err());
        assert!(linear_sweep(0.0, 1.0, -1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let s = reference();
        let h = 1e-4 * s.duration();
        let scale = |x: f64| x.abs().max(1e-3);
        for t in uniform_grid(s.t_start, s.t_end, 999) {
            let p = s.sample(t);
            let (lo, hi) = (s.sample(t - h), s.sample(t + h));
            let fd_delta = (hi.delta - lo.delta) / (2.0 * h);
            let fd_rabi = (hi.rabi - lo.rabi) / (2.0 * h);
            let fd_gamma = (hi.gamma - lo.gamma) / (2.0 * h);
            assert!((fd_delta - p.delta_dot).abs() < 1e-6 * scale(p.delta_dot));
            // relative to the largest derivative magnitude on the window
            assert!((fd_rabi - p.rabi_dot).abs() < 1e-6 * 0.6283 * 0.63);
            assert!((fd_gamma - p.gamma_dot).abs() < 1e-12);
            assert!(p.rabi >= 0.0 && p.gamma >= 0.0);
        }
    }

    #[test]
    fn static_pulse_is_adiabatic() {
        let s = linear_sweep(0.3, 0.0, 0.8, 0.1, -1.0, 1.0).unwrap();
        assert_eq!(adiabaticity_ratio(&s, 0.2).unwrap(), 0.0);
        assert!(hermitian_adiabaticity_check_atom(&s, 0.2, 1e-4).unwrap() < 1e-12);
    }

    #[test]
    fn ratio_at_pulse_center() {
        let p = ChirpedGaussianParams::reference();
        let s = reference();
        let alpha_dot = 2.0 * p.b_chirp * p.omega0_rabi
            / (p.omega0_rabi * p.omega0_rabi - p.gamma * p.gamma / 4.0);
        let omega = (4.0 * p.omega0_rabi * p.omega0_rabi - p.gamma * p.gamma).sqrt();
        let r = adiabaticity_ratio(&s, 0.0).unwrap();
        assert!((r - alpha_dot / omega).abs() < 1e-15);
        assert!((r - 0.025).abs() < 1e-4);
    }

    #[test]
    fn adiabaticity_fails_in_the_wings() {
        let (rmax, tmax) = max_adiabaticity_ratio(&reference(), 4001).unwrap();
        assert!(rmax > 1.0, "max ratio {rmax}");
        assert!(tmax.abs() > 1.0);
    }

    #[test]
    fn numerical_and_analytic_ratios_agree() {
        let s = reference();
        for t in [0.0, -1.3, 0.7, 2.4] {
            let a = adiabaticity_ratio(&s, t).unwrap();
            let n = hermitian_adiabaticity_check_atom(&s, t, 1e-4).unwrap();
            assert!((a - n).abs() < 1e-4 * a, "t = {t}: {a} vs {n}");
        }
    }

    #[test]
    fn landau_zener_reduction() {
        let (rabi, rate) = (0.5, 0.02);
        let s = linear_sweep(-1.0, rate, rabi, 0.0, -10.0, 150.0).unwrap();
        for t in [-5.0, 0.0, 25.0, 50.0, 80.0] {
            let d = s.delta(t);
            let textbook = rabi * rate / (2.0 * (d * d + rabi * rabi).powf(1.5));
            let r = adiabaticity_ratio(&s, t).unwrap();
            assert!((r - textbook).abs() < 1e-14 * textbook.max(1.0));
            let n = hermitian_adiabaticity_check_atom(&s, t, 1e-3).unwrap();
            assert!((n - textbook).abs() < 1e-6 * textbook.max(1e-3));
        }
    }

    #[test]
    fn ratio_is_dimensionless() {
        // t → c·t with all rates scaled by 1/c
        let c = 3.7;
        let p = ChirpedGaussianParams::reference();
        let q = ChirpedGaussianParams {
            omega0_rabi: p.omega0_rabi / c,
            a_width: p.a_width / (c * c),
            b_chirp: p.b_chirp / (c * c),
            gamma: p.gamma / c,
        };
        let s = chirped_gaussian(p, 5.0).unwrap();
        let sc = chirped_gaussian(q, 5.0).unwrap();
        for t in [-2.0, -0.5, 0.0, 1.1, 3.0] {
            let a = adiabaticity_ratio(&s, t).unwrap();
            let b = adiabaticity_ratio(&sc, c * t).unwrap();
            assert!((a - b).abs() < 1e-12 * a.max(1e-3));
        }
    }
}
