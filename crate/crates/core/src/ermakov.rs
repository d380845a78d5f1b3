//! Inverse-engineered expansion of a harmonic trap for a classical particle.
//!
//! The canonical equations q̇ = p/m, ṗ = −mω²(t)q are written as a formal
//! Schrödinger equation with the non-Hermitian generator
//! 𝓗 = i[[0, 1/m],[−mω², 0]]. A generalized invariant
//! 𝓘 = [[b, c],[−a, −b]] built from a scaling function ρ(t) obeying the
//! Ermakov equation ρ̈ + ω²ρ = ω₀²/ρ³ fixes the phase-space trajectory in
//! closed form. We choose ρ as a quintic with smooth boundary conditions and
//! read ω²(t) off the Ermakov equation.
//!
//! SI units throughout (kg, m, s, rad/s).
//!
//! Outside [0, t_f] the plan continues at constant frequency (ρ = 1 before,
//! ρ = ρ_f after), which is how the leading and trailing display periods are
//! generated.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::czmath::{Mat2, Vec2, C64, I, ONE, ZERO};
use crate::pulse::{steps_for, uniform_grid};
use crate::quad::simpson;
use crate::{Error, Result};

/// Sub-intervals of the composite Simpson rule for ∫dt'/ρ² (2001 nodes).
pub const PHASE_QUADRATURE_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionSpec {
    /// Initial trap angular frequency ω₀ (rad/s).
    pub omega0: f64,
    /// Final trap angular frequency ω_f (rad/s).
    pub omegaf: f64,
    /// Expansion time t_f (s).
    pub tf: f64,
    /// Particle mass (kg).
    pub mass: f64,
    /// Position at t = 0 (m).
    pub q0: f64,
    /// Velocity at t = 0 (m/s).
    pub v0: f64,
}

impl ExpansionSpec {
    /// Rubidium-87 expanded from 2π × 250 Hz to 2π × 2.5 Hz in 25 ms,
    /// starting at rest 1 μm from the trap centre.
    pub fn reference() -> Self {
        Self {
            omega0: 2.0 * PI * 250.0,
            omegaf: 2.0 * PI * 2.5,
            tf: 25e-3,
            mass: 1.44e-25,
            q0: 1e-6,
            v0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.omega0, "omega0 must be positive"),
            (self.omegaf, "omegaf must be positive"),
            (self.tf, "tf must be positive"),
            (self.mass, "mass must be positive"),
        ];
        for (v, what) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(what));
            }
        }
        if !self.q0.is_finite() || !self.v0.is_finite() {
            return Err(Error::InvalidParameter("initial conditions must be finite"));
        }
        Ok(())
    }

    /// (R, θ₀) from q(0) = R cos θ₀ and v(0) = −ω₀R sin θ₀.
    pub fn amplitude_phase(&self) -> Result<(f64, f64)> {
        if self.q0 == 0.0 && self.v0 == 0.0 {
            return Err(Error::InconsistentInitialConditions);
        }
        let y = self.v0 / self.omega0;
        Ok((self.q0.hypot(y), (-y).atan2(self.q0)))
    }

    pub fn rho_final(&self) -> f64 {
        (self.omega0 / self.omegaf).sqrt()
    }
}

/// Scaling function ρ(t) and everything derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ErmakovPlan {
    pub spec: ExpansionSpec,
    /// Coefficients of ρ in reduced time s = t/t_f, lowest order first.
    pub reduced: [f64; 6],
    /// Smallest ω²(t) found on a 10⁴-point scan of [0, t_f].
    pub min_omega_sq: f64,
    /// Time of the smallest ω².
    pub min_omega_sq_at: f64,
    /// ω₀∫₀^{t_f} dt'/ρ², reused for every t ≥ t_f.
    phase_at_tf: f64,
}

/// Solves the quintic boundary-value problem and scans ω²(t).
///
/// A negative ω² (momentary trap inversion) is allowed and only flagged via
/// [`ErmakovPlan::trap_inverted`].
pub fn plan_expansion(spec: ExpansionSpec) -> Result<ErmakovPlan> {
    spec.validate()?;
    let rho_f = spec.rho_final();
    // rows: ρ(0), ρ'(0), ρ''(0), ρ(1), ρ'(1), ρ''(1) in reduced time
    let mut m = [[0.0; 6]; 6];
    let mut rhs = [1.0, 0.0, 0.0, rho_f, 0.0, 0.0];
    m[0][0] = 1.0;
    m[1][1] = 1.0;
    m[2][2] = 2.0;
    for k in 0..6 {
        let kf = k as f64;
        m[3][k] = 1.0;
        m[4][k] = kf;
        m[5][k] = kf * (kf - 1.0);
    }
    let reduced =
        solve_dense(&mut m, &mut rhs).ok_or(Error::InvalidParameter("singular boundary system"))?;
    let mut plan = ErmakovPlan {
        spec,
        reduced,
        min_omega_sq: f64::INFINITY,
        min_omega_sq_at: 0.0,
        phase_at_tf: 0.0,
    };
    plan.phase_at_tf = plan.shortcut_phase(spec.tf);
    for t in uniform_grid(0.0, spec.tf, 10_000) {
        let w2 = plan.omega_sq(t);
        if w2 < plan.min_omega_sq {
            plan.min_omega_sq = w2;
            plan.min_omega_sq_at = t;
        }
    }
    Ok(plan)
}

/// Gaussian elimination with partial pivoting on a 6×6 system.
fn solve_dense(m: &mut [[f64; 6]; 6], rhs: &mut [f64; 6]) -> Option<[f64; 6]> {
    for col in 0..6 {
        let pivot = (col..6).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..6 {
            let f = m[row][col] / m[col][col];
            for k in col..6 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 6];
    for row in (0..6).rev() {
        let tail: f64 = (row + 1..6).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

impl ErmakovPlan {
    /// Coefficients a_n of ρ(t) = Σ a_n tⁿ in seconds.
    pub fn coefficients(&self) -> [f64; 6] {
        let mut out = self.reduced;
        let mut scale = 1.0;
        for a in out.iter_mut() {
            *a /= scale;
            scale *= self.spec.tf;
        }
        out
    }

    fn reduced_time(&self, t: f64) -> f64 {
        t / self.spec.tf
    }

    fn poly(&self, s: f64) -> [f64; 3] {
        let c = &self.reduced;
        let mut v = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for k in (0..6).rev() {
            d2 = d2 * s + 2.0 * d1;
            d1 = d1 * s + v;
            v = v * s + c[k];
        }
        [v, d1, d2]
    }

    /// [ρ, ρ̇, ρ̈] at t (constant continuation outside [0, t_f]).
    pub fn rho_derivs(&self, t: f64) -> [f64; 3] {
        let tf = self.spec.tf;
        if t <= 0.0 {
            return [1.0, 0.0, 0.0];
        }
        if t >= tf {
            return [self.spec.rho_final(), 0.0, 0.0];
        }
        let [v, d1, d2] = self.poly(self.reduced_time(t));
        [v, d1 / tf, d2 / (tf * tf)]
    }

    pub fn rho(&self, t: f64) -> f64 {
        self.rho_derivs(t)[0]
    }

    pub fn rho_dot(&self, t: f64) -> f64 {
        self.rho_derivs(t)[1]
    }

    pub fn rho_ddot(&self, t: f64) -> f64 {
        self.rho_derivs(t)[2]
    }

    /// ω²(t) = ω₀²/ρ⁴ − ρ̈/ρ.
    pub fn omega_sq(&self, t: f64) -> f64 {
        let [r, _, rdd] = self.rho_derivs(t);
        let w0 = self.spec.omega0;
        w0 * w0 / (r * r * r * r) - rdd / r
    }

    pub fn trap_inverted(&self) -> bool {
        self.min_omega_sq < 0.0
    }

    /// Largest violation of the six polynomial boundary conditions, using
    /// the polynomial itself at s = 0 and s = 1.
    pub fn boundary_residual(&self) -> f64 {
        let tf = self.spec.tf;
        let [r0, d0, dd0] = self.poly(0.0);
        let [r1, d1, dd1] = self.poly(1.0);
        [
            r0 - 1.0,
            d0 / tf,
            dd0 / (tf * tf),
            r1 - self.spec.rho_final(),
            d1 / tf,
            dd1 / (tf * tf),
        ]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// |ρ̈ + ω²ρ − ω₀²/ρ³|
    pub fn ermakov_residual(&self, t: f64) -> f64 {
        let [r, _, rdd] = self.rho_derivs(t);
        let w0 = self.spec.omega0;
        (rdd + self.omega_sq(t) * r - w0 * w0 / (r * r * r)).abs()
    }

    /// ω₀∫₀ᵗ dt'/ρ², composite Simpson on [0, min(t, t_f)] plus the exact
    /// constant-frequency continuation outside the window.
    pub fn phase_integral(&self, t: f64) -> f64 {
        let (w0, tf) = (self.spec.omega0, self.spec.tf);
        if t <= 0.0 {
            return w0 * t;
        }
        if t >= tf {
            let rf = self.spec.rho_final();
            return self.phase_at_tf + w0 * (t - tf) / (rf * rf);
        }
        self.shortcut_phase(t)
    }

    fn shortcut_phase(&self, t: f64) -> f64 {
        let inner: f64 = simpson(
            |x| {
                let r = self.rho(x);
                1.0 / (r * r)
            },
            0.0,
            t,
            PHASE_QUADRATURE_INTERVALS,
        );
        self.spec.omega0 * inner
    }

    /// θ(t) = ω₀∫₀ᵗ dt'/ρ² + θ₀.
    pub fn theta(&self, t: f64) -> Result<f64> {
        let (_, theta0) = self.spec.amplitude_phase()?;
        Ok(self.phase_integral(t) + theta0)
    }

    /// Effective generator 𝓗(t) = i[[0, 1/m],[−mω², 0]].
    pub fn effective_hamiltonian(&self, t: f64) -> Mat2 {
        let m = self.spec.mass;
        Mat2::new(
            ZERO,
            C64::new(0.0, 1.0 / m),
            C64::new(0.0, -m * self.omega_sq(t)),
            ZERO,
        )
    }
}

/// Invariant coefficients and their time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_dot: f64,
    pub b_dot: f64,
    pub c_dot: f64,
}

impl InvariantMatrix {
    /// [[b, c],[−a, −b]]
    pub fn matrix(&self) -> Mat2 {
        Mat2::from_real(self.b, self.c, -self.a, -self.b)
    }

    pub fn derivative(&self) -> Mat2 {
        Mat2::from_real(self.b_dot, self.c_dot, -self.a_dot, -self.b_dot)
    }

    /// b² − ac, identically −1.
    pub fn det_identity(&self) -> f64 {
        self.b * self.b - self.a * self.c
    }

    /// Eigenvector (c, ±i(1 ± ib)) with eigenvalue ±i.
    pub fn eigenvector(&self, sign: f64) -> Vec2 {
        let s = sign.signum();
        Vec2::new(C64::new(self.c, 0.0), (ONE + I * (s * self.b)) * (I * s))
    }
}

/// a = m[ω₀/ρ² + ρ̇²/ω₀], b = −ρρ̇/ω₀, c = ρ²/(ω₀m).
pub fn invariant_at(plan: &ErmakovPlan, t: f64) -> InvariantMatrix {
    let [r, rd, rdd] = plan.rho_derivs(t);
    let (w0, m) = (plan.spec.omega0, plan.spec.mass);
    InvariantMatrix {
        a: m * (w0 / (r * r) + rd * rd / w0),
        b: -r * rd / w0,
        c: r * r / (w0 * m),
        a_dot: m * (-2.0 * w0 * rd / (r * r * r) + 2.0 * rd * rdd / w0),
        b_dot: -(rd * rd + r * rdd) / w0,
        c_dot: 2.0 * r * rd / (w0 * m),
    }
}

/// Frobenius norm of d𝓘/dt − i[𝓘, 𝓗].
pub fn invariance_residual(plan: &ErmakovPlan, t: f64) -> f64 {
    invariance_residual_with(plan, t, plan.omega_sq(t))
}

/// Same residual with an externally supplied ω², for sensitivity checks.
pub fn invariance_residual_with(plan: &ErmakovPlan, t: f64, omega_sq: f64) -> f64 {
    let inv = invariant_at(plan, t);
    let m = plan.spec.mass;
    let h = Mat2::new(
        ZERO,
        C64::new(0.0, 1.0 / m),
        C64::new(0.0, -m * omega_sq),
        ZERO,
    );
    (inv.derivative() - inv.matrix().commutator(&h) * I).frobenius()
}

/// Generalized Lewis-Riesenfeld phases α₊ and α₋.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrPhases {
    pub plus: C64,
    pub minus: C64,
}

/// α_± = i ln√(c(t)/c(0)) ± ω₀∫₀ᵗ dt'/ρ².
pub fn lr_phases(plan: &ErmakovPlan, t: f64) -> LrPhases {
    let c_ratio = invariant_at(plan, t).c / invariant_at(plan, 0.0).c;
    let im = c_ratio.sqrt().ln();
    let re = plan.phase_integral(t);
    LrPhases {
        plus: C64::new(re, im),
        minus: C64::new(-re, im),
    }
}

/// Positions and momenta sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseSpaceTrajectory {
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseSpaceTrajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// max|Δq|/max|q| and max|Δp|/max|p| against another trajectory on the
    /// same grid.
    pub fn relative_deviation(&self, other: &PhaseSpaceTrajectory) -> (f64, f64) {
        let dev = |a: &[f64], b: &[f64]| {
            let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let diff = a
                .iter()
                .zip(b)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            if scale > 0.0 {
                diff / scale
            } else {
                diff
            }
        };
        (dev(&self.q, &other.q), dev(&self.p, &other.p))
    }
}

/// Closed form q = Rρ cos θ, p = −(mω₀/ρ)R sin θ + mρ̇R cos θ.
pub fn trajectory_closed_form(plan: &ErmakovPlan, grid: &[f64]) -> Result<PhaseSpaceTrajectory> {
    let (amp, _) = plan.spec.amplitude_phase()?;
    let (w0, m) = (plan.spec.omega0, plan.spec.mass);
    let mut out = PhaseSpaceTrajectory {
        t: grid.to_vec(),
        q: Vec::with_capacity(grid.len()),
        p: Vec::with_capacity(grid.len()),
    };
    for &t in grid {
        let [r, rd, _] = plan.rho_derivs(t);
        let theta = plan.theta(t)?;
        let (sn, cs) = theta.sin_cos();
        out.q.push(amp * r * cs);
        out.p.push(-(m * w0 / r) * amp * sn + m * rd * amp * cs);
    }
    Ok(out)
}

/// Phase-space point rebuilt from d₊e^{iα₊}|ψ₊⟩ + d₋e^{iα₋}|ψ₋⟩ with
/// d₊ = d₋* = r e^{iθ₀}, r = (R/2)√(mω₀/c(0)).
pub fn trajectory_from_invariant(plan: &ErmakovPlan, t: f64) -> Result<Vec2> {
    let (amp, theta0) = plan.spec.amplitude_phase()?;
    let (w0, m) = (plan.spec.omega0, plan.spec.mass);
    let c0 = invariant_at(plan, 0.0).c;
    let r = 0.5 * amp * (m * w0 / c0).sqrt();
    let d_plus = C64::from_polar(r, theta0);
    let inv = invariant_at(plan, t);
    let ph = lr_phases(plan, t);
    let plus = inv.eigenvector(1.0).scale(d_plus * (I * ph.plus).exp());
    let minus = inv
        .eigenvector(-1.0)
        .scale(d_plus.conj() * (I * ph.minus).exp());
    Ok(plus + minus)
}

/// Start of the leading display period, −2π/ω₀.
pub fn leading_period_start(spec: &ExpansionSpec) -> f64 {
    -2.0 * PI / spec.omega0
}

/// End of the trailing display period, t_f + 2π/ω_f.
pub fn trailing_period_end(spec: &ExpansionSpec) -> f64 {
    spec.tf + 2.0 * PI / spec.omegaf
}

/// One ω₀ period before t = 0, the shortcut, one ω_f period after t_f; each
/// segment uniformly sampled with a step close to `dt`, shared endpoints once.
pub fn display_grid(spec: &ExpansionSpec, dt: f64) -> Vec<f64> {
    let segment = |a: f64, b: f64| uniform_grid(a, b, steps_for(a, b, dt));
    let mut g = segment(leading_period_start(spec), 0.0);
    g.extend(segment(0.0, spec.tf).into_iter().skip(1));
    g.extend(
        segment(spec.tf, trailing_period_end(spec))
            .into_iter()
            .skip(1),
    );
    g
}

/// Target RK4 step as a fraction of the shortest local period 1/√|ω²|.
const ORACLE_STEP_FRACTION: f64 = 2e-3;

/// RK4 integration of q̇ = p/m, ṗ = −mω²q, started from (q0, m·v0) at t = 0
/// and run both forwards and backwards to cover `grid`. Each grid interval is
/// sub-stepped so no step exceeds a small fraction of the local period.
pub fn hamilton_oracle(plan: &ErmakovPlan, grid: &[f64]) -> Result<PhaseSpaceTrajectory> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "time grid must be strictly increasing",
        ));
    }
    let m = plan.spec.mass;
    let start = [plan.spec.q0, m * plan.spec.v0];
    let mut q = alloc::vec![0.0; grid.len()];
    let mut p = alloc::vec![0.0; grid.len()];
    // index of the first grid point at or after t = 0
    let split = grid.partition_point(|&t| t < 0.0);
    let mut state = start;
    let mut t = 0.0;
    for k in split..grid.len() {
        state = integrate_canonical(plan, state, t, grid[k])?;
        t = grid[k];
        q[k] = state[0];
        p[k] = state[1];
    }
    let mut state = start;
    let mut t = 0.0;
    for k in (0..split).rev() {
        state = integrate_canonical(plan, state, t, grid[k])?;
        t = grid[k];
        q[k] = state[0];
        p[k] = state[1];
    }
    Ok(PhaseSpaceTrajectory {
        t: grid.to_vec(),
        q,
        p,
    })
}

/// Integrates the canonical equations from `t0` to `t1` (either direction).
pub fn integrate_canonical(
    plan: &ErmakovPlan,
    state: [f64; 2],
    t0: f64,
    t1: f64,
) -> Result<[f64; 2]> {
    if t1 == t0 {
        return Ok(state);
    }
    let rate = |t: f64| plan.omega_sq(t).abs().sqrt().max(plan.spec.omegaf);
    let local = rate(t0).max(rate(t1)).max(rate(0.5 * (t0 + t1)));
    let steps = ((t1 - t0).abs() * local / ORACLE_STEP_FRACTION)
        .ceil()
        .max(1.0) as usize;
    canonical_rk4(plan, state, t0, t1, steps)
}

/// Fixed-step RK4 for the canonical equations with exactly `steps` steps.
pub fn canonical_rk4(
    plan: &ErmakovPlan,
    state: [f64; 2],
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<[f64; 2]> {
    let steps = steps.max(1);
    let m = plan.spec.mass;
    let h = (t1 - t0) / steps as f64;
    let f = |t: f64, y: [f64; 2]| [y[1] / m, -m * plan.omega_sq(t) * y[0]];
    let mut y = state;
    for k in 0..steps {
        let t = t0 + h * k as f64;
        let k1 = f(t, y);
        let k2 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
        );
        let k3 = f(
            t + 0.5 * h,
            [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
        );
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::NonFiniteState { t: t + h });
        }
    }
    Ok(y)
}

/// Empirical RK4 order over [0, t_f] from the closed-form initial state:
/// log₂(e(N)/e(2N)) with errors taken against the closed form at t_f.
pub fn canonical_convergence_order(plan: &ErmakovPlan, steps: usize) -> Result<f64> {
    let tf = plan.spec.tf;
    let exact = trajectory_closed_form(plan, &[0.0, tf])?;
    let start = [exact.q[0], exact.p[0]];
    let m = plan.spec.mass;
    let w = plan.spec.omega0;
    // phase-space distance with q and p/(mω₀) on equal footing
    let err = |y: [f64; 2]| {
        ((y[0] - exact.q[1]).powi(2) + ((y[1] - exact.p[1]) / (m * w)).powi(2)).sqrt()
    };
    let e1 = err(canonical_rk4(plan, start, 0.0, tf, steps)?);
    let e2 = err(canonical_rk4(plan, start, 0.0, tf, 2 * steps)?);
    Ok((e1 / e2).log2())
}

/// E = p²/2m + ½mω²(t)q².
pub fn energy(plan: &ErmakovPlan, t: f64, q: f64, p: f64) -> f64 {
    let m = plan.spec.mass;
    p * p / (2.0 * m) + 0.5 * m * plan.omega_sq(t) * q * q
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAudit {
    /// E(0) from the closed-form trajectory (J).
    pub e0: f64,
    /// E(t_f) from the closed-form trajectory (J).
    pub ef: f64,
    /// E_f/E_0.
    pub ratio: f64,
    /// mω₀²R²/2.
    pub e0_expected: f64,
    /// ω_f/ω₀.
    pub ratio_expected: f64,
}

impl EnergyAudit {
    pub fn consistent(&self, rel_tol: f64) -> bool {
        (self.e0 - self.e0_expected).abs() <= rel_tol * self.e0_expected.abs()
            && (self.ratio - self.ratio_expected).abs() <= rel_tol * self.ratio_expected
    }
}

pub fn energy_audit(plan: &ErmakovPlan) -> Result<EnergyAudit> {
    let spec = &plan.spec;
    let traj = trajectory_closed_form(plan, &[0.0, spec.tf])?;
    let e0 = energy(plan, 0.0, traj.q[0], traj.p[0]);
    let ef = energy(plan, spec.tf, traj.q[1], traj.p[1]);
    let (amp, _) = spec.amplitude_phase()?;
    Ok(EnergyAudit {
        e0,
        ef,
        ratio: ef / e0,
        e0_expected: 0.5 * spec.mass * spec.omega0 * spec.omega0 * amp * amp,
        ratio_expected: spec.omegaf / spec.omega0,
    })
}
