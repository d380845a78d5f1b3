//! Counterdiabatic (transitionless) driving of the decaying two-level atom.
//!
//! With ħ = 1 the bare Hamiltonian is H_a0 = ½[[−Δ, Ω_R],[Ω_R, Δ − iΓ]].
//! Its instantaneous eigenvectors are parametrized by a complex mixing angle
//! α with tan α = Ω_R/(Δ − iΓ/2):
//!
//! ```text
//! |χ₊⟩ = (sin α/2, cos α/2)ᵀ     |χ₋⟩ = (cos α/2, −sin α/2)ᵀ
//! ```
//!
//! and the biorthogonal partners are their entrywise conjugates. The
//! counterdiabatic term is H_a1 = [[0, C],[−C, 0]] with C = iα̇/2.
//!
//! Branch index convention matches [`czmath::eigensystem_2x2`]: slot 0 is
//! the `−` branch, slot 1 the `+` branch.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::czmath::{eigensystem_2x2, BiorthoBasis, Mat2, Vec2, C64, DEFAULT_TOL, I, ONE, ZERO};
use crate::pulse::{uniform_grid, PulseSample, PulseSchedule};
use crate::quad::simpson_step;
use crate::{Error, Result};

/// Default finite-difference step for eigenvector derivatives (ns).
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Default quadrature step for adiabatic phases (ns).
pub const DEFAULT_PHASE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Minus, Branch::Plus];

    pub fn index(self) -> usize {
        match self {
            Branch::Minus => 0,
            Branch::Plus => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::Minus => Branch::Plus,
            Branch::Plus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngleState {
    pub alpha: C64,
    pub t: f64,
}

/// Adiabatic phase β_n and its biorthogonal partner β̂_n = β_n*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub beta: C64,
    pub beta_hat: C64,
}

impl PhasePair {
    pub fn new(beta: C64) -> Self {
        Self {
            beta,
            beta_hat: beta.conj(),
        }
    }

    /// e^{iβ}
    pub fn factor(&self) -> C64 {
        (I * self.beta).exp()
    }
}

pub fn h_a0(s: &PulseSchedule, t: f64) -> Mat2 {
    h_a0_from(&s.sample(t))
}

fn h_a0_from(p: &PulseSample) -> Mat2 {
    Mat2::new(
        C64::new(-0.5 * p.delta, 0.0),
        C64::new(0.5 * p.rabi, 0.0),
        C64::new(0.5 * p.rabi, 0.0),
        C64::new(0.5 * p.delta, -0.5 * p.gamma),
    )
}

/// α̇ = [Ω̇_R(Δ − iΓ/2) − Ω_R(Δ̇ − iΓ̇/2)] / [(Δ − iΓ/2)² + Ω_R²]
pub fn alpha_dot(s: &PulseSchedule, t: f64) -> Result<C64> {
    alpha_dot_from(&s.sample(t), t)
}

fn alpha_dot_from(p: &PulseSample, t: f64) -> Result<C64> {
    let d = p.complex_detuning();
    let den = d * d + p.rabi * p.rabi;
    if !(den.norm() > 1e-300) {
        return Err(Error::ZeroGap { t });
    }
    let num = d * p.rabi_dot - C64::new(p.delta_dot, -0.5 * p.gamma_dot) * p.rabi;
    Ok(num / den)
}

/// C(t) = iα̇/2
pub fn cd_coupling(s: &PulseSchedule, t: f64) -> Result<C64> {
    Ok(I * alpha_dot(s, t)? * 0.5)
}

fn cd_matrix(c: C64) -> Mat2 {
    Mat2::new(ZERO, c, -c, ZERO)
}

pub fn h_a1(s: &PulseSchedule, t: f64) -> Result<Mat2> {
    Ok(cd_matrix(cd_coupling(s, t)?))
}

/// H_a = H_a0 + H_a1.
pub fn h_a(s: &PulseSchedule, t: f64) -> Result<Mat2> {
    Ok(h_a0(s, t) + h_a1(s, t)?)
}

/// H_a with Re C dropped, so the added coupling is Hermitian.
pub fn h_a_approx(s: &PulseSchedule, t: f64) -> Result<Mat2> {
    let c = cd_coupling(s, t)?;
    Ok(h_a0(s, t) + cd_matrix(C64::new(0.0, c.im)))
}

/// Mixing angle modulo π, as ½i⁻¹ ln[(D + iΩ_R)/(D − iΩ_R)] with D = Δ − iΓ/2.
///
/// Equal to arctan(Ω_R/D) on the principal branch and well defined at D = 0.
pub fn principal_alpha(p: &PulseSample, t: f64) -> Result<C64> {
    let d = p.complex_detuning();
    let num = d + I * p.rabi;
    let den = d - I * p.rabi;
    if !(num.norm() > 1e-300 && den.norm() > 1e-300) {
        return Err(Error::ZeroGap { t });
    }
    Ok((num / den).ln() * C64::new(0.0, -0.5))
}

/// Branch of α at `t` closest to `near`.
pub fn continue_alpha(s: &PulseSchedule, t: f64, near: C64) -> Result<C64> {
    let p = principal_alpha(&s.sample(t), t)?;
    let k = ((near.re - p.re) / PI).round();
    Ok(p + k * PI)
}

/// α on `grid`, anchored at the principal value at `grid[0]` and continued by
/// integrating α̇; each sample is then snapped to the exact branch nearest the
/// integrated value.
pub fn mixing_angle_trajectory(s: &PulseSchedule, grid: &[f64]) -> Result<Vec<MixingAngleState>> {
    check_grid(s, grid)?;
    let mut out = Vec::with_capacity(grid.len());
    let Some(&t0) = grid.first() else {
        return Ok(out);
    };
    let mut alpha = principal_alpha(&s.sample(t0), t0)?;
    let mut rate = alpha_dot(s, t0)?;
    out.push(MixingAngleState { alpha, t: t0 });
    for w in grid.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let mid = alpha_dot(s, 0.5 * (ta + tb))?;
        let next_rate = alpha_dot(s, tb)?;
        let estimate = alpha + simpson_step(rate, mid, next_rate, ta, tb);
        alpha = continue_alpha(s, tb, estimate)?;
        rate = next_rate;
        out.push(MixingAngleState { alpha, t: tb });
    }
    Ok(out)
}

fn check_grid(s: &PulseSchedule, grid: &[f64]) -> Result<()> {
    let slack = 1e-9 * s.duration().abs().max(1.0);
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "time grid must be strictly increasing",
            ));
        }
    }
    if let (Some(&a), Some(&b)) = (grid.first(), grid.last()) {
        if a < s.t_start - slack || b > s.t_end + slack {
            return Err(Error::InvalidParameter(
                "time grid leaves the schedule window",
            ));
        }
    }
    Ok(())
}

/// |χ_±(α)⟩
pub fn chi(branch: Branch, alpha: C64) -> Vec2 {
    let (sn, cs) = ((alpha * 0.5).sin(), (alpha * 0.5).cos());
    match branch {
        Branch::Plus => Vec2::new(sn, cs),
        Branch::Minus => Vec2::new(cs, -sn),
    }
}

/// |χ̂_±⟩, eigenvector of H_a0† (entrywise conjugate of |χ_±⟩).
pub fn chi_hat(branch: Branch, alpha: C64) -> Vec2 {
    chi(branch, alpha).conj()
}

/// E_± = −iΓ/4 ± ½[(Δ − iΓ/2) cos α + Ω_R sin α], continuous along α.
pub fn eigenvalue(p: &PulseSample, branch: Branch, alpha: C64) -> C64 {
    let w = p.complex_detuning() * alpha.cos() + alpha.sin() * p.rabi;
    C64::new(0.0, -0.25 * p.gamma) + w * (0.5 * branch.sign())
}

/// Biorthogonal eigenbasis of H_a0 in the mixing-angle gauge.
pub fn atom_basis(s: &PulseSchedule, state: &MixingAngleState) -> BiorthoBasis {
    let p = s.sample(state.t);
    let a = state.alpha;
    BiorthoBasis {
        values: [
            eigenvalue(&p, Branch::Minus, a),
            eigenvalue(&p, Branch::Plus, a),
        ],
        right: [chi(Branch::Minus, a), chi(Branch::Plus, a)],
        left: [chi_hat(Branch::Minus, a), chi_hat(Branch::Plus, a)],
    }
}

/// Mixing angle, eigenbasis and adiabatic phases sampled on a grid.
#[derive(Debug, Clone)]
pub struct AdiabaticPath {
    pub angles: Vec<MixingAngleState>,
    /// β_n(t_k) per branch slot, zero at the first grid point.
    pub beta: [Vec<C64>; 2],
}

impl AdiabaticPath {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.angles.iter().map(|a| a.t)
    }

    pub fn phase(&self, branch: Branch, k: usize) -> PhasePair {
        PhasePair::new(self.beta[branch.index()][k])
    }

    /// e^{iβ_n(t_k)} |χ_n(t_k)⟩, the exact solution under [`h_a`].
    pub fn adiabatic_state(&self, branch: Branch, k: usize) -> Vec2 {
        chi(branch, self.angles[k].alpha).scale(self.phase(branch, k).factor())
    }

    pub fn bases(&self, s: &PulseSchedule) -> Vec<BiorthoBasis> {
        self.angles.iter().map(|a| atom_basis(s, a)).collect()
    }
}

/// Mixing angles plus β_n(t) = −∫E_n dt' (the geometric term ⟨χ̂_n|∂_t χ_n⟩
/// vanishes identically), by per-step Simpson quadrature with midpoints.
pub fn adiabatic_path(s: &PulseSchedule, grid: &[f64]) -> Result<AdiabaticPath> {
    let angles = mixing_angle_trajectory(s, grid)?;
    let mut beta = [
        Vec::with_capacity(angles.len()),
        Vec::with_capacity(angles.len()),
    ];
    if angles.is_empty() {
        return Ok(AdiabaticPath { angles, beta });
    }
    let energies = |st: &MixingAngleState| {
        let p = s.sample(st.t);
        [
            eigenvalue(&p, Branch::Minus, st.alpha),
            eigenvalue(&p, Branch::Plus, st.alpha),
        ]
    };
    let mut acc = [ZERO; 2];
    beta[0].push(ZERO);
    beta[1].push(ZERO);
    let mut prev = energies(&angles[0]);
    for w in angles.windows(2) {
        let tm = 0.5 * (w[0].t + w[1].t);
        let am = continue_alpha(s, tm, (w[0].alpha + w[1].alpha) * 0.5)?;
        let mid = energies(&MixingAngleState { alpha: am, t: tm });
        let next = energies(&w[1]);
        for n in 0..2 {
            acc[n] -= simpson_step(prev[n], mid[n], next[n], w[0].t, w[1].t);
            beta[n].push(acc[n]);
        }
        prev = next;
    }
    Ok(AdiabaticPath { angles, beta })
}

/// β_n from the window start to `t`, on a uniform grid of step about
/// [`DEFAULT_PHASE_STEP`].
pub fn berry_phase(s: &PulseSchedule, branch: Branch, t: f64) -> Result<PhasePair> {
    if t == s.t_start {
        return Ok(PhasePair::new(ZERO));
    }
    let steps = crate::pulse::steps_for(s.t_start, t, DEFAULT_PHASE_STEP).max(2);
    let path = adiabatic_path(s, &uniform_grid(s.t_start, t, steps))?;
    Ok(path.phase(branch, path.len() - 1))
}

/// Phase-freedom policy: time derivatives ξ̇_± of the phases attached to
/// |χ_±⟩. The partner phases are ξ̂_n = ξ_n*.
pub trait XiPolicy {
    /// ξ̇_n at time `t`, where `alpha` is the mixing angle at `t`.
    fn xi_dot(&self, branch: Branch, t: f64, alpha: C64) -> C64;
}

/// ξ_n ≡ 0: H_ξ reduces to the pure counterdiabatic term.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPhase;

impl XiPolicy for ZeroPhase {
    fn xi_dot(&self, _: Branch, _: f64, _: C64) -> C64 {
        ZERO
    }
}

/// ξ_n = β_n, which turns H_ξ back into H_a0 + H_a1.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalPhase<'a> {
    pub schedule: &'a PulseSchedule,
}

impl XiPolicy for CanonicalPhase<'_> {
    fn xi_dot(&self, branch: Branch, t: f64, alpha: C64) -> C64 {
        // −E_n + i⟨χ̂_n|∂_t χ_n⟩, and the second term is zero
        -eigenvalue(&self.schedule.sample(t), branch, alpha)
    }
}

/// ξ_n(t) = rate_n·(t − t0).
#[derive(Debug, Clone, Copy)]
pub struct LinearPhase {
    pub t0: f64,
    pub rate_plus: C64,
    pub rate_minus: C64,
}

impl LinearPhase {
    pub fn xi(&self, branch: Branch, t: f64) -> C64 {
        self.rate(branch) * (t - self.t0)
    }

    pub fn xi_hat(&self, branch: Branch, t: f64) -> C64 {
        self.xi(branch, t).conj()
    }

    fn rate(&self, branch: Branch) -> C64 {
        match branch {
            Branch::Plus => self.rate_plus,
            Branch::Minus => self.rate_minus,
        }
    }
}

impl XiPolicy for LinearPhase {
    fn xi_dot(&self, branch: Branch, _: f64, _: C64) -> C64 {
        self.rate(branch)
    }
}

/// H_ξ for the two-level atom: diagonal −sin²(α/2)ξ̇₊ − cos²(α/2)ξ̇₋ and
/// −cos²(α/2)ξ̇₊ − sin²(α/2)ξ̇₋, off-diagonal (sin α/2)(ξ̇₋ − ξ̇₊) ± C.
pub fn h_xi<P: XiPolicy + ?Sized>(
    s: &PulseSchedule,
    policy: &P,
    state: &MixingAngleState,
) -> Result<Mat2> {
    let t = state.t;
    let c = cd_coupling(s, t)?;
    let (xp, xm) = (
        policy.xi_dot(Branch::Plus, t, state.alpha),
        policy.xi_dot(Branch::Minus, t, state.alpha),
    );
    let half = state.alpha * 0.5;
    let (s2, c2) = (half.sin() * half.sin(), half.cos() * half.cos());
    let off = state.alpha.sin() * 0.5 * (xm - xp);
    Ok(Mat2::new(
        -s2 * xp - c2 * xm,
        off + c,
        off - c,
        -c2 * xp - s2 * xm,
    ))
}

/// Right eigenvectors differentiated at `t`, alongside the basis at `t`.
#[derive(Debug, Clone, Copy)]
pub struct EigvecDerivative {
    pub basis: BiorthoBasis,
    /// |∂_t r_n⟩ per branch slot.
    pub derivative: [Vec2; 2],
}

/// Central difference of gauge-aligned eigenvectors.
///
/// The neighbours r_n(t ± h) are matched to r_n(t) by eigenvalue and divided
/// by ⟨l_n(t)|r_n(t ± h)⟩, so their overlap with the reference is exactly 1.
pub fn numeric_eigvec_derivative<F>(hamiltonian: &F, t: f64, h: f64) -> Result<EigvecDerivative>
where
    F: Fn(f64) -> Result<Mat2> + ?Sized,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(
            "finite-difference step must be positive",
        ));
    }
    let basis = eigensystem_2x2(&hamiltonian(t)?, DEFAULT_TOL)?;
    let lo = eigensystem_2x2(&hamiltonian(t - h)?, DEFAULT_TOL)?;
    let hi = eigensystem_2x2(&hamiltonian(t + h)?, DEFAULT_TOL)?;
    let aligned = |nb: &BiorthoBasis, n: usize| -> Vec2 {
        let e = basis.values[n];
        let m = if (nb.values[0] - e).norm() <= (nb.values[1] - e).norm() {
            0
        } else {
            1
        };
        let r = nb.right[m];
        r.scale(ONE / basis.left[n].dot(&r))
    };
    let mut derivative = [Vec2::default(); 2];
    for (n, d) in derivative.iter_mut().enumerate() {
        *d = (aligned(&hi, n) - aligned(&lo, n)) * (0.5 / h);
    }
    Ok(EigvecDerivative { basis, derivative })
}

/// H₁ = i Σ_n [|∂_t n⟩⟨n̂| − ⟨n̂|∂_t n⟩ |n⟩⟨n̂|] for an arbitrary non-degenerate
/// 2×2 Hamiltonian.
pub fn h1_general<F>(hamiltonian: &F, t: f64, h: f64) -> Result<Mat2>
where
    F: Fn(f64) -> Result<Mat2> + ?Sized,
{
    let d = numeric_eigvec_derivative(hamiltonian, t, h)?;
    Ok(h1_from_derivative(&d))
}

pub fn h1_from_derivative(d: &EigvecDerivative) -> Mat2 {
    let b = &d.basis;
    let mut acc = Mat2::zero();
    for n in 0..2 {
        let geometric = b.left[n].dot(&d.derivative[n]);
        acc += d.derivative[n].outer(&b.left[n]) - b.projector(n) * geometric;
    }
    acc * I
}
