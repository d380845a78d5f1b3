//! Fixed-step RK4 propagation of iħ∂_t|ψ⟩ = H(t)|ψ⟩ (ħ = 1) for
//! non-Hermitian 2×2 Hamiltonians, with the adjoint partner equation
//! iħ∂_t|ψ̂⟩ = H†(t)|ψ̂⟩ and trajectory diagnostics.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::czmath::{BiorthoBasis, Mat2, Vec2, C64, I};
use crate::{Error, Result};

/// States on a time grid. Dense output is the grid itself.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    pub grid: Vec<f64>,
    pub states: Vec<Vec2>,
    pub adjoint_states: Option<Vec<Vec2>>,
}

impl StateTrajectory {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn p1(&self, k: usize) -> f64 {
        self.states[k].population(1)
    }

    pub fn p2(&self, k: usize) -> f64 {
        self.states[k].population(2)
    }

    pub fn norm2(&self, k: usize) -> f64 {
        self.states[k].norm_sqr()
    }

    /// ⟨ψ̂(t_k)|ψ(t_k)⟩ when the adjoint state was propagated.
    pub fn biorth_overlap(&self, k: usize) -> Option<C64> {
        self.adjoint_states
            .as_ref()
            .map(|a| a[k].dot(&self.states[k]))
    }

    pub fn last(&self) -> Option<&Vec2> {
        self.states.last()
    }

    /// Largest |⟨ψ̂|ψ⟩(t) − ⟨ψ̂|ψ⟩(t₀)| along the trajectory.
    pub fn overlap_drift(&self) -> Option<f64> {
        let first = self.biorth_overlap(0)?;
        Some(
            (0..self.len())
                .map(|k| (self.biorth_overlap(k).unwrap() - first).norm())
                .fold(0.0, f64::max),
        )
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "time grid must be strictly increasing",
        ));
    }
    Ok(())
}

/// −iHψ
fn rhs(h: &Mat2, psi: &Vec2) -> Vec2 {
    h.apply(psi).scale(-I)
}

/// One classical RK4 step given H at the start, midpoint and end.
fn rk4_step(h0: &Mat2, hm: &Mat2, h1: &Mat2, psi: &Vec2, dt: f64) -> Vec2 {
    let k1 = rhs(h0, psi);
    let k2 = rhs(hm, &(*psi + k1 * (0.5 * dt)));
    let k3 = rhs(hm, &(*psi + k2 * (0.5 * dt)));
    let k4 = rhs(h1, &(*psi + k3 * dt));
    *psi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// RK4 solution of dψ/dt = −iH(t)ψ on `grid`, one step per interval.
pub fn propagate<F>(mut hamiltonian: F, psi0: Vec2, grid: &[f64]) -> Result<StateTrajectory>
where
    F: FnMut(f64) -> Result<Mat2>,
{
    check_grid(grid)?;
    let mut states = Vec::with_capacity(grid.len());
    let mut psi = psi0;
    if !psi.is_finite() {
        return Err(Error::NonFiniteState { t: grid[0] });
    }
    states.push(psi);
    let mut h_start = hamiltonian(grid[0])?;
    for w in grid.windows(2) {
        let dt = w[1] - w[0];
        let h_mid = hamiltonian(w[0] + 0.5 * dt)?;
        let h_end = hamiltonian(w[1])?;
        psi = rk4_step(&h_start, &h_mid, &h_end, &psi, dt);
        if !psi.is_finite() {
            return Err(Error::NonFiniteState { t: w[1] });
        }
        states.push(psi);
        h_start = h_end;
    }
    Ok(StateTrajectory {
        grid: grid.to_vec(),
        states,
        adjoint_states: None,
    })
}

/// Co-propagates ψ under H and ψ̂ under H†; requires ⟨ψ̂₀|ψ₀⟩ = 1.
pub fn propagate_pair<F>(
    mut hamiltonian: F,
    psi0: Vec2,
    psihat0: Vec2,
    grid: &[f64],
) -> Result<StateTrajectory>
where
    F: FnMut(f64) -> Result<Mat2>,
{
    check_grid(grid)?;
    if (psihat0.dot(&psi0) - 1.0).norm() > 1e-10 {
        return Err(Error::InvalidParameter(
            "initial pair must satisfy <psihat|psi> = 1",
        ));
    }
    let mut states = Vec::with_capacity(grid.len());
    let mut adjoint = Vec::with_capacity(grid.len());
    let (mut psi, mut hat) = (psi0, psihat0);
    states.push(psi);
    adjoint.push(hat);
    let mut h_start = hamiltonian(grid[0])?;
    for w in grid.windows(2) {
        let dt = w[1] - w[0];
        let h_mid = hamiltonian(w[0] + 0.5 * dt)?;
        let h_end = hamiltonian(w[1])?;
        psi = rk4_step(&h_start, &h_mid, &h_end, &psi, dt);
        hat = rk4_step(
            &h_start.adjoint(),
            &h_mid.adjoint(),
            &h_end.adjoint(),
            &hat,
            dt,
        );
        if !psi.is_finite() || !hat.is_finite() {
            return Err(Error::NonFiniteState { t: w[1] });
        }
        states.push(psi);
        adjoint.push(hat);
        h_start = h_end;
    }
    Ok(StateTrajectory {
        grid: grid.to_vec(),
        states,
        adjoint_states: Some(adjoint),
    })
}

/// Biorthogonal coefficients c_n(t_k) = ⟨n̂(t_k)|ψ(t_k)⟩, slot order of the
/// supplied bases.
pub fn branch_projection(traj: &StateTrajectory, bases: &[BiorthoBasis]) -> Result<Vec<[C64; 2]>> {
    if bases.len() != traj.len() {
        return Err(Error::InvalidParameter(
            "basis trajectory length differs from state trajectory",
        ));
    }
    Ok(traj
        .states
        .iter()
        .zip(bases)
        .map(|(psi, b)| b.coefficients(psi))
        .collect())
}

/// Final state only, without storing the trajectory.
pub fn propagate_final<F>(
    mut hamiltonian: F,
    psi0: Vec2,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec2>
where
    F: FnMut(f64) -> Result<Mat2>,
{
    let steps = steps.max(1);
    let dt = (t1 - t0) / steps as f64;
    let mut psi = psi0;
    let mut h_start = hamiltonian(t0)?;
    for k in 0..steps {
        let ta = t0 + dt * k as f64;
        let tb = if k + 1 == steps { t1 } else { ta + dt };
        let h_mid = hamiltonian(ta + 0.5 * (tb - ta))?;
        let h_end = hamiltonian(tb)?;
        psi = rk4_step(&h_start, &h_mid, &h_end, &psi, tb - ta);
        if !psi.is_finite() {
            return Err(Error::NonFiniteState { t: tb });
        }
        h_start = h_end;
    }
    Ok(psi)
}

/// Empirical order p = log₂(e(dt)/e(dt/2)), errors of the final state
/// measured against a dt/8 reference, with dt = (t1 − t0)/steps.
pub fn convergence_order<F>(
    hamiltonian: F,
    psi0: Vec2,
    window: (f64, f64),
    steps: usize,
) -> Result<f64>
where
    F: Fn(f64) -> Result<Mat2>,
{
    let (t0, t1) = window;
    let coarse = propagate_final(&hamiltonian, psi0, t0, t1, steps)?;
    let fine = propagate_final(&hamiltonian, psi0, t0, t1, 2 * steps)?;
    let reference = propagate_final(&hamiltonian, psi0, t0, t1, 8 * steps)?;
    let e1 = (coarse - reference).norm();
    let e2 = (fine - reference).norm();
    Ok((e1 / e2).log2())
}
