#![allow(clippy::needless_range_loop)]

use sta_core::ctrlh::{
    self, adiabatic_path, h_xi, mixing_angle_trajectory, Branch, LinearPhase, ZeroPhase,
};
use sta_core::czmath::{Vec2, C64, I};
use sta_core::ermakov::{display_grid, plan_expansion, trajectory_closed_form, ExpansionSpec};
use sta_core::prop::{propagate, propagate_pair};
use sta_core::pulse::{
    chirped_gaussian, linear_sweep, steps_for, ChirpedGaussianParams, PulseSchedule,
};

fn reference() -> PulseSchedule {
    chirped_gaussian(ChirpedGaussianParams::reference(), 5.0).unwrap()
}

fn grid(s: &PulseSchedule, dt: f64) -> Vec<f64> {
    s.grid(steps_for(s.t_start, s.t_end, dt))
}

#[test]
fn h_a_reproduces_adiabatic_state_with_phase() {
    let s = reference();
    let g = grid(&s, 2e-3);
    let path = adiabatic_path(&s, &g).unwrap();
    for br in Branch::BOTH {
        let traj = propagate(|t| ctrlh::h_a(&s, t), path.adiabatic_state(br, 0), &g).unwrap();
        for k in 0..g.len() {
            let err = (traj.states[k] - path.adiabatic_state(br, k)).norm();
            assert!(err < 1e-8, "{br:?} t = {}: {err:e}", g[k]);
        }
    }
}

#[test]
fn zero_phase_policy_freezes_phase() {
    let s = reference();
    let g = grid(&s, 2e-3);
    let angles = mixing_angle_trajectory(&s, &g).unwrap();
    let ham = |t: f64| {
        let alpha = ctrlh::continue_alpha(&s, t, nearest(&angles, t))?;
        h_xi(&s, &ZeroPhase, &ctrlh::MixingAngleState { alpha, t })
    };
    let traj = propagate(ham, ctrlh::chi(Branch::Plus, angles[0].alpha), &g).unwrap();
    for (k, a) in angles.iter().enumerate() {
        assert!((traj.states[k] - ctrlh::chi(Branch::Plus, a.alpha)).norm() < 1e-8);
    }
}

#[test]
fn linear_phase_policy_attaches_phase() {
    let s = reference();
    let g = grid(&s, 2e-3);
    let angles = mixing_angle_trajectory(&s, &g).unwrap();
    let policy = LinearPhase {
        t0: s.t_start,
        rate_plus: C64::new(0.3, -0.02),
        rate_minus: C64::new(-0.1, 0.0),
    };
    let ham = |t: f64| {
        let alpha = ctrlh::continue_alpha(&s, t, nearest(&angles, t))?;
        h_xi(&s, &policy, &ctrlh::MixingAngleState { alpha, t })
    };
    let traj = propagate(ham, ctrlh::chi(Branch::Plus, angles[0].alpha), &g).unwrap();
    for (k, a) in angles.iter().enumerate() {
        let expected =
            ctrlh::chi(Branch::Plus, a.alpha).scale((I * policy.xi(Branch::Plus, a.t)).exp());
        assert!((traj.states[k] - expected).norm() < 1e-8, "t = {}", a.t);
    }
}

fn nearest(angles: &[ctrlh::MixingAngleState], t: f64) -> C64 {
    let k = angles.partition_point(|a| a.t < t).min(angles.len() - 1);
    let k = if k > 0 && (angles[k - 1].t - t).abs() < (angles[k].t - t).abs() {
        k - 1
    } else {
        k
    };
    angles[k].alpha
}

#[test]
fn landau_zener_sweep_is_transitionless() {
    let s = linear_sweep(-20.0, 4.0, 1.0, 0.0, 0.0, 10.0).unwrap();
    let g = grid(&s, 1e-3);
    let path = adiabatic_path(&s, &g).unwrap();
    let traj = propagate(
        |t| ctrlh::h_a(&s, t),
        path.adiabatic_state(Branch::Plus, 0),
        &g,
    )
    .unwrap();
    for k in 0..g.len() {
        assert!((traj.norm2(k) - 1.0).abs() < 1e-9);
    }
    // the sweep runs from far below to far above resonance: full transfer
    assert!(traj.p2(0) > 0.99 && traj.p1(g.len() - 1) > 0.99);

    let bare = propagate(
        |t| Ok(ctrlh::h_a0(&s, t)),
        path.adiabatic_state(Branch::Plus, 0),
        &g,
    )
    .unwrap();
    assert!(bare.p1(g.len() - 1) < 0.9);
}

#[test]
fn biorthogonal_pair_under_counterdiabatic_driving() {
    let s = reference();
    let g = grid(&s, 1e-3);
    let angles = mixing_angle_trajectory(&s, &g).unwrap();
    let a0 = angles[0].alpha;
    let traj = propagate_pair(
        |t| ctrlh::h_a(&s, t),
        ctrlh::chi(Branch::Plus, a0),
        ctrlh::chi_hat(Branch::Plus, a0),
        &g,
    )
    .unwrap();
    assert!(traj.overlap_drift().unwrap() < 1e-10);
}

#[test]
fn oscillator_via_complex_propagator() {
    // Hamilton's equations as dψ/dt = −iHψ with ψ = (q, p)
    let plan = plan_expansion(ExpansionSpec::reference()).unwrap();
    let g = display_grid(&plan.spec, plan.spec.tf / 20_000.0);
    let closed = trajectory_closed_form(&plan, &g).unwrap();
    let psi0 = Vec2::new(C64::new(closed.q[0], 0.0), C64::new(closed.p[0], 0.0));
    let traj = propagate(|t| Ok(plan.effective_hamiltonian(t)), psi0, &g).unwrap();
    let qmax = closed.q.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for k in 0..g.len() {
        let q = traj.states[k].c1;
        assert!(q.im.abs() < 1e-20);
        assert!((q.re - closed.q[k]).abs() < 1e-6 * qmax, "t = {}", g[k]);
    }
}
