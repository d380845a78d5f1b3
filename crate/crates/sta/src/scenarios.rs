//! The CSV-producing scenarios.

use sta_core::ctrlh::{self, adiabatic_path, Branch};
use sta_core::ermakov::{
    self, display_grid, energy, hamilton_oracle, plan_expansion, trajectory_closed_form,
};
use sta_core::prop::{branch_projection, propagate};
use sta_core::pulse::{adiabaticity_ratio, steps_for, PulseSchedule};
use sta_core::{Error, Vec2};

use crate::csv::Table;
use crate::{Params, RunConfig, Scenario, ShellError};

/// A finished table plus any notices for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub notes: Vec<String>,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Self {
            table,
            notes: Vec::new(),
        }
    }
}

/// Runs any table-producing scenario; `check` is handled by [`crate::check`].
pub fn run(config: &RunConfig) -> Result<Output, ShellError> {
    let p = &config.params;
    match config.scenario {
        Scenario::Rap => run_rap(p).map(Output::from),
        Scenario::RapCd | Scenario::RapCdApprox => run_rap_cd(p, config.approx).map(Output::from),
        Scenario::CdTerms => run_cd_terms(p).map(Output::from),
        Scenario::Oscillator => run_oscillator(p),
        Scenario::Check => Err(ShellError::Config("check does not produce a table".into())),
    }
}

fn atom_grid(p: &Params) -> Result<(PulseSchedule, Vec<f64>), ShellError> {
    let s = p.atom.schedule()?;
    let grid = s.grid(steps_for(s.t_start, s.t_end, p.atom.dt_ns));
    Ok((s, grid))
}

/// Bare chirped pulse from |2⟩: t, P1, P2, norm², adiabaticity ratio.
pub fn run_rap(p: &Params) -> Result<Table, ShellError> {
    let (s, grid) = atom_grid(p)?;
    let traj = propagate(|t| Ok(ctrlh::h_a0(&s, t)), Vec2::basis2(), &grid)?;
    let mut table = Table::new(vec!["t_ns", "P1", "P2", "norm2", "adiab_ratio"]);
    for (k, &t) in grid.iter().enumerate() {
        table.push(vec![
            t,
            traj.p1(k),
            traj.p2(k),
            traj.norm2(k),
            adiabaticity_ratio(&s, t)?,
        ]);
    }
    Ok(table)
}

/// Counterdiabatic driving from |χ₊(t_start)⟩ under H_a, or under H_a with
/// Re C dropped when `approx` is set: t, P1, P2, norm², |c₋|.
pub fn run_rap_cd(p: &Params, approx: bool) -> Result<Table, ShellError> {
    let (s, grid) = atom_grid(p)?;
    let path = adiabatic_path(&s, &grid)?;
    let psi0 = ctrlh::chi(Branch::Plus, path.angles[0].alpha);
    let traj = if approx {
        propagate(|t| ctrlh::h_a_approx(&s, t), psi0, &grid)?
    } else {
        propagate(|t| ctrlh::h_a(&s, t), psi0, &grid)?
    };
    let coeffs = branch_projection(&traj, &path.bases(&s))?;
    let mut table = Table::new(vec!["t_ns", "P1", "P2", "norm2", "abs_c_minus"]);
    for (k, &t) in grid.iter().enumerate() {
        table.push(vec![
            t,
            traj.p1(k),
            traj.p2(k),
            traj.norm2(k),
            coeffs[k][Branch::Minus.index()].norm(),
        ]);
    }
    Ok(table)
}

/// Real and imaginary parts of C(t) in rad/ns, with the adiabaticity ratio.
pub fn run_cd_terms(p: &Params) -> Result<Table, ShellError> {
    let (s, grid) = atom_grid(p)?;
    let mut table = Table::new(vec![
        "t_ns",
        "ReC_rad_per_ns",
        "ImC_rad_per_ns",
        "adiab_ratio",
    ]);
    for &t in &grid {
        let c = ctrlh::cd_coupling(&s, t)?;
        table.push(vec![t, c.re, c.im, adiabaticity_ratio(&s, t)?]);
    }
    Ok(table)
}

pub const OSCILLATOR_COLUMNS: [&str; 9] = [
    "t_ms",
    "q_um",
    "v_um_per_ms",
    "E_J",
    "E_over_omega_Js",
    "omega_sq_rad2_per_s2",
    "rho",
    "q_oracle_um",
    "v_oracle_um_per_ms",
];

/// Phase-space trajectory over one ω₀ period, the shortcut and one ω_f
/// period, from the closed form and from the Hamilton-equations oracle.
pub fn run_oscillator(p: &Params) -> Result<Output, ShellError> {
    let spec = p.oscillator.spec()?;
    let plan = plan_expansion(spec)?;
    let grid = display_grid(&spec, p.oscillator.dt_ms * 1e-3);
    let mut notes = Vec::new();
    if plan.trap_inverted() {
        notes.push(format!(
            "omega^2 becomes negative (min {:.6e} rad^2/s^2 at t = {:.6e} s): the trap is momentarily inverted",
            plan.min_omega_sq, plan.min_omega_sq_at
        ));
    }
    let mut table = Table::new(OSCILLATOR_COLUMNS.to_vec());
    let (closed, oracle) = match trajectory_closed_form(&plan, &grid) {
        Ok(closed) => (closed, hamilton_oracle(&plan, &grid)?),
        Err(Error::InconsistentInitialConditions) => {
            notes.push(
                "q0 = v0 = 0: the particle stays at rest; emitting the zero trajectory".into(),
            );
            let zeros = ermakov::PhaseSpaceTrajectory {
                t: grid.clone(),
                q: vec![0.0; grid.len()],
                p: vec![0.0; grid.len()],
            };
            (zeros.clone(), zeros)
        }
        Err(e) => return Err(e.into()),
    };
    let m = spec.mass;
    for (k, &t) in grid.iter().enumerate() {
        let (q, pm) = (closed.q[k], closed.p[k]);
        let e = energy(&plan, t, q, pm);
        let w2 = plan.omega_sq(t);
        table.push(vec![
            t * 1e3,
            q * 1e6,
            pm / m * 1e3,
            e,
            e / w2.sqrt(),
            w2,
            plan.rho(t),
            oracle.q[k] * 1e6,
            oracle.p[k] / m * 1e3,
        ]);
    }
    Ok(Output { table, notes })
}
