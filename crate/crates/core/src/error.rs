use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// Eigenvalues closer than the requested tolerance (exceptional point).
    DegenerateSpectrum {
        gap: f64,
        threshold: f64,
    },
    /// A quantity that should separate the two branches vanished at `t`.
    ZeroGap {
        t: f64,
    },
    /// Propagation produced NaN or infinity at time `t`.
    NonFiniteState {
        t: f64,
    },
    /// q0 = v0 = 0 leaves the trajectory phase undefined.
    InconsistentInitialConditions,
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateSpectrum { gap, threshold } => write!(
                f,
                "degenerate spectrum: eigenvalue gap {gap:e} below threshold {threshold:e}"
            ),
            Error::ZeroGap { t } => write!(f, "eigenvalue gap vanishes at t = {t}"),
            Error::NonFiniteState { t } => write!(f, "state became non-finite at t = {t}"),
            Error::InconsistentInitialConditions => {
                f.write_str("initial position and velocity are both zero")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
