use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// The geometry is degenerate at the requested point.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// A model could not be built from the supplied data.
    #[error("construction error: {0}")]
    Construction(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    /// An integrator left the admissible region; `last_good_time` is the last
    /// time at which the state was finite and bounded.
    #[error("integration diverged after t = {last_good_time}")]
    Divergence { last_good_time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn geometry(msg: impl Into<String>) -> Error {
    Error::Geometry(msg.into())
}
