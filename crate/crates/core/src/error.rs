use thiserror::Error;

/// Every failure the library reports. The CLI maps `DataIntegrity` to exit
/// code 2 and everything else to exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid orbit: a={a}, b={b} violates a >= 2*sqrt(kappa)*|b|")]
    InvalidOrbit { a: f64, b: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point lies on the separating set (nearest curve {curve}, distance {distance:e})")]
    OnSeparatingSet { curve: String, distance: f64 },
    #[error("singular energy: h={h} coincides with the abscissa of {family}")]
    SingularH { family: String, h: f64 },
    #[error("empty isoenergy surface at h={h}")]
    EmptyQ { h: f64 },
    #[error("no table row matches: {0}")]
    NoMatch(String),
    #[error("data integrity failure: {0}")]
    DataIntegrity(String),
    #[error("unknown arc: {0}")]
    UnknownArc(String),
    #[error("circle ordering unstable at radius {0}")]
    RadiusTooSmall(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
