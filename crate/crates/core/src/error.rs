use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown coin `{name}` (valid options: {valid})")]
    UnknownCoin { name: String, valid: String },

    #[error("initial coin state is not normalized: |alpha|^2 + |beta|^2 = {norm} (deficit {deficit:e})")]
    NotNormalized { norm: f64, deficit: f64 },

    #[error("position {x} lies outside the lattice [-{limit}, {limit}]")]
    PositionOutOfRange { x: i64, limit: i64 },

    #[error(
        "lattice exhausted: state at t={time} cannot take {requested} more step(s) on a lattice \
         supporting {half_width} steps; build the walk with a larger half-width"
    )]
    LatticeExhausted {
        time: usize,
        requested: usize,
        half_width: usize,
    },

    #[error("coin matrix is not unitary (max |C^dagger C - I| = {deviation:e})")]
    NonUnitaryCoin { deviation: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
