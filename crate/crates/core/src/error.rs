use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level {level} exceeds the configured cap {cap}")]
    LevelCap { level: u32, cap: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("distance matrix needs {entries} entries, budget is {budget}")]
    Budget { entries: u64, budget: u64 },

    #[error("cover problem is infeasible: {0} target vertices cannot be reached")]
    InfeasibleCover(usize),

    #[error("degenerate regression: {0}")]
    DegenerateFit(String),

    #[error("separation failed between members {first} and {second}: distance {distance}")]
    Separation {
        first: usize,
        second: usize,
        distance: String,
    },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
