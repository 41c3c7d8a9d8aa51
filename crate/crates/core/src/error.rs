use thiserror::Error;

/// Errors raised by the simulation and inversion pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-posed frequency k = {k}: mode {n} sits on a cutoff (delta(k) = 0)")]
    IllPosedFrequency { k: f64, n: u32 },

    #[error("mode {n} is not locally resonant at k = {k}")]
    NotResonant { k: f64, n: u32 },

    #[error("resonant point is ambiguous: {count} crossings of h(x) = {level} (non-monotone profile)")]
    AmbiguousResonance { level: f64, count: usize },

    #[error("multiple resonant point at x = {x}: h'(x) = 0")]
    MultipleResonance { x: f64 },

    #[error("unknown profile id `{0}`")]
    UnknownProfile(String),

    #[error("frequency interval [{a}, {b}] is not inside the resonant band ({lo}, {hi})")]
    OutOfBand { a: f64, b: f64, lo: f64, hi: f64 },

    #[error("value {re}+{im}i is off the image of the model function (|z| > 1.25)")]
    OffImage { re: f64, im: f64 },

    #[error("Airy kernel pole: {0}")]
    Pole(String),

    #[error("quadrature failed on [{a}, {b}]: {reason}")]
    Quadrature { a: f64, b: f64, reason: String },

    #[error("degenerate source: |q(k)| = {magnitude:e} at k = {k}")]
    DegenerateSource { k: f64, magnitude: f64 },

    #[error("unwrap ambiguity at index {index}: gap is pi/2 within tolerance, use a finer frequency step")]
    UnwrapAmbiguity { index: usize },

    #[error("degenerate frequency grid: {0}")]
    DegenerateGrid(String),

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("linear solver failed: {0}")]
    Solver(String),

    #[error("inconclusive band: {0}")]
    Inconclusive(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("at frequency index {index} (k = {k})")]
    AtFrequency {
        index: usize,
        k: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{stage} stage failed")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Wraps `self` with the name of the pipeline stage that raised it.
    pub fn in_stage(self, stage: &str) -> Error {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// The innermost error, past stage and frequency wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } | Error::AtFrequency { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
