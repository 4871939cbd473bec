use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("tableau is not standard")]
    NotStandard,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("dangling internal vertex {0}")]
    DanglingVertex(i64),
    #[error("not reduced: {0}")]
    NotReduced(String),
    #[error("invalid web: {0}")]
    InvalidWeb(String),
    #[error("zero invariant diagram")]
    ZeroInvariant,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("pole at point: minor {0} vanishes")]
    PoleAtPoint(String),
    #[error("rank loss: {0}")]
    RankLoss(String),
    #[error("twist undefined at this network: {0}")]
    TwistUndefined(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeGuard(_) => "size_guard",
            Error::InvalidTableau(_) => "invalid_tableau",
            Error::NotStandard => "not_standard",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::DanglingVertex(_) => "dangling_vertex",
            Error::NotReduced(_) => "not_reduced",
            Error::InvalidWeb(_) => "invalid_web",
            Error::ZeroInvariant => "zero_invariant",
            Error::SizeMismatch(_) => "size_mismatch",
            Error::DegreeMismatch(_) => "degree_mismatch",
            Error::PoleAtPoint(_) => "pole_at_point",
            Error::RankLoss(_) => "rank_loss",
            Error::TwistUndefined(_) => "twist_undefined",
            Error::Unsupported(_) => "unsupported",
            Error::OutOfRange(_) => "out_of_range",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
