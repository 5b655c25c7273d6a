use thiserror::Error;

#[derive(Debug, Error)]
pub enum SekineError {
    #[error("group order k must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("operands live over different group orders ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("convolution power must be at least 1")]
    ZeroPower,

    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("catalog invariant violated: {0}")]
    Catalog(String),

    #[error("malformed state file: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SekineError> = std::result::Result<T, E>;

pub(crate) fn check_order(k: usize) -> Result<()> {
    if k < 2 {
        return Err(SekineError::InvalidOrder(k));
    }
    Ok(())
}

pub(crate) fn check_same(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(SekineError::OrderMismatch { left, right });
    }
    Ok(())
}
