use thiserror::Error;

/// Errors produced by the discovery core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// A caller-supplied parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(alloc::string::String),

    /// A distance structure would need more memory than the configured budget.
    #[error("capacity exceeded: {required} bytes required, budget is {budget} bytes")]
    Capacity {
        /// Bytes the structure needs.
        required: usize,
        /// Configured budget in bytes.
        budget: usize,
    },

    /// No candidate produced a feasible leitmotif.
    #[error("no feasible leitmotif")]
    NoLeitmotif,

    /// A pair was looked up in the sparse store that pass 1 never memorized.
    #[error("pair ({i}, {j}) in dimension {dim} was not memorized")]
    MissingPair {
        /// Dimension of the lookup.
        dim: usize,
        /// First offset.
        i: usize,
        /// Second offset.
        j: usize,
    },

    /// Row recomputation disagreed between the two sparse passes.
    #[error("pass 2 row {row} of dimension {dim} differs from pass 1")]
    RowMismatch {
        /// Dimension of the row.
        dim: usize,
        /// Row (query offset).
        row: usize,
    },
}

/// Result alias for the core crate.
pub type Result<T> = core::result::Result<T, CoreError>;

pub(crate) fn param_error(msg: core::fmt::Arguments<'_>) -> CoreError {
    CoreError::Parameter(alloc::format!("{msg}"))
}

macro_rules! ensure_param {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::param_error(format_args!($($arg)+)));
        }
    };
}
pub(crate) use ensure_param;
