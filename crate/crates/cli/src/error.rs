//! Failure classification driving the process exit code: 2 for config and
//! environment problems, 3 for numerical failures, 4 for validation-suite
//! failures.

use std::fmt;

#[derive(Debug)]
pub enum AppError {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
    Validation { failed: usize },
}

impl AppError {
    pub fn numerical(err: impl std::error::Error + Send + Sync + 'static) -> Self {
        AppError::Numerical(anyhow::Error::new(err))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Numerical(_) => 3,
            AppError::Validation { .. } => 4,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(e) => write!(f, "configuration error: {e:#}"),
            AppError::Numerical(e) => write!(f, "numerical failure: {e:#}"),
            AppError::Validation { failed } => {
                write!(f, "validation failed: {failed} check(s) did not pass")
            }
        }
    }
}

impl std::error::Error for AppError {}
