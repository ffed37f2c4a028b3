use std::fmt;

use serde::{Deserialize, Serialize};

/// How an iterative solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    /// Hit the step rejection fallback at least once but otherwise converged.
    FallbackUsed,
    IterationCap,
}

impl SolveStatus {
    /// Combines the status of a sub-solve into an aggregate; the most severe
    /// wins.
    pub fn merge(self, other: SolveStatus) -> SolveStatus {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::FallbackUsed => "fallback-used",
            SolveStatus::IterationCap => "iteration-cap",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
