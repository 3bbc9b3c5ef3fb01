use std::fmt;

use serde::Serialize;

use crate::codec::ArtifactCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
    Error,
}

impl Verdict {
    /// Process exit status for this verdict: 0, 1 or 2.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Valid => 0,
            Verdict::Invalid => 1,
            Verdict::Error => 2,
        }
    }

    /// Combines verdicts; error dominates invalid, which dominates valid.
    pub fn worst(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    fn rank(self) -> u8 {
        self.exit_code() as u8
    }
}

impl PartialOrd for Verdict {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Verdict {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::Error => "error",
        })
    }
}

/// Outcome of verifying one artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub expected_code: Option<ArtifactCode>,
    pub computed_code: Option<ArtifactCode>,
    pub message: String,
}

impl CheckReport {
    /// Compares a computed code against the expected one.
    pub fn compare(expected: ArtifactCode, computed: ArtifactCode) -> Self {
        let (verdict, message) = if expected == computed {
            (Verdict::Valid, "hash matches".to_string())
        } else {
            (Verdict::Invalid, format!("hash mismatch: computed {computed}"))
        };
        CheckReport {
            verdict,
            expected_code: Some(expected),
            computed_code: Some(computed),
            message,
        }
    }

    pub fn invalid(expected: Option<ArtifactCode>, message: impl Into<String>) -> Self {
        CheckReport {
            verdict: Verdict::Invalid,
            expected_code: expected,
            computed_code: None,
            message: message.into(),
        }
    }

    pub fn error(expected: Option<ArtifactCode>, message: impl Into<String>) -> Self {
        CheckReport {
            verdict: Verdict::Error,
            expected_code: expected,
            computed_code: None,
            message: message.into(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if let Some(code) = &self.expected_code {
            write!(f, " {code}")?;
        }
        write!(f, ": {}", self.message)
    }
}
