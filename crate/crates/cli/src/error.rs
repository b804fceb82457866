use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Printed to stderr as one JSON line.
#[derive(Debug, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub code: u8,
    pub error: &'static str,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            error: "input",
            kind,
            message: message.into(),
        }
    }

    pub fn budget(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_BUDGET,
            error: "budget",
            kind,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serialization cannot fail")
    }
}

impl From<pcentered::Error> for CliError {
    fn from(e: pcentered::Error) -> Self {
        use pcentered::Error as E;
        let kind = match &e {
            E::OverLimit { .. } => return CliError::budget("over_limit", e.to_string()),
            E::InvalidVertex { .. } => "invalid_vertex",
            E::SelfLoop(_) => "self_loop",
            E::DuplicateEdge(..) => "duplicate_edge",
            E::DuplicateVertex(_) => "duplicate_vertex",
            E::InvalidColoring(_) => "invalid_coloring",
            E::Unlabeled => "unlabeled",
            E::AlreadyLabeled => "already_labeled",
            E::ProbabilityRange { .. } => "probability_range",
            E::InsufficientPairs { .. } => "insufficient_pairs",
            E::InvalidParameter(_) => "invalid_parameter",
        };
        CliError::input(kind, e.to_string())
    }
}
