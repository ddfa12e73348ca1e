//! The JSON run report. Field order is fixed and nothing depends on wall
//! time unless timings were asked for, so equal inputs give equal bytes.

use serde::Serialize;
use serde_json::{Map, Value};

use workbench_core::axioms::Outcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictEntry {
    pub name: String,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl VerdictEntry {
    pub fn new(name: impl Into<String>, outcome: Outcome, witness: Option<Vec<String>>) -> Self {
        VerdictEntry { name: name.into(), outcome: outcome.as_str(), witness }
    }

    pub fn check(name: impl Into<String>, failures: &[String]) -> Self {
        if failures.is_empty() {
            Self::new(name, Outcome::Holds, None)
        } else {
            Self::new(name, Outcome::Fails, Some(failures.to_vec()))
        }
    }
}

/// How a command ended; errors rank with failures for the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Inconclusive,
    Fails,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Inconclusive => "inconclusive",
            Status::Fails => "fails",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails | Status::Error => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl From<Outcome> for Status {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Holds => Status::Holds,
            Outcome::Inconclusive => Status::Inconclusive,
            Outcome::Fails => Status::Fails,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandReport {
    pub index: usize,
    pub command: &'static str,
    pub inputs: Value,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictEntry>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip)]
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub samples: usize,
    pub depth: usize,
    pub outcome: &'static str,
    pub exit_code: i32,
    pub commands: Vec<CommandReport>,
}

impl RunReport {
    pub fn new(seed: u64, samples: usize, depth: usize, commands: Vec<CommandReport>) -> Self {
        let status = commands.iter().map(|c| c.status).max().unwrap_or(Status::Holds);
        RunReport {
            schema_version: SCHEMA_VERSION,
            seed,
            samples,
            depth,
            outcome: status.as_str(),
            exit_code: status.exit_code(),
            commands,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
