use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// What a subcommand computed, before it is wrapped into a [`RunReport`].
#[derive(Debug, Clone)]
pub struct Outcome {
    /// `Some(false)` when the checked property fails; `None` for plain computations.
    pub holds: Option<bool>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub text: String,
}

impl Outcome {
    pub fn computed(result: Value, text: impl Into<String>) -> Outcome {
        Outcome { holds: None, result, witnesses: Vec::new(), text: text.into() }
    }

    pub fn property(holds: bool, result: Value, text: impl Into<String>) -> Outcome {
        Outcome { holds: Some(holds), result, witnesses: Vec::new(), text: text.into() }
    }

    pub fn with_witness(mut self, w: Value) -> Outcome {
        self.witnesses.push(w);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.holds {
            Some(false) => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the arguments and the contents of every input file.
    pub inputs: String,
    pub seed: u64,
    pub holds: Option<bool>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// Collects the command name, arguments and file contents into a digest.
pub struct Inputs {
    command: Vec<String>,
    hasher: Sha256,
}

impl Inputs {
    pub fn new(command: &[&str]) -> Inputs {
        let mut inputs = Inputs { command: command.iter().map(|s| s.to_string()).collect(), hasher: Sha256::new() };
        for c in command {
            inputs.feed("cmd", c.as_bytes());
        }
        inputs
    }

    fn feed(&mut self, tag: &str, bytes: &[u8]) {
        self.hasher.update((tag.len() as u64).to_le_bytes());
        self.hasher.update(tag.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn arg(&mut self, name: &str, value: impl ToString) {
        self.feed(name, value.to_string().as_bytes());
    }

    /// Reads a file and records its contents, not its path.
    pub fn file(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.feed("file", text.as_bytes());
        Ok(text)
    }

    pub fn command(&self) -> String {
        self.command.join(" ")
    }

    pub fn digest(self) -> String {
        self.hasher.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}
