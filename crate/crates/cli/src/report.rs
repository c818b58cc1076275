use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use chainforge::Error;

/// A file read by the command, with its digest.
#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Collects inputs and per-leg timings while a command runs.
#[derive(Debug)]
pub struct Run {
    command: &'static str,
    inputs: Vec<Input>,
    timings: BTreeMap<String, f64>,
    clock: Instant,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    pub fn new(command: &'static str) -> Self {
        Run { command, inputs: Vec::new(), timings: BTreeMap::new(), clock: Instant::now() }
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, role: &str, path: &Path) -> Result<String, Error> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(Input { role: role.into(), path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        String::from_utf8(bytes).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))
    }

    /// Records the time since the previous mark under `leg`.
    pub fn mark(&mut self, leg: &str) {
        self.timings.insert(leg.into(), self.clock.elapsed().as_secs_f64() * 1e3);
        self.clock = Instant::now();
    }

    pub fn timing(&mut self, leg: &str, d: std::time::Duration) {
        self.timings.insert(leg.into(), d.as_secs_f64() * 1e3);
    }

    pub fn finish(self, result: Value) -> Value {
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": self.inputs,
            "result": result,
            "timings_ms": self.timings,
        })
    }
}
