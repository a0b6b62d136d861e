use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one verification suite. Failing reports carry a counterexample
/// or an infeasibility witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub checks: u64,
    pub certificate: Value,
    pub counterexample: Option<Value>,
    pub seed: Option<u64>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(suite: &str, anchor: &str) -> Report {
        Report {
            suite: suite.to_string(),
            anchor: anchor.to_string(),
            verdict: Verdict::Pass,
            checks: 0,
            certificate: Value::Null,
            counterexample: None,
            seed: None,
            wall_time_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Marks the report failed, keeping the first counterexample only.
    pub fn fail(&mut self, counterexample: Value) {
        self.verdict = Verdict::Fail;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    pub fn skip(&mut self, reason: &str) {
        self.verdict = Verdict::Skipped;
        self.counterexample = Some(serde_json::json!({ "skipped": reason }));
    }
}
