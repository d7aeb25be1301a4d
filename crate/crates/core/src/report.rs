//! Check outcomes and the serializable verification report.

use std::fmt;
use std::time::Duration;

use serde::Serialize;

/// A counterexample to a checked property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub detail: String,
}

impl Witness {
    pub fn at(n: u64, detail: impl Into<String>) -> Self {
        Witness {
            n: Some(n),
            detail: detail.into(),
        }
    }

    pub fn msg(detail: impl Into<String>) -> Self {
        Witness {
            n: None,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "n = {n}: {}", self.detail),
            None => f.write_str(&self.detail),
        }
    }
}

/// `Ok(())` when the property holds on the whole range checked.
pub type Check = std::result::Result<(), Witness>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified property.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: serde_json::Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Measured values worth keeping next to the verdict (constants, maxima).
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub observed: serde_json::Map<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, params: serde_json::Value, outcome: Check) -> Self {
        let (status, witness) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        CheckRecord {
            id: id.into(),
            params,
            status,
            witness,
            observed: serde_json::Map::new(),
            wall_ms: None,
        }
    }

    pub fn observe(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.observed.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Outcome of one `verify` run: all records plus the overall verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub status: Status,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        VerifyReport {
            suite: suite.into(),
            seed,
            records: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        if !record.passed() {
            self.status = Status::Fail;
        }
        self.records.push(record);
    }

    /// Runs `f`, timing it only when `timed` (timings make output nondeterministic).
    pub fn run<F>(&mut self, timed: bool, f: F)
    where
        F: FnOnce() -> CheckRecord,
    {
        let t0 = std::time::Instant::now();
        let mut rec = f();
        if timed {
            rec.wall_ms = Some(duration_ms(t0.elapsed()));
        }
        self.push(rec);
    }

    pub fn extend(&mut self, other: VerifyReport) {
        for r in other.records {
            self.push(r);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn duration_ms(d: Duration) -> u64 {
    d.as_millis().min(u64::MAX as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overall_status_tracks_records() {
        let mut r = VerifyReport::new("demo", 7);
        r.push(CheckRecord::new("a", json!({}), Ok(())));
        assert!(r.passed());
        r.push(CheckRecord::new("b", json!({"limit": 4}), Err(Witness::at(3, "boom"))));
        assert!(!r.passed());
        r.push(CheckRecord::new("c", json!({}), Ok(())));
        assert!(!r.passed());
        let text = r.to_json();
        assert!(text.contains("\"status\": \"fail\""));
        assert!(text.contains("boom"));
        assert!(!text.contains("wall_ms"));
    }
}
