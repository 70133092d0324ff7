use serde::Serialize;
use serde_json::Value;

/// Exit status of a command: 0 for success or pass, 2 for a valid negative
/// outcome. Errors map to 1 in the binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Negative,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Negative => 2,
        }
    }

    pub fn from_pass(passed: bool) -> Self {
        if passed {
            Status::Success
        } else {
            Status::Negative
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    pub exit_code: i32,
    /// Object keys are sorted, so the serialized form is stable.
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, instance_digest: Option<String>, status: Status, payload: Value) -> Self {
        Self {
            tool: "vi",
            version: env!("CARGO_PKG_VERSION"),
            command,
            instance_digest,
            exit_code: status.code(),
            payload,
            wall_time_s: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
