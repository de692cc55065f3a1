use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violations,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violations => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

/// Outcome of one command before timing is attached.
pub struct Outcome {
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub status: Status,
}

impl Outcome {
    pub fn new(inputs: Map<String, Value>, results: Value, ok: bool) -> Self {
        Outcome {
            inputs,
            results,
            status: if ok { Status::Ok } else { Status::Violations },
        }
    }
}

impl RunReport {
    /// Pretty JSON with every object's keys sorted.
    pub fn to_json(&self) -> String {
        // serde_json's default map is ordered by key
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "command: {}\nstatus: {}\n",
            self.command,
            status_name(self.status)
        );
        if let Some(ms) = self.duration_ms {
            out.push_str(&format!("duration_ms: {ms}\n"));
        }
        render_text(&self.results, 0, &mut out);
        out
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Violations => "violations",
        Status::Error => "error",
    }
}

fn render_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", compact(v))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", compact(v))),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}
