use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: u64,
}

impl Item {
    pub fn new(id: impl Into<String>, status: Status) -> Item {
        Item {
            id: id.into(),
            status,
            result: None,
            trials: None,
            failures: None,
            witness: None,
            error: None,
            notes: Vec::new(),
            millis: 0,
        }
    }

    pub fn pass(id: impl Into<String>, result: Value) -> Item {
        Item { result: Some(result), ..Item::new(id, Status::Pass) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub items: Vec<Item>,
    pub millis: u64,
}

impl Report {
    pub fn new(command: Vec<String>, items: Vec<Item>, millis: u64) -> Report {
        let status = if items.iter().all(|i| i.status == Status::Pass) {
            Status::Pass
        } else if items.iter().any(|i| i.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Error
        };
        Report { command, status, error: None, items, millis }
    }

    pub fn input_error(command: Vec<String>, msg: String) -> Report {
        Report { command, status: Status::Error, error: Some(msg), items: Vec::new(), millis: 0 }
    }

    pub fn exit_code(&self) -> i32 {
        match (self.status, &self.error) {
            (_, Some(_)) => 2,
            (Status::Pass, None) => 0,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per item and a closing tally.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
            return out;
        }
        for i in &self.items {
            let mut line = format!("{:<5} {}", i.status.name(), i.id);
            if let (Some(t), Some(f)) = (i.trials, i.failures) {
                line.push_str(&format!("  ({f}/{t} failing, {} ms)", i.millis));
            }
            if let Some(Value::Object(r)) = &i.result {
                if let Some(Value::String(p)) = r.get("pretty") {
                    line.push_str(&format!("  = {p}"));
                }
            }
            out.push_str(&line);
            out.push('\n');
            if let Some(e) = &i.error {
                out.push_str(&format!("      {e}\n"));
            }
            if let Some(w) = &i.witness {
                if let Some(Value::String(r)) = w.get("residual") {
                    out.push_str(&format!("      residual: {r}\n"));
                }
                if let Some(Value::String(r)) = w.get("replay_command") {
                    out.push_str(&format!("      replay: {r}\n"));
                }
            }
        }
        let pass = self.items.iter().filter(|i| i.status == Status::Pass).count();
        out.push_str(&format!("{pass}/{} passed in {} ms\n", self.items.len(), self.millis));
        out
    }
}
