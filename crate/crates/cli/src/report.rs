//! Results, exit codes and the two output formats.

use std::fmt;
use std::io::Write;
use std::process::ExitCode;

use omegalarge::{Error, Verdict};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    True,
    False,
    Inconclusive,
    Usage,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::True => 0,
            Status::False => 1,
            Status::Inconclusive => 2,
            Status::Usage => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::True => "true",
            Status::False => "false",
            Status::Inconclusive => "inconclusive",
            Status::Usage => "error",
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

pub struct Report {
    pub status: Status,
    pub fields: Map<String, Value>,
    pub text: String,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report {
            status,
            fields: Map::new(),
            text: String::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn line(mut self, text: impl fmt::Display) -> Self {
        self.text.push_str(&text.to_string());
        self.text.push('\n');
        self
    }

    pub fn verdict(v: &Verdict) -> Self {
        match v {
            Verdict::True => Report::new(Status::True),
            Verdict::False => Report::new(Status::False),
            Verdict::Inconclusive(why) => {
                Report::new(Status::Inconclusive).field("reason", why.as_str())
            }
        }
    }

    pub fn emit(&self, as_json: bool) -> ExitCode {
        if as_json {
            let mut obj = Map::new();
            obj.insert("status".into(), json!(self.status.name()));
            obj.insert("exit".into(), json!(self.status.code()));
            obj.extend(self.fields.clone());
            out(&format!(
                "{}\n",
                serde_json::to_string_pretty(&Value::Object(obj)).expect("plain json")
            ));
        } else {
            out(&self.text);
        }
        ExitCode::from(self.status.code())
    }
}

/// A closed pipe downstream is not an error of ours.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// A failed run: either bad input or a search that hit a limit.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    /// Limits mean "could not decide"; anything else means the input was wrong.
    pub fn status(&self) -> Status {
        match self {
            Failure::Core(
                Error::Budget(_)
                | Error::TooLarge(_)
                | Error::Overflow { .. }
                | Error::Ceiling(_)
                | Error::Counting(_),
            ) => Status::Inconclusive,
            _ => Status::Usage,
        }
    }

    pub fn emit(&self, as_json: bool) -> ExitCode {
        let status = self.status();
        if as_json {
            let obj =
                json!({"status": status.name(), "exit": status.code(), "reason": self.to_string()});
            out(&format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("plain json")
            ));
        } else {
            eprintln!(
                "{}: {self}",
                if status == Status::Usage {
                    "error"
                } else {
                    "inconclusive"
                }
            );
        }
        ExitCode::from(status.code())
    }
}

pub type Outcome = std::result::Result<Report, Failure>;
