//! One module per subcommand; each turns a raw configuration into a [`Report`].

use serde_json::Value;

use crate::config::Resolved;
use crate::Report;

pub mod anorm;
pub mod bernstein;
pub mod criteria;
pub mod gallery;
pub mod hardy;
pub mod norms;
pub mod region;

pub(crate) fn report(command: &'static str, cfg: &Resolved, result: Value, csv: String, exit: i32) -> Report {
    Report {
        command,
        config: cfg.to_map(),
        result,
        csv,
        exit,
    }
}

/// JSON value of anything serializable; serialization of core types cannot fail.
pub(crate) fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}
