//! Machine-readable pass/fail records emitted by the command-line tool.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// Field order is the serialization order; maps are sorted by key, so equal
/// certificates serialize to identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, Value>,
    pub outcome: Outcome,
    /// Statements whose check failed.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    pub numbers: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Certificate {
    pub fn new(command: impl Into<String>) -> Self {
        Certificate {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: BTreeMap::new(),
            outcome: Outcome::Pass,
            failed: Vec::new(),
            numbers: BTreeMap::new(),
            witnesses: None,
            wall_time_s: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn number(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.numbers.insert(key.to_string(), to_value(value));
        self
    }

    /// Records `statement` as failed unless `ok`.
    pub fn check(&mut self, ok: bool, statement: &str) -> &mut Self {
        if !ok {
            self.outcome = Outcome::Fail;
            self.failed.push(statement.to_string());
        }
        self
    }

    /// Adds a named witness; the witnesses object is created on first use.
    pub fn witness(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let w = self
            .witnesses
            .get_or_insert_with(|| Value::Object(Default::default()));
        if let Value::Object(map) = w {
            map.insert(key.to_string(), to_value(value));
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_key_order() {
        let mut a = Certificate::new("x").param("b", 1).param("a", 2);
        a.number("z", 1).number("y", 2);
        let mut b = Certificate::new("x").param("a", 2).param("b", 1);
        b.number("y", 2).number("z", 1);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.to_json().starts_with(r#"{"command":"x","version":"#));
    }

    #[test]
    fn failing_check() {
        let mut c = Certificate::new("x");
        c.check(true, "fine").check(false, "broken");
        assert!(!c.passed());
        assert_eq!(c.failed, ["broken"]);
        c.witness("w", [1, 2]);
        assert!(c.to_json().contains(r#""witnesses":{"w":[1,2]}"#));
        assert!(c.to_json().contains(r#""outcome":"fail""#));
    }
}
