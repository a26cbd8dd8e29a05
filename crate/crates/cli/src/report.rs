use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// The machine-readable record of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub error_estimates: Map<String, Value>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            error_estimates: Map::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(v));
        self
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.results.insert(key.into(), to_value(v));
        self
    }

    pub fn error(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.error_estimates.insert(key.into(), to_value(v));
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut r = RunReport::new("bound");
        r.input("p", 3.0)
            .result("bound", 0.241573)
            .error("bound", 1e-12);
        r.wall_time_ms = 12.5;
        let text = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
