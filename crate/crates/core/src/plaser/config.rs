//! Source parameters and their flat `key = value` file format.
//!
//! ```text
//! # source
//! R = 2.0          # radius
//! T = 0.1          # temperature
//! m = 1.0          # boson mass
//! sigma = 1.0      # packet width in momentum space
//! n0 = 3.0         # mean multiplicity without symmetrization
//! t0 = 0.0         # common emission time (optional)
//! d = 1            # 1 or 3 (optional, default 1)
//! seed = 17
//! symmetrization = true   # optional; false forces G = 1
//! ```

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub radius: f64,
    pub temperature: f64,
    pub mass: f64,
    pub sigma: f64,
    pub n0: f64,
    pub t0: f64,
    pub dim: usize,
    pub seed: u64,
    pub symmetrization: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub key: String,
    pub message: String,
}

/// Every problem found in a config, not just the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config:")?;
        for issue in &self.issues {
            write!(f, "\n  {}: {}", issue.key, issue.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

const KEYS: [&str; 9] = ["R", "T", "m", "sigma", "n0", "t0", "d", "seed", "symmetrization"];

impl ModelConfig {
    /// Checks the invariants `R, T, m, σ, n₀ > 0`, `d ∈ {1, 3}`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut issues = Vec::new();
        let mut positive = |key: &str, v: f64| {
            if !(v > 0.0 && v.is_finite()) {
                issues.push(ConfigIssue { key: key.into(), message: format!("must be positive and finite, got {v}") });
            }
        };
        positive("R", self.radius);
        positive("T", self.temperature);
        positive("m", self.mass);
        positive("sigma", self.sigma);
        positive("n0", self.n0);
        if !self.t0.is_finite() {
            issues.push(ConfigIssue { key: "t0".into(), message: "must be finite".into() });
        }
        if self.dim != 1 && self.dim != 3 {
            issues.push(ConfigIssue { key: "d".into(), message: format!("must be 1 or 3, got {}", self.dim) });
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { issues })
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError {
            issues: vec![ConfigIssue { key: "<file>".into(), message: e.message().to_string() }],
        })?;
        let mut issues = Vec::new();
        for key in table.keys() {
            if !KEYS.contains(&key.as_str()) {
                issues.push(ConfigIssue { key: key.clone(), message: "unknown key".into() });
            }
        }
        let mut number = |key: &str, default: Option<f64>| -> f64 {
            match table.get(key) {
                Some(toml::Value::Float(x)) => *x,
                Some(toml::Value::Integer(i)) => *i as f64,
                Some(other) => {
                    issues.push(ConfigIssue { key: key.into(), message: format!("expected a number, got {other}") });
                    f64::NAN
                }
                None => default.unwrap_or_else(|| {
                    issues.push(ConfigIssue { key: key.into(), message: "missing".into() });
                    f64::NAN
                }),
            }
        };
        let radius = number("R", None);
        let temperature = number("T", None);
        let mass = number("m", None);
        let sigma = number("sigma", None);
        let n0 = number("n0", None);
        let t0 = number("t0", Some(0.0));

        let dim = match table.get("d") {
            None => 1,
            Some(toml::Value::Integer(d)) if *d == 1 || *d == 3 => *d as usize,
            Some(other) => {
                issues.push(ConfigIssue { key: "d".into(), message: format!("must be 1 or 3, got {other}") });
                1
            }
        };
        let seed = match table.get("seed") {
            Some(toml::Value::Integer(s)) if *s >= 0 => *s as u64,
            Some(other) => {
                issues.push(ConfigIssue { key: "seed".into(), message: format!("must be a non-negative integer, got {other}") });
                0
            }
            None => {
                issues.push(ConfigIssue { key: "seed".into(), message: "missing (seeds are mandatory)".into() });
                0
            }
        };
        let symmetrization = match table.get("symmetrization") {
            None => true,
            Some(toml::Value::Boolean(b)) => *b,
            Some(other) => {
                issues.push(ConfigIssue { key: "symmetrization".into(), message: format!("expected true or false, got {other}") });
                true
            }
        };

        let config = Self { radius, temperature, mass, sigma, n0, t0, dim, seed, symmetrization };
        if let Err(e) = config.validate() {
            // report each key once; parse problems take precedence
            for issue in e.issues {
                if !issues.iter().any(|i| i.key == issue.key) {
                    issues.push(issue);
                }
            }
        }
        if issues.is_empty() {
            Ok(config)
        } else {
            Err(ConfigError { issues })
        }
    }

    /// Text that [`ModelConfig::parse`] reads back to the same config.
    pub fn to_file_string(&self) -> String {
        format!(
            "R = {:?}\nT = {:?}\nm = {:?}\nsigma = {:?}\nn0 = {:?}\nt0 = {:?}\nd = {}\nseed = {}\nsymmetrization = {}\n",
            self.radius, self.temperature, self.mass, self.sigma, self.n0, self.t0, self.dim, self.seed, self.symmetrization
        )
    }

    /// `R²T`, the combination that controls how strongly packets overlap.
    pub fn r2t(&self) -> f64 {
        self.radius * self.radius * self.temperature
    }
}
