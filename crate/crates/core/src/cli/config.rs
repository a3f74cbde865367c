use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;

use super::CliError;

/// Resolved experiment parameters as `key = value` pairs. Values from a
/// config file are overridden by command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentConfig {
    entries: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Parse `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(ExperimentConfig { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn angle(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.get(key).map_or(Ok(default), parse_angle)
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize, CliError> {
        self.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| CliError::Config(format!("{key}: expected a non-negative integer, got {v:?}")))
        })
    }

    pub fn usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let Some(v) = self.get(key) else {
            return Ok(default.to_vec());
        };
        let list = v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("{key}: bad integer {s:?}")))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        if list.is_empty() {
            return Err(CliError::Config(format!("{key}: empty list")));
        }
        Ok(list)
    }

    /// Phases from `phi` (comma list) if given, otherwise `phi-grid` uniform
    /// points on `[0, 2pi)`.
    pub fn phis(&self, default_grid: usize) -> Result<Vec<f64>, CliError> {
        if let Some(v) = self.get("phi") {
            let list = v.split(',').map(parse_angle).collect::<Result<Vec<_>, _>>()?;
            return Ok(list);
        }
        let n = self.usize("phi-grid", default_grid)?;
        if n == 0 {
            return Err(CliError::Config("phi-grid must be positive".into()));
        }
        Ok((0..n).map(|j| TAU * j as f64 / n as f64).collect())
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Radians, or multiples of pi: `0.25pi`, `-pi`, `3pi/4`, `pi/2`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("cannot parse angle {s:?}"));
    let t = s.trim().to_ascii_lowercase();
    let value = if let Some(pos) = t.find("pi") {
        let (head, tail) = (&t[..pos], &t[pos + 2..]);
        let factor = match head.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        let divisor = match tail.trim() {
            "" => 1.0,
            d => d
                .strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse::<f64>()
                .map_err(|_| bad())?,
        };
        factor * PI / divisor
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let cases = [
            ("0.25pi", 0.25 * PI),
            ("pi", PI),
            ("-pi", -PI),
            ("3pi/4", 0.75 * PI),
            ("pi/2", PI / 2.0),
            ("1.5", 1.5),
            (" 2*pi ", TAU),
        ];
        for (s, v) in cases {
            assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        for s in ["", "pix", "abc", "inf", "pi/"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }

    #[test]
    fn config_round_trip() {
        let text = "# sweep\ntheta = 0.25pi\nsteps=150\n\nphi_grid = 256\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.get("phi-grid"), Some("256"));
        let again = ExperimentConfig::parse(&cfg.to_string()).unwrap();
        assert_eq!(cfg, again);
        assert!(ExperimentConfig::parse("theta 0.3").is_err());
    }

    #[test]
    fn phi_selection() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.phis(4).unwrap().len(), 4);
        cfg.set("phi-grid", "8");
        let g = cfg.phis(4).unwrap();
        assert_eq!(g.len(), 8);
        assert!((g[4] - PI).abs() < 1e-15);
        cfg.set("phi", "pi, 0.5pi");
        assert_eq!(cfg.phis(4).unwrap(), vec![PI, 0.5 * PI]);
        assert_eq!(cfg.usize_list("steps", &[150]).unwrap(), vec![150]);
        cfg.set("steps", "150,300");
        assert_eq!(cfg.usize_list("steps", &[1]).unwrap(), vec![150, 300]);
    }
}
