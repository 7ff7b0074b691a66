//! `key = value` run configuration. Later sources override earlier ones:
//! defaults, then the config file, then command-line flags.

use std::path::PathBuf;

use hotspots_core::proofs::RunOptions;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("{key}: {msg}")]
    Value { key: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub pi_bits: u32,
    pub max_depth: u32,
    pub cap_bits: u32,
    /// Extra bisection levels under each listed rectangle.
    pub fallback: u32,
    /// Coarse and fine refinement levels; the fine level is one above.
    pub fem_levels: (u32, u32),
    /// Grid points per axis for scans.
    pub grid: u32,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pi_bits: 96,
            max_depth: 12,
            cap_bits: 192,
            fallback: 4,
            fem_levels: (5, 6),
            grid: 8,
            out_dir: PathBuf::from("out"),
        }
    }
}

pub const KEYS: [&str; 7] = ["pi_bits", "max_depth", "cap_bits", "fallback", "fem_levels", "grid", "out_dir"];

fn positive(key: &str, v: &str) -> Result<u32, ConfigError> {
    let err = |msg: &str| ConfigError::Value { key: key.into(), msg: msg.into() };
    let n: u32 = v.trim().parse().map_err(|_| err("expected a positive integer"))?;
    if n == 0 {
        return Err(err("must be positive"));
    }
    Ok(n)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key.trim() {
            "pi_bits" => self.pi_bits = positive(key, value)?,
            "max_depth" => self.max_depth = positive(key, value)?,
            "cap_bits" => self.cap_bits = positive(key, value)?,
            "fallback" => self.fallback = positive(key, value)?,
            "grid" => self.grid = positive(key, value)?,
            "fem_levels" => {
                let parts: Vec<&str> = value.split(',').collect();
                let err = |msg: &str| ConfigError::Value { key: key.into(), msg: msg.into() };
                if parts.len() != 2 {
                    return Err(err("expected two levels, e.g. 5,6"));
                }
                let (c, f) = (positive(key, parts[0])?, positive(key, parts[1])?);
                if f != c + 1 {
                    return Err(err("levels must be consecutive"));
                }
                self.fem_levels = (c, f);
            }
            "out_dir" => {
                if value.is_empty() {
                    return Err(ConfigError::Value { key: key.into(), msg: "empty path".into() });
                }
                self.out_dir = PathBuf::from(value);
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Applies a config file body; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: n + 1 })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Applies `key=value` overrides.
    pub fn apply_pairs<S: AsRef<str>>(&mut self, pairs: &[S]) -> Result<(), ConfigError> {
        for p in pairs {
            let (k, v) = p.as_ref().split_once('=').ok_or(ConfigError::Syntax { line: 0 })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "pi_bits = {}\nmax_depth = {}\ncap_bits = {}\nfallback = {}\nfem_levels = {},{}\ngrid = {}\nout_dir = {}\n",
            self.pi_bits,
            self.max_depth,
            self.cap_bits,
            self.fallback,
            self.fem_levels.0,
            self.fem_levels.1,
            self.grid,
            self.out_dir.display()
        )
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            pi_bits: self.pi_bits,
            max_depth: self.max_depth,
            cap_bits: self.cap_bits,
            fallback: self.fallback,
            ..RunOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let mut c = RunConfig::default();
        c.apply_text("# run\npi_bits = 128\nmax_depth=10\n").unwrap();
        c.apply_pairs(&["max_depth=8"]).unwrap();
        assert_eq!((c.pi_bits, c.max_depth, c.cap_bits), (128, 8, 192));
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert_eq!(c.set("colour", "red"), Err(ConfigError::UnknownKey("colour".into())));
        assert!(c.set("pi_bits", "0").is_err());
        assert!(c.set("pi_bits", "-3").is_err());
        assert!(c.set("fem_levels", "5,7").is_err());
        assert!(c.apply_text("pi_bits 96").is_err());
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.set("grid", "12").unwrap();
        let mut d = RunConfig::default();
        d.apply_text(&c.to_text()).unwrap();
        assert_eq!(c, d);
    }
}
