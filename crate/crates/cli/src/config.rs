use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

pub const PRECISION_ENV: &str = "GROSSEN_PRECISION_BITS";
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// Everything a run depends on. Integers are written as decimal strings.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub delta: Option<i64>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub ell: Option<u32>,
    /// The modulus as given on the command line.
    pub conductor: Option<String>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub bound: Option<usize>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub conductor_norm_bound: Option<i64>,
    pub output: Option<PathBuf>,
    #[serde_as(as = "DisplayFromStr")]
    pub precision_bits: u32,
}

impl RunConfig {
    pub fn new(command: impl Into<String>, output: Option<PathBuf>, precision_bits: u32) -> Self {
        RunConfig {
            command: command.into(),
            delta: None,
            ell: None,
            conductor: None,
            bound: None,
            conductor_norm_bound: None,
            output,
            precision_bits,
        }
    }
}

/// Precision from the environment, or the default when unset.
pub fn precision_from_env() -> Result<u32, String> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(b) if b >= 53 => Ok(b),
            _ => Err(format!("{PRECISION_ENV}={s:?} is not an integer >= 53")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::new("qexp", Some("out.json".into()), 256);
        c.delta = Some(-4);
        c.ell = Some(1);
        c.conductor = Some("gen:2,2".into());
        c.bound = Some(10);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"delta\":\"-4\""));
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
