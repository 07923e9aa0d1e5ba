//! `key = value` run configuration.

use std::time::Duration;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub max_hops: Option<usize>,
    pub time_limit: Option<Duration>,
    pub pair_cap: Option<usize>,
    pub cycle_cap: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{body}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let count = || -> Result<usize> {
            match value.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(err(format!("`{key}` needs a positive integer, got `{value}`"))),
            }
        };
        match key {
            "max_hops" => {
                let v = count()?;
                if v < 3 {
                    return Err(err("max_hops must be at least 3".into()));
                }
                cfg.max_hops = Some(v);
            }
            "time_limit_s" => {
                let secs: f64 = value
                    .parse()
                    .ok()
                    .filter(|s: &f64| s.is_finite() && *s > 0.0)
                    .ok_or_else(|| err(format!("time_limit_s needs a positive number, got `{value}`")))?;
                cfg.time_limit = Some(Duration::from_secs_f64(secs));
            }
            "pair_cap" => cfg.pair_cap = Some(count()?),
            "cycle_cap" => cfg.cycle_cap = Some(count()?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}
