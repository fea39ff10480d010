//! Plain-text `key = value` configuration for sweeps.
//!
//! ```text
//! # desk run with Euler steps
//! preset = desk
//! scheme = euler
//! sizes = 50, 100, 200
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sweep::SweepConfig;

/// Every accepted key with its default as printed by [`render`].
pub const KEYS: &[(&str, &str)] = &[
    ("preset", "desk"),
    ("seed", "12345"),
    ("sizes", "50,100,200"),
    ("k_max", "1"),
    ("k_steps", "100"),
    ("p_policy", "threshold_and_complete"),
    ("replicates", "5"),
    ("dt", "0.1"),
    ("steps", "5000"),
    ("tail", "1000"),
    ("scheme", "rk4"),
    ("coupling_form", "network"),
    ("freq_mean", "0"),
    ("freq_sigma", "0.1"),
    ("init_phases", "uniform"),
    ("max_attempts", "10000"),
    ("workers", "auto"),
    ("timing", "false"),
];

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::param(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim();
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(Error::param(format!("config line {}: unknown key `{key}`", i + 1)));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

pub fn preset(name: &str) -> Result<SweepConfig> {
    match name {
        "desk" => Ok(SweepConfig::desk()),
        "paper" => Ok(SweepConfig::paper()),
        _ => Err(Error::param(format!("unknown preset `{name}` (desk|paper)"))),
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::param(format!("`{key}`: cannot parse {value:?}")))
}

/// Applies one key. `preset` is handled by the caller.
pub fn apply(cfg: &mut SweepConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "seed" => cfg.seed = num(key, value)?,
        "sizes" => cfg.sizes = value.split(',').map(|s| num::<usize>(key, s.trim())).collect::<Result<Vec<_>>>()?,
        "k_max" => cfg.k_max = num(key, value)?,
        "k_steps" => cfg.k_steps = num(key, value)?,
        "p_policy" => cfg.p_policy = value.parse()?,
        "replicates" => cfg.replicates = num(key, value)?,
        "dt" => cfg.sim.dt = num(key, value)?,
        "steps" => cfg.sim.steps = num(key, value)?,
        "tail" => cfg.sim.tail = num(key, value)?,
        "scheme" => cfg.sim.scheme = value.parse()?,
        "coupling_form" => cfg.sim.coupling.form = value.parse()?,
        "freq_mean" => cfg.ensemble.freq_mean = num(key, value)?,
        "freq_sigma" => cfg.ensemble.freq_sigma = num(key, value)?,
        "init_phases" => cfg.ensemble.phase_init = value.parse()?,
        "max_attempts" => cfg.max_attempts = num(key, value)?,
        "workers" => {
            cfg.workers = if value == "auto" { None } else { Some(num(key, value)?) };
        }
        "timing" => cfg.timing = num(key, value)?,
        "preset" => return Err(Error::param("`preset` must be applied before other keys")),
        _ => return Err(Error::param(format!("unknown key `{key}`"))),
    }
    Ok(())
}

/// Builds a config from file entries then flag overrides (flags win).
/// A `preset` among the flags beats one in the file; either is applied first.
pub fn resolve(file: &[(String, String)], flags: &[(String, String)]) -> Result<SweepConfig> {
    let preset_name = flags.iter().chain(file).find(|(k, _)| k == "preset").map(|(_, v)| v.as_str());
    // flags come first in that chain, so a flag preset wins
    let mut cfg = preset(preset_name.unwrap_or("desk"))?;
    for (k, v) in file.iter().chain(flags).filter(|(k, _)| k != "preset") {
        apply(&mut cfg, k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// The effective configuration as `key = value` lines, one per key.
pub fn render(cfg: &SweepConfig) -> String {
    let sizes: Vec<String> = cfg.sizes.iter().map(usize::to_string).collect();
    let entries = [
        ("seed", cfg.seed.to_string()),
        ("sizes", sizes.join(",")),
        ("k_max", cfg.k_max.to_string()),
        ("k_steps", cfg.k_steps.to_string()),
        ("p_policy", cfg.p_policy.to_config_string()),
        ("replicates", cfg.replicates.to_string()),
        ("dt", cfg.sim.dt.to_string()),
        ("steps", cfg.sim.steps.to_string()),
        ("tail", cfg.sim.tail.to_string()),
        ("scheme", cfg.sim.scheme.as_str().to_string()),
        ("coupling_form", cfg.sim.coupling.form.as_str().to_string()),
        ("freq_mean", cfg.ensemble.freq_mean.to_string()),
        ("freq_sigma", cfg.ensemble.freq_sigma.to_string()),
        ("init_phases", cfg.ensemble.phase_init.as_str().to_string()),
        ("max_attempts", cfg.max_attempts.to_string()),
        ("workers", cfg.workers.map_or("auto".to_string(), |w| w.to_string())),
        ("timing", cfg.timing.to_string()),
    ];
    let mut out = String::from("# effective sweep configuration\n");
    for (k, v) in entries {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
