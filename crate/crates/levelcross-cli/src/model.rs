//! Flat key-value model files. Two laws, prefixed `t_` and `y_`:
//!
//! ```text
//! t_family = erlang
//! t_rate = 1.6
//! t_shape = 2
//! y_family = exponential
//! y_rate = 0.6
//! ```
//!
//! Families: exponential (rate), erlang (rate, shape), pareto (a, b).
//! Unknown keys are rejected by name. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use levelcross::{DistributionSpec, RenewalModel};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub struct LoadedModel {
    pub model: RenewalModel,
    /// first 12 hex chars of the sha-256 of the canonical key-value form
    pub hash: String,
}

const KEYS: &[&str] = &[
    "t_family", "t_rate", "t_shape", "t_a", "t_b", "y_family", "y_rate", "y_shape", "y_a", "y_b",
];

pub fn parse_model(text: &str) -> Result<LoadedModel, String> {
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`, got `{line}`", lineno + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&canon) = KEYS.iter().find(|&&k| k == key) else {
            return Err(format!("line {}: unknown key `{key}`", lineno + 1));
        };
        if kv.insert(canon, value).is_some() {
            return Err(format!("line {}: duplicate key `{key}`", lineno + 1));
        }
    }
    let dist_t = build_law(&kv, 't')?;
    let dist_y = build_law(&kv, 'y')?;

    let mut canonical = String::new();
    for (k, v) in &kv {
        let _ = writeln!(canonical, "{k}={v}");
    }
    let digest = Sha256::digest(canonical.as_bytes());
    let hash = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();

    Ok(LoadedModel { model: RenewalModel::ordinary(dist_t, dist_y), hash })
}

pub fn load_model(path: &Path) -> Result<LoadedModel, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read model file {}: {e}", path.display()))?;
    parse_model(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn build_law(kv: &BTreeMap<&str, &str>, prefix: char) -> Result<DistributionSpec, String> {
    let get = |suffix: &str| kv.get(format!("{prefix}_{suffix}").as_str()).copied();
    let num = |suffix: &str| -> Result<f64, String> {
        let key = format!("{prefix}_{suffix}");
        let raw = get(suffix).ok_or_else(|| format!("missing key `{key}`"))?;
        raw.parse().map_err(|_| format!("key `{key}`: `{raw}` is not a number"))
    };
    let family = get("family").ok_or_else(|| format!("missing key `{prefix}_family`"))?;
    let forbid = |suffixes: &[&str]| -> Result<(), String> {
        for s in suffixes {
            if get(s).is_some() {
                return Err(format!("key `{prefix}_{s}` does not apply to family `{family}`"));
            }
        }
        Ok(())
    };
    let spec = match family {
        "exponential" => {
            forbid(&["shape", "a", "b"])?;
            DistributionSpec::exponential(num("rate")?)
        }
        "erlang" => {
            forbid(&["a", "b"])?;
            let shape = num("shape")?;
            if shape.fract() != 0.0 || shape < 1.0 {
                return Err(format!("key `{prefix}_shape`: {shape} is not a positive integer"));
            }
            DistributionSpec::erlang(num("rate")?, shape as u32)
        }
        "pareto" => {
            forbid(&["rate", "shape"])?;
            DistributionSpec::pareto(num("a")?, num("b")?)
        }
        other => {
            return Err(format!(
                "key `{prefix}_family`: unknown family `{other}` (expected exponential, erlang, or pareto)"
            ))
        }
    };
    spec.map_err(|e| e.to_string())
}

/// Built-in caption parameter sets.
pub fn preset_model(name: &str) -> Result<LoadedModel, String> {
    let text = match name {
        // exponential/exponential with unit rates: M = 1, the base oracle model
        "expexp" => "t_family = exponential\nt_rate = 1\ny_family = exponential\ny_rate = 1\n",
        "fig3" => {
            "t_family = exponential\nt_rate = 0.8\ny_family = pareto\ny_a = 10\ny_b = 0.05\n"
        }
        "fig4" => "t_family = erlang\nt_rate = 1.6\nt_shape = 2\ny_family = exponential\ny_rate = 0.6\n",
        other => return Err(format!("unknown preset model `{other}`")),
    };
    parse_model(text)
}
