//! Tool configuration: risk weights, provider settings, and simulator
//! parameters, with a flat key=value file format for overrides.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for key {key:?}: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("malformed line {line}: expected key=value")]
    MalformedLine { line: usize },
}

/// Additive risk weights, one per pattern plus the per-function bonus
/// for unguarded dangerous capabilities. All in 0..=100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Weights {
    pub self_destruction: u32,
    pub deprecation: u32,
    pub change_of_address: u32,
    pub mint: u32,
    pub burn: u32,
    pub unguarded: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            self_destruction: 35,
            deprecation: 30,
            change_of_address: 5,
            mint: 20,
            burn: 10,
            unguarded: 10,
        }
    }
}

impl Weights {
    /// Parses a flat key=value override file. Blank lines and lines
    /// starting with '#' are ignored. Unknown keys and out-of-range
    /// values are rejected by name.
    pub fn parse_overrides(text: &str) -> Result<Weights, ConfigError> {
        let mut weights = Weights::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::MalformedLine { line: idx + 1 });
            };
            let key = key.trim();
            let value = value.trim();
            let parsed: u32 = value.parse().map_err(|_| ConfigError::InvalidValue {
                key: key.to_string(),
                value: value.to_string(),
                reason: "not a non-negative integer".to_string(),
            })?;
            if parsed > 100 {
                return Err(ConfigError::InvalidValue {
                    key: key.to_string(),
                    value: value.to_string(),
                    reason: "weights range over 0..=100".to_string(),
                });
            }
            match key {
                "self_destruction" => weights.self_destruction = parsed,
                "deprecation" => weights.deprecation = parsed,
                "change_of_address" => weights.change_of_address = parsed,
                "mint" => weights.mint = parsed,
                "burn" => weights.burn = parsed,
                "unguarded" => weights.unguarded = parsed,
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
        }
        Ok(weights)
    }
}

/// Verified-source provider settings. The endpoint may carry an
/// `{address}` placeholder; otherwise the address is appended as a
/// query parameter. Field paths are dot-separated, with integer
/// segments indexing into arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProviderConfig {
    pub endpoint: String,
    pub source_field: String,
    pub name_field: String,
    pub api_key_env: String,
    pub min_delay_ms: u64,
    pub max_retries: u32,
    pub timeout_ms: u64,
}

impl ProviderConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        ProviderConfig {
            endpoint: endpoint.into(),
            source_field: "result.0.SourceCode".to_string(),
            name_field: "result.0.ContractName".to_string(),
            api_key_env: "TOKEN_AUDITOR_API_KEY".to_string(),
            min_delay_ms: 200,
            max_retries: 2,
            timeout_ms: 10_000,
        }
    }
}

/// Governance timing and the mint cap policy for the simulator. The
/// timing values must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimParams {
    pub delay: u64,
    pub window: u64,
    pub cap: CapPolicy,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            delay: 604_800,
            window: 2_592_000,
            cap: CapPolicy::PercentOfSupply(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapPolicy {
    /// Fixed amount per window.
    Absolute(u128),
    /// Percentage of total supply, floored, recomputed when a window
    /// opens.
    PercentOfSupply(u32),
}

impl CapPolicy {
    pub fn amount_for(&self, total_supply: u128) -> u128 {
        match self {
            CapPolicy::Absolute(n) => *n,
            CapPolicy::PercentOfSupply(pct) => total_supply * u128::from(*pct) / 100,
        }
    }

    /// Parses "5000" as an absolute cap or "1%" as a supply percentage.
    pub fn parse(text: &str) -> Result<CapPolicy, ConfigError> {
        let invalid = |reason: &str| ConfigError::InvalidValue {
            key: "cap".to_string(),
            value: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(pct) = text.strip_suffix('%') {
            let pct: u32 = pct.trim().parse().map_err(|_| invalid("not an integer percent"))?;
            if pct == 0 || pct > 100 {
                return Err(invalid("percent must be in 1..=100"));
            }
            Ok(CapPolicy::PercentOfSupply(pct))
        } else {
            let n: u128 = text.trim().parse().map_err(|_| invalid("not an integer amount"))?;
            if n == 0 {
                return Err(invalid("cap must be positive"));
            }
            Ok(CapPolicy::Absolute(n))
        }
    }
}
