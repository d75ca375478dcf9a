//! Verified-source fetching from Etherscan-style JSON endpoints, with
//! address validation, request pacing, and bounded retries.

use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::config::ProviderConfig;
use crate::corpus::manifest::{sha256_hex, ContractArtifact, EntryKind};

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("address {0:?} is not a 20-byte hex address")]
    BadAddress(String),
    #[error("API key environment variable {0} is not set")]
    MissingKey(String),
    #[error("contract {address} has no verified source on the provider")]
    Unverified { address: String },
    #[error("provider returned HTTP {status} for {address}")]
    Http { status: u16, address: String },
    #[error("network failure after {attempts} attempt(s): {message}")]
    Network { attempts: u32, message: String },
    #[error("provider response is not usable: {0}")]
    BadResponse(String),
}

pub struct Fetcher {
    cfg: ProviderConfig,
    agent: ureq::Agent,
    last_request: Option<Instant>,
}

impl Fetcher {
    pub fn new(cfg: ProviderConfig) -> Fetcher {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_millis(cfg.timeout_ms))
            .build();
        Fetcher {
            cfg,
            agent,
            last_request: None,
        }
    }

    /// Retrieves verified source for `address`. The address is
    /// validated and the API key resolved before any network activity.
    /// An empty or missing source field is the typed unverified error,
    /// distinct from transport failures.
    pub fn fetch_source(&mut self, address: &str) -> Result<ContractArtifact, FetchError> {
        let address = normalize_address(address)?;
        let key = std::env::var(&self.cfg.api_key_env)
            .ok()
            .filter(|k| !k.is_empty())
            .ok_or_else(|| FetchError::MissingKey(self.cfg.api_key_env.clone()))?;
        let url = self.build_url(&address, &key);
        let body = self.request_with_retries(&url, &address)?;
        let json: serde_json::Value = serde_json::from_str(&body)
            .map_err(|e| FetchError::BadResponse(format!("invalid JSON: {e}")))?;
        let source = lookup(&json, &self.cfg.source_field)
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or(FetchError::Unverified {
                address: address.clone(),
            })?
            .to_string();
        let name = lookup(&json, &self.cfg.name_field)
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .unwrap_or(&address)
            .to_string();
        Ok(ContractArtifact {
            id: name,
            kind: EntryKind::Source,
            digest: sha256_hex(source.as_bytes()),
            content: source,
            origin: address,
        })
    }

    fn build_url(&self, address: &str, key: &str) -> String {
        let mut url = if self.cfg.endpoint.contains("{address}") {
            self.cfg.endpoint.replace("{address}", address)
        } else {
            let sep = if self.cfg.endpoint.contains('?') { '&' } else { '?' };
            format!("{}{}address={}", self.cfg.endpoint, sep, address)
        };
        let sep = if url.contains('?') { '&' } else { '?' };
        url.push(sep);
        url.push_str("apikey=");
        url.push_str(key);
        url
    }

    fn pace(&mut self) {
        if let Some(prev) = self.last_request {
            let min_gap = Duration::from_millis(self.cfg.min_delay_ms);
            let elapsed = prev.elapsed();
            if elapsed < min_gap {
                thread::sleep(min_gap - elapsed);
            }
        }
        self.last_request = Some(Instant::now());
    }

    fn request_with_retries(&mut self, url: &str, address: &str) -> Result<String, FetchError> {
        let mut attempts: u32 = 0;
        loop {
            attempts += 1;
            self.pace();
            match self.agent.get(url).call() {
                Ok(response) => {
                    return response.into_string().map_err(|e| FetchError::Network {
                        attempts,
                        message: format!("reading response body: {e}"),
                    })
                }
                Err(ureq::Error::Status(status, _)) => {
                    return Err(FetchError::Http {
                        status,
                        address: address.to_string(),
                    })
                }
                Err(ureq::Error::Transport(t)) => {
                    if attempts > self.cfg.max_retries {
                        return Err(FetchError::Network {
                            attempts,
                            message: t.to_string(),
                        });
                    }
                }
            }
        }
    }
}

fn normalize_address(address: &str) -> Result<String, FetchError> {
    let trimmed = address.trim();
    let hex_part = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"))
        .unwrap_or(trimmed);
    if hex_part.len() != 40 || !hex_part.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(FetchError::BadAddress(address.to_string()));
    }
    Ok(format!("0x{}", hex_part.to_lowercase()))
}

/// Navigates a dot-separated path through JSON. Integer segments index
/// arrays; everything else is an object key.
fn lookup<'a>(value: &'a serde_json::Value, path: &str) -> Option<&'a str> {
    let mut cur = value;
    for segment in path.split('.') {
        cur = if let Some(array) = cur.as_array() {
            array.get(segment.parse::<usize>().ok()?)?
        } else {
            cur.get(segment)?
        };
    }
    cur.as_str()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn address_normalization() {
        let ok = normalize_address("0xAbCd567890abcdef1234567890abcdef12345678").unwrap();
        assert_eq!(ok, "0xabcd567890abcdef1234567890abcdef12345678");
        let bare = normalize_address("abcd567890abcdef1234567890abcdef12345678").unwrap();
        assert!(bare.starts_with("0x"));
        assert!(normalize_address("0x123").is_err());
        assert!(normalize_address("0xzzcd567890abcdef1234567890abcdef12345678").is_err());
    }

    #[test]
    fn dot_path_navigates_objects_and_arrays() {
        let value = json!({"result": [{"SourceCode": "contract A {}", "ContractName": "A"}]});
        assert_eq!(lookup(&value, "result.0.SourceCode"), Some("contract A {}"));
        assert_eq!(lookup(&value, "result.0.ContractName"), Some("A"));
        assert_eq!(lookup(&value, "result.1.SourceCode"), None);
        assert_eq!(lookup(&value, "result.0.Missing"), None);
        assert_eq!(lookup(&value, "result"), None);
    }

    #[test]
    fn url_construction_covers_placeholder_and_query_styles() {
        let f = Fetcher::new(ProviderConfig::new("http://x/api?module=contract"));
        let url = f.build_url("0xaa", "KEY");
        assert_eq!(url, "http://x/api?module=contract&address=0xaa&apikey=KEY");
        let f = Fetcher::new(ProviderConfig::new("http://x/src/{address}"));
        let url = f.build_url("0xaa", "KEY");
        assert_eq!(url, "http://x/src/0xaa?apikey=KEY");
        let f = Fetcher::new(ProviderConfig::new("http://x/api"));
        let url = f.build_url("0xaa", "KEY");
        assert_eq!(url, "http://x/api?address=0xaa&apikey=KEY");
    }

    #[test]
    fn bad_address_fails_before_key_lookup() {
        let mut cfg = ProviderConfig::new("http://127.0.0.1:1/api");
        cfg.api_key_env = "TOKEN_AUDITOR_TEST_KEY_THAT_IS_UNSET".to_string();
        let mut fetcher = Fetcher::new(cfg);
        assert!(matches!(fetcher.fetch_source("0x12"), Err(FetchError::BadAddress(_))));
    }

    #[test]
    fn missing_key_fails_before_network() {
        let mut cfg = ProviderConfig::new("http://127.0.0.1:1/api");
        cfg.api_key_env = "TOKEN_AUDITOR_TEST_KEY_THAT_IS_UNSET".to_string();
        let mut fetcher = Fetcher::new(cfg);
        let err = fetcher
            .fetch_source("0x1234567890abcdef1234567890abcdef12345678")
            .unwrap_err();
        assert!(matches!(err, FetchError::MissingKey(_)));
        assert!(err.to_string().contains("TOKEN_AUDITOR_TEST_KEY_THAT_IS_UNSET"));
    }
}
