//! HTTP client for the paraphrase service.
//!
//! `POST /v1/paraphrase {"text", "num_return"}` → `{"paraphrases": [...]}`,
//! `GET /v1/health` → `{"status": "ok", "model": ...}`.

use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{ParaphraseProvider, ParaphraseRequest, ProviderError};

/// Environment variable holding the service base URL.
pub const PARAPHRASE_URL_ENV: &str = "BOTAUG_PARAPHRASE_URL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
    pub timeout: Duration,
    pub max_in_flight: usize,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 2,
            base_delay: Duration::from_millis(250),
            timeout: Duration::from_secs(10),
            max_in_flight: 4,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `attempt` (1-based): base, 2·base, 4·base, ...
    pub fn backoff(&self, attempt: u32) -> Duration {
        self.base_delay
            .saturating_mul(1u32 << (attempt.saturating_sub(1)).min(16))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthStatus {
    pub status: String,
    pub model: String,
}

#[derive(Deserialize)]
struct ParaphraseResponse {
    paraphrases: Vec<String>,
}

#[derive(Deserialize)]
struct ErrorResponse {
    error: String,
}

struct Gate {
    free: Mutex<usize>,
    cond: Condvar,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn new(n: usize) -> Self {
        Gate {
            free: Mutex::new(n.max(1)),
            cond: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cond.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cond.notify_one();
    }
}

enum Attempt {
    Done(Result<Vec<String>, ProviderError>),
    Retry(String),
}

pub struct RemoteProvider {
    base_url: String,
    id: String,
    agent: ureq::Agent,
    policy: RetryPolicy,
    gate: Gate,
}

impl RemoteProvider {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self::with_policy(base_url, RetryPolicy::default())
    }

    pub fn with_policy(base_url: impl Into<String>, policy: RetryPolicy) -> Self {
        let base_url = base_url.into().trim_end_matches('/').to_string();
        let agent = ureq::AgentBuilder::new().timeout(policy.timeout).build();
        RemoteProvider {
            id: format!("remote:{base_url}"),
            base_url,
            agent,
            gate: Gate::new(policy.max_in_flight),
            policy,
        }
    }

    /// Reads the base URL from `BOTAUG_PARAPHRASE_URL`.
    pub fn from_env() -> Option<Self> {
        std::env::var(PARAPHRASE_URL_ENV)
            .ok()
            .filter(|u| !u.trim().is_empty())
            .map(Self::new)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn health(&self) -> Result<HealthStatus, ProviderError> {
        let _permit = self.gate.acquire();
        let url = format!("{}/v1/health", self.base_url);
        match self.agent.get(&url).call() {
            Ok(resp) => resp
                .into_json::<HealthStatus>()
                .map_err(|e| ProviderError::Protocol(format!("health payload: {e}"))),
            Err(ureq::Error::Status(code, _)) => Err(ProviderError::Protocol(format!("health returned HTTP {code}"))),
            Err(e) => Err(ProviderError::Unavailable {
                attempts: 1,
                last_error: e.to_string(),
            }),
        }
    }

    fn attempt(&self, request: &ParaphraseRequest) -> Attempt {
        let url = format!("{}/v1/paraphrase", self.base_url);
        let body = serde_json::json!({ "text": request.text, "num_return": request.num_return });
        match self.agent.post(&url).send_json(body) {
            Ok(resp) => Attempt::Done(
                resp.into_json::<ParaphraseResponse>()
                    .map(|r| r.paraphrases)
                    .map_err(|e| ProviderError::Protocol(format!("paraphrase payload: {e}"))),
            ),
            Err(ureq::Error::Status(400, resp)) => {
                let msg = resp
                    .into_json::<ErrorResponse>()
                    .map(|e| e.error)
                    .unwrap_or_else(|_| "bad request".into());
                Attempt::Done(Err(ProviderError::Rejected(msg)))
            }
            Err(ureq::Error::Status(code, _)) if code == 429 || code >= 500 => Attempt::Retry(format!("HTTP {code}")),
            Err(ureq::Error::Status(code, _)) => {
                Attempt::Done(Err(ProviderError::Protocol(format!("unexpected HTTP {code}"))))
            }
            Err(e) => Attempt::Retry(e.to_string()),
        }
    }
}

impl ParaphraseProvider for RemoteProvider {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, request: &ParaphraseRequest) -> Result<Vec<String>, ProviderError> {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let outcome = {
                let _permit = self.gate.acquire();
                self.attempt(request)
            };
            match outcome {
                Attempt::Done(result) => return result,
                Attempt::Retry(last_error) => {
                    if attempts > self.policy.max_retries {
                        return Err(ProviderError::Unavailable { attempts, last_error });
                    }
                    log::debug!("paraphrase attempt {attempts} failed: {last_error}");
                    thread::sleep(self.policy.backoff(attempts));
                }
            }
        }
    }
}
