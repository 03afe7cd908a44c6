use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use reqwest::blocking::Client;
use reqwest::header::CONTENT_TYPE;

use super::{CanonicalUrl, CrawlConfig, FetchResponse, FetchStatus, Fetcher, RobotsRules};

/// Spaces requests to the same host at least `1 / rate` seconds apart,
/// measured between the instants the requests are actually released.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    hosts: Mutex<HashMap<String, Arc<Mutex<Option<Instant>>>>>,
}

impl RateLimiter {
    pub fn new(requests_per_second: f64) -> Self {
        assert!(requests_per_second > 0.0);
        // Rounded up so that `rate` intervals never add up to less than 1 s.
        let nanos = (1e9 / requests_per_second).ceil() as u64;
        Self {
            interval: Duration::from_nanos(nanos),
            hosts: Mutex::new(HashMap::new()),
        }
    }

    /// Blocks until the caller may issue a request to `host` and returns the
    /// release instant. Callers for the same host queue behind each other.
    pub fn acquire(&self, host: &str) -> Instant {
        let last = Arc::clone(self.hosts.lock().unwrap().entry(host.to_string()).or_default());
        let mut last = last.lock().unwrap();
        if let Some(prev) = *last {
            let ready = prev + self.interval;
            let now = Instant::now();
            if ready > now {
                thread::sleep(ready - now);
            }
        }
        let released = Instant::now();
        *last = Some(released);
        released
    }
}

/// Timestamps of every request issued, per host.
#[derive(Debug, Default)]
pub struct RequestLog {
    entries: Mutex<Vec<(String, Instant)>>,
}

impl RequestLog {
    fn record(&self, host: &str, at: Instant) {
        self.entries.lock().unwrap().push((host.to_string(), at));
    }

    pub fn snapshot(&self) -> Vec<(String, Instant)> {
        self.entries.lock().unwrap().clone()
    }

    /// Largest number of requests to a single host inside any half-open
    /// one-second window.
    pub fn max_per_second(&self) -> usize {
        let mut by_host: HashMap<String, Vec<Instant>> = HashMap::new();
        for (host, at) in self.snapshot() {
            by_host.entry(host).or_default().push(at);
        }
        let window = Duration::from_secs(1);
        by_host
            .into_values()
            .map(|mut times| {
                times.sort();
                let mut best = 0;
                let mut lo = 0;
                for hi in 0..times.len() {
                    while times[hi] - times[lo] >= window {
                        lo += 1;
                    }
                    best = best.max(hi - lo + 1);
                }
                best
            })
            .max()
            .unwrap_or(0)
    }
}

/// Live fetcher: blocking HTTP with robots.txt and per-host rate limiting.
/// Proxy settings come from the standard `HTTP_PROXY`/`HTTPS_PROXY`
/// environment variables.
pub struct HttpFetcher {
    client: Client,
    user_agent: String,
    honor_robots: bool,
    limiter: RateLimiter,
    robots: Mutex<HashMap<String, RobotsRules>>,
    log: RequestLog,
}

impl HttpFetcher {
    pub fn new(config: &CrawlConfig) -> Result<Self, reqwest::Error> {
        let client = Client::builder()
            .user_agent(config.user_agent.clone())
            .timeout(Duration::from_secs(30))
            .build()?;
        Ok(Self {
            client,
            user_agent: config.user_agent.clone(),
            honor_robots: config.honor_robots,
            limiter: RateLimiter::new(config.rate_limit),
            robots: Mutex::new(HashMap::new()),
            log: RequestLog::default(),
        })
    }

    pub fn request_log(&self) -> &RequestLog {
        &self.log
    }

    fn origin(url: &CanonicalUrl) -> String {
        url.as_url().origin().ascii_serialization()
    }

    fn get(&self, url: &str, host: &str) -> reqwest::Result<reqwest::blocking::Response> {
        let released = self.limiter.acquire(host);
        self.log.record(host, released);
        self.client.get(url).send()
    }

    fn robots_for(&self, url: &CanonicalUrl) -> RobotsRules {
        let origin = Self::origin(url);
        if let Some(rules) = self.robots.lock().unwrap().get(&origin) {
            return rules.clone();
        }
        // Two workers may race to fetch the same robots.txt; both results are equal.
        let rules = match self.get(&format!("{origin}/robots.txt"), url.host()) {
            Ok(resp) if resp.status().is_success() => resp
                .text()
                .map(|t| RobotsRules::parse(&t, &self.user_agent))
                .unwrap_or_default(),
            _ => RobotsRules::allow_all(),
        };
        self.robots.lock().unwrap().entry(origin).or_insert(rules).clone()
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &CanonicalUrl) -> FetchResponse {
        if self.honor_robots {
            let target = url.as_url();
            let path = match target.query() {
                Some(q) => format!("{}?{q}", target.path()),
                None => target.path().to_string(),
            };
            if !self.robots_for(url).is_allowed(&path) {
                return FetchResponse::failed(FetchStatus::RobotsDisallowed);
            }
        }
        match self.get(url.as_str(), url.host()) {
            Ok(resp) => {
                let status = FetchStatus::Http(resp.status().as_u16());
                let content_type = resp
                    .headers()
                    .get(CONTENT_TYPE)
                    .and_then(|v| v.to_str().ok())
                    .map(str::to_string);
                match resp.bytes() {
                    Ok(body) => FetchResponse {
                        status,
                        content_type,
                        body: body.to_vec(),
                    },
                    Err(e) => FetchResponse::failed(FetchStatus::Failed(e.to_string())),
                }
            }
            Err(e) => FetchResponse::failed(FetchStatus::Failed(e.to_string())),
        }
    }
}
