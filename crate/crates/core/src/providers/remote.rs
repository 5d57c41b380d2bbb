//! HTTP-backed providers speaking a chat-completion style JSON protocol.
//!
//! Chat requests carry a system message and one user message whose content is a list of
//! parts: the rendered prompt text and zero or more `image_url` parts holding base64 data
//! URLs. Responses are read from `choices[0].message.content`. Embedding requests send
//! `{"model", "input": [part, ...]}` and read `data[i].embedding`; multiple vectors (one per
//! panorama tile) are averaged.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use base64::Engine as _;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::cache::{canonical_request, RequestDigest, ResponseCache};
use super::prompts::{render, EXTRACT_PROMPT, GROUND_PROMPT, RATE_PROMPT};
use super::{
    Embedder, Grounder, GroundingJudgment, LandmarkExtractor, LandmarkSequence, PathRater,
    PathRating,
};
use crate::error::{Error, Result};
use crate::topomap::GraphNode;

const SYSTEM_PROMPT: &str = "You are a careful assistant for an indoor navigation robot.";
const MAX_BACKOFF: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub endpoint: String,
    pub model_name: String,
    /// Environment variable holding the bearer token. Unset variable means no auth header.
    #[serde(default = "default_api_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// Base delay of the exponential backoff.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

fn default_api_key_env() -> String {
    "LANDNAV_API_KEY".into()
}
fn default_timeout() -> f64 {
    60.0
}
fn default_retries() -> u32 {
    3
}
fn default_backoff() -> u64 {
    500
}

impl ProviderConfig {
    pub fn new(endpoint: impl Into<String>, model_name: impl Into<String>) -> Self {
        ProviderConfig {
            endpoint: endpoint.into(),
            model_name: model_name.into(),
            api_key_env: default_api_key_env(),
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            cache_dir: None,
            backoff_ms: default_backoff(),
        }
    }

    /// Instruction parsing with an instruction-tuned Llama 3.1 8B behind an OpenAI-compatible server.
    pub fn default_extraction() -> Self {
        ProviderConfig::new(
            "http://localhost:8000/v1/chat/completions",
            "meta-llama/Llama-3.1-8B-Instruct",
        )
    }

    /// Panorama/text embeddings from a SigLIP server.
    pub fn default_embedding() -> Self {
        ProviderConfig::new(
            "http://localhost:8001/v1/embeddings",
            "google/siglip-so400m-patch14-384",
        )
    }

    pub fn default_grounding() -> Self {
        let mut c = ProviderConfig::new("https://api.openai.com/v1/chat/completions", "gpt-4o");
        c.api_key_env = "OPENAI_API_KEY".into();
        c
    }

    pub fn default_rating() -> Self {
        ProviderConfig::default_grounding()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(Error::Config(format!(
                "timeout must be positive, got {}",
                self.timeout_secs
            )));
        }
        if self.endpoint.trim().is_empty() {
            return Err(Error::Config("empty endpoint".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HttpRequest {
    pub url: String,
    pub bearer: Option<String>,
    pub body: Value,
    pub timeout: Duration,
}

#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
    /// Server wait hint (`Retry-After`), honored before the next attempt.
    pub retry_after: Option<Duration>,
}

/// Sends one POST. Connection-level failures are `Err(Error::Transport)`.
pub trait Transport: Send + Sync {
    fn post(&self, request: &HttpRequest) -> Result<HttpResponse>;
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .build()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn post(&self, request: &HttpRequest) -> Result<HttpResponse> {
        let mut builder = self
            .client
            .post(&request.url)
            .timeout(request.timeout)
            .header("content-type", "application/json")
            .body(request.body.to_string());
        if let Some(token) = &request.bearer {
            builder = builder.bearer_auth(token);
        }
        let response = builder
            .send()
            .map_err(|e| Error::Transport(e.to_string()))?;
        let status = response.status().as_u16();
        let retry_after = response
            .headers()
            .get("retry-after")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|s| s.is_finite() && *s >= 0.0)
            .map(Duration::from_secs_f64);
        let body = response
            .text()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(HttpResponse {
            status,
            body,
            retry_after,
        })
    }
}

/// One configured endpoint with retries and an optional response cache.
pub struct RemoteClient {
    config: ProviderConfig,
    transport: Arc<dyn Transport>,
    cache: Option<ResponseCache>,
    bearer: Option<String>,
    network_calls: AtomicUsize,
}

impl RemoteClient {
    pub fn new(config: ProviderConfig, transport: Arc<dyn Transport>) -> Result<Self> {
        config.validate()?;
        let cache = config
            .cache_dir
            .as_ref()
            .map(ResponseCache::open)
            .transpose()?;
        let bearer = std::env::var(&config.api_key_env).ok();
        Ok(RemoteClient {
            config,
            transport,
            cache,
            bearer,
            network_calls: AtomicUsize::new(0),
        })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    /// Requests actually handed to the transport (cache hits excluded).
    pub fn network_calls(&self) -> usize {
        self.network_calls.load(Ordering::Relaxed)
    }

    /// Issues `payload`, parsing the raw response body with `parse`.
    ///
    /// A cached body is used when it still parses. Otherwise up to `max_retries + 1`
    /// attempts are made; transport failures, 408/429 and 5xx back off and retry, and an
    /// unparseable body is re-requested. Only bodies that parse are cached.
    pub fn request<T>(
        &self,
        capability: &'static str,
        payload: Value,
        parse: impl Fn(&str) -> Result<T>,
    ) -> Result<T> {
        let digest = RequestDigest::of(capability, &self.config.model_name, &payload);
        if let Some(cache) = &self.cache {
            if let Some(raw) = cache.lookup(&digest) {
                match parse(&raw) {
                    Ok(value) => return Ok(value),
                    Err(err) => {
                        log::warn!("cached {capability} response {digest} unusable: {err}");
                        cache.evict(&digest);
                    }
                }
            }
        }

        let request = HttpRequest {
            url: self.config.endpoint.clone(),
            bearer: self.bearer.clone(),
            body: payload.clone(),
            timeout: Duration::from_secs_f64(self.config.timeout_secs),
        };
        let mut last_err = None;
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                let hint = match &last_err {
                    Some(RetryReason::Wait(d)) => Some(*d),
                    _ => None,
                };
                std::thread::sleep(hint.unwrap_or_else(|| self.backoff(attempt)));
            }
            self.network_calls.fetch_add(1, Ordering::Relaxed);
            let response = match self.transport.post(&request) {
                Ok(r) => r,
                Err(err) => {
                    log::debug!("{capability} attempt {attempt}: {err}");
                    last_err = Some(RetryReason::Error(err));
                    continue;
                }
            };
            match response.status {
                200..=299 => {}
                408 | 429 | 500..=599 => {
                    log::debug!("{capability} attempt {attempt}: HTTP {}", response.status);
                    last_err = Some(match response.retry_after {
                        Some(d) => RetryReason::Wait(d.min(MAX_BACKOFF)),
                        None => RetryReason::Error(Error::Transport(format!(
                            "HTTP {}",
                            response.status
                        ))),
                    });
                    continue;
                }
                status => {
                    return Err(Error::Transport(format!(
                        "HTTP {status}: {}",
                        truncate(&response.body, 200)
                    )))
                }
            }
            match parse(&response.body) {
                Ok(value) => {
                    if let Some(cache) = &self.cache {
                        let canonical: Value = serde_json::from_str(&canonical_request(
                            capability,
                            &self.config.model_name,
                            &payload,
                        ))?;
                        if let Err(err) = cache.store(&digest, &canonical, &response.body) {
                            log::warn!("cache store failed for {digest}: {err}");
                        }
                    }
                    return Ok(value);
                }
                Err(err) => {
                    log::debug!("{capability} attempt {attempt}: {err}");
                    last_err = Some(RetryReason::Error(err));
                }
            }
        }
        Err(match last_err {
            Some(RetryReason::Error(err)) => err,
            Some(RetryReason::Wait(_)) => Error::Transport("rate limited".into()),
            None => Error::Transport("no attempts made".into()),
        })
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let base = self.config.backoff_ms as f64 * 2f64.powi(attempt as i32 - 1);
        let jitter = rand::rng().random_range(0.5..=1.0);
        Duration::from_secs_f64(base * jitter / 1000.0).min(MAX_BACKOFF)
    }
}

enum RetryReason {
    Error(Error),
    Wait(Duration),
}

fn truncate(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanoramaImage {
    pub mime: String,
    pub bytes: Vec<u8>,
}

impl PanoramaImage {
    fn data_url(&self) -> String {
        format!(
            "data:{};base64,{}",
            self.mime,
            base64::engine::general_purpose::STANDARD.encode(&self.bytes)
        )
    }

    fn base64(&self) -> String {
        base64::engine::general_purpose::STANDARD.encode(&self.bytes)
    }
}

/// Resolves a node's panorama reference to one or more encoded images.
pub trait PanoramaSource: Send + Sync {
    fn images(&self, node: &GraphNode) -> Result<Vec<PanoramaImage>>;
}

/// Panorama references are paths relative to `root`: either one equirectangular image or a
/// directory of tiles (sent in file-name order).
pub struct FilePanoramas {
    root: PathBuf,
}

impl FilePanoramas {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FilePanoramas { root: root.into() }
    }
}

impl PanoramaSource for FilePanoramas {
    fn images(&self, node: &GraphNode) -> Result<Vec<PanoramaImage>> {
        let path = self.root.join(&node.panorama);
        let files = if path.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&path)
                .map_err(|e| Error::io(&path, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            files
        } else {
            vec![path]
        };
        if files.is_empty() {
            return Err(Error::InvalidInput(format!(
                "panorama `{}` has no images",
                node.panorama
            )));
        }
        files
            .into_iter()
            .map(|f| {
                let bytes = std::fs::read(&f).map_err(|e| Error::io(&f, e))?;
                Ok(PanoramaImage {
                    mime: mime_for(&f).into(),
                    bytes,
                })
            })
            .collect()
    }
}

fn mime_for(path: &std::path::Path) -> &'static str {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("png") => "image/png",
        Some("webp") => "image/webp",
        _ => "image/jpeg",
    }
}

fn chat_payload(model: &str, prompt: &str, images: &[PanoramaImage]) -> Value {
    let mut parts = vec![json!({ "type": "text", "text": prompt })];
    parts.extend(
        images
            .iter()
            .map(|img| json!({ "type": "image_url", "image_url": { "url": img.data_url() } })),
    );
    json!({
        "model": model,
        "temperature": 0,
        "messages": [
            { "role": "system", "content": SYSTEM_PROMPT },
            { "role": "user", "content": parts },
        ],
    })
}

fn format_err(capability: &'static str, detail: impl Into<String>) -> Error {
    Error::ProviderFormat {
        capability,
        detail: detail.into(),
    }
}

/// Text of `choices[0].message.content`, whether a string or a list of text parts.
pub(crate) fn chat_content(capability: &'static str, body: &str) -> Result<String> {
    let value: Value =
        serde_json::from_str(body).map_err(|e| format_err(capability, e.to_string()))?;
    let content = &value["choices"][0]["message"]["content"];
    match content {
        Value::String(s) => Ok(s.clone()),
        Value::Array(parts) => Ok(parts
            .iter()
            .filter_map(|p| p["text"].as_str())
            .collect::<Vec<_>>()
            .join("")),
        _ => Err(format_err(capability, "missing choices[0].message.content")),
    }
}

/// Accepts a JSON array of strings (possibly wrapped in prose or a code fence), or else one
/// landmark per line with bullets/numbering stripped.
pub(crate) fn parse_landmark_list(content: &str) -> Result<Vec<String>> {
    let from_json = content
        .find('[')
        .zip(content.rfind(']'))
        .filter(|(a, b)| a < b)
        .and_then(|(a, b)| serde_json::from_str::<Vec<String>>(&content[a..=b]).ok());
    let phrases: Vec<String> = match from_json {
        Some(list) => list,
        None => content
            .lines()
            .map(|l| {
                l.trim()
                    .trim_start_matches(|c: char| {
                        c.is_ascii_digit() || matches!(c, '-' | '*' | '.' | ')' | ' ')
                    })
                    .trim()
                    .to_string()
            })
            .collect(),
    };
    let phrases: Vec<String> = phrases
        .into_iter()
        .map(|p| p.trim().trim_matches('"').trim().to_lowercase())
        .filter(|p| !p.is_empty())
        .collect();
    if phrases.is_empty() {
        return Err(format_err("extraction", "no landmarks in response"));
    }
    Ok(phrases)
}

fn first_token(content: &str) -> &str {
    content
        .split_whitespace()
        .next()
        .unwrap_or("")
        .trim_matches(|c: char| !c.is_alphanumeric())
}

/// First token must be yes/no/1/0, case-insensitively.
pub(crate) fn parse_presence(content: &str) -> Result<bool> {
    match first_token(content).to_ascii_lowercase().as_str() {
        "yes" | "1" => Ok(true),
        "no" | "0" => Ok(false),
        other => Err(format_err(
            "grounding",
            format!("expected yes/no, got `{}`", truncate(other, 40)),
        )),
    }
}

/// First token must be an integer in 1..=5.
pub(crate) fn parse_rating(content: &str) -> Result<PathRating> {
    let token = first_token(content);
    token
        .parse::<u8>()
        .ok()
        .and_then(|r| PathRating::new(r).ok())
        .ok_or_else(|| {
            format_err(
                "rating",
                format!("expected an integer 1-5, got `{}`", truncate(token, 40)),
            )
        })
}

pub(crate) fn parse_embedding(body: &str) -> Result<Vec<f32>> {
    #[derive(Deserialize)]
    struct Item {
        embedding: Vec<f32>,
    }
    #[derive(Deserialize)]
    struct Body {
        data: Vec<Item>,
    }
    let body: Body =
        serde_json::from_str(body).map_err(|e| format_err("embedding", e.to_string()))?;
    let dims = body.data.first().map(|i| i.embedding.len()).unwrap_or(0);
    if dims == 0 || body.data.iter().any(|i| i.embedding.len() != dims) {
        return Err(format_err("embedding", "empty or ragged embeddings"));
    }
    let mut mean = vec![0.0f32; dims];
    for item in &body.data {
        for (m, v) in mean.iter_mut().zip(&item.embedding) {
            *m += v;
        }
    }
    let n = body.data.len() as f32;
    mean.iter_mut().for_each(|m| *m /= n);
    if mean.iter().any(|v| !v.is_finite()) {
        return Err(format_err("embedding", "non-finite value"));
    }
    Ok(mean)
}

pub struct RemoteExtractor {
    client: Arc<RemoteClient>,
}

impl RemoteExtractor {
    pub fn new(client: Arc<RemoteClient>) -> Self {
        RemoteExtractor { client }
    }
}

impl LandmarkExtractor for RemoteExtractor {
    fn extract_landmarks(&self, instruction: &str) -> Result<LandmarkSequence> {
        if instruction.trim().is_empty() {
            return Err(Error::InvalidInput("empty instruction".into()));
        }
        let prompt = render(EXTRACT_PROMPT, &[("instruction", instruction.trim())]);
        let payload = chat_payload(&self.client.config.model_name, &prompt, &[]);
        let phrases = self.client.request("extraction", payload, |body| {
            parse_landmark_list(&chat_content("extraction", body)?)
        })?;
        LandmarkSequence::new(phrases, instruction)
    }
}

pub struct RemoteEmbedder {
    client: Arc<RemoteClient>,
    panoramas: Arc<dyn PanoramaSource>,
}

impl RemoteEmbedder {
    pub fn new(client: Arc<RemoteClient>, panoramas: Arc<dyn PanoramaSource>) -> Self {
        RemoteEmbedder { client, panoramas }
    }
}

impl Embedder for RemoteEmbedder {
    fn embed_text(&self, text: &str) -> Result<Vec<f32>> {
        let payload = json!({
            "model": self.client.config.model_name,
            "input": [{ "type": "text", "text": text }],
        });
        self.client.request("embedding", payload, parse_embedding)
    }

    fn embed_panorama(&self, node: &GraphNode) -> Result<Vec<f32>> {
        let images = self.panoramas.images(node)?;
        let input: Vec<Value> = images
            .iter()
            .map(|img| json!({ "type": "image", "mime": img.mime, "image_base64": img.base64() }))
            .collect();
        let payload = json!({ "model": self.client.config.model_name, "input": input });
        self.client.request("embedding", payload, parse_embedding)
    }
}

pub struct RemoteGrounder {
    client: Arc<RemoteClient>,
    panoramas: Arc<dyn PanoramaSource>,
}

impl RemoteGrounder {
    pub fn new(client: Arc<RemoteClient>, panoramas: Arc<dyn PanoramaSource>) -> Self {
        RemoteGrounder { client, panoramas }
    }
}

impl Grounder for RemoteGrounder {
    fn ground_landmark(&self, node: &GraphNode, landmark: &str) -> Result<GroundingJudgment> {
        if landmark.trim().is_empty() {
            return Err(Error::InvalidInput("empty landmark".into()));
        }
        let images = self.panoramas.images(node)?;
        let prompt = render(GROUND_PROMPT, &[("landmark", landmark.trim())]);
        let payload = chat_payload(&self.client.config.model_name, &prompt, &images);
        let present = self.client.request("grounding", payload, |body| {
            parse_presence(&chat_content("grounding", body)?)
        })?;
        Ok(GroundingJudgment {
            node_id: node.id.clone(),
            landmark: landmark.to_string(),
            present,
            provider_id: self.client.config.model_name.clone(),
        })
    }
}

pub struct RemoteRater {
    client: Arc<RemoteClient>,
    panoramas: Arc<dyn PanoramaSource>,
}

impl RemoteRater {
    pub fn new(client: Arc<RemoteClient>, panoramas: Arc<dyn PanoramaSource>) -> Self {
        RemoteRater { client, panoramas }
    }
}

impl PathRater for RemoteRater {
    fn rate_path(
        &self,
        nodes: &[GraphNode],
        instruction: &str,
        landmarks: &LandmarkSequence,
    ) -> Result<PathRating> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("cannot rate an empty path".into()));
        }
        let mut images = Vec::new();
        for node in nodes {
            images.extend(self.panoramas.images(node)?);
        }
        let landmark_list = serde_json::to_string(landmarks.phrases())?;
        let count = nodes.len().to_string();
        let prompt = render(
            RATE_PROMPT,
            &[
                ("instruction", instruction.trim()),
                ("landmarks", &landmark_list),
                ("count", &count),
            ],
        );
        let payload = chat_payload(&self.client.config.model_name, &prompt, &images);
        self.client.request("rating", payload, |body| {
            parse_rating(&chat_content("rating", body)?)
        })
    }
}
