//! An in-process stand-in for the remote endpoints, answering from an [`Oracle`].
//!
//! Lets the remote code path (payload building, response parsing, retries, caching) run
//! offline. Panorama "images" are just node ids, so the service can recover which
//! viewpoint a request is about.

use std::sync::atomic::{AtomicUsize, Ordering};

use base64::Engine as _;
use serde_json::{json, Value};

use super::remote::{HttpRequest, HttpResponse, PanoramaImage, PanoramaSource, Transport};
use super::{
    Embedder, Grounder, LandmarkExtractor, LandmarkSequence, Oracle, PathRater, RuleBasedExtractor,
};
use crate::error::{Error, Result};
use crate::topomap::GraphNode;

const NODE_MIME: &str = "application/x-node-id";

/// Encodes each node's id as its single panorama image.
#[derive(Debug, Clone, Copy, Default)]
pub struct NodeIdPanoramas;

impl PanoramaSource for NodeIdPanoramas {
    fn images(&self, node: &GraphNode) -> Result<Vec<PanoramaImage>> {
        Ok(vec![PanoramaImage {
            mime: NODE_MIME.into(),
            bytes: node.id.as_bytes().to_vec(),
        }])
    }
}

/// Transport that serves chat and embedding requests from an oracle.
pub struct SimulatedService {
    oracle: Oracle,
    calls: AtomicUsize,
}

impl SimulatedService {
    pub fn new(oracle: Oracle) -> Self {
        SimulatedService {
            oracle,
            calls: AtomicUsize::new(0),
        }
    }

    /// Requests served so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn serve(&self, body: &Value) -> Result<String> {
        if let Some(inputs) = body["input"].as_array() {
            let data = inputs
                .iter()
                .map(|item| {
                    let embedding = match item["type"].as_str() {
                        Some("text") => self
                            .oracle
                            .embed_text(item["text"].as_str().unwrap_or(""))?,
                        Some("image") => {
                            let id = decode(item["image_base64"].as_str().unwrap_or(""))?;
                            self.oracle.embed_panorama(&node(&id))?
                        }
                        _ => return Err(bad("unknown embedding input")),
                    };
                    Ok(json!({ "embedding": embedding }))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(json!({ "data": data }).to_string());
        }
        let parts = body["messages"][1]["content"]
            .as_array()
            .ok_or_else(|| bad("no user message"))?;
        let text = parts
            .iter()
            .filter_map(|p| p["text"].as_str())
            .collect::<Vec<_>>()
            .join("\n");
        let nodes: Vec<GraphNode> = parts
            .iter()
            .filter_map(|p| p["image_url"]["url"].as_str())
            .map(|url| decode(url.rsplit(',').next().unwrap_or("")).map(|id| node(&id)))
            .collect::<Result<_>>()?;
        let field = |label: &str| {
            text.lines()
                .find_map(|l| l.strip_prefix(label))
                .map(str::trim)
                .ok_or_else(|| bad("unrecognized prompt"))
        };
        let answer = if text.contains("Landmarks to visit in order:") {
            let landmarks: Vec<String> =
                serde_json::from_str(field("Landmarks to visit in order:")?)?;
            let seq = LandmarkSequence::new(landmarks, field("Navigation instruction:")?)?;
            let instruction = seq.source_instruction().to_string();
            self.oracle
                .rate_path(&nodes, &instruction, &seq)?
                .get()
                .to_string()
        } else if text.contains("Landmark:") {
            let first = nodes
                .first()
                .ok_or_else(|| bad("grounding without an image"))?;
            let present = self
                .oracle
                .ground_landmark(first, field("Landmark:")?)?
                .present;
            if present { "yes" } else { "no" }.to_string()
        } else {
            let seq = RuleBasedExtractor.extract_landmarks(field("Instruction:")?)?;
            serde_json::to_string(seq.phrases())?
        };
        Ok(json!({ "choices": [{ "message": { "content": answer } }] }).to_string())
    }
}

impl Transport for SimulatedService {
    fn post(&self, request: &HttpRequest) -> Result<HttpResponse> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let (status, body) = match self.serve(&request.body) {
            Ok(body) => (200, body),
            Err(e) => (400, json!({ "error": e.to_string() }).to_string()),
        };
        Ok(HttpResponse {
            status,
            body,
            retry_after: None,
        })
    }
}

fn node(id: &str) -> GraphNode {
    GraphNode::new(id, [0.0; 3], id)
}

fn bad(detail: &str) -> Error {
    Error::InvalidInput(format!("simulated service: {detail}"))
}

fn decode(b64: &str) -> Result<String> {
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(b64)
        .map_err(|e| bad(&e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| bad(&e.to_string()))
}
