//! Episode records in the common route-instruction layout.
//!
//! The episode file is a JSON array of
//! `{episode_id | path_id, scan, instruction | instructions, path}` where `path` lists
//! viewpoint ids. A record with several instructions expands to one episode per
//! instruction, suffixed `_0`, `_1`, ... The sidecar maps scan to viewpoint to
//! `{position, panorama}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Episode;
use crate::error::{read_json, Error, Result};
use crate::topomap::{GraphNode, Position};

#[derive(Debug, Deserialize)]
struct Record {
    #[serde(alias = "path_id")]
    episode_id: Value,
    scan: String,
    #[serde(default)]
    instruction: Option<String>,
    #[serde(default)]
    instructions: Vec<String>,
    path: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Viewpoint {
    position: Position,
    panorama: String,
}

type Sidecar = BTreeMap<String, BTreeMap<String, Viewpoint>>;

fn id_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) if !s.is_empty() => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::InvalidInput(format!("bad episode id {other}"))),
    }
}

pub fn load_episodes(episodes_path: &Path, viewpoints_path: &Path) -> Result<Vec<Episode>> {
    let records: Vec<Record> = read_json(episodes_path)?;
    let sidecar: Sidecar = read_json(viewpoints_path)?;
    let mut out = Vec::new();
    for rec in records {
        let id = id_string(&rec.episode_id)?;
        if rec.path.is_empty() {
            return Err(Error::InvalidInput(format!(
                "episode `{id}` has an empty path"
            )));
        }
        let views = sidecar.get(&rec.scan);
        let path = rec
            .path
            .iter()
            .map(|vp| match views.and_then(|v| v.get(vp)) {
                Some(v) => Ok(GraphNode::new(vp.clone(), v.position, v.panorama.clone())),
                None => Err(Error::ReferentialIntegrity {
                    episode: id.clone(),
                    viewpoint: vp.clone(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        let instructions: Vec<String> = match (&rec.instruction, rec.instructions.len()) {
            (Some(i), 0) => vec![i.clone()],
            (None, 0) => {
                return Err(Error::InvalidInput(format!(
                    "episode `{id}` has no instruction"
                )))
            }
            (Some(i), _) => std::iter::once(i.clone()).chain(rec.instructions).collect(),
            (None, _) => rec.instructions,
        };
        let multi = instructions.len() > 1;
        for (i, instruction) in instructions.into_iter().enumerate() {
            out.push(Episode {
                episode_id: if multi {
                    format!("{id}_{i}")
                } else {
                    id.clone()
                },
                scene_id: rec.scan.clone(),
                instruction,
                path: path.clone(),
            });
        }
    }
    Ok(out)
}

/// Writes episodes back out in the record layout, with a matching sidecar.
pub fn write_dataset(
    episodes: &[Episode],
    episodes_path: &Path,
    viewpoints_path: &Path,
) -> Result<()> {
    let mut sidecar = Sidecar::new();
    let mut records = Vec::with_capacity(episodes.len());
    for ep in episodes {
        let scan = sidecar.entry(ep.scene_id.clone()).or_default();
        for n in &ep.path {
            scan.insert(
                n.id.clone(),
                Viewpoint {
                    position: n.position,
                    panorama: n.panorama.clone(),
                },
            );
        }
        records.push(serde_json::json!({
            "episode_id": ep.episode_id,
            "scan": ep.scene_id,
            "instruction": ep.instruction,
            "path": ep.gt_path(),
        }));
    }
    let write =
        |path: &Path, value: String| std::fs::write(path, value).map_err(|e| Error::io(path, e));
    write(episodes_path, serde_json::to_string_pretty(&records)?)?;
    write(viewpoints_path, serde_json::to_string_pretty(&sidecar)?)
}
