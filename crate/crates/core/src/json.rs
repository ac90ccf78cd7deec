//! JSON forms of downsets and cover results. Ideals and types are embedded
//! as their textual grammar, so the JSON round-trips through the canonical
//! printers byte for byte.

use serde::{Deserialize, Serialize};

use crate::downset::DownSet;
use crate::engine::{CoverResult, CoverStats};
use crate::error::{Error, Result};
use crate::text;

#[derive(Debug, Serialize, Deserialize)]
struct DownSetJson {
    #[serde(rename = "type")]
    ty: String,
    parts: Vec<String>,
}

fn downset_json(downset: &DownSet) -> DownSetJson {
    DownSetJson {
        ty: text::print_type(downset.ty()),
        parts: downset.parts().iter().map(text::print_ideal).collect(),
    }
}

pub fn downset_to_json_string(downset: &DownSet) -> String {
    serde_json::to_string(&downset_json(downset)).expect("downset serialization")
}

pub fn downset_from_json_str(json: &str) -> Result<DownSet> {
    let raw: DownSetJson = serde_json::from_str(json)
        .map_err(|e| Error::Semantic(format!("bad downset JSON: {e}")))?;
    let ty = text::parse_type(&raw.ty)?;
    let parts = raw
        .parts
        .iter()
        .map(|part| text::parse_ideal(&ty, part))
        .collect::<Result<Vec<_>>>()?;
    DownSet::from_ideals(ty, parts)
}

#[derive(Serialize)]
struct CoverJson {
    status: &'static str,
    cover: DownSetJson,
    stats: CoverStats,
}

pub fn cover_result_to_json_string(result: &CoverResult) -> String {
    serde_json::to_string(&CoverJson {
        status: result.status.as_str(),
        cover: downset_json(&result.cover),
        stats: result.stats.clone(),
    })
    .expect("cover serialization")
}
