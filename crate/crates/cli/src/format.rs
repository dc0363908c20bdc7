//! Instance files: a JSON document with a version tag and one record per
//! disk, every number written as a shortest round-trip decimal string.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tspn_core::{Disk, Instance, Point};

pub const INSTANCE_VERSION: &str = "tspn-disks/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported instance version `{0}`, expected `{INSTANCE_VERSION}`")]
    Version(String),
    #[error("disk {index}: field `{field}` is not a decimal number: `{value}`")]
    Number { index: usize, field: &'static str, value: String },
    #[error("invalid instance: {0}")]
    Instance(#[from] tspn_core::Error),
}

#[derive(Serialize, Deserialize)]
struct DiskRecord {
    x: String,
    y: String,
    r: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    version: String,
    disks: Vec<DiskRecord>,
}

/// Shortest decimal string that parses back to the same value.
pub fn decimal(v: f64) -> String {
    format!("{v:?}")
}

pub fn instance_to_json(inst: &Instance) -> String {
    let doc = InstanceDoc {
        version: INSTANCE_VERSION.to_string(),
        disks: inst
            .disks()
            .iter()
            .map(|d| DiskRecord { x: decimal(d.center.x), y: decimal(d.center.y), r: decimal(d.radius) })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain strings serialize");
    s.push('\n');
    s
}

pub fn instance_from_json(text: &str) -> Result<Instance, FormatError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    if doc.version != INSTANCE_VERSION {
        return Err(FormatError::Version(doc.version));
    }
    let mut disks = Vec::with_capacity(doc.disks.len());
    for (index, rec) in doc.disks.iter().enumerate() {
        let num = |field: &'static str, value: &str| {
            value.trim().parse::<f64>().map_err(|_| FormatError::Number { index, field, value: value.to_string() })
        };
        disks.push(Disk::new(Point::new(num("x", &rec.x)?, num("y", &rec.y)?), num("r", &rec.r)?));
    }
    Ok(Instance::new(disks)?)
}

/// Hex SHA-256 of the canonical instance document.
pub fn instance_digest(inst: &Instance) -> String {
    hex::encode(Sha256::digest(instance_to_json(inst).as_bytes()))
}
