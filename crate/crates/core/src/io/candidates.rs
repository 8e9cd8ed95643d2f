//! Candidate list files: one JSON record per line, so per-room shards
//! concatenate into a valid selection input without any framing.

use crate::candgen::Candidate;
use crate::geom::Vec3;
use crate::scene::Camera;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CandidateIoError {
    #[error("reading {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: String,
        line: usize,
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CameraRecord {
    pub pos: Vec3,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

/// One camera with optional scores. Scored records come from the generator;
/// baseline emitters leave `aggregate`/`vector` out until a rescore pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub id: u64,
    pub room: String,
    pub camera: CameraRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<f64>>,
}

impl CandidateRecord {
    pub fn from_candidate(c: &Candidate) -> Self {
        CandidateRecord {
            id: c.id,
            room: c.room.clone(),
            camera: CameraRecord {
                pos: c.camera.position,
                yaw: c.camera.yaw,
                pitch: c.camera.pitch,
                roll: c.camera.roll,
            },
            aggregate: Some(c.aggregate),
            vector: Some(c.vector.clone()),
        }
    }

    pub fn camera(&self, hfov: f64, aspect: f64) -> Camera {
        Camera::new(
            self.camera.pos,
            self.camera.yaw,
            self.camera.pitch,
            self.camera.roll,
            hfov,
            aspect,
        )
    }
}

pub fn write_candidates(
    path: &Path,
    records: &[CandidateRecord],
) -> Result<(), CandidateIoError> {
    let err = |source| CandidateIoError::Write {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(err)?;
    let mut out = std::io::BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).expect("records serialize infallibly");
        out.write_all(line.as_bytes()).map_err(err)?;
        out.write_all(b"\n").map_err(err)?;
    }
    out.flush().map_err(err)
}

pub fn read_candidates(path: &Path) -> Result<Vec<CandidateRecord>, CandidateIoError> {
    let file = std::fs::File::open(path).map_err(|source| CandidateIoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CandidateIoError::Read {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record =
            serde_json::from_str(&line).map_err(|source| CandidateIoError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                source,
            })?;
        records.push(record);
    }
    Ok(records)
}
