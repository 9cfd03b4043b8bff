//! Append-only session logs, one JSON object per line. The first line is a
//! header naming the session and the scene digest; every later line is an
//! inbound message or a heartbeat tick with its receipt time.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::protocol::{AudioMode, ClientMessage};
use crate::scene::{serialize_scene, SceneDescriptor};

pub const LOG_FORMAT: &str = "sonic-anchor-session/1";

/// SHA-256 of the canonical scene document, hex encoded.
pub fn scene_hash(scene: &SceneDescriptor) -> String {
    hex::encode(Sha256::digest(serialize_scene(scene).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogHeader {
    pub format: String,
    pub session: String,
    pub scene_hash: String,
    pub audio_mode: AudioMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LogRecord {
    Message { t: f64, msg: ClientMessage },
    Tick { t: f64 },
}

impl LogRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("log records serialize")
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LogError {
    #[error("session log is empty")]
    Empty,
    #[error("line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error("unsupported log format `{0}`")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionLog {
    pub header: LogHeader,
    pub records: Vec<LogRecord>,
}

impl SessionLog {
    pub fn new(session: impl Into<String>, scene_hash: impl Into<String>, audio_mode: AudioMode) -> Self {
        Self {
            header: LogHeader {
                format: LOG_FORMAT.into(),
                session: session.into(),
                scene_hash: scene_hash.into(),
                audio_mode,
            },
            records: Vec::new(),
        }
    }

    pub fn header_line(&self) -> String {
        serde_json::to_string(&self.header).expect("log header serializes")
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = self.header_line();
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LogError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(LogError::Empty)?;
        let header: LogHeader = serde_json::from_str(first).map_err(|e| LogError::Corrupt {
            line: 1,
            message: e.to_string(),
        })?;
        if header.format != LOG_FORMAT {
            return Err(LogError::Format(header.format));
        }
        let records = lines
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| LogError::Corrupt {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { header, records })
    }
}
