use std::fs::File;
use std::io::{LineWriter, Write};
use std::path::Path;

use sonic_anchor::session::{LogRecord, Session};

/// Appends a session's log to `<dir>/<session id>.jsonl`, one line per
/// record. Without a directory the log only lives in the session.
pub struct LogSink {
    file: Option<LineWriter<File>>,
}

impl LogSink {
    pub fn create(dir: Option<&Path>, session: &Session) -> Self {
        let file = dir.and_then(|dir| {
            let path = dir.join(format!("{}.jsonl", session.id()));
            let opened = File::create(&path).and_then(|f| {
                let mut w = LineWriter::new(f);
                writeln!(w, "{}", session.log().header_line())?;
                Ok(w)
            });
            opened
                .map_err(|e| tracing::warn!(path = %path.display(), error = %e, "session log disabled"))
                .ok()
        });
        Self { file }
    }

    pub fn append(&mut self, record: Option<LogRecord>) {
        let (Some(file), Some(record)) = (&mut self.file, record) else {
            return;
        };
        if let Err(e) = writeln!(file, "{}", record.to_line()) {
            tracing::warn!(error = %e, "session log write failed, disabling");
            self.file = None;
        }
    }
}
