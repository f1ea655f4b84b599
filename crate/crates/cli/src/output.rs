use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use cuapn::derivative::{Progress, WitnessCertificate};
use serde::Serialize;
use serde_json::Value;

/// Wall-clock data; the only part of a document allowed to differ between
/// identical runs.
#[derive(Debug, Serialize)]
pub struct Runtime {
    pub timestamp_unix: u64,
    pub elapsed_ms: u64,
    pub threads: usize,
}

#[derive(Debug, Serialize)]
pub struct Document {
    pub schema: String,
    pub params: Value,
    pub verdicts: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<WitnessCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
    pub warnings: Vec<String>,
    pub runtime: Runtime,
}

impl Document {
    pub fn new(schema: &str, params: Value, verdicts: Value, started: Instant) -> Self {
        Document {
            schema: schema.to_string(),
            params,
            verdicts,
            histogram: None,
            certificate: None,
            report: None,
            warnings: Vec::new(),
            runtime: Runtime {
                timestamp_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                elapsed_ms: started.elapsed().as_millis() as u64,
                threads: rayon::current_num_threads(),
            },
        }
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        match out {
            Some(path) => std::fs::write(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()
            }
        }
    }
}

/// Prints "label: NN%" to standard error at every tenth of the work.
pub struct StderrProgress {
    label: &'static str,
    enabled: bool,
    reported: AtomicU64,
}

impl StderrProgress {
    pub fn new(label: &'static str, enabled: bool) -> Self {
        StderrProgress {
            label,
            enabled,
            reported: AtomicU64::new(0),
        }
    }
}

impl Progress for StderrProgress {
    fn update(&self, done: u64, total: u64) {
        if !self.enabled || total == 0 {
            return;
        }
        let tenth = done.min(total) * 10 / total;
        let prev = self.reported.fetch_max(tenth, Ordering::Relaxed);
        if tenth > prev {
            eprintln!("{}: {}%", self.label, tenth * 10);
        }
    }
}
