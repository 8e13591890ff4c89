//! Ordered training records, stored as JSON lines (one record per line,
//! discriminated by `kind`).

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogRecord {
    /// One autoencoder epoch. `penalty` is the `γ·E‖Enc(x)‖²` contribution.
    Epoch {
        epoch: usize,
        recon_mse: f64,
        penalty: f64,
        code_norm: f64,
        lr: f64,
    },
    /// One generator step (plus the discriminator steps preceding it).
    Step {
        iter: usize,
        phase: u8,
        d_loss: f64,
        g_loss: f64,
        recon: Option<f64>,
        ema: Option<f64>,
        lr: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gp: Option<f64>,
    },
    Transition {
        iter: usize,
        from: u8,
        to: u8,
        ema: f64,
    },
    Coverage {
        iter: usize,
        covered: usize,
        n_samples: usize,
        threshold: f64,
    },
    Summary {
        label: String,
        runs: usize,
        mean: f64,
        std: f64,
        scores: Vec<f64>,
    },
    Abort {
        iter: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub records: Vec<LogRecord>,
}

impl RunLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rec: LogRecord) {
        self.records.push(rec);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Covered-mode counts of every coverage snapshot, in order.
    pub fn coverage_snapshots(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter_map(|r| match r {
                LogRecord::Coverage { covered, .. } => Some(*covered),
                _ => None,
            })
            .collect()
    }

    pub fn transitions(&self) -> Vec<(usize, u8, u8)> {
        self.records
            .iter()
            .filter_map(|r| match r {
                LogRecord::Transition { iter, from, to, .. } => Some((*iter, *from, *to)),
                _ => None,
            })
            .collect()
    }

    pub fn aborted(&self) -> bool {
        self.records.iter().any(|r| matches!(r, LogRecord::Abort { .. }))
    }

    /// `(d_loss, g_loss)` of every step record, the loss trace compared by
    /// determinism checks.
    pub fn loss_trace(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| match r {
                LogRecord::Step { d_loss, g_loss, .. } => Some((*d_loss, *g_loss)),
                _ => None,
            })
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("records serialize"));
            s.push('\n');
        }
        s
    }

    pub fn write_jsonl(&self, path: &Path) -> std::io::Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn append_jsonl(path: &Path, rec: &LogRecord) -> std::io::Result<()> {
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let mut line = serde_json::to_string(rec)?;
        line.push('\n');
        f.write_all(line.as_bytes())
    }

    pub fn read_jsonl(path: &Path) -> std::io::Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut records = Vec::new();
        for (i, line) in f.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line).map_err(|e| {
                std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("{}:{}: {e}", path.display(), i + 1),
                )
            })?;
            records.push(rec);
        }
        Ok(Self { records })
    }
}
