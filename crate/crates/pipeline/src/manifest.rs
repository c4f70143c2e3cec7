//! Line-delimited job manifests with crash-safe resume.
//!
//! One JSON record per line; a job's latest line wins, so updates are plain
//! appends and an interrupted run leaves a loadable file. Rerunning a
//! completed manifest is a no-op: terminal statuses are never revisited.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JobStatus {
    Pending,
    Sat {
        #[serde(skip_serializing_if = "Option::is_none")]
        result: Option<String>,
    },
    Unsat,
    Error {
        message: String,
    },
}

impl JobStatus {
    pub fn is_terminal(&self) -> bool {
        !matches!(self, JobStatus::Pending)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobRecord {
    pub id: String,
    pub recipe: String,
    pub status: JobStatus,
    #[serde(default)]
    pub wall_ms: u64,
}

/// In-memory view of a manifest, optionally bound to a file.
pub struct JobManifest {
    path: Option<PathBuf>,
    records: BTreeMap<String, JobRecord>,
}

impl JobManifest {
    pub fn in_memory() -> Self {
        JobManifest {
            path: None,
            records: BTreeMap::new(),
        }
    }

    /// Opens (or creates) a file-backed manifest, replaying existing records.
    pub fn open(path: &Path) -> Result<Self> {
        let mut records = BTreeMap::new();
        if path.exists() {
            let file = std::fs::File::open(path)?;
            for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: JobRecord = serde_json::from_str(&line)
                    .map_err(|e| Error::Manifest(format!("line {}: {}", idx + 1, e)))?;
                records.insert(record.id.clone(), record);
            }
        }
        Ok(JobManifest {
            path: Some(path.to_path_buf()),
            records,
        })
    }

    pub fn get(&self, id: &str) -> Option<&JobRecord> {
        self.records.get(id)
    }

    pub fn records(&self) -> impl Iterator<Item = &JobRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Ensures a pending record exists; keeps any existing record untouched.
    pub fn register(&mut self, id: &str, recipe: &str) -> Result<()> {
        if self.records.contains_key(id) {
            return Ok(());
        }
        let record = JobRecord {
            id: id.to_string(),
            recipe: recipe.to_string(),
            status: JobStatus::Pending,
            wall_ms: 0,
        };
        self.append(&record)?;
        self.records.insert(id.to_string(), record);
        Ok(())
    }

    /// Records a terminal status. Pending -> terminal is the only legal
    /// transition; updating a terminal record to something else is an error.
    pub fn finish(&mut self, id: &str, status: JobStatus, wall_ms: u64) -> Result<()> {
        let existing = self
            .records
            .get(id)
            .ok_or_else(|| Error::Manifest(format!("finish of unregistered job {}", id)))?;
        if existing.status.is_terminal() {
            if existing.status == status {
                return Ok(());
            }
            return Err(Error::Manifest(format!(
                "job {} already terminal with a different status",
                id
            )));
        }
        let record = JobRecord {
            id: id.to_string(),
            recipe: existing.recipe.clone(),
            status,
            wall_ms,
        };
        self.append(&record)?;
        self.records.insert(id.to_string(), record);
        Ok(())
    }

    fn append(&self, record: &JobRecord) -> Result<()> {
        if let Some(path) = &self.path {
            let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
            let line = serde_json::to_string(record).map_err(|e| Error::Manifest(e.to_string()))?;
            writeln!(file, "{}", line)?;
            file.flush()?;
        }
        Ok(())
    }

    /// Aggregate counters over terminal statuses: (sat, unsat, error, pending).
    pub fn tally(&self) -> (usize, usize, usize, usize) {
        let mut t = (0, 0, 0, 0);
        for r in self.records.values() {
            match r.status {
                JobStatus::Sat { .. } => t.0 += 1,
                JobStatus::Unsat => t.1 += 1,
                JobStatus::Error { .. } => t.2 += 1,
                JobStatus::Pending => t.3 += 1,
            }
        }
        t
    }
}

/// A unit of work: solve something, produce a terminal status.
pub struct Job {
    pub id: String,
    pub recipe: String,
    pub run: Box<dyn FnOnce() -> JobStatus + Send>,
}

/// Executes jobs against a manifest with a fixed-size worker pool.
///
/// Jobs whose manifest record is already terminal are skipped, which is what
/// makes interrupted runs resumable. Manifest updates all happen on the
/// calling thread; `stop_after` limits how many jobs run in this invocation
/// (used for graceful interruption).
pub fn run_jobs(
    manifest: &mut JobManifest,
    jobs: Vec<Job>,
    workers: usize,
    stop_after: Option<usize>,
) -> Result<()> {
    let mut runnable = Vec::new();
    for job in jobs {
        manifest.register(&job.id, &job.recipe)?;
        let skip = manifest
            .get(&job.id)
            .map(|r| r.status.is_terminal())
            .unwrap_or(false);
        if !skip {
            runnable.push(job);
        }
    }
    if let Some(limit) = stop_after {
        runnable.truncate(limit);
    }
    if runnable.is_empty() {
        return Ok(());
    }

    let workers = workers.max(1).min(runnable.len());
    if workers == 1 {
        for job in runnable {
            let start = std::time::Instant::now();
            let status = (job.run)();
            manifest.finish(&job.id, status, start.elapsed().as_millis() as u64)?;
        }
        return Ok(());
    }

    let (result_tx, result_rx) = std::sync::mpsc::channel::<(String, JobStatus, u64)>();
    let queue = std::sync::Mutex::new(runnable.into_iter());
    let mut outcome = Ok(());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = result_tx.clone();
            let queue = &queue;
            scope.spawn(move || loop {
                let job = {
                    let mut q = queue.lock().unwrap();
                    q.next()
                };
                let Some(job) = job else { break };
                let start = std::time::Instant::now();
                let status = (job.run)();
                if tx.send((job.id, status, start.elapsed().as_millis() as u64)).is_err() {
                    break;
                }
            });
        }
        drop(result_tx);
        // Single-writer: only this thread touches the manifest.
        for (id, status, wall_ms) in result_rx {
            if outcome.is_ok() {
                outcome = manifest.finish(&id, status, wall_ms);
            }
        }
    });
    outcome
}
