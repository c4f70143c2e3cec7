//! Shared execution context for pipeline stages.

use crate::manifest::JobManifest;
use crate::Result;
use ramsey_core::cnf::Backend;
use ramsey_core::graph::ColoredGraph;
use std::path::{Path, PathBuf};

/// Backend, parallelism, and artifact location for a batch of work.
///
/// With an artifact directory set, stages persist their outputs and
/// manifests there and later runs resume instead of recomputing; without
/// one, everything stays in memory.
#[derive(Clone)]
pub struct Session {
    pub backend: Backend,
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    /// Cap on jobs started per `run_jobs` call; for graceful interruption.
    pub stop_after: Option<usize>,
}

impl Session {
    pub fn new(backend: Backend) -> Self {
        Session {
            backend,
            workers: 1,
            out_dir: None,
            stop_after: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    pub(crate) fn ensure_out_dir(&self) -> Result<()> {
        if let Some(dir) = &self.out_dir {
            std::fs::create_dir_all(dir)?;
        }
        Ok(())
    }

    pub(crate) fn manifest(&self, name: &str) -> Result<JobManifest> {
        match &self.out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                JobManifest::open(&dir.join(name))
            }
            None => Ok(JobManifest::in_memory()),
        }
    }

    pub(crate) fn artifact_path(&self, name: &str) -> Option<PathBuf> {
        self.out_dir.as_ref().map(|d| d.join(name))
    }

    pub(crate) fn subdir(&self, name: &str) -> Result<Option<PathBuf>> {
        match &self.out_dir {
            Some(dir) => {
                let sub = dir.join(name);
                std::fs::create_dir_all(&sub)?;
                Ok(Some(sub))
            }
            None => Ok(None),
        }
    }
}

/// Writes several graphs into one artifact file (blank-line separated,
/// each in the standard single-graph format).
pub fn write_graphs(graphs: &[ColoredGraph]) -> String {
    let mut out = String::new();
    for (idx, g) in graphs.iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&g.to_text());
    }
    out
}

/// Parses a blank-line separated multi-graph artifact file.
pub fn parse_graphs(text: &str) -> ramsey_core::Result<Vec<ColoredGraph>> {
    let mut out = Vec::new();
    let mut chunk = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !chunk.is_empty() {
                out.push(ColoredGraph::from_text(&chunk)?);
                chunk.clear();
            }
        } else {
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    if !chunk.is_empty() {
        out.push(ColoredGraph::from_text(&chunk)?);
    }
    Ok(out)
}

/// Reads a whole artifact file if it exists.
pub fn read_if_exists(path: &Path) -> Result<Option<String>> {
    if path.exists() {
        Ok(Some(std::fs::read_to_string(path)?))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_graph_roundtrip() {
        let a = ColoredGraph::monochrome(3, 2, 1).unwrap();
        let b = ColoredGraph::monochrome(4, 2, 2).unwrap();
        let text = write_graphs(&[a.clone(), b.clone()]);
        assert_eq!(parse_graphs(&text).unwrap(), vec![a, b]);
        assert!(parse_graphs("").unwrap().is_empty());
    }
}
