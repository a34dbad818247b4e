//! Run reports for the CLI and the benchmark harness.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ChunkStats {
    pub index: usize,
    pub vertices: usize,
    pub edges: usize,
    pub width: usize,
    pub max_table: usize,
    pub total_tuples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub mode: String,
    pub found: Option<bool>,
    pub count: Option<u64>,
    pub listed: Option<usize>,
    pub wall_ms: f64,
    pub chunks: Vec<ChunkStats>,
    pub max_width: usize,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(mode: &str) -> RunReport {
        RunReport {
            schema: 1,
            mode: mode.to_string(),
            found: None,
            count: None,
            listed: None,
            wall_ms: 0.0,
            chunks: Vec::new(),
            max_width: 0,
            seed: None,
        }
    }
}
