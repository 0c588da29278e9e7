//! JSON inputs of the simulators. `code_file` is resolved relative to the
//! scenario file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;
use ursc::codes::CodeMatrix;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeepScenario {
    pub nodes: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    /// Global wake-up round per node.
    pub wake: BTreeMap<usize, u64>,
    pub horizon: u64,
    pub code_file: PathBuf,
    /// Size of the id universe; defaults to the largest node id.
    #[serde(default)]
    pub n_ids: Option<usize>,
    /// Bit strings per node; switches the simulation to local broadcast.
    #[serde(default)]
    pub messages: Option<BTreeMap<usize, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrScenario {
    pub stations: Vec<usize>,
    /// Activation round per station.
    pub delta: BTreeMap<usize, u64>,
    pub s: usize,
    /// Local rounds per station; defaults to the code-derived horizon.
    #[serde(default)]
    pub horizon: Option<u64>,
    pub code_file: PathBuf,
    /// `p/q`; the repetition count is derived from it unless forced.
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub repetitions: Option<usize>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_code(path: &Path) -> anyhow::Result<CodeMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CodeMatrix::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn code_beside(scenario: &Path, code_file: &Path) -> anyhow::Result<CodeMatrix> {
    let base = scenario.parent().unwrap_or(Path::new("."));
    read_code(&base.join(code_file))
}

pub fn parse_bits(s: &str) -> anyhow::Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => bail!("message {s:?} is not a bit string"),
        })
        .collect()
}
