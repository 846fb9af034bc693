//! Class databases on disk: one JSON document per census or table cell.

use std::fs;
use std::path::{Path, PathBuf};

use cliffhier::classify::{CycleClassification, PermCensus};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{CliError, CliResult};

pub const CACHE_ENV: &str = "CLIFFHIER_CACHE_DIR";
const DEFAULT_DIR: &str = ".cliffhier-cache";

pub struct Cache {
    root: PathBuf,
}

fn shape_slug(shape: &[usize]) -> String {
    if shape.is_empty() {
        "id".to_string()
    } else {
        shape
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// `k1,k2,...` as accepted by `--shape`.
pub fn shape_arg(shape: &[usize]) -> String {
    if shape.is_empty() {
        "id".to_string()
    } else {
        shape
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Cache {
    pub fn from_env() -> Self {
        let root = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { root }
    }

    fn perm_path(&self, n: usize) -> PathBuf {
        self.root.join("perms").join(format!("n{n}.json"))
    }

    fn cycle_path(&self, n: usize, shape: &[usize]) -> PathBuf {
        self.root
            .join("cycles")
            .join(format!("n{n}_{}.json", shape_slug(shape)))
    }

    pub fn store_census(&self, c: &PermCensus) -> CliResult<PathBuf> {
        let path = self.perm_path(c.n);
        write_json(&path, c)?;
        Ok(path)
    }

    pub fn store_cell(&self, c: &CycleClassification) -> CliResult<PathBuf> {
        let path = self.cycle_path(c.n, &c.shape);
        write_json(&path, c)?;
        Ok(path)
    }

    pub fn load_census(&self, n: usize) -> CliResult<Option<PermCensus>> {
        read_json(&self.perm_path(n))
    }

    pub fn load_cell(&self, n: usize, shape: &[usize]) -> CliResult<Option<CycleClassification>> {
        read_json(&self.cycle_path(n, shape))
    }
}

/// Pretty JSON with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, to_sorted_json(value)?)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<Option<T>> {
    match fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| CliError::Io(format!("{}: corrupt database: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::Io(format!("{}: {e}", path.display()))),
    }
}
