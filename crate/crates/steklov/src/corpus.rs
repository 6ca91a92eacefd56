//! Batch verification of a directory of specs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::HarnessError;
use crate::report::{CsvRow, VerificationReport};
use crate::spec::SpecFile;
use crate::verify::{verify, VerifyOptions};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub name: String,
    pub outcome: Result<VerificationReport, String>,
}

impl CorpusEntry {
    /// Main inequality and chain ordering both hold.
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.pass && r.chain.ordering_ok)
    }

    pub fn csv_row(&self) -> CsvRow {
        match &self.outcome {
            Ok(r) => r.csv_row(),
            Err(e) => CsvRow::failed(self.name.clone(), e.clone()),
        }
    }
}

/// `*.json` files of `dir`, sorted by path.
pub fn spec_paths(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let io = |source| HarnessError::Io { path: dir.to_path_buf(), source };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn run_one(path: &Path, options: VerifyOptions) -> CorpusEntry {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match SpecFile::load(path) {
        Ok(spec) => {
            let name = spec.display_name(Some(path));
            let outcome = verify(&spec, &name, options).map_err(|e| e.to_string());
            CorpusEntry { path: path.to_path_buf(), name, outcome }
        }
        Err(e) => CorpusEntry { path: path.to_path_buf(), name: stem, outcome: Err(e.to_string()) },
    }
}

/// Verifies every spec of `dir`. Entries come back in path order whether or
/// not they ran concurrently; a failing spec only affects its own entry.
pub fn run_corpus(
    dir: &Path,
    options: VerifyOptions,
    parallel: bool,
) -> Result<Vec<CorpusEntry>, HarnessError> {
    let paths = spec_paths(dir)?;
    if paths.is_empty() {
        return Err(HarnessError::Spec(format!("no *.json specs in {}", dir.display())));
    }
    Ok(if parallel {
        paths.par_iter().map(|p| run_one(p, options)).collect()
    } else {
        paths.iter().map(|p| run_one(p, options)).collect()
    })
}
