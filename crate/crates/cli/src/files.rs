use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use vgsst_core::io::{instance_from_json, solution_from_json, SolutionFile};
use vgsst_core::Instance;

use crate::failure::{Classify, Kind, Outcome};

pub fn read_instance(path: &Path) -> Outcome<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .or_fail(Kind::Input)?;
    instance_from_json(&text)
        .with_context(|| format!("parsing instance {}", path.display()))
        .or_fail(Kind::Input)
}

pub fn read_solution(path: &Path) -> Outcome<SolutionFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .or_fail(Kind::Input)?;
    solution_from_json(&text)
        .with_context(|| format!("parsing solution {}", path.display()))
        .or_fail(Kind::Input)
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let write = || -> anyhow::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path)?;
        Ok(())
    };
    write()
        .with_context(|| format!("writing {}", path.display()))
        .or_fail(Kind::Input)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Outcome {
    match path {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
