use std::io::{self, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::CliError;

/// Writes `text` to `path` through a temporary file in the same directory,
/// so the destination either keeps its old contents or gets the new ones.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: io::Error| CliError::Config(format!("writing {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("writing to standard output: {e}")))
        }
    }
}
