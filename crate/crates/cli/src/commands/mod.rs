pub mod ber;
pub mod complexity;
pub mod dump;

use std::path::Path;

use crate::error::{CliError, CliResult};

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(&format!("creating {}", dir.display()), e))
}

/// Runs `f` on a rayon pool with exactly `threads` workers.
pub(crate) fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
