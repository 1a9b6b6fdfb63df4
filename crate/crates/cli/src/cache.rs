//! Content-addressed output cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "TORICSYZ_CACHE_DIR";

/// Cache directory: `--cache-dir` wins, then the environment variable. No
/// directory means no caching.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

pub fn key(canonical: &str) -> String {
    let mut h = Sha256::new();
    h.update(toricsyz_core::ENGINE_VERSION.as_bytes());
    h.update([0]);
    h.update(canonical.as_bytes());
    hex::encode(h.finalize())
}

pub fn load(dir: &Path, key: &str) -> Option<String> {
    fs::read_to_string(dir.join(format!("{key}.out"))).ok()
}

/// Write through a temporary file so concurrent readers never see a torn entry.
pub fn store(dir: &Path, key: &str, body: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(body.as_bytes())?;
    f.sync_all()?;
    fs::rename(tmp, dir.join(format!("{key}.out")))
}
