//! On-disk Gröbner basis cache.
//!
//! One JSON file per request, named by the SHA-256 of the canonical request
//! text. Each file repeats the request text and carries a digest of its
//! content; any mismatch or unreadable file is reported once and bypassed.
//! Loaded bases are additionally re-validated by the engine before use.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use perftower::groebner::BasisStore;
use perftower::Polynomial;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "PERFTOWER_CACHE";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    basis: Vec<Polynomial>,
    digest: String,
}

pub struct DiskCache {
    dir: PathBuf,
    warnings: AtomicUsize,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(key: &str, basis: &[Polynomial]) -> String {
    let body = serde_json::to_string(basis).expect("polynomials serialize");
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.update([0]);
    h.update(body.as_bytes());
    hex(&h.finalize())
}

impl DiskCache {
    /// `$PERFTOWER_CACHE`, else the user cache directory, else the temp directory.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return PathBuf::from(d).join("perftower");
        }
        if let Some(h) = std::env::var_os("HOME") {
            return PathBuf::from(h).join(".cache").join("perftower");
        }
        std::env::temp_dir().join("perftower-cache")
    }

    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(DiskCache { dir: dir.to_path_buf(), warnings: AtomicUsize::new(0) })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", hex(&Sha256::digest(key.as_bytes()))))
    }

    fn warn(&self, path: &Path, why: &str) {
        if self.warnings.fetch_add(1, Ordering::Relaxed) < 8 {
            eprintln!("warning: ignoring corrupted cache entry {}: {why}", path.display());
        }
    }

    #[cfg(test)]
    fn warnings(&self) -> usize {
        self.warnings.load(Ordering::Relaxed)
    }
}

impl BasisStore for DiskCache {
    fn load(&self, key: &str) -> Option<Vec<Polynomial>> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        let entry: Entry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                self.warn(&path, &e.to_string());
                return None;
            }
        };
        if entry.key != key {
            self.warn(&path, "request mismatch");
            return None;
        }
        if entry.digest != digest(key, &entry.basis) {
            self.warn(&path, "digest mismatch");
            return None;
        }
        Some(entry.basis)
    }

    fn save(&self, key: &str, basis: &[Polynomial]) {
        let entry = Entry { key: key.to_string(), basis: basis.to_vec(), digest: digest(key, basis) };
        let path = self.path(key);
        // Write-then-rename keeps concurrent readers from seeing partial files.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let ok = fs::File::create(&tmp)
            .and_then(|mut f| f.write_all(serde_json::to_string(&entry).expect("entry serializes").as_bytes()))
            .and_then(|_| fs::rename(&tmp, &path));
        if ok.is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::open(dir.path()).unwrap();
        let ring = perftower::PolyRing::new(perftower::CoefficientRing::Integers, vec!["x".into()]).unwrap();
        let basis = vec![ring.parse("x^2 - 2").unwrap()];
        cache.save("k", &basis);
        assert_eq!(cache.load("k"), Some(basis.clone()));
        assert_eq!(cache.load("other"), None);

        let path = cache.path("k");
        let tampered = fs::read_to_string(&path).unwrap().replace("\"digest\":\"", "\"digest\":\"0");
        fs::write(&path, tampered).unwrap();
        assert_eq!(cache.load("k"), None);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.load("k"), None);
        assert_eq!(cache.warnings(), 2);
    }
}
