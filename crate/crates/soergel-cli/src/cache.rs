//! Content-addressed on-disk cache of minimal braid complexes.
//!
//! One JSON file per complex, named by the SHA-256 of the key. Writes go to
//! a temporary file in the same directory and are renamed into place, so
//! concurrent invocations never observe a half-written entry.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use soergel::braid::BraidWord;
use soergel::complexes::ChainComplex;
use soergel::homology::NORMALIZATION;

/// Bumped whenever the on-disk layout or the meaning of a cached complex
/// changes.
pub const FORMAT_VERSION: u32 = 1;

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// `$SOERGEL_CACHE`, else `$XDG_CACHE_HOME/soergel`, else
    /// `$HOME/.cache/soergel`. With none of them set the cache is off.
    pub fn from_env() -> Cache {
        let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = env("SOERGEL_CACHE")
            .or_else(|| env("XDG_CACHE_HOME").map(|d| d.join("soergel")))
            .or_else(|| env("HOME").map(|d| d.join(".cache").join("soergel")));
        Cache { dir }
    }

    pub fn key(b: &BraidWord, m: u8) -> String {
        let (a, q) = NORMALIZATION;
        let text = format!("v{FORMAT_VERSION}|norm {a} {q}|m {m}|{b}");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(&key[..2]).join(format!("{key}.json")))
    }

    /// The minimal complex of `b`, from disk when present.
    pub fn braid_complex(&self, b: &BraidWord, m: u8) -> soergel::Result<ChainComplex> {
        let key = Cache::key(b, m);
        if let Some(p) = self.path(&key) {
            if let Ok(text) = fs::read_to_string(&p) {
                // A corrupt entry is recomputed and overwritten.
                if let Ok(c) = ChainComplex::from_json(&text) {
                    if c.m == m {
                        return Ok(c);
                    }
                }
            }
        }
        let c = ChainComplex::rouquier_braid(m, b, true);
        c.check()?;
        if let Some(p) = self.path(&key) {
            // The cache is an optimization; failing to write it is not an error.
            let _ = store(&p, &c.to_json());
        }
        Ok(c)
    }
}

fn store(path: &PathBuf, text: &str) -> std::io::Result<()> {
    let dir = path.parent().expect("entries live in a subdirectory");
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", std::process::id(), unique()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn unique() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static N: AtomicU64 = AtomicU64::new(0);
    N.fetch_add(1, Ordering::Relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_separate_m_and_words() {
        let b = BraidWord::parse("s t").unwrap();
        assert_ne!(Cache::key(&b, 3), Cache::key(&b, 4));
        assert_ne!(Cache::key(&b, 3), Cache::key(&BraidWord::parse("t s").unwrap(), 3));
        assert_eq!(Cache::key(&b, 3), Cache::key(&BraidWord::parse("1 2").unwrap(), 3));
        assert_eq!(Cache::key(&b, 3).len(), 64);
    }
}
