//! On-disk trace cache: an append-only file of fixed 24-byte records,
//! `curve_hash: u64 | p: u64 | ap: i64`, all little-endian.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::trace::satisfies_hasse;

pub const RECORD_LEN: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheEntry {
    pub curve_hash: u64,
    pub p: u64,
    pub ap: i64,
}

impl CacheEntry {
    pub fn to_bytes(self) -> [u8; RECORD_LEN] {
        let mut out = [0u8; RECORD_LEN];
        out[..8].copy_from_slice(&self.curve_hash.to_le_bytes());
        out[8..16].copy_from_slice(&self.p.to_le_bytes());
        out[16..].copy_from_slice(&self.ap.to_le_bytes());
        out
    }

    pub fn from_bytes(b: &[u8; RECORD_LEN]) -> Self {
        let word = |i: usize| -> [u8; 8] { b[i..i + 8].try_into().expect("8-byte slice") };
        CacheEntry {
            curve_hash: u64::from_le_bytes(word(0)),
            p: u64::from_le_bytes(word(8)),
            ap: i64::from_le_bytes(word(16)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheLoad {
    pub entries: Vec<CacheEntry>,
    /// Rows for this curve dropped by the Hasse gate.
    pub rejected: u64,
}

/// Entries for `curve_hash`. A missing file reads as empty; a file whose
/// length is not a whole number of records is an error.
pub fn cache_read(path: &Path, curve_hash: u64) -> std::io::Result<CacheLoad> {
    let mut bytes = Vec::new();
    match File::open(path) {
        Ok(mut f) => {
            f.read_to_end(&mut bytes)?;
        }
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(CacheLoad::default()),
        Err(e) => return Err(e),
    }
    if bytes.len() % RECORD_LEN != 0 {
        return Err(std::io::Error::new(
            ErrorKind::UnexpectedEof,
            format!(
                "{}: short record ({} trailing bytes)",
                path.display(),
                bytes.len() % RECORD_LEN
            ),
        ));
    }
    let mut load = CacheLoad::default();
    for chunk in bytes.chunks_exact(RECORD_LEN) {
        let e = CacheEntry::from_bytes(chunk.try_into().expect("exact chunk"));
        if e.curve_hash != curve_hash {
            continue;
        }
        if satisfies_hasse(e.p, e.ap) {
            load.entries.push(e);
        } else {
            load.rejected += 1;
        }
    }
    Ok(load)
}

/// Append `entries` to the file, creating it if needed.
pub fn cache_write(path: &Path, entries: &[CacheEntry]) -> std::io::Result<()> {
    let f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = BufWriter::new(f);
    for e in entries {
        w.write_all(&e.to_bytes())?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::label_hash;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_and_gate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traces.bin");
        let h = label_hash("11a3");
        assert_eq!(cache_read(&path, h).unwrap(), CacheLoad::default());

        let good = CacheEntry {
            curve_hash: h,
            p: 2,
            ap: -2,
        };
        cache_write(&path, &[good]).unwrap();
        assert_eq!(cache_read(&path, h).unwrap().entries, vec![good]);

        let corrupt = CacheEntry {
            curve_hash: h,
            p: 2,
            ap: 9,
        };
        let other = CacheEntry {
            curve_hash: h ^ 1,
            p: 3,
            ap: 1,
        };
        cache_write(&path, &[corrupt, other]).unwrap();
        let load = cache_read(&path, h).unwrap();
        assert_eq!(load.entries, vec![good]);
        assert_eq!(load.rejected, 1);
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 3 * RECORD_LEN as u64);
    }

    #[test]
    fn empty_and_truncated_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.bin");
        std::fs::write(&path, b"").unwrap();
        assert!(cache_read(&path, 0).unwrap().entries.is_empty());
        std::fs::write(&path, [0u8; 30]).unwrap();
        assert!(cache_read(&path, 0).is_err());
    }

    #[test]
    fn byte_layout() {
        let e = CacheEntry {
            curve_hash: 1,
            p: 2,
            ap: -1,
        };
        let b = e.to_bytes();
        assert_eq!(&b[..8], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&b[8..16], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&b[16..], &[0xff; 8]);
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(rows in proptest::collection::vec((1u64..1 << 40, -100i64..100), 0..50)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("c.bin");
            let entries: Vec<CacheEntry> = rows
                .into_iter()
                .filter(|&(p, ap)| satisfies_hasse(p, ap))
                .map(|(p, ap)| CacheEntry { curve_hash: 42, p, ap })
                .collect();
            cache_write(&path, &entries).unwrap();
            let load = cache_read(&path, 42).unwrap();
            prop_assert_eq!(load.entries, entries);
            prop_assert_eq!(load.rejected, 0);
        }
    }
}
