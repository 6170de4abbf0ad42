use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::dataset::{Dataset, SourceFile, SourceInfo};
use crate::data::record::{parse_allcurves_filtered, CurveRecord};
use crate::error::{Error, Result};

pub const DEFAULT_BASE_URL: &str = "https://raw.githubusercontent.com/JohnCremona/ecdata/master/allcurves";
pub const DATA_DIR_ENV: &str = "MCHABAUTY_DATA_DIR";
pub const BLOCK_SIZE: u64 = 10_000;
const MANIFEST: &str = "manifest.json";
const MAX_FILE_BYTES: u64 = 1 << 30;

/// A published file covering conductors `first ..= last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub first: u64,
    pub last: u64,
}

impl Block {
    pub fn containing(n: u64) -> Block {
        let first = n / BLOCK_SIZE * BLOCK_SIZE;
        Block {
            first,
            last: first + BLOCK_SIZE - 1,
        }
    }

    pub fn file_name(&self) -> String {
        format!("allcurves.{:05}-{:05}", self.first, self.last)
    }
}

/// The blocks needed to cover `range`.
pub fn blocks_for(range: &RangeInclusive<u64>) -> Vec<Block> {
    let mut out = Vec::new();
    if range.is_empty() {
        return out;
    }
    let mut b = Block::containing(*range.start());
    loop {
        out.push(b);
        if b.last >= *range.end() {
            return out;
        }
        b = Block::containing(b.last + 1);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub first: u64,
    pub last: u64,
    pub sha256: String,
    pub bytes: u64,
}

/// Digests recorded the first time each file entered the cache.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub base_url: String,
    pub files: BTreeMap<String, ManifestEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Manifest> {
        let path = dir.join(MANIFEST);
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| Error::Manifest {
                path,
                reason: e.to_string(),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest::default()),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        write_atomic(&dir.join(MANIFEST), &bytes)
    }

    /// Largest `n` such that the cache holds every block of conductors `0 ..= n`.
    pub fn contiguous_coverage(&self) -> Option<u64> {
        let mut covered = None;
        let mut b = Block::containing(0);
        while self.files.contains_key(&b.file_name()) {
            covered = Some(b.last);
            b = Block::containing(b.last + 1);
        }
        covered
    }
}

/// The cache directory: explicit choice, then `MCHABAUTY_DATA_DIR`, then a
/// per-user default.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("mchabauty")
}

/// Writes to a temporary sibling and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("file");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn download(url: &str) -> Result<Vec<u8>> {
    let net = |reason: String| Error::Network {
        url: url.to_string(),
        reason,
    };
    let mut response = ureq::get(url).call().map_err(|e| net(e.to_string()))?;
    response
        .body_mut()
        .with_config()
        .limit(MAX_FILE_BYTES)
        .read_to_vec()
        .map_err(|e| net(e.to_string()))
}

fn read_verified(dir: &Path, name: &str, entry: &ManifestEntry) -> Result<Vec<u8>> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    if sha256_hex(&bytes) != entry.sha256 {
        return Err(Error::DigestMismatch { file: path });
    }
    Ok(bytes)
}

fn join_url(base: &str, name: &str) -> String {
    format!("{}/{}", base.trim_end_matches('/'), name)
}

/// Ensures the cache holds verified copies of every block covering `range`,
/// downloading missing ones unless `offline`.
pub fn sync_cache(base_url: &str, range: &RangeInclusive<u64>, cache_dir: &Path, offline: bool) -> Result<Manifest> {
    fs::create_dir_all(cache_dir).map_err(|e| Error::io(cache_dir, e))?;
    let mut manifest = Manifest::load(cache_dir)?;
    if manifest.base_url.is_empty() {
        manifest.base_url = base_url.to_string();
    }
    let mut covered = range.start().saturating_sub(1);
    for block in blocks_for(range) {
        let name = block.file_name();
        let path = cache_dir.join(&name);
        if let Some(entry) = manifest.files.get(&name) {
            read_verified(cache_dir, &name, entry)?;
        } else if path.exists() {
            // present but never recorded: trust on first use
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            manifest.files.insert(name.clone(), entry_for(block, &bytes));
        } else if offline {
            return Err(Error::PartialCoverage {
                covered,
                requested: *range.end(),
            });
        } else {
            let bytes = download(&join_url(base_url, &name))?;
            write_atomic(&path, &bytes)?;
            manifest.files.insert(name.clone(), entry_for(block, &bytes));
            manifest.save(cache_dir)?;
        }
        covered = block.last.min(*range.end());
    }
    manifest.save(cache_dir)?;
    Ok(manifest)
}

fn entry_for(block: Block, bytes: &[u8]) -> ManifestEntry {
    ManifestEntry {
        first: block.first,
        last: block.last,
        sha256: sha256_hex(bytes),
        bytes: bytes.len() as u64,
    }
}

/// Loads the cached blocks covering `range`, keeping records whose conductor is
/// in range and passes `keep`.
pub fn load_cached(
    cache_dir: &Path,
    manifest: &Manifest,
    range: &RangeInclusive<u64>,
    keep: impl Fn(u64) -> bool + Sync,
) -> Result<Dataset> {
    let mut records: Vec<CurveRecord> = Vec::new();
    let mut files = Vec::new();
    for block in blocks_for(range) {
        let name = block.file_name();
        let entry = manifest.files.get(&name).ok_or(Error::PartialCoverage {
            covered: block.first.saturating_sub(1),
            requested: *range.end(),
        })?;
        let bytes = read_verified(cache_dir, &name, entry)?;
        let parsed = parse_allcurves_filtered(BufReader::new(bytes.as_slice()), |n| range.contains(&n) && keep(n))
            .map_err(|e| match e {
                Error::Parse { line, text, reason } => Error::Parse {
                    line,
                    text,
                    reason: format!("{name}: {reason}"),
                },
                other => other,
            })?;
        records.extend(parsed);
        files.push(SourceFile {
            name,
            first: block.first,
            last: block.last,
            sha256: entry.sha256.clone(),
        });
    }
    let source = SourceInfo {
        origin: manifest.base_url.clone(),
        files,
    };
    Dataset::new(records, *range.start(), *range.end(), source)
}

/// Downloads (or reuses) the tables covering `range` and loads them.
pub fn fetch_tables(base_url: &str, range: RangeInclusive<u64>, cache_dir: &Path, offline: bool) -> Result<Dataset> {
    let manifest = sync_cache(base_url, &range, cache_dir, offline)?;
    load_cached(cache_dir, &manifest, &range, |_| true)
}

/// Dataset over the largest contiguous cached range starting at conductor 0,
/// capped at `limit`; `None` when the cache is empty.
pub fn load_cache_prefix(cache_dir: &Path, limit: u64, keep: impl Fn(u64) -> bool + Sync) -> Result<Option<Dataset>> {
    let manifest = Manifest::load(cache_dir)?;
    let Some(covered) = manifest.contiguous_coverage() else {
        return Ok(None);
    };
    let range = 0..=covered.min(limit);
    load_cached(cache_dir, &manifest, &range, keep).map(Some)
}

/// The bundled table for conductors up to 1000.
pub const BUNDLED_MAX_CONDUCTOR: u64 = 1000;
const BUNDLED: &str = include_str!("../../data/allcurves.00000-01000");

pub fn bundled_dataset() -> Result<Dataset> {
    let records = parse_allcurves_filtered(BUNDLED.as_bytes(), |_| true)?;
    let source = SourceInfo {
        origin: "bundled".into(),
        files: vec![SourceFile {
            name: "allcurves.00000-01000".into(),
            first: 0,
            last: BUNDLED_MAX_CONDUCTOR,
            sha256: sha256_hex(BUNDLED.as_bytes()),
        }],
    };
    Dataset::new(records, 0, BUNDLED_MAX_CONDUCTOR, source)
}

/// Where tables come from: the bundled fixture, a local cache and a mirror.
#[derive(Debug, Clone)]
pub struct TableSource {
    pub cache_dir: PathBuf,
    pub base_url: String,
    pub offline: bool,
}

impl TableSource {
    pub fn new(cache_dir: PathBuf, base_url: impl Into<String>, offline: bool) -> Self {
        TableSource {
            cache_dir,
            base_url: base_url.into(),
            offline,
        }
    }

    /// A dataset complete up to conductor `bound`, keeping conductors that pass
    /// `keep`. Uses the fixture when it suffices, then the cache, then downloads
    /// unless offline.
    pub fn covering(&self, bound: u64, keep: impl Fn(u64) -> bool + Sync) -> Result<Dataset> {
        if bound <= BUNDLED_MAX_CONDUCTOR {
            return bundled_dataset();
        }
        let range = 0..=bound;
        let manifest = sync_cache(&self.base_url, &range, &self.cache_dir, self.offline)?;
        load_cached(&self.cache_dir, &manifest, &range, keep)
    }

    /// The widest table available without network access.
    pub fn best_offline(&self, keep: impl Fn(u64) -> bool + Sync) -> Result<Dataset> {
        match load_cache_prefix(&self.cache_dir, u64::MAX, keep)? {
            Some(d) if d.max_conductor() > BUNDLED_MAX_CONDUCTOR => Ok(d),
            _ => bundled_dataset(),
        }
    }
}
