//! Component lattices built once per process and optionally persisted.
//!
//! On disk an entry lives in `<dir>/v<schema>/k<k>/<multidegree key>/` and
//! holds `basis.json` (echelon rows), `recipes.json` (row histories over the
//! generators) and `manifest.json`, which is written last. An entry whose
//! files fail validation is rebuilt and overwritten.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lattice::{prepare, Prepared, TComponentLattice};
use super::TidealError;
use crate::freering::MultiDegree;
use crate::intlattice::{BasisRow, EchelonBasis, MatrixFile};

/// Bumped whenever generator enumeration or the stored layout changes.
pub const GENERATOR_SCHEMA_VERSION: u32 = 1;

const MANIFEST: &str = "manifest.json";
const BASIS: &str = "basis.json";
const RECIPES: &str = "recipes.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub k: usize,
    pub multidegree: String,
    pub generator_count: usize,
    pub basis_size: usize,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub tool_version: String,
    pub schema_version: u32,
    pub rank: usize,
    pub pivots: Vec<u32>,
    pub versions: Vec<u32>,
    /// SHA-256 over the basis and recipe files.
    pub digest: String,
}

type Slot = Arc<OnceLock<Result<Arc<TComponentLattice>, TidealError>>>;

/// Shared source of component lattices. Each `(k, multidegree)` is built
/// by exactly one caller; concurrent callers for the same key wait for it.
#[derive(Debug)]
pub struct LatticeStore {
    degree_cap: u32,
    cache_dir: Option<PathBuf>,
    slots: Mutex<HashMap<(usize, MultiDegree), Slot>>,
}

impl LatticeStore {
    pub fn new(degree_cap: u32) -> LatticeStore {
        LatticeStore {
            degree_cap,
            cache_dir: None,
            slots: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache_dir(degree_cap: u32, dir: impl Into<PathBuf>) -> LatticeStore {
        LatticeStore {
            cache_dir: Some(dir.into()),
            ..LatticeStore::new(degree_cap)
        }
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn lattice(&self, k: usize, d: &MultiDegree) -> Result<Arc<TComponentLattice>, TidealError> {
        crate::basis::check_degree_cap(d, self.degree_cap)?;
        let slot = {
            let mut slots = self.slots.lock().expect("store lock");
            slots.entry((k, d.clone())).or_default().clone()
        };
        slot.get_or_init(|| self.load_or_build(k, d).map(Arc::new)).clone()
    }

    /// The lattice if this store has already built or loaded it.
    pub fn resident(&self, k: usize, d: &MultiDegree) -> Option<Arc<TComponentLattice>> {
        let slots = self.slots.lock().expect("store lock");
        slots.get(&(k, d.clone()))?.get()?.as_ref().ok().cloned()
    }

    /// Every lattice built or loaded so far, ordered by `k` then degree.
    pub fn resident_lattices(&self) -> Vec<Arc<TComponentLattice>> {
        let slots = self.slots.lock().expect("store lock");
        let mut keyed: Vec<_> = slots
            .iter()
            .filter_map(|(key, slot)| Some((key.clone(), slot.get()?.as_ref().ok()?.clone())))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.into_iter().map(|(_, l)| l).collect()
    }

    fn load_or_build(&self, k: usize, d: &MultiDegree) -> Result<TComponentLattice, TidealError> {
        let p = prepare(k, d, self.degree_cap)?;
        let Some(root) = &self.cache_dir else {
            let echelon = EchelonBasis::from_rows(p.basis.len(), &p.rows);
            return Ok(TComponentLattice::from_parts(p, echelon));
        };
        let dir = entry_dir(root, k, d);
        if let Some(echelon) = load_entry(&dir, &p) {
            return Ok(TComponentLattice::from_parts(p, echelon));
        }
        let echelon = EchelonBasis::from_rows(p.basis.len(), &p.rows);
        save_entry(&dir, &p, &echelon).map_err(|e| TidealError::Cache(e.to_string()))?;
        Ok(TComponentLattice::from_parts(p, echelon))
    }
}

pub fn entry_dir(root: &Path, k: usize, d: &MultiDegree) -> PathBuf {
    root.join(format!("v{GENERATOR_SCHEMA_VERSION}"))
        .join(format!("k{k}"))
        .join(d.key())
}

fn content_digest(basis: &[u8], recipes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(basis);
    h.update(recipes);
    hex::encode(h.finalize())
}

fn load_entry(dir: &Path, p: &Prepared) -> Option<EchelonBasis> {
    let manifest: Manifest = serde_json::from_slice(&std::fs::read(dir.join(MANIFEST)).ok()?).ok()?;
    let basis_bytes = std::fs::read(dir.join(BASIS)).ok()?;
    let recipe_bytes = std::fs::read(dir.join(RECIPES)).ok()?;
    if manifest.schema_version != GENERATOR_SCHEMA_VERSION
        || manifest.k != p.k
        || manifest.multidegree != p.basis.degree().to_string()
        || manifest.generator_count != p.generators.len()
        || manifest.basis_size != p.basis.len()
        || manifest.digest != content_digest(&basis_bytes, &recipe_bytes)
    {
        return None;
    }
    let basis: MatrixFile = serde_json::from_slice(&basis_bytes).ok()?;
    let recipes: MatrixFile = serde_json::from_slice(&recipe_bytes).ok()?;
    if basis.columns != p.basis.len() || recipes.columns != p.generators.len() + recipes.rows.len() {
        return None;
    }
    let vectors = basis.to_rows().ok()?;
    if vectors.len() != manifest.rank || manifest.pivots.len() != manifest.rank || manifest.versions.len() != manifest.rank {
        return None;
    }
    let rows = vectors
        .into_iter()
        .zip(manifest.pivots.iter().zip(&manifest.versions))
        .map(|(vector, (&pivot, &version))| BasisRow { vector, pivot, version })
        .collect();
    EchelonBasis::from_parts(p.basis.len(), p.generators.len(), rows, recipes.to_rows().ok()?)
}

fn save_entry(dir: &Path, p: &Prepared, e: &EchelonBasis) -> Result<(), crate::intlattice::CacheError> {
    let basis = serde_json::to_vec(&MatrixFile::from_rows(e.columns(), e.rows().iter().map(|r| &r.vector)))
        .expect("serializable");
    let recipes = serde_json::to_vec(&MatrixFile::from_rows(e.generator_count() + e.history().len(), e.history()))
        .expect("serializable");
    let manifest = Manifest {
        k: p.k,
        multidegree: p.basis.degree().to_string(),
        generator_count: p.generators.len(),
        basis_size: p.basis.len(),
        created: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |t| t.as_secs()),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: GENERATOR_SCHEMA_VERSION,
        rank: e.rank(),
        pivots: e.rows().iter().map(|r| r.pivot).collect(),
        versions: e.rows().iter().map(|r| r.version).collect(),
        digest: content_digest(&basis, &recipes),
    };
    use crate::intlattice::write_atomic;
    write_atomic(&dir.join(BASIS), &basis)?;
    write_atomic(&dir.join(RECIPES), &recipes)?;
    write_atomic(
        &dir.join(MANIFEST),
        serde_json::to_string_pretty(&manifest).expect("serializable").as_bytes(),
    )
}

/// One persisted entry, as found on disk.
#[derive(Clone, Debug, Serialize)]
pub struct CacheEntry {
    pub path: String,
    pub bytes: u64,
    pub manifest: Manifest,
}

/// Entries with a readable manifest, in path order.
pub fn list_cache(root: &Path) -> std::io::Result<Vec<CacheEntry>> {
    let mut out = Vec::new();
    if !root.exists() {
        return Ok(out);
    }
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for item in std::fs::read_dir(&dir)? {
            let path = item?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().map_or(false, |n| n == MANIFEST) {
                let Ok(text) = std::fs::read(&path) else { continue };
                let Ok(manifest) = serde_json::from_slice::<Manifest>(&text) else { continue };
                let entry_dir = path.parent().expect("manifest has a parent");
                let mut bytes = 0;
                for f in std::fs::read_dir(entry_dir)? {
                    bytes += f?.metadata()?.len();
                }
                out.push(CacheEntry {
                    path: entry_dir.display().to_string(),
                    bytes,
                    manifest,
                });
            }
        }
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

/// Removes every schema directory under `root`; returns the entry count.
pub fn clear_cache(root: &Path) -> std::io::Result<usize> {
    let n = list_cache(root)?.len();
    if root.exists() {
        for item in std::fs::read_dir(root)? {
            let path = item?.path();
            let is_schema_dir = path
                .file_name()
                .and_then(|n| n.to_str())
                .map_or(false, |n| n.starts_with('v') && n[1..].chars().all(|c| c.is_ascii_digit()));
            if path.is_dir() && is_schema_dir {
                std::fs::remove_dir_all(&path)?;
            }
        }
    }
    Ok(n)
}
