//! Optional on-disk persistence of the recursion tables.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;
use crate::genseries::{Mbar0Table, TdnTable};
use crate::motive::MotClass;

/// Name of the environment variable holding the cache directory.
pub const CACHE_ENV: &str = "F1KIT_CACHE_DIR";

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn in_memory() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: Some(dir.into()),
        }
    }

    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(d),
            _ => Cache::in_memory(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn load<T: DeserializeOwned>(&self, name: &str) -> Option<T> {
        let path = self.dir.as_ref()?.join(name);
        let bytes = fs::read(path).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    // Best effort: an unwritable cache only costs recomputation.
    fn store<T: Serialize>(&self, name: &str, value: &T) {
        let Some(dir) = &self.dir else { return };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let Ok(bytes) = serde_json::to_vec(value) else {
            return;
        };
        let tmp = dir.join(format!("{name}.tmp{}", std::process::id()));
        if fs::write(&tmp, bytes).is_ok() && fs::rename(&tmp, dir.join(name)).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    /// `[M̄_{0,n}]`, reusing and extending the stored table.
    pub fn mbar0_class(&self, n: i64) -> Result<MotClass> {
        let name = "mbar0.json";
        let mut table = self
            .load::<Mbar0Table>(name)
            .and_then(|t| Mbar0Table::from_values(t.values().to_vec()).ok())
            .unwrap_or_default();
        let before = table.values().len();
        let c = table.get(n)?;
        if table.values().len() > before {
            self.store(name, &table);
        }
        Ok(c)
    }

    /// `[T_{d,n}]`, reusing and extending the stored table for `d`.
    pub fn tdn_class(&self, d: i64, n: i64) -> Result<MotClass> {
        let name = format!("tdn_d{d}.json");
        let fresh = TdnTable::new(d)?;
        let mut table = self
            .load::<TdnTable>(&name)
            .and_then(|t| TdnTable::from_values(d, t.values().to_vec()).ok())
            .unwrap_or(fresh);
        let before = table.values().len();
        let c = table.get(n)?;
        if table.values().len() > before {
            self.store(&name, &table);
        }
        Ok(c)
    }
}
