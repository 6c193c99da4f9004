//! Shared computation context: degree cap, STU convention and the stratum cache.

use std::any::Any;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::quotient::{Quotient, StratumKey};
use super::relations::StuSign;

/// Degrees above this are refused unless a larger cap is configured explicitly.
pub const DEFAULT_MAX_DEGREE: usize = 8;

/// Bumped whenever enumeration, canonical form or relations change meaning.
pub const CODE_VERSION: u32 = 2;

pub const CACHE_ENV: &str = "WHEELING_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub max_degree: usize,
    pub stu: StuSign,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_degree: DEFAULT_MAX_DEGREE,
            stu: StuSign::default(),
            cache_dir: None,
        }
    }
}

impl EngineConfig {
    pub fn from_env() -> Self {
        EngineConfig {
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            ..Default::default()
        }
    }
}

#[derive(Default)]
pub struct Engine {
    config: EngineConfig,
    strata: Mutex<HashMap<StratumKey, Arc<Quotient>>>,
    memo: Mutex<HashMap<String, Arc<dyn Any + Send + Sync>>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    stu: i8,
    quotient: Quotient,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Engine {
            config,
            strata: Mutex::new(HashMap::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn stu(&self) -> StuSign {
        self.config.stu
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.config.max_degree {
            return Err(Error::Capacity {
                degree,
                max: self.config.max_degree,
            });
        }
        Ok(())
    }

    pub fn cached_strata(&self) -> usize {
        self.strata.lock().unwrap().len()
    }

    pub fn quotient(&self, key: &StratumKey) -> Result<Arc<Quotient>> {
        self.check_degree(key.degree)?;
        if let Some(q) = self.strata.lock().unwrap().get(key) {
            return Ok(q.clone());
        }
        let q = match self.load(key)? {
            Some(q) => q,
            None => {
                let q = Quotient::build(key.clone(), self.config.stu)?;
                self.store(&q)?;
                q
            }
        };
        let q = Arc::new(q);
        Ok(self
            .strata
            .lock()
            .unwrap()
            .entry(key.clone())
            .or_insert(q)
            .clone())
    }

    /// Memoized derived table, computed at most once per key and engine.
    pub fn memo<T: Any + Send + Sync>(
        &self,
        key: String,
        make: impl FnOnce() -> Result<T>,
    ) -> Result<Arc<T>> {
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            if let Ok(t) = v.clone().downcast::<T>() {
                return Ok(t);
            }
        }
        let t: Arc<T> = Arc::new(make()?);
        self.memo.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    fn path_for(&self, dir: &Path, key: &StratumKey) -> PathBuf {
        let mut name = format!("s{}-", CODE_VERSION);
        for ch in key.signature.to_string().chars() {
            match ch {
                '*' => name.push('A'),
                '@' => name.push('C'),
                ':' => name.push('-'),
                ',' => name.push('_'),
                c if c.is_ascii_alphanumeric() => name.push(c),
                c => name.push_str(&format!("u{:x}", c as u32)),
            }
        }
        name.push_str(&format!("-d{}-{:?}", key.degree, key.filter));
        if let Some(l) = &key.legs {
            name.push_str("-l");
            for x in l {
                name.push_str(&format!("{x}."));
            }
        }
        name.push_str(&format!("-stu{}.json", self.config.stu.0));
        dir.join(name)
    }

    fn load(&self, key: &StratumKey) -> Result<Option<Quotient>> {
        let Some(dir) = &self.config.cache_dir else {
            return Ok(None);
        };
        let path = self.path_for(dir, key);
        let Ok(bytes) = std::fs::read(&path) else {
            return Ok(None);
        };
        let file: CacheFile = match serde_json::from_slice(&bytes) {
            Ok(f) => f,
            Err(_) => return Ok(None),
        };
        if file.version != CODE_VERSION
            || file.stu != self.config.stu.0
            || &file.quotient.key != key
        {
            return Ok(None);
        }
        let mut q = file.quotient;
        q.reindex();
        Ok(Some(q))
    }

    fn store(&self, q: &Quotient) -> Result<()> {
        let Some(dir) = &self.config.cache_dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        let path = self.path_for(dir, &q.key);
        let file = CacheFile {
            version: CODE_VERSION,
            stu: self.config.stu.0,
            quotient: q.clone(),
        };
        let bytes = serde_json::to_vec(&file).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}
