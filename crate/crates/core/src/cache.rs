//! Persistent cache of computed basis vectors.
//!
//! Newline-delimited JSON: a versioned header line, then one record per
//! vector of the form
//!
//! ```text
//! {"k":4,"l":5,"mode":"fast","mu":[20,10],"g":[{"la":[20,10],"p":{"0":1}},...]}
//! ```
//!
//! Loaded entries are only trusted after the basis invariants are
//! re-validated by the session that imports them. Appends are one complete
//! line per record in append mode, so concurrent writers interleave at
//! record granularity.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::fock::FockVectorOf;
use crate::laurent::{Coeff, LaurentPolyOf};
use crate::partition::{Context, Partition};
use crate::{Error, Result};

const FORMAT_NAME: &str = "cbt-gcb-cache";
const FORMAT_VERSION: u64 = 1;

/// Identifies which session a record belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub k: usize,
    pub l: u32,
    pub mode: String,
}

/// Append-mode handle on a cache file.
pub struct Cache {
    path: PathBuf,
    writer: File,
}

impl Cache {
    /// Open (or create) a cache file, writing the header if the file is new.
    pub fn open(path: &Path) -> Result<Self> {
        let exists = path.exists()
            && std::fs::metadata(path)
                .map(|m| m.len() > 0)
                .unwrap_or(false);
        if exists {
            let file = File::open(path).map_err(io_err)?;
            let mut first = String::new();
            BufReader::new(file).read_line(&mut first).map_err(io_err)?;
            check_header(&first)?;
        }
        let mut writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err)?;
        if !exists {
            let header = json!({ "format": FORMAT_NAME, "version": FORMAT_VERSION });
            writeln!(writer, "{header}").map_err(io_err)?;
        }
        Ok(Cache {
            path: path.to_path_buf(),
            writer,
        })
    }

    /// Read all records for the given session key.
    pub fn load<C: Coeff>(
        &self,
        key: &CacheKey,
        ctx: Context,
    ) -> Result<Vec<(Partition, FockVectorOf<C>)>> {
        let file = File::open(&self.path).map_err(io_err)?;
        let mut out = Vec::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            if idx == 0 {
                check_header(&line)?;
                continue;
            }
            let record: Value = serde_json::from_str(&line)
                .map_err(|e| Error::Cache(format!("line {}: {e}", idx + 1)))?;
            if record["k"].as_u64() != Some(key.k as u64)
                || record["l"].as_u64() != Some(key.l as u64)
                || record["mode"].as_str() != Some(key.mode.as_str())
            {
                continue;
            }
            let mu = partition_from_json(&record["mu"])?;
            let entries = record["g"]
                .as_array()
                .ok_or_else(|| Error::Cache("record field g must be an array".into()))?;
            let mut g = FockVectorOf::zero(ctx);
            for entry in entries {
                let la = partition_from_json(&entry["la"])?;
                let p = LaurentPolyOf::from_json(&entry["p"])?;
                ctx.admits(&la).map_err(|_| {
                    Error::Cache(format!("cached diagram {la} exceeds k = {}", ctx.k()))
                })?;
                g.add_to(la, &p);
            }
            out.push((mu, g));
        }
        Ok(out)
    }

    /// Append one record.
    pub fn append<C: Coeff>(
        &mut self,
        key: &CacheKey,
        mu: &Partition,
        g: &FockVectorOf<C>,
    ) -> Result<()> {
        let record = json!({
            "k": key.k,
            "l": key.l,
            "mode": key.mode,
            "mu": partition_to_json(mu),
            "g": g.entries()
                .map(|(la, p)| json!({ "la": partition_to_json(la), "p": p.to_json() }))
                .collect::<Vec<_>>(),
        });
        writeln!(self.writer, "{record}").map_err(io_err)
    }
}

pub fn partition_to_json(p: &Partition) -> Value {
    Value::Array(p.parts().iter().map(|&x| Value::from(x)).collect())
}

pub fn partition_from_json(v: &Value) -> Result<Partition> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Cache(format!("partition must be a JSON array, got {v}")))?;
    let mut parts = Vec::with_capacity(arr.len());
    for x in arr {
        let n = x
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| Error::Cache(format!("bad partition entry {x}")))?;
        parts.push(n);
    }
    if !parts.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::Cache(format!(
            "partition not weakly decreasing: {v}"
        )));
    }
    Ok(Partition::new(parts))
}

fn check_header(line: &str) -> Result<()> {
    let header: Value = serde_json::from_str(line.trim())
        .map_err(|_| Error::Cache("missing or malformed cache header".into()))?;
    if header["format"].as_str() != Some(FORMAT_NAME) {
        return Err(Error::Cache("not a cbt cache file".into()));
    }
    if header["version"].as_u64() != Some(FORMAT_VERSION) {
        return Err(Error::Cache(format!(
            "unsupported cache version {}",
            header["version"]
        )));
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{Mode, SessionOf};
    use crate::Session;

    #[test]
    fn round_trip_through_file() {
        let dir = std::env::temp_dir().join(format!("cbt-cache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.jsonl");
        let _ = std::fs::remove_file(&path);

        let ctx = Context::new(2, 2).unwrap();
        let mu: Partition = "4".parse().unwrap();
        let cold_g = {
            let mut s: Session = SessionOf::with_cache(ctx, Mode::Fast, &path).unwrap();
            let g = s.gcb(&mu).unwrap();
            assert!(s.computed_count() > 0);
            (*g).clone()
        };

        let mut warm: Session = SessionOf::with_cache(ctx, Mode::Fast, &path).unwrap();
        let g = warm.gcb(&mu).unwrap();
        assert_eq!(*g, cold_g);
        assert_eq!(warm.computed_count(), 0, "warm run recomputes nothing");

        // A different mode ignores those records.
        let mut llt: Session = SessionOf::with_cache(ctx, Mode::Llt, &path).unwrap();
        llt.gcb(&mu).unwrap();
        assert!(llt.computed_count() > 0);

        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn rejects_foreign_files() {
        let dir = std::env::temp_dir().join(format!("cbt-cache-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.jsonl");
        std::fs::write(&path, "not json\n").unwrap();
        assert!(matches!(Cache::open(&path), Err(Error::Cache(_))));
        let _ = std::fs::remove_file(&path);
    }
}
