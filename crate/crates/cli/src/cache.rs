//! On-disk triangle cache.
//!
//! One JSON file per `(n_max, order)`, entries as decimal strings keyed
//! `"n,k"`. A loaded triangle is trusted only after its shape, every row
//! sum and its first column agree with Bell numbers computed afresh by the
//! fixed-element recurrence; anything else is recomputed and rewritten.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hyperbell::exact::Nat;
use hyperbell::triangles::{bell_table_fixed_element, global_cache, Triangle};
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const FORMAT: &str = "hyperbell-stirling-triangle";
pub const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    n_max: usize,
    order: usize,
    entries: Map<String, Value>,
}

/// Why a cached file was not used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Missing,
    Unreadable(String),
    WrongVersion,
    WrongKey,
    BadEntry(String),
    FailedValidation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadOutcome {
    Hit,
    Recomputed(Rejection),
}

pub fn file_path(dir: &Path, n_max: usize, m: usize) -> PathBuf {
    dir.join(format!("stirling-n{n_max}-m{m}.json"))
}

pub fn store(dir: &Path, t: &Triangle) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut entries = Map::new();
    for n in 1..=t.n_max() {
        for k in 1..=n {
            entries.insert(format!("{n},{k}"), Value::String(t.get(n, k).to_string()));
        }
    }
    let file = CacheFile {
        format: FORMAT.into(),
        version: VERSION,
        n_max: t.n_max(),
        order: t.order(),
        entries,
    };
    let path = file_path(dir, t.n_max(), t.order());
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(&file)? + "\n")?;
    fs::rename(tmp, path)
}

/// Reads and validates a cached triangle without touching the memo.
pub fn load(dir: &Path, n_max: usize, m: usize) -> Result<Triangle, Rejection> {
    let path = file_path(dir, n_max, m);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(Rejection::Missing),
        Err(e) => return Err(Rejection::Unreadable(e.to_string())),
    };
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| Rejection::Unreadable(e.to_string()))?;
    if file.format != FORMAT || file.version != VERSION {
        return Err(Rejection::WrongVersion);
    }
    if file.n_max != n_max || file.order != m {
        return Err(Rejection::WrongKey);
    }
    if file.entries.len() != n_max * (n_max + 1) / 2 {
        return Err(Rejection::BadEntry("wrong number of entries".into()));
    }
    let mut rows = vec![vec![Nat::one()]];
    for n in 1..=n_max {
        let mut row = vec![Nat::default()];
        for k in 1..=n {
            let key = format!("{n},{k}");
            let value = file
                .entries
                .get(&key)
                .and_then(Value::as_str)
                .filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|s| s.parse::<Nat>().ok())
                .ok_or_else(|| Rejection::BadEntry(key.clone()))?;
            row.push(value);
        }
        rows.push(row);
    }
    let t = Triangle::from_rows(m, rows).map_err(|e| Rejection::FailedValidation(e.to_string()))?;
    validate(&t)?;
    Ok(t)
}

fn validate(t: &Triangle) -> Result<(), Rejection> {
    let m = t.order();
    if m == 0 {
        return if *t == Triangle::identity(t.n_max()) {
            Ok(())
        } else {
            Err(Rejection::FailedValidation("order 0 must be the identity".into()))
        };
    }
    let bells = bell_table_fixed_element(t.n_max(), m);
    let prev = bell_table_fixed_element(t.n_max(), m - 1);
    for n in 1..=t.n_max() {
        if t.row_sum(n) != bells.values[n] {
            return Err(Rejection::FailedValidation(format!("row {n} sum")));
        }
        if t.get(n, 1) != prev.values[n] {
            return Err(Rejection::FailedValidation(format!("entry ({n},1)")));
        }
    }
    Ok(())
}

/// `S^(m)` over `0..=n_max`: from disk when a valid file exists, otherwise
/// computed and written back. Either way the result lands in the memo.
pub fn load_or_compute(dir: &Path, n_max: usize, m: usize) -> io::Result<(Arc<Triangle>, LoadOutcome)> {
    match load(dir, n_max, m) {
        Ok(t) => Ok((global_cache().insert(t), LoadOutcome::Hit)),
        Err(why) => {
            let t = global_cache().get(n_max, m);
            store(dir, &t)?;
            Ok((t, LoadOutcome::Recomputed(why)))
        }
    }
}
