//! On-disk cache of quadrature rules as CSV (`x1,...,xn,weight` per row).
//!
//! The cache directory comes from `HYPERBALL_CACHE_DIR`; files are keyed by
//! dimension, orders and margin.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{ball_rule, sphere_rule, BallRule, SphereRule};
use crate::error::{HyperError, Result};
use crate::output::fmt_f64;

pub const CACHE_ENV: &str = "HYPERBALL_CACHE_DIR";

/// Writes rule rows with a header naming the columns.
pub fn write_rule_csv<W: Write>(mut w: W, n: usize, nodes: &[f64], weights: &[f64]) -> Result<()> {
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("weight".into());
    writeln!(w, "{}", header.join(","))?;
    for (node, &wt) in nodes.chunks_exact(n).zip(weights) {
        let mut line: Vec<String> = node.iter().map(|&v| fmt_f64(v)).collect();
        line.push(fmt_f64(wt));
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Reads rows written by [`write_rule_csv`]; returns `(n, nodes, weights)`.
pub fn read_rule_csv<R: BufRead>(r: R) -> Result<(usize, Vec<f64>, Vec<f64>)> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| HyperError::Parse("empty rule file".into()))??;
    let cols = header.split(',').count();
    if cols < 2 || !header.ends_with("weight") {
        return Err(HyperError::Parse(format!("bad rule header `{header}`")));
    }
    let n = cols - 1;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| HyperError::Parse(format!("row {}: {e}", lineno + 2)))?;
        if vals.len() != cols {
            return Err(HyperError::Parse(format!("row {} has {} columns", lineno + 2, vals.len())));
        }
        nodes.extend_from_slice(&vals[..n]);
        weights.push(vals[n]);
    }
    Ok((n, nodes, weights))
}

/// Directory-backed rule cache.
#[derive(Debug, Clone)]
pub struct RuleCache {
    dir: PathBuf,
}

impl RuleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$HYPERBALL_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn sphere_path(&self, n: usize, order: usize) -> PathBuf {
        self.dir.join(format!("sphere_n{n}_o{order}.csv"))
    }

    pub fn ball_path(&self, n: usize, radial: usize, sphere: usize, margin: f64) -> PathBuf {
        self.dir.join(format!("ball_n{n}_r{radial}_s{sphere}_m{margin:e}.csv"))
    }

    /// Loads the sphere rule from disk, building and storing it on a miss.
    pub fn sphere(&self, n: usize, order: usize) -> Result<SphereRule> {
        let path = self.sphere_path(n, order);
        if path.exists() {
            let (m, nodes, weights) = read_rule_csv(BufReader::new(File::open(&path)?))?;
            if m != n {
                return Err(HyperError::DimensionMismatch { expected: n, got: m });
            }
            return SphereRule::from_parts(n, nodes, weights);
        }
        let rule = sphere_rule(n, order)?;
        std::fs::create_dir_all(&self.dir)?;
        let nodes: Vec<f64> = rule.nodes().flatten().copied().collect();
        write_rule_csv(BufWriter::new(File::create(&path)?), n, &nodes, rule.weights())?;
        Ok(rule)
    }

    /// Loads the ball rule (explicit rows) from disk, building and storing it on a miss.
    pub fn ball(&self, n: usize, radial: usize, sphere: usize, margin: f64) -> Result<BallRule> {
        let path = self.ball_path(n, radial, sphere, margin);
        if path.exists() {
            let (m, nodes, weights) = read_rule_csv(BufReader::new(File::open(&path)?))?;
            if m != n {
                return Err(HyperError::DimensionMismatch { expected: n, got: m });
            }
            return BallRule::from_parts(n, nodes, weights);
        }
        let rule = ball_rule(n, radial, sphere, margin)?;
        std::fs::create_dir_all(&self.dir)?;
        let (nodes, weights) = rule.rows();
        write_rule_csv(BufWriter::new(File::create(&path)?), n, &nodes, &weights)?;
        Ok(rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_rule_survives_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RuleCache::new(dir.path());
        let built = cache.sphere(4, 6).unwrap();
        assert!(cache.sphere_path(4, 6).exists());
        let loaded = cache.sphere(4, 6).unwrap();
        assert_eq!(built, loaded);
    }

    #[test]
    fn ball_rule_survives_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RuleCache::new(dir.path());
        let built = cache.ball(3, 6, 4, 1e-3).unwrap();
        let loaded = cache.ball(3, 6, 4, 1e-3).unwrap();
        assert_eq!(built.rows(), loaded.rows());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(read_rule_csv("x1,x2\n".as_bytes()).is_err());
        assert!(read_rule_csv("x1,weight\n1.0\n".as_bytes()).is_err());
        assert!(read_rule_csv("x1,weight\nabc,1\n".as_bytes()).is_err());
    }
}
