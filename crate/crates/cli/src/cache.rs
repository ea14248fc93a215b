//! Line-oriented a_p cache: header `# n=<n> b=<b>`, then `p,a_p` rows sorted
//! by p. Diff-able and mergeable; writes are atomic (temp file + rename).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheFile {
    pub n: u64,
    pub b: i128,
    /// p -> a_p, sorted by construction.
    pub rows: BTreeMap<u64, i64>,
}

impl CacheFile {
    pub fn new(n: u64, b: i128) -> CacheFile {
        CacheFile {
            n,
            b,
            rows: BTreeMap::new(),
        }
    }

    /// Parse a cache file. Every row is validated against the Hasse bound
    /// a_p^2 <= 4p; a malformed or violating line fails with its line number.
    /// An empty file is a valid empty cache for (n, b).
    pub fn load(path: &Path, n: u64, b: i128) -> Result<CacheFile> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading cache {}", path.display()))?;
        let mut cache = CacheFile::new(n, b);
        let mut last_p = 0u64;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let want = format!("n={n} b={b}");
                if header.trim() != want {
                    bail!(
                        "{}:{lineno}: cache header `{}` does not match expected `{want}`",
                        path.display(),
                        header.trim()
                    );
                }
                continue;
            }
            let (p_str, a_str) = line
                .split_once(',')
                .with_context(|| format!("{}:{lineno}: expected `p,a_p`", path.display()))?;
            let p: u64 = p_str
                .trim()
                .parse()
                .with_context(|| format!("{}:{lineno}: bad prime field", path.display()))?;
            let a: i64 = a_str
                .trim()
                .parse()
                .with_context(|| format!("{}:{lineno}: bad trace field", path.display()))?;
            if !cube_obstruct::arithmetic::is_prime(p) {
                bail!("{}:{lineno}: {p} is not prime", path.display());
            }
            if p <= last_p {
                bail!(
                    "{}:{lineno}: rows must be ascending and unique",
                    path.display()
                );
            }
            last_p = p;
            if (a as i128) * (a as i128) > 4 * p as i128 {
                bail!(
                    "{}:{lineno}: Hasse bound violated: a_p = {a} at p = {p}",
                    path.display()
                );
            }
            cache.rows.insert(p, a);
        }
        Ok(cache)
    }

    /// Atomic store: write a sibling temp file, then rename over the target.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp: PathBuf = path.to_path_buf();
        tmp.set_extension("tmp");
        {
            let mut f =
                fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
            write!(f, "{}", self.render())?;
            f.flush()?;
        }
        fs::rename(&tmp, path)
            .with_context(|| format!("renaming {} over {}", tmp.display(), path.display()))?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = format!("# n={} b={}\n", self.n, self.b);
        for (p, a) in &self.rows {
            out.push_str(&format!("{p},{a}\n"));
        }
        out
    }
}
