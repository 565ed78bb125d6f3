use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// All primes up to and including `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCache {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeCache {
    /// Sieve of Eratosthenes.
    pub fn new(limit: u64) -> Self {
        if limit < 2 {
            return Self {
                primes: Vec::new(),
                limit,
            };
        }
        let size = usize::try_from(limit).expect("sieve limit fits in memory") + 1;
        let mut composite = vec![false; size];
        let mut primes = Vec::new();
        for i in 2..size {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j < size {
                composite[j] = true;
                j += i;
            }
        }
        Self { primes, limit }
    }

    /// A cache holding exactly `primes`, validated against `limit`.
    pub fn from_primes(primes: Vec<u64>, limit: u64) -> Result<Self> {
        if let Some(w) = primes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!(
                "prime list not strictly ascending at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(&first) = primes.first() {
            if first < 2 {
                return Err(Error::Parse(format!("{first} is not a prime")));
            }
        }
        if let Some(&last) = primes.last() {
            if last > limit {
                return Err(Error::Parse(format!(
                    "prime {last} exceeds stated limit {limit}"
                )));
            }
        }
        Ok(Self { primes, limit })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Writes one decimal prime per line; the file appears atomically.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            for p in &self.primes {
                writeln!(w, "{p}")?;
            }
            w.flush()?;
        }
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Reads a newline-delimited list written by [`PrimeCache::save`].
    pub fn load(path: impl AsRef<Path>, limit: u64) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let primes = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad prime line `{l}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_primes(primes, limit)
    }
}
