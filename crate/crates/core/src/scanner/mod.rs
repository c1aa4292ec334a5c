//! Range scans over `omega(D+(n))` and searches for the exceptional index sets.
//!
//! The scan inverts the per-index loop: for a prime `p`, the indices
//! `n < p^2` with `s_p(n) >= p` are exactly `n = a1*p + a0` with
//! `1 <= a1 <= p-1` and `p - a1 <= a0 <= p-1`, i.e. for `q = a1 + 1` the
//! contiguous block `[q*p - q + 1, q*p - 1]`. Each prime touches only the
//! indices it contributes to, so a chunk costs about `sum omega(D+(n))`
//! increments instead of `len * pi(hi)` digit sums.

mod checkpoint;

use std::path::PathBuf;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, radical, PrimeSieve};
use crate::denom;
use crate::error::{Error, Result};

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};

/// Default number of indices per chunk.
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 20;

/// Largest scan bound supported.
pub const MAX_SCAN_LIMIT: u64 = 100_000_000;

// omega(D+(n)) < sqrt(n) <= sqrt(MAX_SCAN_LIMIT) must fit a u16 counter.
const _: () = assert!(MAX_SCAN_LIMIT <= (u16::MAX as u64) * (u16::MAX as u64));

/// Default search bound for the derivative sets.
pub const DEFAULT_SET_LIMIT: u64 = 10_000;

/// Fixed-point scale for accumulating `omega * ln(n) / sqrt(n)` so that sums
/// do not depend on how a range is partitioned.
const KAPPA_SCALE: f64 = (1u64 << 40) as f64;

/// Per-index results for one inclusive range `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanChunk {
    pub lo: u64,
    pub hi: u64,
    /// `omega_counts[i] = omega(D+(lo + i))`.
    pub omega_counts: Vec<u16>,
    /// Indices with `omega(D+(n)) = 0`.
    pub exceptional: Vec<u64>,
    /// Order-independent digest of `(n, omega)` pairs; see [`fingerprint`].
    pub checksum: u64,
}

impl ScanChunk {
    pub fn omega(&self, n: u64) -> u16 {
        assert!((self.lo..=self.hi).contains(&n), "{n} outside [{}, {}]", self.lo, self.hi);
        self.omega_counts[(n - self.lo) as usize]
    }

    pub fn summary(&self) -> ChunkSummary {
        let mut s = ChunkSummary::empty(self.lo, self.hi);
        for (i, &w) in self.omega_counts.iter().enumerate() {
            let n = self.lo + i as u64;
            s.omega_sum += w as u64;
            if w > s.omega_max {
                s.omega_max = w;
                s.omega_max_n = n;
            }
            if n >= 2 {
                let r = kappa_term(n, w);
                s.kappa_fixed += (r * KAPPA_SCALE).round() as u128;
                s.kappa_min = s.kappa_min.min(r);
                s.kappa_max = s.kappa_max.max(r);
            }
        }
        s.exceptional = self.exceptional.clone();
        s.fingerprint = self.checksum;
        s
    }
}

/// Aggregate statistics for a range; merging is exact and associative.
#[derive(Clone, Debug, PartialEq)]
pub struct ChunkSummary {
    pub lo: u64,
    pub hi: u64,
    pub exceptional: Vec<u64>,
    pub omega_sum: u64,
    pub omega_max: u16,
    pub omega_max_n: u64,
    pub kappa_fixed: u128,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub fingerprint: u64,
}

impl ChunkSummary {
    fn empty(lo: u64, hi: u64) -> Self {
        Self {
            lo,
            hi,
            exceptional: Vec::new(),
            omega_sum: 0,
            omega_max: 0,
            omega_max_n: lo,
            kappa_fixed: 0,
            kappa_min: f64::INFINITY,
            kappa_max: f64::NEG_INFINITY,
            fingerprint: 0,
        }
    }

    /// Merges two adjacent summaries, `self` directly below `next`.
    pub fn merge(mut self, next: &ChunkSummary) -> Result<Self> {
        if next.lo != self.hi + 1 {
            return Err(Error::InvalidArgument(format!(
                "summaries [{}, {}] and [{}, {}] are not adjacent",
                self.lo, self.hi, next.lo, next.hi
            )));
        }
        self.hi = next.hi;
        self.exceptional.extend_from_slice(&next.exceptional);
        self.omega_sum += next.omega_sum;
        if next.omega_max > self.omega_max {
            self.omega_max = next.omega_max;
            self.omega_max_n = next.omega_max_n;
        }
        self.kappa_fixed += next.kappa_fixed;
        self.kappa_min = self.kappa_min.min(next.kappa_min);
        self.kappa_max = self.kappa_max.max(next.kappa_max);
        self.fingerprint = self.fingerprint.wrapping_add(next.fingerprint);
        Ok(self)
    }

    pub fn count(&self) -> u64 {
        self.hi - self.lo + 1
    }

    /// Mean of `omega * ln(n) / sqrt(n)` over the indices `n >= 2`.
    pub fn kappa_mean(&self) -> f64 {
        let terms = self.hi + 1 - self.lo.max(2);
        if self.hi < 2 || terms == 0 {
            return 0.0;
        }
        self.kappa_fixed as f64 / KAPPA_SCALE / terms as f64
    }
}

#[inline]
fn kappa_term(n: u64, omega: u16) -> f64 {
    let x = n as f64;
    omega as f64 * x.ln() / x.sqrt()
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Wrapping sum of a per-index hash of `(n, omega)`; adding the
/// fingerprints of disjoint ranges gives the fingerprint of their union.
pub fn fingerprint(lo: u64, counts: &[u16]) -> u64 {
    counts
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &w)| {
            acc.wrapping_add(mix((lo + i as u64) ^ ((w as u64) << 48)))
        })
}

/// `omega(D+(n))` for every `n` in `[lo, hi]`, by per-prime enumeration.
pub fn scan_omega_plus(lo: u64, hi: u64, sieve: &PrimeSieve) -> Result<ScanChunk> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let max_prime = hi.div_ceil(2);
    sieve.check_covers(max_prime)?;
    let len = usize::try_from(hi - lo + 1)
        .map_err(|_| Error::InvalidArgument("scan range too long".into()))?;
    let mut counts = vec![0u16; len];
    let end = sieve.primes().partition_point(|&p| p <= max_prime);
    for &p in &sieve.primes()[..end] {
        // Block q covers [q*p - q + 1, q*p - 1]; need q*p - 1 >= lo and
        // q*p - q + 1 <= hi.
        let q_min = ((lo + 1).div_ceil(p)).max(2);
        let q_max = ((hi - 1) / (p - 1)).min(p);
        for q in q_min..=q_max {
            let start = (q * p - q + 1).max(lo);
            let stop = (q * p - 1).min(hi);
            for c in &mut counts[(start - lo) as usize..=(stop - lo) as usize] {
                *c += 1;
            }
        }
    }
    let exceptional = counts
        .iter()
        .enumerate()
        .filter(|(_, &w)| w == 0)
        .map(|(i, _)| lo + i as u64)
        .collect();
    let checksum = fingerprint(lo, &counts);
    Ok(ScanChunk {
        lo,
        hi,
        omega_counts: counts,
        exceptional,
        checksum,
    })
}

/// Settings for a full `[1, limit]` scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub limit: u64,
    pub chunk_size: u64,
    /// Worker count; `None` uses rayon's default.
    pub threads: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many newly computed chunks (simulates an interruption).
    pub stop_after_chunks: Option<usize>,
}

impl ScanConfig {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            chunk_size: DEFAULT_CHUNK_SIZE,
            threads: None,
            checkpoint: None,
            stop_after_chunks: None,
        }
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut lo = 1;
        while lo <= self.limit {
            let hi = (lo + self.chunk_size - 1).min(self.limit);
            out.push((lo, hi));
            lo = hi + 1;
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if self.limit == 0 || self.limit > MAX_SCAN_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "scan limit must lie in [1, {MAX_SCAN_LIMIT}], got {}",
                self.limit
            )));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidArgument("chunk size must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Final result of a `[1, limit]` scan. Independent of chunking and threads.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub limit: u64,
    pub exceptional: Vec<u64>,
    pub omega_sum: u64,
    pub omega_max: u16,
    pub omega_max_n: u64,
    pub kappa_mean: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub fingerprint: String,
}

impl ScanReport {
    fn from_summary(limit: u64, s: &ChunkSummary) -> Self {
        Self {
            limit,
            exceptional: s.exceptional.clone(),
            omega_sum: s.omega_sum,
            omega_max: s.omega_max,
            omega_max_n: s.omega_max_n,
            kappa_mean: s.kappa_mean(),
            kappa_min: if s.kappa_min.is_finite() { s.kappa_min } else { 0.0 },
            kappa_max: if s.kappa_max.is_finite() { s.kappa_max } else { 0.0 },
            fingerprint: format!("{:016x}", s.fingerprint),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanRun {
    Complete(ScanReport),
    Interrupted { completed: usize, total: usize },
}

/// Scans `[1, limit]` in parallel chunks, optionally resuming from and
/// appending to a checkpoint file.
pub fn run_scan(config: &ScanConfig) -> Result<ScanRun> {
    config.validate()?;
    let chunks = config.chunks();
    let total = chunks.len();

    let mut checkpoint = match &config.checkpoint {
        Some(path) => Some(Checkpoint::open(path, config.limit, config.chunk_size)?),
        None => None,
    };
    let mut done: Vec<Option<ChunkSummary>> = vec![None; total];
    if let Some(cp) = &checkpoint {
        for summary in cp.completed() {
            let idx = chunks
                .iter()
                .position(|&(lo, hi)| lo == summary.lo && hi == summary.hi)
                .ok_or_else(|| {
                    Error::Checkpoint(format!(
                        "record [{}, {}] does not match the chunk layout",
                        summary.lo, summary.hi
                    ))
                })?;
            done[idx] = Some(summary.clone());
        }
    }

    let mut pending: Vec<usize> = (0..total).filter(|&i| done[i].is_none()).collect();
    let interrupted = match config.stop_after_chunks {
        Some(n) if n < pending.len() => {
            pending.truncate(n);
            true
        }
        _ => false,
    };

    let sieve = PrimeSieve::new(config.limit.div_ceil(2).max(1))?;
    let writer = checkpoint.as_mut().map(Mutex::new);
    let work = || -> Result<Vec<(usize, ChunkSummary)>> {
        pending
            .par_iter()
            .map(|&i| {
                let (lo, hi) = chunks[i];
                let summary = scan_omega_plus(lo, hi, &sieve)?.summary();
                if let Some(w) = &writer {
                    w.lock().expect("checkpoint writer poisoned").append(&summary)?;
                }
                Ok((i, summary))
            })
            .collect()
    };
    let computed = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    for (i, s) in computed {
        done[i] = Some(s);
    }

    if interrupted {
        let completed = done.iter().filter(|d| d.is_some()).count();
        return Ok(ScanRun::Interrupted { completed, total });
    }

    let mut iter = done.into_iter().map(|d| d.expect("every chunk computed"));
    let first = iter.next().expect("limit >= 1 gives at least one chunk");
    let merged = iter.try_fold(first, |acc, s| acc.merge(&s))?;
    if let Some(cp) = checkpoint.as_mut() {
        cp.finish(total)?;
    }
    Ok(ScanRun::Complete(ScanReport::from_summary(config.limit, &merged)))
}

/// Which exceptional set a [`SetReport`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    /// `{n : the k-th derivative of B_n(x) has integer coefficients}`.
    Derivative(u64),
    /// `{n : D(n) = rad(n+1)}`.
    RadicalKernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetReport {
    pub kind: SetKind,
    pub limit: u64,
    pub members: Vec<u64>,
}

impl SetReport {
    pub fn k(&self) -> Option<u64> {
        match self.kind {
            SetKind::Derivative(k) => Some(k),
            SetKind::RadicalKernel => None,
        }
    }
}

/// `{n <= limit : db_k(n, k) = 1}`.
///
/// Candidates are prefiltered: with `m = n - k + 1`, every prime of `D+(m)`
/// divides `coprime(m)`, so it must also divide `(n)_{k-1}`. Survivors are
/// confirmed with the full [`denom::db_k`].
pub fn find_sets(k: u64, limit: u64, sieve: &PrimeSieve) -> Result<SetReport> {
    if k == 0 || limit == 0 {
        return Err(Error::InvalidArgument("k and limit must be positive".into()));
    }
    sieve.check_covers(crate::arith::required_limit(limit))?;
    let members = (1..=limit)
        .into_par_iter()
        .filter(|&n| {
            if n <= k {
                return true;
            }
            let m = n - k + 1;
            let plus = denom::dd_plus(m, sieve);
            let survives = plus
                .primes()
                .iter()
                .all(|&p| crate::arith::divides_falling_factorial(p, n, k - 1));
            survives && denom::db_k(n, k, sieve).is_one()
        })
        .collect();
    Ok(SetReport {
        kind: SetKind::Derivative(k),
        limit,
        members,
    })
}

/// `{n <= limit : D(n) = rad(n+1)}`.
pub fn find_rad_set(limit: u64, sieve: &PrimeSieve) -> Result<SetReport> {
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be positive".into()));
    }
    sieve.check_covers(crate::arith::required_limit(limit))?;
    let members = (1..=limit)
        .into_par_iter()
        .filter(|&n| {
            // Every prime of D+(n) must divide n+1 for equality to hold.
            let plus = denom::dd_plus(n, sieve);
            plus.primes().iter().all(|&p| (n + 1) % p == 0)
                && denom::dd(n, sieve) == radical(n + 1)
        })
        .collect();
    Ok(SetReport {
        kind: SetKind::RadicalKernel,
        limit,
        members,
    })
}

/// `n + 1` primality flags for the members of a set.
pub fn successor_primality(report: &SetReport) -> Vec<bool> {
    report.members.iter().map(|&n| is_prime(n + 1)).collect()
}

/// Statistics of `omega(D+(n)) * ln(n) / sqrt(n)` over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaStats {
    pub lo: u64,
    pub hi: u64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

pub fn kappa_ratio(lo: u64, hi: u64, sieve: &PrimeSieve) -> Result<KappaStats> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let s = scan_omega_plus(lo, hi, sieve)?.summary();
    Ok(KappaStats {
        lo,
        hi,
        mean: s.kappa_mean(),
        min: s.kappa_min,
        max: s.kappa_max,
    })
}
