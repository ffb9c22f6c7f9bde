//! Linear-probing hash table instrumented with probe counts.
//!
//! The table stores keys at externally supplied hash values: the experiments
//! draw hashes uniformly at random, which is exactly the random-hash-values
//! model under which insertion cost is analyzed. A probe count is the number
//! of slots inspected, including the slot finally used (so an insert into an
//! empty slot costs 1).
//!
//! [`geometric_reference`] gives the idealized baseline `1/(1−α)` — the
//! expected number of *independent* uniform probes needed to find an empty
//! slot at load `α`. Linear probing's clustering makes real scans longer.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::rng::Rng;

/// Deterministic 64-bit mixing hash for non-experiment use (experiments
/// supply uniformly drawn hash values instead, per the random-hash model).
pub fn mix_hash(key: u64) -> u64 {
    crate::rng::mix64(key)
}

/// An open-addressing table with linear probing and no deletions.
#[derive(Debug, Clone)]
pub struct ProbeTable {
    slots: Vec<Option<(u64, usize)>>,
    occupied: usize,
    probe_log: Vec<u32>,
    keys: HashSet<u64>,
}

impl ProbeTable {
    /// An empty table with `capacity` slots.
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter("capacity must be positive".into()));
        }
        Ok(ProbeTable {
            slots: vec![None; capacity],
            occupied: 0,
            probe_log: Vec::new(),
            keys: HashSet::new(),
        })
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    /// Load factor α = occupied / capacity.
    pub fn load(&self) -> f64 {
        self.occupied as f64 / self.slots.len() as f64
    }

    /// Per-insertion probe counts, in insertion order.
    pub fn probe_log(&self) -> &[u32] {
        &self.probe_log
    }

    /// Stores `key` in the first empty slot of `hash, hash+1, ...` with
    /// wraparound; returns the number of slots inspected (≥ 1).
    pub fn insert(&mut self, key: u64, hash: usize) -> Result<u32> {
        let n = self.slots.len();
        if hash >= n {
            return Err(Error::InvalidParameter(format!(
                "hash value {hash} out of range for capacity {n}"
            )));
        }
        if self.occupied == n {
            return Err(Error::TableFull);
        }
        if !self.keys.insert(key) {
            return Err(Error::DuplicateKey(key));
        }
        let mut idx = hash;
        let mut probes = 1u32;
        while self.slots[idx].is_some() {
            idx = (idx + 1) % n;
            probes += 1;
        }
        self.slots[idx] = Some((key, hash));
        self.occupied += 1;
        self.probe_log.push(probes);
        Ok(probes)
    }

    /// Scans from `hash` until `key` or an empty slot; returns whether the
    /// key was found and how many slots were inspected. With no deletions, a
    /// successful lookup costs exactly what the key's insertion cost.
    pub fn lookup(&self, key: u64, hash: usize) -> (bool, u32) {
        let n = self.slots.len();
        let mut idx = hash % n;
        let mut probes = 1u32;
        loop {
            match self.slots[idx] {
                None => return (false, probes),
                Some((k, _)) if k == key => return (true, probes),
                Some(_) => {
                    idx = (idx + 1) % n;
                    // A full table has no empty sentinel; every slot checked
                    // means the key is absent.
                    if probes as usize == n {
                        return (false, probes);
                    }
                    probes += 1;
                }
            }
        }
    }

    /// The multiset of occupied slot indices (instrumentation-independent).
    pub fn occupied_slots(&self) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&i| self.slots[i].is_some())
            .collect()
    }
}

/// Expected probes to find an empty slot with *independent* uniform probes
/// at load `α`: a geometric variable with success probability `1−α`, mean
/// `1/(1−α)`.
pub fn geometric_reference(alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidLoadFactor(alpha));
    }
    Ok(1.0 / (1.0 - alpha))
}

/// Mean probe count of `window` insertions performed at load `α`.
///
/// Fills a fresh table with uniformly hashed keys until `⌊α·capacity⌋ −
/// window/2` are present, then records the next `window` insertions, so the
/// measured insertions straddle load `α`.
pub fn insertion_probes_at_load(
    capacity: usize,
    alpha: f64,
    window: usize,
    seed: u64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidLoadFactor(alpha));
    }
    let target = (alpha * capacity as f64).floor() as usize;
    let window = window.max(1).min(capacity - 1);
    let fill = target.saturating_sub(window / 2);
    let measured = window.min(capacity - 1 - fill);

    let mut table = ProbeTable::new(capacity)?;
    let mut rng = Rng::new(seed);
    for key in 0..fill as u64 {
        table.insert(key, rng.index(capacity))?;
    }
    let mut total = 0u64;
    for key in 0..measured as u64 {
        total += u64::from(table.insert(u64::MAX - key, rng.index(capacity))?);
    }
    Ok(total as f64 / measured as f64)
}

/// One record per load factor: mean insertion probes at that load (averaged
/// over per-trial means) against the geometric baseline.
pub fn probing_experiment(
    capacity: usize,
    alphas: &[f64],
    trials: u64,
    window: usize,
    master_seed: u64,
    threads: usize,
) -> Result<Vec<ExperimentRecord>> {
    let mut records = Vec::with_capacity(alphas.len());
    for (ai, &alpha) in alphas.iter().enumerate() {
        let means = crate::harness::map_trials(trials, threads, |trial| {
            let seed = Rng::subseed(master_seed, (ai as u64) << 32 | trial);
            insertion_probes_at_load(capacity, alpha, window, seed)
        })?;
        let mean = means.iter().sum::<f64>() / trials as f64;
        records.push(
            ExperimentRecord::new("probing", master_seed)
                .with_param("capacity", capacity as f64)
                .with_param("alpha", alpha)
                .with_param("trials", trials as f64)
                .with_stat("mean_insert_probes", mean)
                .with_stat("geometric_reference", geometric_reference(alpha)?),
        );
    }
    Ok(records)
}
