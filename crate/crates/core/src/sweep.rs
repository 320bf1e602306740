//! Deterministic parallel search over index ranges.
//!
//! Workers take fixed-size blocks in a strided pattern and the reported
//! failure is always the smallest failing index, so results do not depend on
//! the worker count or on scheduling.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BLOCK: u64 = 4096;

/// Worker count from the environment's available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Smallest `i < n` for which `check` reports a failure, with its payload.
///
/// `init` builds per-worker scratch state that `check` may reuse.
pub fn find_first<S, W, I, F>(n: u64, workers: usize, init: I, check: F) -> Option<(u64, W)>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64) -> Option<W> + Sync,
    W: Send,
{
    let workers = workers.max(1).min(n.div_ceil(BLOCK).max(1) as usize);
    if workers == 1 {
        let mut state = init();
        return (0..n).find_map(|i| check(&mut state, i).map(|w| (i, w)));
    }
    let best = AtomicU64::new(u64::MAX);
    let results: Vec<Option<(u64, W)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let best = &best;
                let init = &init;
                let check = &check;
                scope.spawn(move || {
                    let mut state = init();
                    let mut found: Option<(u64, W)> = None;
                    let mut block = w as u64;
                    loop {
                        let start = block * BLOCK;
                        if start >= n || start > best.load(Ordering::Relaxed) {
                            break;
                        }
                        let end = (start + BLOCK).min(n);
                        if let Some(hit) =
                            (start..end).find_map(|i| check(&mut state, i).map(|x| (i, x)))
                        {
                            best.fetch_min(hit.0, Ordering::Relaxed);
                            found = Some(hit);
                            break;
                        }
                        block += workers as u64;
                    }
                    found
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    results.into_iter().flatten().min_by_key(|(i, _)| *i)
}

/// `count` pairs drawn uniformly from `0..order` by a seeded ChaCha8 stream.
pub fn sample_pairs(order: usize, count: usize, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = order as u32;
    (0..count)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect()
}

/// How a pair sweep covers the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairPlan {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl PairPlan {
    /// Exhaustive when `order^2` fits in `max_pairs`, otherwise a sample of
    /// `max_pairs` pairs.
    pub fn for_order(order: usize, max_pairs: u64, seed: u64) -> Self {
        if (order as u64).saturating_mul(order as u64) <= max_pairs {
            PairPlan::Exhaustive
        } else {
            PairPlan::Sampled {
                count: max_pairs as usize,
                seed,
            }
        }
    }

    pub fn describe(&self, order: usize) -> String {
        match self {
            PairPlan::Exhaustive => format!(
                "exhaustive over {} ordered pairs",
                (order as u64) * (order as u64)
            ),
            PairPlan::Sampled { count, seed } => format!("sampled {count} pairs (seed {seed})"),
        }
    }
}

/// Runs `check` over priority pairs first and then over the plan's pairs,
/// returning the first failing pair in that order and the number of pairs
/// examined.
pub fn sweep_pairs<S, W, I, F>(
    order: usize,
    priority: &[(u32, u32)],
    plan: PairPlan,
    workers: usize,
    init: I,
    check: F,
) -> (u64, Option<((u32, u32), W)>)
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u32, u32) -> Option<W> + Sync,
    W: Send,
{
    let mut state = init();
    for (k, &(x, y)) in priority.iter().enumerate() {
        if let Some(w) = check(&mut state, x, y) {
            return (k as u64 + 1, Some(((x, y), w)));
        }
    }
    let base = priority.len() as u64;
    match plan {
        PairPlan::Exhaustive => {
            let n = order as u64;
            let total = n * n;
            match find_first(total, workers, &init, |s, i| {
                check(s, (i / n) as u32, (i % n) as u32)
            }) {
                Some((i, w)) => (base + i + 1, Some((((i / n) as u32, (i % n) as u32), w))),
                None => (base + total, None),
            }
        }
        PairPlan::Sampled { count, seed } => {
            let pairs = sample_pairs(order, count, seed);
            match find_first(pairs.len() as u64, workers, &init, |s, i| {
                let (x, y) = pairs[i as usize];
                check(s, x, y)
            }) {
                Some((i, w)) => (base + i + 1, Some((pairs[i as usize], w))),
                None => (base + pairs.len() as u64, None),
            }
        }
    }
}
