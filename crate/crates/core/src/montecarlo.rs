//! Deterministic parallel Monte-Carlo plumbing.
//!
//! Work is cut into fixed-size chunks; chunk `c` draws from `stream.derive(c)`
//! and the per-chunk results are merged in a fixed pairwise tree. Neither the
//! chunking nor the merge order depends on the number of worker threads, so
//! results are bit-identical for any thread count.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::rng::RngStream;

pub const DEFAULT_CHUNK: u64 = 1 << 14;

/// Runs `f(chunk_index, rng, count)` over `ceil(total / chunk)` chunks in
/// parallel and returns the results in chunk order.
pub fn run_chunks<T, F>(stream: &RngStream, total: u64, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunk = chunk.max(1);
    let chunks = total.div_ceil(chunk);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = chunk.min(total - c * chunk);
            let mut rng = stream.derive(c).rng();
            f(c, &mut rng, count)
        })
        .collect()
}

/// Balanced pairwise reduction in index order; `None` for an empty input.
pub fn pairwise<T, F>(mut items: Vec<T>, f: F) -> Option<T>
where
    F: Fn(T, T) -> T,
{
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => f(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop()
}

/// Count, mean and centred second moment, mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, o: Welford) -> Welford {
        if self.count == 0 {
            return o;
        }
        if o.count == 0 {
            return self;
        }
        let count = self.count + o.count;
        let d = o.mean - self.mean;
        let w = o.count as f64 / count as f64;
        Welford {
            count,
            mean: self.mean + d * w,
            m2: self.m2 + o.m2 + d * d * self.count as f64 * w,
        }
    }

    /// Unbiased sample variance (0 for fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean; `None` when it is undefined (one sample).
    pub fn stderr(&self) -> Option<f64> {
        (self.count >= 2).then(|| (self.variance() / self.count as f64).sqrt())
    }
}

/// Success count over trials, with the binomial standard error.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn merge(self, o: Proportion) -> Proportion {
        Proportion { hits: self.hits + o.hits, trials: self.trials + o.trials }
    }

    pub fn estimate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.hits as f64 / self.trials as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.estimate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn welford_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1013) as f64 * 0.01).collect();
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let parts: Vec<Welford> = xs
            .chunks(97)
            .map(|c| {
                let mut w = Welford::default();
                c.iter().for_each(|&x| w.push(x));
                w
            })
            .collect();
        let merged = pairwise(parts, Welford::merge).unwrap();
        assert_eq!(merged.count, 1000);
        assert!((merged.mean - all.mean).abs() < 1e-12);
        assert!((merged.variance() - all.variance()).abs() < 1e-10);
    }

    #[test]
    fn single_sample_has_no_stderr() {
        let mut w = Welford::default();
        w.push(3.0);
        assert_eq!(w.stderr(), None);
    }

    #[test]
    fn chunking_is_thread_independent() {
        let s = RngStream::new(77, 0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_chunks(&s, 10_001, 1000, |_, rng, m| (0..m).map(|_| rng.gen::<f64>()).sum::<f64>()))
        };
        let a = pairwise(run(1), |x, y| x + y).unwrap();
        let b = pairwise(run(4), |x, y| x + y).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(run(1).len(), 11);
    }
}
