//! Streaming moments and the estimate record returned by every estimator.

use core::fmt;

/// Welford accumulator. Partial accumulators merge with Chan's update, so
/// per-stream results can be reduced in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            libm::sqrt(self.variance() / self.count as f64)
        }
    }
}

impl FromIterator<f64> for Welford {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Welford::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    McPairs,
    Chord,
    Exact,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::McPairs => "mc",
            Method::Chord => "chord",
            Method::Exact => "exact",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sample standard deviation over `√n` for Monte Carlo, zero for exact.
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            n_samples: 0,
            seed: 0,
            method: Method::Exact,
        }
    }

    pub(crate) fn from_welford(acc: &Welford, seed: u64, method: Method) -> Self {
        Self {
            value: acc.mean(),
            std_error: acc.std_error(),
            n_samples: acc.count(),
            seed,
            method,
        }
    }

    /// True when `target` lies within `k` standard errors of the value.
    pub fn within(&self, target: f64, k: f64) -> bool {
        libm::fabs(self.value - target) <= k * self.std_error
    }
}

/// Kendall rank correlation of paired samples without ties, with exact
/// one-sided p-values from the distribution of inversion counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KendallTau {
    pub tau: f64,
    /// `P(τ' ≥ τ)` under independence.
    pub p_increasing: f64,
    /// `P(τ' ≤ τ)` under independence.
    pub p_decreasing: f64,
}

pub fn kendall_tau(x: &[f64], y: &[f64]) -> KendallTau {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs == 0 {
        return KendallTau { tau: 0.0, p_increasing: 1.0, p_decreasing: 1.0 };
    }
    let mut discordant = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if (x[i] - x[j]) * (y[i] - y[j]) < 0.0 {
                discordant += 1;
            }
        }
    }
    // counts[k] = permutations of n items with k inversions.
    let mut counts = alloc::vec![0.0f64; pairs + 1];
    counts[0] = 1.0;
    for m in 2..=n {
        let mut next = alloc::vec![0.0f64; pairs + 1];
        for (k, c) in counts.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            for extra in 0..m {
                if k + extra <= pairs {
                    next[k + extra] += c;
                }
            }
        }
        counts = next;
    }
    let total: f64 = counts.iter().sum();
    let p_increasing = counts[..=discordant].iter().sum::<f64>() / total;
    let p_decreasing = counts[discordant..].iter().sum::<f64>() / total;
    KendallTau {
        tau: 1.0 - 2.0 * discordant as f64 / pairs as f64,
        p_increasing,
        p_decreasing,
    }
}
