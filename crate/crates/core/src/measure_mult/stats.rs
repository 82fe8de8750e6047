use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A Monte Carlo (or exact) estimate of a complex mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    /// Sample standard deviation over `√samples`; zero for closed forms.
    pub std_error: f64,
    /// Unbiased sample variance of `|x - mean|`.
    pub sample_variance: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            std_error: 0.0,
            sample_variance: 0.0,
        }
    }
}

/// Welford accumulators for several complex streams, mergeable with Chan's
/// pairwise update.
#[derive(Clone, Debug)]
pub(crate) struct Accumulator {
    n: u64,
    mean: Vec<Complex64>,
    m2: Vec<f64>,
}

impl Accumulator {
    pub fn new(k: usize) -> Self {
        Self {
            n: 0,
            mean: vec![Complex64::new(0.0, 0.0); k],
            m2: vec![0.0; k],
        }
    }

    pub fn push(&mut self, xs: &[Complex64]) {
        self.n += 1;
        let n = self.n as f64;
        for ((mean, m2), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(xs) {
            let delta = x - *mean;
            *mean += delta / n;
            *m2 += (delta.conj() * (x - *mean)).re;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * (nb / n);
            self.m2[k] += other.m2[k] + delta.norm_sqr() * na * nb / n;
        }
        self.n += other.n;
    }

    pub fn finish(&self) -> Vec<Estimate> {
        let n = self.n as f64;
        self.mean
            .iter()
            .zip(&self.m2)
            .map(|(&value, &m2)| {
                let var = if self.n > 1 { (m2 / (n - 1.0)).max(0.0) } else { 0.0 };
                Estimate {
                    value,
                    std_error: (var / n).sqrt(),
                    sample_variance: var,
                }
            })
            .collect()
    }
}

/// Means of `k` complex functions of the sample index over `0..samples`,
/// accumulated in fixed shards merged in order.
pub(crate) fn sharded_mean<F>(samples: usize, k: usize, f: F) -> Vec<Estimate>
where
    F: Fn(u64, &mut [Complex64]) + Sync,
{
    use rayon::prelude::*;
    const SHARD: usize = 2048;
    let partials: Vec<Accumulator> = (0..samples.div_ceil(SHARD))
        .into_par_iter()
        .map(|s| {
            let mut acc = Accumulator::new(k);
            let mut row = vec![Complex64::new(0.0, 0.0); k];
            for i in s * SHARD..((s + 1) * SHARD).min(samples) {
                f(i as u64, &mut row);
                acc.push(&row);
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new(k);
    for p in &partials {
        total.merge(p);
    }
    total.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<Complex64> = (0..100)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64).sqrt()))
            .collect();
        let mut whole = Accumulator::new(1);
        for x in &xs {
            whole.push(&[*x]);
        }
        let mut a = Accumulator::new(1);
        let mut b = Accumulator::new(1);
        for x in &xs[..37] {
            a.push(&[*x]);
        }
        for x in &xs[37..] {
            b.push(&[*x]);
        }
        a.merge(&b);
        let (e1, e2) = (whole.finish()[0], a.finish()[0]);
        assert!((e1.value - e2.value).norm() < 1e-13);
        assert!((e1.sample_variance - e2.sample_variance).abs() < 1e-12);

        // two-pass oracle
        let mean: Complex64 = xs.iter().sum::<Complex64>() / 100.0;
        let var: f64 = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / 99.0;
        assert!((e1.value - mean).norm() < 1e-13);
        assert!((e1.sample_variance - var).abs() < 1e-12);
        assert!((e1.std_error - (var / 100.0).sqrt()).abs() < 1e-14);
    }
}
