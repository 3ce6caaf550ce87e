//! Seeded random test instances.
//!
//! Every randomized suite in this crate draws through a caller-supplied
//! [`rand::Rng`], so a fixed seed reproduces the exact sequence of channels
//! and joints across runs and platforms.

use rand::Rng;

use crate::channel::{BinaryChannel, JointDistribution};

/// Random binary-input channel with between 2 and `max_outputs` outputs and
/// full support. Likelihoods are drawn uniformly, then each input's column
/// is normalized.
pub fn random_channel(rng: &mut impl Rng, max_outputs: usize) -> BinaryChannel {
    let n = rng.gen_range(2..=max_outputs.max(2));
    let w0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let w1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let (s0, s1): (f64, f64) = (w0.iter().sum(), w1.iter().sum());
    let outputs = w0
        .into_iter()
        .zip(w1)
        .map(|(a, b)| (a / s0, b / s1))
        .collect();
    BinaryChannel::new(outputs).expect("normalized columns form a valid channel")
}

/// Random joint over a binary input and 2 to `max_outputs` outputs, full
/// support, normalized to unit mass.
pub fn random_joint(rng: &mut impl Rng, max_outputs: usize) -> JointDistribution {
    let n = rng.gen_range(2..=max_outputs.max(2));
    let raw: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|c| c.0 + c.1).sum();
    let cells = raw.into_iter().map(|(a, b)| (a / total, b / total)).collect();
    JointDistribution::new(cells).expect("normalized cells form a valid joint")
}

/// Random grouped mass table with the given shape, normalized to unit mass.
/// Used for joints over composite alphabets.
pub fn random_table(rng: &mut impl Rng, groups: usize, per_group: usize) -> Vec<Vec<f64>> {
    let mut t: Vec<Vec<f64>> = (0..groups)
        .map(|_| (0..per_group).map(|_| rng.gen_range(0.01..1.0)).collect())
        .collect();
    let total: f64 = t.iter().flatten().sum();
    for g in &mut t {
        for p in g {
            *p /= total;
        }
    }
    t
}
