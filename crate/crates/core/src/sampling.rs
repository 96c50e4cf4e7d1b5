//! Seeded uniform sampling of the three strategy spaces.
//!
//! Streams are reproducible bit for bit across platforms:
//!
//! * the generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed through
//!   `SeedableRng::seed_from_u64`;
//! * a uniform double is `(next_u64 >> 11) · 2⁻⁵³`, in `[0, 1)`;
//! * normals come from Box–Muller on `u1 ∈ (0, 1]`, `u2 ∈ [0, 1)`: the
//!   cosine branch is returned first and the sine branch is cached for the
//!   next call;
//! * unit exponentials are `-ln(1 - u)`;
//! * all transcendental functions go through `libm`.
//!
//! A batch of `n` strategies is cut into chunks of [`CHUNK_SIZE`]; chunk `i`
//! draws from its own generator seeded with [`chunk_seed`]`(seed, i)`, so a
//! batch can be produced by any number of workers and concatenated in chunk
//! order without changing a single bit.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::strategy::{ClassicalStrategy, Model, PrequantStrategy, QuantumStrategy, Strategy};

/// Strategies per independently seeded chunk.
pub const CHUNK_SIZE: usize = 4096;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chunk `index`: `mix64(seed + (index + 1) · 0x9E3779B97F4A7C15)`.
pub fn chunk_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A single-owner deterministic random stream.
#[derive(Debug, Clone)]
pub struct SeededGenerator {
    seed: u64,
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = TAU * u2;
        self.spare_normal = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    pub fn unit_exponential(&mut self) -> f64 {
        -libm::log(1.0 - self.next_f64())
    }
}

fn fill_sphere(out: &mut [f64], g: &mut SeededGenerator) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = g.standard_normal();
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let n = libm::sqrt(norm2);
            out.iter_mut().for_each(|x| *x /= n);
            return;
        }
    }
}

fn fill_simplex(out: &mut [f64], g: &mut SeededGenerator) {
    loop {
        let mut sum = 0.0;
        for x in out.iter_mut() {
            *x = g.unit_exponential();
            sum += *x;
        }
        if sum > 0.0 {
            out.iter_mut().for_each(|x| *x /= sum);
            return;
        }
    }
}

/// Uniform point of the unit sphere `S^dim` (a vector of length `dim + 1`).
///
/// # Panics
///
/// If `dim == 0`.
pub fn sphere_point(dim: usize, g: &mut SeededGenerator) -> Vec<f64> {
    assert!(dim >= 1, "sphere dimension must be at least 1");
    let mut v = alloc::vec![0.0; dim + 1];
    fill_sphere(&mut v, g);
    v
}

/// Uniform point of the simplex `Δ^k` (a probability vector of length `k + 1`).
///
/// # Panics
///
/// If `k == 0`.
pub fn simplex_point(k: usize, g: &mut SeededGenerator) -> Vec<f64> {
    assert!(k >= 1, "simplex dimension must be at least 1");
    let mut v = alloc::vec![0.0; k + 1];
    fill_simplex(&mut v, g);
    v
}

fn draw(model: Model, g: &mut SeededGenerator) -> Strategy {
    match model {
        Model::Classical => {
            let mut p = [0.0; 8];
            fill_simplex(&mut p, g);
            Strategy::Classical(ClassicalStrategy::new(p).expect("normalized simplex draw"))
        }
        Model::Prequant => {
            let mut x = [0.0; 16];
            fill_sphere(&mut x, g);
            Strategy::Prequant(PrequantStrategy::new(x).expect("normalized sphere draw"))
        }
        Model::Quant => {
            let mut x = [0.0; 3];
            fill_sphere(&mut x, g);
            Strategy::Quant(QuantumStrategy::new(x[0], x[1], x[2]).expect("normalized sphere draw"))
        }
    }
}

/// Number of chunks a batch of `n` strategies is split into.
pub fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_SIZE)
}

/// The strategies of chunk `index` of an `n`-strategy batch.
pub fn sample_chunk(model: Model, n: usize, seed: u64, index: usize) -> Vec<Strategy> {
    let start = index * CHUNK_SIZE;
    let len = n.saturating_sub(start).min(CHUNK_SIZE);
    let mut g = SeededGenerator::new(chunk_seed(seed, index as u64));
    (0..len).map(|_| draw(model, &mut g)).collect()
}

/// Lazily yields the strategies of an `n`-strategy batch in order.
pub fn sample_iter(model: Model, n: usize, seed: u64) -> impl Iterator<Item = Strategy> {
    let mut index = 0usize;
    let mut g = SeededGenerator::new(chunk_seed(seed, 0));
    (0..n).map(move |i| {
        if i / CHUNK_SIZE != index {
            index = i / CHUNK_SIZE;
            g = SeededGenerator::new(chunk_seed(seed, index as u64));
        }
        draw(model, &mut g)
    })
}

/// `n` independent uniform strategies of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub model: Model,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    /// Assembles a batch from chunks produced elsewhere, in chunk order.
    pub fn from_chunks(model: Model, seed: u64, chunks: Vec<Vec<Strategy>>) -> Self {
        Self {
            model,
            seed,
            strategies: chunks.into_iter().flatten().collect(),
        }
    }
}

pub fn sample(model: Model, n: usize, seed: u64) -> SampleBatch {
    SampleBatch {
        model,
        seed,
        strategies: sample_iter(model, n, seed).collect(),
    }
}

/// Uniform on the 7-simplex of mixture weights.
pub fn sample_classical(n: usize, seed: u64) -> SampleBatch {
    sample(Model::Classical, n, seed)
}

/// Uniform on S¹⁵.
pub fn sample_prequant(n: usize, seed: u64) -> SampleBatch {
    sample(Model::Prequant, n, seed)
}

/// Uniform on S².
pub fn sample_quant(n: usize, seed: u64) -> SampleBatch {
    sample(Model::Quant, n, seed)
}
