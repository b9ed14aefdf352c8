//! Seeded samplers for the Gaussian, Laplace and exponential noise the mechanisms draw.
//!
//! Every sample derives from an [`RngStream`], a ChaCha20 generator keyed by a 64-bit seed
//! and a 64-bit stream index. Equal `(seed, index)` pairs replay identical sequences;
//! distinct indices select independent ChaCha streams.
//!
//! Exponential noise uses the *rate* convention: `Exp(σ)` has density `σ e^{−σz}` on
//! `z ≥ 0`, mean `1/σ` and second moment `2/σ²`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates of a random stream: enough to replay it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub seed: u64,
    pub index: u64,
}

impl StreamId {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    /// A derived stream for sub-task `key` (trial, repetition, ...).
    pub fn child(self, key: u64) -> Self {
        Self { seed: self.seed, index: mix(self.index ^ mix(key.wrapping_add(0x632b_e59b_d9b4_e019))) }
    }

    pub fn open(self) -> RngStream {
        RngStream::from_id(self)
    }
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    id: StreamId,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        Self::from_id(StreamId::new(seed, index))
    }

    pub fn from_id(id: StreamId) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(id.seed);
        rng.set_stream(id.index);
        Self { id, rng }
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    /// A fresh stream for sub-task `key`, independent of this stream's position.
    pub fn child(&self, key: u64) -> RngStream {
        self.id.child(key).open()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("dim", "noise dimension must be positive"));
    }
    Ok(())
}

fn check_scale(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0 && value.is_finite()) {
        return Err(Error::invalid(name, format!("must be a nonnegative finite number, got {value}")));
    }
    Ok(())
}

/// `dim` i.i.d. draws from `N(0, σ²)`.
pub fn gaussian_vector(dim: usize, sigma: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_dim(dim)?;
    check_scale("sigma", sigma)?;
    if sigma == 0.0 {
        return Ok(vec![0.0; dim]);
    }
    Ok((0..dim).map(|_| {
        let z: f64 = StandardNormal.sample(rng);
        sigma * z
    }).collect())
}

/// `dim` i.i.d. draws from the Laplace law with density `e^{−|z|/b} / 2b`.
pub fn laplace_vector(dim: usize, scale: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_dim(dim)?;
    check_scale("b", scale)?;
    if scale == 0.0 {
        return Ok(vec![0.0; dim]);
    }
    Ok((0..dim)
        .map(|_| {
            let magnitude: f64 = Exp1.sample(rng);
            if rng.random::<bool>() {
                scale * magnitude
            } else {
                -scale * magnitude
            }
        })
        .collect())
}

/// `dim` i.i.d. draws from `Exp(rate)`, mean `1/rate`.
pub fn exponential_vector(dim: usize, rate: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_dim(dim)?;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::invalid("rate", format!("must be positive and finite, got {rate}")));
    }
    let law = Exp::new(rate).map_err(|e| Error::invalid("rate", e.to_string()))?;
    Ok((0..dim).map(|_| law.sample(rng)).collect())
}
