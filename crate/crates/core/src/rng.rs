//! Keyed, counter-based random streams.
//!
//! A stream is addressed by `(master_seed, replication, round, tag)`. The key
//! is folded into a 64-bit state with the SplitMix64 finalizer, and the n-th
//! draw is the finalizer applied to `state + (n + 1) * GAMMA`. Two streams
//! never share state, so the sequence a stream yields does not depend on how
//! draws from other streams are interleaved or on which thread runs them.

use crate::error::{Error, Result};
use crate::grid::Forecast;
use crate::record::Outcome;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Purpose of a stream within one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamTag {
    Nature = 1,
    Forecaster = 2,
    Outcome = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub master_seed: u64,
    pub replication: u32,
    pub round: u32,
    pub tag: StreamTag,
}

#[derive(Debug, Clone)]
pub struct RngStream {
    key: StreamKey,
    state: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, replication: u32, round: u32, tag: StreamTag) -> Self {
        Self::from_key(StreamKey {
            master_seed,
            replication,
            round,
            tag,
        })
    }

    pub fn from_key(key: StreamKey) -> Self {
        let mut h = mix64(key.master_seed ^ 0x5851_f42d_4c95_7f2d);
        h = mix64(h ^ (key.replication as u64).wrapping_mul(GAMMA));
        h = mix64(
            h ^ (key.round as u64)
                .wrapping_add(1)
                .wrapping_mul(0xd1b5_4a32_d192_ed03),
        );
        h = mix64(h ^ (key.tag as u64).wrapping_mul(0xaef1_7502_108e_f2d9));
        Self {
            key,
            state: h,
            counter: 0,
        }
    }

    pub fn key(&self) -> StreamKey {
        self.key
    }

    /// Number of draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.state.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform draw on `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }
}

/// Draws `Y ~ Bernoulli(p)` from `stream`.
///
/// The endpoints are exact: `p = 0` never succeeds and `p = 1` always does.
/// The stream's counter advances by one in every case.
pub fn bernoulli(p: Forecast, stream: &mut RngStream) -> Outcome {
    let u = stream.uniform();
    Outcome::from(u < p.value())
}

/// Like [`bernoulli`], for a raw probability that has not been put on a grid.
pub fn bernoulli_f64(p: f64, stream: &mut RngStream) -> Result<Outcome> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(p));
    }
    Ok(Outcome::from(stream.uniform() < p))
}
