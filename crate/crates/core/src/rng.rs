//! Counter-based uniform streams.
//!
//! Every uniform is a pure function of `(seed, stream, index)`: the stream key
//! is a SplitMix64 hash of the seed and the stream id (the observation's row
//! index), and draw `i` is the SplitMix64 output for counter `key + (i+1)·φ`.
//! Results therefore do not depend on how observations are scheduled across
//! threads.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_key(seed: u64, stream: u64) -> u64 {
    mix64(mix64(seed ^ 0x6A09_E667_F3BC_C909).wrapping_add(stream.wrapping_mul(GOLDEN)))
}

#[inline]
fn to_open_unit(bits: u64) -> f64 {
    // 52 random bits centred in their cell: never exactly 0 or 1.
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// The `index`-th uniform of stream `stream` under `seed`, in the open
/// interval (0, 1).
pub fn uniform_at(seed: u64, stream: u64, index: u64) -> f64 {
    let key = stream_key(seed, stream);
    to_open_unit(mix64(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN))))
}

/// Sequential view over one observation's stream.
#[derive(Debug, Clone)]
pub struct Substream {
    key: u64,
    counter: u64,
}

impl Substream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            key: stream_key(seed, stream),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Next uniform in (0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        to_open_unit(self.next_u64())
    }

    /// Number of draws consumed so far.
    pub fn position(&self) -> u64 {
        self.counter
    }
}
