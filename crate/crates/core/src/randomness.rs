//! Addressable random tapes.
//!
//! A tape is a `(seed, address)` pair. Its `j`-th permutation and its `j`-th
//! auxiliary stream depend on nothing else, so a call site sees the same
//! randomness whatever else ran before it. This is what consistency of the
//! algorithms rests on.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomTape {
    seed: u64,
    key: u64,
    depth: u32,
}

impl RandomTape {
    pub fn new(seed: u64) -> Self {
        RandomTape {
            seed,
            key: splitmix64(seed ^ 0x5EED_7A9E_0000_0001),
            depth: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sub-tape at `index` below this one.
    pub fn child(&self, index: u64) -> RandomTape {
        RandomTape {
            seed: self.seed,
            key: splitmix64(self.key.rotate_left(17) ^ splitmix64(index ^ 0xC4CE_B9FE_1A85_EC53)),
            depth: self.depth + 1,
        }
    }

    /// Sub-tapes `0..m`. Deterministic and non-consuming.
    pub fn split(&self, m: usize) -> Vec<RandomTape> {
        (0..m as u64).map(|i| self.child(i)).collect()
    }

    /// Independent generator number `index` of this tape.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut bytes = [0u8; 32];
        for (i, chunk) in bytes.chunks_mut(8).enumerate() {
            let word = splitmix64(self.key.wrapping_add(i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(bytes);
        rng.set_stream(index);
        rng
    }

    /// The `index`-th permutation of `0..n` on this tape (Fisher–Yates).
    /// Algorithms number their permutations from 1; stream 0 is left for
    /// auxiliary draws.
    pub fn permutation(&self, index: u64, n: usize) -> Permutation {
        let mut rng = self.stream(index);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut ranks = alloc::vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            ranks[v] = r;
        }
        Permutation { ranks }
    }
}

/// A bijection on `0..n`, stored as the rank of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    ranks: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            ranks: (0..n).collect(),
        }
    }

    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = alloc::vec![false; n];
        for &r in &ranks {
            if r >= n || seen[r] {
                return Err(Error::InvalidParameter(alloc::format!(
                    "rank array is not a permutation of 0..{n}"
                )));
            }
            seen[r] = true;
        }
        Ok(Permutation { ranks })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.ranks[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Elements of `set` in ascending rank.
    pub fn induced_order(&self, set: &[usize]) -> Vec<usize> {
        let mut out = set.to_vec();
        out.sort_unstable_by_key(|&v| self.ranks[v]);
        out
    }

    /// The whole ground set in permutation order.
    pub fn order(&self) -> Vec<usize> {
        let mut order = alloc::vec![0; self.len()];
        for (v, &r) in self.ranks.iter().enumerate() {
            order[r] = v;
        }
        order
    }
}
