//! Random interval model: the alphabet splits into `t` parts of size `S`;
//! the word is a run of intervals, the `k`-th a uniformly random
//! permutation of part `((k-1) mod t) + 1`. Two instances of one symbol
//! are then always at least `(t-1)*S` positions apart. The distinguished
//! variant reserves an extra symbol `d` and inserts it after every `t`-th
//! interval, so every `d`-free subword has no repeated symbol at all.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};

#[derive(Clone, Debug)]
pub struct IntervalModel {
    q: u32,
    t: u32,
    s: u32,
    distinguished: Option<Symbol>,
    parts: Vec<Vec<Symbol>>,
}

impl IntervalModel {
    /// Explicit part layout: `t` parts of size `s` with `t*s <= q`
    /// (`t*s <= q-1` when a distinguished symbol is reserved; it gets the
    /// id `q-1`). Leftover symbols are simply unused.
    pub fn new(q: u32, t: u32, s: u32, distinguished: bool) -> Result<Self> {
        if q < 4 {
            return Err(Error::invalid(format!("interval model needs q >= 4, got {q}")));
        }
        if t < 2 || s < 1 {
            return Err(Error::invalid(format!("need t >= 2 and s >= 1, got t={t} s={s}")));
        }
        let available = q - distinguished as u32;
        if t * s > available {
            return Err(Error::invalid(format!(
                "t*s = {} exceeds the {available} usable symbols",
                t * s
            )));
        }
        let parts = (0..t).map(|j| (j * s..(j + 1) * s).collect()).collect();
        Ok(IntervalModel {
            q,
            t,
            s,
            distinguished: distinguished.then_some(q - 1),
            parts,
        })
    }

    /// Default parameters: `t = max(2, floor(log2 q))` parts of size
    /// `floor(available / t)`.
    pub fn with_defaults(q: u32, distinguished: bool) -> Result<Self> {
        if q < 4 {
            return Err(Error::invalid(format!("interval model needs q >= 4, got {q}")));
        }
        let t = 2.max(q.ilog2());
        let available = q - distinguished as u32;
        let s = available / t;
        if s == 0 {
            return Err(Error::invalid(format!("no room for parts at q={q}, t={t}")));
        }
        IntervalModel::new(q, t, s, distinguished)
    }

    pub fn part_count(&self) -> u32 {
        self.t
    }

    pub fn part_size(&self) -> u32 {
        self.s
    }

    pub fn distinguished(&self) -> Option<Symbol> {
        self.distinguished
    }

    /// Guaranteed minimal distance between equal symbols: `(t-1)*S`.
    pub fn min_repeat_distance(&self) -> usize {
        (self.t as usize - 1) * self.s as usize
    }

    /// Generate the word for `num_intervals` intervals; deterministic for a
    /// fixed seed.
    pub fn generate(&self, num_intervals: usize, seed: u64) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut symbols: Vec<Symbol> = Vec::with_capacity(
            num_intervals * self.s as usize + num_intervals / self.t as usize,
        );
        let mut scratch: Vec<Symbol> = Vec::new();
        for k in 1..=num_intervals {
            scratch.clone_from(&self.parts[(k - 1) % self.t as usize]);
            scratch.shuffle(&mut rng);
            symbols.extend_from_slice(&scratch);
            if let Some(d) = self.distinguished {
                if k % self.t as usize == 0 {
                    symbols.push(d);
                }
            }
        }
        Word::new(Alphabet::new(self.q).expect("q >= 4"), symbols).expect("symbols in range")
    }
}

/// Convenience wrapper using the default part layout.
pub fn random_interval_word(
    q: u32,
    num_intervals: usize,
    seed: u64,
    distinguished: bool,
) -> Result<Word> {
    Ok(IntervalModel::with_defaults(q, distinguished)?.generate(num_intervals, seed))
}
