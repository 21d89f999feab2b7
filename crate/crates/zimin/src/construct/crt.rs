//! Explicit periodic construction: the alphabet splits into `t` parts of
//! size `S`, interval `it + j` gets the lexicographic permutation of part
//! `j` with index `i mod r_j`, where `r_j = S! - p_j` and `p_j` is the
//! `j`-th prime. Any letter of the word is computable in time polynomial
//! in the alphabet size via factorial-number-system unranking.
//!
//! Pairwise coprimality of the periods is *verified* at build time rather
//! than assumed, and degenerate periods are rejected.

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};

/// Largest part size whose factorial fits in `u128`.
const MAX_PART_SIZE: u32 = 34;

#[derive(Clone, Debug)]
pub struct CrtSchedule {
    t: u32,
    s: u32,
    parts: Vec<Vec<Symbol>>,
    primes: Vec<u64>,
    periods: Vec<u128>,
    factorials: Vec<u128>, // 0! ..= S!
    total_len: u128,
}

fn first_primes(t: u32) -> Vec<u64> {
    let mut primes = Vec::with_capacity(t as usize);
    let mut n = 2u64;
    while primes.len() < t as usize {
        if primes.iter().all(|&p| !n.is_multiple_of(p)) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CrtSchedule {
    /// Validate and build a schedule with `t` parts of size `s`; the
    /// alphabet is `0..t*s` split into consecutive blocks.
    pub fn new(t: u32, s: u32) -> Result<Self> {
        if t < 2 {
            return Err(Error::BadSchedule(format!("need at least 2 parts, got {t}")));
        }
        if s > MAX_PART_SIZE {
            return Err(Error::SizeLimit {
                what: "part size",
                requested: s as u64,
                limit: MAX_PART_SIZE as u64,
            });
        }
        let mut factorials = vec![1u128; s as usize + 1];
        for i in 1..=s as usize {
            factorials[i] = factorials[i - 1] * i as u128;
        }
        let s_fact = factorials[s as usize];
        let primes = first_primes(t);
        let mut periods = Vec::with_capacity(t as usize);
        for (j, &p) in primes.iter().enumerate() {
            let r = (s_fact).saturating_sub(p as u128);
            if r < 2 {
                return Err(Error::BadSchedule(format!(
                    "period r_{} = {}! - {} = {} is below 2",
                    j + 1,
                    s,
                    p,
                    s_fact as i128 - p as i128
                )));
            }
            periods.push(r);
        }
        for i in 0..periods.len() {
            for j in i + 1..periods.len() {
                if gcd(periods[i], periods[j]) != 1 {
                    return Err(Error::BadSchedule(format!(
                        "periods r_{} = {} and r_{} = {} share a factor",
                        i + 1,
                        periods[i],
                        j + 1,
                        periods[j]
                    )));
                }
            }
        }
        // N = t * S * prod_{j=2..t} r_j
        let mut total: u128 = t as u128 * s as u128;
        for &r in &periods[1..] {
            total = total.checked_mul(r).ok_or(Error::SizeLimit {
                what: "schedule length bits",
                requested: 128,
                limit: 127,
            })?;
        }
        let parts = (0..t)
            .map(|j| (j * s..(j + 1) * s).collect::<Vec<Symbol>>())
            .collect();
        Ok(CrtSchedule { t, s, parts, primes, periods, factorials, total_len: total })
    }

    pub fn part_count(&self) -> u32 {
        self.t
    }

    pub fn part_size(&self) -> u32 {
        self.s
    }

    pub fn alphabet_size(&self) -> u32 {
        self.t * self.s
    }

    pub fn periods(&self) -> &[u128] {
        &self.periods
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Total word length `N = t*S*prod_{j>=2} r_j`.
    pub fn total_len(&self) -> u128 {
        self.total_len
    }

    /// The lexicographic permutation of `part` with the given index, via
    /// factorial-number-system unranking.
    fn unrank(&self, part: usize, mut index: u128) -> Vec<Symbol> {
        let mut avail = self.parts[part].clone();
        let mut out = Vec::with_capacity(avail.len());
        for pos in 0..self.s as usize {
            let f = self.factorials[self.s as usize - 1 - pos];
            let d = (index / f) as usize;
            index %= f;
            out.push(avail.remove(d));
        }
        out
    }

    /// The symbol at `pos` without materializing the word.
    pub fn letter_at(&self, pos: u128) -> Result<Symbol> {
        if pos >= self.total_len {
            return Err(Error::invalid(format!(
                "position {pos} is beyond the schedule length {}",
                self.total_len
            )));
        }
        let interval = pos / self.s as u128;
        let offset = (pos % self.s as u128) as usize;
        let part = (interval % self.t as u128) as usize;
        let turn = interval / self.t as u128;
        let index = turn % self.periods[part];
        Ok(self.unrank(part, index)[offset])
    }

    /// Materialize the whole word; agrees with `letter_at` at every
    /// position. Fails when the word would not fit in memory.
    pub fn materialize(&self) -> Result<Word> {
        const CAP: u128 = 100_000_000;
        if self.total_len > CAP {
            return Err(Error::SizeLimit {
                what: "materialized schedule length",
                requested: u64::MAX,
                limit: CAP as u64,
            });
        }
        let n = self.total_len as usize;
        let mut symbols = Vec::with_capacity(n);
        let intervals = n / self.s as usize;
        for k in 0..intervals {
            let part = k % self.t as usize;
            let turn = (k / self.t as usize) as u128;
            let index = turn % self.periods[part];
            symbols.extend(self.unrank(part, index));
        }
        Word::new(Alphabet::new(self.alphabet_size())?, symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zimin_check::contains_zimin;

    #[test]
    fn the_desk_schedule_validates() {
        let sched = CrtSchedule::new(2, 4).unwrap();
        assert_eq!(sched.periods(), &[22, 21]);
        assert_eq!(sched.total_len(), 168);
        assert_eq!(sched.alphabet_size(), 8);
    }

    #[test]
    fn degenerate_part_sizes_are_rejected() {
        // S = 2: r_1 = 2! - 2 = 0
        let err = CrtSchedule::new(2, 2).unwrap_err();
        assert!(err.to_string().contains("r_1"), "{err}");
        assert!(CrtSchedule::new(2, 1).is_err());
        assert!(CrtSchedule::new(1, 4).is_err());
    }

    #[test]
    fn letter_at_matches_materialized_word() {
        for (t, s) in [(2u32, 3u32), (2, 4)] {
            let sched = CrtSchedule::new(t, s).unwrap();
            let w = sched.materialize().unwrap();
            assert_eq!(w.len() as u128, sched.total_len());
            for pos in 0..w.len() {
                assert_eq!(
                    sched.letter_at(pos as u128).unwrap(),
                    w.symbols()[pos],
                    "t={t} s={s} pos={pos}"
                );
            }
        }
        let sched = CrtSchedule::new(2, 4).unwrap();
        assert!(sched.letter_at(168).is_err());
    }

    #[test]
    fn intervals_are_permutations_of_their_parts() {
        let sched = CrtSchedule::new(2, 4).unwrap();
        let w = sched.materialize().unwrap();
        for (k, chunk) in w.symbols().chunks(4).enumerate() {
            let part = k % 2;
            let mut sorted = chunk.to_vec();
            sorted.sort_unstable();
            let expect: Vec<Symbol> = (part as u32 * 4..(part as u32 + 1) * 4).collect();
            assert_eq!(sorted, expect, "interval {k}");
        }
    }

    #[test]
    fn desk_schedule_avoids_level_three() {
        let w = CrtSchedule::new(2, 4).unwrap().materialize().unwrap();
        assert!(!contains_zimin(&w, 3));
    }

    #[test]
    fn unranking_is_lexicographic() {
        let sched = CrtSchedule::new(2, 3).unwrap();
        let perms: Vec<Vec<Symbol>> = (0..4).map(|i| sched.unrank(0, i)).collect();
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert_eq!(perms[1], vec![0, 2, 1]);
        assert_eq!(perms[2], vec![1, 0, 2]);
        assert_eq!(perms[3], vec![1, 2, 0]);
    }
}
