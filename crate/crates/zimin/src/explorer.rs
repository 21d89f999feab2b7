//! Exact small-case search and Monte Carlo threshold experiments.
//!
//! The search walks canonical words only — first occurrences of symbols
//! appear in increasing id order — and recovers true counts by multiplying
//! with the number of injective relabelings `q!/(q-k)!`. A branch is cut
//! as soon as extending the word creates a Zimin image; since the parent
//! was free of one, any new image must end at the freshly appended symbol,
//! which keeps the per-node check incremental.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{Alphabet, Symbol, Word};
use crate::zimin_check::contains_zimin;

/// Outcome of an exhaustive avoidance search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: u32,
    pub q: u32,
    /// A longest Zimin-avoiding word found (lexicographically least
    /// canonical one of its length).
    pub longest: Word,
    /// Whether the search space was exhausted.
    pub exact: bool,
    /// `f(n, q)` — the longest avoiding length plus one — when exact.
    pub value: Option<u64>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    /// Re-verify the claims: the longest word avoids the level, and, when
    /// exact, every one-symbol extension contains it.
    pub fn verify(&self) -> bool {
        if contains_zimin(&self.longest, self.n) {
            return false;
        }
        if self.exact {
            for c in 0..self.q {
                let mut symbols = self.longest.symbols().to_vec();
                symbols.push(c);
                let w = Word::new(Alphabet::new(self.q).unwrap(), symbols).unwrap();
                if !contains_zimin(&w, self.n) {
                    return false;
                }
            }
        }
        true
    }
}

/// Per-length counts of Zimin-avoiding words.
#[derive(Clone, Debug)]
pub struct AvoidCounts {
    pub n: u32,
    pub q: u32,
    /// `counts[l]` = number of avoiding words of length `l`.
    pub counts: Vec<BigUint>,
    pub exact: bool,
    pub nodes: u64,
}

/// Incremental DFS state over a growing word.
struct Dfs {
    n: u32,
    q: u32,
    word: Vec<Symbol>,
    /// positions of each symbol, ascending
    occ: Vec<Vec<u32>>,
    /// s2[i]: least j >= i+2 with word[j] == word[i]
    s2: Vec<Option<u32>>,
    /// undo log per push: entries of s2 that were set
    undo: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Dfs {
    fn new(n: u32, q: u32, budget: u64) -> Self {
        Dfs {
            n,
            q,
            word: Vec::new(),
            occ: vec![Vec::new(); q as usize],
            s2: Vec::new(),
            undo: Vec::new(),
            nodes: 0,
            budget,
            exhausted: false,
        }
    }

    fn push(&mut self, c: Symbol) {
        let p = self.word.len() as u32;
        let mut undo = Vec::new();
        let list = &self.occ[c as usize];
        // only the last two occurrences of c can still lack an s2 value
        for &i in list.iter().rev().take(2) {
            if self.s2[i as usize].is_none() && p >= i + 2 {
                self.s2[i as usize] = Some(p);
                undo.push(i);
            }
        }
        self.word.push(c);
        self.occ[c as usize].push(p);
        self.s2.push(None);
        self.undo.push(undo);
    }

    fn pop(&mut self) {
        let c = self.word.pop().expect("pop on empty word");
        self.occ[c as usize].pop();
        self.s2.pop();
        for i in self.undo.pop().expect("undo entry") {
            self.s2[i as usize] = None;
        }
    }

    /// Does the current word contain a level-`n` image ending at its last
    /// position? Correct under the invariant that the word without its
    /// last symbol contains no level-`n` image at all.
    fn creates_zimin_at_end(&self) -> bool {
        let n = self.n;
        let len = self.word.len();
        if n == 1 {
            return len >= 1;
        }
        if len < (1usize << n) - 1 {
            return false;
        }
        let p = len - 1;
        if n == 2 {
            let c = self.word[p];
            return self.occ[c as usize].first().is_some_and(|&f| (f as usize) + 2 <= p);
        }
        // e_{n-1} via the level tables; level 2 is maintained incrementally
        let e_prev = self.min_ends_up_to(n - 1);
        for a in 0..p {
            let Some(end) = e_prev[a] else { continue };
            let ell = end as usize - a + 1;
            let Some(j) = (p + 1).checked_sub(ell) else { continue };
            if j > a + ell && self.word[a..a + ell] == self.word[j..=p] {
                return true;
            }
        }
        false
    }

    /// Suffix-minimal ends of level-`m` images for `m = 2..=top`, returning
    /// the top row. Level 2 reads the maintained `s2`; higher levels use
    /// the block recurrence with direct comparisons (desk-scale words).
    fn min_ends_up_to(&self, top: u32) -> Vec<Option<u32>> {
        let len = self.word.len();
        let suffix_min = |s: &[Option<u32>]| {
            let mut e = vec![None; len];
            let mut best: Option<u32> = None;
            for i in (0..len).rev() {
                if let Some(v) = s[i] {
                    best = Some(best.map_or(v, |b: u32| b.min(v)));
                }
                e[i] = best;
            }
            e
        };
        let mut e = suffix_min(&self.s2);
        for _level in 3..=top {
            let mut s: Vec<Option<u32>> = vec![None; len];
            for i in 0..len {
                let Some(end) = e[i] else { continue };
                let ell = end as usize - i + 1;
                let c = self.word[i];
                let list = &self.occ[c as usize];
                let from = list.partition_point(|&x| (x as usize) < i + ell + 1);
                for &j in &list[from..] {
                    let j = j as usize;
                    if j + ell > len {
                        break;
                    }
                    if self.word[i..i + ell] == self.word[j..j + ell] {
                        s[i] = Some((j + ell - 1) as u32);
                        break;
                    }
                }
            }
            e = suffix_min(&s);
        }
        e
    }
}

/// Exhaustive search for `f(n, q)` by canonical-word DFS with incremental
/// containment pruning. `budget` caps the number of extensions tried; on
/// exhaustion the best word so far is returned with `exact = false`.
pub fn exact_f(n: u32, q: u32, budget: u64) -> SearchResult {
    let start = Instant::now();
    let mut dfs = Dfs::new(n, q, budget);
    let mut longest: Vec<Symbol> = Vec::new();
    search(&mut dfs, 0, &mut |word, _| {
        if word.len() > longest.len() {
            longest = word.to_vec();
        }
    });
    let exact = !dfs.exhausted;
    let longest = Word::new(Alphabet::new(q).unwrap(), longest).unwrap();
    let result = SearchResult {
        n,
        q,
        value: exact.then(|| longest.len() as u64 + 1),
        longest,
        exact,
        nodes: dfs.nodes,
        elapsed: start.elapsed(),
    };
    debug_assert!(result.verify());
    result
}

/// Count Zimin-avoiding words of each length up to `max_len`, exactly,
/// by canonical DFS weighted with the relabeling orbit sizes.
pub fn count_avoiding(n: u32, q: u32, max_len: usize, budget: u64) -> AvoidCounts {
    // canonical counts by (length, symbols used)
    let mut canon: HashMap<(usize, u32), u64> = HashMap::new();
    let mut dfs = Dfs::new(n, q, budget);
    search(&mut dfs, max_len, &mut |word, used| {
        *canon.entry((word.len(), used)).or_insert(0) += 1;
    });
    let mut counts = vec![BigUint::zero(); max_len + 1];
    for (&(len, used), &c) in &canon {
        if len > max_len {
            continue;
        }
        // injective relabelings: q * (q-1) * .. * (q-used+1)
        let mut orbit = BigUint::one();
        for x in 0..used {
            orbit *= q - x;
        }
        counts[len] += orbit * c;
    }
    AvoidCounts { n, q, counts, exact: !dfs.exhausted, nodes: dfs.nodes }
}

/// Depth-first walk over canonical avoiding words, invoking `visit` on
/// every one (including the empty word). `max_len = 0` means unbounded.
fn search(dfs: &mut Dfs, max_len: usize, visit: &mut dyn FnMut(&[Symbol], u32)) {
    fn rec(dfs: &mut Dfs, used: u32, max_len: usize, visit: &mut dyn FnMut(&[Symbol], u32)) {
        visit(&dfs.word, used);
        if max_len != 0 && dfs.word.len() >= max_len {
            return;
        }
        if dfs.exhausted {
            return;
        }
        let limit = dfs.q.min(used + 1);
        for c in 0..limit {
            dfs.nodes += 1;
            if dfs.nodes > dfs.budget {
                dfs.exhausted = true;
                return;
            }
            dfs.push(c);
            if !dfs.creates_zimin_at_end() {
                rec(dfs, used.max(c + 1), max_len, visit);
            }
            dfs.pop();
            if dfs.exhausted {
                return;
            }
        }
    }
    rec(dfs, 0, max_len, visit);
}

/// Monte Carlo estimate of the containment probability across lengths.
#[derive(Clone, Debug)]
pub struct ThresholdEstimate {
    pub n: u32,
    pub q: u32,
    pub lengths: Vec<usize>,
    pub trials: u32,
    pub hits: Vec<u32>,
    pub probs: Vec<f64>,
    /// Two-sided 95% Wilson intervals.
    pub ci95: Vec<(f64, f64)>,
    pub seed: u64,
    /// Smallest sampled length with empirical probability at least 1/2.
    pub crossing: Option<usize>,
}

fn wilson95(hits: u32, trials: u32) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Fraction of uniformly random words containing the level-`n` Zimin word,
/// per length. Each trial derives its own generator from `(seed, length
/// index, trial)`, so results do not depend on the worker count.
pub fn estimate_threshold(
    n: u32,
    q: u32,
    lengths: &[usize],
    trials: u32,
    seed: u64,
    jobs: usize,
) -> ThresholdEstimate {
    let alphabet = Alphabet::new(q).expect("q >= 1");
    let run_trial = |len_idx: usize, trial: u32| -> bool {
        let mix = splitmix64(seed ^ splitmix64((len_idx as u64) << 32 | trial as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(mix);
        let symbols: Vec<Symbol> = (0..lengths[len_idx]).map(|_| rng.gen_range(0..q)).collect();
        let w = Word::new(alphabet, symbols).expect("symbols in range");
        contains_zimin(&w, n)
    };

    let mut hits = vec![0u32; if trials == 0 { 0 } else { lengths.len() }];
    if trials > 0 {
        if jobs <= 1 {
            for (li, h) in hits.iter_mut().enumerate() {
                *h = (0..trials).filter(|&t| run_trial(li, t)).count() as u32;
            }
        } else {
            let tasks: Vec<(usize, u32)> =
                (0..lengths.len()).flat_map(|li| (0..trials).map(move |t| (li, t))).collect();
            let chunk = tasks.len().div_ceil(jobs);
            let results: Vec<Vec<(usize, bool)>> = std::thread::scope(|scope| {
                tasks
                    .chunks(chunk.max(1))
                    .map(|slice| {
                        scope.spawn(move || {
                            slice.iter().map(|&(li, t)| (li, run_trial(li, t))).collect()
                        })
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .map(|h| h.join().expect("worker"))
                    .collect()
            });
            for part in results {
                for (li, hit) in part {
                    hits[li] += hit as u32;
                }
            }
        }
    }

    let probs: Vec<f64> = hits.iter().map(|&h| h as f64 / trials.max(1) as f64).collect();
    let ci95: Vec<(f64, f64)> = hits.iter().map(|&h| wilson95(h, trials)).collect();
    let crossing = probs
        .iter()
        .position(|&p| p >= 0.5)
        .map(|i| lengths[i]);
    ThresholdEstimate { n, q, lengths: lengths.to_vec(), trials, hits, probs, ci95, seed, crossing }
}
