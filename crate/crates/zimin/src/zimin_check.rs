//! Zimin-word containment.
//!
//! A word contains the level-`n` Zimin word when some subword factors as
//! `X·Y·X` with `Y` nonempty and `X` an image of the level-`(n-1)` word.
//! Deciding this with generic pattern matching is exponential; instead we
//! run a level-by-level dynamic program over *minimal ends*:
//!
//! * `s_m(i)` — the least end index produced for level `m` from start `i`
//!   (`s_1(i) = i`: any single symbol is a level-1 image);
//! * `e_m(i)` — the suffix minimum of `s_m` over starts `>= i`, i.e. the
//!   least end of any level-`m` image starting at or after `i`;
//! * `s_{m+1}(i) = min { j + l - 1 }` over `j >= i + l + 1` with
//!   `lce(i, j) >= l`, where `l = e_m(i) - i + 1`.
//!
//! The recurrence is justified by a closure fact: if a block `B` *contains*
//! a level-`m` image — say `B = P·X'` with `X'` the image, which is how the
//! minimal block from `i` always splits — and `B` reappears disjointly as
//! `B · Y · B` with `Y` nonempty, then `X' · (Y P) · X'` is a level-`(m+1)`
//! image. Conversely any level-`(m+1)` image `X Y X` starting at `a` yields
//! such a recurring block: the minimal block from `a` is a prefix of `X` and
//! recurs at the second `X`. So the word contains the level-`(m+1)` Zimin
//! word exactly when some `s_{m+1}(i)` is finite, and the suffix minima are
//! the true minimal ends even though an individual `s_{m+1}(i)` may describe
//! an image starting strictly after `i`.
//!
//! Total cost is `O(n * N^2)` with the constant-time LCE oracle; the
//! per-symbol candidate lists usually make it far cheaper.

use crate::lce::LceTable;
use crate::word::{Word, ZIMIN_MAX_LEVEL};

/// Per-level minimal-end rows. Level `m` is 1-based.
pub struct MinEndTable {
    len: usize,
    levels: Vec<LevelRow>,
}

struct LevelRow {
    /// Minimal end from each start; `None` is the "no image" sentinel.
    s: Vec<Option<u32>>,
    /// Suffix minimum of `s` with the start attaining it.
    e: Vec<Option<(u32, u32)>>,
    /// Start of the recurring block's second occurrence (witness trace).
    second: Option<Vec<Option<u32>>>,
}

impl MinEndTable {
    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn levels(&self) -> u32 {
        self.levels.len() as u32
    }

    /// `s_m(i)`: least end index such that the DP produces a level-`m`
    /// image from start `i`, if any.
    pub fn s(&self, level: u32, i: usize) -> Option<usize> {
        self.levels[level as usize - 1].s[i].map(|v| v as usize)
    }

    /// `e_m(i)`: least end index of any level-`m` image starting at or
    /// after `i`, if any.
    pub fn e(&self, level: u32, i: usize) -> Option<usize> {
        self.levels[level as usize - 1].e[i].map(|(v, _)| v as usize)
    }
}

/// Nested interval decomposition witnessing a Zimin-word image. All
/// intervals are inclusive index pairs into the checked word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZiminWitness {
    pub n: u32,
    /// Outermost first: levels `n, n-1, .., 2`.
    pub levels: Vec<WitnessLevel>,
    /// The level-1 interval (a single symbol).
    pub base: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessLevel {
    pub level: u32,
    pub interval: (usize, usize),
    pub x_first: (usize, usize),
    pub y: (usize, usize),
    pub x_second: (usize, usize),
}

impl ZiminWitness {
    /// Re-derive every claim the witness makes against the word.
    pub fn validate(&self, w: &Word) -> Result<(), String> {
        let s = w.symbols();
        let check_interval = |(a, b): (usize, usize), what: &str| -> Result<(), String> {
            if a > b || b >= s.len() {
                return Err(format!("{what} interval ({a},{b}) out of bounds"));
            }
            Ok(())
        };
        if self.n == 0 {
            return Err("witness level must be at least 1".into());
        }
        check_interval(self.base, "base")?;
        if self.base.0 != self.base.1 {
            return Err("base interval must be a single symbol".into());
        }
        if self.levels.len() as u32 != self.n - 1 {
            return Err(format!(
                "expected {} levels, found {}",
                self.n - 1,
                self.levels.len()
            ));
        }
        let mut expect_level = self.n;
        for (k, lv) in self.levels.iter().enumerate() {
            if lv.level != expect_level {
                return Err(format!("level {} out of order", lv.level));
            }
            expect_level -= 1;
            check_interval(lv.interval, "copy")?;
            check_interval(lv.x_first, "first X")?;
            check_interval(lv.y, "Y")?;
            check_interval(lv.x_second, "second X")?;
            if lv.interval != (lv.x_first.0, lv.x_second.1) {
                return Err(format!("level {}: interval does not span X·Y·X", lv.level));
            }
            if lv.x_first.1 + 1 != lv.y.0 || lv.y.1 + 1 != lv.x_second.0 {
                return Err(format!("level {}: X, Y, X are not adjacent", lv.level));
            }
            let xlen = lv.x_first.1 - lv.x_first.0 + 1;
            if lv.x_second.1 - lv.x_second.0 + 1 != xlen {
                return Err(format!("level {}: X copies differ in length", lv.level));
            }
            if s[lv.x_first.0..=lv.x_first.1] != s[lv.x_second.0..=lv.x_second.1] {
                return Err(format!("level {}: X copies differ", lv.level));
            }
            // inner structure lives in the first X
            let inner = if k + 1 < self.levels.len() {
                self.levels[k + 1].interval
            } else {
                self.base
            };
            if inner != lv.x_first {
                return Err(format!("level {}: first X does not nest the inner copy", lv.level));
            }
        }
        let outer = self.levels.first().map_or(self.base, |lv| lv.interval);
        let min_len = zimin_min_len(self.n).ok_or("level too large")?;
        if outer.1 - outer.0 + 1 < min_len {
            return Err(format!(
                "outer interval shorter than the minimal image length {min_len}"
            ));
        }
        Ok(())
    }
}

/// Minimal length of a level-`n` image: every variable maps to at least one
/// symbol, so it is the Zimin word's own length `2^n - 1`.
fn zimin_min_len(n: u32) -> Option<usize> {
    if n >= usize::BITS {
        return None; // larger than any addressable word
    }
    Some((1usize << n) - 1)
}

/// True when `w` contains an image of the level-`n` Zimin word.
pub fn contains_zimin(w: &Word, n: u32) -> bool {
    if n == 0 {
        return true;
    }
    match zimin_min_len(n) {
        Some(need) if w.len() >= need => {}
        _ => return false,
    }
    let table = compute(w, n, false);
    table.levels[n as usize - 1].e.first().is_some_and(|e| e.is_some())
}

/// Least `e` such that the prefix `w[0..=e]` contains the level-`n` Zimin
/// word, or `None` when the whole word is free of it. Consistent with
/// `contains_zimin` on every prefix.
pub fn scan_free(w: &Word, n: u32) -> Option<usize> {
    if n == 0 {
        return if w.is_empty() { None } else { Some(0) };
    }
    match zimin_min_len(n) {
        Some(need) if w.len() >= need => {}
        _ => return None,
    }
    let table = compute(w, n, false);
    table.levels[n as usize - 1].e[0].map(|(end, _)| end as usize)
}

/// Build the full minimal-end table for levels `1..=n`.
pub fn min_end_table(w: &Word, n: u32) -> MinEndTable {
    assert!((1..=ZIMIN_MAX_LEVEL).contains(&n), "level out of range");
    compute(w, n, false)
}

/// A validated nested decomposition, when `w` contains the level-`n` word.
/// The decomposition with the least end index is returned.
pub fn zimin_witness(w: &Word, n: u32) -> Option<ZiminWitness> {
    if n == 0 {
        return None;
    }
    match zimin_min_len(n) {
        Some(need) if w.len() >= need => {}
        _ => return None,
    }
    if n == 1 {
        return Some(ZiminWitness { n, levels: Vec::new(), base: (0, 0) });
    }
    let table = compute(w, n, true);
    table.levels[n as usize - 1].e[0]?;
    let mut levels_out = Vec::with_capacity(n as usize - 1);
    // start from the DP start attaining the global minimal end
    let (_, mut i) = table.levels[n as usize - 1].e[0].unwrap();
    for m in (2..=n).rev() {
        let row = &table.levels[m as usize - 1];
        let prev = &table.levels[m as usize - 2];
        let i_us = i as usize;
        let (pend, parg) = prev.e[i_us].expect("finite s implies finite inner e");
        let ell = pend as usize - i_us + 1;
        let j = row.second.as_ref().unwrap()[i_us].expect("trace recorded") as usize;
        let cs = copy_start(&table, m - 1, parg as usize);
        let x_first = (cs, pend as usize);
        let x_second = (j + (cs - i_us), j + ell - 1);
        let y = (pend as usize + 1, x_second.0 - 1);
        levels_out.push(WitnessLevel {
            level: m,
            interval: (cs, x_second.1),
            x_first,
            y,
            x_second,
        });
        i = parg;
    }
    let base = levels_out.last().unwrap().x_first;
    let witness = ZiminWitness { n, levels: levels_out, base };
    debug_assert_eq!(witness.validate(w), Ok(()));
    Some(witness)
}

/// Actual start of the image the DP produces at `(level, dp_start)`: chase
/// the suffix-min arguments down to the level-1 single symbol.
fn copy_start(table: &MinEndTable, level: u32, dp_start: usize) -> usize {
    let mut m = level;
    let mut i = dp_start;
    while m >= 2 {
        let (_, arg) = table.levels[m as usize - 2].e[i].expect("inner row populated");
        i = arg as usize;
        m -= 1;
    }
    i
}

fn suffix_min(s: &[Option<u32>]) -> Vec<Option<(u32, u32)>> {
    let mut out = vec![None; s.len()];
    let mut best: Option<(u32, u32)> = None;
    for i in (0..s.len()).rev() {
        if let Some(v) = s[i] {
            if best.is_none_or(|(b, _)| v <= b) {
                best = Some((v, i as u32));
            }
        }
        out[i] = best;
    }
    out
}

fn compute(w: &Word, n: u32, trace: bool) -> MinEndTable {
    let len = w.len();
    let syms = w.symbols();

    let s1: Vec<Option<u32>> = (0..len).map(|i| Some(i as u32)).collect();
    let e1 = suffix_min(&s1);
    let mut levels = vec![LevelRow { s: s1, e: e1, second: None }];

    if n == 1 {
        return MinEndTable { len, levels };
    }

    let mut positions: Vec<Vec<u32>> = vec![Vec::new(); w.alphabet().size() as usize];
    for (i, &c) in syms.iter().enumerate() {
        positions[c as usize].push(i as u32);
    }

    let mut lce: Option<LceTable> = None;
    for m in 2..=n {
        let prev = &levels[m as usize - 2];
        let mut s = vec![None; len];
        let mut second = trace.then(|| vec![None; len]);
        let mut any = false;
        for i in 0..len {
            let Some((pend, _)) = prev.e[i] else { continue };
            let ell = pend as usize - i + 1;
            let list = &positions[syms[i] as usize];
            let lb = (i + ell + 1) as u32;
            let from = list.partition_point(|&p| p < lb);
            for &j in &list[from..] {
                let j = j as usize;
                if j + ell > len {
                    break;
                }
                let matches = ell == 1 || {
                    let t = lce.get_or_insert_with(|| LceTable::build(w));
                    t.lce(i, j) >= ell
                };
                if matches {
                    s[i] = Some((j + ell - 1) as u32);
                    if let Some(tr) = second.as_mut() {
                        tr[i] = Some(j as u32);
                    }
                    any = true;
                    break;
                }
            }
        }
        let e = suffix_min(&s);
        levels.push(LevelRow { s, e, second });
        if !any {
            for _ in m + 1..=n {
                levels.push(LevelRow {
                    s: vec![None; len],
                    e: vec![None; len],
                    second: trace.then(|| vec![None; len]),
                });
            }
            break;
        }
    }
    MinEndTable { len, levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{zimin, Alphabet, Word};

    fn w(text: &str) -> Word {
        Word::parse_infer(text).unwrap()
    }

    #[test]
    fn zimin_words_contain_themselves() {
        for n in 1..=12 {
            assert!(contains_zimin(&zimin(n).unwrap(), n), "level {n}");
        }
    }

    #[test]
    fn abacaba_contains_level_three() {
        assert!(contains_zimin(&w("abacaba"), 3));
    }

    #[test]
    fn aaa_contains_level_two() {
        assert!(contains_zimin(&w("aaa"), 2));
    }

    #[test]
    fn all_distinct_symbols_avoid_level_two() {
        for text in ["a", "ab", "abcdef", "bcadfe"] {
            assert!(!contains_zimin(&w(text), 2), "{text}");
        }
    }

    #[test]
    fn zimin_word_avoids_next_level() {
        for n in 1..=15 {
            assert!(!contains_zimin(&zimin(n).unwrap(), n + 1), "level {n}");
        }
    }

    #[test]
    fn empty_word_avoids_everything() {
        let e = Word::empty(Alphabet::new(1).unwrap());
        for n in 1..=5 {
            assert!(!contains_zimin(&e, n));
            assert_eq!(scan_free(&e, n), None);
        }
    }

    #[test]
    fn monotone_in_level() {
        let word = w("abacabaabacabaxabacaba");
        let mut top = 0;
        for n in 1..=6 {
            if contains_zimin(&word, n) {
                top = n;
            }
        }
        for n in 1..=top {
            assert!(contains_zimin(&word, n), "level {n} below {top}");
        }
    }

    #[test]
    fn scan_free_examples() {
        assert_eq!(scan_free(&w("abacaba"), 3), Some(6));
        assert_eq!(scan_free(&w("abcdef"), 2), None);
        assert_eq!(scan_free(&w("aaa"), 2), Some(2));
        assert_eq!(scan_free(&w("xyzaaa"), 2), Some(5));
    }

    #[test]
    fn scan_free_matches_prefix_containment() {
        let word = w("abcabcabacabaxx");
        for n in 1..=4 {
            let e = scan_free(&word, n);
            for end in 0..word.len() {
                let prefix = word.subword(0..end + 1);
                let expect = e.is_some_and(|v| end >= v);
                assert_eq!(contains_zimin(&prefix, n), expect, "n={n} end={end}");
            }
        }
    }

    #[test]
    fn table_invariants() {
        let word = w("abacabaabacaba");
        let t = min_end_table(&word, 3);
        for i in 0..word.len() {
            assert_eq!(t.s(1, i), Some(i), "s_1(i) = i");
        }
        for i in 0..word.len() {
            let mut last = None;
            for m in 1..=3 {
                let e = t.e(m, i);
                if let (Some(prev), Some(cur)) = (last, e) {
                    assert!(cur >= prev, "e_m(i) nondecreasing in m at i={i}, m={m}");
                }
                if e.is_some() {
                    last = e;
                }
            }
        }
    }

    #[test]
    fn witness_validates() {
        for (text, n) in [
            ("abacaba", 3),
            ("aaa", 2),
            ("xxabacabayy", 3),
            ("aaabaaa", 3),
            ("abcbabcb", 3),
            ("zabacabadabacabaz", 4),
        ] {
            let word = w(text);
            assert!(contains_zimin(&word, n), "{text} level {n}");
            let witness = zimin_witness(&word, n).expect("witness");
            witness.validate(&word).unwrap();
        }
    }

    #[test]
    fn witness_absent_when_free() {
        assert!(zimin_witness(&w("abcdef"), 2).is_none());
        assert!(zimin_witness(&w("aabb"), 2).is_none());
    }

    #[test]
    fn tight_level_three_cases() {
        // length-7 images force every variable to a single symbol
        assert!(contains_zimin(&w("abababa"), 3));
        assert!(contains_zimin(&w("abaaaba"), 3));
        assert!(!contains_zimin(&w("aabaabb"), 3));
        // repeats with no gap between them do not make a higher level
        assert!(contains_zimin(&w("abaab"), 2));
        assert!(!contains_zimin(&w("abaab"), 3));
    }

    #[test]
    fn subword_closure_of_avoidance() {
        // a longest binary level-3 avoider; every subword must avoid too
        let word = w("aabaabaabbabbabbbbbbaaaaaabb");
        assert!(!contains_zimin(&word, 3));
        for a in 0..word.len() {
            for b in a..=word.len() {
                assert!(!contains_zimin(&word.subword(a..b), 3));
            }
        }
    }
}
