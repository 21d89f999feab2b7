//! Recursive family constructions.
//!
//! An S-family entry at level `n` over `q` symbols is a word that avoids
//! the level-`n` Zimin word and has a distinguished symbol `d` such that
//! every `d`-free subword avoids level `n-1`. Concatenating distinct
//! entries — with the old distinguished symbol split into two fresh ones by
//! position parity and a brand-new separator between items — yields an
//! entry at level `n+1` over `q+2` symbols.
//!
//! The binary B-family plays the same game without growing the alphabet:
//! runs of ones serve as separators. Entries are equal-length binary words
//! satisfying five properties relative to padding runs `1^{2n}`, `1^{2n+1}`
//! and `1^{2n+2}`; stepping up joins distinct entries with `1^{2n+2}`,
//! first widening every exact `1^{2n}` run in the even-indexed entries by
//! one.
//!
//! Full families are astronomically large, so both step-ups accept any
//! distinct subfamily: the underlying arguments only use pairwise
//! distinctness and individual membership.

use std::collections::HashSet;

use crate::construct::IntervalModel;
use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};
use crate::zimin_check::{contains_zimin, scan_free};

/// A word tagged with its S-family evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFamilyEntry {
    pub word: Word,
    pub level: u32,
    pub distinguished: Symbol,
}

/// Outcome of an S-membership check, with the failing side when any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMembership {
    /// The word avoids the level-`n` Zimin word.
    pub avoids_level: bool,
    /// Every maximal `d`-free subword avoids level `n-1`.
    pub pieces_avoid: bool,
    /// First violation: `(piece start, piece end, prefix end)` of a
    /// `d`-free piece containing level `n-1`, or the prefix end of the
    /// whole word containing level `n`.
    pub violation: Option<String>,
}

impl SMembership {
    pub fn is_member(&self) -> bool {
        self.avoids_level && self.pieces_avoid
    }
}

/// Check membership in the S-family at level `n` with distinguished
/// symbol `d`.
pub fn check_s_membership(w: &Word, n: u32, d: Symbol) -> SMembership {
    let mut out = SMembership { avoids_level: true, pieces_avoid: true, violation: None };
    if let Some(e) = scan_free(w, n) {
        out.avoids_level = false;
        out.violation = Some(format!("level-{n} image ends at position {e}"));
        return out;
    }
    let mut start = 0usize;
    for (i, &c) in w.symbols().iter().enumerate() {
        if c == d {
            if i > start {
                let piece = w.subword(start..i);
                if contains_zimin(&piece, n - 1) {
                    out.pieces_avoid = false;
                    out.violation = Some(format!(
                        "d-free subword [{start},{}] contains a level-{} image",
                        i - 1,
                        n - 1
                    ));
                    return out;
                }
            }
            start = i + 1;
        }
    }
    if w.len() > start {
        let piece = w.subword(start..w.len());
        if contains_zimin(&piece, n - 1) {
            out.pieces_avoid = false;
            out.violation = Some(format!(
                "d-free subword [{start},{}] contains a level-{} image",
                w.len() - 1,
                n - 1
            ));
        }
    }
    out
}

fn find_duplicate(words: impl Iterator<Item = Vec<Symbol>>) -> Option<(usize, usize)> {
    let mut seen: std::collections::HashMap<Vec<Symbol>, usize> = std::collections::HashMap::new();
    for (i, w) in words.enumerate() {
        if let Some(&j) = seen.get(&w) {
            return Some((j, i));
        }
        seen.insert(w, i);
    }
    None
}

/// Step a list of distinct same-level entries up one level, over an
/// alphabet two symbols larger. Entry order is the caller's; distinct
/// orders give distinct outputs.
///
/// Odd-positioned entries (1-based) have their distinguished symbol
/// renamed to the fresh symbol `q`; even-positioned ones keep it; items
/// are joined with the new distinguished symbol `q+1`.
pub fn step_up_s(entries: &[SFamilyEntry]) -> Result<SFamilyEntry> {
    if entries.len() < 2 {
        return Err(Error::invalid("step-up needs at least 2 entries"));
    }
    let level = entries[0].level;
    let q = entries[0].word.alphabet().size();
    let d = entries[0].distinguished;
    for (i, e) in entries.iter().enumerate() {
        if e.level != level || e.word.alphabet().size() != q || e.distinguished != d {
            return Err(Error::invalid(format!(
                "entry {i} does not share the family's level, alphabet and distinguished symbol"
            )));
        }
    }
    if let Some((j, i)) = find_duplicate(entries.iter().map(|e| e.word.symbols().to_vec())) {
        return Err(Error::DuplicateEntries(j, i));
    }

    let renamed = q; // fresh symbol for odd items' distinguished letter
    let new_d = q + 1;
    let mut symbols = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            symbols.push(new_d);
        }
        let odd = i % 2 == 0; // 1-based odd
        for &c in e.word.symbols() {
            symbols.push(if odd && c == d { renamed } else { c });
        }
    }
    let word = Word::new(Alphabet::new(q + 2)?, symbols)?;
    Ok(SFamilyEntry { word, level: level + 1, distinguished: new_d })
}

/// Draw distinct level-3 entries from the distinguished interval model by
/// rejection sampling: generated words are kept only when the membership
/// checker passes. Seeds are consumed in order starting from `seed`.
pub fn sample_s_entries(
    q: u32,
    count: usize,
    num_intervals: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Vec<SFamilyEntry>> {
    let model = IntervalModel::with_defaults(q, true)?;
    let d = model.distinguished().expect("distinguished model");
    let mut out: Vec<SFamilyEntry> = Vec::with_capacity(count);
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    for attempt in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let w = model.generate(num_intervals, seed.wrapping_add(attempt as u64));
        if !seen.insert(w.symbols().to_vec()) {
            continue;
        }
        if check_s_membership(&w, 3, d).is_member() {
            out.push(SFamilyEntry { word: w, level: 3, distinguished: d });
        }
    }
    if out.len() < count {
        return Err(Error::invalid(format!(
            "only {} of {count} requested entries found within {max_attempts} attempts",
            out.len()
        )));
    }
    Ok(out)
}

/// A binary word tagged with its B-family level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFamilyEntry {
    pub word: Word,
    pub level: u32,
}

/// The five B-family properties with a note on the first violation of each.
#[derive(Clone, Debug)]
pub struct BPropertyReport {
    pub pass: [bool; 5],
    pub notes: Vec<(u8, String)>,
}

impl BPropertyReport {
    pub fn all(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }
}

fn ones(count: usize) -> Vec<Symbol> {
    vec![1; count]
}

fn pad(w: &[Symbol], run: usize) -> Vec<Symbol> {
    let mut out = ones(run);
    out.extend_from_slice(w);
    out.extend(ones(run));
    out
}

fn binary_word(symbols: Vec<Symbol>) -> Word {
    Word::new(Alphabet::new(2).expect("binary"), symbols).expect("binary symbols")
}

/// Add one `1` to every maximal run of ones of length exactly `run_len`.
pub fn add_one_to_runs(w: &Word, run_len: usize) -> Word {
    let s = w.symbols();
    let mut out = Vec::with_capacity(s.len() + 4);
    let mut i = 0;
    while i < s.len() {
        if s[i] == 1 {
            let mut j = i;
            while j < s.len() && s[j] == 1 {
                j += 1;
            }
            out.extend(ones(j - i));
            if j - i == run_len {
                out.push(1);
            }
            i = j;
        } else {
            out.push(s[i]);
            i += 1;
        }
    }
    binary_word(out)
}

/// Start positions of every occurrence of `1^run` in `s`.
fn one_run_occurrences(s: &[Symbol], run: usize) -> Vec<usize> {
    let mut occs = Vec::new();
    let mut i = 0;
    while i < s.len() {
        if s[i] == 1 {
            let mut j = i;
            while j < s.len() && s[j] == 1 {
                j += 1;
            }
            if j - i >= run {
                occs.extend(i..=j - run);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    occs
}

/// Maximal subwords of `s` containing no occurrence of `1^run`, as
/// inclusive intervals.
fn run_free_pieces(s: &[Symbol], run: usize) -> Vec<(usize, usize)> {
    let occs = one_run_occurrences(s, run);
    if occs.is_empty() {
        if s.is_empty() {
            return Vec::new();
        }
        return vec![(0, s.len() - 1)];
    }
    let mut pieces = Vec::with_capacity(occs.len() + 1);
    if occs[0] + run >= 2 {
        pieces.push((0, occs[0] + run - 2));
    }
    for k in 0..occs.len() - 1 {
        pieces.push((occs[k] + 1, occs[k + 1] + run - 2));
    }
    pieces.push((occs[occs.len() - 1] + 1, s.len() - 1));
    pieces
}

/// Check the five B-family properties of a binary word at level `n`.
pub fn check_b_properties(w: &Word, n: u32) -> BPropertyReport {
    let n = n as usize;
    let s = w.symbols();
    let mut pass = [true; 5];
    let mut notes = Vec::new();

    // 1. begins and ends with a zero
    if s.first() != Some(&0) || s.last() != Some(&0) {
        pass[0] = false;
        notes.push((1, "word must begin and end with 0".to_string()));
    }

    // 2. no run of 2n+1 ones
    if let Some(&start) = one_run_occurrences(s, 2 * n + 1).first() {
        pass[1] = false;
        notes.push((2, format!("run of {} ones starting at {start}", 2 * n + 1)));
    }

    // 3. every 1^{2n}-free subword of the padded word avoids level n-1
    let padded = pad(s, 2 * n);
    for (a, b) in run_free_pieces(&padded, 2 * n) {
        let piece = binary_word(padded[a..=b].to_vec());
        if contains_zimin(&piece, n as u32 - 1) {
            pass[2] = false;
            notes.push((
                3,
                format!("padded piece [{a},{b}] contains a level-{} image", n - 1),
            ));
            break;
        }
    }

    // 4. the padded word avoids level n
    if let Some(e) = scan_free(&binary_word(padded.clone()), n as u32) {
        pass[3] = false;
        notes.push((4, format!("padded word has a level-{n} image ending at {e}")));
    }

    // 5. after widening exact 1^{2n} runs, the 1^{2n+1}-padded word avoids level n
    let widened = add_one_to_runs(w, 2 * n);
    let padded5 = pad(widened.symbols(), 2 * n + 1);
    if let Some(e) = scan_free(&binary_word(padded5), n as u32) {
        pass[4] = false;
        notes.push((5, format!("widened padded word has a level-{n} image ending at {e}")));
    }

    BPropertyReport { pass, notes }
}

/// The 16 level-6 base entries: all binary words of length 6 that begin
/// and end with a zero, in numeric order.
pub fn b_base() -> Vec<BFamilyEntry> {
    (0..16u32)
        .map(|bits| {
            let mut symbols = vec![0; 6];
            for k in 0..4 {
                symbols[1 + k] = (bits >> (3 - k)) & 1;
            }
            BFamilyEntry { word: binary_word(symbols), level: 6 }
        })
        .collect()
}

/// Step distinct equal-length level-`n` entries (`n >= 6`) up to a single
/// level-`n+1` entry: even-positioned entries get their exact `1^{2n}`
/// runs widened by one, and items are joined with `1^{2n+2}`.
pub fn step_up_b(entries: &[BFamilyEntry]) -> Result<BFamilyEntry> {
    if entries.len() < 2 {
        return Err(Error::invalid("step-up needs at least 2 entries"));
    }
    let level = entries[0].level;
    if level < 6 {
        return Err(Error::invalid(format!("B-family step-up needs level >= 6, got {level}")));
    }
    let len = entries[0].word.len();
    for (i, e) in entries.iter().enumerate() {
        if e.level != level {
            return Err(Error::invalid(format!("entry {i} is at level {}, expected {level}", e.level)));
        }
        if e.word.len() != len {
            return Err(Error::invalid(format!(
                "entry {i} has length {}, expected the common length {len}",
                e.word.len()
            )));
        }
        if e.word.alphabet().size() != 2 {
            return Err(Error::invalid(format!("entry {i} is not binary")));
        }
    }
    if let Some((j, i)) = find_duplicate(entries.iter().map(|e| e.word.symbols().to_vec())) {
        return Err(Error::DuplicateEntries(j, i));
    }

    let n = level as usize;
    let sep = ones(2 * n + 2);
    let mut symbols: Vec<Symbol> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            symbols.extend_from_slice(&sep);
        }
        if i % 2 == 0 {
            // 1-based odd: unchanged
            symbols.extend_from_slice(e.word.symbols());
        } else {
            symbols.extend_from_slice(add_one_to_runs(&e.word, 2 * n).symbols());
        }
    }
    Ok(BFamilyEntry { word: binary_word(symbols), level: level + 1 })
}

/// Split a stepped-up word back into its items by cutting at maximal
/// one-runs of length exactly `2n+2`, undoing the even-position widening.
/// Inverse of `step_up_b` for checker-passing inputs.
pub fn split_b_word(w: &Word, level_below: u32) -> Vec<Word> {
    let n = level_below as usize;
    let s = w.symbols();
    let sep = 2 * n + 2;
    let mut items: Vec<Word> = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < s.len() {
        if s[i] == 1 {
            let mut j = i;
            while j < s.len() && s[j] == 1 {
                j += 1;
            }
            if j - i == sep {
                items.push(binary_word(s[start..i].to_vec()));
                start = j;
            }
            i = j;
        } else {
            i += 1;
        }
    }
    items.push(binary_word(s[start..].to_vec()));
    // undo the widening on even positions (1-based)
    items
        .into_iter()
        .enumerate()
        .map(|(k, item)| {
            if k % 2 == 1 {
                let mut out = Vec::with_capacity(item.len());
                let s = item.symbols();
                let mut i = 0;
                while i < s.len() {
                    if s[i] == 1 {
                        let mut j = i;
                        while j < s.len() && s[j] == 1 {
                            j += 1;
                        }
                        let run = j - i;
                        out.extend(ones(if run == 2 * n + 1 { run - 1 } else { run }));
                        i = j;
                    } else {
                        out.push(s[i]);
                        i += 1;
                    }
                }
                binary_word(out)
            } else {
                item
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::zimin;

    #[test]
    fn aba_with_middle_distinguished_is_a_member() {
        let w = zimin(2).unwrap();
        let m = check_s_membership(&w, 3, 1);
        assert!(m.is_member(), "{:?}", m.violation);
    }

    #[test]
    fn abab_fails_on_the_piece_property() {
        let w = Word::parse_infer("abab").unwrap();
        // treat symbol 2 as the (absent) distinguished letter
        let w = Word::new(Alphabet::new(3).unwrap(), w.symbols().to_vec()).unwrap();
        let m = check_s_membership(&w, 3, 2);
        assert!(m.avoids_level);
        assert!(!m.pieces_avoid);
    }

    #[test]
    fn step_up_s_shape() {
        let a = Alphabet::new(4).unwrap();
        let e = |text: &str| SFamilyEntry {
            word: Word::parse(text, a).unwrap(),
            level: 2,
            distinguished: 3,
        };
        // level-2 members over q=4 with d=3: Zimin-2-free, d-free pieces Z_1-free (empty pieces)
        let x = e("d"); // "d" alone: no level-2 image; d-free pieces empty
        let y = e("dd");
        let out = step_up_s(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(out.level, 3);
        assert_eq!(out.word.alphabet().size(), 6);
        assert_eq!(out.distinguished, 5);
        assert_eq!(out.word.len(), x.word.len() + y.word.len() + 1);
        // odd item's d renamed to 4, even item's kept, joined by 5
        assert_eq!(out.word.symbols(), &[4, 5, 3, 3]);
    }

    #[test]
    fn step_up_s_rejects_duplicates_and_mixed_families() {
        let a = Alphabet::new(4).unwrap();
        let mk = |text: &str, level| SFamilyEntry {
            word: Word::parse(text, a).unwrap(),
            level,
            distinguished: 3,
        };
        let x = mk("ad", 3);
        assert!(matches!(
            step_up_s(&[x.clone(), x.clone()]),
            Err(Error::DuplicateEntries(0, 1))
        ));
        let y = mk("bd", 2);
        assert!(step_up_s(&[x.clone(), y]).is_err());
        assert!(step_up_s(&[x]).is_err());
    }

    #[test]
    fn sampled_entries_step_up_to_a_verified_member() {
        let entries = sample_s_entries(8, 6, 9, 1, 400).unwrap();
        assert_eq!(entries.len(), 6);
        for e in &entries {
            assert!(check_s_membership(&e.word, 3, e.distinguished).is_member());
        }
        let lens: Vec<usize> = entries.iter().map(|e| e.word.len()).collect();
        assert!(lens.windows(2).all(|p| p[0] == p[1]), "equal lengths: {lens:?}");
        let up = step_up_s(&entries).unwrap();
        assert_eq!(up.word.alphabet().size(), 10);
        let expect_len: usize = entries.iter().map(|e| e.word.len() + 1).sum::<usize>() - 1;
        assert_eq!(up.word.len(), expect_len);
        assert!(up.word.len() >= entries.len());
        assert!(check_s_membership(&up.word, 4, up.distinguished).is_member());
    }

    #[test]
    fn distinct_orderings_give_distinct_equal_length_outputs() {
        let entries = sample_s_entries(8, 4, 9, 7, 400).unwrap();
        let mut reordered = entries.clone();
        reordered.swap(0, 1);
        let a = step_up_s(&entries).unwrap();
        let b = step_up_s(&reordered).unwrap();
        assert_eq!(a.word.len(), b.word.len());
        assert_ne!(a.word, b.word);
    }

    #[test]
    fn base_entries_all_pass() {
        let base = b_base();
        assert_eq!(base.len(), 16);
        for e in &base {
            assert_eq!(e.word.len(), 6);
            let report = check_b_properties(&e.word, 6);
            assert!(report.all(), "{}: {:?}", e.word.render(), report.notes);
        }
        // including the all-zero word
        assert!(base.iter().any(|e| e.word.symbols() == &[0; 6]));
    }

    #[test]
    fn b_property_checks_catch_violations() {
        // property 1
        let report = check_b_properties(&binary_word(vec![0, 1, 1]), 6);
        assert!(!report.pass[0]);
        // property 2: a run of 13 ones at n = 6
        let mut s = vec![0];
        s.extend(ones(13));
        s.push(0);
        let report = check_b_properties(&binary_word(s), 6);
        assert!(report.pass[0]);
        assert!(!report.pass[1]);
    }

    #[test]
    fn property_three_pieces_cover_the_padding() {
        // "010" at n = 6: trivially fine
        let report = check_b_properties(&binary_word(vec![0, 1, 0]), 6);
        assert!(report.pass[0] && report.pass[1]);
        assert!(report.all());
    }

    #[test]
    fn add_one_to_runs_touches_only_exact_runs() {
        let w = binary_word(vec![0, 1, 1, 0, 1, 1, 1, 0, 1, 0]);
        let out = add_one_to_runs(&w, 2);
        assert_eq!(out.symbols(), &[0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 0]);
    }

    #[test]
    fn full_base_steps_up_to_level_seven() {
        let base = b_base();
        let up = step_up_b(&base).unwrap();
        assert_eq!(up.level, 7);
        assert_eq!(up.word.len(), 16 * 6 + 15 * 14);
        let report = check_b_properties(&up.word, 7);
        assert!(report.all(), "{:?}", report.notes);
    }

    #[test]
    fn step_up_b_rejects_bad_input() {
        let base = b_base();
        assert!(matches!(
            step_up_b(&[base[0].clone(), base[0].clone()]),
            Err(Error::DuplicateEntries(0, 1))
        ));
        assert!(step_up_b(&base[..1]).is_err());
        let low = BFamilyEntry { word: binary_word(vec![0, 0, 0]), level: 5 };
        assert!(step_up_b(&[low.clone(), low]).is_err());
    }

    #[test]
    fn split_inverts_step_up() {
        let base = b_base();
        let up = step_up_b(&base).unwrap();
        let items = split_b_word(&up.word, 6);
        assert_eq!(items.len(), 16);
        for (item, entry) in items.iter().zip(base.iter()) {
            assert_eq!(item, &entry.word);
        }
    }

    #[test]
    fn even_items_grow_by_their_run_count() {
        // at level 6, widening touches runs of exactly 12 ones
        let mut s = vec![0];
        s.extend(ones(12));
        s.extend([0, 0]);
        s.extend(ones(12));
        s.push(0);
        let w = binary_word(s);
        let wide = add_one_to_runs(&w, 12);
        assert_eq!(wide.len(), w.len() + 2);
        assert!(one_run_occurrences(wide.symbols(), 14).is_empty());
    }
}
