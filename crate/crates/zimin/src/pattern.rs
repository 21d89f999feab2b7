//! General pattern containment by backtracking, and the unavoidability
//! classifier built on it.
//!
//! A pattern is a word over variables; a word contains it when some
//! contiguous subword factors as the pattern's image under an assignment of
//! nonempty words to variables (equal variables get equal images, distinct
//! variables may share one). The search walks the pattern left to right,
//! trying shorter images first, and memoizes failed states. A node budget
//! turns a too-expensive search into an explicit `Undecided` answer, which
//! is never conflated with a definite no.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::word::{zimin, Symbol, Word};

/// A pattern over variables with dense ids `0..k-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    symbols: Vec<u32>,
    var_count: u32,
}

impl Pattern {
    /// Build from raw variable ids; ids must be dense and the pattern nonempty.
    pub fn new(symbols: Vec<u32>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("pattern must be nonempty"));
        }
        let k = symbols.iter().max().unwrap() + 1;
        let mut seen = vec![false; k as usize];
        for &v in &symbols {
            seen[v as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("pattern variable ids must be dense 0..k-1"));
        }
        Ok(Pattern { symbols, var_count: k })
    }

    /// Parse `a..z` or space-separated ids, relabeling variables in order of
    /// first occurrence. Pattern identity is up to variable renaming, so the
    /// canonical labels lose nothing.
    pub fn parse(text: &str) -> Result<Self> {
        let raw = Word::parse_infer(text)?;
        if raw.is_empty() {
            return Err(Error::invalid("pattern must be nonempty"));
        }
        let mut map: Vec<Option<u32>> = vec![None; raw.alphabet().size() as usize];
        let mut next = 0u32;
        let mut symbols = Vec::with_capacity(raw.len());
        for &v in raw.symbols() {
            let id = *map[v as usize].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            symbols.push(id);
        }
        Ok(Pattern { symbols, var_count: next })
    }

    /// The level-`n` Zimin word viewed as a pattern.
    pub fn zimin(n: u32) -> Result<Self> {
        Pattern::new(zimin(n)?.symbols().to_vec())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn render(&self) -> String {
        if self.var_count <= 26 {
            self.symbols.iter().map(|&v| (b'a' + v as u8) as char).collect()
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|v| v.to_string()).collect();
            parts.join(" ")
        }
    }
}

/// Variable images plus the start of the matched subword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub start: usize,
    pub images: Vec<Vec<Symbol>>,
}

impl PatternWitness {
    pub fn validate(&self, w: &Word, p: &Pattern) -> bool {
        if self.images.len() != p.var_count() as usize
            || self.images.iter().any(|img| img.is_empty())
        {
            return false;
        }
        let mut expanded: Vec<Symbol> = Vec::new();
        for &v in p.symbols() {
            expanded.extend_from_slice(&self.images[v as usize]);
        }
        let end = self.start + expanded.len();
        end <= w.len() && w.symbols()[self.start..end] == expanded[..]
    }
}

/// Three-valued search outcome: a budget overrun is reported as its own
/// state, distinct from a definite absence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    Found(PatternWitness),
    Absent,
    Undecided { nodes: u64 },
}

impl MatchOutcome {
    pub fn found(&self) -> bool {
        matches!(self, MatchOutcome::Found(_))
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

/// Containment with the default node budget.
pub fn contains_pattern(w: &Word, p: &Pattern) -> MatchOutcome {
    contains_pattern_budgeted(w, p, DEFAULT_NODE_BUDGET)
}

/// Containment with an explicit node budget. Starts are tried left to
/// right and variable images shortest-first, so the first witness found is
/// deterministic.
pub fn contains_pattern_budgeted(w: &Word, p: &Pattern, budget: u64) -> MatchOutcome {
    let mut m = Matcher {
        w: w.symbols(),
        p: p.symbols(),
        suffix_vars: suffix_var_masks(p),
        bound: vec![None; p.var_count() as usize],
        memo: HashSet::new(),
        nodes: 0,
        budget,
        exceeded: false,
    };
    if w.len() < p.len() {
        return MatchOutcome::Absent;
    }
    for start in 0..=w.len() - p.len() {
        match m.walk(0, start) {
            Step::Hit => {
                let images = m
                    .bound
                    .iter()
                    .map(|b| {
                        let (s, l) = b.expect("all variables bound on a full match");
                        m.w[s..s + l].to_vec()
                    })
                    .collect();
                return MatchOutcome::Found(PatternWitness { start, images });
            }
            Step::Miss => {}
            Step::Stop => break,
        }
    }
    if m.exceeded {
        MatchOutcome::Undecided { nodes: m.nodes }
    } else {
        MatchOutcome::Absent
    }
}

/// Variables occurring in the pattern suffix starting at each position,
/// as bitmasks. Patterns wider than 64 variables skip memoization.
fn suffix_var_masks(p: &Pattern) -> Vec<u64> {
    let n = p.len();
    let mut masks = vec![0u64; n + 1];
    if p.var_count() > 64 {
        return masks;
    }
    for i in (0..n).rev() {
        masks[i] = masks[i + 1] | (1u64 << p.symbols()[i]);
    }
    masks
}

enum Step {
    Hit,
    Miss,
    Stop,
}

type MemoKey = (u32, u32, Vec<(u8, Box<[Symbol]>)>);

const MEMO_CAP: usize = 1 << 21;

struct Matcher<'a> {
    w: &'a [Symbol],
    p: &'a [u32],
    suffix_vars: Vec<u64>,
    bound: Vec<Option<(usize, usize)>>,
    memo: HashSet<MemoKey>,
    nodes: u64,
    budget: u64,
    exceeded: bool,
}

impl Matcher<'_> {
    fn memo_key(&self, pi: usize, pos: usize) -> Option<MemoKey> {
        let mask = self.suffix_vars[pi];
        if mask == 0 && pi < self.p.len() {
            return None; // memo disabled (too many variables)
        }
        let mut parts = Vec::new();
        for v in 0..self.bound.len() {
            if mask & (1 << v) != 0 {
                if let Some((s, l)) = self.bound[v] {
                    parts.push((v as u8, self.w[s..s + l].to_vec().into_boxed_slice()));
                }
            }
        }
        Some((pi as u32, pos as u32, parts))
    }

    fn walk(&mut self, pi: usize, pos: usize) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
            return Step::Stop;
        }
        if pi == self.p.len() {
            return Step::Hit;
        }
        let key = self.memo_key(pi, pos);
        if let Some(k) = &key {
            if self.memo.contains(k) {
                return Step::Miss;
            }
        }
        let var = self.p[pi] as usize;
        let remaining = self.p.len() - pi - 1;
        match self.bound[var] {
            Some((s, l)) => {
                if pos + l + remaining <= self.w.len() && self.w[pos..pos + l] == self.w[s..s + l] {
                    match self.walk(pi + 1, pos + l) {
                        Step::Miss => {}
                        other => return other,
                    }
                }
            }
            None => {
                let max_len = (self.w.len() - pos).saturating_sub(remaining);
                for l in 1..=max_len {
                    self.bound[var] = Some((pos, l));
                    let r = self.walk(pi + 1, pos + l);
                    match r {
                        Step::Miss => {}
                        Step::Hit => return Step::Hit,
                        Step::Stop => {
                            self.bound[var] = None;
                            return Step::Stop;
                        }
                    }
                }
                self.bound[var] = None;
            }
        }
        if let Some(k) = key {
            if self.memo.len() < MEMO_CAP {
                self.memo.insert(k);
            }
        }
        Step::Miss
    }
}

/// Classifier outcome for a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unavoidability {
    Unavoidable,
    Avoidable,
    Undecided,
}

/// Largest variable count accepted by the classifier; the containment test
/// runs against a Zimin word of length `2^k - 1`.
pub const UNAVOIDABLE_MAX_VARS: u32 = 12;

/// A pattern with `k` distinct variables is unavoidable exactly when the
/// level-`k` Zimin word contains it.
pub fn is_unavoidable(p: &Pattern) -> Result<Unavoidability> {
    is_unavoidable_budgeted(p, DEFAULT_NODE_BUDGET)
}

pub fn is_unavoidable_budgeted(p: &Pattern, budget: u64) -> Result<Unavoidability> {
    let k = p.var_count();
    if k > UNAVOIDABLE_MAX_VARS {
        return Err(Error::SizeLimit {
            what: "pattern variable count",
            requested: k as u64,
            limit: UNAVOIDABLE_MAX_VARS as u64,
        });
    }
    let z = zimin(k)?;
    Ok(match contains_pattern_budgeted(&z, p, budget) {
        MatchOutcome::Found(_) => Unavoidability::Unavoidable,
        MatchOutcome::Absent => Unavoidability::Avoidable,
        MatchOutcome::Undecided { .. } => Unavoidability::Undecided,
    })
}
