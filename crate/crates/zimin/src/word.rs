//! Alphabets, words and Zimin-word generation.
//!
//! Symbols are dense integer ids `0..q-1`; rendering as letters is
//! presentation-only, so alphabets larger than 26 work everywhere except
//! the `a..z` text form.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// A symbol id. Always less than the alphabet size of the word holding it.
pub type Symbol = u32;

/// Largest Zimin level we materialize; `zimin(30)` already has 2^30 - 1 symbols.
pub const ZIMIN_MAX_LEVEL: u32 = 30;

/// How symbol ids turn into text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rendering {
    /// `a`..`z`; only for alphabets of size at most 26.
    Chars,
    /// Space-separated decimal ids.
    Ints,
}

/// An alphabet of size `q` with symbol ids exactly `0..q-1`.
#[derive(Clone, Copy, Debug)]
pub struct Alphabet {
    size: u32,
    rendering: Rendering,
}

impl Alphabet {
    /// Alphabet with the default rendering: chars when it fits, ints otherwise.
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("alphabet size must be at least 1"));
        }
        let rendering = if size <= 26 { Rendering::Chars } else { Rendering::Ints };
        Ok(Alphabet { size, rendering })
    }

    pub fn chars(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("alphabet size must be at least 1"));
        }
        if size > 26 {
            return Err(Error::SizeLimit {
                what: "chars-rendered alphabet size",
                requested: size as u64,
                limit: 26,
            });
        }
        Ok(Alphabet { size, rendering: Rendering::Chars })
    }

    pub fn ints(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("alphabet size must be at least 1"));
        }
        Ok(Alphabet { size, rendering: Rendering::Ints })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn rendering(&self) -> Rendering {
        self.rendering
    }
}

/// A finite word over an explicit alphabet.
///
/// Immutable after construction; equality and hashing ignore the rendering
/// mode, which is presentational.
#[derive(Clone, Debug)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.size == other.alphabet.size && self.symbols == other.symbols
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.alphabet.size.hash(state);
        self.symbols.hash(state);
    }
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet.size) {
            return Err(Error::invalid(format!(
                "symbol id {bad} is not below the alphabet size {}",
                alphabet.size
            )));
        }
        Ok(Word { alphabet, symbols })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, symbols: Vec::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Subword (factor) on a half-open index range, over the same alphabet.
    pub fn subword(&self, range: std::ops::Range<usize>) -> Word {
        Word { alphabet: self.alphabet, symbols: self.symbols[range].to_vec() }
    }

    /// Render to text using the alphabet's mode.
    pub fn render(&self) -> String {
        match self.alphabet.rendering {
            Rendering::Chars => {
                self.symbols.iter().map(|&s| (b'a' + s as u8) as char).collect()
            }
            Rendering::Ints => {
                let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
                parts.join(" ")
            }
        }
    }

    /// Parse text against a known alphabet. The text form (chars vs ints) is
    /// detected from the content; ids must be below the alphabet size.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Word> {
        let symbols = parse_symbols(text)?;
        Word::new(alphabet, symbols)
    }

    /// Parse text, inferring the alphabet as `max id + 1` (size 1 for the
    /// empty word). Rendering follows the text form.
    pub fn parse_infer(text: &str) -> Result<Word> {
        let symbols = parse_symbols(text)?;
        let size = symbols.iter().max().map_or(1, |&m| m + 1);
        let looks_int = text.trim().chars().any(|c| c.is_ascii_digit());
        let alphabet = if looks_int || size > 26 { Alphabet::ints(size)? } else { Alphabet::chars(size)? };
        Word::new(alphabet, symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn parse_symbols(text: &str) -> Result<Vec<Symbol>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    if t.chars().any(|c| c.is_ascii_digit()) {
        t.split_whitespace()
            .map(|tok| {
                tok.parse::<Symbol>().map_err(|_| {
                    Error::invalid(format!("unknown symbol token {tok:?} (expected a decimal id)"))
                })
            })
            .collect()
    } else {
        t.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok((c as u8 - b'a') as Symbol)
                } else {
                    Err(Error::invalid(format!("unknown symbol token {c:?} (expected a-z)")))
                }
            })
            .collect()
    }
}

/// The Zimin word of level `n`: level 1 is a single symbol, and each level
/// is the previous one, a fresh symbol, then the previous one again.
/// Symbol `k` first appears at position `2^k - 1`; the total length is
/// `2^n - 1`.
pub fn zimin(n: u32) -> Result<Word> {
    if !(1..=ZIMIN_MAX_LEVEL).contains(&n) {
        return Err(Error::SizeLimit {
            what: "zimin level",
            requested: n as u64,
            limit: ZIMIN_MAX_LEVEL as u64,
        });
    }
    let mut symbols: Vec<Symbol> = Vec::with_capacity((1usize << n) - 1);
    symbols.push(0);
    for k in 1..n {
        symbols.push(k);
        symbols.extend_from_within(0..(1 << k) - 1);
    }
    Word::new(Alphabet::new(n)?, symbols)
}

/// One word per line. `#` starts a comment line, blank lines are skipped,
/// and the first non-comment line may be `alphabet <q>`.
pub fn read_words<R: BufRead>(reader: R) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    let mut alphabet: Option<Alphabet> = None;
    let mut saw_content = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if !saw_content {
            saw_content = true;
            if let Some(rest) = t.strip_prefix("alphabet") {
                let rest = rest.trim();
                let q: u32 = rest.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad alphabet size {rest:?}"),
                })?;
                alphabet = Some(Alphabet::new(q).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?);
                continue;
            }
        }
        let word = match alphabet {
            Some(a) => Word::parse(t, a),
            None => Word::parse_infer(t),
        }
        .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        words.push(word);
    }
    Ok(words)
}

/// Write words in the file format above, with an `alphabet` header taken
/// from the widest alphabet present.
pub fn write_words<W: Write>(mut out: W, words: &[Word]) -> Result<()> {
    if let Some(q) = words.iter().map(|w| w.alphabet().size()).max() {
        writeln!(out, "alphabet {q}")?;
    }
    for w in words {
        writeln!(out, "{}", w.render())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zimin_base_cases() {
        assert_eq!(zimin(1).unwrap().render(), "a");
        assert_eq!(zimin(2).unwrap().render(), "aba");
        assert_eq!(zimin(3).unwrap().render(), "abacaba");
    }

    #[test]
    fn zimin_lengths_and_first_occurrences() {
        for n in 1..=20 {
            let z = zimin(n).unwrap();
            assert_eq!(z.len(), (1usize << n) - 1, "level {n}");
            for k in 0..n {
                let first = z.symbols().iter().position(|&s| s == k).unwrap();
                assert_eq!(first, (1usize << k) - 1, "symbol {k} in level {n}");
            }
        }
    }

    #[test]
    fn zimin_is_palindrome_and_recursive() {
        for n in 2..=12 {
            let z = zimin(n).unwrap();
            let mut rev = z.symbols().to_vec();
            rev.reverse();
            assert_eq!(rev, z.symbols());
            let prev = zimin(n - 1).unwrap();
            let half = prev.len();
            assert_eq!(&z.symbols()[..half], prev.symbols());
            assert_eq!(z.symbols()[half], n - 1);
            assert_eq!(&z.symbols()[half + 1..], prev.symbols());
        }
    }

    #[test]
    fn zimin_symbol_counts() {
        // symbol k occurs exactly 2^(n-1-k) times
        for n in 1..=14 {
            let z = zimin(n).unwrap();
            for k in 0..n {
                let count = z.symbols().iter().filter(|&&s| s == k).count();
                assert_eq!(count, 1usize << (n - 1 - k));
            }
        }
    }

    #[test]
    fn zimin_level_out_of_range() {
        assert!(zimin(0).is_err());
        let err = zimin(31).unwrap_err();
        assert!(err.to_string().contains("30"), "error should name the limit: {err}");
    }

    #[test]
    fn parse_chars_and_ints_agree() {
        let a = Word::parse_infer("abacaba").unwrap();
        assert_eq!(a.symbols(), &[0, 1, 0, 2, 0, 1, 0]);
        let b = Word::parse_infer("0 1 0 2 0 1 0").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn render_parse_round_trip() {
        let w = Word::parse_infer("abacabadabacaba").unwrap();
        assert_eq!(Word::parse(&w.render(), w.alphabet()).unwrap(), w);
        let big = Word::new(Alphabet::ints(40).unwrap(), vec![0, 39, 12]).unwrap();
        assert_eq!(Word::parse(&big.render(), big.alphabet()).unwrap(), big);
    }

    #[test]
    fn parse_rejects_bad_tokens() {
        assert!(Word::parse_infer("ab!").is_err());
        assert!(Word::parse_infer("0 x 1").is_err());
        let a = Alphabet::new(2).unwrap();
        assert!(Word::parse("abc", a).is_err(), "symbol id beyond alphabet size");
    }

    #[test]
    fn word_file_round_trip() {
        let words = vec![
            Word::parse_infer("abacaba").unwrap(),
            Word::parse_infer("aabb").unwrap(),
        ];
        let mut buf = Vec::new();
        write_words(&mut buf, &words).unwrap();
        let back = read_words(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].symbols(), words[0].symbols());
        assert_eq!(back[1].symbols(), words[1].symbols());
        assert_eq!(back[0].alphabet().size(), 3, "header fixes the alphabet");
    }

    #[test]
    fn word_file_comments_and_header() {
        let text = "# a comment\nalphabet 4\nabd\n\n# another\ndc\n";
        let words = read_words(text.as_bytes()).unwrap();
        assert_eq!(words.len(), 2);
        assert_eq!(words[0].symbols(), &[0, 1, 3]);
        assert_eq!(words[1].symbols(), &[3, 2]);
    }

    #[test]
    fn word_file_reports_line_numbers() {
        let text = "alphabet 2\nab\nabc\n";
        match read_words(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_word_is_valid() {
        let w = Word::empty(Alphabet::new(3).unwrap());
        assert_eq!(w.len(), 0);
        assert_eq!(w.render(), "");
    }
}
