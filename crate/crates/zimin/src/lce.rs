//! Longest-common-extension queries.
//!
//! `LceTable` answers `lce(i, j)` — the length of the longest common prefix
//! of the suffixes starting at `i` and `j` — in constant time after an
//! `O(N log N)` build (suffix array by prefix doubling, LCP array, sparse
//! table over range minima). Answers are exact; no hashing is involved.

use crate::word::{Symbol, Word};

pub struct LceTable {
    len: usize,
    rank: Vec<u32>,
    // sparse[k][i] = min of lcp[i .. i + 2^k], where lcp is the standard
    // adjacent-suffix LCP array (held as level 0)
    sparse: Vec<Vec<u32>>,
    log2: Vec<u32>,
}

impl LceTable {
    pub fn build(word: &Word) -> LceTable {
        Self::from_symbols(word.symbols())
    }

    pub fn from_symbols(s: &[Symbol]) -> LceTable {
        let n = s.len();
        let sa = suffix_array(s);
        let mut rank = vec![0u32; n];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let lcp = lcp_array(s, &sa, &rank);

        let mut log2 = vec![0u32; n + 1];
        for i in 2..=n {
            log2[i] = log2[i / 2] + 1;
        }
        let levels = if n > 1 { log2[n - 1] as usize + 1 } else { 1 };
        let mut sparse = Vec::with_capacity(levels);
        sparse.push(lcp);
        for k in 1..levels {
            let half = 1usize << (k - 1);
            let prev = &sparse[k - 1];
            let width = prev.len().saturating_sub(half);
            let mut row = Vec::with_capacity(width);
            for i in 0..width {
                row.push(prev[i].min(prev[i + half]));
            }
            sparse.push(row);
        }

        LceTable { len: n, rank, sparse, log2 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Longest common prefix length of the suffixes at `i` and `j`.
    pub fn lce(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.len && j < self.len);
        if i == j {
            return self.len - i;
        }
        let (a, b) = {
            let (ri, rj) = (self.rank[i] as usize, self.rank[j] as usize);
            if ri < rj { (ri, rj) } else { (rj, ri) }
        };
        // min of lcp[a+1 ..= b]
        let lo = a + 1;
        let hi = b;
        let k = self.log2[hi - lo + 1] as usize;
        let m1 = self.sparse[k][lo];
        let m2 = self.sparse[k][hi + 1 - (1usize << k)];
        m1.min(m2) as usize
    }
}

fn suffix_array(s: &[Symbol]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<i64> = s.iter().map(|&c| c as i64).collect();
    let mut tmp = vec![0i64; n];
    let mut k = 1usize;
    loop {
        let key = |i: u32| -> (i64, i64) {
            let i = i as usize;
            (rank[i], if i + k < n { rank[i + k] } else { -1 })
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 0;
        for t in 1..n {
            let step = (key(sa[t]) != key(sa[t - 1])) as i64;
            tmp[sa[t] as usize] = tmp[sa[t - 1] as usize] + step;
        }
        rank.copy_from_slice(&tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k <<= 1;
    }
    sa
}

// Kasai's algorithm: lcp[r] = lcp(suffix at sa[r-1], suffix at sa[r]); lcp[0] = 0.
fn lcp_array(s: &[Symbol], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}
