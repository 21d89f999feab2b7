//! Eulerian-tour constructions over permutation digraphs.
//!
//! The plain digraph has one vertex per word of length `q-1` with all
//! distinct symbols; an edge goes from `u` to `v` when the last `q-2`
//! symbols of `u` are the first `q-2` of `v`. Every vertex has in- and
//! out-degree 2, the graph is strongly connected, and a closed Eulerian
//! tour spells a word of length `2*q! + q - 1` with property P (equal
//! symbols at distance at least `q-1`, all length-`q` windows distinct),
//! which forces it to avoid the level-3 Zimin word.
//!
//! The improved digraph additionally lets every internal symbol of a vertex
//! appear singled or doubled. Overlap now matches the last `q-2` distinct
//! symbols of `u` against the first `q-2` distinct symbols of `v` without
//! repetition, while the repetition-carrying middle segments must coincide
//! exactly. Each vertex then has in- and out-degree 4, and the tour word
//! reaches length `3 * 2^(q-2) * q! + 2q - 4`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};

/// Default cap on materialized edges; covers the plain digraph through
/// `q = 8` and the improved one through `q = 7`.
pub const DEFAULT_EDGE_CAP: usize = 400_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigraphKind {
    Plain,
    Improved,
}

struct Edge {
    to: u32,
    /// Symbols the tour appends when walking this edge (one or two).
    emit: (Symbol, Option<Symbol>),
}

/// A permutation digraph with vertices in lexicographic order of their
/// rendered words and out-edges sorted by target word.
pub struct PermDigraph {
    pub q: u32,
    pub kind: DigraphKind,
    words: Vec<Vec<Symbol>>,
    index: HashMap<Vec<Symbol>, u32>,
    adj: Vec<Vec<Edge>>,
}

impl PermDigraph {
    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn vertex_word(&self, id: u32) -> &[Symbol] {
        &self.words[id as usize]
    }

    pub fn vertex_id(&self, word: &[Symbol]) -> Option<u32> {
        self.index.get(word).copied()
    }

    /// Out-neighbor ids of a vertex.
    pub fn out_neighbors(&self, id: u32) -> Vec<u32> {
        self.adj[id as usize].iter().map(|e| e.to).collect()
    }

    /// Adjacency as plain target lists, for connectivity experiments.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        self.adj.iter().map(|edges| edges.iter().map(|e| e.to).collect()).collect()
    }
}

/// All length-`q-1` words with distinct symbols over `0..q`, in
/// lexicographic order.
fn distinct_words(q: u32) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut cur: Vec<Symbol> = Vec::with_capacity(q as usize - 1);
    let mut used = vec![false; q as usize];
    fn rec(q: u32, cur: &mut Vec<Symbol>, used: &mut [bool], out: &mut Vec<Vec<Symbol>>) {
        if cur.len() == q as usize - 1 {
            out.push(cur.clone());
            return;
        }
        for c in 0..q {
            if !used[c as usize] {
                used[c as usize] = true;
                cur.push(c);
                rec(q, cur, used, out);
                cur.pop();
                used[c as usize] = false;
            }
        }
    }
    rec(q, &mut cur, &mut used, &mut out);
    out
}

fn factorial(q: u32) -> usize {
    (1..=q as usize).product()
}

/// Build the plain digraph on the `q!` distinct-symbol words.
pub fn plain_digraph(q: u32) -> Result<PermDigraph> {
    plain_digraph_capped(q, DEFAULT_EDGE_CAP)
}

pub fn plain_digraph_capped(q: u32, edge_cap: usize) -> Result<PermDigraph> {
    if q < 3 {
        return Err(Error::invalid(format!("plain digraph needs q >= 3, got {q}")));
    }
    let edges = 2 * factorial(q);
    if edges > edge_cap {
        return Err(Error::SizeLimit {
            what: "plain digraph edge count",
            requested: edges as u64,
            limit: edge_cap as u64,
        });
    }
    let words = distinct_words(q);
    let index: HashMap<Vec<Symbol>, u32> =
        words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    let mut adj = Vec::with_capacity(words.len());
    for u in &words {
        let mut missing = vec![true; q as usize];
        for &c in u {
            missing[c as usize] = false;
        }
        let absent = (0..q).find(|&c| missing[c as usize]).expect("one symbol absent");
        // the appended symbol may be the dropped first symbol or the absent one
        let mut targets: Vec<Edge> = [u[0], absent]
            .into_iter()
            .map(|x| {
                let mut v = u[1..].to_vec();
                v.push(x);
                Edge { to: index[&v], emit: (x, None) }
            })
            .collect();
        targets.sort_by_key(|e| e.to);
        adj.push(targets);
    }
    Ok(PermDigraph { q, kind: DigraphKind::Plain, words, index, adj })
}

/// Build the improved digraph on `2^(q-3) * q!` vertices.
pub fn improved_digraph(q: u32) -> Result<PermDigraph> {
    improved_digraph_capped(q, DEFAULT_EDGE_CAP)
}

fn render_doubled(base: &[Symbol], mask: u32) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(base.len() * 2);
    for (i, &c) in base.iter().enumerate() {
        out.push(c);
        if i > 0 && i + 1 < base.len() && mask & (1 << i) != 0 {
            out.push(c);
        }
    }
    out
}

pub fn improved_digraph_capped(q: u32, edge_cap: usize) -> Result<PermDigraph> {
    if q < 5 {
        return Err(Error::invalid(format!("improved digraph needs q >= 5, got {q}")));
    }
    let internal = q as usize - 3;
    let vertex_count = (1usize << internal) * factorial(q);
    let edges = vertex_count * 4;
    if edges > edge_cap {
        return Err(Error::SizeLimit {
            what: "improved digraph edge count",
            requested: edges as u64,
            limit: edge_cap as u64,
        });
    }
    let bases = distinct_words(q);
    // enumerate (base, mask) pairs, render, sort lexicographically
    let mut words: Vec<(Vec<Symbol>, Vec<Symbol>, u32)> = Vec::with_capacity(vertex_count);
    for base in &bases {
        for raw in 0..(1u32 << internal) {
            let mask = raw << 1; // bits 1..=q-3 mark doubled internal positions
            words.push((render_doubled(base, mask), base.clone(), mask));
        }
    }
    words.sort_by(|a, b| a.0.cmp(&b.0));
    let index: HashMap<Vec<Symbol>, u32> =
        words.iter().enumerate().map(|(i, w)| (w.0.clone(), i as u32)).collect();

    let last = q as usize - 2; // index of the final base position
    let mut adj = Vec::with_capacity(words.len());
    for (_, base, mask) in &words {
        let mut missing = vec![true; q as usize];
        for &c in base {
            missing[c as usize] = false;
        }
        let absent = (0..q).find(|&c| missing[c as usize]).expect("one symbol absent");
        let mut edges: Vec<Edge> = Vec::with_capacity(4);
        for x in [base[0], absent] {
            for doubled_new in [false, true] {
                let mut nb = base[1..].to_vec();
                nb.push(x);
                // internal position i of the target held base symbol i+1;
                // the old final symbol becomes internal and may double
                let mut nm = 0u32;
                for i in 1..=q as usize - 3 {
                    if i < q as usize - 3 {
                        if mask & (1 << (i + 1)) != 0 {
                            nm |= 1 << i;
                        }
                    } else if doubled_new {
                        nm |= 1 << i;
                    }
                }
                let rendered = render_doubled(&nb, nm);
                let to = index[&rendered];
                let emit = if doubled_new { (base[last], Some(x)) } else { (x, None) };
                edges.push(Edge { to, emit });
            }
        }
        // vertex ids are already in lexicographic word order
        edges.sort_by_key(|e| e.to);
        adj.push(edges);
    }
    let words = words.into_iter().map(|w| w.0).collect();
    Ok(PermDigraph { q, kind: DigraphKind::Improved, words, index, adj })
}

/// Closed Eulerian tour from `start` (Hierholzer), as edge indices into the
/// sorted adjacency lists. Deterministic: unused edges are taken in
/// lexicographic order of their target word.
fn eulerian_tour(g: &PermDigraph, start: u32) -> Result<Vec<(u32, usize)>> {
    let total: usize = g.edge_count();
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut stack: Vec<(u32, Option<(u32, usize)>)> = vec![(start, None)];
    let mut path: Vec<(u32, usize)> = Vec::with_capacity(total);
    while let Some(&(v, via)) = stack.last() {
        let vi = v as usize;
        if cursor[vi] < g.adj[vi].len() {
            let ei = cursor[vi];
            cursor[vi] += 1;
            stack.push((g.adj[vi][ei].to, Some((v, ei))));
        } else {
            stack.pop();
            if let Some(e) = via {
                path.push(e);
            }
        }
    }
    if path.len() != total {
        return Err(Error::invalid(
            "digraph is not Eulerian-connected from the start vertex".to_string(),
        ));
    }
    path.reverse();
    Ok(path)
}

fn spell_tour(g: &PermDigraph, start: u32) -> Result<Word> {
    let tour = eulerian_tour(g, start)?;
    let mut symbols: Vec<Symbol> = g.vertex_word(start).to_vec();
    for (v, ei) in tour {
        let edge = &g.adj[v as usize][ei];
        symbols.push(edge.emit.0);
        if let Some(s) = edge.emit.1 {
            symbols.push(s);
        }
    }
    Word::new(Alphabet::new(g.q)?, symbols)
}

/// Longest word with property P: length exactly `2*q! + q - 1`.
pub fn euler_construct_p(q: u32) -> Result<Word> {
    euler_construct_p_capped(q, DEFAULT_EDGE_CAP)
}

pub fn euler_construct_p_capped(q: u32, edge_cap: usize) -> Result<Word> {
    let g = plain_digraph_capped(q, edge_cap)?;
    let start: Vec<Symbol> = (0..q - 1).collect();
    let start = g.vertex_id(&start).expect("identity vertex exists");
    spell_tour(&g, start)
}

/// The doubled-symbol construction: length exactly `3*2^(q-2)*q! + 2q - 4`.
/// The tour starts at a longest vertex (identity base, every internal
/// symbol doubled).
pub fn euler_construct_improved(q: u32) -> Result<Word> {
    euler_construct_improved_capped(q, DEFAULT_EDGE_CAP)
}

pub fn euler_construct_improved_capped(q: u32, edge_cap: usize) -> Result<Word> {
    let g = improved_digraph_capped(q, edge_cap)?;
    let base: Vec<Symbol> = (0..q - 1).collect();
    let mask = ((1u32 << (q - 3)) - 1) << 1;
    let start_word = render_doubled(&base, mask);
    let start = g.vertex_id(&start_word).expect("longest identity vertex exists");
    spell_tour(&g, start)
}

/// True when one strongly connected component covers every vertex.
pub fn strongly_connected(adj: &[Vec<u32>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut radj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (u, targets) in adj.iter().enumerate() {
        for &v in targets {
            radj[v as usize].push(u as u32);
        }
    }
    let reaches_all = |edges: &[Vec<u32>]| -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &t in &edges[v as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == n
    };
    reaches_all(adj) && reaches_all(&radj)
}

impl PermDigraph {
    pub fn is_strongly_connected(&self) -> bool {
        strongly_connected(&self.adjacency())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyPViolation {
    /// Equal symbols closer than `q - 1` positions apart.
    CloseRepeat { symbol: Symbol, first: usize, second: usize },
    /// Two equal windows of length `q`.
    RepeatedWindow { first_start: usize, second_start: usize },
}

#[derive(Clone, Debug)]
pub struct PropertyPReport {
    pub holds: bool,
    pub violation: Option<PropertyPViolation>,
}

/// Check property P: equal symbols at distance at least `q-1` and all
/// length-`q` windows distinct. Reports the first violation found.
pub fn check_property_p(w: &Word, q: u32) -> PropertyPReport {
    let s = w.symbols();
    let mut last: HashMap<Symbol, usize> = HashMap::new();
    for (i, &c) in s.iter().enumerate() {
        if let Some(&p) = last.get(&c) {
            if i - p < (q as usize).saturating_sub(1) {
                return PropertyPReport {
                    holds: false,
                    violation: Some(PropertyPViolation::CloseRepeat {
                        symbol: c,
                        first: p,
                        second: i,
                    }),
                };
            }
        }
        last.insert(c, i);
    }
    let mut windows: HashMap<&[Symbol], usize> = HashMap::new();
    if s.len() >= q as usize {
        for i in 0..=s.len() - q as usize {
            let win = &s[i..i + q as usize];
            if let Some(&p) = windows.get(win) {
                return PropertyPReport {
                    holds: false,
                    violation: Some(PropertyPViolation::RepeatedWindow {
                        first_start: p,
                        second_start: i,
                    }),
                };
            }
            windows.insert(win, i);
        }
    }
    PropertyPReport { holds: true, violation: None }
}
