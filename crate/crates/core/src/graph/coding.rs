//! Conflict graphs of error-correcting codes on binary words.
//!
//! Vertices are the `2^k` words of length `k` (vertex id = integer value of
//! the word, most significant bit first). Two words are adjacent when their
//! error balls intersect, so independent sets are exactly the codes that
//! correct one error of the family's type.

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::str::FromStr;

use super::{Edge, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodingFamily {
    /// `1dc`: single deletion.
    SingleDeletion,
    /// `2dc`: two deletions.
    DoubleDeletion,
    /// `1tc`: one transposition of adjacent bits.
    Transposition,
    /// `1et`: one adjacent transposition, the end-around pair included.
    EndAroundTransposition,
    /// `1zc`: one asymmetric `1 -> 0` error (Z-channel).
    ZChannel,
}

impl CodingFamily {
    pub const ALL: [CodingFamily; 5] = [
        CodingFamily::SingleDeletion,
        CodingFamily::DoubleDeletion,
        CodingFamily::Transposition,
        CodingFamily::EndAroundTransposition,
        CodingFamily::ZChannel,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            CodingFamily::SingleDeletion => "1dc",
            CodingFamily::DoubleDeletion => "2dc",
            CodingFamily::Transposition => "1tc",
            CodingFamily::EndAroundTransposition => "1et",
            CodingFamily::ZChannel => "1zc",
        }
    }

    /// Benchmark-style name, e.g. `1dc.64` for `k = 6`.
    pub fn instance_name(self, k: u32) -> String {
        format!("{}.{}", self.prefix(), 1u64 << k)
    }

    /// Published edge lists for the Z-channel family list every edge in both
    /// orientations; their problem lines count those listings.
    pub fn lists_edges_twice(self) -> bool {
        self == CodingFamily::ZChannel
    }

    fn ball(self, word: u64, k: u32) -> Vec<u64> {
        match self {
            CodingFamily::SingleDeletion => deletions(word, k, 1),
            CodingFamily::DoubleDeletion => deletions(word, k, 2),
            CodingFamily::Transposition => transpositions(word, k, false),
            CodingFamily::EndAroundTransposition => transpositions(word, k, true),
            CodingFamily::ZChannel => {
                let mut out = vec![word];
                out.extend((0..k).filter(|b| word >> b & 1 == 1).map(|b| word & !(1 << b)));
                out
            }
        }
    }
}

impl FromStr for CodingFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CodingFamily::ALL
            .into_iter()
            .find(|f| f.prefix() == s)
            .ok_or_else(|| format!("unknown code family `{s}` (expected 1dc, 2dc, 1tc, 1et or 1zc)"))
    }
}

fn delete_bit(word: u64, len: u32, pos: u32) -> u64 {
    // pos counts from the least significant end
    let low = word & ((1u64 << pos) - 1);
    let high = word >> (pos + 1);
    debug_assert!(pos < len);
    (high << pos) | low
}

fn deletions(word: u64, k: u32, count: u32) -> Vec<u64> {
    let mut current: HashSet<u64> = HashSet::from([word]);
    for step in 0..count {
        let len = k - step;
        current = current
            .iter()
            .flat_map(|&w| (0..len).map(move |p| delete_bit(w, len, p)))
            .collect();
    }
    current.into_iter().collect()
}

fn transpositions(word: u64, k: u32, end_around: bool) -> Vec<u64> {
    let mut out = vec![word];
    let mut pairs: Vec<(u32, u32)> = (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if end_around && k > 2 {
        pairs.push((0, k - 1));
    }
    for (a, b) in pairs {
        if (word >> a & 1) != (word >> b & 1) {
            out.push(word ^ (1 << a) ^ (1 << b));
        }
    }
    out
}

/// Conflict graph for words of length `k` (`2^k` vertices).
pub fn coding_graph(family: CodingFamily, k: u32) -> Graph {
    assert!((1..=16).contains(&k), "word length {k} unsupported");
    let n = 1usize << k;
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for v in 0..n {
        let mut ball = family.ball(v as u64, k);
        ball.sort_unstable();
        ball.dedup();
        for key in ball {
            buckets.entry(key).or_default().push(v);
        }
    }
    let mut pairs = HashSet::new();
    for members in buckets.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    let edges = pairs.into_iter().map(|(u, v)| Edge { u, v, w: 1.0 }).collect();
    Graph::assemble(n, edges)
}

/// Write a benchmark fixture in DIMACS form, following the published
/// listing convention of the family.
pub fn write_coding_fixture<W: Write>(family: CodingFamily, k: u32, mut out: W) -> std::io::Result<()> {
    let g = coding_graph(family, k);
    writeln!(out, "c {} conflict graph, words of length {k}", family.instance_name(k))?;
    if family.lists_edges_twice() {
        writeln!(out, "p edge {} {}", g.num_vertices(), 2 * g.num_edges())?;
        for e in g.edges() {
            writeln!(out, "e {} {}", e.u + 1, e.v + 1)?;
            writeln!(out, "e {} {}", e.v + 1, e.u + 1)?;
        }
        Ok(())
    } else {
        super::write_dimacs(&g, out)
    }
}
