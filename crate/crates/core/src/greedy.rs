//! Greedy heuristics.
//!
//! * MIN / MAX work on the MIS instance directly: MIN repeatedly takes a
//!   minimum-degree vertex and deletes its neighbors; MAX repeatedly deletes
//!   a maximum-degree vertex until no edge is left.
//! * SG and SG3 place vertices one at a time on the side with the larger cut
//!   gain (vertex-oriented).
//! * EC and SEC contract edges, fixing the relative side of the two
//!   endpoints, until no edge is left (edge-oriented).
//!
//! All ties are broken uniformly at random from the seed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, VertexId};
use crate::ising::{cut_weight, CutPartition, MaxCutInstance, Side};
use crate::mis::IndependentSet;
use crate::rng::{rng_from_seed, SeededRng};

/// Keeps a uniformly random element among the extremal candidates seen.
struct TieBreak<T> {
    best: Option<T>,
    ties: u32,
}

impl<T> TieBreak<T> {
    fn new() -> Self {
        TieBreak { best: None, ties: 0 }
    }

    fn offer(&mut self, ord: Ordering, item: T, rng: &mut SeededRng) {
        match ord {
            Ordering::Greater => {
                self.best = Some(item);
                self.ties = 1;
            }
            Ordering::Equal => {
                self.ties += 1;
                if rng.random_range(0..self.ties) == 0 {
                    self.best = Some(item);
                }
            }
            Ordering::Less => {}
        }
    }
}

/// Residual graph with live degrees.
struct Residual<'g> {
    g: &'g Graph,
    alive: Vec<bool>,
    degree: Vec<usize>,
    remaining: usize,
}

impl<'g> Residual<'g> {
    fn new(g: &'g Graph) -> Self {
        Residual { g, alive: vec![true; g.num_vertices()], degree: g.degrees(), remaining: g.num_vertices() }
    }

    fn remove(&mut self, v: VertexId) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        self.remaining -= 1;
        for &(u, _) in self.g.neighbors(v) {
            if self.alive[u] {
                self.degree[u] -= 1;
            }
        }
    }

    /// Live vertex whose degree is extremal under `better`, ties random.
    fn pick(&self, rng: &mut SeededRng, better: impl Fn(usize, usize) -> Ordering) -> Option<VertexId> {
        let mut pick = TieBreak::new();
        let mut best_degree = 0;
        for v in (0..self.alive.len()).filter(|&v| self.alive[v]) {
            let ord = match pick.best {
                None => Ordering::Greater,
                Some(_) => better(self.degree[v], best_degree),
            };
            if ord == Ordering::Greater {
                best_degree = self.degree[v];
            }
            pick.offer(ord, v, rng);
        }
        pick.best
    }
}

/// MIN: take a minimum-degree vertex, delete its neighbors, repeat.
pub fn mis_min(g: &Graph, seed: u64) -> IndependentSet {
    let mut rng = rng_from_seed(seed);
    let mut res = Residual::new(g);
    let mut chosen = Vec::new();
    while let Some(v) = res.pick(&mut rng, |a, b| b.cmp(&a)) {
        chosen.push(v);
        let neighbors: Vec<VertexId> = g.neighbors(v).iter().map(|&(u, _)| u).filter(|&u| res.alive[u]).collect();
        res.remove(v);
        for u in neighbors {
            res.remove(u);
        }
    }
    IndependentSet::from_vertices(chosen)
}

/// MAX: delete a maximum-degree vertex until no edge is left.
pub fn mis_max(g: &Graph, seed: u64) -> IndependentSet {
    let mut rng = rng_from_seed(seed);
    let mut res = Residual::new(g);
    while let Some(v) = res.pick(&mut rng, |a, b| a.cmp(&b)) {
        if res.degree[v] == 0 {
            break;
        }
        res.remove(v);
    }
    IndependentSet::from_vertices((0..g.num_vertices()).filter(|&v| res.alive[v]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceEntity {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl fmt::Display for TraceEntity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEntity::Vertex(v) => write!(f, "{v}"),
            TraceEntity::Edge(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

/// One greedy decision. `alternative_gain` is what the rejected option
/// (the other side, or the other orientation) would have added.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub entity: TraceEntity,
    pub gain: f64,
    pub alternative_gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyCut {
    pub partition: CutPartition,
    /// Cut weight accumulated step by step.
    pub objective: f64,
    pub trace: Vec<TraceStep>,
}

impl GreedyCut {
    fn finish(c: &MaxCutInstance, sides: Vec<Side>, objective: f64, trace: Vec<TraceStep>) -> Self {
        let mut partition = CutPartition::new(sides);
        if c.has_auxiliary_vertex() {
            partition = partition.normalized();
        }
        debug_assert!({
            let w = cut_weight(c, &partition).unwrap();
            (w - objective).abs() <= 1e-6 * (1.0 + w.abs())
        });
        GreedyCut { partition, objective, trace }
    }

    /// CSV with columns `step,entity,gain`.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "entity", "gain"])?;
        for t in &self.trace {
            w.write_record([t.step.to_string(), t.entity.to_string(), format!("{:?}", t.gain)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Running attachment of each vertex to the two sides.
struct Attachment {
    to_v1: Vec<f64>,
    to_v2: Vec<f64>,
}

impl Attachment {
    fn new(n: usize) -> Self {
        Attachment { to_v1: vec![0.0; n], to_v2: vec![0.0; n] }
    }

    fn place(&mut self, g: &Graph, v: VertexId, side: Side) {
        let target = match side {
            Side::V1 => &mut self.to_v1,
            Side::V2 => &mut self.to_v2,
        };
        for &(u, w) in g.neighbors(v) {
            target[u] += w;
        }
    }

    /// Gain of putting `v` in V1 (cuts its edges into V2) and in V2.
    fn gains(&self, v: VertexId) -> (f64, f64) {
        (self.to_v2[v], self.to_v1[v])
    }
}

fn choose_side(gain_v1: f64, gain_v2: f64, rng: &mut SeededRng) -> (Side, f64, f64) {
    let side = match gain_v1.partial_cmp(&gain_v2) {
        Some(Ordering::Greater) => Side::V1,
        Some(Ordering::Less) => Side::V2,
        _ if rng.random_bool(0.5) => Side::V1,
        _ => Side::V2,
    };
    match side {
        Side::V1 => (side, gain_v1, gain_v2),
        Side::V2 => (side, gain_v2, gain_v1),
    }
}

/// SG: vertices in random order, each on the side with the larger gain
/// against the vertices already placed.
pub fn maxcut_sg(c: &MaxCutInstance, seed: u64) -> GreedyCut {
    let g = c.graph();
    let n = g.num_vertices();
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut att = Attachment::new(n);
    let mut sides = vec![Side::V1; n];
    let mut objective = 0.0;
    let mut trace = Vec::with_capacity(n);
    for (step, v) in order.into_iter().enumerate() {
        let (g1, g2) = att.gains(v);
        let (side, gain, alternative_gain) = choose_side(g1, g2, &mut rng);
        sides[v] = side;
        att.place(g, v, side);
        objective += gain;
        trace.push(TraceStep { step, entity: TraceEntity::Vertex(v), gain, alternative_gain });
    }
    GreedyCut::finish(c, sides, objective, trace)
}

/// SG3: seed with the heaviest edge (by |w|), then repeatedly place the
/// unplaced vertex with the largest `|σ₁ − σ₂|` on its better side.
pub fn maxcut_sg3(c: &MaxCutInstance, seed: u64) -> GreedyCut {
    let g = c.graph();
    let n = g.num_vertices();
    let mut rng = rng_from_seed(seed);
    let mut att = Attachment::new(n);
    let mut sides = vec![Side::V1; n];
    let mut placed = vec![false; n];
    let mut objective = 0.0;
    let mut trace = Vec::with_capacity(n);

    let mut heaviest = TieBreak::new();
    let mut best_abs = 0.0f64;
    for e in g.edges() {
        let ord = if heaviest.best.is_none() { Ordering::Greater } else { e.w.abs().total_cmp(&best_abs) };
        if ord == Ordering::Greater {
            best_abs = e.w.abs();
        }
        heaviest.offer(ord, (e.u, e.v), &mut rng);
    }
    let mut queue: Vec<VertexId> = Vec::new();
    if let Some((a, b)) = heaviest.best {
        // first endpoint opens V1; the second follows the gain rule below
        queue.extend(if rng.random_bool(0.5) { [a, b] } else { [b, a] });
    }

    for step in 0..n {
        let v = if let Some(v) = queue.first().copied() {
            queue.remove(0);
            v
        } else {
            let mut pick = TieBreak::new();
            let mut best = 0.0f64;
            for v in (0..n).filter(|&v| !placed[v]) {
                let d = (att.to_v1[v] - att.to_v2[v]).abs();
                let ord = if pick.best.is_none() { Ordering::Greater } else { d.total_cmp(&best) };
                if ord == Ordering::Greater {
                    best = d;
                }
                pick.offer(ord, v, &mut rng);
            }
            pick.best.expect("unplaced vertex remains")
        };
        let (g1, g2) = att.gains(v);
        let (side, gain, alternative_gain) =
            if step == 0 { (Side::V1, 0.0, 0.0) } else { choose_side(g1, g2, &mut rng) };
        placed[v] = true;
        sides[v] = side;
        att.place(g, v, side);
        objective += gain;
        trace.push(TraceStep { step, entity: TraceEntity::Vertex(v), gain, alternative_gain });
    }
    GreedyCut::finish(c, sides, objective, trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ContractionRule {
    /// Largest weight, endpoints always opposite.
    Plain,
    /// Largest |weight|; positive opposite, negative same side.
    Signed,
}

/// Accumulated link between two super-vertices: `signed` is
/// `Σ w_ab s_a s_b` under the current relative signs, `raw` is `Σ w_ab`.
#[derive(Debug, Clone, Copy, Default)]
struct Link {
    signed: f64,
    raw: f64,
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    key: f64,
    tiebreak: u64,
    a: VertexId,
    b: VertexId,
    signed: f64,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then(self.tiebreak.cmp(&other.tiebreak))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn contract(c: &MaxCutInstance, seed: u64, rule: ContractionRule) -> GreedyCut {
    let g = c.graph();
    let n = g.num_vertices();
    let mut rng = rng_from_seed(seed);
    let mut links: Vec<BTreeMap<VertexId, Link>> = vec![BTreeMap::new(); n];
    for e in g.edges() {
        links[e.u].insert(e.v, Link { signed: e.w, raw: e.w });
        links[e.v].insert(e.u, Link { signed: e.w, raw: e.w });
    }
    let mut members: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut sign = vec![1i8; n];
    let mut root: Vec<VertexId> = (0..n).collect();
    let mut alive = vec![true; n];

    let key_of = |signed: f64| match rule {
        ContractionRule::Plain => signed,
        ContractionRule::Signed => signed.abs(),
    };
    let mut heap = BinaryHeap::new();
    for e in g.edges() {
        heap.push(HeapEntry { key: key_of(e.w), tiebreak: rng.random(), a: e.u, b: e.v, signed: e.w });
    }

    let mut objective = 0.0;
    let mut trace = Vec::new();
    while let Some(entry) = heap.pop() {
        let (a, b) = (entry.a, entry.b);
        if !alive[a] || !alive[b] {
            continue;
        }
        let Some(link) = links[a].get(&b).copied() else { continue };
        if link.signed.to_bits() != entry.signed.to_bits() {
            continue;
        }
        // relative orientation of the two roots: −1 opposite, +1 same side
        let r: i8 = match rule {
            ContractionRule::Plain => -1,
            ContractionRule::Signed if link.signed < 0.0 => 1,
            ContractionRule::Signed => -1,
        };
        let gain = (link.raw - r as f64 * link.signed) / 2.0;
        let alternative_gain = (link.raw + r as f64 * link.signed) / 2.0;
        objective += gain;
        trace.push(TraceStep { step: trace.len(), entity: TraceEntity::Edge(a, b), gain, alternative_gain });

        let (keep, absorb) = if links[a].len() >= links[b].len() { (a, b) } else { (b, a) };
        alive[absorb] = false;
        let absorbed = std::mem::take(&mut links[absorb]);
        links[keep].remove(&absorb);
        for (x, l) in absorbed {
            if x == keep {
                continue;
            }
            links[x].remove(&absorb);
            let moved = Link { signed: r as f64 * l.signed, raw: l.raw };
            let merged = {
                let slot = links[keep].entry(x).or_default();
                slot.signed += moved.signed;
                slot.raw += moved.raw;
                *slot
            };
            links[x].insert(keep, merged);
            heap.push(HeapEntry {
                key: key_of(merged.signed),
                tiebreak: rng.random(),
                a: keep,
                b: x,
                signed: merged.signed,
            });
        }
        let moved_members = std::mem::take(&mut members[absorb]);
        for &v in &moved_members {
            sign[v] *= r;
            root[v] = keep;
        }
        members[keep].extend(moved_members);
    }

    let mut root_side = vec![Side::V1; n];
    for (v, side) in root_side.iter_mut().enumerate() {
        if alive[v] && rng.random_bool(0.5) {
            *side = Side::V2;
        }
    }
    let sides = (0..n)
        .map(|v| if sign[v] > 0 { root_side[root[v]] } else { root_side[root[v]].opposite() })
        .collect();
    GreedyCut::finish(c, sides, objective, trace)
}

/// EC: contract the heaviest remaining edge, endpoints on opposite sides.
pub fn maxcut_ec(c: &MaxCutInstance, seed: u64) -> GreedyCut {
    contract(c, seed, ContractionRule::Plain)
}

/// SEC: contract the remaining edge of largest |weight|; positive weight
/// puts the endpoints on opposite sides, negative weight on the same side.
pub fn maxcut_sec(c: &MaxCutInstance, seed: u64) -> GreedyCut {
    contract(c, seed, ContractionRule::Signed)
}
