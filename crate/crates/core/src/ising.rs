//! QUBO and Ising problem forms, their exact interconversion, and the
//! Max-Cut embedding with an auxiliary vertex.
//!
//! Conventions:
//! * QUBO value `xᵀQx` over `x ∈ {0,1}ⁿ` with symmetric `Q`.
//! * Ising energy `h0 − Σ_{i<j} J_ij z_i z_j − Σ_i h_i z_i` over `z ∈ {±1}ⁿ`.
//! * The two are linked by `z = 1 − 2x`: a selected bit is spin `−1`.
//! * The embedded Max-Cut instance has vertex 0 as the auxiliary vertex and
//!   vertex `i + 1` for spin `i`; edge weights are `w = −2J` (and `−2h_i` on
//!   the auxiliary edges). With `z_0 = +1` the cut weight equals
//!   `−H(z) + h0 + w0/2`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsingError {
    #[error("length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry {index} is {value}, expected 0 or 1")]
    NotBinary { index: usize, value: u8 },
    #[error("entry {index} is {value}, expected -1 or +1")]
    NotSpin { index: usize, value: i8 },
    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coupling on the diagonal at {0}")]
    Diagonal(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Symmetric QUBO matrix. The diagonal is dense; off-diagonal entries are
/// stored once per unordered pair `i < j` and stand for both `Q_ij` and `Q_ji`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    diag: Vec<f64>,
    off: BTreeMap<(usize, usize), f64>,
}

impl Qubo {
    pub fn zeros(n: usize) -> Self {
        Qubo { diag: vec![0.0; n], off: BTreeMap::new() }
    }

    /// Symmetrize a dense square matrix as `(Q + Qᵀ)/2`.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self, IsingError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(IsingError::NotSquare);
        }
        let mut q = Qubo::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                q.add(i, j, v)?;
            }
        }
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Add `v` to the unsymmetrized entry `(i, j)`; after symmetrization an
    /// off-diagonal contribution lands half on `(i, j)`, half on `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) -> Result<(), IsingError> {
        self.check(i)?;
        self.check(j)?;
        if !v.is_finite() {
            return Err(IsingError::NonFinite);
        }
        if i == j {
            self.diag[i] += v;
        } else if v != 0.0 {
            *self.off.entry((i.min(j), i.max(j))).or_insert(0.0) += v / 2.0;
        }
        Ok(())
    }

    /// Set `Q_ij = Q_ji = v`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, v: f64) -> Result<(), IsingError> {
        self.check(i)?;
        self.check(j)?;
        if !v.is_finite() {
            return Err(IsingError::NonFinite);
        }
        if i == j {
            self.diag[i] = v;
        } else {
            self.off.insert((i.min(j), i.max(j)), v);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else {
            self.off.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries `(i, j, Q_ij)` with `i < j`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.off.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    fn check(&self, i: usize) -> Result<(), IsingError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(IsingError::IndexOutOfRange { index: i, n: self.len() })
        }
    }

    /// `xᵀQx` for a binary vector.
    pub fn value(&self, x: &[u8]) -> Result<f64, IsingError> {
        check_binary(x, self.len())?;
        let mut total = 0.0;
        for (i, &d) in self.diag.iter().enumerate() {
            if x[i] == 1 {
                total += d;
            }
        }
        for (&(i, j), &v) in &self.off {
            if x[i] == 1 && x[j] == 1 {
                total += 2.0 * v;
            }
        }
        Ok(total)
    }
}

pub(crate) fn check_binary(x: &[u8], n: usize) -> Result<(), IsingError> {
    if x.len() != n {
        return Err(IsingError::DimensionMismatch { expected: n, got: x.len() });
    }
    match x.iter().position(|&b| b > 1) {
        Some(index) => Err(IsingError::NotBinary { index, value: x[index] }),
        None => Ok(()),
    }
}

/// Spin vector with entries exactly `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(z: Vec<i8>) -> Result<Self, IsingError> {
        if let Some(index) = z.iter().position(|&s| s != 1 && s != -1) {
            return Err(IsingError::NotSpin { index, value: z[index] });
        }
        Ok(SpinAssignment(z))
    }

    pub fn all_up(n: usize) -> Self {
        SpinAssignment(vec![1; n])
    }

    /// `z = 1 − 2x`.
    pub fn from_binary(x: &[u8]) -> Result<Self, IsingError> {
        check_binary(x, x.len())?;
        Ok(SpinAssignment(x.iter().map(|&b| 1 - 2 * b as i8).collect()))
    }

    pub(crate) fn from_raw(z: Vec<i8>) -> Self {
        debug_assert!(z.iter().all(|&s| s == 1 || s == -1));
        SpinAssignment(z)
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        SpinAssignment(self.0.iter().map(|&s| -s).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

/// Ising model with offset, local fields and pairwise couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    offset: f64,
    fields: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
}

impl IsingModel {
    pub fn new(n: usize) -> Self {
        IsingModel { offset: 0.0, fields: vec![0.0; n], couplings: BTreeMap::new() }
    }

    /// Ising model with zero fields and `J_ij` equal to the edge weights.
    pub fn from_couplings_graph(g: &Graph) -> Self {
        let mut m = IsingModel::new(g.num_vertices());
        for e in g.edges() {
            m.couplings.insert((e.u, e.v), e.w);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, h0: f64) {
        self.offset = h0;
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn set_field(&mut self, i: usize, h: f64) -> Result<(), IsingError> {
        self.check(i)?;
        self.fields[i] = h;
        Ok(())
    }

    /// Add to `J_ij`; `(i, j)` and `(j, i)` accumulate into one canonical
    /// entry, and an entry that sums to zero is dropped.
    pub fn add_coupling(&mut self, i: usize, j: usize, v: f64) -> Result<(), IsingError> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(IsingError::Diagonal(i));
        }
        let key = (i.min(j), i.max(j));
        let entry = self.couplings.entry(key).or_insert(0.0);
        *entry += v;
        if *entry == 0.0 {
            self.couplings.remove(&key);
        }
        Ok(())
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    /// Nonzero couplings `(i, j, J_ij)` with `i < j`, ascending.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    fn check(&self, i: usize) -> Result<(), IsingError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(IsingError::IndexOutOfRange { index: i, n: self.len() })
        }
    }

    /// `h0 − Σ_{i<j} J_ij z_i z_j − Σ_i h_i z_i`.
    pub fn energy(&self, z: &SpinAssignment) -> Result<f64, IsingError> {
        if z.len() != self.len() {
            return Err(IsingError::DimensionMismatch { expected: self.len(), got: z.len() });
        }
        let s = z.as_slice();
        let quad: f64 = self.couplings.iter().map(|(&(i, j), &v)| v * (s[i] * s[j]) as f64).sum();
        let lin: f64 = self.fields.iter().zip(s).map(|(h, &zi)| h * zi as f64).sum();
        Ok(self.offset - quad - lin)
    }

    /// Compressed adjacency for the solvers.
    pub fn coupling_table(&self) -> CouplingTable {
        CouplingTable::new(self)
    }

    /// `ising n h0`, then `h i value` for nonzero fields and `J i j value`
    /// for couplings, all with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ising {} {:.16e}", self.len(), self.offset);
        for (i, &h) in self.fields.iter().enumerate() {
            if h != 0.0 {
                let _ = writeln!(s, "h {i} {h:.16e}");
            }
        }
        for (&(i, j), &v) in &self.couplings {
            let _ = writeln!(s, "J {i} {j} {v:.16e}");
        }
        s
    }

    pub fn from_text<R: BufRead>(reader: R) -> Result<Self, IsingError> {
        let perr = |line: usize, message: String| IsingError::Parse { line, message };
        let mut model: Option<IsingModel> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| perr(lineno, e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() || fields[0].starts_with('#') {
                continue;
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| perr(lineno, format!("bad number `{s}`")));
            let idx = |s: &str| s.parse::<usize>().map_err(|_| perr(lineno, format!("bad index `{s}`")));
            match (fields[0], fields.len()) {
                ("ising", 3) => {
                    if model.is_some() {
                        return Err(perr(lineno, "second header".into()));
                    }
                    let mut m = IsingModel::new(idx(fields[1])?);
                    m.offset = num(fields[2])?;
                    model = Some(m);
                }
                ("h", 3) => {
                    let m = model.as_mut().ok_or_else(|| perr(lineno, "field before header".into()))?;
                    m.set_field(idx(fields[1])?, num(fields[2])?)
                        .map_err(|e| perr(lineno, e.to_string()))?;
                }
                ("J", 4) => {
                    let m = model.as_mut().ok_or_else(|| perr(lineno, "coupling before header".into()))?;
                    let (i, j) = (idx(fields[1])?, idx(fields[2])?);
                    if i >= j {
                        return Err(perr(lineno, format!("coupling indices must satisfy i < j, got {i} {j}")));
                    }
                    m.add_coupling(i, j, num(fields[3])?).map_err(|e| perr(lineno, e.to_string()))?;
                }
                _ => return Err(perr(lineno, format!("unrecognized line `{line}`"))),
            }
        }
        model.ok_or_else(|| perr(0, "missing `ising n h0` header".into()))
    }
}

/// Row-compressed symmetric coupling lists: for spin `i`, the pairs
/// `(j, J_ij)` over all nonzero couplings touching `i`.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
}

impl CouplingTable {
    fn new(m: &IsingModel) -> Self {
        let n = m.len();
        let mut degree = vec![0usize; n];
        for &(i, j) in m.couplings.keys() {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for (&(i, j), &v) in &m.couplings {
            neighbors[fill[i]] = j as u32;
            weights[fill[i]] = v;
            fill[i] += 1;
            neighbors[fill[j]] = i as u32;
            weights[fill[j]] = v;
            fill[j] += 1;
        }
        CouplingTable { offsets, neighbors, weights }
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.neighbors[a..b], &self.weights[a..b])
    }
}

/// `h0 = ½Σ_{i≤j} Q_ij`, `h_i = ½Σ_j Q_ij`, `J_ij = −½Q_ij`.
pub fn qubo_to_ising(q: &Qubo) -> IsingModel {
    let n = q.len();
    let mut m = IsingModel::new(n);
    let mut upper_sum: f64 = q.diagonal().iter().sum();
    for (i, &d) in q.diagonal().iter().enumerate() {
        m.fields[i] = 0.5 * d;
    }
    for (i, j, v) in q.off_diagonal() {
        upper_sum += v;
        m.fields[i] += 0.5 * v;
        m.fields[j] += 0.5 * v;
        if v != 0.0 {
            m.couplings.insert((i, j), -0.5 * v);
        }
    }
    m.offset = 0.5 * upper_sum;
    m
}

/// Which side of a cut a vertex is on. `V1` corresponds to spin `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    V1,
    V2,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::V1 => Side::V2,
            Side::V2 => Side::V1,
        }
    }

    pub fn spin(self) -> i8 {
        match self {
            Side::V1 => 1,
            Side::V2 => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutPartition {
    sides: Vec<Side>,
}

impl CutPartition {
    pub fn new(sides: Vec<Side>) -> Self {
        CutPartition { sides }
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn swapped(&self) -> Self {
        CutPartition { sides: self.sides.iter().map(|s| s.opposite()).collect() }
    }

    /// Flip globally if needed so vertex 0 sits in `V1`.
    pub fn normalized(self) -> Self {
        match self.sides.first() {
            Some(Side::V2) => self.swapped(),
            _ => self,
        }
    }
}

pub fn cut_from_spins(z: &SpinAssignment) -> CutPartition {
    CutPartition::new(z.as_slice().iter().map(|&s| if s > 0 { Side::V1 } else { Side::V2 }).collect())
}

/// Spins of a partition after normalizing vertex 0 into `V1`.
pub fn spins_from_cut(p: &CutPartition) -> SpinAssignment {
    let p = p.clone().normalized();
    SpinAssignment::from_raw(p.sides.iter().map(|s| s.spin()).collect())
}

/// Ising spins encoded by a cut of an embedded instance: normalize so the
/// auxiliary vertex has spin `+1`, then drop it.
pub fn ising_spins_from_embedded_cut(p: &CutPartition) -> SpinAssignment {
    let mut z = spins_from_cut(p).into_inner();
    if !z.is_empty() {
        z.remove(0);
    }
    SpinAssignment::from_raw(z)
}

/// Weighted Max-Cut instance. When built by [`embed_maxcut`], vertex 0 is the
/// auxiliary vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutInstance {
    graph: Graph,
    total_weight: f64,
    auxiliary: bool,
}

impl MaxCutInstance {
    pub fn from_graph(graph: Graph) -> Self {
        let total_weight = graph.total_weight();
        MaxCutInstance { graph, total_weight, auxiliary: false }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    /// `w0`, the sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn has_auxiliary_vertex(&self) -> bool {
        self.auxiliary
    }
}

/// Build `G*`: vertex 0 is auxiliary, spin `i` becomes vertex `i + 1`; edge
/// `(0, i+1)` carries `−2h_i` for nonzero `h_i` and `(i+1, j+1)` carries
/// `−2J_ij`.
pub fn embed_maxcut(m: &IsingModel) -> MaxCutInstance {
    let aux = m.fields.iter().enumerate().filter(|(_, &h)| h != 0.0).map(|(i, &h)| (0, i + 1, -2.0 * h));
    let pairs = m.couplings.iter().map(|(&(i, j), &v)| (i + 1, j + 1, -2.0 * v));
    let graph = Graph::from_weighted_edges(m.len() + 1, aux.chain(pairs))
        .expect("canonical couplings form a simple graph");
    let total_weight = graph.total_weight();
    MaxCutInstance { graph, total_weight, auxiliary: true }
}

/// Sum of the weights of edges whose endpoints lie on different sides.
pub fn cut_weight(c: &MaxCutInstance, p: &CutPartition) -> Result<f64, IsingError> {
    if p.len() != c.num_vertices() {
        return Err(IsingError::DimensionMismatch { expected: c.num_vertices(), got: p.len() });
    }
    Ok(c.graph.edges().iter().filter(|e| p.sides[e.u] != p.sides[e.v]).map(|e| e.w).sum())
}
