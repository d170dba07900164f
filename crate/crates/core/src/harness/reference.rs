//! Published reference values and closed-form estimates.

use std::f64::consts::{E, LOG2_E, PI};

use super::HarnessError;

/// Limiting SK ground-state energy per `n^{3/2}`.
pub const PARISI: f64 = -0.763166;

/// SK energy per `n^{3/2}` reached by the simple greedy heuristic, `−(2/3)√(2/π)`.
pub fn pi_sg() -> f64 {
    -(2.0 / 3.0) * (2.0 / PI).sqrt()
}

/// SK energy per `n^{3/2}` of the SDP rounding bound, `−2/π`.
pub fn pi_sdp() -> f64 {
    -2.0 / PI
}

/// Independence density of random `d`-regular graphs from the 1RSB cavity method.
pub const RSB_TABLE: [(usize, f64); 9] = [
    (20, 0.1948),
    (30, 0.1529),
    (40, 0.1273),
    (50, 0.1098),
    (60, 0.0970),
    (70, 0.0871),
    (80, 0.0792),
    (90, 0.0728),
    (100, 0.0674),
];

pub fn rsb_density(d: usize) -> Option<f64> {
    RSB_TABLE.iter().find(|(k, _)| *k == d).map(|&(_, rho)| rho)
}

/// Known independence number of a coding-theory graph, with published
/// greedy (MIN), circle-relaxation and annealing results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodingReference {
    pub name: &'static str,
    pub vertices: usize,
    pub edges: usize,
    /// `(lower, upper)`; equal when the optimum is known.
    pub alpha: (usize, usize),
    pub min: usize,
    pub circut: usize,
    pub sa: usize,
}

const fn row(
    name: &'static str,
    vertices: usize,
    edges: usize,
    alpha: (usize, usize),
    min: usize,
    circut: usize,
    sa: usize,
) -> CodingReference {
    CodingReference { name, vertices, edges, alpha, min, circut, sa }
}

pub const CODING_TABLE: [CodingReference; 33] = [
    row("1dc.64", 64, 543, (10, 10), 10, 10, 10),
    row("1dc.128", 128, 1471, (16, 16), 15, 16, 16),
    row("1dc.256", 256, 3839, (30, 30), 26, 30, 30),
    row("1dc.512", 512, 9727, (52, 52), 43, 52, 52),
    row("1dc.1024", 1024, 24063, (94, 94), 77, 93, 94),
    row("1dc.2048", 2048, 58367, (172, 172), 131, 171, 172),
    row("1dc.4096", 4096, 139263, (316, 320), 236, 315, 316),
    row("2dc.128", 128, 5173, (5, 5), 5, 5, 5),
    row("2dc.256", 256, 17183, (7, 7), 7, 7, 7),
    row("2dc.512", 512, 54895, (11, 11), 10, 10, 11),
    row("2dc.1024", 1024, 169162, (16, 16), 15, 14, 16),
    row("2dc.2048", 2048, 504451, (24, 24), 21, 21, 24),
    row("1tc.8", 8, 6, (4, 4), 4, 4, 4),
    row("1tc.16", 16, 22, (8, 8), 8, 8, 8),
    row("1tc.32", 32, 68, (12, 12), 12, 12, 12),
    row("1tc.64", 64, 192, (20, 20), 20, 20, 20),
    row("1tc.128", 128, 512, (38, 38), 38, 38, 38),
    row("1tc.256", 256, 1312, (63, 63), 61, 62, 63),
    row("1tc.512", 512, 3264, (110, 110), 106, 110, 110),
    row("1tc.1024", 1024, 7936, (196, 196), 189, 187, 196),
    row("1tc.2048", 2048, 18944, (352, 352), 331, 331, 352),
    row("1et.64", 64, 264, (18, 18), 18, 18, 18),
    row("1et.128", 128, 672, (28, 28), 28, 28, 28),
    row("1et.256", 256, 1664, (50, 50), 50, 50, 50),
    row("1et.512", 512, 4032, (100, 100), 96, 98, 100),
    row("1et.1024", 1024, 9600, (171, 171), 155, 167, 171),
    row("1et.2048", 2048, 22528, (316, 316), 293, 296, 316),
    row("1zc.128", 128, 2240, (18, 18), 16, 18, 18),
    row("1zc.256", 256, 5632, (36, 36), 36, 36, 36),
    row("1zc.512", 512, 13824, (62, 62), 58, 62, 62),
    row("1zc.1024", 1024, 33280, (112, 117), 103, 108, 112),
    row("1zc.2048", 2048, 78848, (198, 210), 181, 178, 198),
    row("1zc.4096", 4096, 184320, (379, 410), 329, 322, 379),
];

pub fn coding_reference(name: &str) -> Option<&'static CodingReference> {
    CODING_TABLE.iter().find(|r| r.name == name)
}

/// `R(n) = 2 log₂ n − 2 log₂ log₂ n + 2 log₂ e − 1`, the expected independence
/// number of `G(n, 1/2)` to second order.
pub fn formula_r(n: usize) -> Result<f64, HarnessError> {
    if n < 3 {
        return Err(HarnessError::Domain(format!("R(n) needs n ≥ 3, got {n}")));
    }
    let l = (n as f64).log2();
    Ok(2.0 * l - 2.0 * l.log2() + 2.0 * LOG2_E - 1.0)
}

/// `ρ(d̄) = (2/d̄)(ln d̄ − ln ln d̄ − ln 2 + 1)`, the independence density of
/// sparse `G(n, d̄/n)` for large mean degree.
pub fn formula_sparse_density(dbar: f64) -> Result<f64, HarnessError> {
    if !(dbar.is_finite() && dbar > E) {
        return Err(HarnessError::Domain(format!("sparse density needs d̄ > e, got {dbar}")));
    }
    let l = dbar.ln();
    Ok(2.0 / dbar * (l - l.ln() - 2f64.ln() + 1.0))
}
