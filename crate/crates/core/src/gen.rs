//! Seeded samplers for the random models.
//!
//! All samplers draw from a [`RngStream`], a ChaCha8 generator whose key is
//! derived from a master seed and whose stream number is the trial index, so a
//! trial's sample never depends on which thread ran it or in what order.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, TemporalGraph, Vertex, Window};

/// Version tag of the stream derivation below. Bump it whenever the mapping
/// from `(master_seed, stream_id)` to generator state changes.
pub const STREAM_DERIVATION_VERSION: u32 = 1;

/// Default upper bound on `n` for materialized complete graphs.
pub const DEFAULT_COMPLETE_CAP: usize = 8000;

/// Below this edge probability the pair enumeration skips geometrically.
const SPARSE_BELOW: f64 = 0.1;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child seed for sub-experiment `index` of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F)))
}

/// Identifies one reproducible random stream.
///
/// Derivation (version 1): the 256-bit ChaCha8 key is four successive
/// SplitMix64 outputs seeded with `master_seed`, little-endian; the ChaCha
/// stream number is `stream_id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngStream {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> SimRng {
        let mut key = [0u8; 32];
        let mut state = self.master_seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Number of unordered pairs of `n` vertices.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// First linear index of row `i` in the lexicographic enumeration of pairs `i < j`.
#[inline]
fn row_start(n: u64, i: u64) -> u64 {
    i * (2 * n - i - 1) / 2
}

/// Inverse of the lexicographic pair enumeration `(0,1), (0,2), …, (n-2,n-1)`.
pub fn pair_from_index(n: usize, idx: u64) -> EdgeKey {
    let nn = n as u64;
    debug_assert!(idx < pair_count(n));
    let b = 2.0 * nn as f64 - 1.0;
    let guess = ((b - (b * b - 8.0 * idx as f64).max(0.0).sqrt()) / 2.0).floor();
    let mut i = (guess.max(0.0) as u64).min(nn - 2);
    while i > 0 && row_start(nn, i) > idx {
        i -= 1;
    }
    while i + 1 < nn - 1 && row_start(nn, i + 1) <= idx {
        i += 1;
    }
    let j = i + 1 + (idx - row_start(nn, i));
    EdgeKey::new(i as Vertex, j as Vertex).expect("distinct endpoints")
}

/// Inverse-CDF exponential(1) draw.
#[inline]
fn exp1(rng: &mut SimRng) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Visits included pair indices of a Bernoulli(`q`) selection over `0..total`,
/// skipping geometrically between hits.
fn geometric_hits(total: u64, q: f64, rng: &mut SimRng, mut hit: impl FnMut(u64, &mut SimRng)) {
    if q <= 0.0 || total == 0 {
        return;
    }
    let log_miss = (-q).ln_1p();
    let mut idx: u64 = 0;
    let mut first = true;
    loop {
        let u = rng.random::<f64>();
        let skip = ((1.0 - u).ln() / log_miss).floor();
        let step = if first { 0.0 } else { 1.0 } + skip;
        if step >= (total - idx) as f64 {
            return;
        }
        idx += step as u64;
        if idx >= total {
            return;
        }
        first = false;
        hit(idx, rng);
    }
}

/// Collects edges keyed by increasing pair index into graph parts.
struct PairCollector {
    n: u64,
    row: u64,
    next_row: u64,
    edges: Vec<EdgeKey>,
    label_start: Vec<u32>,
    labels: Vec<f64>,
}

impl PairCollector {
    fn new(n: usize) -> Self {
        let nn = n as u64;
        PairCollector {
            n: nn,
            row: 0,
            next_row: if nn >= 2 { row_start(nn, 1) } else { 0 },
            edges: Vec::new(),
            label_start: vec![0],
            labels: Vec::new(),
        }
    }

    /// `idx` must exceed every previously pushed index.
    fn push(&mut self, idx: u64, labels: impl IntoIterator<Item = f64>) {
        while idx >= self.next_row {
            self.row += 1;
            self.next_row = row_start(self.n, self.row + 1);
        }
        let j = self.row + 1 + (idx - row_start(self.n, self.row));
        self.edges
            .push(EdgeKey::new(self.row as Vertex, j as Vertex).expect("distinct"));
        self.labels.extend(labels);
        self.label_start.push(self.labels.len() as u32);
    }

    fn finish(self, window: Window) -> TemporalGraph {
        TemporalGraph::from_sorted_parts(
            self.n as usize,
            window,
            self.edges,
            self.label_start,
            self.labels,
        )
    }
}

/// Samples F(n,p) on window `[0, p]`: each pair is present independently with
/// probability `p` and carries one label uniform on `[0, p]`.
pub fn sample_fnp(n: usize, p: f64, rng: &mut SimRng) -> Result<TemporalGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("edge probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::contract("n must be at least 1"));
    }
    let total = pair_count(n);
    let mut out = PairCollector::new(n);
    if p < SPARSE_BELOW {
        geometric_hits(total, p, rng, |idx, rng| {
            let t = p * rng.random::<f64>();
            out.push(idx, [t]);
        });
    } else {
        for idx in 0..total {
            if rng.random::<f64>() < p {
                let t = p * rng.random::<f64>();
                out.push(idx, [t]);
            }
        }
    }
    Ok(out.finish(Window::new(0.0, p)?))
}

/// Samples F(n,1): the complete graph with i.i.d. uniform labels.
pub fn sample_complete(n: usize, rng: &mut SimRng) -> Result<TemporalGraph> {
    sample_complete_capped(n, DEFAULT_COMPLETE_CAP, rng)
}

pub fn sample_complete_capped(n: usize, cap: usize, rng: &mut SimRng) -> Result<TemporalGraph> {
    check_complete(n, cap)?;
    let mut out = PairCollector::new(n);
    for idx in 0..pair_count(n) {
        out.push(idx, [rng.random::<f64>()]);
    }
    Ok(out.finish(Window::UNIT))
}

fn check_complete(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::contract("n must be at least 1"));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "complete graph with n = {n} exceeds the cap of {cap}; \
             use the sparse F(n,p) sampler or raise the cap"
        )));
    }
    Ok(())
}

/// Labels of a complete temporal graph in a flat upper-triangular array.
///
/// Draws the same values in the same order as [`sample_complete`], so both
/// representations agree for a given stream.
#[derive(Clone, Debug)]
pub struct CompleteLabels {
    n: usize,
    labels: Vec<f64>,
}

impl CompleteLabels {
    pub fn sample(n: usize, cap: usize, rng: &mut SimRng) -> Result<Self> {
        check_complete(n, cap)?;
        let labels = (0..pair_count(n)).map(|_| rng.random::<f64>()).collect();
        Ok(CompleteLabels { n, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Linear pair index of `{a, b}`, `a != b`.
    #[inline]
    pub fn index(&self, a: Vertex, b: Vertex) -> usize {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        row_start(self.n as u64, i as u64) as usize + (j - i - 1)
    }

    #[inline]
    pub fn label(&self, a: Vertex, b: Vertex) -> f64 {
        self.labels[self.index(a, b)]
    }

    pub fn to_graph(&self) -> TemporalGraph {
        let mut out = PairCollector::new(self.n);
        for (idx, &t) in self.labels.iter().enumerate() {
            out.push(idx as u64, [t]);
        }
        out.finish(Window::UNIT)
    }
}

/// Samples H(n,p): each pair carries the arrivals of a rate-1 Poisson process
/// on `[0, p]`, generated from exponential inter-arrival gaps.
pub fn sample_poisson(n: usize, p: f64, rng: &mut SimRng) -> Result<TemporalGraph> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::contract(format!("horizon {p} must be finite and non-negative")));
    }
    if n == 0 {
        return Err(Error::contract("n must be at least 1"));
    }
    let total = pair_count(n);
    let mut out = PairCollector::new(n);
    let mut buf = Vec::new();
    // Continue a process whose first arrival is `first`.
    let tail = |first: f64, rng: &mut SimRng, buf: &mut Vec<f64>| {
        buf.clear();
        buf.push(first);
        let mut t = first;
        loop {
            t += exp1(rng);
            if t > p {
                break;
            }
            if t > *buf.last().unwrap() {
                buf.push(t);
            }
        }
    };
    let hit = -(-p).exp_m1(); // P(at least one arrival) = 1 - e^{-p}
    if hit < SPARSE_BELOW {
        geometric_hits(total, hit, rng, |idx, rng| {
            // First arrival conditioned on landing in [0, p].
            let first = -(-(rng.random::<f64>() * hit)).ln_1p();
            tail(first.min(p), rng, &mut buf);
            out.push(idx, buf.iter().copied());
        });
    } else {
        for idx in 0..total {
            let first = exp1(rng);
            if first <= p {
                tail(first, rng, &mut buf);
                out.push(idx, buf.iter().copied());
            }
        }
    }
    Ok(out.finish(Window::new(0.0, p)?))
}

/// An ordered schedule of pairwise calls among `n` agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallSequence {
    pub n: usize,
    pub calls: Vec<EdgeKey>,
}

/// Lazily yields a uniformly random permutation of all pairs (call-once model).
///
/// This is a forward Fisher–Yates shuffle over the virtual pair array, with
/// displaced entries kept in a map, so a prefix costs only its own length.
pub struct CoCalls<'r> {
    n: usize,
    total: u64,
    pos: u64,
    moved: HashMap<u64, u64>,
    rng: &'r mut SimRng,
}

impl<'r> CoCalls<'r> {
    pub fn new(n: usize, rng: &'r mut SimRng) -> Self {
        CoCalls {
            n,
            total: pair_count(n),
            pos: 0,
            moved: HashMap::new(),
            rng,
        }
    }
}

impl Iterator for CoCalls<'_> {
    type Item = EdgeKey;

    fn next(&mut self) -> Option<EdgeKey> {
        if self.pos >= self.total {
            return None;
        }
        let i = self.pos;
        let j = self.rng.random_range(i..self.total);
        let at_j = self.moved.get(&j).copied().unwrap_or(j);
        let at_i = self.moved.remove(&i).unwrap_or(i);
        if j != i {
            self.moved.insert(j, at_i);
        }
        self.pos += 1;
        Some(pair_from_index(self.n, at_j))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.pos) as usize;
        (left, Some(left))
    }
}

/// Lazily yields i.i.d. uniform pairs (calls with repetition).
pub struct AnyCalls<'r> {
    n: usize,
    total: u64,
    rng: &'r mut SimRng,
}

impl<'r> AnyCalls<'r> {
    pub fn new(n: usize, rng: &'r mut SimRng) -> Self {
        AnyCalls {
            n,
            total: pair_count(n),
            rng,
        }
    }
}

impl Iterator for AnyCalls<'_> {
    type Item = EdgeKey;

    fn next(&mut self) -> Option<EdgeKey> {
        let idx = self.rng.random_range(0..self.total);
        Some(pair_from_index(self.n, idx))
    }
}

/// A uniformly random ordering of all `C(n,2)` pairs.
pub fn co_call_sequence(n: usize, rng: &mut SimRng) -> Result<CallSequence> {
    check_agents(n)?;
    Ok(CallSequence {
        n,
        calls: CoCalls::new(n, rng).collect(),
    })
}

/// `max_calls` pairs drawn uniformly with replacement.
pub fn any_call_sequence(n: usize, max_calls: usize, rng: &mut SimRng) -> Result<CallSequence> {
    check_agents(n)?;
    Ok(CallSequence {
        n,
        calls: AnyCalls::new(n, rng).take(max_calls).collect(),
    })
}

pub(crate) fn check_agents(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::contract(format!("need at least 2 agents, got {n}")));
    }
    Ok(())
}
