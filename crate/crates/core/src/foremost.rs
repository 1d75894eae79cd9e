//! Foremost trees and the growth trajectory of a foremost tree.
//!
//! [`foremost_tree`] grows a tree from the root like Prim's algorithm, except
//! that the next edge is the cut edge of minimum label among those whose
//! label is no earlier than the arrival time at their tree endpoint. Such an
//! edge can never become ineligible later, so each outside vertex only needs
//! its best eligible offer; stale heap entries are skipped on pop.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::gen::CompleteLabels;
use crate::graph::{reverse_time, Appearance, EdgeKey, TemporalGraph, TemporalPath, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Root reaches every vertex; labels grow away from the root.
    Increasing,
    /// Every vertex reaches the root; labels grow toward the root.
    Decreasing,
}

/// Whether to verify the source precondition before growing the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceCheck {
    Checked,
    /// The caller already knows the root is a source (sink).
    Trusted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeEdge {
    pub parent: Vertex,
    pub child: Vertex,
    pub label: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForemostTree {
    pub root: Vertex,
    pub orientation: Orientation,
    /// Arrival time assigned to the root (the window start, or the window end
    /// for decreasing trees).
    pub origin: f64,
    /// `(parent, label)` for every vertex but the root.
    pub parent: Vec<Option<(Vertex, f64)>>,
    /// Tree edges `e_1, …, e_{n-1}` in insertion order.
    pub attach_order: Vec<TreeEdge>,
    /// `Y_1, …, Y_{n-1}`: labels of the tree edges in insertion order. For
    /// decreasing trees these are measured in reversed time.
    pub trajectory: Vec<f64>,
}

impl ForemostTree {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Time at which the tree path between the root and `u` completes.
    pub fn arrival(&self, u: Vertex) -> f64 {
        match self.parent[u] {
            Some((_, t)) => t,
            None => self.origin,
        }
    }

    pub fn appearances(&self) -> Vec<Appearance> {
        self.attach_order
            .iter()
            .map(|e| Appearance {
                edge: EdgeKey::new(e.parent, e.child).expect("tree edge"),
                label: e.label,
            })
            .collect()
    }

    /// The tree path between the root and `u`, oriented in travel direction.
    pub fn path(&self, u: Vertex) -> TemporalPath {
        let mut vertices = vec![u];
        let mut labels = Vec::new();
        let mut cur = u;
        while let Some((p, t)) = self.parent[cur] {
            vertices.push(p);
            labels.push(t);
            cur = p;
        }
        if self.orientation == Orientation::Increasing {
            vertices.reverse();
            labels.reverse();
        }
        TemporalPath { vertices, labels }
    }
}

/// Heap entry keyed by the canonical event order.
#[derive(Clone, Copy, Debug)]
struct Offer {
    label: f64,
    edge: u32,
    idx: u32,
    from: u32,
    to: u32,
}

impl Offer {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.label
            .total_cmp(&other.label)
            .then(self.edge.cmp(&other.edge))
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialEq for Offer {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}
impl Eq for Offer {}
impl PartialOrd for Offer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Offer {
    // Reversed: BinaryHeap is a max-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

/// Greedy growth shared by the simple and multi-label variants. Returns the
/// accepted offers in insertion order, or the 1-based step that found no
/// eligible cut edge.
fn grow(g: &TemporalGraph, root: Vertex) -> std::result::Result<Vec<Offer>, usize> {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<Offer>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    let mut out = Vec::with_capacity(n.saturating_sub(1));

    let offer_from = |a: Vertex, t: f64, in_tree: &[bool], best: &mut [Option<Offer>], heap: &mut BinaryHeap<Offer>| {
        for (u, e) in g.neighbors(a) {
            if in_tree[u] {
                continue;
            }
            let ls = g.labels_of(e);
            let i = ls.partition_point(|&l| l < t);
            if i == ls.len() {
                continue;
            }
            let offer = Offer {
                label: ls[i],
                edge: e as u32,
                idx: i as u32,
                from: a as u32,
                to: u as u32,
            };
            if best[u].is_none_or(|b| offer.key_cmp(&b) == Ordering::Less) {
                best[u] = Some(offer);
                heap.push(offer);
            }
        }
    };

    in_tree[root] = true;
    offer_from(root, g.window().start, &in_tree, &mut best, &mut heap);
    for step in 1..n {
        let chosen = loop {
            match heap.pop() {
                None => return Err(step),
                Some(o) if in_tree[o.to as usize] => continue,
                Some(o) => break o,
            }
        };
        let v = chosen.to as usize;
        in_tree[v] = true;
        out.push(chosen);
        offer_from(v, chosen.label, &in_tree, &mut best, &mut heap);
    }
    Ok(out)
}

fn assemble(
    g: &TemporalGraph,
    root: Vertex,
    orientation: Orientation,
    origin: f64,
    grown: Vec<Offer>,
    label_of: impl Fn(&Offer) -> f64,
) -> ForemostTree {
    let mut parent = vec![None; g.n()];
    let mut attach_order = Vec::with_capacity(grown.len());
    let mut trajectory = Vec::with_capacity(grown.len());
    for o in grown {
        let label = label_of(&o);
        parent[o.to as usize] = Some((o.from as usize, label));
        attach_order.push(TreeEdge {
            parent: o.from as usize,
            child: o.to as usize,
            label,
        });
        trajectory.push(o.label);
    }
    ForemostTree {
        root,
        orientation,
        origin,
        parent,
        attach_order,
        trajectory,
    }
}

fn check_root(g: &TemporalGraph, v: Vertex) -> Result<()> {
    if v >= g.n() {
        return Err(Error::contract(format!("root {v} out of range for n = {}", g.n())));
    }
    Ok(())
}

fn precheck(g: &TemporalGraph, v: Vertex, check: SourceCheck, role: &'static str) -> Result<()> {
    if check == SourceCheck::Checked {
        let reached = crate::graph::earliest_arrival_sweep(g, v).reachable_count();
        if reached < g.n() {
            return Err(Error::NotReachable {
                vertex: v,
                role,
                step: reached,
            });
        }
    }
    Ok(())
}

/// Foremost tree of a simple temporal graph rooted at source `v`.
pub fn foremost_tree(g: &TemporalGraph, v: Vertex) -> Result<ForemostTree> {
    foremost_tree_with(g, v, SourceCheck::Checked)
}

pub fn foremost_tree_with(g: &TemporalGraph, v: Vertex, check: SourceCheck) -> Result<ForemostTree> {
    if !g.is_simple() {
        return Err(Error::contract(
            "foremost_tree needs a simple graph; use foremost_tree_multilabel",
        ));
    }
    foremost_tree_multilabel_with(g, v, check)
}

/// Foremost tree where each cut edge offers its earliest label that keeps the
/// tree increasing.
pub fn foremost_tree_multilabel(g: &TemporalGraph, v: Vertex) -> Result<ForemostTree> {
    foremost_tree_multilabel_with(g, v, SourceCheck::Checked)
}

pub fn foremost_tree_multilabel_with(
    g: &TemporalGraph,
    v: Vertex,
    check: SourceCheck,
) -> Result<ForemostTree> {
    check_root(g, v)?;
    precheck(g, v, check, "source")?;
    let grown = grow(g, v).map_err(|step| Error::NotReachable {
        vertex: v,
        role: "source",
        step,
    })?;
    Ok(assemble(
        g,
        v,
        Orientation::Increasing,
        g.window().start,
        grown,
        |o| o.label,
    ))
}

/// Decreasing tree along which every vertex reaches sink `v`, obtained by
/// growing a foremost tree backwards in time.
pub fn reverse_foremost_tree(g: &TemporalGraph, v: Vertex) -> Result<ForemostTree> {
    reverse_foremost_tree_with(g, v, SourceCheck::Checked)
}

pub fn reverse_foremost_tree_with(
    g: &TemporalGraph,
    v: Vertex,
    check: SourceCheck,
) -> Result<ForemostTree> {
    check_root(g, v)?;
    let rev = reverse_time(g);
    precheck(&rev, v, check, "sink")?;
    let grown = grow(&rev, v).map_err(|step| Error::NotReachable {
        vertex: v,
        role: "sink",
        step,
    })?;
    // Reversal keeps edge indices and reverses each label list, so labels are
    // recovered exactly from the original graph instead of by arithmetic.
    Ok(assemble(
        g,
        v,
        Orientation::Decreasing,
        g.window().end,
        grown,
        |o| {
            let ls = g.labels_of(o.edge as usize);
            ls[ls.len() - 1 - o.idx as usize]
        },
    ))
}

/// Foremost tree on a complete graph in `O(n^2)` time, without materializing
/// adjacency. Agrees edge for edge with [`foremost_tree`] on
/// [`CompleteLabels::to_graph`].
pub fn foremost_tree_complete(labels: &CompleteLabels, v: Vertex) -> Result<ForemostTree> {
    let n = labels.n();
    if v >= n {
        return Err(Error::contract(format!("root {v} out of range for n = {n}")));
    }
    let mut best_label = vec![f64::INFINITY; n];
    let mut best_edge = vec![usize::MAX; n];
    let mut best_from = vec![usize::MAX; n];
    let mut outside: Vec<Vertex> = (0..n).filter(|&u| u != v).collect();
    let mut parent = vec![None; n];
    let mut attach_order = Vec::with_capacity(n.saturating_sub(1));
    let mut trajectory = Vec::with_capacity(n.saturating_sub(1));

    let mut a = v;
    let mut t = 0.0;
    while !outside.is_empty() {
        for &u in &outside {
            let idx = labels.index(a, u);
            let l = labels.label(a, u);
            if l >= t && (l < best_label[u] || (l == best_label[u] && idx < best_edge[u])) {
                best_label[u] = l;
                best_edge[u] = idx;
                best_from[u] = a;
            }
        }
        let mut pick = 0;
        for (i, &u) in outside.iter().enumerate().skip(1) {
            let w = outside[pick];
            if best_label[u] < best_label[w]
                || (best_label[u] == best_label[w] && best_edge[u] < best_edge[w])
            {
                pick = i;
            }
        }
        let u = outside.swap_remove(pick);
        t = best_label[u];
        parent[u] = Some((best_from[u], t));
        attach_order.push(TreeEdge {
            parent: best_from[u],
            child: u,
            label: t,
        });
        trajectory.push(t);
        a = u;
    }
    Ok(ForemostTree {
        root: v,
        orientation: Orientation::Increasing,
        origin: 0.0,
        parent,
        attach_order,
        trajectory,
    })
}

/// `c_k = (2 ln min(k, n-k) + ln ln n) / (k (n-k))` for `k = 1..n-1`.
pub fn truncation_caps(n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::domain(format!(
            "truncation caps need n >= 3 (ln ln n > 0), got {n}"
        )));
    }
    let nf = n as f64;
    let lnln = nf.ln().ln();
    Ok((1..n)
        .map(|k| {
            let m = k.min(n - k) as f64;
            (2.0 * m.ln() + lnln) / (k as f64 * (n - k) as f64)
        })
        .collect())
}

/// `Σ_{i=1}^{k} 1 / (i (n-i) + 1)`.
pub fn reference_curve(n: usize, k: usize) -> f64 {
    assert!(k < n.max(1), "k = {k} out of range for n = {n}");
    (1..=k)
        .map(|i| 1.0 / ((i * (n - i)) as f64 + 1.0))
        .sum()
}

/// The whole reference curve for `k = 0..n-1`.
pub fn reference_prefix(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..n {
        acc += 1.0 / ((i * (n - i)) as f64 + 1.0);
        out.push(acc);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub caps: Vec<f64>,
    /// `X̂_k = min(X_k, c_k)`, indexed from `k = 1`.
    pub x_hat: Vec<f64>,
    /// `Ŷ_0 = 0, Ŷ_1, …, Ŷ_{n-1}`.
    pub y_hat: Vec<f64>,
    /// No waiting time exceeded its cap, so `Ŷ = Y` throughout.
    pub exact: bool,
}

/// Growth trajectory `Y_0 = 0 ≤ Y_1 ≤ … ≤ Y_{n-1}` and waiting times `X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub y: Vec<f64>,
    /// `X_k = Y_k - Y_{k-1}`, stored at index `k - 1`.
    pub x: Vec<f64>,
    pub truncation: Option<Truncation>,
}

impl Trajectory {
    pub fn from_labels(labels: &[f64]) -> Self {
        let mut y = Vec::with_capacity(labels.len() + 1);
        y.push(0.0);
        y.extend_from_slice(labels);
        let x = y.windows(2).map(|w| w[1] - w[0]).collect();
        Trajectory {
            n: labels.len() + 1,
            y,
            x,
            truncation: None,
        }
    }

    pub fn from_tree(tree: &ForemostTree) -> Self {
        Self::from_labels(&tree.trajectory)
    }

    pub fn y_hat(&self) -> Option<&[f64]> {
        self.truncation.as_ref().map(|t| t.y_hat.as_slice())
    }
}

/// Caps every waiting time at `c_k` and accumulates the truncated trajectory.
pub fn truncate_trajectory(t: &Trajectory, caps: &[f64]) -> Result<Trajectory> {
    if caps.len() != t.x.len() {
        return Err(Error::contract(format!(
            "{} caps for {} waiting times",
            caps.len(),
            t.x.len()
        )));
    }
    let x_hat: Vec<f64> = t.x.iter().zip(caps).map(|(&x, &c)| x.min(c)).collect();
    // Ŷ_k = Y_k - Σ (X_i - X̂_i); subtracting a non-negative excess keeps
    // Ŷ_k ≤ Y_k exact in floating point.
    let mut y_hat = Vec::with_capacity(t.y.len());
    y_hat.push(0.0);
    let mut excess = 0.0;
    let mut exact = true;
    for (k, (&x, &xh)) in t.x.iter().zip(&x_hat).enumerate() {
        if x > xh {
            exact = false;
            excess += x - xh;
        }
        y_hat.push(if excess > 0.0 { t.y[k + 1] - excess } else { t.y[k + 1] });
    }
    Ok(Trajectory {
        truncation: Some(Truncation {
            caps: caps.to_vec(),
            x_hat,
            y_hat,
            exact,
        }),
        ..t.clone()
    })
}

/// `max_k |Ŷ_k - reference_curve(n, k)|` over `k = 1..n-1`.
pub fn trajectory_deviation(t: &Trajectory) -> Result<f64> {
    let y_hat = t
        .y_hat()
        .ok_or_else(|| Error::contract("trajectory has not been truncated"))?;
    let reference = reference_prefix(t.n);
    Ok(y_hat
        .iter()
        .zip(&reference)
        .skip(1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
