//! Temporal spanners with `2n - 4` appearances built around a pivot square.
//!
//! The label range `[0, p]` is cut at `p1 ≤ p2 ≤ p3`. A square `(w, x, y, z)`
//! has `wx` and `yz` labelled in `[p1, p2]` and `xy` and `wz` labelled in
//! `[p2, p3]`; inside it every vertex reaches every other during `[p1, p3]`.
//! The square is good when, with `x, y, z` deleted, `w` is a temporal sink
//! before `p1` and a temporal source after `p3`. The spanner is then the
//! square, a decreasing tree into `w` on `[0, p1]`, and an increasing tree out
//! of `w` on `[p3, p]`: `4 + 2(n - 4)` appearances.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::foremost::{
    foremost_tree_multilabel_with, reverse_foremost_tree_with, ForemostTree, SourceCheck,
    TreeEdge,
};
use crate::graph::{
    backward_sweep, forward_sweep, remove_vertices, restrict, verify_spanner, Appearance,
    SweepScope, TemporalGraph, Vertex, Window,
};

/// Goodness tests attempted before giving up.
pub const DEFAULT_CANDIDATE_CAP: usize = 200;

/// Smallest vertex count the construction is run on.
pub const MIN_SPANNER_N: usize = 8;

/// Fewest appearances any temporal spanner on `n ≥ 4` vertices can have.
pub fn spanner_size_lower_bound(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(Error::domain(format!("lower bound 2n - 4 is stated for n >= 4, got {n}")));
    }
    Ok(2 * n - 4)
}

/// Cut points `0 ≤ p1 ≤ p2 ≤ p3 ≤ p` with the two square windows of width `eps0`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct WindowPartition {
    pub p: f64,
    pub eps0: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl WindowPartition {
    /// Symmetric partition: `[0, p1]` and `[p3, p]` have equal length and the
    /// square windows have width `eps0`.
    pub fn symmetric(p: f64, eps0: f64) -> Result<Self> {
        if !(eps0 > 0.0 && 2.0 * eps0 < p) {
            return Err(Error::domain(format!("window width {eps0} does not fit in [0, {p}]")));
        }
        let outer = (p - 2.0 * eps0) / 2.0;
        Ok(WindowPartition {
            p,
            eps0,
            p1: outer,
            p2: outer + eps0,
            p3: outer + 2.0 * eps0,
        })
    }

    /// Partition used for F(n,p) at density `p`:
    /// `eps0 = min(4 (ln n)^0.8 / n, (p - 2 ln n / n) / 6)`, which makes both
    /// outer windows at least `2 ln n / n` long.
    pub fn for_density(n: usize, p: f64) -> Result<Self> {
        let nf = n as f64;
        let ln = nf.ln();
        let floor = 2.0 * ln / nf;
        if p.partial_cmp(&floor) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::domain(format!(
                "p = {p} leaves no room for the window partition (need p > 2 ln n / n = {floor})"
            )));
        }
        let eps0 = (4.0 * ln.powf(0.8) / nf).min((p - floor) / 6.0);
        Self::symmetric(p, eps0)
    }

    pub fn explicit(p1: f64, p2: f64, p3: f64, p: f64) -> Result<Self> {
        if !(0.0 <= p1 && p1 <= p2 && p2 <= p3 && p3 <= p) {
            return Err(Error::contract(format!(
                "need 0 <= p1 <= p2 <= p3 <= p, got {p1}, {p2}, {p3}, {p}"
            )));
        }
        Ok(WindowPartition {
            p,
            eps0: p2 - p1,
            p1,
            p2,
            p3,
        })
    }
}

/// Ordered 4-cycle `(w, x, y, z)` with the label used on each side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Square {
    pub w: Vertex,
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub wx: f64,
    pub xy: f64,
    pub yz: f64,
    pub wz: f64,
}

impl Square {
    pub fn vertices(&self) -> [Vertex; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Partition cut at the square's own labels: `p1 = λ(wx)`,
    /// `p2 = max(λ(wx), λ(yz))`, `p3 = λ(wz)`.
    ///
    /// The square stays internally connected for these cuts, and since they
    /// only widen `[0, p1]` and `[p3, p]`, a square that is good for the
    /// windows it was found in is good for its tight cuts as well.
    pub fn tight_partition(&self, p: f64) -> WindowPartition {
        WindowPartition {
            p,
            eps0: self.wz - self.wx,
            p1: self.wx,
            p2: self.wx.max(self.yz),
            p3: self.wz,
        }
    }

    pub fn appearances(&self) -> [Appearance; 4] {
        let app = |a, b, t| Appearance::new(a, b, t).expect("square vertices are distinct");
        [
            app(self.w, self.x, self.wx),
            app(self.x, self.y, self.xy),
            app(self.y, self.z, self.yz),
            app(self.w, self.z, self.wz),
        ]
    }
}

/// Per-vertex neighbor lists restricted to one label window, ascending by
/// neighbor, carrying the earliest label inside the window.
struct WindowIndex {
    adj: Vec<Vec<(Vertex, f64)>>,
}

impl WindowIndex {
    fn new(g: &TemporalGraph, lo: f64, hi: f64) -> Self {
        let mut adj = vec![Vec::new(); g.n()];
        for (e, ls) in g.edges() {
            let i = ls.partition_point(|&t| t < lo);
            if i < ls.len() && ls[i] <= hi {
                adj[e.lo()].push((e.hi(), ls[i]));
                adj[e.hi()].push((e.lo(), ls[i]));
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        WindowIndex { adj }
    }

    fn label(&self, a: Vertex, b: Vertex) -> Option<f64> {
        let list = &self.adj[a];
        list.binary_search_by_key(&b, |&(v, _)| v).ok().map(|i| list[i].1)
    }
}

/// Visits every square in ascending `(w, x, y, z)` order.
pub fn for_each_square<B>(
    g: &TemporalGraph,
    part: &WindowPartition,
    mut visit: impl FnMut(Square) -> ControlFlow<B>,
) -> Option<B> {
    let early = WindowIndex::new(g, part.p1, part.p2);
    let late = WindowIndex::new(g, part.p2, part.p3);
    for w in 0..g.n() {
        for &(x, wx) in &early.adj[w] {
            for &(y, xy) in &late.adj[x] {
                if y == w {
                    continue;
                }
                for &(z, yz) in &early.adj[y] {
                    if z == w || z == x {
                        continue;
                    }
                    if let Some(wz) = late.label(w, z) {
                        let sq = Square { w, x, y, z, wx, xy, yz, wz };
                        if let ControlFlow::Break(b) = visit(sq) {
                            return Some(b);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Number of ordered 4-tuples that form squares for the windows
/// `[p1, p2]` and `[p2, p3]`.
pub fn square_count(g: &TemporalGraph, p1: f64, p2: f64, p3: f64) -> Result<u64> {
    let part = WindowPartition::explicit(p1, p2, p3, g.window().end.max(p3))?;
    if p3 > g.window().end {
        return Err(Error::contract(format!(
            "p3 = {p3} beyond window end {}",
            g.window().end
        )));
    }
    let mut count = 0u64;
    for_each_square::<()>(g, &part, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

/// Whether `sq` is good: in `g` minus `{x, y, z}`, `w` is a sink on `[0, p1]`
/// and a source on `[p3, p]`.
pub fn is_good_square(g: &TemporalGraph, part: &WindowPartition, sq: &Square) -> bool {
    let mut hidden = vec![false; g.n()];
    for v in [sq.x, sq.y, sq.z] {
        hidden[v] = true;
    }
    let start = g.window().start;
    let before = SweepScope {
        window: Window {
            start,
            end: part.p1,
        },
        excluded: Some(&hidden),
    };
    if !backward_sweep(g, sq.w, before).all_reach_visible(&hidden) {
        return false;
    }
    let after = SweepScope {
        window: Window {
            start: part.p3,
            end: part.p,
        },
        excluded: Some(&hidden),
    };
    forward_sweep(g, sq.w, after).all_reachable_visible(&hidden)
}

/// Where the outer windows end for a candidate square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CutRule {
    /// The search partition's own `p1` and `p3`.
    Fixed,
    /// The square's labels, see [`Square::tight_partition`].
    #[default]
    Tight,
}

/// Outcome of a square search.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareSearch {
    pub square: Option<Square>,
    /// Partition the square is good for (the search partition when none was found).
    pub partition: WindowPartition,
    /// Squares whose goodness was tested.
    pub candidates: usize,
    pub cap_hit: bool,
}

fn check_spanner_input(g: &TemporalGraph, p: f64) -> Result<()> {
    if g.n() < MIN_SPANNER_N {
        return Err(Error::contract(format!(
            "square construction needs n >= {MIN_SPANNER_N}, got {}",
            g.n()
        )));
    }
    if !(g.window().start <= 0.0 && p <= g.window().end) {
        return Err(Error::contract(format!(
            "graph window [{}, {}] does not contain [0, {p}]",
            g.window().start,
            g.window().end
        )));
    }
    Ok(())
}

/// First good square in enumeration order, using the default partition for
/// `(n, p)` and the default candidate cap.
pub fn find_good_square(g: &TemporalGraph, p: f64) -> Result<Option<(Square, WindowPartition)>> {
    check_spanner_input(g, p)?;
    let part = WindowPartition::for_density(g.n(), p)?;
    let search = search_good_square(g, &part, DEFAULT_CANDIDATE_CAP, CutRule::Tight);
    Ok(search.square.map(|s| (s, search.partition)))
}

/// Tests squares found in `part`'s windows, in enumeration order, until one
/// is good or `cap` squares have been tried.
pub fn search_good_square(
    g: &TemporalGraph,
    part: &WindowPartition,
    cap: usize,
    rule: CutRule,
) -> SquareSearch {
    let mut candidates = 0;
    let mut cap_hit = false;
    let found = for_each_square(g, part, |sq| {
        if candidates == cap {
            cap_hit = true;
            return ControlFlow::Break(None);
        }
        candidates += 1;
        let cuts = match rule {
            CutRule::Fixed => *part,
            CutRule::Tight => sq.tight_partition(part.p),
        };
        if is_good_square(g, &cuts, &sq) {
            ControlFlow::Break(Some((sq, cuts)))
        } else {
            ControlFlow::Continue(())
        }
    })
    .flatten();
    SquareSearch {
        square: found.map(|(sq, _)| sq),
        partition: found.map_or(*part, |(_, cuts)| cuts),
        candidates,
        cap_hit,
    }
}

/// A spanner together with the pieces that justify it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpannerCertificate {
    pub appearances: Vec<Appearance>,
    pub pivot: Square,
    pub partition: WindowPartition,
    /// Decreasing tree into `w` on `[0, p1]`, in original vertex ids.
    pub tree_down: Vec<TreeEdge>,
    /// Increasing tree out of `w` on `[p3, p]`, in original vertex ids.
    pub tree_up: Vec<TreeEdge>,
    pub candidates: usize,
    /// Result of checking `appearances` against the input graph.
    pub verified: bool,
}

impl SpannerCertificate {
    pub fn size(&self) -> usize {
        self.appearances.len()
    }
}

pub fn build_optimal_spanner(g: &TemporalGraph, p: f64) -> Result<SpannerCertificate> {
    check_spanner_input(g, p)?;
    let part = WindowPartition::for_density(g.n(), p)?;
    build_optimal_spanner_with(g, &part, DEFAULT_CANDIDATE_CAP, CutRule::Tight)
}

pub fn build_optimal_spanner_with(
    g: &TemporalGraph,
    part: &WindowPartition,
    cap: usize,
    rule: CutRule,
) -> Result<SpannerCertificate> {
    check_spanner_input(g, part.p)?;
    let search = search_good_square(g, part, cap, rule);
    let part = &search.partition;
    let sq = search.square.ok_or(Error::NoGoodSquare {
        candidates: search.candidates,
        cap_hit: search.cap_hit,
    })?;
    let (rest, old_id) = remove_vertices(g, &[sq.x, sq.y, sq.z]);
    let w = old_id.binary_search(&sq.w).expect("w survives");
    let start = g.window().start;
    let down = reverse_foremost_tree_with(&restrict(&rest, start, part.p1)?, w, SourceCheck::Trusted)?;
    let up = foremost_tree_multilabel_with(&restrict(&rest, part.p3, part.p)?, w, SourceCheck::Trusted)?;
    let map_back = |t: &ForemostTree| -> Vec<TreeEdge> {
        t.attach_order
            .iter()
            .map(|e| TreeEdge {
                parent: old_id[e.parent],
                child: old_id[e.child],
                label: e.label,
            })
            .collect()
    };
    let tree_down = map_back(&down);
    let tree_up = map_back(&up);
    let mut appearances: Vec<Appearance> = sq.appearances().to_vec();
    for e in tree_down.iter().chain(&tree_up) {
        appearances.push(Appearance::new(e.parent, e.child, e.label)?);
    }
    let verified = verify_spanner(g, &appearances)?;
    Ok(SpannerCertificate {
        appearances,
        pivot: sq,
        partition: *part,
        tree_down,
        tree_up,
        candidates: search.candidates,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_temporally_connected, Window};

    /// n = 8 with a planted square (0, 1, 2, 3) and stars on vertex 0 before
    /// and after it.
    pub(crate) fn planted() -> (TemporalGraph, WindowPartition) {
        let part = WindowPartition::explicit(0.3, 0.4, 0.5, 1.0).unwrap();
        let e = part.eps0;
        let mut apps = vec![
            (0, 1, part.p1 + e / 4.0),
            (2, 3, part.p1 + e / 3.0),
            (1, 2, part.p2 + e / 4.0),
            (0, 3, part.p2 + e / 3.0),
        ];
        for (i, v) in (4..8).enumerate() {
            apps.push((0, v, 0.05 + 0.05 * i as f64));
            apps.push((0, v, 0.6 + 0.05 * i as f64));
        }
        (TemporalGraph::new(8, Window::UNIT, apps).unwrap(), part)
    }

    fn brute_force_squares(g: &TemporalGraph, part: &WindowPartition) -> u64 {
        let in_win = |a, b, lo: f64, hi: f64| g.labels_between(a, b).iter().any(|&t| lo <= t && t <= hi);
        let n = g.n();
        let mut count = 0;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let vs = [w, x, y, z];
                        if (0..4).any(|i| (i + 1..4).any(|j| vs[i] == vs[j])) {
                            continue;
                        }
                        if in_win(w, x, part.p1, part.p2)
                            && in_win(y, z, part.p1, part.p2)
                            && in_win(x, y, part.p2, part.p3)
                            && in_win(w, z, part.p2, part.p3)
                        {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn lower_bound() {
        assert_eq!(spanner_size_lower_bound(4).unwrap(), 4);
        assert_eq!(spanner_size_lower_bound(10).unwrap(), 16);
        assert_eq!(spanner_size_lower_bound(1000).unwrap(), 1996);
        assert!(matches!(spanner_size_lower_bound(3), Err(Error::Domain(_))));
    }

    #[test]
    fn partition_rules() {
        let n = 500;
        let ln = (n as f64).ln();
        let p = 5.0 * ln / n as f64;
        let part = WindowPartition::for_density(n, p).unwrap();
        assert!(part.p1 > 0.0 && part.p1 < part.p2 && part.p2 < part.p3 && part.p3 < part.p);
        assert!((part.p1 - (part.p - part.p3)).abs() < 1e-12);
        assert!(part.p1 >= 2.0 * ln / n as f64 - 1e-12);
        assert!(WindowPartition::for_density(n, 2.0 * ln / n as f64).is_err());
    }

    #[test]
    fn planted_square_found_and_counted() {
        let (g, part) = planted();
        for rule in [CutRule::Fixed, CutRule::Tight] {
            let search = search_good_square(&g, &part, DEFAULT_CANDIDATE_CAP, rule);
            assert_eq!(search.square.unwrap().vertices(), [0, 1, 2, 3]);
        }
        let tight = search_good_square(&g, &part, DEFAULT_CANDIDATE_CAP, CutRule::Tight).partition;
        assert_eq!((tight.p1, tight.p3), (part.p1 + part.eps0 / 4.0, part.p2 + part.eps0 / 3.0));
        // (w,x,y,z), (x,w,z,y), (y,z,w,x), (z,y,x,w)
        assert_eq!(square_count(&g, part.p1, part.p2, part.p3).unwrap(), 4);
        assert_eq!(brute_force_squares(&g, &part), 4);
    }

    #[test]
    fn planted_spanner_is_optimal_and_minimal() {
        let (g, part) = planted();
        let fixed = build_optimal_spanner_with(&g, &part, DEFAULT_CANDIDATE_CAP, CutRule::Fixed).unwrap();
        assert_eq!(fixed.size(), 12);
        assert!(fixed.verified);
        let cert = build_optimal_spanner_with(&g, &part, DEFAULT_CANDIDATE_CAP, CutRule::Tight).unwrap();
        assert_eq!(cert.size(), 12);
        assert!(cert.verified);
        assert!(cert.appearances.iter().all(|a| a.label <= part.p));
        for skip in 0..cert.appearances.len() {
            let mut fewer = cert.appearances.clone();
            fewer.remove(skip);
            assert!(!verify_spanner(&g, &fewer).unwrap(), "dropping {skip} kept connectivity");
        }
        assert!(is_temporally_connected(&g));
    }

    #[test]
    fn edgeless_has_no_square() {
        let g = TemporalGraph::empty(10, Window::new(0.0, 0.5).unwrap());
        assert_eq!(find_good_square(&g, 0.5).unwrap(), None);
        assert!(matches!(
            build_optimal_spanner(&g, 0.5),
            Err(Error::NoGoodSquare { candidates: 0, cap_hit: false })
        ));
        assert_eq!(square_count(&g, 0.1, 0.2, 0.3).unwrap(), 0);
    }

    #[test]
    fn rejects_tiny_graphs_and_low_density() {
        let g = TemporalGraph::empty(5, Window::UNIT);
        assert!(matches!(build_optimal_spanner(&g, 0.9), Err(Error::Contract(_))));
        let g = TemporalGraph::empty(100, Window::UNIT);
        assert!(matches!(find_good_square(&g, 0.05), Err(Error::Domain(_))));
    }

    #[test]
    fn cap_reports_diagnostic() {
        let (g, part) = planted();
        let search = search_good_square(&g, &part, 0, CutRule::Tight);
        assert!(search.cap_hit);
        assert_eq!(search.square, None);
    }
}
