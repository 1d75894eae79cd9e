//! Temporal graphs, interval restriction, time reversal and reachability.
//!
//! A [`TemporalGraph`] is an undirected graph on vertices `0..n` whose edges
//! carry one or more time labels inside a closed window `[a, b]`. A temporal
//! path uses labels that never decrease along the path, and its arrival time
//! is its last label.
//!
//! Every sweep in this module walks the graph's label events in one fixed
//! total order: `(label, edge, label index)`, where edges are ordered by their
//! `(min, max)` endpoint pair. Events that share a label are closed under
//! repeated relaxation, so chains of equal labels are handled as the
//! non-decreasing path definition requires.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::bitset::{self, BitSet};
use crate::error::{Error, Result};

pub type Vertex = usize;

/// Closed time interval `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(Error::contract(format!(
                "invalid window [{start}, {end}]"
            )));
        }
        Ok(Window { start, end })
    }

    pub const UNIT: Window = Window {
        start: 0.0,
        end: 1.0,
    };

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn covers(&self, other: &Window) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Unordered vertex pair, stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    lo: u32,
    hi: u32,
}

impl EdgeKey {
    /// Returns `None` for self-loops.
    pub fn new(a: Vertex, b: Vertex) -> Option<Self> {
        match a.cmp(&b) {
            Ordering::Less => Some(EdgeKey {
                lo: a as u32,
                hi: b as u32,
            }),
            Ordering::Greater => Some(EdgeKey {
                lo: b as u32,
                hi: a as u32,
            }),
            Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo as Vertex
    }

    pub fn hi(&self) -> Vertex {
        self.hi as Vertex
    }

    pub fn other(&self, end: Vertex) -> Vertex {
        if end == self.lo() {
            self.hi()
        } else {
            self.lo()
        }
    }
}

/// A single `(edge, label)` occurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Appearance {
    pub edge: EdgeKey,
    pub label: f64,
}

impl Appearance {
    pub fn new(a: Vertex, b: Vertex, label: f64) -> Result<Self> {
        let edge = EdgeKey::new(a, b)
            .ok_or_else(|| Error::contract(format!("self-loop on vertex {a}")))?;
        Ok(Appearance { edge, label })
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.edge
            .cmp(&other.edge)
            .then(self.label.total_cmp(&other.label))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Event {
    pub label: f64,
    pub edge: u32,
    pub idx: u32,
}

impl Event {
    #[inline]
    pub(crate) fn order(&self, other: &Self) -> Ordering {
        self.label
            .total_cmp(&other.label)
            .then(self.edge.cmp(&other.edge))
            .then(self.idx.cmp(&other.idx))
    }
}

/// Immutable temporal graph on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    n: usize,
    window: Window,
    edges: Vec<EdgeKey>,
    label_start: Vec<u32>,
    labels: Vec<f64>,
    adj_start: Vec<usize>,
    adj: Vec<(u32, u32)>,
    events: OnceLock<Vec<Event>>,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.window == other.window
            && self.edges == other.edges
            && self.label_start == other.label_start
            && self.labels == other.labels
    }
}

impl TemporalGraph {
    /// Builds a graph from `(u, v, label)` triples. Repeated pairs merge into
    /// one multi-labelled edge.
    pub fn new(
        n: usize,
        window: Window,
        appearances: impl IntoIterator<Item = (Vertex, Vertex, f64)>,
    ) -> Result<Self> {
        let mut apps = Vec::new();
        for (u, v, t) in appearances {
            if u >= n || v >= n {
                return Err(Error::contract(format!(
                    "edge {u}-{v} out of range for n = {n}"
                )));
            }
            if !t.is_finite() || !window.contains(t) {
                return Err(Error::contract(format!(
                    "label {t} on edge {u}-{v} outside window [{}, {}]",
                    window.start, window.end
                )));
            }
            apps.push(Appearance::new(u, v, t)?);
        }
        Self::from_appearances(n, window, apps)
    }

    /// Empty graph on `n` vertices.
    pub fn empty(n: usize, window: Window) -> Self {
        Self::from_sorted_parts(n, window, Vec::new(), vec![0], Vec::new())
    }

    fn from_appearances(n: usize, window: Window, mut apps: Vec<Appearance>) -> Result<Self> {
        apps.sort_unstable_by(Appearance::total_cmp);
        let mut edges = Vec::new();
        let mut label_start = vec![0u32];
        let mut labels = Vec::with_capacity(apps.len());
        for (i, app) in apps.iter().enumerate() {
            if i > 0 && apps[i - 1].edge == app.edge {
                if apps[i - 1].label == app.label {
                    return Err(Error::contract(format!(
                        "duplicate label {} on edge {}-{}",
                        app.label,
                        app.edge.lo(),
                        app.edge.hi()
                    )));
                }
            } else {
                if !edges.is_empty() {
                    label_start.push(labels.len() as u32);
                }
                edges.push(app.edge);
            }
            labels.push(app.label);
        }
        if !edges.is_empty() {
            label_start.push(labels.len() as u32);
        }
        Ok(Self::from_sorted_parts(n, window, edges, label_start, labels))
    }

    /// Assembles a graph from already-validated parts. `edges` must be
    /// strictly ascending and each label run strictly ascending.
    pub(crate) fn from_sorted_parts(
        n: usize,
        window: Window,
        edges: Vec<EdgeKey>,
        label_start: Vec<u32>,
        labels: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(label_start.len(), edges.len() + 1);
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.lo()] += 1;
            degree[e.hi()] += 1;
        }
        let mut adj_start = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for d in degree.iter().take(n) {
            adj_start.push(acc);
            acc += d;
        }
        adj_start.push(acc);
        let mut fill = adj_start.clone();
        let mut adj = vec![(0u32, 0u32); acc];
        for (i, e) in edges.iter().enumerate() {
            adj[fill[e.lo()]] = (e.hi, i as u32);
            fill[e.lo()] += 1;
            adj[fill[e.hi()]] = (e.lo, i as u32);
            fill[e.hi()] += 1;
        }
        TemporalGraph {
            n,
            window,
            edges,
            label_start,
            labels,
            adj_start,
            adj,
            events: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Number of edges of the underlying graph.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of `(edge, label)` appearances.
    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    /// True iff every edge carries exactly one label.
    pub fn is_simple(&self) -> bool {
        self.labels.len() == self.edges.len()
    }

    pub fn edge(&self, idx: usize) -> EdgeKey {
        self.edges[idx]
    }

    pub fn labels_of(&self, idx: usize) -> &[f64] {
        &self.labels[self.label_start[idx] as usize..self.label_start[idx + 1] as usize]
    }

    /// Edges in lexicographic order with their label lists.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, &[f64])> + '_ {
        (0..self.edges.len()).map(move |i| (self.edges[i], self.labels_of(i)))
    }

    pub fn appearances(&self) -> impl Iterator<Item = Appearance> + '_ {
        self.edges()
            .flat_map(|(edge, ls)| ls.iter().map(move |&label| Appearance { edge, label }))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj_start[v + 1] - self.adj_start[v]
    }

    /// `(neighbor, edge index)` pairs of `v`, ascending by neighbor.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        self.adj[self.adj_start[v]..self.adj_start[v + 1]]
            .iter()
            .map(|&(u, e)| (u as Vertex, e as usize))
    }

    pub fn find_edge(&self, a: Vertex, b: Vertex) -> Option<usize> {
        if a >= self.n || b >= self.n {
            return None;
        }
        let list = &self.adj[self.adj_start[a]..self.adj_start[a + 1]];
        list.binary_search_by_key(&(b as u32), |&(u, _)| u)
            .ok()
            .map(|i| list[i].1 as usize)
    }

    pub fn labels_between(&self, a: Vertex, b: Vertex) -> &[f64] {
        match self.find_edge(a, b) {
            Some(e) => self.labels_of(e),
            None => &[],
        }
    }

    pub fn contains(&self, app: &Appearance) -> bool {
        self.labels_between(app.edge.lo(), app.edge.hi())
            .contains(&app.label)
    }

    /// All label events in the canonical sweep order.
    pub(crate) fn events(&self) -> &[Event] {
        self.events.get_or_init(|| {
            let mut ev = Vec::with_capacity(self.labels.len());
            for e in 0..self.edges.len() {
                for (i, &label) in self.labels_of(e).iter().enumerate() {
                    ev.push(Event {
                        label,
                        edge: e as u32,
                        idx: i as u32,
                    });
                }
            }
            ev.sort_unstable_by(Event::order);
            ev
        })
    }

    /// Serializes to the plain text format: `n <count>` followed by one
    /// `u v t` line per appearance.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * self.labels.len() + 16);
        writeln!(out, "n {}", self.n).unwrap();
        for app in self.appearances() {
            writeln!(out, "{} {} {}", app.edge.lo(), app.edge.hi(), app.label).unwrap();
        }
        out
    }

    /// Parses the plain text format. Blank lines and lines starting with `#`
    /// are ignored. The window is `[0, max(1, largest label)]`.
    pub fn parse_text(text: &str) -> Result<Self> {
        let (n, apps) = parse_appearance_text(text)?;
        let max = apps.iter().map(|a| a.label).fold(1.0f64, f64::max);
        let window = Window::new(0.0, max)?;
        for a in &apps {
            if a.label < 0.0 {
                return Err(Error::contract(format!("negative label {}", a.label)));
            }
            if a.edge.hi() >= n {
                return Err(Error::contract(format!(
                    "vertex {} out of range for n = {n}",
                    a.edge.hi()
                )));
            }
        }
        Self::from_appearances(n, window, apps)
    }
}

/// Parses the text format into a vertex count and raw appearances.
pub fn parse_appearance_text(text: &str) -> Result<(usize, Vec<Appearance>)> {
    let mut n = None;
    let mut apps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let mut parts = line.split_whitespace();
        if n.is_none() {
            if parts.next() != Some("n") {
                return Err(err("expected header `n <count>`"));
            }
            let count = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| err("bad vertex count"))?;
            if parts.next().is_some() {
                return Err(err("trailing tokens after vertex count"));
            }
            n = Some(count);
            continue;
        }
        let fields: Vec<&str> = parts.collect();
        if fields.len() != 3 {
            return Err(err("expected `u v t`"));
        }
        let u = fields[0].parse::<usize>().map_err(|_| err("bad vertex id"))?;
        let v = fields[1].parse::<usize>().map_err(|_| err("bad vertex id"))?;
        let t = fields[2].parse::<f64>().map_err(|_| err("bad label"))?;
        if !t.is_finite() {
            return Err(err("label must be finite"));
        }
        apps.push(Appearance::new(u, v, t).map_err(|_| err("self-loop"))?);
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing header `n <count>`".into(),
    })?;
    Ok((n, apps))
}

/// A temporal path `u_0, …, u_l` with labels `λ_1 ≤ … ≤ λ_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalPath {
    pub vertices: Vec<Vertex>,
    pub labels: Vec<f64>,
}

impl TemporalPath {
    /// Last label, or `None` for the trivial path.
    pub fn arrival_time(&self) -> Option<f64> {
        self.labels.last().copied()
    }

    /// Checks the path invariants against `g`: distinct vertices, every label
    /// present on its edge, labels non-decreasing.
    pub fn is_valid_in(&self, g: &TemporalGraph) -> bool {
        if self.vertices.len() != self.labels.len() + 1 {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        if !self.vertices.iter().all(|v| seen.insert(*v)) {
            return false;
        }
        let steps_ok = self.vertices.windows(2).zip(&self.labels).all(|(w, &t)| {
            g.labels_between(w[0], w[1]).contains(&t)
        });
        steps_ok && self.labels.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Foremost arrival times from one source.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalMap {
    pub source: Vertex,
    /// `None` marks an unreachable vertex. The source holds the window start.
    pub arrival: Vec<Option<f64>>,
    pred: Vec<Option<(Vertex, f64)>>,
}

impl ArrivalMap {
    pub fn reachable_count(&self) -> usize {
        self.arrival.iter().filter(|a| a.is_some()).count()
    }

    pub fn all_reachable(&self) -> bool {
        self.arrival.iter().all(Option::is_some)
    }

    /// Like [`all_reachable`](Self::all_reachable), ignoring `hidden` vertices.
    pub fn all_reachable_visible(&self, hidden: &[bool]) -> bool {
        self.arrival.iter().zip(hidden).all(|(a, &h)| h || a.is_some())
    }

    /// Reconstructs a witness path realizing `arrival[u]`.
    pub fn path_to(&self, u: Vertex) -> Option<TemporalPath> {
        self.arrival.get(u).copied().flatten()?;
        let mut vertices = vec![u];
        let mut labels = Vec::new();
        let mut cur = u;
        while let Some((prev, t)) = self.pred[cur] {
            vertices.push(prev);
            labels.push(t);
            cur = prev;
        }
        vertices.reverse();
        labels.reverse();
        Some(TemporalPath { vertices, labels })
    }
}

/// Latest departure times toward one sink.
#[derive(Clone, Debug, PartialEq)]
pub struct DepartureMap {
    pub sink: Vertex,
    /// `None` marks a vertex that cannot reach the sink. The sink holds the window end.
    pub departure: Vec<Option<f64>>,
}

impl DepartureMap {
    pub fn all_reach(&self) -> bool {
        self.departure.iter().all(Option::is_some)
    }

    pub fn all_reach_visible(&self, hidden: &[bool]) -> bool {
        self.departure.iter().zip(hidden).all(|(d, &h)| h || d.is_some())
    }
}

/// Restricts a sweep to a label window and optionally hides vertices.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SweepScope<'a> {
    pub window: Window,
    pub excluded: Option<&'a [bool]>,
}

impl<'a> SweepScope<'a> {
    pub(crate) fn whole(g: &TemporalGraph) -> Self {
        SweepScope {
            window: g.window,
            excluded: None,
        }
    }

    #[inline]
    fn hidden(&self, v: Vertex) -> bool {
        self.excluded.is_some_and(|ex| ex[v])
    }

    /// Number of vertices a spanning sweep must reach.
    fn visible(&self, n: usize) -> usize {
        match self.excluded {
            Some(ex) => ex.iter().filter(|&&x| !x).count(),
            None => n,
        }
    }
}

/// Iterates maximal runs of events with bitwise-equal labels, in order.
fn label_groups<'e>(events: &'e [Event]) -> impl DoubleEndedIterator<Item = &'e [Event]> + 'e {
    let mut bounds = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let mut j = i + 1;
        while j < events.len() && events[j].label == events[i].label {
            j += 1;
        }
        bounds.push((i, j));
        i = j;
    }
    bounds.into_iter().map(move |(i, j)| &events[i..j])
}

/// Runs `relax` over every event of `group` until a full pass changes nothing.
#[inline]
fn close_group(group: &[Event], mut relax: impl FnMut(&Event) -> bool) {
    if group.len() == 1 {
        relax(&group[0]);
        return;
    }
    loop {
        let mut changed = false;
        for ev in group {
            changed |= relax(ev);
        }
        if !changed {
            break;
        }
    }
}

pub(crate) fn forward_sweep(g: &TemporalGraph, v: Vertex, scope: SweepScope<'_>) -> ArrivalMap {
    let mut arrival = vec![None; g.n];
    let mut pred = vec![None; g.n];
    arrival[v] = Some(scope.window.start);
    let target = scope.visible(g.n);
    let mut reached = 1;
    let events = g.events();
    let lo = events.partition_point(|e| e.label < scope.window.start);
    let hi = events.partition_point(|e| e.label <= scope.window.end);
    for group in label_groups(&events[lo..hi]) {
        if reached == target {
            break;
        }
        close_group(group, |ev| {
            let e = g.edges[ev.edge as usize];
            let (x, y) = (e.lo(), e.hi());
            if scope.hidden(x) || scope.hidden(y) {
                return false;
            }
            let t = ev.label;
            match (arrival[x], arrival[y]) {
                (Some(ax), None) if ax <= t => {
                    arrival[y] = Some(t);
                    pred[y] = Some((x, t));
                }
                (None, Some(ay)) if ay <= t => {
                    arrival[x] = Some(t);
                    pred[x] = Some((y, t));
                }
                _ => return false,
            }
            reached += 1;
            true
        });
    }
    ArrivalMap {
        source: v,
        arrival,
        pred,
    }
}

pub(crate) fn backward_sweep(g: &TemporalGraph, v: Vertex, scope: SweepScope<'_>) -> DepartureMap {
    let mut departure = vec![None; g.n];
    departure[v] = Some(scope.window.end);
    let target = scope.visible(g.n);
    let mut reached = 1;
    let events = g.events();
    let lo = events.partition_point(|e| e.label < scope.window.start);
    let hi = events.partition_point(|e| e.label <= scope.window.end);
    for group in label_groups(&events[lo..hi]).rev() {
        if reached == target {
            break;
        }
        close_group(group, |ev| {
            let e = g.edges[ev.edge as usize];
            let (x, y) = (e.lo(), e.hi());
            if scope.hidden(x) || scope.hidden(y) {
                return false;
            }
            let t = ev.label;
            match (departure[x], departure[y]) {
                (Some(dx), None) if dx >= t => departure[y] = Some(t),
                (None, Some(dy)) if dy >= t => departure[x] = Some(t),
                _ => return false,
            }
            reached += 1;
            true
        });
    }
    DepartureMap { sink: v, departure }
}

/// Returns `g` restricted to `[a, b]`: every edge keeps exactly its labels in
/// `[a, b]`, edges left without labels are dropped.
pub fn restrict(g: &TemporalGraph, a: f64, b: f64) -> Result<TemporalGraph> {
    let window = Window::new(a, b)?;
    if !g.window.covers(&window) {
        return Err(Error::contract(format!(
            "interval [{a}, {b}] not within window [{}, {}]",
            g.window.start, g.window.end
        )));
    }
    let mut edges = Vec::new();
    let mut label_start = vec![0u32];
    let mut labels = Vec::new();
    for (edge, ls) in g.edges() {
        let lo = ls.partition_point(|&t| t < a);
        let hi = ls.partition_point(|&t| t <= b);
        if lo < hi {
            edges.push(edge);
            labels.extend_from_slice(&ls[lo..hi]);
            label_start.push(labels.len() as u32);
        }
    }
    Ok(TemporalGraph::from_sorted_parts(
        g.n,
        window,
        edges,
        label_start,
        labels,
    ))
}

/// Independent earliest-arrival sweep from `v`.
pub fn earliest_arrival_sweep(g: &TemporalGraph, v: Vertex) -> ArrivalMap {
    assert!(v < g.n, "vertex {v} out of range");
    forward_sweep(g, v, SweepScope::whole(g))
}

/// Latest time each vertex can still leave and reach `v`.
pub fn latest_departure_sweep(g: &TemporalGraph, v: Vertex) -> DepartureMap {
    assert!(v < g.n, "vertex {v} out of range");
    backward_sweep(g, v, SweepScope::whole(g))
}

pub fn is_temporal_source(g: &TemporalGraph, v: Vertex) -> bool {
    earliest_arrival_sweep(g, v).all_reachable()
}

pub fn is_temporal_sink(g: &TemporalGraph, v: Vertex) -> bool {
    latest_departure_sweep(g, v).all_reach()
}

/// For every vertex, the set of vertices that reach it by a temporal path.
pub fn reachers(g: &TemporalGraph) -> Vec<BitSet> {
    let mut sets: Vec<BitSet> = (0..g.n).map(|v| BitSet::singleton(g.n, v)).collect();
    for group in label_groups(g.events()) {
        close_group(group, |ev| {
            let e = g.edges[ev.edge as usize];
            bitset::exchange(&mut sets, e.lo(), e.hi())
        });
    }
    sets
}

pub fn is_temporally_connected(g: &TemporalGraph) -> bool {
    if g.n <= 1 {
        return true;
    }
    if (0..g.n).any(|v| g.degree(v) == 0) {
        return false;
    }
    reachers(g).iter().all(BitSet::is_full)
}

/// True iff at least one vertex is a temporal source.
pub fn has_temporal_source(g: &TemporalGraph) -> bool {
    !temporal_sources(g).is_empty()
}

/// All temporal sources, ascending.
pub fn temporal_sources(g: &TemporalGraph) -> Vec<Vertex> {
    if g.n == 0 {
        return Vec::new();
    }
    let sets = reachers(g);
    let mut common = sets[0].clone();
    for s in &sets[1..] {
        common.intersect_with(s);
        if common.is_empty() {
            break;
        }
    }
    common.iter().collect()
}

/// Deletes `removed` vertices and relabels the rest densely in ascending
/// order. Returns the subgraph and the map from new to old vertex ids.
pub fn remove_vertices(g: &TemporalGraph, removed: &[Vertex]) -> (TemporalGraph, Vec<Vertex>) {
    let mut gone = vec![false; g.n];
    for &v in removed {
        gone[v] = true;
    }
    let mut new_id = vec![usize::MAX; g.n];
    let mut old_id = Vec::with_capacity(g.n);
    for v in 0..g.n {
        if !gone[v] {
            new_id[v] = old_id.len();
            old_id.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut label_start = vec![0u32];
    let mut labels = Vec::new();
    // Relabeling is monotone, so lexicographic edge order is preserved.
    for (edge, ls) in g.edges() {
        if gone[edge.lo()] || gone[edge.hi()] {
            continue;
        }
        edges.push(EdgeKey::new(new_id[edge.lo()], new_id[edge.hi()]).expect("distinct"));
        labels.extend_from_slice(ls);
        label_start.push(labels.len() as u32);
    }
    let sub = TemporalGraph::from_sorted_parts(old_id.len(), g.window, edges, label_start, labels);
    (sub, old_id)
}

/// Maps every label `t` to `a + b - t` on window `[a, b]`.
pub fn reverse_time(g: &TemporalGraph) -> TemporalGraph {
    let (a, b) = (g.window.start, g.window.end);
    let mut labels = Vec::with_capacity(g.labels.len());
    for e in 0..g.edges.len() {
        labels.extend(g.labels_of(e).iter().rev().map(|&t| a + b - t));
    }
    TemporalGraph::from_sorted_parts(
        g.n,
        g.window,
        g.edges.clone(),
        g.label_start.clone(),
        labels,
    )
}

/// Checks that exactly the appearances in `spanner` keep all `n` vertices
/// temporally connected.
pub fn verify_spanner(g: &TemporalGraph, spanner: &[Appearance]) -> Result<bool> {
    let mut apps = Vec::with_capacity(spanner.len());
    for app in spanner {
        if !g.contains(app) {
            return Err(Error::contract(format!(
                "appearance {}-{}@{} not present in graph",
                app.edge.lo(),
                app.edge.hi(),
                app.label
            )));
        }
        apps.push(*app);
    }
    apps.sort_unstable_by(Appearance::total_cmp);
    apps.dedup_by(|a, b| a.edge == b.edge && a.label == b.label);
    let sub = TemporalGraph::from_appearances(g.n, g.window, apps)?;
    Ok(is_temporally_connected(&sub))
}

/// True iff every other vertex is reachable from `v` by a temporal path with
/// at most two edges.
pub fn two_hop_source_check(g: &TemporalGraph, v: Vertex) -> bool {
    assert!(v < g.n, "vertex {v} out of range");
    let mut reached = vec![false; g.n];
    reached[v] = true;
    let mut count = 1;
    for (y, e) in g.neighbors(v) {
        let first = g.labels_of(e)[0];
        if !reached[y] {
            reached[y] = true;
            count += 1;
        }
        for (z, f) in g.neighbors(y) {
            if !reached[z] && *g.labels_of(f).last().unwrap() >= first {
                reached[z] = true;
                count += 1;
            }
        }
    }
    count == g.n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, apps: &[(usize, usize, f64)]) -> TemporalGraph {
        TemporalGraph::new(n, Window::UNIT, apps.iter().copied()).unwrap()
    }

    fn k3() -> TemporalGraph {
        graph(3, &[(0, 1, 0.2), (0, 2, 0.5), (1, 2, 0.3)])
    }

    fn decreasing_path() -> TemporalGraph {
        graph(3, &[(0, 1, 0.9), (1, 2, 0.1)])
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(TemporalGraph::new(2, Window::UNIT, [(0, 0, 0.5)]).is_err());
        assert!(TemporalGraph::new(2, Window::UNIT, [(0, 2, 0.5)]).is_err());
        assert!(TemporalGraph::new(2, Window::UNIT, [(0, 1, 1.5)]).is_err());
        assert!(TemporalGraph::new(2, Window::UNIT, [(0, 1, 0.5), (1, 0, 0.5)]).is_err());
        let g = TemporalGraph::new(2, Window::UNIT, [(1, 0, 0.7), (0, 1, 0.2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.labels_of(0), &[0.2, 0.7]);
        assert!(!g.is_simple());
    }

    #[test]
    fn restrict_filters_labels() {
        let g = k3();
        let r = restrict(&g, 0.3, 1.0).unwrap();
        let kept: Vec<f64> = r.appearances().map(|a| a.label).collect();
        assert_eq!(kept, vec![0.5, 0.3]);
        assert_eq!(r.edge_count(), 2);
        assert_eq!(r.n(), 3);
        assert_eq!(restrict(&g, 0.0, 1.0).unwrap(), g);
        assert!(matches!(restrict(&g, 0.5, 1.5), Err(Error::Contract(_))));
        assert!(restrict(&g, 0.6, 0.5).is_err());
    }

    #[test]
    fn sweep_k3() {
        let a = earliest_arrival_sweep(&k3(), 0);
        assert_eq!(a.arrival, vec![Some(0.0), Some(0.2), Some(0.3)]);
        let p = a.path_to(2).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
        assert_eq!(p.arrival_time(), Some(0.3));
        assert!(p.is_valid_in(&k3()));
    }

    #[test]
    fn sweep_decreasing_path_and_single_edge() {
        let a = earliest_arrival_sweep(&decreasing_path(), 0);
        assert_eq!(a.arrival[2], None);
        let g = graph(2, &[(0, 1, 0.7)]);
        assert_eq!(earliest_arrival_sweep(&g, 0).arrival[1], Some(0.7));
    }

    #[test]
    fn equal_labels_chain_in_any_edge_order() {
        // 2 -> 1 -> 0 runs against the edge order (0,1) < (1,2).
        let g = graph(3, &[(1, 2, 0.5), (0, 1, 0.5)]);
        let a = earliest_arrival_sweep(&g, 2);
        assert_eq!(a.arrival, vec![Some(0.5), Some(0.5), Some(0.0)]);
        assert!(is_temporally_connected(&g));
    }

    #[test]
    fn sources_and_sinks() {
        assert!(is_temporal_source(&k3(), 0));
        assert!(!is_temporal_source(&decreasing_path(), 0));
        let single = TemporalGraph::empty(1, Window::UNIT);
        assert!(is_temporal_source(&single, 0));
        assert!(is_temporal_sink(&single, 0));
        assert!(is_temporally_connected(&single));
        // 0 reaches nobody past 1 but 2 reaches 0.
        assert!(is_temporal_sink(&decreasing_path(), 0));
    }

    #[test]
    fn connectivity_small_cases() {
        assert!(is_temporally_connected(&graph(2, &[(0, 1, 0.4)])));
        assert!(!is_temporally_connected(&decreasing_path()));
        // All 6 orderings of three distinct labels on K3.
        let perms = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        for p in perms {
            let g = graph(
                3,
                &[
                    (0, 1, p[0] as f64 / 4.0),
                    (0, 2, p[1] as f64 / 4.0),
                    (1, 2, p[2] as f64 / 4.0),
                ],
            );
            assert!(is_temporally_connected(&g), "{p:?}");
        }
    }

    #[test]
    fn reverse_time_examples() {
        let g = graph(2, &[(0, 1, 0.2)]);
        assert_eq!(reverse_time(&g).labels_of(0), &[0.8]);
        let h = graph(3, &[(0, 1, 0.25), (0, 1, 0.5), (1, 2, 0.75)]);
        assert_eq!(reverse_time(&reverse_time(&h)), h);
    }

    #[test]
    fn verify_spanner_cases() {
        let g = k3();
        let all: Vec<_> = g.appearances().collect();
        assert!(verify_spanner(&g, &all).unwrap());
        assert!(!verify_spanner(&g, &[]).unwrap());
        let bogus = Appearance::new(0, 1, 0.21).unwrap();
        assert!(verify_spanner(&g, &[bogus]).is_err());
    }

    #[test]
    fn two_hop_examples() {
        let g = graph(3, &[(0, 1, 0.1), (1, 2, 0.2), (0, 2, 0.9)]);
        assert!(two_hop_source_check(&g, 0));
        let star = graph(5, &[(0, 1, 0.5), (0, 2, 0.1), (0, 3, 0.3), (0, 4, 0.2)]);
        assert!(two_hop_source_check(&star, 0));
        assert!(!two_hop_source_check(&star, 1));
        let path = graph(4, &[(0, 1, 0.1), (1, 2, 0.2), (2, 3, 0.3)]);
        assert!(is_temporal_source(&path, 0));
        assert!(!two_hop_source_check(&path, 0));
    }

    #[test]
    fn text_round_trip() {
        let g = graph(4, &[(0, 1, 0.1), (3, 2, 0.123456789012345), (0, 1, 0.7)]);
        let back = TemporalGraph::parse_text(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert!(TemporalGraph::parse_text("0 1 0.5\n").is_err());
        assert!(TemporalGraph::parse_text("n 2\n0 1\n").is_err());
        assert!(TemporalGraph::parse_text("n 2\n0 5 0.1\n").is_err());
        let commented = TemporalGraph::parse_text("# hi\nn 2\n\n0 1 0.5\n").unwrap();
        assert_eq!(commented.edge_count(), 1);
    }
}
