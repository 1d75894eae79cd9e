//! Fast algorithms checked against brute-force oracles on small random instances.

use proptest::prelude::*;
use rtg::gen::{co_call_sequence, CompleteLabels, RngStream, DEFAULT_COMPLETE_CAP};
use rtg::gossip::simulate_calls;
use rtg::graph::{remove_vertices, temporal_sources};
use rtg::harness::{coupled_outcomes, count_successes, Model, PropertyId, SweepGrid};
use rtg::*;

const TICKS: [f64; 6] = [0.1, 0.25, 0.4, 0.55, 0.7, 0.9];

/// Multi-labelled graphs on a coarse label grid, so equal labels are common.
fn multigraph(max_n: usize) -> impl Strategy<Value = TemporalGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 0..TICKS.len()), 0..3 * n * n).prop_map(move |raw| {
            let mut apps: Vec<(usize, usize, usize)> = raw
                .into_iter()
                .filter(|(u, v, _)| u != v)
                .map(|(u, v, t)| (u.min(v), u.max(v), t))
                .collect();
            apps.sort_unstable();
            apps.dedup();
            TemporalGraph::new(n, Window::UNIT, apps.into_iter().map(|(u, v, t)| (u, v, TICKS[t])))
                .unwrap()
        })
    })
}

/// Simple graphs with continuous labels.
fn simple_graph(max_n: usize) -> impl Strategy<Value = TemporalGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(prop::option::weighted(0.7, 0.0..1.0f64), pairs).prop_map(move |ls| {
            let mut apps = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if let Some(t) = ls[k] {
                        apps.push((u, v, t));
                    }
                    k += 1;
                }
            }
            TemporalGraph::new(n, Window::UNIT, apps).unwrap()
        })
    })
}

/// Earliest arrival by relaxing every appearance until nothing changes.
fn brute_arrival(g: &TemporalGraph, v: usize) -> Vec<Option<f64>> {
    let mut arr = vec![None; g.n()];
    arr[v] = Some(g.window().start);
    loop {
        let mut changed = false;
        for app in g.appearances() {
            let (a, b, t) = (app.edge.lo(), app.edge.hi(), app.label);
            for (x, y) in [(a, b), (b, a)] {
                if arr[x].is_some_and(|ax: f64| ax <= t) && arr[y].is_none_or(|ay| t < ay) {
                    arr[y] = Some(t);
                    changed = true;
                }
            }
        }
        if !changed {
            return arr;
        }
    }
}

fn brute_reach(g: &TemporalGraph) -> Vec<Vec<bool>> {
    (0..g.n())
        .map(|u| brute_arrival(g, u).iter().map(Option::is_some).collect())
        .collect()
}

fn permute(g: &TemporalGraph, perm: &[usize]) -> TemporalGraph {
    TemporalGraph::new(
        g.n(),
        g.window(),
        g.appearances().map(|a| (perm[a.edge.lo()], perm[a.edge.hi()], a.label)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sweep_matches_brute_force(g in multigraph(7)) {
        for v in 0..g.n() {
            prop_assert_eq!(earliest_arrival_sweep(&g, v).arrival, brute_arrival(&g, v));
        }
    }

    #[test]
    fn source_sink_and_connectivity_match_brute_force(g in multigraph(7)) {
        let reach = brute_reach(&g);
        let n = g.n();
        for v in 0..n {
            prop_assert_eq!(is_temporal_source(&g, v), reach[v].iter().all(|&r| r));
            prop_assert_eq!(is_temporal_sink(&g, v), (0..n).all(|u| reach[u][v]));
        }
        let connected = reach.iter().all(|row| row.iter().all(|&r| r));
        prop_assert_eq!(is_temporally_connected(&g), connected);
        let sources: Vec<usize> = (0..n).filter(|&v| reach[v].iter().all(|&r| r)).collect();
        prop_assert_eq!(has_temporal_source(&g), !sources.is_empty());
        prop_assert_eq!(temporal_sources(&g), sources);
    }

    #[test]
    fn paths_are_valid_and_foremost(g in multigraph(7)) {
        let arr = earliest_arrival_sweep(&g, 0);
        for u in 0..g.n() {
            match arr.path_to(u) {
                Some(path) => {
                    prop_assert!(path.is_valid_in(&g));
                    prop_assert_eq!(path.vertices[0], 0);
                    prop_assert_eq!(*path.vertices.last().unwrap(), u);
                    if u != 0 {
                        prop_assert_eq!(path.arrival_time(), arr.arrival[u]);
                    }
                }
                None => prop_assert!(arr.arrival[u].is_none()),
            }
        }
    }

    #[test]
    fn reversal_swaps_sources_and_sinks(g in multigraph(7)) {
        let r = reverse_time(&g);
        for v in 0..g.n() {
            prop_assert_eq!(is_temporal_sink(&g, v), is_temporal_source(&r, v));
            prop_assert_eq!(is_temporal_source(&g, v), is_temporal_sink(&r, v));
        }
        prop_assert_eq!(reverse_time(&r).appearances().count(), g.appearances().count());
    }

    #[test]
    fn two_hop_implies_source(g in multigraph(7)) {
        for v in 0..g.n() {
            if two_hop_source_check(&g, v) {
                prop_assert!(is_temporal_source(&g, v));
            }
        }
    }

    #[test]
    fn reachability_grows_with_the_window(g in multigraph(7), cut in 0usize..TICKS.len()) {
        let a = restrict(&g, 0.0, TICKS[cut]).unwrap();
        let b = restrict(&g, 0.0, 1.0).unwrap();
        let (ra, rb) = (brute_reach(&a), brute_reach(&b));
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert!(!ra[u][v] || rb[u][v]);
            }
        }
        if is_temporally_connected(&a) {
            prop_assert!(is_temporally_connected(&b));
        }
    }

    #[test]
    fn full_appearance_set_verifies_iff_connected(g in multigraph(7)) {
        let all: Vec<Appearance> = g.appearances().collect();
        prop_assert_eq!(verify_spanner(&g, &all).unwrap(), is_temporally_connected(&g));
    }

    #[test]
    fn relabeling_commutes_with_reachability(
        g in multigraph(6),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = rtg::gen::splitmix64(s);
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let h = permute(&g, &perm);
        for v in 0..n {
            let a = earliest_arrival_sweep(&g, v).arrival;
            let b = earliest_arrival_sweep(&h, perm[v]).arrival;
            for u in 0..n {
                prop_assert_eq!(a[u], b[perm[u]]);
            }
        }
        prop_assert_eq!(is_temporally_connected(&g), is_temporally_connected(&h));
    }

    #[test]
    fn tree_matches_sweep_on_simple_graphs(g in simple_graph(8)) {
        let arr = earliest_arrival_sweep(&g, 0);
        match foremost_tree(&g, 0) {
            Ok(tree) => {
                prop_assert!(arr.all_reachable());
                for u in 0..g.n() {
                    prop_assert_eq!(Some(tree.arrival(u)), arr.arrival[u]);
                }
                prop_assert_eq!(tree.appearances().len(), g.n() - 1);
                prop_assert!(tree.trajectory.windows(2).all(|w| w[0] <= w[1]));
                let multi = foremost_tree_multilabel(&g, 0).unwrap();
                prop_assert_eq!(&multi.parent, &tree.parent);
                prop_assert_eq!(&multi.attach_order, &tree.attach_order);
            }
            Err(Error::NotReachable { .. }) => prop_assert!(!arr.all_reachable()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn multilabel_tree_matches_sweep(g in multigraph(7)) {
        let arr = earliest_arrival_sweep(&g, 0);
        if let Ok(tree) = foremost_tree_multilabel(&g, 0) {
            for u in 0..g.n() {
                prop_assert_eq!(Some(tree.arrival(u)), arr.arrival[u]);
            }
        } else {
            prop_assert!(!arr.all_reachable());
        }
    }

    #[test]
    fn reverse_tree_is_a_sink_tree(g in multigraph(7)) {
        let dep = latest_departure_sweep(&g, 0);
        match reverse_foremost_tree(&g, 0) {
            Ok(tree) => {
                prop_assert!(dep.all_reach());
                let apps = tree.appearances();
                prop_assert_eq!(apps.len(), g.n() - 1);
                prop_assert!(apps.iter().all(|a| g.contains(a)));
                // Every vertex reaches the root inside the tree alone.
                let sub = TemporalGraph::new(
                    g.n(),
                    g.window(),
                    apps.iter().map(|a| (a.edge.lo(), a.edge.hi(), a.label)),
                ).unwrap();
                prop_assert!(is_temporal_sink(&sub, 0));
            }
            Err(_) => prop_assert!(!dep.all_reach()),
        }
    }

    #[test]
    fn dense_tree_matches_graph_tree(n in 2usize..12, seed in any::<u64>()) {
        let labels = CompleteLabels::sample(n, DEFAULT_COMPLETE_CAP, &mut RngStream::new(seed, 0).rng()).unwrap();
        let g = labels.to_graph();
        prop_assert_eq!(&g, &sample_complete(n, &mut RngStream::new(seed, 0).rng()).unwrap());
        let a = foremost_tree_complete(&labels, 0).unwrap();
        let b = foremost_tree(&g, 0).unwrap();
        prop_assert_eq!(a.parent, b.parent);
        prop_assert_eq!(a.trajectory, b.trajectory);
    }

    #[test]
    fn truncation_stays_below(n in 3usize..40, seed in any::<u64>()) {
        let labels = CompleteLabels::sample(n, DEFAULT_COMPLETE_CAP, &mut RngStream::new(seed, 1).rng()).unwrap();
        if let Ok(tree) = foremost_tree_complete(&labels, 0) {
            let t = truncate_trajectory(&Trajectory::from_tree(&tree), &truncation_caps(n).unwrap()).unwrap();
            let yh = t.y_hat().unwrap();
            prop_assert!(yh.iter().zip(&t.y).all(|(a, b)| a <= b));
            prop_assert!(trajectory_deviation(&t).unwrap() >= 0.0);
        }
    }

    #[test]
    fn removing_vertices_keeps_the_rest(g in multigraph(7), drop in 0usize..7) {
        let drop = drop % g.n();
        let (sub, old) = remove_vertices(&g, &[drop]);
        prop_assert_eq!(sub.n(), g.n() - 1);
        prop_assert!(!old.contains(&drop));
        for a in sub.appearances() {
            let back = Appearance::new(old[a.edge.lo()], old[a.edge.hi()], a.label).unwrap();
            prop_assert!(g.contains(&back));
        }
        let kept = g.appearances().filter(|a| a.edge.lo() != drop && a.edge.hi() != drop).count();
        prop_assert_eq!(sub.appearances().count(), kept);
    }

    #[test]
    fn text_format_round_trips(g in multigraph(7)) {
        let back = TemporalGraph::parse_text(&g.to_text()).unwrap();
        prop_assert_eq!(back.appearances().collect::<Vec<_>>(), g.appearances().collect::<Vec<_>>());
        prop_assert_eq!(back.n(), g.n());
    }
}

/// Milestones read off the temporal graph whose labels are call ranks.
fn milestones_from_graph(calls: &CallSequence) -> [Option<u64>; 4] {
    let n = calls.n;
    let g = TemporalGraph::new(
        n,
        Window::new(0.0, calls.calls.len() as f64).unwrap(),
        calls.calls.iter().enumerate().map(|(i, e)| (e.lo(), e.hi(), (i + 1) as f64)),
    )
    .unwrap();
    let mut out = [None; 4];
    for k in 1..=calls.calls.len() {
        let prefix = restrict(&g, 0.0, k as f64).unwrap();
        let hold = [
            earliest_arrival_sweep(&prefix, 0).arrival[1].is_some()
                && earliest_arrival_sweep(&prefix, 1).arrival[0].is_some(),
            (0..n).any(|v| is_temporal_sink(&prefix, v)),
            is_temporal_sink(&prefix, 0),
            is_temporally_connected(&prefix),
        ];
        for (slot, h) in out.iter_mut().zip(hold) {
            if slot.is_none() && h {
                *slot = Some(k as u64);
            }
        }
    }
    out
}

#[test]
fn co_milestones_equal_graph_milestones() {
    for n in 2..=6 {
        for seed in 0..200 {
            let stream = RngStream::new(seed, n as u64);
            let calls = co_call_sequence(n, &mut stream.rng()).unwrap();
            let m = co_milestones(n, &mut stream.rng()).unwrap();
            let got = [m.pair_exchange, m.first_expert, m.fixed_expert, m.all_experts];
            assert_eq!(got, milestones_from_graph(&calls), "n = {n}, seed = {seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn milestone_chain(n in 2usize..30, seed in any::<u64>(), any_model in any::<bool>()) {
        let mut rng = RngStream::new(seed, 0).rng();
        let m = if any_model {
            any_milestones(n, &mut rng, 1_000_000).unwrap()
        } else {
            co_milestones(n, &mut rng).unwrap()
        };
        let (fe, fx, all) = (m.first_expert.unwrap(), m.fixed_expert.unwrap(), m.all_experts.unwrap());
        prop_assert!(fe <= fx && fx <= all);
        prop_assert!(m.one_way_exchange.unwrap() <= m.pair_exchange.unwrap());
        prop_assert!(m.pair_exchange.unwrap() <= all);
        prop_assert!(m.calls >= all);
    }

    #[test]
    fn milestones_invariant_under_relabeling(n in 3usize..12, seed in any::<u64>()) {
        let calls = co_call_sequence(n, &mut RngStream::new(seed, 0).rng()).unwrap();
        let relabel = |perm: &[usize]| {
            let moved = calls.calls.iter().map(|e| EdgeKey::new(perm[e.lo()], perm[e.hi()]).unwrap());
            simulate_calls(n, moved, None)
        };
        let base = simulate_calls(n, calls.calls.iter().copied(), None);
        // Fixing agents 0 and 1 preserves every milestone.
        let fix: Vec<usize> = (0..n).map(|i| if i < 2 { i } else { n + 1 - i }).collect();
        prop_assert_eq!(relabel(&fix), base);
        // Swapping them preserves the milestones that do not single out agent 0.
        let swap: Vec<usize> = (0..n).map(|i| match i { 0 => 1, 1 => 0, i => i }).collect();
        let s = relabel(&swap);
        prop_assert_eq!(
            (s.pair_exchange, s.first_expert, s.all_experts),
            (base.pair_exchange, base.first_expert, base.all_experts)
        );
    }

    #[test]
    fn success_counts_add_across_shards(split in 0u64..12, seed in any::<u64>()) {
        let (prop, model, n, p) = (PropertyId::Source, Model::Fnp, 25, 0.4);
        let whole = count_successes(prop, model, n, p, seed, 0..12).unwrap();
        let left = count_successes(prop, model, n, p, seed, 0..split).unwrap();
        let right = count_successes(prop, model, n, p, seed, split..12).unwrap();
        prop_assert_eq!(whole, left + right);
    }
}

#[test]
fn coupled_sweeps_are_monotone_per_trial() {
    let grid = SweepGrid::from_factors(40, &[0.5, 1.0, 2.0, 3.0, 4.0, 6.0]).unwrap();
    for prop in [PropertyId::P2p, PropertyId::Source, PropertyId::FirstSource, PropertyId::Connectivity] {
        for model in [Model::Fnp, Model::Poisson] {
            for row in coupled_outcomes(prop, model, &grid, 60, 11).unwrap() {
                assert!(row.windows(2).all(|w| !w[0] || w[1]), "{prop} {model}: {row:?}");
            }
        }
    }
}
