//! Random temporal graphs: reachability, foremost trees, sharp-threshold
//! experiments, optimal temporal spanners and sequential gossip.
//!
//! A temporal graph attaches one or more real labels (times) to every edge. A
//! temporal path uses edges in non-decreasing label order, and its arrival
//! time is its last label.
//!
//! ```
//! use rtg::{earliest_arrival_sweep, TemporalGraph, Window};
//!
//! let g = TemporalGraph::new(3, Window::UNIT, [(0, 1, 0.2), (1, 2, 0.3), (0, 2, 0.5)])?;
//! let arr = earliest_arrival_sweep(&g, 0);
//! assert_eq!(arr.arrival, vec![Some(0.0), Some(0.2), Some(0.3)]);
//! # Ok::<(), rtg::Error>(())
//! ```

pub mod bitset;
pub mod error;
pub mod foremost;
pub mod gen;
pub mod gossip;
pub mod graph;
pub mod harness;
pub mod spanner;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use foremost::{
    foremost_tree, foremost_tree_complete, foremost_tree_multilabel, reverse_foremost_tree,
    trajectory_deviation, truncate_trajectory, truncation_caps, ForemostTree, Orientation,
    SourceCheck, Trajectory, TreeEdge,
};
pub use gen::{
    any_call_sequence, co_call_sequence, derive_seed, sample_complete, sample_fnp,
    sample_poisson, CallSequence, CompleteLabels, RngStream, SimRng,
};
pub use gossip::{any_milestones, co_milestones, simulate_gossip, GossipMilestones};
pub use graph::{
    earliest_arrival_sweep, has_temporal_source, is_temporal_sink, is_temporal_source,
    is_temporally_connected, latest_departure_sweep, restrict, reverse_time,
    two_hop_source_check, verify_spanner, Appearance, ArrivalMap, DepartureMap, EdgeKey,
    TemporalGraph, TemporalPath, Vertex, Window,
};
pub use harness::{
    estimate_probability, evaluate_property, gossip_experiment, spanner_experiment,
    threshold_sweep, trajectory_experiment, ExperimentRow, GossipModel, Model, PropertyId,
    SweepGrid, SweepMode,
};
pub use spanner::{build_optimal_spanner, find_good_square, SpannerCertificate, Square};
