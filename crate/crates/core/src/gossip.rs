//! Sequential gossip: agents exchange every secret they know on each call.
//!
//! Agent `a` knows secret `s` after a prefix of calls exactly when `s`
//! reaches `a` in the temporal graph whose labels are the call ranks, so an
//! expert is a temporal sink of that prefix.

use crate::bitset::{self, BitSet};
use crate::error::Result;
use crate::gen::{check_agents, AnyCalls, CallSequence, CoCalls, SimRng};
use crate::graph::{EdgeKey, Vertex};

/// Secrets known by each agent.
#[derive(Clone, Debug)]
pub struct KnowledgeState {
    knows: Vec<BitSet>,
    expert: Vec<bool>,
    experts: usize,
}

impl KnowledgeState {
    pub fn new(n: usize) -> Self {
        KnowledgeState {
            knows: (0..n).map(|i| BitSet::singleton(n, i)).collect(),
            expert: vec![n == 1; n],
            experts: if n == 1 { 1 } else { 0 },
        }
    }

    pub fn n(&self) -> usize {
        self.knows.len()
    }

    /// Both agents end up knowing the union of what they knew.
    pub fn call(&mut self, a: Vertex, b: Vertex) {
        if !bitset::exchange(&mut self.knows, a, b) {
            return;
        }
        if self.knows[a].is_full() {
            for v in [a, b] {
                if !self.expert[v] {
                    self.expert[v] = true;
                    self.experts += 1;
                }
            }
        }
    }

    pub fn knows(&self, agent: Vertex, secret: Vertex) -> bool {
        self.knows[agent].contains(secret)
    }

    pub fn secrets_of(&self, agent: Vertex) -> &BitSet {
        &self.knows[agent]
    }

    pub fn is_expert(&self, agent: Vertex) -> bool {
        self.expert[agent]
    }

    pub fn expert_count(&self) -> usize {
        self.experts
    }
}

/// 1-based call indices at which each milestone first holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct GossipMilestones {
    /// Agents 0 and 1 each know the other's secret.
    pub pair_exchange: Option<u64>,
    pub first_expert: Option<u64>,
    /// Agent 0 knows every secret.
    pub fixed_expert: Option<u64>,
    pub all_experts: Option<u64>,
    /// Agent 0 knows secret 1 (one direction of the pair exchange).
    pub one_way_exchange: Option<u64>,
    /// Calls replayed before stopping.
    pub calls: u64,
}

impl GossipMilestones {
    pub fn complete(&self) -> bool {
        self.pair_exchange.is_some()
            && self.first_expert.is_some()
            && self.fixed_expert.is_some()
            && self.all_experts.is_some()
            && self.one_way_exchange.is_some()
    }
}

/// Replays `calls` until every milestone is reached, the calls run out, or
/// `cap` calls have been made.
pub fn simulate_calls(
    n: usize,
    calls: impl IntoIterator<Item = EdgeKey>,
    cap: Option<u64>,
) -> GossipMilestones {
    let mut state = KnowledgeState::new(n);
    let mut m = GossipMilestones::default();
    for (i, call) in calls.into_iter().enumerate() {
        let idx = i as u64 + 1;
        if cap.is_some_and(|c| idx > c) {
            break;
        }
        m.calls = idx;
        let (a, b) = (call.lo(), call.hi());
        state.call(a, b);
        if a <= 1 || b <= 1 {
            if m.one_way_exchange.is_none() && state.knows(0, 1) {
                m.one_way_exchange = Some(idx);
            }
            if m.pair_exchange.is_none() && state.knows(0, 1) && state.knows(1, 0) {
                m.pair_exchange = Some(idx);
            }
            if m.fixed_expert.is_none() && state.is_expert(0) {
                m.fixed_expert = Some(idx);
            }
        }
        if m.first_expert.is_none() && state.expert_count() > 0 {
            m.first_expert = Some(idx);
        }
        if m.all_experts.is_none() && state.expert_count() == n {
            m.all_experts = Some(idx);
        }
        if m.complete() {
            break;
        }
    }
    m
}

pub fn simulate_gossip(calls: &CallSequence) -> Result<GossipMilestones> {
    check_agents(calls.n)?;
    Ok(simulate_calls(calls.n, calls.calls.iter().copied(), None))
}

/// Milestones under uniformly random calls without repetition.
pub fn co_milestones(n: usize, rng: &mut SimRng) -> Result<GossipMilestones> {
    check_agents(n)?;
    Ok(simulate_calls(n, CoCalls::new(n, rng), None))
}

/// `⌈10 n ln n⌉`, at least 1.
pub fn default_call_cap(n: usize) -> u64 {
    let nf = n as f64;
    ((10.0 * nf * nf.ln()).ceil() as u64).max(1)
}

/// Milestones under uniformly random calls with repetition, streamed until
/// all milestones are reached or `call_cap` calls have been made.
pub fn any_milestones(n: usize, rng: &mut SimRng, call_cap: u64) -> Result<GossipMilestones> {
    check_agents(n)?;
    if call_cap == 0 {
        return Err(crate::Error::contract("call cap must be at least 1"));
    }
    Ok(simulate_calls(n, AnyCalls::new(n, rng), Some(call_cap)))
}
