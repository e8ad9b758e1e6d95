//! Algebraic property deciders working directly on Stallings graphs:
//! freeness, finite index, the ab-cycle spectrum, parabolicity and almost
//! malnormality.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::graph::{Mode, ModularGraph};
use crate::word::{Letter, Word};

/// A subgroup is free exactly when its graph carries no a-loop and no b-loop
/// (no conjugate of a torsion element belongs to it).
pub fn is_free(g: &ModularGraph) -> bool {
    let t = g.combinatorial_type();
    t.l2 == 0 && t.l3 == 0
}

/// The index when it is finite: the graph must be cyclically reduced with no
/// isolated b-edge, making both edge maps total, and the index is then the
/// number of vertices.
pub fn is_finite_index(g: &ModularGraph) -> Option<u32> {
    let t = g.combinatorial_type();
    if t.k3 == 0 && g.validate(Mode::CyclicallyReduced).is_ok() {
        Some(t.n)
    } else {
        None
    }
}

/// One step along ab: the a-edge, then the b-edge forward.
fn phi(g: &ModularGraph, v: u32) -> Option<u32> {
    g.beta(g.alpha(v)?)
}

fn phi_inverse(g: &ModularGraph, v: u32) -> Option<u32> {
    g.alpha(g.beta_inv(v)?)
}

/// The cycles of the partial map v ↦ beta(alpha(v)). Each cycle is listed
/// starting from its smallest vertex, cycles ordered by that vertex.
pub fn phi_cycles(g: &ModularGraph) -> Vec<Vec<u32>> {
    let n = g.n() as usize;
    let mut on_path = vec![false; n + 1];
    for v in g.vertices() {
        if phi_inverse(g, v).is_none() {
            let mut at = Some(v);
            while let Some(u) = at {
                on_path[u as usize] = true;
                at = phi(g, u);
            }
        }
    }
    let mut seen = vec![false; n + 1];
    let mut cycles = Vec::new();
    for v in g.vertices() {
        if on_path[v as usize] || seen[v as usize] || phi(g, v).is_none() {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = v;
        loop {
            seen[at as usize] = true;
            cycle.push(at);
            at = phi(g, at).expect("cycle vertices have phi defined");
            if at == v {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

/// The multiset of ab-cycle sizes, sorted ascending: one entry of size m per
/// φ-cycle of length m.
pub fn ab_cycle_spectrum(g: &ModularGraph) -> Vec<u32> {
    let mut lengths: Vec<u32> = phi_cycles(g).iter().map(|c| c.len() as u32).collect();
    lengths.sort_unstable();
    lengths
}

/// A subgroup is parabolic exactly when some power of ab labels a cycle,
/// that is, when the spectrum is non-empty.
pub fn is_parabolic(g: &ModularGraph) -> bool {
    !phi_cycles(g).is_empty()
}

/// Evidence against almost malnormality: an infinite-order word labeling
/// cycles at two distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalnormalityWitness {
    pub word: String,
    pub p: u32,
    pub q: u32,
}

fn ab_power(m: usize) -> Word {
    Word::parse(&"ab".repeat(m)).unwrap()
}

const EXPECT_A: u64 = 0;
const EXPECT_B: u64 = 1;

fn encode(p: u32, q: u32, phase: u64) -> u64 {
    ((p as u64) << 32) | ((q as u64) << 1) | phase
}

fn decode(state: u64) -> (u32, u32, u64) {
    ((state >> 32) as u32, ((state >> 1) & 0x7fff_ffff) as u32, state & 1)
}

/// Outgoing edges in the alternating product digraph: both coordinates take
/// the same kind of step, and the phase flips so letters alternate.
fn successors(g: &ModularGraph, state: u64) -> Vec<(u64, Letter)> {
    let (p, q, phase) = decode(state);
    let mut out = Vec::with_capacity(2);
    if phase == EXPECT_A {
        if let (Some(np), Some(nq)) = (g.alpha(p), g.alpha(q)) {
            out.push((encode(np, nq, EXPECT_B), Letter::A));
        }
    } else {
        if let (Some(np), Some(nq)) = (g.beta(p), g.beta(q)) {
            out.push((encode(np, nq, EXPECT_A), Letter::B));
        }
        if let (Some(np), Some(nq)) = (g.beta_inv(p), g.beta_inv(q)) {
            out.push((encode(np, nq, EXPECT_A), Letter::Binv));
        }
    }
    debug_assert!(out.iter().all(|&(s, _)| {
        let (np, nq, _) = decode(s);
        np != nq
    }));
    out
}

/// One DFS frame: the state's id, its outgoing edges, and the next edge index.
type Frame = (u32, Vec<(u64, Letter)>, usize);

/// Iterative Tarjan over the implicit product digraph; returns the first
/// strongly connected component with at least two states, if any.
fn cyclic_component(g: &ModularGraph) -> Option<Vec<u64>> {
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut states: Vec<u64> = Vec::new();
    let mut low: Vec<u32> = Vec::new();
    let mut on_stack: Vec<bool> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();

    let intern = |s: u64,
                      ids: &mut HashMap<u64, u32>,
                      states: &mut Vec<u64>,
                      low: &mut Vec<u32>,
                      on_stack: &mut Vec<bool>| {
        *ids.entry(s).or_insert_with(|| {
            let id = states.len() as u32;
            states.push(s);
            low.push(u32::MAX);
            on_stack.push(false);
            id
        })
    };

    let n = g.n();
    for p in 1..=n {
        for q in 1..=n {
            if p == q {
                continue;
            }
            for phase in [EXPECT_A, EXPECT_B] {
                let start = encode(p, q, phase);
                if ids.contains_key(&start) && low[ids[&start] as usize] != u32::MAX {
                    continue;
                }
                let sid = intern(start, &mut ids, &mut states, &mut low, &mut on_stack);
                if low[sid as usize] != u32::MAX {
                    continue;
                }
                // States are interned in discovery order, so a state's id
                // doubles as its Tarjan index.
                low[sid as usize] = sid;
                on_stack[sid as usize] = true;
                stack.push(sid);
                frames.push((sid, successors(g, start), 0));
                while let Some((vid, succ, pos)) = frames.last_mut() {
                    let vid = *vid;
                    if *pos < succ.len() {
                        let (next_state, _) = succ[*pos];
                        *pos += 1;
                        let before = states.len();
                        let nid =
                            intern(next_state, &mut ids, &mut states, &mut low, &mut on_stack);
                        if (nid as usize) == before {
                            low[nid as usize] = nid;
                            on_stack[nid as usize] = true;
                            stack.push(nid);
                            let succs = successors(g, next_state);
                            frames.push((nid, succs, 0));
                        } else if on_stack[nid as usize] {
                            low[vid as usize] = low[vid as usize].min(nid);
                        }
                    } else {
                        frames.pop();
                        if let Some((parent, _, _)) = frames.last() {
                            let parent = *parent;
                            low[parent as usize] = low[parent as usize].min(low[vid as usize]);
                        }
                        if low[vid as usize] == vid {
                            let mut component = Vec::new();
                            loop {
                                let w = stack.pop().expect("scc stack holds the component");
                                on_stack[w as usize] = false;
                                component.push(states[w as usize]);
                                if w == vid {
                                    break;
                                }
                            }
                            if component.len() >= 2 {
                                return Some(component);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Reads the word along a cycle through `component`, starting at its smallest
/// state, and packages it with that state's vertex pair.
fn witness_from_component(g: &ModularGraph, component: &[u64]) -> MalnormalityWitness {
    let members: HashSet<u64> = component.iter().copied().collect();
    let start = *component.iter().min().unwrap();
    let mut prev: HashMap<u64, (u64, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut closing: Option<(u64, Letter)> = None;
    'search: while let Some(s) = queue.pop_front() {
        for (t, letter) in successors(g, s) {
            if !members.contains(&t) {
                continue;
            }
            if t == start {
                closing = Some((s, letter));
                break 'search;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
                e.insert((s, letter));
                queue.push_back(t);
            }
        }
    }
    let (mut at, last) = closing.expect("a strongly connected pair of states closes a cycle");
    let mut letters = vec![last];
    while at != start {
        let (before, letter) = prev[&at];
        letters.push(letter);
        at = before;
    }
    letters.reverse();
    let (p, q, _) = decode(start);
    MalnormalityWitness {
        word: Word::new(letters).to_string(),
        p,
        q,
    }
}

/// Decides almost malnormality. The answer is false exactly when some
/// infinite-order element labels cycles at two distinct vertices; the second
/// component then carries such a word and the two vertices.
pub fn is_almost_malnormal(g: &ModularGraph) -> (bool, Option<MalnormalityWitness>) {
    let cycles = phi_cycles(g);
    if let Some(cycle) = cycles.iter().find(|c| c.len() >= 2) {
        let witness = MalnormalityWitness {
            word: ab_power(cycle.len()).to_string(),
            p: cycle[0],
            q: cycle[1],
        };
        return (false, Some(witness));
    }
    if cycles.len() >= 2 {
        let witness = MalnormalityWitness {
            word: ab_power(1).to_string(),
            p: cycles[0][0],
            q: cycles[1][0],
        };
        return (false, Some(witness));
    }
    match cyclic_component(g) {
        Some(component) => (false, Some(witness_from_component(g, &component))),
        None => (true, None),
    }
}
