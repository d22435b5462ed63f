//! Bounded search in the graph of triangulations up to isomorphism, with
//! edges given by single moves.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::isosig::canonical_signature;
use crate::moves::{apply_move, enumerate_moves, MoveSite};
use crate::skeleton::Manifold;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    Connected,
    /// Every path within the depth limit was ruled out.
    Exhausted,
    /// The state budget ran out first.
    BudgetExceeded,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Connected => "connected",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// Moves from the start; empty unless connected.
    pub path: Vec<MoveSite>,
    /// Distinct signatures visited from both ends.
    pub explored: usize,
    /// Sum of the depths searched from both ends.
    pub depth_reached: usize,
}

/// One direction of the search: signatures by discovery, their layer and
/// the states of the previous layer leading to them.
struct Side {
    ids: BTreeMap<String, u32>,
    layer: Vec<u32>,
    preds: Vec<Vec<u32>>,
    frontier: Vec<(u32, String, Manifold)>,
    depth: usize,
}

impl Side {
    fn new(m: &Manifold, sig: String) -> Side {
        let mut ids = BTreeMap::new();
        ids.insert(sig.clone(), 0);
        Side {
            ids,
            layer: vec![0],
            preds: vec![Vec::new()],
            frontier: vec![(0, sig.clone(), m.clone())],
            depth: 0,
        }
    }

    /// Expands the frontier by one layer. Returns false if the shared state
    /// budget would be exceeded.
    fn expand(&mut self, budget: &mut usize) -> bool {
        let mut next = Vec::new();
        let depth = self.depth as u32 + 1;
        for (id, _, m) in core::mem::take(&mut self.frontier) {
            for site in enumerate_moves(&m) {
                let Ok(n) = apply_move(&m, site) else { continue };
                let sig = canonical_signature(n.triangulation());
                match self.ids.get(&sig) {
                    Some(&k) => {
                        if self.layer[k as usize] == depth && !self.preds[k as usize].contains(&id) {
                            self.preds[k as usize].push(id);
                        }
                    }
                    None => {
                        if *budget == 0 {
                            return false;
                        }
                        *budget -= 1;
                        let k = self.layer.len() as u32;
                        self.ids.insert(sig.clone(), k);
                        self.layer.push(depth);
                        self.preds.push(vec![id]);
                        next.push((k, sig, n));
                    }
                }
            }
        }
        self.frontier = next;
        self.depth += 1;
        true
    }

    /// Good states per layer, walking predecessors back from `meet`.
    fn good_layers(&self, meet: &[u32]) -> Vec<BTreeSet<u32>> {
        let mut out = vec![BTreeSet::new(); self.depth + 1];
        out[self.depth] = meet.iter().copied().collect();
        for d in (0..self.depth).rev() {
            let mut here = BTreeSet::new();
            for &s in &out[d + 1] {
                here.extend(self.preds[s as usize].iter().copied());
            }
            out[d] = here;
        }
        out
    }
}

/// Bidirectional breadth-first search from `start` and `target`, alternating
/// whole layers. On success the path is the lexicographically least among
/// the shortest ones.
pub fn connect(start: &Manifold, target: &Manifold, max_depth: usize, max_states: usize) -> SearchResult {
    let s_sig = canonical_signature(start.triangulation());
    let t_sig = canonical_signature(target.triangulation());
    if s_sig == t_sig {
        return SearchResult {
            status: SearchStatus::Connected,
            path: Vec::new(),
            explored: 1,
            depth_reached: 0,
        };
    }
    let mut fwd = Side::new(start, s_sig);
    let mut bwd = Side::new(target, t_sig);
    let mut budget = max_states.saturating_sub(2);
    let result = |fwd: &Side, bwd: &Side, status, path| SearchResult {
        status,
        path,
        explored: fwd.layer.len() + bwd.layer.len(),
        depth_reached: fwd.depth + bwd.depth,
    };
    loop {
        if fwd.depth + bwd.depth >= max_depth || fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            return result(&fwd, &bwd, SearchStatus::Exhausted, Vec::new());
        }
        let forward_turn = fwd.depth <= bwd.depth;
        let (grow, other) = if forward_turn { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        if !grow.expand(&mut budget) {
            return result(&fwd, &bwd, SearchStatus::BudgetExceeded, Vec::new());
        }
        let meet: Vec<(u32, u32)> = grow
            .frontier
            .iter()
            .filter_map(|(id, sig, _)| other.ids.get(sig).map(|&o| (*id, o)))
            .collect();
        if meet.is_empty() {
            continue;
        }
        let (fm, bm): (Vec<u32>, Vec<u32>) = if forward_turn {
            meet.into_iter().unzip()
        } else {
            let (b, f) = meet.into_iter().unzip();
            (f, b)
        };
        let path = reconstruct(start, &fwd, &bwd, &fm, &bm);
        return result(&fwd, &bwd, SearchStatus::Connected, path);
    }
}

fn reconstruct(start: &Manifold, fwd: &Side, bwd: &Side, fm: &[u32], bm: &[u32]) -> Vec<MoveSite> {
    let gf = fwd.good_layers(fm);
    let gb = bwd.good_layers(bm);
    let len = fwd.depth + bwd.depth;
    let mut cur = start.clone();
    let mut path = Vec::with_capacity(len);
    for i in 1..=len {
        let allowed = |sig: &String| -> bool {
            if i <= fwd.depth {
                fwd.ids.get(sig).is_some_and(|k| gf[i].contains(k))
            } else {
                bwd.ids.get(sig).is_some_and(|k| gb[len - i].contains(k))
            }
        };
        let (site, next) = enumerate_moves(&cur)
            .into_iter()
            .find_map(|site| {
                let n = apply_move(&cur, site).ok()?;
                allowed(&canonical_signature(n.triangulation())).then_some((site, n))
            })
            .expect("a good state has a good successor");
        path.push(site);
        cur = next;
    }
    path
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// Signatures with their distance from the start, by distance and then
    /// signature.
    pub states: Vec<(String, usize)>,
    /// False if the state budget stopped the census early.
    pub complete: bool,
}

/// All signatures within `radius` moves of `start`.
pub fn explore(start: &Manifold, radius: usize, max_states: usize) -> Census {
    let sig = canonical_signature(start.triangulation());
    let mut side = Side::new(start, sig);
    let mut budget = max_states.saturating_sub(1);
    let mut complete = true;
    while side.depth < radius && !side.frontier.is_empty() {
        if !side.expand(&mut budget) {
            complete = false;
            break;
        }
    }
    let mut states: Vec<(String, usize)> =
        side.ids.into_iter().map(|(s, k)| (s, side.layer[k as usize] as usize)).collect();
    states.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    Census { states, complete }
}
