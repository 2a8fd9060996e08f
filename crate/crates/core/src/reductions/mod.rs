//! Hardness-instance generators: small graph or set-cover inputs become
//! bribery instances whose feasibility (at the construction's budget)
//! mirrors the source problem's answer, together with brute-force oracles
//! for the source problems.

mod borda_mis;
mod greedy_cc_setcover;
mod kborda_clique;

pub use borda_mis::{audit_mis_scores, gen_borda_from_mis, MisBribery};
pub use greedy_cc_setcover::{
    audit_setcover_join_order, gen_greedy_approval_cc_from_setcover, SetCoverBribery,
};
pub use kborda_clique::{audit_clique_scores, gen_kborda_from_clique, CliqueBribery};

use std::fmt;

/// Undirected simple graph with optional vertex colors (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    /// Normalized: u < v, sorted, duplicate-free.
    pub edges: Vec<(usize, usize)>,
    /// Colors in 0..h when present, one per vertex.
    pub colors: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    BadGraph(String),
    Precondition(String),
    TooLarge(String),
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::BadGraph(msg) => write!(f, "invalid graph: {}", msg),
            ReductionError::Precondition(msg) => write!(f, "precondition violated: {}", msg),
            ReductionError::TooLarge(msg) => write!(f, "instance too large: {}", msg),
        }
    }
}

impl std::error::Error for ReductionError {}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph, ReductionError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(ReductionError::BadGraph(format!(
                    "edge ({}, {}) out of range for {} vertices",
                    a, b, n
                )));
            }
            if a == b {
                return Err(ReductionError::BadGraph(format!(
                    "self-loop at vertex {}",
                    a
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        let before = normalized.len();
        normalized.dedup();
        if normalized.len() != before {
            return Err(ReductionError::BadGraph("duplicate edge".into()));
        }
        Ok(Graph {
            n,
            edges: normalized,
            colors: None,
        })
    }

    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Graph, ReductionError> {
        if colors.len() != self.n {
            return Err(ReductionError::BadGraph(format!(
                "{} colors for {} vertices",
                colors.len(),
                self.n
            )));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges incident to v, in edge-list order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, b))| (a == v || b == v).then_some(i))
            .collect()
    }

    /// Number of colors (max color + 1) when colored.
    pub fn color_count(&self) -> Option<usize> {
        self.colors
            .as_ref()
            .map(|c| c.iter().max().map_or(0, |&x| x + 1))
    }
}

/// Set cover input: a universe 0..universe and a family of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInput {
    pub universe: usize,
    /// Each set sorted and duplicate-free, nonempty, elements in 0..universe.
    pub sets: Vec<Vec<usize>>,
    /// Target cover size h.
    pub target: usize,
}

impl SetCoverInput {
    pub fn new(
        universe: usize,
        sets: Vec<Vec<usize>>,
        target: usize,
    ) -> Result<SetCoverInput, ReductionError> {
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(ReductionError::Precondition(format!(
                    "set {} is empty",
                    i + 1
                )));
            }
            if s.iter().any(|&u| u >= universe) {
                return Err(ReductionError::Precondition(format!(
                    "set {} references an element outside the universe",
                    i + 1
                )));
            }
        }
        let mut sets = sets;
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Ok(SetCoverInput {
            universe,
            sets,
            target,
        })
    }
}

const GRAPH_ORACLE_GUARD: usize = 20;

/// Exhaustive check for an h-clique.
pub fn has_clique(graph: &Graph, h: usize) -> Result<bool, ReductionError> {
    if graph.n > GRAPH_ORACLE_GUARD {
        return Err(ReductionError::TooLarge(format!(
            "clique oracle limited to {} vertices",
            GRAPH_ORACLE_GUARD
        )));
    }
    if h == 0 {
        return Ok(true);
    }
    fn extend(graph: &Graph, clique: &mut Vec<usize>, from: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        for v in from..graph.n {
            if graph.n - v < left {
                return false;
            }
            if clique.iter().all(|&u| graph.has_edge(u, v)) {
                clique.push(v);
                if extend(graph, clique, v + 1, left - 1) {
                    return true;
                }
                clique.pop();
            }
        }
        false
    }
    Ok(extend(graph, &mut Vec::new(), 0, h))
}

/// Exhaustive check for an independent set with one vertex of each of the h
/// colors. Requires a colored graph whose colors cover exactly 0..h.
pub fn has_multicolored_independent_set(graph: &Graph, h: usize) -> Result<bool, ReductionError> {
    if graph.n > GRAPH_ORACLE_GUARD {
        return Err(ReductionError::TooLarge(format!(
            "independent-set oracle limited to {} vertices",
            GRAPH_ORACLE_GUARD
        )));
    }
    let colors = graph
        .colors
        .as_ref()
        .ok_or_else(|| ReductionError::Precondition("graph is not colored".into()))?;
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); h];
    for (v, &c) in colors.iter().enumerate() {
        if c >= h {
            return Err(ReductionError::Precondition(format!(
                "vertex {} has color {} outside 1..={}",
                v + 1,
                c + 1,
                h
            )));
        }
        classes[c].push(v);
    }
    if classes.iter().any(|cl| cl.is_empty()) {
        return Ok(false);
    }
    fn pick(graph: &Graph, classes: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == classes.len() {
            return true;
        }
        for &v in &classes[chosen.len()] {
            if chosen.iter().all(|&u| !graph.has_edge(u, v)) {
                chosen.push(v);
                if pick(graph, classes, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    Ok(pick(graph, &classes, &mut Vec::new()))
}

/// Exhaustive check for a cover of size at most `input.target`.
pub fn has_set_cover(input: &SetCoverInput) -> Result<bool, ReductionError> {
    if input.sets.len() > GRAPH_ORACLE_GUARD {
        return Err(ReductionError::TooLarge(format!(
            "set-cover oracle limited to {} sets",
            GRAPH_ORACLE_GUARD
        )));
    }
    let full: u64 = if input.universe >= 64 {
        return Err(ReductionError::TooLarge(
            "universe limited to 63 elements".into(),
        ));
    } else {
        (1u64 << input.universe) - 1
    };
    let masks: Vec<u64> = input
        .sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    fn cover(masks: &[u64], full: u64, acc: u64, from: usize, left: usize) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 || from == masks.len() {
            return false;
        }
        cover(masks, full, acc | masks[from], from + 1, left - 1)
            || cover(masks, full, acc, from + 1, left)
    }
    Ok(cover(&masks, full, 0, 0, input.target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_oracle_basics() {
        // K_h contains a clique of size h
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in (a + 1)..4 {
                edges.push((a, b));
            }
        }
        let k4 = Graph::new(4, edges).unwrap();
        assert!(has_clique(&k4, 4).unwrap());
        assert!(has_clique(&k4, 3).unwrap());
        // 4-cycle is triangle-free
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(!has_clique(&c4, 3).unwrap());
        assert!(has_clique(&c4, 2).unwrap());
    }

    #[test]
    fn mis_oracle_basics() {
        // empty graph with 2 colors: an independent pair exists
        let g = Graph::new(2, vec![])
            .unwrap()
            .with_colors(vec![0, 1])
            .unwrap();
        assert!(has_multicolored_independent_set(&g, 2).unwrap());
        // complete bipartite with classes as colors: no independent pair
        let g = Graph::new(2, vec![(0, 1)])
            .unwrap()
            .with_colors(vec![0, 1])
            .unwrap();
        assert!(!has_multicolored_independent_set(&g, 2).unwrap());
    }

    #[test]
    fn set_cover_oracle_basics() {
        // the whole family always covers when its union is the universe
        let input = SetCoverInput::new(3, vec![vec![0, 1], vec![2], vec![1, 2]], 3).unwrap();
        assert!(has_set_cover(&input).unwrap());
        let tight = SetCoverInput::new(3, vec![vec![0, 1], vec![2], vec![1, 2]], 1).unwrap();
        assert!(!has_set_cover(&tight).unwrap());
        let two = SetCoverInput::new(3, vec![vec![0, 1], vec![2], vec![1, 2]], 2).unwrap();
        assert!(has_set_cover(&two).unwrap());
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(2, vec![(0, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }
}
