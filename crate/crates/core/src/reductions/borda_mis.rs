//! Single-winner Borda bribery instances from multicolored independent set.
//!
//! Candidates: p, the vertices, the edges, per-vertex filler dummies F(v)
//! padding every vertex block to the same width, and two dummy blocks D' and
//! D'' of 2B candidates each. Per color there are four voters built from the
//! vertex blocks S(v) = v > E(v) > F(v) and their reversals, plus two global
//! voters z and z'. Unit prices, budget B = h(q + (q-1)*Delta), rule k-Borda
//! with k = 1.
//!
//! Every x/y voter pair gives each candidate outside D'' the same total, so
//! the z pair alone fixes the offsets: vertex and edge candidates end at
//! L + B + 1 and everything else at most L + B, where L is p's score. The
//! construction realizes this with p seated B positions into D'' in z, and
//! with z' = reverse(z with p before D'') after advancing every vertex and
//! edge candidate by one position.

use super::{Graph, ReductionError};
use crate::election::{BriberyInstance, Election, PriceFunction, Voter};
use crate::rules::RuleSpec;

/// A generated instance plus the candidate classes the audits need.
#[derive(Debug, Clone)]
pub struct MisBribery {
    pub instance: BriberyInstance,
    pub budget: u64,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub fillers: Vec<usize>,
    pub d_front: Vec<usize>,
    pub d_back: Vec<usize>,
}

/// Advances every flagged candidate one position toward the top, scanning
/// once left to right; the displaced non-member bubbles to just after the
/// final flagged block.
fn shift_members_forward(list: &mut [usize], member: &[bool]) {
    debug_assert!(
        !member[list[0]],
        "first element must not be a shifted member"
    );
    for i in 1..list.len() {
        if member[list[i]] {
            list.swap(i - 1, i);
        }
    }
}

fn reverse_with_moved_last(ballot: &[usize], last: &[bool]) -> Vec<usize> {
    let mut kept = Vec::with_capacity(ballot.len());
    let mut moved = Vec::new();
    for &c in ballot.iter().rev() {
        if last[c] {
            moved.push(c);
        } else {
            kept.push(c);
        }
    }
    kept.extend(moved);
    kept
}

pub fn gen_borda_from_mis(graph: &Graph, h: usize) -> Result<MisBribery, ReductionError> {
    let colors = graph
        .colors
        .as_ref()
        .ok_or_else(|| ReductionError::Precondition("graph must be colored".into()))?;
    if h == 0 {
        return Err(ReductionError::Precondition(
            "need at least one color".into(),
        ));
    }
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
    let q = classes[0].len();
    if q == 0 || classes.iter().any(|cl| cl.len() != q) {
        return Err(ReductionError::Precondition(
            "every color class must have the same, positive number of vertices".into(),
        ));
    }
    for &(a, b) in &graph.edges {
        if colors[a] == colors[b] {
            return Err(ReductionError::Precondition(format!(
                "edge ({}, {}) joins two vertices of color {}",
                a + 1,
                b + 1,
                colors[a] + 1
            )));
        }
    }

    let delta = graph.max_degree() as u64;
    let budget = (h as u64) * (q as u64 + (q as u64 - 1) * delta);
    let b = budget as usize;

    // candidate roster: p, vertices, edges, fillers, D', D''
    let mut names = vec!["p".to_string()];
    let p = 0usize;
    let vertex_cand: Vec<usize> = (0..graph.n)
        .map(|v| {
            names.push(format!("v{}", v + 1));
            names.len() - 1
        })
        .collect();
    let edge_cand: Vec<usize> = graph
        .edges
        .iter()
        .map(|&(a, b)| {
            names.push(format!("e{}.{}", a + 1, b + 1));
            names.len() - 1
        })
        .collect();
    let mut filler_of: Vec<Vec<usize>> = Vec::with_capacity(graph.n);
    let mut fillers = Vec::new();
    for v in 0..graph.n {
        let missing = delta as usize - graph.degree(v);
        let mut mine = Vec::with_capacity(missing);
        for j in 0..missing {
            names.push(format!("f{}.{}", v + 1, j + 1));
            mine.push(names.len() - 1);
            fillers.push(names.len() - 1);
        }
        filler_of.push(mine);
    }
    let d_front: Vec<usize> = (0..2 * b)
        .map(|j| {
            names.push(format!("dA{}", j + 1));
            names.len() - 1
        })
        .collect();
    let d_back: Vec<usize> = (0..2 * b)
        .map(|j| {
            names.push(format!("dB{}", j + 1));
            names.len() - 1
        })
        .collect();
    let m = names.len();

    let mut in_d_back = vec![false; m];
    for &c in &d_back {
        in_d_back[c] = true;
    }
    let mut is_vertex_or_edge = vec![false; m];
    for &c in vertex_cand.iter().chain(&edge_cand) {
        is_vertex_or_edge[c] = true;
    }

    // S(v) = v > E(v) > F(v)
    let block = |v: usize| -> Vec<usize> {
        let mut out = vec![vertex_cand[v]];
        out.extend(graph.incident(v).iter().map(|&e| edge_cand[e]));
        out.extend(filler_of[v].iter().copied());
        out
    };

    // R(i) = D' > other-color vertices > non-incident edges > other fillers > D''
    let rear = |color: usize| -> Vec<usize> {
        let mut out = d_front.clone();
        for v in 0..graph.n {
            if colors[v] != color {
                out.push(vertex_cand[v]);
            }
        }
        for (e, &(a, bb)) in graph.edges.iter().enumerate() {
            if colors[a] != color && colors[bb] != color {
                out.push(edge_cand[e]);
            }
        }
        for v in 0..graph.n {
            if colors[v] != color {
                out.extend(filler_of[v].iter().copied());
            }
        }
        out.extend(d_back.iter().copied());
        out
    };

    let mut voters = Vec::new();
    for (color, class) in classes.iter().enumerate() {
        let mut x = Vec::with_capacity(m);
        for &v in class {
            x.extend(block(v));
        }
        x.push(p);
        x.extend(rear(color));

        let mut x_prime = Vec::with_capacity(m);
        for &v in class.iter().rev() {
            let mut bl = block(v);
            bl.reverse();
            x_prime.extend(bl);
        }
        x_prime.push(p);
        x_prime.extend(rear(color));

        let y = reverse_with_moved_last(&x, &in_d_back);
        let y_prime = reverse_with_moved_last(&x_prime, &in_d_back);
        voters.push(Voter::unweighted(x));
        voters.push(Voter::unweighted(x_prime));
        voters.push(Voter::unweighted(y));
        voters.push(Voter::unweighted(y_prime));
    }

    // stated z: fillers > vertices > edges > D' > p > D''
    let mut z_stated = Vec::with_capacity(m);
    z_stated.extend(fillers.iter().copied());
    z_stated.extend(vertex_cand.iter().copied());
    z_stated.extend(edge_cand.iter().copied());
    z_stated.extend(d_front.iter().copied());
    z_stated.push(p);
    z_stated.extend(d_back.iter().copied());

    // z': reverse the stated order, then advance each vertex/edge by one
    let mut z_prime: Vec<usize> = z_stated.iter().rev().copied().collect();
    shift_members_forward(&mut z_prime, &is_vertex_or_edge);

    // z: p seated B positions further back, inside D''
    let mut z = Vec::with_capacity(m);
    z.extend(fillers.iter().copied());
    z.extend(vertex_cand.iter().copied());
    z.extend(edge_cand.iter().copied());
    z.extend(d_front.iter().copied());
    z.extend(d_back[..b].iter().copied());
    z.push(p);
    z.extend(d_back[b..].iter().copied());

    voters.push(Voter::unweighted(z));
    voters.push(Voter::unweighted(z_prime));

    let election = Election::new(names, voters)
        .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;
    let n_voters = election.num_voters();
    let instance = BriberyInstance::new(
        election,
        p,
        1,
        RuleSpec::KBorda,
        vec![PriceFunction::Unit; n_voters],
        budget,
    )
    .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;

    Ok(MisBribery {
        instance,
        budget,
        vertices: vertex_cand,
        edges: edge_cand,
        fillers,
        d_front,
        d_back,
    })
}

/// Pre-bribery score audit: vertex and edge candidates at L + B + 1, every
/// other candidate at most L + B (L = p's score).
pub fn audit_mis_scores(gen: &MisBribery) -> Result<(), String> {
    let scores = crate::rules::borda_scores(&gen.instance.election);
    let l = scores[gen.instance.preferred];
    let target = l + gen.budget + 1;
    for &c in gen.vertices.iter().chain(&gen.edges) {
        if scores[c] != target {
            return Err(format!(
                "candidate {} scores {}, expected L+B+1 = {}",
                gen.instance.election.candidates[c], scores[c], target
            ));
        }
    }
    for &c in gen.fillers.iter().chain(&gen.d_front).chain(&gen.d_back) {
        if scores[c] > l + gen.budget {
            return Err(format!(
                "candidate {} scores {}, expected at most L+B = {}",
                gen.instance.election.candidates[c],
                scores[c],
                l + gen.budget
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::has_multicolored_independent_set;
    use crate::solvers::{solve_kborda_unit, Limits};

    fn colored(n: usize, edges: Vec<(usize, usize)>, colors: Vec<usize>) -> Graph {
        Graph::new(n, edges).unwrap().with_colors(colors).unwrap()
    }

    #[test]
    fn budget_closed_form() {
        // q = 2, Delta = 1, h = 2 -> budget 2 * (2 + 1*1) = 6
        let g = colored(4, vec![(0, 2)], vec![0, 0, 1, 1]);
        let gen = gen_borda_from_mis(&g, 2).unwrap();
        assert_eq!(gen.budget, 6);
    }

    #[test]
    fn preconditions_enforced() {
        let uncolored = Graph::new(2, vec![]).unwrap();
        assert!(gen_borda_from_mis(&uncolored, 1).is_err());
        // unequal class sizes
        let g = colored(3, vec![], vec![0, 0, 1]);
        assert!(gen_borda_from_mis(&g, 2).is_err());
        // intra-color edge
        let g = colored(2, vec![(0, 1)], vec![0, 0]);
        assert!(gen_borda_from_mis(&g, 1).is_err());
    }

    #[test]
    fn scores_audit_and_tiny_equivalence() {
        // independent pair: feasible; the instance is small enough for the
        // raw oracle, which must agree with the dedicated k-Borda search
        let yes = colored(2, vec![], vec![0, 1]);
        let gen = gen_borda_from_mis(&yes, 2).unwrap();
        audit_mis_scores(&gen).unwrap();
        assert!(has_multicolored_independent_set(&yes, 2).unwrap());
        let report = solve_kborda_unit(&gen.instance, &Limits::default()).unwrap();
        assert!(report.outcome.is_feasible());
        let oracle = crate::solvers::solve_oracle(&gen.instance, &Limits::default()).unwrap();
        assert!(oracle.outcome.is_feasible());
        assert_eq!(oracle.outcome.cost(), report.outcome.cost());

        // complete bipartite pair: infeasible
        let no = colored(2, vec![(0, 1)], vec![0, 1]);
        let gen = gen_borda_from_mis(&no, 2).unwrap();
        audit_mis_scores(&gen).unwrap();
        assert!(!has_multicolored_independent_set(&no, 2).unwrap());
        let report = solve_kborda_unit(&gen.instance, &Limits::default()).unwrap();
        assert!(!report.outcome.is_feasible());
        let oracle = crate::solvers::solve_oracle(&gen.instance, &Limits::default()).unwrap();
        assert!(!oracle.outcome.is_feasible());
    }
}
