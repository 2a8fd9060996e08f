//! k-Borda bribery instances from clique.
//!
//! Candidates: p, the vertices, h^3 dummies D(e) per edge plus a block H of
//! B dummies (together D(G)), and B + h - 1 dummies F. Voters: x_e and y_e
//! per edge plus two global voters z and z'. Unit prices, committee size
//! k = |V| - h + 1, budget B = C(h,2) * (2 + h^3).
//!
//! Every x/y pair contributes the same total to all candidates outside F, so
//! z and z' set the offsets: all vertex candidates tie at a common score L
//! and p sits at L - (h - 1) - B. A successful bribery must push p to the
//! top of the x_e votes of a clique's edges; the construction stays valid for
//! any input with at least h vertices, and a canonical infeasible marker is
//! returned when even the committee size would be meaningless.

use super::{Graph, ReductionError};
use crate::election::{BriberyInstance, Election, PriceFunction, Voter};
use crate::rules::RuleSpec;

#[derive(Debug, Clone)]
pub struct CliqueBribery {
    pub instance: BriberyInstance,
    pub budget: u64,
    pub vertices: Vec<usize>,
    /// True when the generator fell back to the canonical infeasible marker
    /// (fewer vertices than the clique size).
    pub marker: bool,
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

/// Canonical infeasible instance: two candidates, one voter preferring the
/// rival, zero budget.
fn marker_instance() -> CliqueBribery {
    let election = Election::new(
        vec!["p".into(), "rival".into()],
        vec![Voter::unweighted(vec![1, 0])],
    )
    .unwrap();
    let instance = BriberyInstance::new(
        election,
        0,
        1,
        RuleSpec::KBorda,
        vec![PriceFunction::Unit],
        0,
    )
    .unwrap();
    CliqueBribery {
        instance,
        budget: 0,
        vertices: vec![],
        marker: true,
    }
}

pub fn gen_kborda_from_clique(graph: &Graph, h: usize) -> Result<CliqueBribery, ReductionError> {
    if h == 0 {
        return Err(ReductionError::Precondition(
            "clique size must be positive".into(),
        ));
    }
    if graph.n < h {
        return Ok(marker_instance());
    }
    let h_u64 = h as u64;
    let pairs = h_u64 * (h_u64 - 1) / 2;
    let budget = pairs * (2 + h_u64 * h_u64 * h_u64);
    let b = budget as usize;
    let h3 = h * h * h;

    let mut names = vec!["p".to_string()];
    let p = 0usize;
    let vertex_cand: Vec<usize> = (0..graph.n)
        .map(|v| {
            names.push(format!("v{}", v + 1));
            names.len() - 1
        })
        .collect();
    // D(G) = per-edge blocks D(e) of h^3 dummies, then H of B dummies
    let mut d_of_edge: Vec<Vec<usize>> = Vec::with_capacity(graph.edges.len());
    let mut d_all = Vec::new();
    for (i, &(a, bb)) in graph.edges.iter().enumerate() {
        let _ = i;
        let mut mine = Vec::with_capacity(h3);
        for j in 0..h3 {
            names.push(format!("d{}.{}x{}", a + 1, bb + 1, j + 1));
            mine.push(names.len() - 1);
            d_all.push(names.len() - 1);
        }
        d_of_edge.push(mine);
    }
    for j in 0..b {
        names.push(format!("h{}", j + 1));
        d_all.push(names.len() - 1);
    }
    let f_cands: Vec<usize> = (0..b + h - 1)
        .map(|j| {
            names.push(format!("f{}", j + 1));
            names.len() - 1
        })
        .collect();
    let m = names.len();

    let mut in_f = vec![false; m];
    for &c in &f_cands {
        in_f[c] = true;
    }
    let mut in_d_of: Vec<Option<usize>> = vec![None; m];
    for (e, block) in d_of_edge.iter().enumerate() {
        for &c in block {
            in_d_of[c] = Some(e);
        }
    }

    let mut voters = Vec::new();
    for (e, &(a, bb)) in graph.edges.iter().enumerate() {
        // x_e: u > v > D(e) > p > D(G) \ D(e) > V \ {u, v} > F
        let mut x = Vec::with_capacity(m);
        x.push(vertex_cand[a]);
        x.push(vertex_cand[bb]);
        x.extend(d_of_edge[e].iter().copied());
        x.push(p);
        x.extend(d_all.iter().copied().filter(|&c| in_d_of[c] != Some(e)));
        x.extend(
            (0..graph.n)
                .filter(|&v| v != a && v != bb)
                .map(|v| vertex_cand[v]),
        );
        x.extend(f_cands.iter().copied());
        let y = reverse_with_moved_last(&x, &in_f);
        voters.push(Voter::unweighted(x));
        voters.push(Voter::unweighted(y));
    }

    // z: V > F > p > D(G)
    let mut z = Vec::with_capacity(m);
    z.extend(vertex_cand.iter().copied());
    z.extend(f_cands.iter().copied());
    z.push(p);
    z.extend(d_all.iter().copied());
    voters.push(Voter::unweighted(z));

    // z': F > p > reverse(V) > D(G)
    let mut z_prime = Vec::with_capacity(m);
    z_prime.extend(f_cands.iter().copied());
    z_prime.push(p);
    z_prime.extend(vertex_cand.iter().rev().copied());
    z_prime.extend(d_all.iter().copied());
    voters.push(Voter::unweighted(z_prime));

    let committee_size = graph.n - h + 1;
    let election = Election::new(names, voters)
        .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;
    let n_voters = election.num_voters();
    let instance = BriberyInstance::new(
        election,
        p,
        committee_size,
        RuleSpec::KBorda,
        vec![PriceFunction::Unit; n_voters],
        budget,
    )
    .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;

    Ok(CliqueBribery {
        instance,
        budget,
        vertices: vertex_cand,
        marker: false,
    })
}

/// Pre-bribery score audit: every vertex candidate at a common score L and
/// p at exactly L - (h - 1) - B. Skipped for marker instances.
pub fn audit_clique_scores(gen: &CliqueBribery, h: usize) -> Result<(), String> {
    if gen.marker {
        return Ok(());
    }
    let scores = crate::rules::borda_scores(&gen.instance.election);
    let l = scores[gen.vertices[0]];
    for &v in &gen.vertices {
        if scores[v] != l {
            return Err(format!(
                "vertex {} scores {}, expected the common {}",
                gen.instance.election.candidates[v], scores[v], l
            ));
        }
    }
    let expected_p = l - (h as u64 - 1) - gen.budget;
    if scores[gen.instance.preferred] != expected_p {
        return Err(format!(
            "p scores {}, expected L-(h-1)-B = {}",
            scores[gen.instance.preferred], expected_p
        ));
    }
    Ok(())
}
