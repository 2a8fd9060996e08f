//! Greedy-Approval-CC bribery instances from set cover.
//!
//! Every element u gets a candidate pair c-(u)/c+(u), every set S a pair
//! c-(S)/c+(S); p' is p's direct rival. Each voter approves its candidates
//! plus private dummies padding the approval set to exactly t; identical
//! auxiliary voters are aggregated into one weighted record whose dummies
//! stay private to the block. Only the per-set voters are bribable (cost 1
//! flips their approval from c-(S) to p); everywhere else p sits more than
//! budget-many positions below the approval boundary. Committee size is
//! |S| + |U| + 1 and the budget is the cover size h.
//!
//! Universe elements are indexed in order of decreasing cover count before
//! building: the auxiliary counts s^4 r^4 - i only dominate cover-count
//! variation under that ordering, and it is what makes the unbribed join
//! order c-(S_1) ... c-(S_s), c-(u_1) ... c-(u_r), p' hold for every input.

use super::{ReductionError, SetCoverInput};
use crate::election::{BriberyInstance, Election, PriceFunction, Voter};
use crate::rules::{greedy_cc, RuleSpec, Scoring};

#[derive(Debug, Clone)]
pub struct SetCoverBribery {
    pub instance: BriberyInstance,
    pub budget: u64,
    /// Candidate indices in the expected unbribed join order:
    /// c-(S_1..s), c-(u_1..r), p'.
    pub expected_join_order: Vec<usize>,
    pub p_prime: usize,
    /// element index used here -> element index of the input
    pub relabel: Vec<usize>,
    /// s = r = 1 instances cannot realize the join-order separation: the
    /// auxiliary counts degenerate to 0/1 and p' outruns the element rounds.
    pub degenerate: bool,
    /// True when the generator fell back to the canonical infeasible marker
    /// (some element lies in no set, so no cover can exist and the
    /// construction's balance counts would go negative).
    pub marker: bool,
    pub approval_t: usize,
}

/// Canonical infeasible marker: p is never approved and the budget is zero.
fn marker_instance(t: usize) -> SetCoverBribery {
    let names: Vec<String> = vec!["rival".into(), "d1".into(), "d2".into(), "p".into()];
    let election = Election::new(names, vec![Voter::unweighted(vec![0, 1, 2, 3])]).unwrap();
    let instance = BriberyInstance::new(
        election,
        3,
        1,
        RuleSpec::GreedyApprovalCc { t: t.min(3) },
        vec![PriceFunction::Unit],
        0,
    )
    .unwrap();
    SetCoverBribery {
        instance,
        budget: 0,
        expected_join_order: vec![],
        p_prime: 0,
        relabel: vec![],
        degenerate: false,
        marker: true,
        approval_t: t.min(3),
    }
}

struct VoterSpec {
    /// Approved important candidates (roster indices), ascending.
    approved: Vec<usize>,
    /// Candidate forced to the boundary position t (last approved slot).
    boundary: Option<usize>,
    weight: u64,
    /// Bribable voters place p right below the boundary; others bury it.
    bribable: bool,
}

pub fn gen_greedy_approval_cc_from_setcover(
    input: &SetCoverInput,
    t: usize,
) -> Result<SetCoverBribery, ReductionError> {
    let s = input.sets.len();
    let r = input.universe;
    let h = input.target;
    if t < 3 {
        return Err(ReductionError::Precondition(
            "approval threshold t must be at least 3".into(),
        ));
    }
    if s == 0 || r == 0 {
        return Err(ReductionError::Precondition(
            "need at least one set and one element".into(),
        ));
    }
    if s > 3 || r > 3 {
        return Err(ReductionError::TooLarge(
            "generator materializes |S|^5 |U|^5 voters; limited to |S|, |U| <= 3".into(),
        ));
    }
    if h == 0 || h > s {
        return Err(ReductionError::Precondition(format!(
            "cover size {} outside 1..={}",
            h, s
        )));
    }

    // an uncovered element makes the answer trivially negative, and the
    // construction's per-element balance voters would need negative counts
    let cover_of = |u: usize| input.sets.iter().filter(|set| set.contains(&u)).count();
    if (0..r).any(|u| cover_of(u) == 0) {
        return Ok(marker_instance(t));
    }
    // relabel elements by decreasing cover count, ties by input order
    let mut relabel: Vec<usize> = (0..r).collect();
    relabel.sort_by_key(|&u| (std::cmp::Reverse(cover_of(u)), u));
    let cover: Vec<u64> = relabel.iter().map(|&u| cover_of(u) as u64).collect();
    // membership under the new labels: contains[j][i] = u_i in S_j
    let contains: Vec<Vec<bool>> = (0..s)
        .map(|j| {
            (0..r)
                .map(|i| input.sets[j].contains(&relabel[i]))
                .collect()
        })
        .collect();

    // important candidates
    let mut names: Vec<String> = Vec::new();
    let c_minus_set: Vec<usize> = (0..s)
        .map(|j| {
            names.push(format!("cms{}", j + 1));
            names.len() - 1
        })
        .collect();
    let c_minus_elem: Vec<usize> = (0..r)
        .map(|i| {
            names.push(format!("cmu{}", i + 1));
            names.len() - 1
        })
        .collect();
    names.push("pp".into());
    let p_prime = names.len() - 1;
    names.push("p".into());
    let p = names.len() - 1;
    let c_plus_set: Vec<usize> = (0..s)
        .map(|j| {
            names.push(format!("cps{}", j + 1));
            names.len() - 1
        })
        .collect();
    let c_plus_elem: Vec<usize> = (0..r)
        .map(|i| {
            names.push(format!("cpu{}", i + 1));
            names.len() - 1
        })
        .collect();

    let s5r5 = (s as u64).pow(5) * (r as u64).pow(5);
    let s4r4 = (s as u64).pow(4) * (r as u64).pow(4);
    let s2r2 = (s as u64).pow(2) * (r as u64).pow(2);

    let mut specs: Vec<VoterSpec> = Vec::new();
    // bribable set voters: approve c-(S_j) at the boundary
    for j in 0..s {
        specs.push(VoterSpec {
            approved: vec![c_minus_set[j]],
            boundary: Some(c_minus_set[j]),
            weight: 1,
            bribable: true,
        });
    }
    // set-element voters: approve c+(S_j), plus c-(u_i) when u_i in S_j
    for j in 0..s {
        for i in 0..r {
            let mut approved = vec![c_plus_set[j]];
            if contains[j][i] {
                approved.push(c_minus_elem[i]);
            }
            approved.sort_unstable();
            specs.push(VoterSpec {
                approved,
                boundary: None,
                weight: 1,
                bribable: false,
            });
        }
    }
    // element voters: approve p' and c+(u_i)
    for i in 0..r {
        let mut approved = vec![p_prime, c_plus_elem[i]];
        approved.sort_unstable();
        specs.push(VoterSpec {
            approved,
            boundary: None,
            weight: 1,
            bribable: false,
        });
    }
    // auxiliary blocks, aggregated by weight
    for j in 0..s {
        specs.push(VoterSpec {
            approved: vec![c_minus_set[j], c_plus_set[j]],
            boundary: None,
            weight: s5r5 - (j as u64 + 1),
            bribable: false,
        });
        if r >= 2 {
            specs.push(VoterSpec {
                approved: vec![c_minus_set[j]],
                boundary: None,
                weight: r as u64 - 1,
                bribable: false,
            });
        }
    }
    for i in 0..r {
        specs.push(VoterSpec {
            approved: vec![c_minus_elem[i], c_plus_elem[i]],
            boundary: None,
            weight: s4r4 - (i as u64 + 1),
            bribable: false,
        });
        if cover[i] >= 2 {
            specs.push(VoterSpec {
                approved: vec![c_plus_elem[i]],
                boundary: None,
                weight: cover[i] - 1,
                bribable: false,
            });
        }
    }
    specs.push(VoterSpec {
        approved: vec![p_prime, p],
        boundary: None,
        weight: s2r2,
        bribable: false,
    });
    if h >= 2 {
        specs.push(VoterSpec {
            approved: vec![p_prime],
            boundary: None,
            weight: h as u64 - 1,
            bribable: false,
        });
    }
    // drop zero-weight blocks (s^5 r^5 - j can reach 0 only when s = r = 1
    // and j = 1, etc.)
    specs.retain(|sp| sp.weight > 0);

    // one private dummy set per voter record, padding approvals to t
    let mut dummies_of: Vec<Vec<usize>> = Vec::with_capacity(specs.len());
    for sp in &specs {
        let need = t - sp.approved.len();
        let mut mine = Vec::with_capacity(need);
        for _ in 0..need {
            names.push(format!("d{}", names.len()));
            mine.push(names.len() - 1);
        }
        dummies_of.push(mine);
    }
    let m = names.len();
    let budget = h as u64;

    let mut voters = Vec::with_capacity(specs.len());
    for (idx, sp) in specs.iter().enumerate() {
        let mut ballot = Vec::with_capacity(m);
        match sp.boundary {
            Some(boundary) => {
                // dummies first, the boundary candidate exactly at position t
                ballot.extend(dummies_of[idx].iter().copied());
                for &c in &sp.approved {
                    if c != boundary {
                        ballot.push(c);
                    }
                }
                ballot.push(boundary);
            }
            None => {
                ballot.extend(sp.approved.iter().copied());
                ballot.extend(dummies_of[idx].iter().copied());
            }
        }
        debug_assert_eq!(ballot.len(), t);
        let approves_p = ballot.contains(&p);
        let rest: Vec<usize> = (0..m).filter(|c| !ballot.contains(c) && *c != p).collect();
        if approves_p {
            ballot.extend(rest);
        } else if sp.bribable {
            // p directly below the boundary: one unit shift flips the vote
            ballot.push(p);
            ballot.extend(rest);
        } else {
            // p buried more than budget-many positions below the boundary
            let pad = budget as usize + 1;
            ballot.extend(rest[..pad].iter().copied());
            ballot.push(p);
            ballot.extend(rest[pad..].iter().copied());
        }
        voters.push(Voter::new(ballot, sp.weight));
    }

    let election = Election::new(names, voters)
        .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;
    let n_voters = election.num_voters();
    let committee_size = s + r + 1;
    let instance = BriberyInstance::new(
        election,
        p,
        committee_size,
        RuleSpec::GreedyApprovalCc { t },
        vec![PriceFunction::Unit; n_voters],
        budget,
    )
    .map_err(|e| ReductionError::Precondition(format!("internal: {}", e)))?;

    let mut expected_join_order: Vec<usize> = Vec::new();
    expected_join_order.extend(c_minus_set.iter().copied());
    expected_join_order.extend(c_minus_elem.iter().copied());
    expected_join_order.push(p_prime);

    Ok(SetCoverBribery {
        instance,
        budget,
        expected_join_order,
        p_prime,
        relabel,
        degenerate: s == 1 && r == 1,
        marker: false,
        approval_t: t,
    })
}

/// Unbribed join-order audit: the greedy run must pick
/// c-(S_1..s), c-(u_1..r), p' in exactly that order. Degenerate s = r = 1
/// inputs are exempt (the stated auxiliary counts vanish there and p'
/// overtakes the element round; feasibility is unaffected).
pub fn audit_setcover_join_order(gen: &SetCoverBribery) -> Result<(), String> {
    if gen.degenerate || gen.marker {
        return Ok(());
    }
    let rounds = greedy_cc(
        &gen.instance.election,
        gen.instance.committee_size,
        Scoring::Approval { t: gen.approval_t },
        None,
    )
    .map_err(|e| e.to_string())?;
    if rounds != gen.expected_join_order {
        let names: Vec<&str> = rounds
            .iter()
            .map(|&c| gen.instance.election.candidates[c].as_str())
            .collect();
        return Err(format!("unexpected join order {:?}", names));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::has_set_cover;
    use crate::solvers::solve_subset_approval;

    #[test]
    fn singleton_cover_is_feasible() {
        let input = SetCoverInput::new(1, vec![vec![0]], 1).unwrap();
        let gen = gen_greedy_approval_cc_from_setcover(&input, 3).unwrap();
        assert!(gen.degenerate);
        assert!(has_set_cover(&input).unwrap());
        let report = solve_subset_approval(&gen.instance).unwrap();
        assert!(report.outcome.is_feasible());
        // small enough for the raw oracle to confirm the subset solver
        let limits = crate::solvers::Limits::default();
        let oracle = crate::solvers::solve_oracle(&gen.instance, &limits).unwrap();
        assert!(oracle.outcome.is_feasible());
        assert_eq!(oracle.outcome.cost(), report.outcome.cost());
    }

    #[test]
    fn uncovered_element_yields_marker() {
        let input = SetCoverInput::new(2, vec![vec![0]], 1).unwrap();
        let gen = gen_greedy_approval_cc_from_setcover(&input, 3).unwrap();
        assert!(gen.marker);
        assert!(!has_set_cover(&input).unwrap());
        let report = solve_subset_approval(&gen.instance).unwrap();
        assert!(!report.outcome.is_feasible());
    }

    #[test]
    fn two_singletons_cannot_cover_with_one() {
        let input = SetCoverInput::new(2, vec![vec![0], vec![1]], 1).unwrap();
        let gen = gen_greedy_approval_cc_from_setcover(&input, 3).unwrap();
        audit_setcover_join_order(&gen).unwrap();
        assert!(!has_set_cover(&input).unwrap());
        let report = solve_subset_approval(&gen.instance).unwrap();
        assert!(!report.outcome.is_feasible());
    }

    #[test]
    fn wider_approval_thresholds_work() {
        // t = 4 pads every voter with one more dummy; join order and
        // feasibility are unchanged
        let input = SetCoverInput::new(2, vec![vec![0], vec![0, 1]], 1).unwrap();
        let gen = gen_greedy_approval_cc_from_setcover(&input, 4).unwrap();
        assert_eq!(gen.approval_t, 4);
        audit_setcover_join_order(&gen).unwrap();
        assert!(has_set_cover(&input).unwrap());
        let report = solve_subset_approval(&gen.instance).unwrap();
        assert!(report.outcome.is_feasible());
        assert_eq!(report.outcome.cost(), Some(1));
    }

    #[test]
    fn join_order_holds_with_uneven_covers() {
        // u2 sits in three sets, u1 in one: without the cover-descending
        // relabeling the element rounds would come out of order
        let input = SetCoverInput::new(3, vec![vec![2], vec![1, 2], vec![0, 1, 2]], 2).unwrap();
        let gen = gen_greedy_approval_cc_from_setcover(&input, 3).unwrap();
        audit_setcover_join_order(&gen).unwrap();
    }

    #[test]
    fn preconditions() {
        let input = SetCoverInput::new(1, vec![vec![0]], 1).unwrap();
        assert!(gen_greedy_approval_cc_from_setcover(&input, 2).is_err());
        let big = SetCoverInput::new(4, vec![vec![0], vec![1], vec![2], vec![3]], 1);
        assert!(big.is_ok());
        assert!(gen_greedy_approval_cc_from_setcover(&big.unwrap(), 3).is_err());
    }
}
