//! Voter-subset solvers.
//!
//! With all-or-nothing prices on a candidate-monotone rule, any shift in a
//! bribed vote costs the same as shifting to the top, and shifting farther
//! never hurts; with approval-based rules, only crossing the approval
//! boundary changes any score, and a crossing shift is equivalent to landing
//! exactly on the boundary. Either way, trying all voter subsets is an exact
//! search.

use std::time::Instant;

use super::{action_succeeds, SolverError, SolverReport};
use crate::election::{position, BriberyInstance, ShiftAction};

struct SubsetSearch<'a> {
    instance: &'a BriberyInstance,
    /// (voter index, shift distance, cost) for voters whose shift has effect.
    moves: Vec<(usize, usize, u64)>,
    nodes: u64,
    best: Option<(u64, ShiftAction)>,
}

impl<'a> SubsetSearch<'a> {
    fn run(mut self) -> Result<(u64, Option<(u64, ShiftAction)>), SolverError> {
        let n = self.instance.election.num_voters();
        let mut chosen = ShiftAction::zero(n);
        self.dfs(0, 0, &mut chosen)?;
        Ok((self.nodes, self.best))
    }

    fn dfs(
        &mut self,
        idx: usize,
        cost_so_far: u64,
        chosen: &mut ShiftAction,
    ) -> Result<(), SolverError> {
        self.nodes += 1;
        if let Some((best_cost, _)) = &self.best {
            if cost_so_far >= *best_cost {
                return Ok(());
            }
        }
        if idx == self.moves.len() {
            if action_succeeds(self.instance, chosen)? {
                self.best = Some((cost_so_far, chosen.clone()));
            }
            return Ok(());
        }
        let (voter, shift, cost) = self.moves[idx];
        // exclude first: finds cheap successes early for pruning
        self.dfs(idx + 1, cost_so_far, chosen)?;
        if cost_so_far + cost <= self.instance.budget {
            chosen.shifts[voter] = shift;
            self.dfs(idx + 1, cost_so_far + cost, chosen)?;
            chosen.shifts[voter] = 0;
        }
        Ok(())
    }
}

/// Exact solver for all-or-nothing prices on candidate-monotone rules: tries
/// every subset of voters, shifting p to the top of each chosen vote.
pub fn solve_subset_all_or_nothing(
    instance: &BriberyInstance,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    if !instance.rule.is_candidate_monotone() {
        return Err(SolverError::WrongRule {
            solver: "subset-aon",
            rule: instance.rule.to_string(),
        });
    }
    if let Some(bad) = instance.prices.iter().find(|p| !p.is_all_or_nothing()) {
        return Err(SolverError::WrongPriceKind {
            solver: "subset-aon",
            detail: format!("found {:?}, need all-or-nothing everywhere", bad),
        });
    }
    let moves: Vec<(usize, usize, u64)> = instance
        .election
        .voters
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let shift = position(v, instance.preferred) - 1;
            (shift > 0).then(|| (i, shift, instance.prices[i].eval(shift)))
        })
        .collect();
    let (nodes, best) = SubsetSearch {
        instance,
        moves,
        nodes: 0,
        best: None,
    }
    .run()?;
    match best {
        Some((_, action)) => SolverReport::feasible(instance, action, true, nodes, started),
        None => Ok(SolverReport::infeasible(nodes, started)),
    }
}

/// Exact solver for the approval-based rules (Approval-CC, Greedy-Approval-CC,
/// PTAS-CC) under arbitrary prices: tries every subset of voters, shifting p
/// exactly to the approval boundary position in each chosen vote. Returned
/// actions never move p past the boundary.
pub fn solve_subset_approval(instance: &BriberyInstance) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    if !instance.rule.is_approval_based() {
        return Err(SolverError::WrongRule {
            solver: "subset-approval",
            rule: instance.rule.to_string(),
        });
    }
    let m = instance.election.num_candidates();
    let boundary = instance
        .rule
        .approval_boundary(m, instance.committee_size)
        .expect("approval-based rules define a boundary");
    let moves: Vec<(usize, usize, u64)> = instance
        .election
        .voters
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let pos = position(v, instance.preferred);
            (pos > boundary).then(|| {
                let shift = pos - boundary;
                (i, shift, instance.prices[i].eval(shift))
            })
        })
        .collect();
    let (nodes, best) = SubsetSearch {
        instance,
        moves,
        nodes: 0,
        best: None,
    }
    .run()?;
    match best {
        Some((_, action)) => SolverReport::feasible(instance, action, true, nodes, started),
        None => Ok(SolverReport::infeasible(nodes, started)),
    }
}
