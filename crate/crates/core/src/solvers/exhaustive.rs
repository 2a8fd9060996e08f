//! Ground-truth enumeration solvers.
//!
//! `solve_oracle` and `solve_xp_voters` search the same space (every valid
//! per-voter shift vector) with independent enumeration strategies and
//! guards; tests rely on the two agreeing exactly. `solve_xp_shifts` bounds
//! the total number of unit shifts instead.

use std::time::Instant;

use super::{action_succeeds, checked_pow, compositions, Limits, SolverError, SolverReport};
use crate::election::{BriberyInstance, ShiftAction};

struct Best {
    cost: u64,
    action: ShiftAction,
}

fn replace_if_better(best: &mut Option<Best>, cost: u64, shifts: &[usize]) {
    let better = match best {
        None => true,
        Some(b) => cost < b.cost || (cost == b.cost && shifts < b.action.shifts.as_slice()),
    };
    if better {
        *best = Some(Best {
            cost,
            action: ShiftAction::new(shifts.to_vec()),
        });
    }
}

/// Exhaustive minimum-cost search over all valid shift actions with cost
/// within budget. Depth-first in lexicographic action order with budget
/// pruning (sound because prices are nondecreasing). Ties among minimum-cost
/// successes resolve to the lexicographically smallest action.
pub fn solve_oracle(
    instance: &BriberyInstance,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    let max_shifts = instance.max_shifts();
    let space: Option<u64> = max_shifts
        .iter()
        .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64 + 1));
    match space {
        Some(sz) if sz <= limits.oracle_actions => {}
        _ => {
            return Err(SolverError::InstanceTooLarge {
                detail: format!(
                    "oracle action space {} exceeds guard {}",
                    space.map_or("overflow".to_string(), |s| s.to_string()),
                    limits.oracle_actions
                ),
            })
        }
    }

    let n = instance.election.num_voters();
    let mut shifts = vec![0usize; n];
    let mut nodes = 0u64;
    let mut best: Option<Best> = None;

    fn dfs(
        instance: &BriberyInstance,
        max_shifts: &[usize],
        shifts: &mut Vec<usize>,
        voter: usize,
        cost_so_far: u64,
        nodes: &mut u64,
        best: &mut Option<Best>,
    ) -> Result<(), SolverError> {
        if voter == shifts.len() {
            *nodes += 1;
            if let Some(b) = best {
                if cost_so_far > b.cost {
                    return Ok(());
                }
            }
            let action = ShiftAction::new(shifts.clone());
            if action_succeeds(instance, &action)? {
                replace_if_better(best, cost_so_far, shifts);
            }
            return Ok(());
        }
        for s in 0..=max_shifts[voter] {
            let cost = cost_so_far + instance.prices[voter].eval(s);
            if cost > instance.budget {
                // prices are nondecreasing: larger shifts cannot get cheaper
                break;
            }
            shifts[voter] = s;
            dfs(instance, max_shifts, shifts, voter + 1, cost, nodes, best)?;
        }
        shifts[voter] = 0;
        Ok(())
    }

    dfs(
        instance,
        &max_shifts,
        &mut shifts,
        0,
        0,
        &mut nodes,
        &mut best,
    )?;
    match best {
        Some(b) => SolverReport::feasible(instance, b.action, true, nodes, started),
        None => Ok(SolverReport::infeasible(nodes, started)),
    }
}

/// XP enumeration over per-voter shift amounts (the m^n grid), guarded on
/// m^n. Identical result contract to `solve_oracle`; the enumeration runs as
/// an odometer with the first voter cycling fastest and without interior
/// budget pruning, so the two searches are independent.
pub fn solve_xp_voters(
    instance: &BriberyInstance,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    let n = instance.election.num_voters();
    let m = instance.election.num_candidates() as u64;
    match checked_pow(m, n as u32) {
        Some(sz) if sz <= limits.xp_space => {}
        _ => {
            return Err(SolverError::InstanceTooLarge {
                detail: format!("m^n grid exceeds guard {}", limits.xp_space),
            })
        }
    }

    let max_shifts = instance.max_shifts();
    let mut shifts = vec![0usize; n];
    let mut nodes = 0u64;
    let mut best: Option<Best> = None;
    loop {
        nodes += 1;
        let cost = instance
            .prices
            .iter()
            .zip(&shifts)
            .map(|(pf, &s)| pf.eval(s))
            .sum::<u64>();
        if cost <= instance.budget {
            let within_best = best.as_ref().map_or(true, |b| cost <= b.cost);
            if within_best {
                let action = ShiftAction::new(shifts.clone());
                if action_succeeds(instance, &action)? {
                    replace_if_better(&mut best, cost, &shifts);
                }
            }
        }
        // odometer: voter 0 cycles fastest
        let mut i = 0;
        loop {
            if i == n {
                let report = match best {
                    Some(b) => SolverReport::feasible(instance, b.action, true, nodes, started)?,
                    None => SolverReport::infeasible(nodes, started),
                };
                return Ok(report);
            }
            if shifts[i] < max_shifts[i] {
                shifts[i] += 1;
                break;
            }
            shifts[i] = 0;
            i += 1;
        }
    }
}

/// XP enumeration over distributions of at most `s_max` unit shifts among the
/// voters, guarded on the composition count C(n + s_max, s_max). Feasible
/// means the cheapest successful action with #s <= s_max and cost within
/// budget; infeasible means no such action exists under both bounds.
pub fn solve_xp_shifts(
    instance: &BriberyInstance,
    s_max: u64,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    let n = instance.election.num_voters();
    match compositions(n as u64, s_max) {
        Some(sz) if sz <= limits.xp_space => {}
        _ => {
            return Err(SolverError::InstanceTooLarge {
                detail: format!(
                    "C(n + s, s) composition space exceeds guard {}",
                    limits.xp_space
                ),
            })
        }
    }

    let max_shifts = instance.max_shifts();
    let mut shifts = vec![0usize; n];
    let mut nodes = 0u64;
    let mut best: Option<Best> = None;

    fn dfs(
        instance: &BriberyInstance,
        max_shifts: &[usize],
        shifts: &mut Vec<usize>,
        voter: usize,
        units_left: u64,
        cost_so_far: u64,
        nodes: &mut u64,
        best: &mut Option<Best>,
    ) -> Result<(), SolverError> {
        if voter == shifts.len() {
            *nodes += 1;
            let within_best = best.as_ref().map_or(true, |b| cost_so_far <= b.cost);
            if within_best {
                let action = ShiftAction::new(shifts.clone());
                if action_succeeds(instance, &action)? {
                    replace_if_better(best, cost_so_far, shifts);
                }
            }
            return Ok(());
        }
        let cap = (max_shifts[voter] as u64).min(units_left) as usize;
        for s in 0..=cap {
            let cost = cost_so_far + instance.prices[voter].eval(s);
            if cost > instance.budget {
                break;
            }
            shifts[voter] = s;
            dfs(
                instance,
                max_shifts,
                shifts,
                voter + 1,
                units_left - s as u64,
                cost,
                nodes,
                best,
            )?;
        }
        shifts[voter] = 0;
        Ok(())
    }

    dfs(
        instance,
        &max_shifts,
        &mut shifts,
        0,
        s_max,
        0,
        &mut nodes,
        &mut best,
    )?;
    match best {
        Some(b) => SolverReport::feasible(instance, b.action, true, nodes, started),
        None => Ok(SolverReport::infeasible(nodes, started)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Election, PriceFunction};
    use crate::rules::RuleSpec;

    fn instance(
        orders: Vec<Vec<usize>>,
        p: usize,
        k: usize,
        rule: RuleSpec,
        budget: u64,
    ) -> BriberyInstance {
        let election = Election::from_orders(orders).unwrap();
        let n = election.num_voters();
        BriberyInstance::new(election, p, k, rule, vec![PriceFunction::Unit; n], budget).unwrap()
    }

    #[test]
    fn already_member_costs_zero() {
        let inst = instance(vec![vec![0, 1, 2], vec![0, 2, 1]], 0, 1, RuleSpec::Sntv, 5);
        let report = solve_oracle(&inst, &Limits::default()).unwrap();
        match report.outcome {
            crate::solvers::Outcome::Feasible(sol) => {
                assert_eq!(sol.cost, 0);
                assert!(sol.action.is_zero());
                assert!(sol.optimal);
            }
            other => panic!("expected feasible, got {:?}", other),
        }
    }

    #[test]
    fn zero_budget_nonmember_is_infeasible() {
        let inst = instance(vec![vec![1, 0, 2], vec![1, 2, 0]], 0, 1, RuleSpec::Sntv, 0);
        let report = solve_oracle(&inst, &Limits::default()).unwrap();
        assert_eq!(report.outcome, crate::solvers::Outcome::Infeasible);
    }

    #[test]
    fn oracle_and_xp_voters_agree() {
        // double-enumeration self-check on a small SNTV instance
        let inst = instance(vec![vec![1, 0, 2], vec![2, 1, 0]], 0, 1, RuleSpec::Sntv, 4);
        let a = solve_oracle(&inst, &Limits::default()).unwrap();
        let b = solve_xp_voters(&inst, &Limits::default()).unwrap();
        match (&a.outcome, &b.outcome) {
            (crate::solvers::Outcome::Feasible(x), crate::solvers::Outcome::Feasible(y)) => {
                assert_eq!(x.cost, y.cost);
                assert_eq!(x.action, y.action);
            }
            (x, y) => assert_eq!(x, y),
        }
    }

    #[test]
    fn xp_shifts_zero_budgeted_by_membership() {
        let member = instance(vec![vec![0, 1, 2]], 0, 1, RuleSpec::Sntv, 3);
        let report = solve_xp_shifts(&member, 0, &Limits::default()).unwrap();
        assert!(report.outcome.is_feasible());
        let non = instance(vec![vec![1, 0, 2]], 0, 1, RuleSpec::Sntv, 3);
        let report = solve_xp_shifts(&non, 0, &Limits::default()).unwrap();
        assert_eq!(report.outcome, crate::solvers::Outcome::Infeasible);
    }

    #[test]
    fn xp_shifts_full_space_matches_oracle() {
        let inst = instance(vec![vec![1, 2, 0], vec![2, 1, 0]], 0, 2, RuleSpec::Bloc, 3);
        let full: u64 = inst.max_shifts().iter().map(|&s| s as u64).sum();
        let a = solve_oracle(&inst, &Limits::default()).unwrap();
        let b = solve_xp_shifts(&inst, full, &Limits::default()).unwrap();
        assert_eq!(a.outcome.cost(), b.outcome.cost());
        assert_eq!(a.outcome.is_feasible(), b.outcome.is_feasible());
    }

    #[test]
    fn guard_trips_on_oversized() {
        let inst = instance(vec![vec![1, 0, 2], vec![1, 2, 0]], 0, 1, RuleSpec::Sntv, 4);
        let tiny = Limits {
            oracle_actions: 1,
            xp_space: 1,
            ..Limits::default()
        };
        assert!(matches!(
            solve_oracle(&inst, &tiny),
            Err(SolverError::InstanceTooLarge { .. })
        ));
        assert!(matches!(
            solve_xp_voters(&inst, &tiny),
            Err(SolverError::InstanceTooLarge { .. })
        ));
    }
}
