//! Polynomial exact solver for SNTV and Bloc under arbitrary price functions.
//!
//! Shifting p matters in a vote only when it crosses the approval boundary
//! (position 1 for SNTV, position k for Bloc); the crossing costs the
//! boundary shift, adds the voter's weight to p, and removes it from exactly
//! one candidate: the vote's boundary occupant. The algorithm sweeps over
//! p's final score. For each guessed endscore g it must bring every candidate
//! scoring above g down to at most g, except for up to k-1 of them, while
//! giving p at least g points. Because the usable votes partition by boundary
//! occupant, each candidate has an independent cheapest-drop curve; a small
//! DP over (p-gain, number of spared candidates) composes the curves exactly,
//! which also settles the interplay between score-lowering shifts and p's own
//! gains.

use std::time::Instant;

use super::{Limits, SolverError, SolverReport};
use crate::election::{position, BriberyInstance, ShiftAction};
use crate::rules::{t_approval_scores, RuleSpec};

const INF: u64 = u64::MAX / 4;

/// A usable vote for one boundary candidate: bribing it costs `cost` and
/// moves `weight` points (from the boundary occupant to p).
#[derive(Debug, Clone, Copy)]
struct Item {
    voter: usize,
    cost: u64,
    weight: u64,
}

/// Minimum cost to pick items of total weight >= u, for u = 0..=cap.
/// Returns (curve, chosen-set reconstruction data).
fn drop_curve(items: &[Item], cap: u64) -> Vec<u64> {
    let cap = cap as usize;
    let mut exact = vec![INF; cap + 1];
    exact[0] = 0;
    for it in items {
        let w = (it.weight as usize).min(cap);
        for u in (0..=cap).rev() {
            let from = u.saturating_sub(w);
            if exact[from] < INF {
                exact[u] = exact[u].min(exact[from] + it.cost);
            }
        }
    }
    exact
}

/// Reconstructs one item subset of weight >= u with cost equal to
/// `drop_curve(items, cap)[u]`, via the staged table (one row per item, so
/// each item is taken at most once).
fn reconstruct(items: &[Item], cap: u64, target_u: usize) -> Vec<usize> {
    let cap = cap as usize;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(items.len() + 1);
    let mut row = vec![INF; cap + 1];
    row[0] = 0;
    rows.push(row);
    for it in items {
        let prev = rows.last().unwrap();
        let mut row = prev.clone();
        let w = (it.weight as usize).min(cap);
        for u in 0..=cap {
            let from = u.saturating_sub(w);
            if prev[from] < INF && prev[from] + it.cost < row[u] {
                row[u] = prev[from] + it.cost;
            }
        }
        rows.push(row);
    }
    let mut chosen = Vec::new();
    let mut u = target_u;
    for (idx, it) in items.iter().enumerate().rev() {
        if rows[idx + 1][u] == rows[idx][u] {
            continue;
        }
        chosen.push(it.voter);
        u = u.saturating_sub((it.weight as usize).min(cap));
    }
    debug_assert_eq!(u, 0);
    chosen
}

struct Candidate {
    index: usize,
    items: Vec<Item>,
    /// Required drop at the current guess; 0 means unconstrained.
    required: u64,
}

/// Exact polynomial solver for SNTV/Bloc shift bribery; sets the optimal flag.
pub fn solve_sntv_bloc(
    instance: &BriberyInstance,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    let boundary = match instance.rule {
        RuleSpec::Sntv => 1,
        RuleSpec::Bloc => instance.committee_size,
        _ => {
            return Err(SolverError::WrongRule {
                solver: "poly",
                rule: instance.rule.to_string(),
            })
        }
    };
    let election = &instance.election;
    let scores = t_approval_scores(election, boundary)?;
    let p = instance.preferred;
    let total_weight = election.total_weight();
    if total_weight > limits.score_sweep {
        return Err(SolverError::InstanceTooLarge {
            detail: format!(
                "total weight {} exceeds endscore sweep guard {}",
                total_weight, limits.score_sweep
            ),
        });
    }

    // usable votes grouped by boundary occupant
    let m = election.num_candidates();
    let mut items_by_candidate: Vec<Vec<Item>> = vec![Vec::new(); m];
    for (i, v) in election.voters.iter().enumerate() {
        let pos = position(v, p);
        if pos > boundary {
            let occupant = v.order[boundary - 1];
            let cost = instance.prices[i].eval(pos - boundary);
            items_by_candidate[occupant].push(Item {
                voter: i,
                cost,
                weight: v.weight,
            });
        }
    }

    let spare_cap = instance.committee_size - 1;
    let mut nodes = 0u64;
    let mut best: Option<(u64, Vec<(usize, usize)>)> = None; // cost, per-candidate (cand, u)

    for g in scores[p]..=total_weight {
        nodes += 1;
        let need_gain = (g - scores[p]) as usize;

        let mut cands: Vec<Candidate> = Vec::new();
        let mut forced_spares = 0usize;
        let mut impossible = false;
        for c in 0..m {
            if c == p {
                continue;
            }
            let required = scores[c].saturating_sub(g);
            if required == 0 && items_by_candidate[c].is_empty() {
                continue;
            }
            let available: u64 = items_by_candidate[c].iter().map(|it| it.weight).sum();
            if required > available {
                forced_spares += 1;
                if forced_spares > spare_cap {
                    impossible = true;
                    break;
                }
                // spared for sure; its votes remain usable for p's gain
                cands.push(Candidate {
                    index: c,
                    items: items_by_candidate[c].clone(),
                    required: 0,
                });
            } else {
                cands.push(Candidate {
                    index: c,
                    items: items_by_candidate[c].clone(),
                    required,
                });
            }
        }
        if impossible {
            continue;
        }
        let spare_budget = spare_cap - forced_spares;

        // dp[gain][spares] = min cost; gain capped at need_gain
        let width = spare_budget + 1;
        let mut dp = vec![INF; (need_gain + 1) * width];
        dp[0] = 0;
        let idx = |gain: usize, spares: usize| gain * width + spares;
        // per-candidate choice log for reconstruction: (cand, u, spared)
        let mut choices: Vec<Vec<Option<(usize, bool, usize, usize)>>> = Vec::new();

        for cand in &cands {
            let req = cand.required as usize;
            let cap = (req + need_gain) as u64;
            let curve = drop_curve(&cand.items, cap);
            let mut next = vec![INF; (need_gain + 1) * width];
            let mut log: Vec<Option<(usize, bool, usize, usize)>> =
                vec![None; (need_gain + 1) * width];
            for gain in 0..=need_gain {
                for spares in 0..=spare_budget {
                    let base = dp[idx(gain, spares)];
                    if base >= INF {
                        continue;
                    }
                    // dropped (or unconstrained): pick u >= required
                    for u in req..=(req + need_gain) {
                        let c = curve[u];
                        if c >= INF {
                            break; // curve is nondecreasing and INF stays INF
                        }
                        let ng = (gain + u).min(need_gain);
                        let cell = idx(ng, spares);
                        if base + c < next[cell] {
                            next[cell] = base + c;
                            log[cell] = Some((u, false, gain, spares));
                        }
                    }
                    // spared: only meaningful when a requirement existed
                    if req > 0 && spares < spare_budget {
                        for u in 0..=need_gain {
                            let c = curve[u];
                            if c >= INF {
                                break;
                            }
                            let ng = (gain + u).min(need_gain);
                            let cell = idx(ng, spares + 1);
                            if base + c < next[cell] {
                                next[cell] = base + c;
                                log[cell] = Some((u, true, gain, spares));
                            }
                        }
                    }
                }
            }
            dp = next;
            choices.push(log);
        }

        let mut best_cell: Option<(u64, usize)> = None;
        for spares in 0..=spare_budget {
            let cost = dp[idx(need_gain, spares)];
            if cost <= instance.budget {
                if best_cell.map_or(true, |(c, _)| cost < c) {
                    best_cell = Some((cost, spares));
                }
            }
        }
        if let Some((cost, spares)) = best_cell {
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                // walk the choice log backwards to recover per-candidate u
                let mut picks = Vec::new();
                let mut gain = need_gain;
                let mut sp = spares;
                for (ci, log) in choices.iter().enumerate().rev() {
                    let (u, _spared, pg, ps) =
                        log[idx(gain, sp)].expect("reachable cell has a recorded choice");
                    picks.push((cands[ci].index, u));
                    gain = pg;
                    sp = ps;
                }
                best = Some((cost, picks));
            }
        }
    }

    match best {
        Some((_, picks)) => {
            let mut shifts = vec![0usize; election.num_voters()];
            for (c, u) in picks {
                if u == 0 {
                    continue;
                }
                // min-cost subsets for "weight >= u" are cap-independent once
                // the cap reaches u, so reconstruct against cap = u
                let voters = reconstruct(&items_by_candidate[c], u as u64, u);
                for voter in voters {
                    let pos = position(&election.voters[voter], p);
                    shifts[voter] = pos - boundary;
                }
            }
            SolverReport::feasible(instance, ShiftAction::new(shifts), true, nodes, started)
        }
        None => Ok(SolverReport::infeasible(nodes, started)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Election, PriceFunction, Voter};
    use crate::solvers::{solve_oracle, Outcome};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn top_ranked_everywhere_costs_zero() {
        let e = Election::from_orders(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let inst =
            BriberyInstance::new(e, 0, 1, RuleSpec::Sntv, vec![PriceFunction::Unit; 2], 0).unwrap();
        let report = solve_sntv_bloc(&inst, &Limits::default()).unwrap();
        assert_eq!(report.outcome.cost(), Some(0));
    }

    #[test]
    fn wrong_rule_is_rejected() {
        let e = Election::from_orders(vec![vec![0, 1]]).unwrap();
        let inst =
            BriberyInstance::new(e, 0, 1, RuleSpec::KBorda, vec![PriceFunction::Unit], 1).unwrap();
        assert!(matches!(
            solve_sntv_bloc(&inst, &Limits::default()),
            Err(SolverError::WrongRule { .. })
        ));
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(42);
        for trial in 0..800 {
            let m = rng.gen_range(2..=5usize);
            let n = rng.gen_range(1..=4usize);
            let mut voters = Vec::new();
            for _ in 0..n {
                let mut order: Vec<usize> = (0..m).collect();
                for i in (1..m).rev() {
                    let j = rng.gen_range(0..=i);
                    order.swap(i, j);
                }
                voters.push(Voter::new(order, rng.gen_range(1..=3)));
            }
            let e = Election::new((0..m).map(|i| format!("c{}", i)).collect(), voters).unwrap();
            let prices: Vec<PriceFunction> = (0..n)
                .map(|_| match rng.gen_range(0..3) {
                    0 => PriceFunction::Unit,
                    1 => PriceFunction::AllOrNothing(rng.gen_range(0..=9)),
                    _ => {
                        let mut t = vec![0u64];
                        for _ in 1..m {
                            let last = *t.last().unwrap();
                            t.push(last + rng.gen_range(0..=4));
                        }
                        PriceFunction::Table(t)
                    }
                })
                .collect();
            let k = rng.gen_range(1..=m);
            let rule = if rng.gen_bool(0.5) {
                RuleSpec::Sntv
            } else {
                RuleSpec::Bloc
            };
            let budget = rng.gen_range(0..=15);
            let inst =
                BriberyInstance::new(e, rng.gen_range(0..m), k, rule, prices, budget).unwrap();
            let oracle = solve_oracle(&inst, &Limits::default()).unwrap();
            let poly = solve_sntv_bloc(&inst, &Limits::default()).unwrap();
            match (&oracle.outcome, &poly.outcome) {
                (Outcome::Feasible(a), Outcome::Feasible(b)) => {
                    assert_eq!(
                        a.cost, b.cost,
                        "trial {}: OPT mismatch on {:?}",
                        trial, inst
                    );
                }
                (Outcome::Infeasible, Outcome::Infeasible) => {}
                (a, b) => panic!("trial {}: {:?} vs {:?} on {:?}", trial, a, b, inst),
            }
        }
    }
}
