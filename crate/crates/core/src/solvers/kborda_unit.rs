//! Exact k-Borda solver for unit prices and unit weights.
//!
//! With unit prices the cost of an action equals its number of unit shifts,
//! and each unit shift gives p one Borda point while taking one from the
//! candidate it passes. The solver sweeps total spend S upward: with spend
//! fixed, any candidate scoring at most base(p) + S is harmless, so only
//! crossings of candidates above that line ("threats") matter. The search
//! enumerates, per vote, the threat-crossing prefixes; leftover units are
//! placed deterministically and only add drops. The first S admitting at
//! most k-1 leftover threats is the optimum.
//!
//! Reduction-generated instances (hundreds of candidates, budgets near 100)
//! are far beyond the generic enumeration guards; this search decides them
//! in milliseconds because threat requirements prune almost every spend
//! level outright.

use std::time::Instant;

use super::{Limits, SolverError, SolverReport};
use crate::election::{position, BriberyInstance, ShiftAction};
use crate::rules::{borda_scores, RuleSpec};

struct Search<'a> {
    instance: &'a BriberyInstance,
    /// Candidates above p per vote, nearest to p first.
    above: Vec<Vec<usize>>,
    base: Vec<u64>,
    p_base: u64,
    tolerance: usize,
    node_cap: u64,
}

struct SpendCtx {
    spend: usize,
    /// Required drop per candidate (0 for non-threats).
    req: Vec<u64>,
    threats: Vec<usize>,
    /// menus[v]: ascending crossing depths that end on a threat.
    menus: Vec<Vec<usize>>,
    /// suffix_occ[v][c-slot]: occurrences of threat (by slot) reachable in
    /// votes v.. within depth <= spend.
    suffix_occ: Vec<Vec<u32>>,
    slot_of: Vec<usize>,
}

impl<'a> Search<'a> {
    fn try_spend(&self, spend: usize, nodes: &mut u64) -> Result<Option<Vec<usize>>, SolverError> {
        let m = self.instance.election.num_candidates();
        let line = self.p_base + spend as u64;
        let mut req = vec![0u64; m];
        let mut threats = Vec::new();
        for c in 0..m {
            if c != self.instance.preferred && self.base[c] > line {
                req[c] = self.base[c] - line;
                threats.push(c);
            }
        }
        if threats.len() <= self.tolerance {
            // every remaining threat may be tolerated: pure fill suffices
            return Ok(Some(self.finish(&vec![0; self.above.len()], spend)));
        }

        let mut slot_of = vec![usize::MAX; m];
        for (i, &c) in threats.iter().enumerate() {
            slot_of[c] = i;
        }

        // per-threat cheapest drop costs: crossing depths per occurrence
        let mut depths: Vec<Vec<usize>> = vec![Vec::new(); threats.len()];
        for above in &self.above {
            for (d, &c) in above.iter().enumerate() {
                if slot_of[c] != usize::MAX && d < spend {
                    depths[slot_of[c]].push(d + 1);
                }
            }
        }
        // certain violators: threats that cannot be dropped enough even with
        // the whole spend devoted to them
        let mut certain = 0usize;
        for (i, &c) in threats.iter().enumerate() {
            depths[i].sort_unstable();
            let need = req[c] as usize;
            let possible =
                depths[i].len() >= need && depths[i][..need].iter().sum::<usize>() <= spend;
            if !possible {
                certain += 1;
            }
        }
        if certain > self.tolerance {
            return Ok(None);
        }

        let n = self.above.len();
        let mut menus: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut occ_per_vote: Vec<Vec<u32>> = Vec::with_capacity(n);
        for above in &self.above {
            let mut menu = Vec::new();
            let mut occ = vec![0u32; threats.len()];
            for (d, &c) in above.iter().enumerate() {
                if d >= spend {
                    break;
                }
                if slot_of[c] != usize::MAX {
                    menu.push(d + 1);
                    occ[slot_of[c]] += 1;
                }
            }
            menus.push(menu);
            occ_per_vote.push(occ);
        }
        let mut suffix_occ = vec![vec![0u32; threats.len()]; n + 1];
        for v in (0..n).rev() {
            for i in 0..threats.len() {
                suffix_occ[v][i] = suffix_occ[v + 1][i] + occ_per_vote[v][i];
            }
        }

        let ctx = SpendCtx {
            spend,
            req,
            threats,
            menus,
            suffix_occ,
            slot_of,
        };
        let mut structure = vec![0usize; n];
        let mut drops = vec![0u64; ctx.threats.len()];
        Ok(self
            .dfs(&ctx, 0, 0, &mut structure, &mut drops, nodes)?
            .map(|structure| self.finish(&structure, spend)))
    }

    fn dfs(
        &self,
        ctx: &SpendCtx,
        vote: usize,
        used: usize,
        structure: &mut Vec<usize>,
        drops: &mut Vec<u64>,
        nodes: &mut u64,
    ) -> Result<Option<Vec<usize>>, SolverError> {
        *nodes += 1;
        if *nodes > self.node_cap {
            return Err(SolverError::InstanceTooLarge {
                detail: format!("k-Borda search exceeded {} nodes", self.node_cap),
            });
        }
        // optimistic violator count
        let mut violators = 0usize;
        for (i, &c) in ctx.threats.iter().enumerate() {
            if drops[i] + u64::from(ctx.suffix_occ[vote][i]) < ctx.req[c] {
                violators += 1;
                if violators > self.tolerance {
                    return Ok(None);
                }
            }
        }
        if vote == ctx.menus.len() {
            let action = self.finish(structure, ctx.spend);
            if self.violators_of(&action, ctx.spend) <= self.tolerance {
                return Ok(Some(structure.clone()));
            }
            return Ok(None);
        }
        // deeper crossings first: reach demanding drop patterns sooner
        for mi in (0..=ctx.menus[vote].len()).rev() {
            let depth = if mi == 0 { 0 } else { ctx.menus[vote][mi - 1] };
            if used + depth > ctx.spend {
                continue;
            }
            structure[vote] = depth;
            for &c in &self.above[vote][..depth] {
                if ctx.slot_of[c] != usize::MAX {
                    drops[ctx.slot_of[c]] += 1;
                }
            }
            let found = self.dfs(ctx, vote + 1, used + depth, structure, drops, nodes)?;
            for &c in &self.above[vote][..depth] {
                if ctx.slot_of[c] != usize::MAX {
                    drops[ctx.slot_of[c]] -= 1;
                }
            }
            if found.is_some() {
                return Ok(found);
            }
            structure[vote] = 0;
        }
        Ok(None)
    }

    /// Extends the structural shifts with leftover units in vote order.
    fn finish(&self, structure: &[usize], spend: usize) -> Vec<usize> {
        let mut shifts = structure.to_vec();
        let mut leftover = spend - structure.iter().sum::<usize>();
        for (v, above) in self.above.iter().enumerate() {
            if leftover == 0 {
                break;
            }
            let headroom = above.len() - shifts[v];
            let add = headroom.min(leftover);
            shifts[v] += add;
            leftover -= add;
        }
        shifts
    }

    fn violators_of(&self, shifts: &[usize], spend: usize) -> usize {
        let m = self.instance.election.num_candidates();
        let mut drop = vec![0u64; m];
        for (v, &s) in shifts.iter().enumerate() {
            for &c in &self.above[v][..s] {
                drop[c] += 1;
            }
        }
        let line = self.p_base + spend as u64;
        (0..m)
            .filter(|&c| {
                c != self.instance.preferred && self.base[c] - drop[c].min(self.base[c]) > line
            })
            .count()
    }
}

/// Exact optimum for k-Borda shift bribery with unit prices and unit
/// weights. Sets the optimal flag; infeasible when no spend within budget
/// and shift capacity succeeds.
pub fn solve_kborda_unit(
    instance: &BriberyInstance,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    if !matches!(instance.rule, RuleSpec::KBorda) {
        return Err(SolverError::WrongRule {
            solver: "kborda-unit",
            rule: instance.rule.to_string(),
        });
    }
    if let Some(bad) = instance.prices.iter().find(|p| !p.is_unit()) {
        return Err(SolverError::WrongPriceKind {
            solver: "kborda-unit",
            detail: format!("found {:?}, need unit prices everywhere", bad),
        });
    }
    if instance.election.voters.iter().any(|v| v.weight != 1) {
        return Err(SolverError::RequiresUnitWeights {
            solver: "kborda-unit",
        });
    }

    let p = instance.preferred;
    let above: Vec<Vec<usize>> = instance
        .election
        .voters
        .iter()
        .map(|v| {
            let pos = position(v, p);
            v.order[..pos - 1].iter().rev().copied().collect()
        })
        .collect();
    let capacity: usize = above.iter().map(|a| a.len()).sum();
    let budget = instance.budget.min(capacity as u64) as usize;

    let base = borda_scores(&instance.election);
    let p_base = base[p];
    let search = Search {
        instance,
        above,
        base,
        p_base,
        tolerance: instance.committee_size - 1,
        node_cap: limits.xp_space.saturating_mul(4),
    };
    let mut nodes = 0u64;
    for spend in 0..=budget {
        if let Some(shifts) = search.try_spend(spend, &mut nodes)? {
            return SolverReport::feasible(
                instance,
                ShiftAction::new(shifts),
                true,
                nodes,
                started,
            );
        }
    }
    Ok(SolverReport::infeasible(nodes, started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Election, PriceFunction};
    use crate::solvers::{solve_oracle, Outcome};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn unit_instance(orders: Vec<Vec<usize>>, p: usize, k: usize, budget: u64) -> BriberyInstance {
        let e = Election::from_orders(orders).unwrap();
        let n = e.num_voters();
        BriberyInstance::new(
            e,
            p,
            k,
            RuleSpec::KBorda,
            vec![PriceFunction::Unit; n],
            budget,
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_unit_setups() {
        let e = Election::from_orders(vec![vec![0, 1]]).unwrap();
        let inst = BriberyInstance::new(
            e,
            0,
            1,
            RuleSpec::KBorda,
            vec![PriceFunction::AllOrNothing(1)],
            3,
        )
        .unwrap();
        assert!(matches!(
            solve_kborda_unit(&inst, &Limits::default()),
            Err(SolverError::WrongPriceKind { .. })
        ));
    }

    #[test]
    fn matches_oracle_on_random_unit_instances() {
        let mut rng = StdRng::seed_from_u64(7);
        for trial in 0..800 {
            let m = rng.gen_range(2..=5usize);
            let n = rng.gen_range(1..=4usize);
            let mut orders = Vec::new();
            for _ in 0..n {
                let mut order: Vec<usize> = (0..m).collect();
                for i in (1..m).rev() {
                    let j = rng.gen_range(0..=i);
                    order.swap(i, j);
                }
                orders.push(order);
            }
            let k = rng.gen_range(1..=m);
            let p = rng.gen_range(0..m);
            let budget = rng.gen_range(0..=12);
            let inst = unit_instance(orders, p, k, budget);
            let oracle = solve_oracle(&inst, &Limits::default()).unwrap();
            let fast = solve_kborda_unit(&inst, &Limits::default()).unwrap();
            match (&oracle.outcome, &fast.outcome) {
                (Outcome::Feasible(a), Outcome::Feasible(b)) => {
                    assert_eq!(a.cost, b.cost, "trial {} on {:?}", trial, inst)
                }
                (Outcome::Infeasible, Outcome::Infeasible) => {}
                (a, b) => panic!("trial {}: {:?} vs {:?} on {:?}", trial, a, b, inst),
            }
        }
    }
}
