//! FPT approximation scheme for candidate-monotone rules.
//!
//! For each voter the search considers only shifts that sit at geometric
//! price thresholds: the largest shift costing at most floor((1+eps)^j),
//! plus the zero-cost maximum and the full shift. Any shift action then has
//! a pointwise-larger menu action costing at most (1+eps) times as much, and
//! candidate monotonicity makes pointwise-larger actions at least as
//! successful. The returned action may exceed the budget; its contract is
//! cost <= (1+eps) * OPT whenever a successful action exists at all.

use std::str::FromStr;
use std::time::Instant;

use super::{action_succeeds, Limits, SolverError, SolverReport};
use crate::election::{BriberyInstance, ShiftAction};

/// A positive rational approximation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon {
    pub num: u64,
    pub den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Option<Epsilon> {
        (num > 0 && den > 0).then_some(Epsilon { num, den })
    }

    /// Exact check of cost <= (1 + eps) * opt in integer arithmetic.
    pub fn bounds(&self, cost: u64, opt: u64) -> bool {
        (cost as u128) * (self.den as u128) <= (opt as u128) * ((self.den + self.num) as u128)
    }
}

impl FromStr for Epsilon {
    type Err = String;

    /// Accepts "1/4", "0.25", "1", "2.5".
    fn from_str(s: &str) -> Result<Epsilon, String> {
        let bad = || format!("invalid epsilon {:?}", s);
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| bad())?;
            let den: u64 = d.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(num, den).ok_or_else(bad);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let num = int * den + frac.parse::<u64>().map_err(|_| bad())?;
            return Epsilon::new(num, den).ok_or_else(bad);
        }
        let num: u64 = s.trim().parse().map_err(|_| bad())?;
        Epsilon::new(num, 1).ok_or_else(bad)
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Geometric price thresholds: t_0 = 1, t_{j+1} = floor((t_j + 1)(1+eps)).
/// For any integer cost c >= 1 the smallest threshold >= c is at most
/// (1+eps) * c: if t_j is that threshold then t_{j-1} <= c - 1 and
/// t_j <= (t_{j-1} + 1)(1+eps) <= (1+eps) * c.
fn thresholds(eps: &Epsilon, stop: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t: u64 = 1;
    loop {
        out.push(t);
        if t >= stop {
            return out;
        }
        let next = (t as u128 + 1) * (eps.den + eps.num) as u128 / eps.den as u128;
        t = next.min(u64::MAX as u128) as u64;
    }
}

/// Per-voter shift menu: 0, the largest free shift, the largest shift at
/// each price threshold, and the maximal shift.
fn menu(instance: &BriberyInstance, voter: usize, max_shift: usize, eps: &Epsilon) -> Vec<usize> {
    let price = &instance.prices[voter];
    let max_price = price.eval(max_shift);
    let mut shifts = vec![0usize, max_shift];
    // largest zero-cost shift
    let mut s = 0;
    while s < max_shift && price.eval(s + 1) == 0 {
        s += 1;
    }
    shifts.push(s);
    for t in thresholds(eps, max_price) {
        // prices are nondecreasing: scan for the largest shift costing <= t
        let mut best = 0usize;
        for s in 0..=max_shift {
            if price.eval(s) <= t {
                best = s;
            } else {
                break;
            }
        }
        shifts.push(best);
    }
    shifts.sort_unstable();
    shifts.dedup();
    shifts
}

/// Approximation scheme: explores the menu grid and returns the cheapest
/// combination that makes p a member (ignoring the budget; see module docs).
/// Infeasible only when even the maximal action fails, which is exact for
/// candidate-monotone rules. The optimal flag is never set.
pub fn solve_fpt_as(
    instance: &BriberyInstance,
    eps: &Epsilon,
    limits: &Limits,
) -> Result<SolverReport, SolverError> {
    let started = Instant::now();
    if !instance.rule.is_candidate_monotone() {
        return Err(SolverError::WrongRule {
            solver: "fptas",
            rule: instance.rule.to_string(),
        });
    }
    let max_shifts = instance.max_shifts();
    let menus: Vec<Vec<usize>> = (0..instance.election.num_voters())
        .map(|v| menu(instance, v, max_shifts[v], eps))
        .collect();
    let space: Option<u64> = menus
        .iter()
        .try_fold(1u64, |acc, m| acc.checked_mul(m.len() as u64));
    match space {
        Some(sz) if sz <= limits.xp_space => {}
        _ => {
            return Err(SolverError::InstanceTooLarge {
                detail: format!("menu grid exceeds guard {}", limits.xp_space),
            })
        }
    }

    let n = menus.len();
    let mut pick = vec![0usize; n];
    let mut nodes = 0u64;
    let mut best: Option<(u64, ShiftAction)> = None;
    loop {
        nodes += 1;
        let shifts: Vec<usize> = (0..n).map(|v| menus[v][pick[v]]).collect();
        let action = ShiftAction::new(shifts);
        let cost = instance.action_cost(&action);
        if best.as_ref().map_or(true, |(c, _)| cost < *c) && action_succeeds(instance, &action)? {
            best = Some((cost, action));
        }
        let mut i = 0;
        loop {
            if i == n {
                return match best {
                    Some((_, action)) => {
                        SolverReport::feasible_over_budget(instance, action, false, nodes, started)
                    }
                    None => Ok(SolverReport::infeasible(nodes, started)),
                };
            }
            if pick[i] + 1 < menus[i].len() {
                pick[i] += 1;
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Election, PriceFunction};
    use crate::rules::RuleSpec;
    use crate::solvers::{solve_oracle, Outcome};

    #[test]
    fn epsilon_parsing() {
        assert_eq!(
            "1/4".parse::<Epsilon>().unwrap(),
            Epsilon { num: 1, den: 4 }
        );
        assert_eq!(
            "0.25".parse::<Epsilon>().unwrap(),
            Epsilon { num: 25, den: 100 }
        );
        assert_eq!("1".parse::<Epsilon>().unwrap(), Epsilon { num: 1, den: 1 });
        assert!("0".parse::<Epsilon>().is_err());
        assert!("-1".parse::<Epsilon>().is_err());
        assert!("x".parse::<Epsilon>().is_err());
    }

    #[test]
    fn threshold_sequence_covers_every_cost() {
        // for every c in 1..=stop the smallest threshold >= c is <= (1+eps)c
        for eps in [
            Epsilon { num: 1, den: 4 },
            Epsilon { num: 1, den: 2 },
            Epsilon { num: 3, den: 1 },
        ] {
            let stop = 10_000u64;
            let ts = thresholds(&eps, stop);
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
            for c in 1..=stop {
                let t = *ts.iter().find(|&&t| t >= c).unwrap();
                assert!(
                    (t as u128) * eps.den as u128 <= (c as u128) * (eps.den + eps.num) as u128,
                    "eps {:?} c {} t {}",
                    eps,
                    c,
                    t
                );
            }
        }
    }

    #[test]
    fn unit_prices_feasible_whenever_oracle_is() {
        let e = Election::from_orders(vec![vec![1, 0, 2], vec![2, 1, 0]]).unwrap();
        let inst = BriberyInstance::new(e, 0, 1, RuleSpec::KBorda, vec![PriceFunction::Unit; 2], 3)
            .unwrap();
        let eps = Epsilon { num: 1, den: 2 };
        let oracle = solve_oracle(&inst, &Limits::default()).unwrap();
        let approx = solve_fpt_as(&inst, &eps, &Limits::default()).unwrap();
        if oracle.outcome.is_feasible() {
            match (&oracle.outcome, &approx.outcome) {
                (Outcome::Feasible(opt), Outcome::Feasible(found)) => {
                    assert!(eps.bounds(found.cost, opt.cost));
                    assert!(!found.optimal);
                }
                _ => panic!("approx must be feasible"),
            }
        }
    }

    #[test]
    fn huge_epsilon_degenerates_but_stays_sound() {
        let e = Election::from_orders(vec![vec![1, 0, 2], vec![2, 1, 0]]).unwrap();
        let inst = BriberyInstance::new(
            e,
            0,
            1,
            RuleSpec::KBorda,
            vec![PriceFunction::Table(vec![0, 2, 5]), PriceFunction::Unit],
            9,
        )
        .unwrap();
        let eps = Epsilon {
            num: 1_000_000,
            den: 1,
        };
        let report = solve_fpt_as(&inst, &eps, &Limits::default()).unwrap();
        assert!(report.outcome.is_feasible());
    }

    #[test]
    fn plateau_tables_keep_the_bound() {
        // table (0,1,1,9): the cost-1 plateau must be usable at its far end
        let e = Election::from_orders(vec![vec![1, 2, 0, 3]]).unwrap();
        let inst = BriberyInstance::new(
            e,
            0,
            1,
            RuleSpec::KBorda,
            vec![PriceFunction::Table(vec![0, 1, 1, 9])],
            9,
        )
        .unwrap();
        let eps = Epsilon { num: 1, den: 2 };
        let oracle = solve_oracle(&inst, &Limits::default()).unwrap();
        let approx = solve_fpt_as(&inst, &eps, &Limits::default()).unwrap();
        let opt = oracle.outcome.cost().unwrap();
        let found = approx.outcome.cost().unwrap();
        assert!(eps.bounds(found, opt), "found {} vs opt {}", found, opt);
    }

    #[test]
    fn greedy_rules_rejected() {
        let e = Election::from_orders(vec![vec![0, 1]]).unwrap();
        let inst = BriberyInstance::new(
            e,
            0,
            1,
            RuleSpec::GreedyBordaCc,
            vec![PriceFunction::Unit],
            1,
        )
        .unwrap();
        let eps = Epsilon { num: 1, den: 1 };
        assert!(matches!(
            solve_fpt_as(&inst, &eps, &Limits::default()),
            Err(SolverError::WrongRule { .. })
        ));
    }
}
