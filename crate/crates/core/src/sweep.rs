//! Seeded random instances and the oracle cross-validation sweep.
//!
//! Every trial derives its own ChaCha8 stream from the base seed, so results
//! are identical no matter how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{BriberyInstance, Election, PriceFunction, Voter};
use crate::formats::serialize_instance;
use crate::rules::RuleSpec;
use crate::solvers::{
    solve_fpt_as, solve_ilp_candidates, solve_kborda_unit, solve_oracle, solve_sntv_bloc,
    solve_subset_all_or_nothing, solve_subset_approval, solve_xp_voters, Epsilon, Limits, Outcome,
    SolverError, SolverReport,
};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub m_max: usize,
    pub n_max: usize,
    pub weight_max: u64,
    pub price_max: u64,
    pub budget_max: u64,
    pub trials: u64,
    pub seed: u64,
    /// Restrict generated rules; None allows all eight (t drawn from {1, 2}).
    pub rules: Option<Vec<RuleSpec>>,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            m_max: 5,
            n_max: 4,
            weight_max: 2,
            price_max: 9,
            budget_max: 12,
            trials: 500,
            seed: 7,
            rules: None,
        }
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_election(rng: &mut impl Rng, m_max: usize, n_max: usize, w_max: u64) -> Election {
    let m = rng.gen_range(1..=m_max);
    let n = rng.gen_range(1..=n_max);
    let mut voters = Vec::with_capacity(n);
    for _ in 0..n {
        let mut order: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        voters.push(Voter::new(order, rng.gen_range(1..=w_max)));
    }
    Election::new((0..m).map(|i| format!("c{}", i)).collect(), voters).unwrap()
}

fn random_prices(rng: &mut impl Rng, m: usize, n: usize, price_max: u64) -> Vec<PriceFunction> {
    // one section kind per instance, like the file format
    match rng.gen_range(0..3) {
        0 => vec![PriceFunction::Unit; n],
        1 => (0..n)
            .map(|_| PriceFunction::AllOrNothing(rng.gen_range(0..=price_max)))
            .collect(),
        _ => (0..n)
            .map(|_| {
                let mut t = vec![0u64];
                for _ in 1..m {
                    let last = *t.last().unwrap();
                    t.push((last + rng.gen_range(0..=3)).min(price_max));
                }
                PriceFunction::Table(t)
            })
            .collect(),
    }
}

pub fn random_instance(rng: &mut impl Rng, config: &SweepConfig) -> BriberyInstance {
    let election = random_election(rng, config.m_max, config.n_max, config.weight_max);
    let m = election.num_candidates();
    let n = election.num_voters();
    let rule = match &config.rules {
        Some(rules) => rules[rng.gen_range(0..rules.len())],
        None => {
            let t = rng.gen_range(1..=2usize).min(m);
            RuleSpec::all_with_t(t)[rng.gen_range(0..8)]
        }
    };
    let rule = match rule {
        RuleSpec::ApprovalCc { t } => RuleSpec::ApprovalCc { t: t.min(m) },
        RuleSpec::GreedyApprovalCc { t } => RuleSpec::GreedyApprovalCc { t: t.min(m) },
        other => other,
    };
    let k = rng.gen_range(1..=m);
    let preferred = rng.gen_range(0..m);
    let budget = rng.gen_range(0..=config.budget_max);
    let prices = random_prices(rng, m, n, config.price_max);
    BriberyInstance::new(election, preferred, k, rule, prices, budget).unwrap()
}

/// One solver's agreement with the oracle on a single instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Ok,
    NotApplicable,
    Mismatch(String),
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: u64,
    pub line: String,
    pub failure: Option<String>,
    /// Per-solver results, named as in the rendered line.
    pub checks: Vec<(String, Check)>,
}

fn feasibility(report: &SolverReport) -> &'static str {
    match report.outcome {
        Outcome::Feasible(_) => "feasible",
        Outcome::Infeasible => "infeasible",
        Outcome::Inconclusive(_) => "inconclusive",
    }
}

fn compare_exact(
    name: &str,
    oracle: &SolverReport,
    candidate: Result<SolverReport, SolverError>,
    check_cost: bool,
) -> Check {
    let report = match candidate {
        Ok(r) => r,
        Err(e) => return Check::Mismatch(format!("{}: solver error: {}", name, e)),
    };
    match (&oracle.outcome, &report.outcome) {
        (Outcome::Feasible(a), Outcome::Feasible(b)) => {
            if check_cost && a.cost != b.cost {
                Check::Mismatch(format!("{}: OPT {} vs oracle {}", name, b.cost, a.cost))
            } else {
                Check::Ok
            }
        }
        (Outcome::Infeasible, Outcome::Infeasible) => Check::Ok,
        (a, b) => Check::Mismatch(format!(
            "{}: {} vs oracle {}",
            name,
            match b {
                Outcome::Feasible(_) => "feasible",
                Outcome::Infeasible => "infeasible",
                Outcome::Inconclusive(_) => "inconclusive",
            },
            match a {
                Outcome::Feasible(_) => "feasible",
                Outcome::Infeasible => "infeasible",
                Outcome::Inconclusive(_) => "inconclusive",
            }
        )),
    }
}

/// Runs one cross-validation trial: build a random instance, solve with the
/// oracle, then with every applicable solver, and compare.
pub fn run_trial(config: &SweepConfig, trial: u64, limits: &Limits) -> TrialResult {
    let mut rng = trial_rng(config.seed, trial);
    let instance = random_instance(&mut rng, config);
    let digest = crate::formats::instance_digest(&instance);
    let oracle = match solve_oracle(&instance, limits) {
        Ok(r) => r,
        Err(e) => {
            return TrialResult {
                trial,
                line: format!("trial={:04} oracle-error", trial),
                failure: Some(format!(
                    "oracle failed: {}\n{}",
                    e,
                    serialize_instance(&instance)
                )),
                checks: Vec::new(),
            }
        }
    };

    let mut checks: Vec<(String, Check)> = Vec::new();

    let xp = compare_exact(
        "xp-voters",
        &oracle,
        solve_xp_voters(&instance, limits),
        true,
    );
    checks.push(("xp-voters".into(), xp));

    if matches!(instance.rule, RuleSpec::Sntv | RuleSpec::Bloc) {
        let c = compare_exact("poly", &oracle, solve_sntv_bloc(&instance, limits), true);
        checks.push(("poly".into(), c));
    } else {
        checks.push(("poly".into(), Check::NotApplicable));
    }

    if instance.prices.iter().all(|p| p.is_all_or_nothing())
        && instance.rule.is_candidate_monotone()
    {
        let c = compare_exact(
            "subset-aon",
            &oracle,
            solve_subset_all_or_nothing(&instance),
            true,
        );
        checks.push(("subset-aon".into(), c));
    } else {
        checks.push(("subset-aon".into(), Check::NotApplicable));
    }

    if instance.rule.is_approval_based() {
        let c = compare_exact(
            "subset-approval",
            &oracle,
            solve_subset_approval(&instance),
            true,
        );
        checks.push(("subset-approval".into(), c));
    } else {
        checks.push(("subset-approval".into(), Check::NotApplicable));
    }

    if matches!(instance.rule, RuleSpec::KBorda)
        && instance.prices.iter().all(|p| p.is_unit())
        && instance.election.voters.iter().all(|v| v.weight == 1)
    {
        let c = compare_exact(
            "kborda-unit",
            &oracle,
            solve_kborda_unit(&instance, limits),
            true,
        );
        checks.push(("kborda-unit".into(), c));
    } else {
        checks.push(("kborda-unit".into(), Check::NotApplicable));
    }

    if !matches!(instance.rule, RuleSpec::Sntv | RuleSpec::Bloc) {
        // decision-style: feasibility agreement only
        let c = compare_exact(
            "ilp",
            &oracle,
            solve_ilp_candidates(&instance, limits),
            false,
        );
        checks.push(("ilp".into(), c));
    } else {
        checks.push(("ilp".into(), Check::NotApplicable));
    }

    if instance.rule.is_candidate_monotone() {
        for eps in [
            Epsilon { num: 1, den: 4 },
            Epsilon { num: 1, den: 2 },
            Epsilon { num: 1, den: 1 },
        ] {
            let name = format!("fptas({})", eps);
            let check = match solve_fpt_as(&instance, &eps, limits) {
                Err(e) => Check::Mismatch(format!("{}: solver error: {}", name, e)),
                Ok(report) => match (&oracle.outcome, &report.outcome) {
                    (Outcome::Feasible(opt), Outcome::Feasible(found)) => {
                        if eps.bounds(found.cost, opt.cost) {
                            Check::Ok
                        } else {
                            Check::Mismatch(format!(
                                "{}: cost {} exceeds (1+eps) * OPT with OPT {}",
                                name, found.cost, opt.cost
                            ))
                        }
                    }
                    (Outcome::Feasible(_), other) => Check::Mismatch(format!(
                        "{}: {:?} although the oracle is feasible",
                        name, other
                    )),
                    (Outcome::Infeasible, Outcome::Feasible(found)) => {
                        // legitimate: the approximation ignores the budget
                        if instance.action_cost(&found.action) > instance.budget {
                            Check::Ok
                        } else {
                            Check::Mismatch(format!(
                                "{}: within-budget success the oracle missed",
                                name
                            ))
                        }
                    }
                    (Outcome::Infeasible, Outcome::Infeasible) => Check::Ok,
                    (a, b) => Check::Mismatch(format!("{}: {:?} vs {:?}", name, b, a)),
                },
            };
            checks.push((name, check));
        }
    }

    let mut failure = None;
    let mut rendered = Vec::new();
    for (name, check) in &checks {
        match check {
            Check::Ok => rendered.push(format!("{}=ok", name)),
            Check::NotApplicable => {}
            Check::Mismatch(msg) => {
                rendered.push(format!("{}=MISMATCH", name));
                if failure.is_none() {
                    failure = Some(format!(
                        "trial {}: {}\nreplay instance:\n{}",
                        trial,
                        msg,
                        serialize_instance(&instance)
                    ));
                }
            }
        }
    }

    let line = format!(
        "trial={:04} digest={} rule={} m={} n={} k={} budget={} oracle={}{} {}",
        trial,
        digest,
        instance.rule,
        instance.election.num_candidates(),
        instance.election.num_voters(),
        instance.committee_size,
        instance.budget,
        feasibility(&oracle),
        oracle
            .outcome
            .cost()
            .map_or(String::new(), |c| format!(":{}", c)),
        rendered.join(" ")
    );
    TrialResult {
        trial,
        line,
        failure,
        checks,
    }
}

/// Full sweep, optionally across threads; output is ordered by trial index
/// and byte-identical for any job count.
pub fn run_crosscheck(config: &SweepConfig, jobs: usize, limits: &Limits) -> Vec<TrialResult> {
    let jobs = jobs.max(1);
    if jobs == 1 || config.trials <= 1 {
        return (0..config.trials)
            .map(|t| run_trial(config, t, limits))
            .collect();
    }
    let mut results: Vec<Option<TrialResult>> = (0..config.trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<&mut [Option<TrialResult>]> = {
            // partition result slots into round-robin-free contiguous chunks
            let mut rest = results.as_mut_slice();
            let mut out = Vec::new();
            let per = (config.trials as usize).div_ceil(jobs);
            while !rest.is_empty() {
                let take = per.min(rest.len());
                let (head, tail) = rest.split_at_mut(take);
                out.push(head);
                rest = tail;
            }
            out
        };
        let mut start = 0u64;
        for chunk in chunks {
            let base = start;
            start += chunk.len() as u64;
            let cfg = config.clone();
            let lim = limits.clone();
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(run_trial(&cfg, base + i as u64, &lim));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("all trials filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_deterministic_and_scheduler_independent() {
        let config = SweepConfig {
            trials: 12,
            seed: 99,
            ..SweepConfig::default()
        };
        let limits = Limits::default();
        let a: Vec<String> = run_crosscheck(&config, 1, &limits)
            .into_iter()
            .map(|r| r.line)
            .collect();
        let b: Vec<String> = run_crosscheck(&config, 4, &limits)
            .into_iter()
            .map(|r| r.line)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn small_sweep_is_clean() {
        let config = SweepConfig {
            trials: 40,
            seed: 3,
            ..SweepConfig::default()
        };
        let limits = Limits::default();
        for r in run_crosscheck(&config, 2, &limits) {
            assert!(r.failure.is_none(), "{}", r.failure.unwrap());
        }
    }
}
