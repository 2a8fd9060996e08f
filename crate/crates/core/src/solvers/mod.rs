//! Shift-bribery solvers: the exhaustive oracle, the polynomial SNTV/Bloc
//! algorithm, voter-subset solvers, the FPT approximation scheme, XP
//! enumerators, an ILP-backed candidate-parameterized solver, and a
//! unit-price k-Borda branch-and-bound.
//!
//! Every feasible report is re-verified on construction: the action respects
//! the per-voter bounds, its cost matches, and the preferred candidate is a
//! member of some winning committee of the shifted election. Exact solvers
//! additionally verify the budget; the approximation scheme may return
//! actions above budget (its contract bounds cost against OPT instead).

mod exhaustive;
mod fptas;
mod ilp;
mod kborda_unit;
mod sntv_bloc;
mod subsets;

pub use exhaustive::{solve_oracle, solve_xp_shifts, solve_xp_voters};
pub use fptas::{solve_fpt_as, Epsilon};
pub use ilp::{build_basic_ilp, solve_ilp_candidates, Cmp, Constraint, IlpMaps, IlpModel};
pub use kborda_unit::solve_kborda_unit;
pub use sntv_bloc::solve_sntv_bloc;
pub use subsets::{solve_subset_all_or_nothing, solve_subset_approval};

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::election::{BriberyInstance, BriberySolution, ShiftAction, ShiftError};
use crate::rules::{is_member, winning_committee_with, RuleError};

/// Search-space guards. Solvers refuse (with `InstanceTooLarge`) rather than
/// run unbounded enumerations.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Oracle guard on the product of pos_v(p) over voters.
    pub oracle_actions: u64,
    /// Guard for the XP enumerations and the approximation-scheme menu product.
    pub xp_space: u64,
    /// Candidate-count guard for the ILP solver.
    pub ilp_max_m: usize,
    /// Branch-and-bound node budget per ILP model.
    pub ilp_nodes: u64,
    /// Total-weight guard for the SNTV/Bloc endscore sweep.
    pub score_sweep: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            oracle_actions: 10_000_000,
            xp_space: 10_000_000,
            ilp_max_m: 5,
            ilp_nodes: 5_000_000,
            score_sweep: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    WrongRule {
        solver: &'static str,
        rule: String,
    },
    WrongPriceKind {
        solver: &'static str,
        detail: String,
    },
    RequiresUnitWeights {
        solver: &'static str,
    },
    InstanceTooLarge {
        detail: String,
    },
    NoApplicableSolver {
        detail: String,
    },
    Verification(String),
    Rule(RuleError),
    Shift(ShiftError),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::WrongRule { solver, rule } => {
                write!(f, "{} does not handle rule {}", solver, rule)
            }
            SolverError::WrongPriceKind { solver, detail } => {
                write!(
                    f,
                    "{} requires different price functions: {}",
                    solver, detail
                )
            }
            SolverError::RequiresUnitWeights { solver } => {
                write!(f, "{} requires all voter weights to be 1", solver)
            }
            SolverError::InstanceTooLarge { detail } => write!(f, "instance too large: {}", detail),
            SolverError::NoApplicableSolver { detail } => {
                write!(f, "no applicable solver: {}", detail)
            }
            SolverError::Verification(msg) => write!(f, "solution re-verification failed: {}", msg),
            SolverError::Rule(e) => write!(f, "{}", e),
            SolverError::Shift(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SolverError {}

impl From<RuleError> for SolverError {
    fn from(e: RuleError) -> SolverError {
        match e {
            RuleError::InstanceTooLarge { detail } => SolverError::InstanceTooLarge { detail },
            other => SolverError::Rule(other),
        }
    }
}

impl From<ShiftError> for SolverError {
    fn from(e: ShiftError) -> SolverError {
        SolverError::Shift(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Feasible(BriberySolution),
    Infeasible,
    Inconclusive(String),
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible(_))
    }

    pub fn cost(&self) -> Option<u64> {
        match self {
            Outcome::Feasible(sol) => Some(sol.cost),
            _ => None,
        }
    }
}

/// Result of a solver run. `Feasible` outcomes are verified on construction.
#[derive(Debug, Clone)]
pub struct SolverReport {
    pub outcome: Outcome,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SolverReport {
    /// Verified feasible report: action valid, cost consistent, within
    /// budget, and p a member of some winning committee after the shift.
    pub fn feasible(
        instance: &BriberyInstance,
        action: ShiftAction,
        optimal: bool,
        nodes_explored: u64,
        started: Instant,
    ) -> Result<SolverReport, SolverError> {
        Self::feasible_impl(instance, action, optimal, nodes_explored, started, true)
    }

    /// Verified feasible report without the budget check. Used only by the
    /// approximation scheme, whose contract bounds cost against OPT rather
    /// than the budget.
    pub fn feasible_over_budget(
        instance: &BriberyInstance,
        action: ShiftAction,
        optimal: bool,
        nodes_explored: u64,
        started: Instant,
    ) -> Result<SolverReport, SolverError> {
        Self::feasible_impl(instance, action, optimal, nodes_explored, started, false)
    }

    fn feasible_impl(
        instance: &BriberyInstance,
        action: ShiftAction,
        optimal: bool,
        nodes_explored: u64,
        started: Instant,
        enforce_budget: bool,
    ) -> Result<SolverReport, SolverError> {
        instance.validate_action(&action)?;
        let cost = instance.action_cost(&action);
        if enforce_budget && cost > instance.budget {
            return Err(SolverError::Verification(format!(
                "action costs {} with budget {}",
                cost, instance.budget
            )));
        }
        let shifted = instance.shifted_election(&action)?;
        let witness = winning_committee_with(
            &shifted,
            &instance.rule,
            instance.committee_size,
            instance.preferred,
        )?
        .ok_or_else(|| {
            SolverError::Verification(
                "preferred candidate is not a member of any winning committee".into(),
            )
        })?;
        Ok(SolverReport {
            outcome: Outcome::Feasible(BriberySolution {
                action,
                cost,
                witness,
                optimal,
            }),
            nodes_explored,
            elapsed: started.elapsed(),
        })
    }

    pub fn infeasible(nodes_explored: u64, started: Instant) -> SolverReport {
        SolverReport {
            outcome: Outcome::Infeasible,
            nodes_explored,
            elapsed: started.elapsed(),
        }
    }

    pub fn inconclusive(reason: String, nodes_explored: u64, started: Instant) -> SolverReport {
        SolverReport {
            outcome: Outcome::Inconclusive(reason),
            nodes_explored,
            elapsed: started.elapsed(),
        }
    }
}

/// Serialized form of a report; `cost`/`shifts`/`witness` are present only
/// for feasible outcomes.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub strategy: String,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub cost: Option<u64>,
    pub shifts: Option<Vec<usize>>,
    pub witness_committee: Option<Vec<String>>,
    pub optimal: Option<bool>,
    pub nodes_explored: u64,
    pub elapsed_ms: u64,
}

impl ReportRecord {
    pub fn new(instance: &BriberyInstance, strategy: &str, report: &SolverReport) -> ReportRecord {
        let (outcome, reason, cost, shifts, witness, optimal) = match &report.outcome {
            Outcome::Feasible(sol) => (
                "feasible",
                None,
                Some(sol.cost),
                Some(sol.action.shifts.clone()),
                Some(
                    sol.witness
                        .iter()
                        .map(|&c| instance.election.candidates[c].clone())
                        .collect::<Vec<_>>(),
                ),
                Some(sol.optimal),
            ),
            Outcome::Infeasible => ("infeasible", None, None, None, None, None),
            Outcome::Inconclusive(r) => ("inconclusive", Some(r.clone()), None, None, None, None),
        };
        ReportRecord {
            strategy: strategy.to_string(),
            outcome,
            reason,
            cost,
            shifts,
            witness_committee: witness,
            optimal,
            nodes_explored: report.nodes_explored,
            elapsed_ms: report.elapsed.as_millis() as u64,
        }
    }
}

/// Solver selection for `dispatch_solver` and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Oracle,
    Poly,
    Subset,
    FptAs(Epsilon),
    XpVoters,
    XpShifts(u64),
    Ilp,
    KBordaUnit,
}

/// Routes an instance to a solver. `Auto` picks: SNTV/Bloc -> poly;
/// approval-based rules -> approval subset solver; all-or-nothing prices on a
/// candidate-monotone rule -> all-or-nothing subset solver; unit-price
/// unit-weight k-Borda -> the dedicated branch-and-bound; otherwise the first
/// exhaustive solver whose guard admits the instance.
pub fn dispatch_solver(
    instance: &BriberyInstance,
    strategy: &Strategy,
    limits: &Limits,
) -> Result<(&'static str, SolverReport), SolverError> {
    match strategy {
        Strategy::Oracle => Ok(("oracle", solve_oracle(instance, limits)?)),
        Strategy::Poly => Ok(("poly", solve_sntv_bloc(instance, limits)?)),
        Strategy::Subset => {
            if instance.rule.is_approval_based() {
                Ok(("subset-approval", solve_subset_approval(instance)?))
            } else {
                Ok(("subset-aon", solve_subset_all_or_nothing(instance)?))
            }
        }
        Strategy::FptAs(eps) => Ok(("fptas", solve_fpt_as(instance, eps, limits)?)),
        Strategy::XpVoters => Ok(("xp-voters", solve_xp_voters(instance, limits)?)),
        Strategy::XpShifts(smax) => Ok(("xp-shifts", solve_xp_shifts(instance, *smax, limits)?)),
        Strategy::Ilp => Ok(("ilp", solve_ilp_candidates(instance, limits)?)),
        Strategy::KBordaUnit => Ok(("kborda-unit", solve_kborda_unit(instance, limits)?)),
        Strategy::Auto => {
            use crate::rules::RuleSpec;
            if matches!(instance.rule, RuleSpec::Sntv | RuleSpec::Bloc) {
                return Ok(("poly", solve_sntv_bloc(instance, limits)?));
            }
            if instance.rule.is_approval_based() {
                return Ok(("subset-approval", solve_subset_approval(instance)?));
            }
            if instance.prices.iter().all(|p| p.is_all_or_nothing())
                && instance.rule.is_candidate_monotone()
            {
                return Ok(("subset-aon", solve_subset_all_or_nothing(instance)?));
            }
            if matches!(instance.rule, RuleSpec::KBorda)
                && instance.prices.iter().all(|p| p.is_unit())
                && instance.election.voters.iter().all(|v| v.weight == 1)
            {
                return Ok(("kborda-unit", solve_kborda_unit(instance, limits)?));
            }
            let n = instance.election.num_voters() as u32;
            let m = instance.election.num_candidates() as u64;
            let grid = checked_pow(m, n);
            if grid.map_or(false, |g| g <= limits.xp_space) {
                return Ok(("xp-voters", solve_xp_voters(instance, limits)?));
            }
            let product: Option<u64> = instance
                .max_shifts()
                .iter()
                .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64 + 1));
            if product.map_or(false, |p| p <= limits.oracle_actions) {
                return Ok(("oracle", solve_oracle(instance, limits)?));
            }
            let smax: u64 = instance.max_shifts().iter().map(|&s| s as u64).sum();
            if compositions(instance.election.num_voters() as u64, smax)
                .map_or(false, |c| c <= limits.xp_space)
            {
                return Ok(("xp-shifts", solve_xp_shifts(instance, smax, limits)?));
            }
            Err(SolverError::NoApplicableSolver {
                detail: "every exhaustive solver guard trips for this instance".into(),
            })
        }
    }
}

/// Convenience wrapper: verify p's membership after applying an action.
pub(crate) fn action_succeeds(
    instance: &BriberyInstance,
    action: &ShiftAction,
) -> Result<bool, SolverError> {
    let shifted = instance.shifted_election(action)?;
    Ok(is_member(
        &shifted,
        &instance.rule,
        instance.committee_size,
        instance.preferred,
    )?)
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Number of shift vectors with at most `s` total units over `n` voters:
/// C(n + s, s). None on overflow.
pub(crate) fn compositions(n: u64, s: u64) -> Option<u64> {
    let mut count: u64 = 1;
    for i in 0..s.min(n) {
        // C(n+s, min(n,s)) computed multiplicatively
        count = count.checked_mul(n + s - i)? / (i + 1);
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Election, PriceFunction};
    use crate::rules::RuleSpec;

    fn unit_instance(rule: RuleSpec) -> BriberyInstance {
        let e = Election::from_orders(vec![vec![1, 0, 2], vec![2, 1, 0]]).unwrap();
        BriberyInstance::new(e, 0, 1, rule, vec![PriceFunction::Unit; 2], 3).unwrap()
    }

    #[test]
    fn auto_routes_sntv_to_poly_and_greedy_to_xp() {
        let limits = Limits::default();
        let (name, _) =
            dispatch_solver(&unit_instance(RuleSpec::Sntv), &Strategy::Auto, &limits).unwrap();
        assert_eq!(name, "poly");
        let (name, _) = dispatch_solver(
            &unit_instance(RuleSpec::GreedyBordaCc),
            &Strategy::Auto,
            &limits,
        )
        .unwrap();
        assert_eq!(name, "xp-voters");
        let (name, _) =
            dispatch_solver(&unit_instance(RuleSpec::PtasCc), &Strategy::Auto, &limits).unwrap();
        assert_eq!(name, "subset-approval");
        let (name, _) =
            dispatch_solver(&unit_instance(RuleSpec::KBorda), &Strategy::Auto, &limits).unwrap();
        assert_eq!(name, "kborda-unit");
    }

    #[test]
    fn auto_reports_no_applicable_solver_when_guards_trip() {
        let strangled = Limits {
            oracle_actions: 0,
            xp_space: 0,
            ..Limits::default()
        };
        let err = dispatch_solver(
            &unit_instance(RuleSpec::GreedyBordaCc),
            &Strategy::Auto,
            &strangled,
        )
        .unwrap_err();
        assert!(matches!(err, SolverError::NoApplicableSolver { .. }));
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 0), Some(1));
        assert_eq!(compositions(2, 3), Some(10)); // C(5, 3)
        assert_eq!(compositions(14, 18), Some(471_435_600)); // C(32, 18)
    }
}
