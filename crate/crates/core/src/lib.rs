//! Multiwinner voting rules and shift-bribery campaign workbench.
//!
//! The crate implements the SNTV, Bloc, k-Borda and Chamberlin-Courant
//! committee rules (exact, greedy and PTAS variants), a complete family of
//! shift-bribery solvers (exhaustive oracle, polynomial SNTV/Bloc algorithm,
//! voter-subset solvers, an FPT approximation scheme, XP enumerators and an
//! ILP-backed candidate-parameterized solver), and generators that turn
//! clique / multicolored-independent-set / set-cover inputs into bribery
//! instances whose feasibility mirrors the source problem.

pub mod cli;
pub mod election;
pub mod formats;
pub mod reductions;
pub mod rules;
pub mod solvers;
pub mod sweep;

pub use election::{
    action_cost, apply_shift, position, validate_price_function, BriberyInstance, BriberySolution,
    Election, ElectionError, InstanceError, PriceFunction, PriceValidation, ShiftAction,
    ShiftError, Voter,
};
pub use rules::{
    borda_scores, cc_committee_score, cc_exact_member_check, greedy_cc, is_member, lambert_w0,
    ptas_threshold, t_approval_scores, topk_member_check, RuleError, RuleSpec, ScoreVector,
    Scoring,
};
pub use solvers::{
    build_basic_ilp, dispatch_solver, solve_fpt_as, solve_ilp_candidates, solve_kborda_unit,
    solve_oracle, solve_sntv_bloc, solve_subset_all_or_nothing, solve_subset_approval,
    solve_xp_shifts, solve_xp_voters, Epsilon, Limits, Outcome, ReportRecord, SolverError,
    SolverReport, Strategy,
};
