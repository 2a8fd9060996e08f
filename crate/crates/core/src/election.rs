//! Ordinal elections, price functions and shift actions.
//!
//! Everything downstream (rules, solvers, generators) operates on the value
//! types defined here. All types are immutable after construction and all
//! operations are pure functions.

use std::fmt;

use serde::Serialize;

use crate::rules::RuleSpec;

/// A single voter record: a strict ranking of all candidates plus an integer
/// multiplicity. A weight-`w` voter counts as `w` identical voters for every
/// score computation, but as a single bribable agent (one price evaluation
/// shifts the preferred candidate in all `w` copies at once).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Voter {
    /// Candidate indices, most preferred first. A permutation of `0..m`.
    pub order: Vec<usize>,
    /// Multiplicity, at least 1.
    pub weight: u64,
}

impl Voter {
    pub fn new(order: Vec<usize>, weight: u64) -> Voter {
        Voter { order, weight }
    }

    pub fn unweighted(order: Vec<usize>) -> Voter {
        Voter { order, weight: 1 }
    }
}

/// An election: a candidate roster (dense indices with display names) and a
/// list of weighted voters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    pub candidates: Vec<String>,
    pub voters: Vec<Voter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElectionError {
    NoCandidates,
    NoVoters,
    DuplicateName(String),
    NotAPermutation { voter: usize },
    ZeroWeight { voter: usize },
}

impl fmt::Display for ElectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElectionError::NoCandidates => write!(f, "election has no candidates"),
            ElectionError::NoVoters => write!(f, "election has no voters"),
            ElectionError::DuplicateName(n) => write!(f, "duplicate candidate name {:?}", n),
            ElectionError::NotAPermutation { voter } => {
                write!(
                    f,
                    "voter {} is not a permutation of the candidate set",
                    voter
                )
            }
            ElectionError::ZeroWeight { voter } => write!(f, "voter {} has weight 0", voter),
        }
    }
}

impl std::error::Error for ElectionError {}

impl Election {
    /// Validates the invariants: m >= 1, n >= 1, unique names, every vote a
    /// permutation of `0..m`, weights >= 1.
    pub fn new(candidates: Vec<String>, voters: Vec<Voter>) -> Result<Election, ElectionError> {
        if candidates.is_empty() {
            return Err(ElectionError::NoCandidates);
        }
        if voters.is_empty() {
            return Err(ElectionError::NoVoters);
        }
        let mut seen = std::collections::HashSet::new();
        for name in &candidates {
            if !seen.insert(name) {
                return Err(ElectionError::DuplicateName(name.clone()));
            }
        }
        let m = candidates.len();
        for (i, v) in voters.iter().enumerate() {
            if v.weight == 0 {
                return Err(ElectionError::ZeroWeight { voter: i });
            }
            if v.order.len() != m {
                return Err(ElectionError::NotAPermutation { voter: i });
            }
            let mut hit = vec![false; m];
            for &c in &v.order {
                if c >= m || hit[c] {
                    return Err(ElectionError::NotAPermutation { voter: i });
                }
                hit[c] = true;
            }
        }
        Ok(Election { candidates, voters })
    }

    /// Convenience constructor with synthetic names `c0..c{m-1}`.
    pub fn from_orders(orders: Vec<Vec<usize>>) -> Result<Election, ElectionError> {
        let m = orders.iter().map(|o| o.len()).max().unwrap_or(0);
        let names = (0..m).map(|i| format!("c{}", i)).collect();
        Election::new(names, orders.into_iter().map(Voter::unweighted).collect())
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }

    /// Sum of voter weights.
    pub fn total_weight(&self) -> u64 {
        self.voters.iter().map(|v| v.weight).sum()
    }

    pub fn candidate_index(&self, name: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c == name)
    }
}

/// 1-based rank of candidate `c` in `voter`'s order (top candidate has
/// position 1).
pub fn position(voter: &Voter, c: usize) -> usize {
    voter
        .order
        .iter()
        .position(|&x| x == c)
        .map(|i| i + 1)
        .expect("candidate index out of range")
}

/// Per-voter cost of shifting the preferred candidate forward; nondecreasing
/// with zero cost at distance 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum PriceFunction {
    /// pi(i) = i.
    Unit,
    /// pi(0) = 0, pi(i) = q for every i > 0.
    AllOrNothing(u64),
    /// Explicit values indexed by shift distance 0..m-1.
    Table(Vec<u64>),
}

impl PriceFunction {
    pub fn eval(&self, distance: usize) -> u64 {
        match self {
            PriceFunction::Unit => distance as u64,
            PriceFunction::AllOrNothing(q) => {
                if distance == 0 {
                    0
                } else {
                    *q
                }
            }
            PriceFunction::Table(values) => values[distance],
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, PriceFunction::Unit)
    }

    pub fn is_all_or_nothing(&self) -> bool {
        matches!(self, PriceFunction::AllOrNothing(_))
    }
}

/// Outcome of `validate_price_function`: either fine, or a description of the
/// first violated index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriceValidation {
    Ok,
    Violation { index: usize, reason: String },
}

/// Checks pi(0) = 0 and monotonicity over distances 0..m-1. Tables must carry
/// exactly one value per distance. Never aborts; reports the first violation.
pub fn validate_price_function(pf: &PriceFunction, m: usize) -> PriceValidation {
    if let PriceFunction::Table(values) = pf {
        if values.len() != m {
            return PriceValidation::Violation {
                index: values.len().min(m),
                reason: format!("table has {} entries, expected {}", values.len(), m),
            };
        }
        if values[0] != 0 {
            return PriceValidation::Violation {
                index: 0,
                reason: format!("pi(0) = {} but must be 0", values[0]),
            };
        }
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                return PriceValidation::Violation {
                    index: i,
                    reason: format!(
                        "pi({}) = {} < pi({}) = {}",
                        i,
                        values[i],
                        i - 1,
                        values[i - 1]
                    ),
                };
            }
        }
    }
    PriceValidation::Ok
}

/// Per-voter shift distances for the preferred candidate; the decision
/// variable of every solver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftAction {
    pub shifts: Vec<usize>,
}

impl ShiftAction {
    pub fn new(shifts: Vec<usize>) -> ShiftAction {
        ShiftAction { shifts }
    }

    pub fn zero(n: usize) -> ShiftAction {
        ShiftAction { shifts: vec![0; n] }
    }

    /// Number of unit shifts `#s`.
    pub fn unit_shifts(&self) -> u64 {
        self.shifts.iter().map(|&s| s as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.iter().all(|&s| s == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftError {
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    OutOfRange {
        voter: usize,
        shift: usize,
        max: usize,
    },
}

impl fmt::Display for ShiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftError::LengthMismatch { expected, got } => {
                write!(
                    f,
                    "action has {} entries, election has {} voters",
                    got, expected
                )
            }
            ShiftError::OutOfRange { voter, shift, max } => write!(
                f,
                "shift {} for voter {} exceeds the candidate's position (max {})",
                shift, voter, max
            ),
        }
    }
}

impl std::error::Error for ShiftError {}

/// Moves candidate `p` forward by `action.shifts[v]` positions in each vote.
/// The relative order of all other candidates is unchanged; weights are
/// untouched.
pub fn apply_shift(
    election: &Election,
    p: usize,
    action: &ShiftAction,
) -> Result<Election, ShiftError> {
    if action.shifts.len() != election.num_voters() {
        return Err(ShiftError::LengthMismatch {
            expected: election.num_voters(),
            got: action.shifts.len(),
        });
    }
    let mut out = election.clone();
    for (i, voter) in out.voters.iter_mut().enumerate() {
        let s = action.shifts[i];
        if s == 0 {
            continue;
        }
        let pos = voter
            .order
            .iter()
            .position(|&c| c == p)
            .expect("preferred candidate missing from vote");
        if s > pos {
            return Err(ShiftError::OutOfRange {
                voter: i,
                shift: s,
                max: pos,
            });
        }
        voter.order.copy_within(pos - s..pos, pos - s + 1);
        voter.order[pos - s] = p;
    }
    Ok(out)
}

/// Total cost `Pi(s)` of an action under per-voter prices.
pub fn action_cost(prices: &[PriceFunction], action: &ShiftAction) -> u64 {
    assert_eq!(
        prices.len(),
        action.shifts.len(),
        "price/action length mismatch"
    );
    prices
        .iter()
        .zip(&action.shifts)
        .map(|(pf, &s)| pf.eval(s))
        .sum()
}

/// A full shift-bribery problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriberyInstance {
    pub election: Election,
    /// Index of the preferred candidate p.
    pub preferred: usize,
    pub committee_size: usize,
    pub rule: RuleSpec,
    /// One price function per voter record.
    pub prices: Vec<PriceFunction>,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    BadPreferred { preferred: usize, m: usize },
    BadCommitteeSize { k: usize, m: usize },
    PriceCount { expected: usize, got: usize },
    BadPrice { voter: usize, reason: String },
    BadRuleThreshold { t: usize, m: usize },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::BadPreferred { preferred, m } => {
                write!(
                    f,
                    "preferred candidate index {} out of range (m = {})",
                    preferred, m
                )
            }
            InstanceError::BadCommitteeSize { k, m } => {
                write!(f, "committee size {} out of range 1..={}", k, m)
            }
            InstanceError::PriceCount { expected, got } => {
                write!(
                    f,
                    "{} price functions given, election has {} voters",
                    got, expected
                )
            }
            InstanceError::BadPrice { voter, reason } => {
                write!(f, "invalid price function for voter {}: {}", voter, reason)
            }
            InstanceError::BadRuleThreshold { t, m } => {
                write!(f, "approval threshold {} exceeds candidate count {}", t, m)
            }
        }
    }
}

impl std::error::Error for InstanceError {}

impl BriberyInstance {
    pub fn new(
        election: Election,
        preferred: usize,
        committee_size: usize,
        rule: RuleSpec,
        prices: Vec<PriceFunction>,
        budget: u64,
    ) -> Result<BriberyInstance, InstanceError> {
        let m = election.num_candidates();
        if preferred >= m {
            return Err(InstanceError::BadPreferred { preferred, m });
        }
        if committee_size == 0 || committee_size > m {
            return Err(InstanceError::BadCommitteeSize {
                k: committee_size,
                m,
            });
        }
        if prices.len() != election.num_voters() {
            return Err(InstanceError::PriceCount {
                expected: election.num_voters(),
                got: prices.len(),
            });
        }
        for (i, pf) in prices.iter().enumerate() {
            if let PriceValidation::Violation { index, reason } = validate_price_function(pf, m) {
                return Err(InstanceError::BadPrice {
                    voter: i,
                    reason: format!("at distance {}: {}", index, reason),
                });
            }
        }
        if let Some(t) = rule.approval_param() {
            if t == 0 || t > m {
                return Err(InstanceError::BadRuleThreshold { t, m });
            }
        }
        Ok(BriberyInstance {
            election,
            preferred,
            committee_size,
            rule,
            prices,
            budget,
        })
    }

    /// Per-voter upper bound on the shift distance: pos_v(p) - 1.
    pub fn max_shifts(&self) -> Vec<usize> {
        self.election
            .voters
            .iter()
            .map(|v| position(v, self.preferred) - 1)
            .collect()
    }

    /// Checks the per-voter bound s_v <= pos_v(p) - 1.
    pub fn validate_action(&self, action: &ShiftAction) -> Result<(), ShiftError> {
        if action.shifts.len() != self.election.num_voters() {
            return Err(ShiftError::LengthMismatch {
                expected: self.election.num_voters(),
                got: action.shifts.len(),
            });
        }
        for (i, (&s, max)) in action.shifts.iter().zip(self.max_shifts()).enumerate() {
            if s > max {
                return Err(ShiftError::OutOfRange {
                    voter: i,
                    shift: s,
                    max,
                });
            }
        }
        Ok(())
    }

    pub fn action_cost(&self, action: &ShiftAction) -> u64 {
        action_cost(&self.prices, action)
    }

    pub fn shifted_election(&self, action: &ShiftAction) -> Result<Election, ShiftError> {
        apply_shift(&self.election, self.preferred, action)
    }
}

/// A successful shift action together with its cost and a witness winning
/// committee. `optimal` is set only by solvers that guarantee cost = OPT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriberySolution {
    pub action: ShiftAction,
    pub cost: u64,
    /// A winning committee of the shifted election that contains p.
    pub witness: Vec<usize>,
    pub optimal: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voter(order: &[usize]) -> Voter {
        Voter::unweighted(order.to_vec())
    }

    #[test]
    fn position_is_one_based() {
        // voter order (a,b,c): a at 1, c at m
        let v = voter(&[0, 1, 2]);
        assert_eq!(position(&v, 0), 1);
        assert_eq!(position(&v, 2), 3);
        // the preliminaries example: pos_v(c1) = 1
        let v = voter(&[0, 1, 2]);
        assert_eq!(position(&v, 0), 1);
    }

    #[test]
    fn apply_shift_moves_to_top() {
        // (a,b,p) with p shifted by 2 -> (p,a,b)
        let e = Election::from_orders(vec![vec![0, 1, 2]]).unwrap();
        let shifted = apply_shift(&e, 2, &ShiftAction::new(vec![2])).unwrap();
        assert_eq!(shifted.voters[0].order, vec![2, 0, 1]);
    }

    #[test]
    fn zero_action_is_identity() {
        let e = Election::from_orders(vec![vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        let shifted = apply_shift(&e, 0, &ShiftAction::zero(2)).unwrap();
        assert_eq!(shifted, e);
    }

    #[test]
    fn apply_shift_preserves_relative_order() {
        // (a,p,b): p shifted 1 -> (p,a,b); b stays behind a
        let e = Election::from_orders(vec![vec![0, 2, 1]]).unwrap();
        let shifted = apply_shift(&e, 2, &ShiftAction::new(vec![1])).unwrap();
        assert_eq!(shifted.voters[0].order, vec![2, 0, 1]);
    }

    #[test]
    fn apply_shift_rejects_out_of_range() {
        let e = Election::from_orders(vec![vec![0, 2, 1]]).unwrap();
        let err = apply_shift(&e, 2, &ShiftAction::new(vec![2])).unwrap_err();
        assert_eq!(
            err,
            ShiftError::OutOfRange {
                voter: 0,
                shift: 2,
                max: 1
            }
        );
    }

    #[test]
    fn action_cost_sums_per_voter() {
        // unit prices sum shifts
        let prices = vec![PriceFunction::Unit; 3];
        assert_eq!(action_cost(&prices, &ShiftAction::new(vec![2, 0, 1])), 3);
        // all-or-nothing is flat
        let prices = vec![
            PriceFunction::AllOrNothing(5),
            PriceFunction::AllOrNothing(7),
        ];
        assert_eq!(action_cost(&prices, &ShiftAction::new(vec![0, 3])), 7);
        // table lookup
        let prices = vec![PriceFunction::Table(vec![0, 1, 4])];
        assert_eq!(action_cost(&prices, &ShiftAction::new(vec![2])), 4);
    }

    #[test]
    fn price_validation_reports_first_violation() {
        assert_eq!(
            validate_price_function(&PriceFunction::Table(vec![0, 1, 1, 5]), 4),
            PriceValidation::Ok
        );
        match validate_price_function(&PriceFunction::Table(vec![0, 3, 2]), 3) {
            PriceValidation::Violation { index, .. } => assert_eq!(index, 2),
            other => panic!("expected violation, got {:?}", other),
        }
        match validate_price_function(&PriceFunction::Table(vec![1, 2, 3]), 3) {
            PriceValidation::Violation { index, .. } => assert_eq!(index, 0),
            other => panic!("expected violation, got {:?}", other),
        }
    }

    #[test]
    fn election_invariants_enforced() {
        assert!(Election::new(vec![], vec![]).is_err());
        assert!(Election::new(vec!["a".into()], vec![]).is_err());
        assert!(Election::new(vec!["a".into(), "a".into()], vec![voter(&[0, 1])]).is_err());
        assert!(Election::new(vec!["a".into(), "b".into()], vec![voter(&[0, 0])]).is_err());
        assert!(Election::new(
            vec!["a".into(), "b".into()],
            vec![Voter::new(vec![0, 1], 0)]
        )
        .is_err());
    }
}
