//! The eight committee rules: score computation, winner-membership checks,
//! exact Chamberlin-Courant evaluation by committee enumeration, and the
//! deterministic greedy procedures.

mod lambert;

pub use lambert::{lambert_w0, ptas_threshold};

use std::fmt;
use std::str::FromStr;

use crate::election::{position, Election};

/// Per-candidate scores, weights included.
pub type ScoreVector = Vec<u64>;

/// Committee selection rule. The approval-based rules carry their threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleSpec {
    Sntv,
    Bloc,
    KBorda,
    ApprovalCc { t: usize },
    BordaCc,
    GreedyApprovalCc { t: usize },
    PtasCc,
    GreedyBordaCc,
}

impl RuleSpec {
    /// All eight rules with a given threshold choice for the parametrized ones.
    pub fn all_with_t(t: usize) -> Vec<RuleSpec> {
        vec![
            RuleSpec::Sntv,
            RuleSpec::Bloc,
            RuleSpec::KBorda,
            RuleSpec::ApprovalCc { t },
            RuleSpec::BordaCc,
            RuleSpec::GreedyApprovalCc { t },
            RuleSpec::PtasCc,
            RuleSpec::GreedyBordaCc,
        ]
    }

    /// The explicit approval threshold, for rules that carry one.
    pub fn approval_param(&self) -> Option<usize> {
        match self {
            RuleSpec::ApprovalCc { t } | RuleSpec::GreedyApprovalCc { t } => Some(*t),
            _ => None,
        }
    }

    /// True for the three top-k score rules.
    pub fn is_top_k(&self) -> bool {
        matches!(self, RuleSpec::Sntv | RuleSpec::Bloc | RuleSpec::KBorda)
    }

    /// Rules whose outcome depends only on per-voter approved sets
    /// (threshold position t): shifting p to any position <= t is equivalent.
    pub fn is_approval_based(&self) -> bool {
        matches!(
            self,
            RuleSpec::ApprovalCc { .. } | RuleSpec::GreedyApprovalCc { .. } | RuleSpec::PtasCc
        )
    }

    /// Candidate-monotone rules: shifting a winning-committee member forward
    /// keeps it in some winning committee. The greedy rules are not.
    pub fn is_candidate_monotone(&self) -> bool {
        matches!(
            self,
            RuleSpec::Sntv
                | RuleSpec::Bloc
                | RuleSpec::KBorda
                | RuleSpec::ApprovalCc { .. }
                | RuleSpec::BordaCc
        )
    }

    pub fn is_greedy(&self) -> bool {
        matches!(
            self,
            RuleSpec::GreedyApprovalCc { .. } | RuleSpec::PtasCc | RuleSpec::GreedyBordaCc
        )
    }

    /// Effective approval boundary position for an (m, k) election, for the
    /// rules where "shift to the first approved position" is meaningful.
    pub fn approval_boundary(&self, m: usize, k: usize) -> Option<usize> {
        match self {
            RuleSpec::Sntv => Some(1),
            RuleSpec::Bloc => Some(k),
            RuleSpec::ApprovalCc { t } | RuleSpec::GreedyApprovalCc { t } => Some(*t),
            RuleSpec::PtasCc => Some(ptas_threshold(m, k)),
            _ => None,
        }
    }

    /// The satisfaction scoring used by the CC-family rules.
    pub fn cc_scoring(&self, m: usize, k: usize) -> Option<Scoring> {
        match self {
            RuleSpec::ApprovalCc { t } => Some(Scoring::Approval { t: *t }),
            RuleSpec::BordaCc => Some(Scoring::Borda),
            RuleSpec::GreedyApprovalCc { t } => Some(Scoring::Approval { t: *t }),
            RuleSpec::PtasCc => Some(Scoring::Approval {
                t: ptas_threshold(m, k),
            }),
            RuleSpec::GreedyBordaCc => Some(Scoring::Borda),
            _ => None,
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Sntv => write!(f, "sntv"),
            RuleSpec::Bloc => write!(f, "bloc"),
            RuleSpec::KBorda => write!(f, "kborda"),
            RuleSpec::ApprovalCc { t } => write!(f, "approval-cc:{}", t),
            RuleSpec::BordaCc => write!(f, "borda-cc"),
            RuleSpec::GreedyApprovalCc { t } => write!(f, "greedy-approval-cc:{}", t),
            RuleSpec::PtasCc => write!(f, "ptas-cc"),
            RuleSpec::GreedyBordaCc => write!(f, "greedy-borda-cc"),
        }
    }
}

impl FromStr for RuleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<RuleSpec, String> {
        let parse_t = |rest: &str| -> Result<usize, String> {
            rest.parse::<usize>()
                .map_err(|_| format!("bad approval threshold {:?}", rest))
        };
        match s {
            "sntv" => Ok(RuleSpec::Sntv),
            "bloc" => Ok(RuleSpec::Bloc),
            "kborda" => Ok(RuleSpec::KBorda),
            "borda-cc" => Ok(RuleSpec::BordaCc),
            "ptas-cc" => Ok(RuleSpec::PtasCc),
            "greedy-borda-cc" => Ok(RuleSpec::GreedyBordaCc),
            _ => {
                if let Some(rest) = s.strip_prefix("approval-cc:") {
                    Ok(RuleSpec::ApprovalCc { t: parse_t(rest)? })
                } else if let Some(rest) = s.strip_prefix("greedy-approval-cc:") {
                    Ok(RuleSpec::GreedyApprovalCc { t: parse_t(rest)? })
                } else {
                    Err(format!("unknown rule {:?}", s))
                }
            }
        }
    }
}

/// Satisfaction scoring for representative-based (CC) committee evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scoring {
    Borda,
    Approval { t: usize },
}

impl Scoring {
    /// Satisfaction a voter derives from a candidate at 1-based position
    /// `pos` among `m` candidates.
    #[inline]
    pub fn satisfaction(&self, pos: usize, m: usize) -> u64 {
        match self {
            Scoring::Borda => (m - pos) as u64,
            Scoring::Approval { t } => u64::from(pos <= *t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    WrongRule { expected: &'static str, got: String },
    BadThreshold { t: usize, m: usize },
    InstanceTooLarge { detail: String },
    EmptyCommittee,
    BadCommitteeSize { k: usize, m: usize },
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleError::WrongRule { expected, got } => {
                write!(f, "rule {} not applicable, expected {}", got, expected)
            }
            RuleError::BadThreshold { t, m } => {
                write!(f, "approval threshold {} out of range 1..={}", t, m)
            }
            RuleError::InstanceTooLarge { detail } => write!(f, "instance too large: {}", detail),
            RuleError::EmptyCommittee => write!(f, "committee must be nonempty"),
            RuleError::BadCommitteeSize { k, m } => {
                write!(f, "committee size {} out of range 1..={}", k, m)
            }
        }
    }
}

impl std::error::Error for RuleError {}

/// Committee enumeration guard for the exact CC check.
pub const DEFAULT_CC_GUARD: u64 = 2_000_000;

/// Borda scores: candidate c earns weight * (m - pos_v(c)) from each voter.
pub fn borda_scores(election: &Election) -> ScoreVector {
    let m = election.num_candidates();
    let mut scores = vec![0u64; m];
    for v in &election.voters {
        for (i, &c) in v.order.iter().enumerate() {
            scores[c] += v.weight * (m - i - 1) as u64;
        }
    }
    scores
}

/// t-approval scores: total weight of voters ranking the candidate in the
/// top t positions.
pub fn t_approval_scores(election: &Election, t: usize) -> Result<ScoreVector, RuleError> {
    let m = election.num_candidates();
    if t == 0 || t > m {
        return Err(RuleError::BadThreshold { t, m });
    }
    let mut scores = vec![0u64; m];
    for v in &election.voters {
        for &c in &v.order[..t] {
            scores[c] += v.weight;
        }
    }
    Ok(scores)
}

fn top_k_scores(election: &Election, rule: &RuleSpec, k: usize) -> Result<ScoreVector, RuleError> {
    match rule {
        RuleSpec::Sntv => t_approval_scores(election, 1),
        RuleSpec::Bloc => t_approval_scores(election, k),
        RuleSpec::KBorda => Ok(borda_scores(election)),
        other => Err(RuleError::WrongRule {
            expected: "sntv|bloc|kborda",
            got: other.to_string(),
        }),
    }
}

/// Membership check for the top-k score rules under nondiscriminatory tie
/// handling: p belongs to some winning committee iff fewer than k candidates
/// score strictly higher.
pub fn topk_member_check(
    election: &Election,
    rule: &RuleSpec,
    k: usize,
    p: usize,
) -> Result<(bool, ScoreVector), RuleError> {
    let scores = top_k_scores(election, rule, k)?;
    let above = scores
        .iter()
        .enumerate()
        .filter(|&(c, &s)| c != p && s > scores[p])
        .count();
    Ok((above <= k - 1, scores))
}

/// Chamberlin-Courant score of a committee: each voter is represented by
/// their best-ranked member.
pub fn cc_committee_score(
    election: &Election,
    committee: &[usize],
    scoring: Scoring,
) -> Result<u64, RuleError> {
    if committee.is_empty() {
        return Err(RuleError::EmptyCommittee);
    }
    let m = election.num_candidates();
    let mut total = 0u64;
    for v in &election.voters {
        let best = committee
            .iter()
            .map(|&c| scoring.satisfaction(position(v, c), m))
            .max()
            .unwrap();
        total += v.weight * best;
    }
    Ok(total)
}

fn committee_count(m: usize, k: usize) -> u64 {
    let mut count = 1u64;
    for i in 0..k {
        count = count.saturating_mul((m - i) as u64) / (i as u64 + 1);
        if count > DEFAULT_CC_GUARD.saturating_mul(4) {
            return u64::MAX;
        }
    }
    count
}

/// Exhaustive CC winner-membership: true iff the best committee containing p
/// attains the global maximum. Also returns the global best score.
pub fn cc_exact_member_check(
    election: &Election,
    k: usize,
    scoring: Scoring,
    p: usize,
) -> Result<(bool, u64), RuleError> {
    cc_exact_member_check_guarded(election, k, scoring, p, DEFAULT_CC_GUARD)
}

pub fn cc_exact_member_check_guarded(
    election: &Election,
    k: usize,
    scoring: Scoring,
    p: usize,
    guard: u64,
) -> Result<(bool, u64), RuleError> {
    let best = cc_best_committees(election, k, scoring, Some(p), guard)?;
    Ok((best.with_p_score == best.global_score, best.global_score))
}

pub(crate) struct CcBest {
    pub global_score: u64,
    /// Best score over committees containing the pinned candidate (0 if none pinned).
    pub with_p_score: u64,
    /// Lexicographically smallest committee attaining `with_p_score` among
    /// those containing the pinned candidate (or the global best if none).
    pub witness: Vec<usize>,
}

pub(crate) fn cc_best_committees(
    election: &Election,
    k: usize,
    scoring: Scoring,
    pinned: Option<usize>,
    guard: u64,
) -> Result<CcBest, RuleError> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(RuleError::BadCommitteeSize { k, m });
    }
    if committee_count(m, k) > guard {
        return Err(RuleError::InstanceTooLarge {
            detail: format!("C({}, {}) committees exceed guard {}", m, k, guard),
        });
    }
    let mut committee: Vec<usize> = (0..k).collect();
    let mut global_score = 0u64;
    let mut with_p_score = 0u64;
    let mut witness: Vec<usize> = Vec::new();
    let mut have_any = false;
    loop {
        let score = cc_committee_score(election, &committee, scoring)?;
        if !have_any || score > global_score {
            global_score = score;
            have_any = true;
        }
        let counts = match pinned {
            Some(p) => committee.contains(&p),
            None => true,
        };
        // enumeration is lexicographic, so first strict improvement keeps the
        // lexicographically smallest witness
        if counts && (witness.is_empty() || score > with_p_score) {
            with_p_score = score;
            witness = committee.clone();
        }
        // next k-combination of 0..m in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(CcBest {
                    global_score,
                    with_p_score,
                    witness,
                });
            }
            i -= 1;
            if committee[i] != i + m - k {
                break;
            }
        }
        committee[i] += 1;
        for j in i + 1..k {
            committee[j] = committee[j - 1] + 1;
        }
    }
}

/// Greedy CC committee construction: k rounds, each adding the candidate
/// with the largest marginal committee-score gain, ties broken by the given
/// priority order (ascending candidate index by default). Returns members in
/// join order.
pub fn greedy_cc(
    election: &Election,
    k: usize,
    scoring: Scoring,
    tie_order: Option<&[usize]>,
) -> Result<Vec<usize>, RuleError> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(RuleError::BadCommitteeSize { k, m });
    }
    // tie_order[c] = priority rank of candidate c (lower wins ties)
    let priority: Vec<usize> = match tie_order {
        Some(order) => {
            let mut rank = vec![usize::MAX; m];
            for (r, &c) in order.iter().enumerate() {
                rank[c] = r;
            }
            rank
        }
        None => (0..m).collect(),
    };
    // satisfaction of each voter's current representative
    let mut current: Vec<u64> = vec![0; election.num_voters()];
    let mut chosen = vec![false; m];
    let mut rounds = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(u64, usize)> = None;
        for c in 0..m {
            if chosen[c] {
                continue;
            }
            let mut gain = 0u64;
            for (v, cur) in election.voters.iter().zip(&current) {
                let sat = scoring.satisfaction(position(v, c), m);
                if sat > *cur {
                    gain += v.weight * (sat - cur);
                }
            }
            let better = match best {
                None => true,
                Some((bg, bc)) => gain > bg || (gain == bg && priority[c] < priority[bc]),
            };
            if better {
                best = Some((gain, c));
            }
        }
        let (_, c) = best.expect("k <= m guarantees a candidate remains");
        chosen[c] = true;
        for (v, cur) in election.voters.iter().zip(current.iter_mut()) {
            let sat = scoring.satisfaction(position(v, c), m);
            if sat > *cur {
                *cur = sat;
            }
        }
        rounds.push(c);
    }
    Ok(rounds)
}

/// Winner-membership dispatch across all eight rules.
pub fn is_member(
    election: &Election,
    rule: &RuleSpec,
    k: usize,
    p: usize,
) -> Result<bool, RuleError> {
    let m = election.num_candidates();
    if let Some(t) = rule.approval_param() {
        if t == 0 || t > m {
            return Err(RuleError::BadThreshold { t, m });
        }
    }
    match rule {
        RuleSpec::Sntv | RuleSpec::Bloc | RuleSpec::KBorda => {
            topk_member_check(election, rule, k, p).map(|(member, _)| member)
        }
        RuleSpec::ApprovalCc { t } => {
            cc_exact_member_check(election, k, Scoring::Approval { t: *t }, p)
                .map(|(member, _)| member)
        }
        RuleSpec::BordaCc => {
            cc_exact_member_check(election, k, Scoring::Borda, p).map(|(member, _)| member)
        }
        RuleSpec::GreedyApprovalCc { .. } | RuleSpec::PtasCc | RuleSpec::GreedyBordaCc => {
            let scoring = rule.cc_scoring(m, k).unwrap();
            greedy_cc(election, k, scoring, None).map(|committee| committee.contains(&p))
        }
    }
}

/// A winning committee containing p, when p is a member: used as the witness
/// in solver reports. Deterministic (smallest indices on ties).
pub fn winning_committee_with(
    election: &Election,
    rule: &RuleSpec,
    k: usize,
    p: usize,
) -> Result<Option<Vec<usize>>, RuleError> {
    let m = election.num_candidates();
    match rule {
        RuleSpec::Sntv | RuleSpec::Bloc | RuleSpec::KBorda => {
            let (member, scores) = topk_member_check(election, rule, k, p)?;
            if !member {
                return Ok(None);
            }
            // all strictly-above candidates, then p, then fill by score/index
            let mut committee: Vec<usize> = (0..m)
                .filter(|&c| c != p && scores[c] > scores[p])
                .collect();
            committee.push(p);
            let mut rest: Vec<usize> = (0..m)
                .filter(|&c| c != p && scores[c] <= scores[p])
                .collect();
            rest.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
            for c in rest {
                if committee.len() == k {
                    break;
                }
                committee.push(c);
            }
            committee.sort_unstable();
            Ok(Some(committee))
        }
        RuleSpec::ApprovalCc { .. } | RuleSpec::BordaCc => {
            let scoring = rule.cc_scoring(m, k).unwrap();
            let best = cc_best_committees(election, k, scoring, Some(p), DEFAULT_CC_GUARD)?;
            if best.with_p_score == best.global_score && best.witness.contains(&p) {
                Ok(Some(best.witness))
            } else {
                Ok(None)
            }
        }
        RuleSpec::GreedyApprovalCc { .. } | RuleSpec::PtasCc | RuleSpec::GreedyBordaCc => {
            let scoring = rule.cc_scoring(m, k).unwrap();
            let rounds = greedy_cc(election, k, scoring, None)?;
            if rounds.contains(&p) {
                let mut committee = rounds;
                committee.sort_unstable();
                Ok(Some(committee))
            } else {
                Ok(None)
            }
        }
    }
}
