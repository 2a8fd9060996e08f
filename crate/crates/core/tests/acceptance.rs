//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::HashSet;
use std::sync::OnceLock;

use shiftbribery::election::{apply_shift, BriberyInstance, ShiftAction};
use shiftbribery::formats::parse_instance;
use shiftbribery::reductions::{
    audit_clique_scores, audit_mis_scores, audit_setcover_join_order, gen_borda_from_mis,
    gen_greedy_approval_cc_from_setcover, gen_kborda_from_clique, has_clique,
    has_multicolored_independent_set, has_set_cover, Graph, SetCoverInput,
};
use shiftbribery::rules::{
    cc_committee_score, cc_exact_member_check, greedy_cc, is_member, lambert_w0, ptas_threshold,
    RuleSpec, Scoring,
};
use shiftbribery::solvers::{solve_kborda_unit, solve_subset_approval, Limits};
use shiftbribery::sweep::{
    random_election, run_crosscheck, trial_rng, Check, SweepConfig, TrialResult,
};

const SWEEP_TRIALS: u64 = 600;

fn sweep() -> &'static Vec<TrialResult> {
    static CELL: OnceLock<Vec<TrialResult>> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = SweepConfig {
            trials: SWEEP_TRIALS,
            seed: 20_240,
            ..SweepConfig::default()
        };
        run_crosscheck(&config, 4, &Limits::default())
    })
}

/// Criterion 1: every exact solver applicable to a sweep instance agrees
/// with the oracle on feasibility, and on OPT where it sets the optimal
/// flag. 600 seeded instances, m <= 5, n <= 4, weights <= 2, prices <= 9,
/// budgets 0..=12, all eight rules with t in {1, 2}.
#[test]
fn criterion_1_oracle_equivalence_sweep() {
    let exact = [
        "poly",
        "subset-aon",
        "subset-approval",
        "xp-voters",
        "ilp",
        "kborda-unit",
    ];
    let mut applicable = vec![0u64; exact.len()];
    for trial in sweep() {
        for (name, check) in &trial.checks {
            if let Some(slot) = exact.iter().position(|e| e == name) {
                match check {
                    Check::Ok => applicable[slot] += 1,
                    Check::NotApplicable => {}
                    Check::Mismatch(msg) => panic!(
                        "[FAIL] criterion 1: {}\n{}",
                        msg,
                        trial.failure.as_deref().unwrap_or("")
                    ),
                }
            }
        }
    }
    for (name, count) in exact.iter().zip(&applicable) {
        assert!(
            *count > 0,
            "[FAIL] criterion 1: solver {} never applicable in the sweep",
            name
        );
    }
    println!(
        "[PASS] criterion 1: oracle-equivalence sweep, {} trials, applicability {:?}",
        SWEEP_TRIALS,
        exact.iter().zip(&applicable).collect::<Vec<_>>()
    );
}

/// Criterion 2: on the same sweep, the approximation scheme is feasible
/// whenever the oracle is, with cost <= (1 + eps) * OPT for
/// eps in {1/4, 1/2, 1}, compared exactly in integers.
#[test]
fn criterion_2_fpt_as_bound() {
    let mut checked = 0u64;
    for trial in sweep() {
        for (name, check) in &trial.checks {
            if name.starts_with("fptas") {
                match check {
                    Check::Ok => checked += 1,
                    Check::NotApplicable => {}
                    Check::Mismatch(msg) => panic!(
                        "[FAIL] criterion 2: {}\n{}",
                        msg,
                        trial.failure.as_deref().unwrap_or("")
                    ),
                }
            }
        }
    }
    assert!(
        checked > 0,
        "[FAIL] criterion 2: no candidate-monotone instances in the sweep"
    );
    println!(
        "[PASS] criterion 2: FPT-AS bound held on {} solver runs",
        checked
    );
}

/// Criterion 3: greedy CC score >= (1 - 1/e) times the exact CC optimum on
/// random instances with m <= 6, n <= 5, k <= 3, both scorings. The
/// comparison uses integer bounds on e (greedy * E_HI >= opt * (E_HI - S)
/// with e < E_HI / S), which is sufficient for the true inequality.
#[test]
fn criterion_3_greedy_approximation_ratio() {
    const SCALE: i128 = 1_000_000_000_000_000;
    const E_HI: i128 = 2_718_281_828_459_046; // e * SCALE < E_HI
    let mut cases = 0u64;
    for seed in 0..400u64 {
        let mut rng = trial_rng(777, seed);
        let election = random_election(&mut rng, 6, 5, 2);
        let m = election.num_candidates();
        for k in 1..=3usize.min(m) {
            for scoring in [Scoring::Borda, Scoring::Approval { t: 2.min(m) }] {
                let (_, opt) = cc_exact_member_check(&election, k, scoring, 0).unwrap();
                let rounds = greedy_cc(&election, k, scoring, None).unwrap();
                let greedy = cc_committee_score(&election, &rounds, scoring).unwrap();
                assert!(
                    greedy as i128 * E_HI >= opt as i128 * (E_HI - SCALE),
                    "[FAIL] criterion 3: greedy {} vs optimum {} (k={}, {:?})",
                    greedy,
                    opt,
                    k,
                    scoring
                );
                cases += 1;
            }
        }
    }
    println!(
        "[PASS] criterion 3: greedy >= (1 - 1/e) * optimum on {} cases",
        cases
    );
}

// ---------------------------------------------------------------------------
// instance families for the reduction criteria, enumerated up to isomorphism
// ---------------------------------------------------------------------------

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for perm in out {
            for v in 0..n {
                if !perm.contains(&v) {
                    let mut p = perm.clone();
                    p.push(v);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

struct MaskSpace {
    /// Allowed vertex pairs (i < j) in a fixed order.
    pairs: Vec<(usize, usize)>,
    /// pair -> bit, dense over all vertex pairs for remapping.
    bit_of: Vec<Vec<Option<usize>>>,
}

impl MaskSpace {
    fn new(n: usize, allowed: impl Fn(usize, usize) -> bool) -> MaskSpace {
        let mut pairs = Vec::new();
        let mut bit_of = vec![vec![None; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if allowed(i, j) {
                    bit_of[i][j] = Some(pairs.len());
                    bit_of[j][i] = Some(pairs.len());
                    pairs.push((i, j));
                }
            }
        }
        MaskSpace { pairs, bit_of }
    }

    fn remap(&self, mask: u32, perm: &[usize]) -> u32 {
        let mut out = 0u32;
        for (bit, &(i, j)) in self.pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                let b =
                    self.bit_of[perm[i]][perm[j]].expect("permutation must preserve allowed pairs");
                out |= 1 << b;
            }
        }
        out
    }

    fn canonical(&self, mask: u32, perms: &[Vec<usize>]) -> u32 {
        perms.iter().map(|p| self.remap(mask, p)).min().unwrap()
    }

    fn edges(&self, mask: u32) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .enumerate()
            .filter_map(|(bit, &pair)| (mask & (1 << bit) != 0).then_some(pair))
            .collect()
    }
}

/// All graphs on exactly n vertices, one per isomorphism class.
fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let space = MaskSpace::new(n, |_, _| true);
    let perms = permutations_of(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << space.pairs.len()) {
        let canon = space.canonical(mask, &perms);
        if seen.insert(canon) {
            out.push(Graph::new(n, space.edges(canon)).unwrap());
        }
    }
    out
}

fn clique_family() -> &'static Vec<Graph> {
    static CELL: OnceLock<Vec<Graph>> = OnceLock::new();
    CELL.get_or_init(|| (1..=6).flat_map(graphs_up_to_iso).collect())
}

/// Colored graphs meeting the construction's preconditions (equal classes,
/// no intra-color edges), one per color-preserving isomorphism class, for
/// every shape with h * q <= 6.
fn mis_family() -> &'static Vec<(Graph, usize)> {
    static CELL: OnceLock<Vec<(Graph, usize)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for h in 1..=6usize {
            for q in 1..=6usize {
                if h * q > 6 {
                    continue;
                }
                let n = h * q;
                let color = |v: usize| v / q;
                let space = MaskSpace::new(n, |i, j| color(i) != color(j));
                // group: class permutation + within-class permutations
                let class_perms = permutations_of(h);
                let within = permutations_of(q);
                let mut perms = Vec::new();
                let mut stack = vec![Vec::new()];
                for _ in 0..h {
                    let mut next = Vec::new();
                    for partial in stack {
                        for w in &within {
                            let mut p = partial.clone();
                            p.push(w.clone());
                            next.push(p);
                        }
                    }
                    stack = next;
                }
                for sigma in &class_perms {
                    for taus in &stack {
                        let mut perm = vec![0usize; n];
                        for v in 0..n {
                            let c = color(v);
                            perm[v] = sigma[c] * q + taus[c][v % q];
                        }
                        perms.push(perm);
                    }
                }
                let mut seen = HashSet::new();
                for mask in 0u32..(1 << space.pairs.len()) {
                    let canon = space.canonical(mask, &perms);
                    if seen.insert(canon) {
                        let colors = (0..n).map(color).collect();
                        let graph = Graph::new(n, space.edges(canon))
                            .unwrap()
                            .with_colors(colors)
                            .unwrap();
                        out.push((graph, h));
                    }
                }
            }
        }
        out
    })
}

/// All set systems with 1..=3 distinct nonempty sets over universes of
/// 1..=3 elements, with every target size h.
fn setcover_family() -> &'static Vec<SetCoverInput> {
    static CELL: OnceLock<Vec<SetCoverInput>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for r in 1..=3usize {
            let subsets: Vec<Vec<usize>> = (1u32..(1 << r))
                .map(|mask| (0..r).filter(|&u| mask & (1 << u) != 0).collect())
                .collect();
            for s in 1..=3usize {
                // all s-combinations of the nonempty subsets
                let mut combo: Vec<usize> = (0..s).collect();
                if s > subsets.len() {
                    continue;
                }
                loop {
                    for h in 1..=s {
                        let sets: Vec<Vec<usize>> =
                            combo.iter().map(|&i| subsets[i].clone()).collect();
                        out.push(SetCoverInput::new(r, sets, h).unwrap());
                    }
                    let mut i = s;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        if combo[i] != i + subsets.len() - s {
                            break;
                        }
                    }
                    if combo[i] == i + subsets.len() - s {
                        break;
                    }
                    combo[i] += 1;
                    for j in (i + 1)..s {
                        combo[j] = combo[j - 1] + 1;
                    }
                }
            }
        }
        out
    })
}

/// Criterion 4: source-problem brute force and bribery feasibility of the
/// generated instance agree, end to end, across the whole small-instance
/// families.
#[test]
fn criterion_4_reduction_end_to_end() {
    let limits = Limits::default();
    let mut counts = [0u64; 3];

    for (graph, h) in mis_family() {
        let gen = gen_borda_from_mis(graph, *h).expect("preconditions hold by construction");
        let source = has_multicolored_independent_set(graph, *h).unwrap();
        let report = solve_kborda_unit(&gen.instance, &limits).unwrap();
        assert_eq!(
            report.outcome.is_feasible(),
            source,
            "[FAIL] criterion 4 (independent set): h={} graph={:?}",
            h,
            graph
        );
        counts[0] += 1;
    }

    for graph in clique_family() {
        for h in [2usize, 3] {
            let gen = gen_kborda_from_clique(graph, h).unwrap();
            let source = has_clique(graph, h).unwrap();
            let report = solve_kborda_unit(&gen.instance, &limits).unwrap();
            assert_eq!(
                report.outcome.is_feasible(),
                source,
                "[FAIL] criterion 4 (clique): h={} graph={:?}",
                h,
                graph
            );
            counts[1] += 1;
        }
    }

    for input in setcover_family() {
        let gen = gen_greedy_approval_cc_from_setcover(input, 3).unwrap();
        let source = has_set_cover(input).unwrap();
        let report = solve_subset_approval(&gen.instance).unwrap();
        assert_eq!(
            report.outcome.is_feasible(),
            source,
            "[FAIL] criterion 4 (set cover): {:?}",
            input
        );
        counts[2] += 1;
    }

    println!(
        "[PASS] criterion 4: reduction equivalence on {} independent-set, {} clique, {} set-cover instances",
        counts[0], counts[1], counts[2]
    );
}

/// Supporting check for criterion 4: on every generated instance whose raw
/// action space fits the oracle guard, the dedicated k-Borda search agrees
/// with the oracle exactly (feasibility and OPT). This pins the solver on
/// the very distribution the reduction equivalence relies on.
#[test]
fn criterion_4_support_oracle_agreement_on_generated_instances() {
    use shiftbribery::solvers::solve_oracle;
    let limits = Limits {
        oracle_actions: 2_000_000,
        ..Limits::default()
    };
    let fits = |instance: &shiftbribery::election::BriberyInstance| {
        instance
            .max_shifts()
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64 + 1))
            .is_some_and(|space| space <= limits.oracle_actions)
    };
    let mut checked = 0u64;
    for (graph, h) in mis_family() {
        let gen = gen_borda_from_mis(graph, *h).unwrap();
        if !fits(&gen.instance) {
            continue;
        }
        let oracle = solve_oracle(&gen.instance, &limits).unwrap();
        let fast = solve_kborda_unit(&gen.instance, &limits).unwrap();
        assert_eq!(
            oracle.outcome.is_feasible(),
            fast.outcome.is_feasible(),
            "{:?}",
            graph
        );
        assert_eq!(oracle.outcome.cost(), fast.outcome.cost(), "{:?}", graph);
        checked += 1;
    }
    for graph in clique_family() {
        for h in [2usize, 3] {
            let gen = gen_kborda_from_clique(graph, h).unwrap();
            if gen.marker || !fits(&gen.instance) {
                continue;
            }
            let oracle = solve_oracle(&gen.instance, &limits).unwrap();
            let fast = solve_kborda_unit(&gen.instance, &limits).unwrap();
            assert_eq!(
                oracle.outcome.is_feasible(),
                fast.outcome.is_feasible(),
                "{:?}",
                graph
            );
            assert_eq!(oracle.outcome.cost(), fast.outcome.cost(), "{:?}", graph);
            checked += 1;
        }
    }
    assert!(
        checked >= 5,
        "only {} generated instances were oracle-checkable",
        checked
    );
    println!(
        "[PASS] criterion 4 support: oracle agreed with the dedicated search on {} generated instances",
        checked
    );
}

/// Criterion 5: generated instances reproduce the constructions' pre-bribery
/// structure exactly (score profiles; unbribed greedy join order), and the
/// budgets match the closed forms.
#[test]
fn criterion_5_structural_audits() {
    let mut counts = [0u64; 3];
    for (graph, h) in mis_family() {
        let gen = gen_borda_from_mis(graph, *h).unwrap();
        let q = graph.n / h;
        assert_eq!(
            gen.budget,
            (*h as u64) * (q as u64 + (q as u64 - 1) * graph.max_degree() as u64),
            "[FAIL] criterion 5: budget closed form (independent set)"
        );
        if let Err(msg) = audit_mis_scores(&gen) {
            panic!(
                "[FAIL] criterion 5 (independent set): {} on {:?}",
                msg, graph
            );
        }
        counts[0] += 1;
    }
    for graph in clique_family() {
        for h in [2usize, 3] {
            let gen = gen_kborda_from_clique(graph, h).unwrap();
            if !gen.marker {
                let pairs = (h * (h - 1) / 2) as u64;
                assert_eq!(
                    gen.budget,
                    pairs * (2 + (h * h * h) as u64),
                    "[FAIL] criterion 5: budget closed form (clique)"
                );
            }
            if let Err(msg) = audit_clique_scores(&gen, h) {
                panic!(
                    "[FAIL] criterion 5 (clique): {} on {:?} h={}",
                    msg, graph, h
                );
            }
            counts[1] += 1;
        }
    }
    for input in setcover_family() {
        let gen = gen_greedy_approval_cc_from_setcover(input, 3).unwrap();
        if !gen.marker {
            assert_eq!(gen.budget, input.target as u64);
        }
        if let Err(msg) = audit_setcover_join_order(&gen) {
            panic!("[FAIL] criterion 5 (set cover): {} on {:?}", msg, input);
        }
        counts[2] += 1;
    }
    println!(
        "[PASS] criterion 5: structural audits on {} + {} + {} generated instances",
        counts[0], counts[1], counts[2]
    );
}

/// Criterion 6: candidate monotonicity holds on 500 seeded trials for the
/// five monotone rules, and the checked-in greedy-borda-cc counterexample
/// fails it.
#[test]
fn criterion_6_monotonicity() {
    let mut shifts_checked = 0u64;
    for trial in 0..500u64 {
        let mut rng = trial_rng(555, trial);
        let election = random_election(&mut rng, 5, 4, 2);
        let m = election.num_candidates();
        let rules = [
            RuleSpec::Sntv,
            RuleSpec::Bloc,
            RuleSpec::KBorda,
            RuleSpec::ApprovalCc { t: 2.min(m) },
            RuleSpec::BordaCc,
        ];
        for rule in rules {
            for k in 1..=m {
                for p in 0..m {
                    if !is_member(&election, &rule, k, p).unwrap() {
                        continue;
                    }
                    for v in 0..election.num_voters() {
                        let pos = election.voters[v]
                            .order
                            .iter()
                            .position(|&c| c == p)
                            .unwrap();
                        if pos == 0 {
                            continue;
                        }
                        let mut shifts = vec![0usize; election.num_voters()];
                        shifts[v] = 1;
                        let shifted = apply_shift(&election, p, &ShiftAction::new(shifts)).unwrap();
                        assert!(
                            is_member(&shifted, &rule, k, p).unwrap(),
                            "[FAIL] criterion 6: {} lost membership after a forward shift (rule {}, k={})",
                            election.candidates[p],
                            rule,
                            k
                        );
                        shifts_checked += 1;
                    }
                }
            }
        }
    }

    // the checked-in counterexample: greedy rules are not candidate-monotone
    let text = include_str!("data/gbcc_nonmonotone.instance");
    let counterexample: BriberyInstance = parse_instance(text).unwrap();
    let e = &counterexample.election;
    let p = counterexample.preferred;
    let k = counterexample.committee_size;
    assert!(is_member(e, &counterexample.rule, k, p).unwrap());
    let mut shifts = vec![0usize; e.num_voters()];
    shifts[0] = 1;
    let shifted = apply_shift(e, p, &ShiftAction::new(shifts)).unwrap();
    assert!(
        !is_member(&shifted, &counterexample.rule, k, p).unwrap(),
        "[FAIL] criterion 6: frozen counterexample no longer ejects p"
    );
    println!(
        "[PASS] criterion 6: monotonicity held on {} forward shifts; greedy-borda-cc counterexample verified",
        shifts_checked
    );
}

/// Criterion 7: the Lambert threshold satisfies its defining equation to
/// 1e-9 for k in 1..=1000, and the PTAS rule coincides with
/// greedy-approval-cc at the computed threshold on 200 seeded instances.
#[test]
fn criterion_7_ptas_threshold() {
    for k in 1..=1000usize {
        let w = lambert_w0(k as f64);
        let residual = (w * w.exp() - k as f64).abs();
        assert!(
            residual <= 1e-9,
            "[FAIL] criterion 7: k={} residual {}",
            k,
            residual
        );
        let m = 4 * k;
        let t = ptas_threshold(m, k);
        let expected = ((m as f64 * w / k as f64).ceil() as usize).clamp(1, m);
        assert_eq!(
            t, expected,
            "[FAIL] criterion 7: threshold formula at m={}, k={}",
            m, k
        );
    }
    let mut committees = 0u64;
    for trial in 0..200u64 {
        let mut rng = trial_rng(888, trial);
        let election = random_election(&mut rng, 6, 5, 2);
        let m = election.num_candidates();
        for k in 1..=m {
            let t = ptas_threshold(m, k);
            let ptas = greedy_cc(&election, k, Scoring::Approval { t }, None).unwrap();
            let explicit = greedy_cc(
                &election,
                k,
                RuleSpec::GreedyApprovalCc { t }.cc_scoring(m, k).unwrap(),
                None,
            )
            .unwrap();
            assert_eq!(ptas, explicit);
            for p in 0..m {
                assert_eq!(
                    is_member(&election, &RuleSpec::PtasCc, k, p).unwrap(),
                    is_member(&election, &RuleSpec::GreedyApprovalCc { t }, k, p).unwrap(),
                    "[FAIL] criterion 7: ptas-cc and greedy-approval-cc:{} disagree",
                    t
                );
            }
            committees += 1;
        }
    }
    println!(
        "[PASS] criterion 7: Lambert residuals <= 1e-9 for k <= 1000; PTAS committees matched on {} elections",
        committees
    );
}

/// Criterion 8: the crosscheck command is byte-identical across runs and
/// across --jobs 1 and 4.
#[test]
fn criterion_8_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_shiftbribery");
    let run = |jobs: &str| {
        let output = std::process::Command::new(bin)
            .args([
                "crosscheck",
                "--trials",
                "60",
                "--seed",
                "11",
                "--m-max",
                "4",
                "--n-max",
                "3",
                "--jobs",
                jobs,
            ])
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "crosscheck failed: {:?}", output);
        output.stdout
    };
    let first = run("1");
    let second = run("1");
    let third = run("1");
    let parallel = run("4");
    assert_eq!(
        first, second,
        "[FAIL] criterion 8: run-to-run output differs"
    );
    assert_eq!(
        first, third,
        "[FAIL] criterion 8: run-to-run output differs"
    );
    assert_eq!(
        first, parallel,
        "[FAIL] criterion 8: --jobs changes output bytes"
    );
    println!(
        "[PASS] criterion 8: crosscheck output byte-identical across 3 runs and jobs in {{1, 4}}"
    );
}
