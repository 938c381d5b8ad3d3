//! Backtracking proof search with filter-driven pruning, plus the two final
//! validators: the direct path criterion on the essential net and the
//! switching oracle on the undirected proof structure.

use std::fmt;
use std::sync::Arc;

use crate::filter::{prune_pass, select_branch};
use crate::formula::Sequent;
use crate::frame::{
    candidate_links, count_linkings, essential_graph, unfold, CandidateMatrix, Conn, LinkId,
    Linking, ProofFrame,
};
use crate::kbest::linking_weight;

/// Default cap on par links for the switching oracle (2^p switchings).
pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// Default cap on complete matchings for brute-force enumeration.
pub const DEFAULT_BRUTEFORCE_BOUND: u128 = 10_000;

/// Search configuration.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Reject crossing axiom links (non-commutative mode).
    pub planar: bool,
    /// Stop after this many proofs; `None` enumerates all.
    pub max_solutions: Option<usize>,
    /// Run the switching oracle on every solution in addition to the
    /// essential-net validator.
    pub validate_both: bool,
    /// Par-link cap for the switching oracle.
    pub oracle_bound: usize,
    /// Collect trace events.
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            planar: false,
            max_solutions: None,
            validate_both: true,
            oracle_bound: DEFAULT_ORACLE_BOUND,
            trace: false,
        }
    }
}

/// A validated proof net.
#[derive(Clone, Debug)]
pub struct ProofNet {
    pub frame: Arc<ProofFrame>,
    pub linking: Linking,
    /// Total distance weight of the linking.
    pub weight: Option<u64>,
}

/// One step of the search, for `--trace` style reporting.
#[derive(Clone, Debug)]
pub enum TraceEvent {
    Pruned {
        depth: usize,
        open: usize,
    },
    Forced {
        depth: usize,
        link: LinkId,
    },
    Branch {
        depth: usize,
        link: LinkId,
        alternatives: usize,
    },
    DeadEnd {
        depth: usize,
    },
    Solution {
        linking: Linking,
        valid: bool,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Pruned { depth, open } => {
                write!(f, "[{depth}] pruned matrix to {open} open cells")
            }
            TraceEvent::Forced { depth, link } => write!(f, "[{depth}] forced {link}"),
            TraceEvent::Branch {
                depth,
                link,
                alternatives,
            } => {
                write!(f, "[{depth}] branch {link} (of {alternatives})")
            }
            TraceEvent::DeadEnd { depth } => write!(f, "[{depth}] dead end"),
            TraceEvent::Solution { linking, valid } => {
                write!(f, "solution {linking} valid={valid}")
            }
        }
    }
}

/// Search a sequent for proof nets.
pub fn prove(sequent: &Sequent, opts: &SearchOptions) -> Vec<ProofNet> {
    prove_with_trace(sequent, opts).0
}

/// Like [`prove`], also returning the trace (empty unless `opts.trace`).
pub fn prove_with_trace(
    sequent: &Sequent,
    opts: &SearchOptions,
) -> (Vec<ProofNet>, Vec<TraceEvent>) {
    let frame = Arc::new(unfold(sequent));
    prove_frame(&frame, opts)
}

/// Run the search on an already unfolded frame.
pub fn prove_frame(
    frame: &Arc<ProofFrame>,
    opts: &SearchOptions,
) -> (Vec<ProofNet>, Vec<TraceEvent>) {
    let mut trace = Vec::new();
    let mut nets = Vec::new();
    if !frame.is_balanced() {
        return (nets, trace);
    }
    let cands = candidate_links(frame);
    search(frame, cands, Linking::new(), opts, &mut nets, &mut trace);
    (nets, trace)
}

fn search(
    frame: &Arc<ProofFrame>,
    mut cands: CandidateMatrix,
    mut committed: Linking,
    opts: &SearchOptions,
    nets: &mut Vec<ProofNet>,
    trace: &mut Vec<TraceEvent>,
) {
    if opts.max_solutions.is_some_and(|max| nets.len() >= max) {
        return;
    }
    // Propagate: prune, then commit forced links one at a time, re-pruning
    // after each commitment.
    loop {
        let result = prune_pass(frame, &cands, &committed);
        if result.failed {
            if opts.trace {
                trace.push(TraceEvent::DeadEnd {
                    depth: committed.len(),
                });
            }
            return;
        }
        cands = result.pruned;
        if opts.trace {
            trace.push(TraceEvent::Pruned {
                depth: committed.len(),
                open: cands.total_open(),
            });
        }
        match result.forced.first() {
            Some(&link) => {
                if opts.planar && !planar_ok(frame, link, &committed) {
                    if opts.trace {
                        trace.push(TraceEvent::DeadEnd {
                            depth: committed.len(),
                        });
                    }
                    return;
                }
                if opts.trace {
                    trace.push(TraceEvent::Forced {
                        depth: committed.len(),
                        link,
                    });
                }
                committed.insert(link);
                cands.commit(link);
            }
            None => break,
        }
    }

    if cands.total_open() == 0 {
        debug_assert!(committed.is_complete(frame));
        let valid = validate_net(frame, &committed, opts);
        if opts.trace {
            trace.push(TraceEvent::Solution {
                linking: committed.clone(),
                valid,
            });
        }
        if valid {
            nets.push(ProofNet {
                frame: Arc::clone(frame),
                weight: Some(linking_weight(frame, &committed)),
                linking: committed,
            });
        }
        return;
    }

    let branch = select_branch(&cands);
    let alternatives = branch.len();
    for link in branch {
        if opts.max_solutions.is_some_and(|max| nets.len() >= max) {
            return;
        }
        if opts.planar && !planar_ok(frame, link, &committed) {
            continue;
        }
        if opts.trace {
            trace.push(TraceEvent::Branch {
                depth: committed.len(),
                link,
                alternatives,
            });
        }
        let mut next_cands = cands.clone();
        next_cands.commit(link);
        let mut next_committed = committed.clone();
        next_committed.insert(link);
        search(frame, next_cands, next_committed, opts, nets, trace);
    }
}

fn validate_net(frame: &ProofFrame, linking: &Linking, opts: &SearchOptions) -> bool {
    let essential = validate_essential(frame, linking).unwrap_or(false);
    if !opts.validate_both {
        return essential;
    }
    match dr_oracle_bounded(frame, linking, opts.oracle_bound) {
        Ok(dr) => essential && dr,
        // Too many par links for the oracle: fall back to the essential
        // criterion alone.
        Err(OracleError::TooManyParLinks { .. }) => essential,
        Err(OracleError::IncompleteLinking) => false,
    }
}

/// Error from [`validate_essential`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncompleteLinking;

impl fmt::Display for IncompleteLinking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "linking does not match every atom occurrence exactly once"
        )
    }
}

impl std::error::Error for IncompleteLinking {}

/// Direct path criterion on the essential net: acyclic, every positive
/// implication premiss is separated from the output by its link's
/// conclusion, and every maximal path from an input ends at the output.
pub fn validate_essential(
    frame: &ProofFrame,
    linking: &Linking,
) -> Result<bool, IncompleteLinking> {
    if !linking.is_complete(frame) {
        return Err(IncompleteLinking);
    }
    let g = essential_graph(frame, linking);
    if g.has_cycle() {
        return Ok(false);
    }
    let output = frame.output - 1;
    for link in &frame.links {
        if link.is_par() && link.conn != Conn::Prod {
            let premiss = link.divisor_premiss() - 1;
            let conclusion = link.conclusion - 1;
            if conclusion != output && g.reaches(premiss, output, Some(conclusion)) {
                return Ok(false);
            }
        }
    }
    // Maximal paths from inputs end at the output: no reachable dead end
    // other than the output, and the output itself is reachable.
    for &input in &frame.inputs {
        let start = input - 1;
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut reaches_output = start == output;
        while let Some(v) = stack.pop() {
            if v == output {
                reaches_output = true;
            } else if g.successors(v).is_empty() {
                return Ok(false);
            }
            for &w in g.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if !reaches_output {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Error from the switching oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    IncompleteLinking,
    TooManyParLinks { par_links: usize, bound: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::IncompleteLinking => {
                write!(
                    f,
                    "linking does not match every atom occurrence exactly once"
                )
            }
            OracleError::TooManyParLinks { par_links, bound } => {
                write!(
                    f,
                    "{par_links} par links exceed the oracle bound of {bound}"
                )
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Switching oracle with the default par-link bound.
pub fn dr_oracle(frame: &ProofFrame, linking: &Linking) -> Result<bool, OracleError> {
    dr_oracle_bounded(frame, linking, DEFAULT_ORACLE_BOUND)
}

/// True iff every switching of the proof structure yields an acyclic,
/// connected undirected correction graph.
pub fn dr_oracle_bounded(
    frame: &ProofFrame,
    linking: &Linking,
    bound: usize,
) -> Result<bool, OracleError> {
    if !linking.is_complete(frame) {
        return Err(OracleError::IncompleteLinking);
    }
    let par_links: Vec<_> = frame.links.iter().filter(|l| l.is_par()).collect();
    let p = par_links.len();
    if p > bound {
        return Err(OracleError::TooManyParLinks {
            par_links: p,
            bound,
        });
    }
    let mut base_edges: Vec<(usize, usize)> = Vec::new();
    for link in linking.iter() {
        base_edges.push((link.neg - 1, link.pos - 1));
    }
    for link in &frame.links {
        if !link.is_par() {
            base_edges.push((link.conclusion - 1, link.left - 1));
            base_edges.push((link.conclusion - 1, link.right - 1));
        }
    }
    let v = frame.vertex_count;
    for switching in 0..(1u64 << p) {
        let mut edges = base_edges.clone();
        for (bit, link) in par_links.iter().enumerate() {
            let premiss = if switching >> bit & 1 == 0 {
                link.left
            } else {
                link.right
            };
            edges.push((link.conclusion - 1, premiss - 1));
        }
        if !is_tree(v, &edges) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Acyclic and connected undirected graph check via union-find.
fn is_tree(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = v;
    for &(a, b) in edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            return false; // undirected cycle
        }
        parent[ra] = rb;
        components -= 1;
    }
    components == 1
}

/// True unless the candidate crosses a committed link under the frame's
/// left-to-right atom positions.
pub fn planar_ok(frame: &ProofFrame, link: LinkId, committed: &Linking) -> bool {
    let span = |l: LinkId| {
        let a = frame.position(l.neg).expect("negative occurrence");
        let b = frame.position(l.pos).expect("positive occurrence");
        (a.min(b), a.max(b))
    };
    let (lo, hi) = span(link);
    for other in committed.iter() {
        let (olo, ohi) = span(other);
        if (lo < olo && olo < hi && hi < ohi) || (olo < lo && lo < ohi && ohi < hi) {
            return false;
        }
    }
    true
}

/// Which validator the brute-force enumerator applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validator {
    Essential,
    DanosRegnier,
}

/// Error from [`enumerate_bruteforce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteforceError {
    TooManyLinkings { count: u128, bound: u128 },
    Oracle(OracleError),
}

impl fmt::Display for BruteforceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruteforceError::TooManyLinkings { count, bound } => {
                write!(f, "{count} complete linkings exceed the bound of {bound}")
            }
            BruteforceError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BruteforceError {}

/// Enumerate every complete matching and keep those the chosen validator
/// accepts. Desk-scale instrument: refuses above the linking-count bound.
pub fn enumerate_bruteforce(
    frame: &ProofFrame,
    validator: Validator,
) -> Result<Vec<Linking>, BruteforceError> {
    let count = match count_linkings(frame) {
        Ok(c) => c,
        // Unbalanced frames admit no complete matching.
        Err(crate::frame::CountError::Unbalanced { .. }) => return Ok(Vec::new()),
        Err(crate::frame::CountError::Overflow) => {
            return Err(BruteforceError::TooManyLinkings {
                count: u128::MAX,
                bound: DEFAULT_BRUTEFORCE_BOUND,
            })
        }
    };
    if count > DEFAULT_BRUTEFORCE_BOUND {
        return Err(BruteforceError::TooManyLinkings {
            count,
            bound: DEFAULT_BRUTEFORCE_BOUND,
        });
    }
    // All matchings of one block, in lexicographic permutation order.
    let cands = candidate_links(frame);
    let mut block_choices: Vec<Vec<Vec<LinkId>>> = Vec::new();
    for block in &cands.blocks {
        let neg: Vec<usize> = block.neg.iter().map(|o| o.id).collect();
        let pos: Vec<usize> = block.pos.iter().map(|o| o.id).collect();
        let mut perm: Vec<usize> = (0..pos.len()).collect();
        let mut choices = Vec::new();
        loop {
            choices.push(
                perm.iter()
                    .enumerate()
                    .map(|(i, &j)| LinkId::new(neg[i], pos[j]))
                    .collect::<Vec<_>>(),
            );
            if !next_permutation(&mut perm) {
                break;
            }
        }
        block_choices.push(choices);
    }
    // Odometer over the cartesian product of the per-block matchings.
    let mut out = Vec::new();
    let mut idx = vec![0usize; block_choices.len()];
    'product: loop {
        let mut linking = Linking::new();
        for (b, &i) in idx.iter().enumerate() {
            for &link in &block_choices[b][i] {
                linking.insert(link);
            }
        }
        let keep = match validator {
            Validator::Essential => validate_essential(frame, &linking).expect("complete linking"),
            Validator::DanosRegnier => {
                dr_oracle(frame, &linking).map_err(BruteforceError::Oracle)?
            }
        };
        if keep {
            out.push(linking);
        }
        for b in (0..idx.len()).rev() {
            idx[b] += 1;
            if idx[b] < block_choices[b].len() {
                continue 'product;
            }
            idx[b] = 0;
        }
        break;
    }
    Ok(out)
}

// Lexicographic successor; false when perm was the last one.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sequent;

    fn frame_of(text: &str) -> Arc<ProofFrame> {
        Arc::new(unfold(&parse_sequent(text).unwrap()))
    }

    fn prove_text(text: &str) -> Vec<ProofNet> {
        prove(&parse_sequent(text).unwrap(), &SearchOptions::default())
    }

    #[test]
    fn prove_axiom_sequent() {
        let nets = prove_text("s |- s");
        assert_eq!(nets.len(), 1);
        assert_eq!(nets[0].linking, Linking::from_pairs([(1, 2)]));
    }

    #[test]
    fn prove_unbalanced_is_empty() {
        assert!(prove_text("np |- s").is_empty());
    }

    #[test]
    fn prove_worked_example_two_nets() {
        let nets = prove_text("s/(np\\s), (s/(np\\s))\\s |- s");
        let linkings: Vec<Linking> = nets.iter().map(|n| n.linking.clone()).collect();
        assert_eq!(
            linkings,
            vec![
                Linking::from_pairs([(1, 5), (2, 4), (3, 6), (7, 8)]),
                Linking::from_pairs([(1, 6), (2, 5), (3, 4), (7, 8)]),
            ]
        );
    }

    #[test]
    fn prove_respects_max_solutions() {
        let opts = SearchOptions {
            max_solutions: Some(1),
            ..SearchOptions::default()
        };
        let nets = prove(
            &parse_sequent("s/(np\\s), (s/(np\\s))\\s |- s").unwrap(),
            &opts,
        );
        assert_eq!(nets.len(), 1);
        assert_eq!(
            nets[0].linking,
            Linking::from_pairs([(1, 5), (2, 4), (3, 6), (7, 8)])
        );
    }

    #[test]
    fn validate_essential_worked_example() {
        let frame = frame_of("s/(np\\s), (s/(np\\s))\\s |- s");
        let good = Linking::from_pairs([(1, 5), (2, 4), (3, 6), (7, 8)]);
        assert_eq!(validate_essential(&frame, &good), Ok(true));
        // s1-s4 closes a cycle through vertex 10.
        let bad = Linking::from_pairs([(1, 4), (2, 5), (3, 6), (7, 8)]);
        assert_eq!(validate_essential(&frame, &bad), Ok(false));
        let incomplete = Linking::from_pairs([(1, 5)]);
        assert_eq!(
            validate_essential(&frame, &incomplete),
            Err(IncompleteLinking)
        );
    }

    #[test]
    fn validate_essential_axiom() {
        let frame = frame_of("s |- s");
        assert_eq!(
            validate_essential(&frame, &Linking::from_pairs([(1, 2)])),
            Ok(true)
        );
    }

    #[test]
    fn dr_oracle_worked_example() {
        let frame = frame_of("s/(np\\s), (s/(np\\s))\\s |- s");
        let good = Linking::from_pairs([(1, 5), (2, 4), (3, 6), (7, 8)]);
        assert_eq!(dr_oracle(&frame, &good), Ok(true));
        let also_good = Linking::from_pairs([(1, 6), (2, 5), (3, 4), (7, 8)]);
        assert_eq!(dr_oracle(&frame, &also_good), Ok(true));
        let bad = Linking::from_pairs([(1, 4), (2, 5), (3, 6), (7, 8)]);
        assert_eq!(dr_oracle(&frame, &bad), Ok(false));
    }

    #[test]
    fn dr_oracle_refuses_over_bound() {
        let frame = frame_of("s |- s");
        let linking = Linking::from_pairs([(1, 2)]);
        assert!(matches!(
            dr_oracle_bounded(&frame, &linking, 0),
            Ok(true) // zero par links stays within a zero bound
        ));
        let frame2 = frame_of("a*b |- a*b");
        let linking2 = Linking::from_pairs([(1, 2), (3, 4)]);
        assert!(matches!(
            dr_oracle_bounded(&frame2, &linking2, 0),
            Err(OracleError::TooManyParLinks {
                par_links: 1,
                bound: 0
            })
        ));
    }

    #[test]
    fn planar_ok_detects_crossings() {
        let frame = frame_of("s/(np\\s), (s/(np\\s))\\s |- s");
        // positions: s1=0 s4=1 np7=2 np8=3 s2=4 s5=5 s3=6 s6=7
        let committed = Linking::from_pairs([(1, 6)]); // span 0..7
        assert!(planar_ok(&frame, LinkId::new(2, 5), &committed)); // 4..5 nested
        let committed = Linking::from_pairs([(1, 5)]); // span 0..5
        assert!(!planar_ok(&frame, LinkId::new(2, 6), &committed)); // 4..7 crosses
    }

    #[test]
    fn bruteforce_agrees_with_prove_on_worked_example() {
        let frame = frame_of("s/(np\\s), (s/(np\\s))\\s |- s");
        let by_dr = enumerate_bruteforce(&frame, Validator::DanosRegnier).unwrap();
        let by_ess = enumerate_bruteforce(&frame, Validator::Essential).unwrap();
        assert_eq!(by_dr.len(), 2);
        assert_eq!(by_ess, by_dr);
        let proved: Vec<Linking> = prove_text("s/(np\\s), (s/(np\\s))\\s |- s")
            .into_iter()
            .map(|n| n.linking)
            .collect();
        let mut sorted = proved.clone();
        sorted.sort();
        assert_eq!(sorted, by_dr);
    }

    #[test]
    fn bruteforce_refuses_oversized_frames() {
        // 8 pairs of one atom: 8! = 40320 matchings, over the bound.
        let text = format!("{} |- {}", vec!["x"; 8].join(", "), vec!["x"; 8].join("*"));
        let frame = frame_of(&text);
        assert!(matches!(
            enumerate_bruteforce(&frame, Validator::Essential),
            Err(BruteforceError::TooManyLinkings { count: 40320, .. })
        ));
    }

    #[test]
    fn bruteforce_axiom() {
        let frame = frame_of("s |- s");
        let all = enumerate_bruteforce(&frame, Validator::DanosRegnier).unwrap();
        assert_eq!(all, vec![Linking::from_pairs([(1, 2)])]);
    }

    #[test]
    fn every_returned_net_revalidates() {
        for text in [
            "s |- s",
            "s/(np\\s), (s/(np\\s))\\s |- s",
            "np, np\\s |- s",
            "a*b |- a*b",
            "a*b |- b*a",
            "|- a\\a",
        ] {
            for net in prove_text(text) {
                assert_eq!(
                    validate_essential(&net.frame, &net.linking),
                    Ok(true),
                    "{text}"
                );
                assert_eq!(dr_oracle(&net.frame, &net.linking), Ok(true), "{text}");
            }
        }
    }

    #[test]
    fn planar_mode_is_a_subset_and_rejects_twists() {
        // a/a |- a\a holds commutatively but not in the planar order.
        let seq = parse_sequent("a/a |- a\\a").unwrap();
        let unrestricted = prove(&seq, &SearchOptions::default());
        assert_eq!(unrestricted.len(), 1);
        let planar = prove(
            &seq,
            &SearchOptions {
                planar: true,
                ..SearchOptions::default()
            },
        );
        assert!(planar.is_empty());
    }

    #[test]
    fn weights_fill_in() {
        let nets = prove_text("s/(np\\s), (s/(np\\s))\\s |- s");
        assert_eq!(nets[0].weight, Some(10));
        assert_eq!(nets[1].weight, Some(14));
    }
}
