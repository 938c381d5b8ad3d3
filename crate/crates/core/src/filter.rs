//! Candidate pruning: the acyclicity filter over committed edges, the
//! connectedness filter over the exclusion-annotated closure, and the
//! most-constrained-line selector that drives the search.

use crate::closure::{
    bool_closure, excl_closure, AnnotatedDigraph, BoolMatrix, ClosureMatrix, ExclusionSet,
};
use crate::formula::Polarity;
use crate::frame::{essential_graph, CandidateMatrix, Conn, LinkId, Linking, ProofFrame, VertexId};

/// Why a vertex pair must stay connected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrigin {
    /// An input of the net must reach the output.
    InputToOutput,
    /// A branch of a negative product link must reach the output.
    NegProdBranch,
    /// The divisor premiss of a positive implication link must reach the
    /// link's own conclusion.
    PosParPremiss,
}

/// A connectivity requirement on the essential net.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RequiredPair {
    pub source: VertexId,
    pub target: VertexId,
    pub origin: PairOrigin,
}

/// The connectivity checklist of a frame: every input reaches the output,
/// both branches of a negative product reach the output, and each positive
/// implication premiss reaches its conclusion, which reaches the output.
pub fn required_pairs(frame: &ProofFrame) -> Vec<RequiredPair> {
    let mut pairs = Vec::new();
    for &input in &frame.inputs {
        pairs.push(RequiredPair {
            source: input,
            target: frame.output,
            origin: PairOrigin::InputToOutput,
        });
    }
    for link in &frame.links {
        if link.is_par() && link.conn != Conn::Prod {
            pairs.push(RequiredPair {
                source: link.divisor_premiss(),
                target: link.conclusion,
                origin: PairOrigin::PosParPremiss,
            });
            // degenerate when the link is the succedent root
            if link.conclusion != frame.output {
                pairs.push(RequiredPair {
                    source: link.conclusion,
                    target: frame.output,
                    origin: PairOrigin::InputToOutput,
                });
            }
        }
        if link.conn == Conn::Prod && link.polarity == Polarity::Negative {
            for premiss in [link.left, link.right] {
                pairs.push(RequiredPair {
                    source: premiss,
                    target: frame.output,
                    origin: PairOrigin::NegProdBranch,
                });
            }
        }
    }
    pairs
}

/// Remove every candidate `(n, p)` that would close a directed cycle, i.e.
/// those with `reach(p, n)` in the closure of the structural-plus-committed
/// graph.
pub fn prune_cycles(cands: &CandidateMatrix, closure: &BoolMatrix) -> CandidateMatrix {
    let mut pruned = cands.clone();
    for link in cands.open_links() {
        if closure.reach(link.pos - 1, link.neg - 1) {
            pruned.remove(link);
        }
    }
    pruned
}

/// Result of a connectedness pass.
#[derive(Clone, Debug)]
pub struct PruneResult {
    pub pruned: CandidateMatrix,
    /// Surviving cells alone in their row or column.
    pub forced: Vec<LinkId>,
    /// Set when a required pair is unreachable or a line has no cells left.
    pub failed: bool,
}

/// Build the annotated graph for a frame state: structural and committed
/// edges carry empty sets, every open candidate carries the set of open
/// candidates its selection excludes (its row and column mates).
pub fn annotate(
    frame: &ProofFrame,
    cands: &CandidateMatrix,
    committed: &Linking,
) -> AnnotatedDigraph {
    let mut g = AnnotatedDigraph::new(frame.vertex_count);
    for &(a, b) in &frame.ess_edges {
        g.add_edge(a - 1, b - 1, ExclusionSet::empty());
    }
    for link in committed.iter() {
        g.add_edge(link.neg - 1, link.pos - 1, ExclusionSet::empty());
    }
    for link in cands.open_links() {
        let excl = ExclusionSet::from_links(cands.conflicting(link));
        g.add_edge(link.neg - 1, link.pos - 1, excl);
    }
    g
}

/// Remove every candidate whose selection would sever a required pair, and
/// flag failure when a required pair has no path at all or a row/column runs
/// out of cells.
pub fn prune_connectedness(
    cands: &CandidateMatrix,
    aclosure: &ClosureMatrix,
    reqs: &[RequiredPair],
) -> PruneResult {
    let mut pruned = cands.clone();
    let mut failed = false;
    for req in reqs {
        debug_assert_ne!(req.source, req.target);
        match aclosure.entry(req.source - 1, req.target - 1) {
            None => failed = true,
            Some(excl) => {
                for link in excl.iter() {
                    pruned.remove(link);
                }
            }
        }
    }
    if pruned.has_empty_line() {
        failed = true;
    }
    let forced = pruned.forced();
    PruneResult {
        pruned,
        forced,
        failed,
    }
}

/// One full filtering pass: acyclicity against the committed graph, then
/// connectedness against the annotated closure of the surviving candidates.
pub fn prune_pass(frame: &ProofFrame, cands: &CandidateMatrix, committed: &Linking) -> PruneResult {
    let committed_graph = essential_graph(frame, committed);
    let bclosure = bool_closure(&committed_graph);
    let after_cycles = prune_cycles(cands, &bclosure);
    let annotated = annotate(frame, &after_cycles, committed);
    let aclosure = excl_closure(&annotated);
    prune_connectedness(&after_cycles, &aclosure, &required_pairs(frame))
}

/// The selector's verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// The first candidate of the most constrained row or column.
    Chosen(LinkId),
    /// No open cells remain.
    Exhausted,
}

/// Candidates of the most constrained row or column, in ascending partner
/// position. Lines tie-break by the position of their occurrence.
pub fn select_branch(cands: &CandidateMatrix) -> Vec<LinkId> {
    // (count, occurrence position) per non-empty row and column
    let mut best: Option<(usize, usize, Vec<LinkId>)> = None;
    for block in &cands.blocks {
        for r in 0..block.neg.len() {
            let count = block.row_count(r);
            if count == 0 {
                continue;
            }
            let occ = block.neg[r];
            let candidates = || {
                (0..block.pos.len())
                    .filter(|&c| block.get(r, c))
                    .map(|c| LinkId::new(occ.id, block.pos[c].id))
                    .collect::<Vec<_>>()
            };
            match &best {
                Some((bc, bp, _)) if (*bc, *bp) <= (count, occ.position) => {}
                _ => best = Some((count, occ.position, candidates())),
            }
        }
        for c in 0..block.pos.len() {
            let count = block.col_count(c);
            if count == 0 {
                continue;
            }
            let occ = block.pos[c];
            let candidates = || {
                (0..block.neg.len())
                    .filter(|&r| block.get(r, c))
                    .map(|r| LinkId::new(block.neg[r].id, occ.id))
                    .collect::<Vec<_>>()
            };
            match &best {
                Some((bc, bp, _)) if (*bc, *bp) <= (count, occ.position) => {}
                _ => best = Some((count, occ.position, candidates())),
            }
        }
    }
    best.map(|(_, _, links)| links).unwrap_or_default()
}

/// First candidate of the most constrained line, or `Exhausted`.
pub fn select_link(result: &PruneResult) -> Selection {
    match select_branch(&result.pruned).first() {
        Some(&link) => Selection::Chosen(link),
        None => Selection::Exhausted,
    }
}
