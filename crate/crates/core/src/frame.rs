//! Unfolding a sequent into a proof frame: indexed atom occurrences, the
//! tensor/par link skeleton, the directed essential-net skeleton, and the
//! candidate axiom-link matrix.
//!
//! Vertex numbering convention: atoms come first, grouped by atom name (names
//! ordered by first occurrence), negatives before positives within a group,
//! each in left-to-right order; internal link vertices follow, numbered
//! left to right. Left-to-right order is the in-order traversal of each
//! unfolded antecedent formula, then the succedent, where negative links
//! list their premisses in textual order and positive links swap them.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::closure::Digraph;
use crate::formula::{Formula, Polarity, Sequent};

/// 1-based vertex index into a proof frame.
pub type VertexId = usize;

/// An axiom-link candidate: a negative and a positive occurrence of the
/// same atom, identified by their vertex ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId {
    pub neg: VertexId,
    pub pos: VertexId,
}

impl LinkId {
    pub fn new(neg: VertexId, pos: VertexId) -> LinkId {
        LinkId { neg, pos }
    }
}

impl fmt::Debug for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.neg, self.pos)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.neg, self.pos)
    }
}

/// One atom occurrence of the frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomOccurrence {
    pub id: VertexId,
    pub name: String,
    pub polarity: Polarity,
    /// 0-based left-to-right index among all atom occurrences.
    pub position: usize,
}

/// Connective of a compound occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conn {
    Over,
    Under,
    Prod,
}

/// A tensor or par link produced by unfolding one compound occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameLink {
    pub conn: Conn,
    pub polarity: Polarity,
    pub conclusion: VertexId,
    /// Premisses in drawn (left, right) order.
    pub left: VertexId,
    pub right: VertexId,
}

impl FrameLink {
    /// Par links are the switched ones: positive `/` and `\`, negative `*`.
    pub fn is_par(&self) -> bool {
        matches!(
            (self.conn, self.polarity),
            (Conn::Over, Polarity::Positive)
                | (Conn::Under, Polarity::Positive)
                | (Conn::Prod, Polarity::Negative)
        )
    }

    /// The negative premiss of a positive `/` or `\` link (its divisor).
    pub fn divisor_premiss(&self) -> VertexId {
        match (self.conn, self.polarity) {
            // positive links draw the divisor on the swapped side
            (Conn::Over, Polarity::Positive) => self.left,
            (Conn::Under, Polarity::Positive) => self.right,
            (Conn::Over, Polarity::Negative) => self.right,
            (Conn::Under, Polarity::Negative) => self.left,
            (Conn::Prod, _) => panic!("product links have no divisor"),
        }
    }
}

/// Frame-level counts: negative conclusions, tensor links, par links and
/// axiom links (= positive atom occurrences; equal to the negatives when
/// the frame is balanced).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameStats {
    pub h: usize,
    pub t: usize,
    pub p: usize,
    pub a: usize,
}

/// The fully unfolded sequent, before any axiom links are chosen.
#[derive(Clone, Debug)]
pub struct ProofFrame {
    pub sequent: Sequent,
    pub atoms: Vec<AtomOccurrence>,
    pub links: Vec<FrameLink>,
    /// Total vertex count; ids run 1..=vertex_count.
    pub vertex_count: usize,
    /// Structural essential-net edges (no axiom edges).
    pub ess_edges: Vec<(VertexId, VertexId)>,
    /// Negative conclusions plus negative premisses of positive `/`, `\` links.
    pub inputs: Vec<VertexId>,
    /// The positive conclusion.
    pub output: VertexId,
    pub stats: FrameStats,
    /// Pretty-printed subformula per vertex, indexed by id-1.
    pub labels: Vec<String>,
}

impl ProofFrame {
    pub fn atom(&self, id: VertexId) -> Option<&AtomOccurrence> {
        self.atoms.iter().find(|o| o.id == id)
    }

    /// Position of an atom vertex in the left-to-right order.
    pub fn position(&self, id: VertexId) -> Option<usize> {
        self.atom(id).map(|o| o.position)
    }

    /// Short tag for an atom vertex, e.g. `s1` or `np7`.
    pub fn atom_tag(&self, id: VertexId) -> String {
        match self.atom(id) {
            Some(o) => format!("{}{}", o.name, o.id),
            None => format!("v{id}"),
        }
    }

    pub fn label(&self, id: VertexId) -> &str {
        &self.labels[id - 1]
    }

    /// True iff every atom name has as many negative as positive occurrences.
    pub fn is_balanced(&self) -> bool {
        let mut by_name: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for occ in &self.atoms {
            let e = by_name.entry(&occ.name).or_insert((0, 0));
            match occ.polarity {
                Polarity::Negative => e.0 += 1,
                Polarity::Positive => e.1 += 1,
            }
        }
        by_name.values().all(|&(n, p)| n == p)
    }
}

// One node of the unfolded occurrence tree, stored in a flat arena.
// `children` holds arena indices in drawn (left, right) order.
struct OccNode {
    formula: Formula,
    polarity: Polarity,
    children: Option<(usize, usize)>,
    conn: Option<Conn>,
    vertex: VertexId, // assigned after traversal
}

fn build_occ(arena: &mut Vec<OccNode>, formula: &Formula, polarity: Polarity) -> usize {
    let (children, conn) = match formula {
        Formula::Atom(_) => (None, None),
        Formula::Over(num, div) => {
            let num = build_occ(arena, num, polarity);
            let div = build_occ(arena, div, polarity.flip());
            let pair = match polarity {
                Polarity::Negative => (num, div),
                Polarity::Positive => (div, num),
            };
            (Some(pair), Some(Conn::Over))
        }
        Formula::Under(div, num) => {
            let div = build_occ(arena, div, polarity.flip());
            let num = build_occ(arena, num, polarity);
            let pair = match polarity {
                Polarity::Negative => (div, num),
                Polarity::Positive => (num, div),
            };
            (Some(pair), Some(Conn::Under))
        }
        Formula::Prod(l, r) => {
            let l = build_occ(arena, l, polarity);
            let r = build_occ(arena, r, polarity);
            let pair = match polarity {
                Polarity::Negative => (l, r),
                Polarity::Positive => (r, l),
            };
            (Some(pair), Some(Conn::Prod))
        }
    };
    arena.push(OccNode {
        formula: formula.clone(),
        polarity,
        children,
        conn,
        vertex: 0,
    });
    arena.len() - 1
}

fn collect_in_order(arena: &[OccNode], node: usize, out: &mut Vec<usize>) {
    if let Some((l, r)) = arena[node].children {
        collect_in_order(arena, l, out);
        out.push(node);
        collect_in_order(arena, r, out);
    } else {
        out.push(node);
    }
}

/// Unfold a sequent into its proof frame.
pub fn unfold(sequent: &Sequent) -> ProofFrame {
    let mut arena: Vec<OccNode> = Vec::new();
    let mut roots: Vec<usize> = sequent
        .antecedent
        .iter()
        .map(|f| build_occ(&mut arena, f, Polarity::Negative))
        .collect();
    roots.push(build_occ(
        &mut arena,
        &sequent.succedent,
        Polarity::Positive,
    ));

    // Left-to-right order: in-order walk of each antecedent, then the
    // succedent.
    let mut order: Vec<usize> = Vec::new();
    for &root in &roots {
        collect_in_order(&arena, root, &mut order);
    }
    let atom_slots: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| arena[i].children.is_none())
        .collect();
    let internal_slots: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| arena[i].children.is_some())
        .collect();
    let a_total = atom_slots.len();

    // Group atoms by name (first-occurrence order), negatives before
    // positives, each subgroup in position order; assign ids 1..=a_total.
    let mut name_order: Vec<String> = Vec::new();
    for &i in &atom_slots {
        if let Formula::Atom(name) = &arena[i].formula {
            if !name_order.iter().any(|n| n == name) {
                name_order.push(name.clone());
            }
        }
    }
    let mut next_id: VertexId = 1;
    for name in &name_order {
        for want_pol in [Polarity::Negative, Polarity::Positive] {
            for &i in &atom_slots {
                let matches = matches!(&arena[i].formula, Formula::Atom(n) if n == name)
                    && arena[i].polarity == want_pol;
                if matches {
                    arena[i].vertex = next_id;
                    next_id += 1;
                }
            }
        }
    }
    for &i in &internal_slots {
        arena[i].vertex = next_id;
        next_id += 1;
    }
    let vertex_count = next_id - 1;

    let mut atoms = Vec::with_capacity(a_total);
    for (position, &i) in atom_slots.iter().enumerate() {
        if let Formula::Atom(name) = &arena[i].formula {
            atoms.push(AtomOccurrence {
                id: arena[i].vertex,
                name: name.clone(),
                polarity: arena[i].polarity,
                position,
            });
        }
    }
    atoms.sort_by_key(|o| o.id);

    let mut links = Vec::new();
    let mut ess_edges = Vec::new();
    for &i in &internal_slots {
        let node = &arena[i];
        let (l, r) = node.children.expect("internal node");
        let link = FrameLink {
            conn: node.conn.expect("internal node"),
            polarity: node.polarity,
            conclusion: node.vertex,
            left: arena[l].vertex,
            right: arena[r].vertex,
        };
        push_ess_edges(&link, &mut ess_edges);
        links.push(link);
    }
    links.sort_by_key(|l| l.conclusion);
    ess_edges.sort();

    let mut labels = vec![String::new(); vertex_count];
    for &i in &order {
        labels[arena[i].vertex - 1] = arena[i].formula.to_string();
    }

    // Inputs: negative conclusions, plus divisor premisses of positive
    // implication links.
    let mut inputs: Vec<VertexId> = roots[..roots.len() - 1]
        .iter()
        .map(|&r| arena[r].vertex)
        .collect();
    for link in &links {
        if link.is_par() && link.conn != Conn::Prod {
            inputs.push(link.divisor_premiss());
        }
    }
    inputs.sort_unstable();
    inputs.dedup();
    let output = arena[*roots.last().unwrap()].vertex;

    let h = sequent.antecedent.len();
    let t = links.iter().filter(|l| !l.is_par()).count();
    let p = links.iter().filter(|l| l.is_par()).count();
    let a = atoms
        .iter()
        .filter(|o| o.polarity == Polarity::Positive)
        .count();

    ProofFrame {
        sequent: sequent.clone(),
        atoms,
        links,
        vertex_count,
        ess_edges,
        inputs,
        output,
        stats: FrameStats { h, t, p, a },
        labels,
    }
}

// Essential-net edge shapes. Implication links route through the numerator
// premiss; products branch at (negative) or join into (positive) the
// conclusion. Axiom edges (added later) run negative -> positive.
fn push_ess_edges(link: &FrameLink, edges: &mut Vec<(VertexId, VertexId)>) {
    let c = link.conclusion;
    match (link.conn, link.polarity) {
        (Conn::Over, Polarity::Negative) => {
            edges.push((c, link.left));
            edges.push((link.right, link.left));
        }
        (Conn::Under, Polarity::Negative) => {
            edges.push((c, link.right));
            edges.push((link.left, link.right));
        }
        (Conn::Over, Polarity::Positive) => {
            edges.push((link.right, c));
        }
        (Conn::Under, Polarity::Positive) => {
            edges.push((link.left, c));
        }
        (Conn::Prod, Polarity::Negative) => {
            edges.push((c, link.left));
            edges.push((c, link.right));
        }
        (Conn::Prod, Polarity::Positive) => {
            edges.push((link.left, c));
            edges.push((link.right, c));
        }
    }
}

/// A set of axiom links; complete when it matches every occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Linking {
    pairs: BTreeSet<(VertexId, VertexId)>,
}

impl Linking {
    pub fn new() -> Linking {
        Linking::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Linking {
        Linking {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, link: LinkId) {
        self.pairs.insert((link.neg, link.pos));
    }

    pub fn iter(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.pairs.iter().map(|&(n, p)| LinkId::new(n, p))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, link: LinkId) -> bool {
        self.pairs.contains(&(link.neg, link.pos))
    }

    /// True iff every atom occurrence of the frame is matched exactly once,
    /// each pair joining a negative and a positive occurrence of one name.
    pub fn is_complete(&self, frame: &ProofFrame) -> bool {
        let mut seen = BTreeSet::new();
        for &(n, p) in &self.pairs {
            match (frame.atom(n), frame.atom(p)) {
                (Some(neg), Some(pos))
                    if neg.polarity == Polarity::Negative
                        && pos.polarity == Polarity::Positive
                        && neg.name == pos.name => {}
                _ => return false,
            }
            if !seen.insert(n) || !seen.insert(p) {
                return false;
            }
        }
        frame.atoms.len() == seen.len()
    }
}

impl fmt::Display for Linking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, link) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{link}")?;
        }
        Ok(())
    }
}

/// One occurrence reference inside a candidate block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OccRef {
    pub id: VertexId,
    pub position: usize,
}

/// Admissible axiom links for one atom name: rows are negative occurrences,
/// columns positive, both in position order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateBlock {
    pub name: String,
    pub neg: Vec<OccRef>,
    pub pos: Vec<OccRef>,
    cells: Vec<bool>,
}

impl CandidateBlock {
    fn idx(&self, row: usize, col: usize) -> usize {
        row * self.pos.len() + col
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[self.idx(row, col)]
    }

    pub fn row_count(&self, row: usize) -> usize {
        (0..self.pos.len()).filter(|&c| self.get(row, c)).count()
    }

    pub fn col_count(&self, col: usize) -> usize {
        (0..self.neg.len()).filter(|&r| self.get(r, col)).count()
    }

    pub fn open_links(&self) -> impl Iterator<Item = LinkId> + '_ {
        (0..self.neg.len()).flat_map(move |r| {
            (0..self.pos.len()).filter_map(move |c| {
                if self.get(r, c) {
                    Some(LinkId::new(self.neg[r].id, self.pos[c].id))
                } else {
                    None
                }
            })
        })
    }
}

/// The per-name candidate blocks of a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateMatrix {
    pub blocks: Vec<CandidateBlock>,
}

impl CandidateMatrix {
    /// All currently admissible links, in block/row/column order.
    pub fn open_links(&self) -> Vec<LinkId> {
        self.blocks.iter().flat_map(|b| b.open_links()).collect()
    }

    pub fn total_open(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.cells.iter().filter(|&&x| x).count())
            .sum()
    }

    pub fn contains(&self, link: LinkId) -> bool {
        self.locate(link).map(|(b, r, c)| self.blocks[b].get(r, c)) == Some(true)
    }

    fn locate(&self, link: LinkId) -> Option<(usize, usize, usize)> {
        for (bi, block) in self.blocks.iter().enumerate() {
            if let Some(r) = block.neg.iter().position(|o| o.id == link.neg) {
                if let Some(c) = block.pos.iter().position(|o| o.id == link.pos) {
                    return Some((bi, r, c));
                }
            }
        }
        None
    }

    /// Mark one cell inadmissible. Returns true if it was open.
    pub fn remove(&mut self, link: LinkId) -> bool {
        if let Some((b, r, c)) = self.locate(link) {
            let block = &mut self.blocks[b];
            let i = block.idx(r, c);
            let was = block.cells[i];
            block.cells[i] = false;
            was
        } else {
            false
        }
    }

    /// Commit a link: drop its row and column from the block.
    pub fn commit(&mut self, link: LinkId) {
        if let Some((b, r, c)) = self.locate(link) {
            let block = &mut self.blocks[b];
            let cols = block.pos.len();
            let mut cells = Vec::with_capacity((block.neg.len() - 1) * (cols - 1));
            for rr in 0..block.neg.len() {
                for cc in 0..cols {
                    if rr != r && cc != c {
                        cells.push(block.cells[rr * cols + cc]);
                    }
                }
            }
            block.neg.remove(r);
            block.pos.remove(c);
            block.cells = cells;
        }
    }

    /// Links forced by a row or column with a single surviving cell.
    pub fn forced(&self) -> Vec<LinkId> {
        let mut out = Vec::new();
        for block in &self.blocks {
            for r in 0..block.neg.len() {
                if block.row_count(r) == 1 {
                    let c = (0..block.pos.len()).find(|&c| block.get(r, c)).unwrap();
                    out.push(LinkId::new(block.neg[r].id, block.pos[c].id));
                }
            }
            for c in 0..block.pos.len() {
                if block.col_count(c) == 1 {
                    let r = (0..block.neg.len()).find(|&r| block.get(r, c)).unwrap();
                    out.push(LinkId::new(block.neg[r].id, block.pos[c].id));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// True when some unmatched row or column has no surviving cell.
    pub fn has_empty_line(&self) -> bool {
        self.blocks.iter().any(|b| {
            (0..b.neg.len()).any(|r| b.row_count(r) == 0)
                || (0..b.pos.len()).any(|c| b.col_count(c) == 0)
        })
    }

    /// Exclusion partners: open cells sharing the row or column of `link`.
    pub fn conflicting(&self, link: LinkId) -> Vec<LinkId> {
        let mut out = Vec::new();
        if let Some((b, r, c)) = self.locate(link) {
            let block = &self.blocks[b];
            for cc in 0..block.pos.len() {
                if cc != c && block.get(r, cc) {
                    out.push(LinkId::new(block.neg[r].id, block.pos[cc].id));
                }
            }
            for rr in 0..block.neg.len() {
                if rr != r && block.get(rr, c) {
                    out.push(LinkId::new(block.neg[rr].id, block.pos[c].id));
                }
            }
        }
        out.sort();
        out
    }
}

/// All-admissible candidate matrix of a frame: one cell per pair of opposite
/// polarity occurrences of the same atom name.
pub fn candidate_links(frame: &ProofFrame) -> CandidateMatrix {
    let mut name_order: Vec<&str> = Vec::new();
    let mut by_position: Vec<&AtomOccurrence> = frame.atoms.iter().collect();
    by_position.sort_by_key(|o| o.position);
    for occ in &by_position {
        if !name_order.iter().any(|&n| n == occ.name) {
            name_order.push(&occ.name);
        }
    }
    let mut blocks = Vec::new();
    for name in name_order {
        let neg: Vec<OccRef> = by_position
            .iter()
            .filter(|o| o.name == name && o.polarity == Polarity::Negative)
            .map(|o| OccRef {
                id: o.id,
                position: o.position,
            })
            .collect();
        let pos: Vec<OccRef> = by_position
            .iter()
            .filter(|o| o.name == name && o.polarity == Polarity::Positive)
            .map(|o| OccRef {
                id: o.id,
                position: o.position,
            })
            .collect();
        let cells = vec![true; neg.len() * pos.len()];
        blocks.push(CandidateBlock {
            name: name.to_string(),
            neg,
            pos,
            cells,
        });
    }
    CandidateMatrix { blocks }
}

/// Error from [`count_linkings`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountError {
    Unbalanced {
        name: String,
        neg: usize,
        pos: usize,
    },
    Overflow,
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::Unbalanced { name, neg, pos } => write!(
                f,
                "atom {name} has {neg} negative but {pos} positive occurrences"
            ),
            CountError::Overflow => write!(f, "linking count overflows"),
        }
    }
}

impl std::error::Error for CountError {}

/// Number of complete axiom linkings: the product over atom names of the
/// factorial of the occurrence count.
pub fn count_linkings(frame: &ProofFrame) -> Result<u128, CountError> {
    let mut by_name: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for occ in &frame.atoms {
        let e = by_name.entry(&occ.name).or_insert((0, 0));
        match occ.polarity {
            Polarity::Negative => e.0 += 1,
            Polarity::Positive => e.1 += 1,
        }
    }
    let mut total: u128 = 1;
    for (name, (neg, pos)) in by_name {
        if neg != pos {
            return Err(CountError::Unbalanced {
                name: name.to_string(),
                neg,
                pos,
            });
        }
        for k in 1..=neg as u128 {
            total = total.checked_mul(k).ok_or(CountError::Overflow)?;
        }
    }
    Ok(total)
}

/// The essential net of a frame plus a (possibly partial) linking: the
/// structural edges and one negative->positive edge per chosen axiom link.
pub fn essential_graph(frame: &ProofFrame, partial: &Linking) -> Digraph {
    let mut g = Digraph::new(frame.vertex_count);
    for &(a, b) in &frame.ess_edges {
        g.add_edge(a - 1, b - 1);
    }
    for link in partial.iter() {
        g.add_edge(link.neg - 1, link.pos - 1);
    }
    g
}
