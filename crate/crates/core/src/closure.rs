//! Transitive closure in two flavors: a boolean Floyd-Warshall over plain
//! directed graphs, and an annotated variant whose entries carry the set of
//! candidate axiom links whose selection would destroy every path between
//! the two vertices. Paths have length >= 1 throughout, so a reachable
//! diagonal entry signals a genuine cycle.

use crate::frame::LinkId;

/// A directed graph over vertices `0..vertex_count`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertex_count: usize) -> Digraph {
        Digraph {
            vertex_count,
            adj: vec![Vec::new(); vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if !self.adj[from].contains(&to) {
            self.adj[from].push(to);
        }
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, succ)| succ.iter().map(move |&b| (a, b)))
    }

    /// Depth-first reachability, optionally treating one vertex as deleted.
    pub fn reaches(&self, from: usize, to: usize, deleted: Option<usize>) -> bool {
        if Some(from) == deleted {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if Some(w) == deleted || seen[w] {
                    continue;
                }
                if w == to {
                    return true;
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        false
    }

    /// True iff the graph contains a directed cycle.
    pub fn has_cycle(&self) -> bool {
        // colors: 0 unseen, 1 on stack, 2 done
        let mut color = vec![0u8; self.vertex_count];
        for start in 0..self.vertex_count {
            if color[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.adj[v].len() {
                    let w = self.adj[v][*next];
                    *next += 1;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        false
    }
}

/// Dense reachability matrix; `reach(a, b)` is true iff a nonempty directed
/// path a -> b exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    vertex_count: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn reach(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.vertex_count + b]
    }
}

/// Floyd-Warshall transitive closure.
pub fn bool_closure(graph: &Digraph) -> BoolMatrix {
    let v = graph.vertex_count();
    let mut bits = vec![false; v * v];
    for (a, b) in graph.edges() {
        bits[a * v + b] = true;
    }
    for c in 0..v {
        for a in 0..v {
            if !bits[a * v + c] {
                continue;
            }
            for b in 0..v {
                if bits[c * v + b] {
                    bits[a * v + b] = true;
                }
            }
        }
    }
    BoolMatrix {
        vertex_count: v,
        bits,
    }
}

/// A sorted, duplicate-free set of candidate links, with linear-time merge
/// union and intersection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExclusionSet {
    items: Vec<LinkId>,
}

impl ExclusionSet {
    pub fn empty() -> ExclusionSet {
        ExclusionSet::default()
    }

    pub fn from_links(mut items: Vec<LinkId>) -> ExclusionSet {
        items.sort();
        items.dedup();
        ExclusionSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, link: LinkId) -> bool {
        self.items.binary_search(&link).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.items.iter().copied()
    }

    pub fn union(&self, other: &ExclusionSet) -> ExclusionSet {
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => {
                    items.push(self.items[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    items.push(other.items[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    items.push(self.items[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        items.extend_from_slice(&self.items[i..]);
        items.extend_from_slice(&other.items[j..]);
        ExclusionSet { items }
    }

    pub fn intersect(&self, other: &ExclusionSet) -> ExclusionSet {
        let mut items = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    items.push(self.items[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        ExclusionSet { items }
    }
}

impl FromIterator<LinkId> for ExclusionSet {
    fn from_iter<T: IntoIterator<Item = LinkId>>(iter: T) -> Self {
        ExclusionSet::from_links(iter.into_iter().collect())
    }
}

/// A directed graph whose edges carry exclusion sets (empty for structural
/// and committed edges).
#[derive(Clone, Debug, Default)]
pub struct AnnotatedDigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, ExclusionSet)>,
}

impl AnnotatedDigraph {
    pub fn new(vertex_count: usize) -> AnnotatedDigraph {
        AnnotatedDigraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn add_edge(&mut self, from: usize, to: usize, excl: ExclusionSet) {
        self.edges.push((from, to, excl));
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&ExclusionSet> {
        self.edges
            .iter()
            .find(|&&(a, b, _)| a == from && b == to)
            .map(|(_, _, e)| e)
    }

    pub fn edges(&self) -> &[(usize, usize, ExclusionSet)] {
        &self.edges
    }

    /// Forget the annotations.
    pub fn to_digraph(&self) -> Digraph {
        let mut g = Digraph::new(self.vertex_count);
        for &(a, b, _) in &self.edges {
            g.add_edge(a, b);
        }
        g
    }
}

/// Closure entries: either no path at all, or a path annotated with the set
/// of candidate links whose selection destroys every path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMatrix {
    vertex_count: usize,
    entries: Vec<Option<ExclusionSet>>,
}

impl ClosureMatrix {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `None` is no-path; `Some(set)` is a path with its exclusion set.
    pub fn entry(&self, a: usize, b: usize) -> Option<&ExclusionSet> {
        self.entries[a * self.vertex_count + b].as_ref()
    }

    pub fn is_path(&self, a: usize, b: usize) -> bool {
        self.entry(a, b).is_some()
    }

    fn set(&mut self, a: usize, b: usize, value: Option<ExclusionSet>) {
        self.entries[a * self.vertex_count + b] = value;
    }

    /// One Floyd-Warshall elimination sweep, in place.
    fn sweep(&mut self) {
        let v = self.vertex_count;
        for c in 0..v {
            for a in 0..v {
                let Some(ac) = self.entry(a, c).cloned() else {
                    continue;
                };
                for b in 0..v {
                    let Some(cb) = self.entry(c, b) else {
                        continue;
                    };
                    let via = ac.union(cb);
                    let merged = match self.entry(a, b) {
                        Some(old) => old.intersect(&via),
                        None => via,
                    };
                    self.set(a, b, Some(merged));
                }
            }
        }
    }
}

/// Annotated transitive closure: paths compose by set union along a path
/// and set intersection across alternative paths; no-path is the absorbing
/// element for intersection and disappears under composition.
pub fn excl_closure(graph: &AnnotatedDigraph) -> ClosureMatrix {
    let v = graph.vertex_count();
    let mut m = ClosureMatrix {
        vertex_count: v,
        entries: vec![None; v * v],
    };
    for (a, b, excl) in graph.edges() {
        let merged = match m.entry(*a, *b) {
            Some(old) => old.intersect(excl),
            None => excl.clone(),
        };
        m.set(*a, *b, Some(merged));
    }
    m.sweep();
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(n: usize, p: usize) -> LinkId {
        LinkId::new(n, p)
    }

    #[test]
    fn bool_closure_edgeless() {
        let g = Digraph::new(4);
        let m = bool_closure(&g);
        for a in 0..4 {
            for b in 0..4 {
                assert!(!m.reach(a, b));
            }
        }
    }

    #[test]
    fn bool_closure_three_cycle() {
        let mut g = Digraph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        let m = bool_closure(&g);
        for a in 0..3 {
            for b in 0..3 {
                assert!(m.reach(a, b), "{a} -> {b}");
            }
        }
        assert!(g.has_cycle());
    }

    #[test]
    fn bool_closure_chain_has_no_self_reach() {
        let mut g = Digraph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let m = bool_closure(&g);
        assert!(m.reach(0, 2));
        assert!(!m.reach(0, 0));
        assert!(!m.reach(2, 0));
        assert!(!g.has_cycle());
    }

    #[test]
    fn exclusion_set_merge_ops() {
        let a = ExclusionSet::from_links(vec![link(1, 5), link(2, 4), link(1, 6)]);
        let b = ExclusionSet::from_links(vec![link(2, 4), link(3, 4)]);
        let u = a.union(&b);
        assert_eq!(u.len(), 4);
        assert!(u.contains(link(3, 4)));
        let i = a.intersect(&b);
        assert_eq!(i.len(), 1);
        assert!(i.contains(link(2, 4)));
        assert!(ExclusionSet::empty().is_empty());
    }

    #[test]
    fn excl_closure_all_structural_is_empty_sets() {
        let mut g = AnnotatedDigraph::new(4);
        g.add_edge(0, 1, ExclusionSet::empty());
        g.add_edge(1, 2, ExclusionSet::empty());
        g.add_edge(2, 3, ExclusionSet::empty());
        let m = excl_closure(&g);
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
            assert_eq!(m.entry(a, b), Some(&ExclusionSet::empty()));
        }
        assert!(m.entry(3, 0).is_none());
        assert!(m.entry(0, 0).is_none());
    }

    #[test]
    fn excl_closure_intersects_alternatives() {
        // Two parallel two-edge routes 0 -> 3 via different candidates; the
        // closure entry keeps only the shared exclusions.
        let mut g = AnnotatedDigraph::new(4);
        let shared = link(9, 10);
        g.add_edge(0, 1, ExclusionSet::from_links(vec![link(1, 4), shared]));
        g.add_edge(1, 3, ExclusionSet::empty());
        g.add_edge(0, 2, ExclusionSet::from_links(vec![link(2, 5), shared]));
        g.add_edge(2, 3, ExclusionSet::empty());
        let m = excl_closure(&g);
        let e = m.entry(0, 3).unwrap();
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![shared]);
    }

    #[test]
    fn excl_closure_idempotent() {
        let mut g = AnnotatedDigraph::new(5);
        g.add_edge(0, 1, ExclusionSet::from_links(vec![link(1, 2)]));
        g.add_edge(1, 2, ExclusionSet::from_links(vec![link(3, 4)]));
        g.add_edge(2, 0, ExclusionSet::empty());
        g.add_edge(1, 3, ExclusionSet::from_links(vec![link(1, 4)]));
        g.add_edge(3, 4, ExclusionSet::empty());
        let m1 = excl_closure(&g);
        let mut m2 = m1.clone();
        m2.sweep();
        assert_eq!(m1, m2);
    }
}
