//! Cross-module invariants checked against independent brute-force oracles
//! on randomly generated inputs.

mod support;

use rand::Rng;

use prooflink_core::closure::{
    bool_closure, excl_closure, AnnotatedDigraph, Digraph, ExclusionSet,
};
use prooflink_core::filter::{prune_cycles, prune_pass, select_branch};
use prooflink_core::formula::Polarity;
use prooflink_core::frame::{
    candidate_links, count_linkings, essential_graph, unfold, LinkId, Linking,
};
use prooflink_core::prover::{dr_oracle, planar_ok, prove, SearchOptions};

use support::{all_matchings, balanced_corpus, fixed_corpus, rng};

// Random annotated graph whose candidate edges mimic the axiom-link grid:
// edge (n, p) is excluded by selecting any other candidate in row n or
// column p.
fn random_annotated(
    rng: &mut rand::rngs::StdRng,
) -> (AnnotatedDigraph, Vec<(usize, usize, LinkId)>) {
    let v = rng.gen_range(4..=12);
    let mut g = AnnotatedDigraph::new(v);
    let structural = rng.gen_range(2..=(2 * v).min(14));
    let mut edges = std::collections::BTreeSet::new();
    for _ in 0..structural {
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a != b {
            edges.insert((a, b));
        }
    }
    let rows = rng.gen_range(1..=3usize);
    let cols = rng.gen_range(1..=3usize);
    let mut candidates: Vec<(usize, usize, LinkId)> = Vec::new();
    let count = rng.gen_range(1..=6usize);
    for _ in 0..count {
        let id = LinkId::new(rng.gen_range(0..rows) + 100, rng.gen_range(0..cols) + 200);
        if candidates.iter().any(|&(_, _, c)| c == id) {
            continue;
        }
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a == b || edges.contains(&(a, b)) {
            continue;
        }
        edges.insert((a, b));
        candidates.push((a, b, id));
    }
    let conflicts = |c: LinkId| {
        candidates
            .iter()
            .filter(|&&(_, _, o)| o != c && (o.neg == c.neg || o.pos == c.pos))
            .map(|&(_, _, o)| o)
            .collect::<Vec<_>>()
    };
    for &(a, b) in &edges {
        match candidates.iter().find(|&&(ca, cb, _)| (ca, cb) == (a, b)) {
            Some(&(_, _, id)) => {
                g.add_edge(a, b, ExclusionSet::from_links(conflicts(id)));
            }
            None => g.add_edge(a, b, ExclusionSet::empty()),
        }
    }
    (g, candidates)
}

#[test]
fn excl_closure_agrees_with_bool_closure() {
    let mut rng = rng(11);
    for _ in 0..150 {
        let (g, _) = random_annotated(&mut rng);
        let plain = g.to_digraph();
        let bools = bool_closure(&plain);
        let annotated = excl_closure(&g);
        for a in 0..plain.vertex_count() {
            for b in 0..plain.vertex_count() {
                assert_eq!(bools.reach(a, b), annotated.is_path(a, b), "{a}->{b}");
            }
        }
    }
}

// A candidate belongs to the exclusion set of (a, b) exactly when deleting
// every edge incompatible with it disconnects a from b.
#[test]
fn exclusion_sets_match_deletion_oracle() {
    let mut rng = rng(12);
    for _ in 0..150 {
        let (g, candidates) = random_annotated(&mut rng);
        let closure = excl_closure(&g);
        let v = g.vertex_count();
        for &(_, _, chosen) in &candidates {
            // Graph without the edges that selecting `chosen` removes.
            let mut reduced = Digraph::new(v);
            for (a, b, excl) in g.edges() {
                if !excl.contains(chosen) {
                    reduced.add_edge(*a, *b);
                }
            }
            let reduced_reach = bool_closure(&reduced);
            for a in 0..v {
                for b in 0..v {
                    match closure.entry(a, b) {
                        None => assert!(!reduced_reach.reach(a, b)),
                        Some(excl) => assert_eq!(
                            excl.contains(chosen),
                            !reduced_reach.reach(a, b),
                            "candidate {chosen} on entry {a}->{b}"
                        ),
                    }
                }
            }
        }
    }
}

// Adding an edge never turns a path entry into no-path and never grows an
// exclusion set.
#[test]
fn excl_closure_monotone_under_edge_insertion() {
    let mut rng = rng(13);
    for _ in 0..100 {
        let (g, _) = random_annotated(&mut rng);
        let before = excl_closure(&g);
        let v = g.vertex_count();
        let mut bigger = g.clone();
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a == b {
            continue;
        }
        bigger.add_edge(a, b, ExclusionSet::empty());
        let after = excl_closure(&bigger);
        for x in 0..v {
            for y in 0..v {
                match (before.entry(x, y), after.entry(x, y)) {
                    (Some(old), Some(new)) => {
                        assert!(old.iter().count() >= new.iter().count());
                        assert!(new.iter().all(|l| old.contains(l)));
                    }
                    (Some(_), None) => panic!("path {x}->{y} vanished"),
                    _ => {}
                }
            }
        }
    }
}

// prune_cycles removes exactly the candidates a depth-first search proves
// cyclic.
#[test]
fn prune_cycles_matches_dfs_oracle() {
    for seq in balanced_corpus(21, 60, 6).into_iter().chain(fixed_corpus()) {
        let frame = unfold(&seq);
        if frame.vertex_count > 15 {
            continue;
        }
        let cands = candidate_links(&frame);
        let committed = Linking::new();
        let graph = essential_graph(&frame, &committed);
        let closure = bool_closure(&graph);
        let pruned = prune_cycles(&cands, &closure);
        for link in cands.open_links() {
            let mut with_link = graph.clone();
            with_link.add_edge(link.neg - 1, link.pos - 1);
            let cyclic = with_link.has_cycle();
            assert_eq!(!pruned.contains(link), cyclic, "{seq}: candidate {link}");
        }
    }
}

// Pruning never discards a candidate that some validated complete linking
// uses, at any prefix of its construction.
#[test]
fn pruning_is_sound_on_every_prefix() {
    let corpus: Vec<_> = balanced_corpus(22, 80, 5)
        .into_iter()
        .chain(fixed_corpus())
        .collect();
    for seq in corpus {
        let frame = unfold(&seq);
        if frame.stats.a > 4 || frame.stats.p > 6 {
            continue;
        }
        let good: Vec<Linking> = all_matchings(&frame)
            .into_iter()
            .filter(|l| dr_oracle(&frame, l).unwrap())
            .collect();
        for linking in good {
            // Build the linking one link at a time, in set order, checking
            // the next link always survives the pass.
            let links: Vec<LinkId> = linking.iter().collect();
            for prefix_len in 0..links.len() {
                let committed =
                    Linking::from_pairs(links[..prefix_len].iter().map(|l| (l.neg, l.pos)));
                let mut cands = candidate_links(&frame);
                for l in committed.iter() {
                    cands.commit(l);
                }
                let result = prune_pass(&frame, &cands, &committed);
                assert!(!result.failed, "{seq}: prefix {prefix_len} failed");
                for rest in &links[prefix_len..] {
                    assert!(
                        result.pruned.contains(*rest),
                        "{seq}: {rest} pruned after prefix {prefix_len}"
                    );
                }
            }
        }
    }
}

#[test]
fn select_branch_is_deterministic_and_within_matrix() {
    for seq in balanced_corpus(23, 40, 6) {
        let frame = unfold(&seq);
        let cands = candidate_links(&frame);
        let b1 = select_branch(&cands);
        let b2 = select_branch(&cands);
        assert_eq!(b1, b2);
        for link in &b1 {
            assert!(cands.contains(*link));
        }
    }
}

// Complete matchings by brute force match the factorial product, and the
// planar filter agrees with a pairwise crossing check; the Catalan number
// bounds the non-crossing count.
#[test]
fn matching_counts_and_planarity() {
    fn catalan(n: usize) -> u128 {
        let mut c: u128 = 1;
        for i in 0..n as u128 {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }
    let corpus: Vec<_> = balanced_corpus(24, 60, 6)
        .into_iter()
        .chain(fixed_corpus())
        .collect();
    for seq in corpus {
        let frame = unfold(&seq);
        let matchings = all_matchings(&frame);
        if frame.atoms.len() <= 6 {
            assert_eq!(
                matchings.len() as u128,
                count_linkings(&frame).unwrap(),
                "{seq}"
            );
        }
        if count_linkings(&frame).unwrap() > 720 {
            continue;
        }
        let noncrossing = matchings
            .iter()
            .filter(|linking| {
                let links: Vec<LinkId> = linking.iter().collect();
                links.iter().enumerate().all(|(i, &l)| {
                    let committed = Linking::from_pairs(links[..i].iter().map(|o| (o.neg, o.pos)));
                    planar_ok(&frame, l, &committed)
                })
            })
            .count();
        // single-atom-name frames: Catalan bound on planar linkings
        let names: std::collections::BTreeSet<_> =
            frame.atoms.iter().map(|o| o.name.clone()).collect();
        if names.len() == 1 && frame.stats.a >= 1 {
            assert!(
                (noncrossing as u128) <= catalan(frame.stats.a - 1).max(1) * 4,
                "{seq}: {noncrossing} noncrossing vs Catalan bound"
            );
        }
    }
}

// Planar-mode proofs are a subset of unrestricted proofs.
#[test]
fn planar_output_is_subset() {
    let corpus: Vec<_> = balanced_corpus(25, 60, 5)
        .into_iter()
        .chain(fixed_corpus())
        .collect();
    for seq in corpus {
        let unrestricted: std::collections::BTreeSet<Linking> =
            prove(&seq, &SearchOptions::default())
                .into_iter()
                .map(|n| n.linking)
                .collect();
        let planar = prove(
            &seq,
            &SearchOptions {
                planar: true,
                ..SearchOptions::default()
            },
        );
        for net in planar {
            assert!(unrestricted.contains(&net.linking), "{seq}");
        }
    }
}

// Frames never produce duplicate solutions and the output order is stable.
#[test]
fn prove_is_duplicate_free_and_deterministic() {
    for seq in balanced_corpus(26, 60, 6).into_iter().chain(fixed_corpus()) {
        let once: Vec<Linking> = prove(&seq, &SearchOptions::default())
            .into_iter()
            .map(|n| n.linking)
            .collect();
        let twice: Vec<Linking> = prove(&seq, &SearchOptions::default())
            .into_iter()
            .map(|n| n.linking)
            .collect();
        assert_eq!(once, twice);
        let mut dedup = once.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), once.len(), "{seq}: duplicate solutions");
    }
}

// Atom polarity bookkeeping matches the unfolded frame.
#[test]
fn atom_multiset_agrees_with_frame() {
    for seq in balanced_corpus(27, 60, 8) {
        let counts = prooflink_core::atom_multiset(&seq);
        let frame = unfold(&seq);
        for (name, (neg, pos)) in counts {
            let f_neg = frame
                .atoms
                .iter()
                .filter(|o| o.name == name && o.polarity == Polarity::Negative)
                .count();
            let f_pos = frame
                .atoms
                .iter()
                .filter(|o| o.name == name && o.polarity == Polarity::Positive)
                .count();
            assert_eq!((neg, pos), (f_neg, f_pos), "{seq}: {name}");
        }
    }
}
