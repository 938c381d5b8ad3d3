//! Shared helpers for the integration suites: a seeded random sequent
//! generator and an independent complete-matching enumerator.

use rand::rngs::StdRng;
use rand::Rng;
use rand::SeedableRng;

use prooflink_core::formula::{balanced, Formula, Polarity, Sequent};
use prooflink_core::frame::{LinkId, Linking, ProofFrame};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const NAMES: [&str; 2] = ["a", "b"];

// Random tree with exactly `atoms` leaves.
pub fn random_formula(rng: &mut StdRng, atoms: usize) -> Formula {
    if atoms == 1 {
        return Formula::atom(NAMES[rng.gen_range(0..NAMES.len())]);
    }
    let left = rng.gen_range(1..atoms);
    let l = random_formula(rng, left);
    let r = random_formula(rng, atoms - left);
    match rng.gen_range(0..3) {
        0 => Formula::over(l, r),
        1 => Formula::under(l, r),
        _ => Formula::prod(l, r),
    }
}

pub fn random_sequent(rng: &mut StdRng, max_formula_atoms: usize) -> Sequent {
    let ants = rng.gen_range(0..=3);
    let antecedent = (0..ants)
        .map(|_| {
            let atoms = rng.gen_range(1..=max_formula_atoms);
            random_formula(rng, atoms)
        })
        .collect();
    let atoms = rng.gen_range(1..=max_formula_atoms);
    let succedent = random_formula(rng, atoms);
    Sequent {
        antecedent,
        succedent,
    }
}

/// Draw random sequents until `count` balanced ones are collected.
pub fn balanced_corpus(seed: u64, count: usize, max_formula_atoms: usize) -> Vec<Sequent> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let seq = random_sequent(&mut rng, max_formula_atoms);
        if balanced(&seq) {
            out.push(seq);
        }
    }
    out
}

/// Hand-picked sequents that exercise every link shape and both outcomes.
pub fn fixed_corpus() -> Vec<Sequent> {
    [
        "s |- s",
        "np, np\\s |- s",
        "s/(np\\s), (s/(np\\s))\\s |- s",
        "a/b, b |- a",
        "b, a/b |- a",
        "a, a\\b |- b",
        "a*b |- a*b",
        "a*b |- b*a",
        "a, b |- a*b",
        "a*(a\\b) |- b",
        "a/(b*c), b, c |- a",
        "|- a\\a",
        "|- (a*b)\\(a*b)",
        "a\\a |- a/a",
        "a/a |- a\\a",
        "b/(a\\a) |- b",
        "(a/a)\\b |- b",
        "a, a |- a*a",
        "a*a |- a*a",
        "a/(a/(a/a)) |- a/a",
    ]
    .iter()
    .map(|t| prooflink_core::parse_sequent(t).unwrap())
    .collect()
}

/// Every complete matching of the frame, by per-name permutation
/// enumeration. Independent of the search and filter code paths.
pub fn all_matchings(frame: &ProofFrame) -> Vec<Linking> {
    let mut names: Vec<String> = frame.atoms.iter().map(|o| o.name.clone()).collect();
    names.sort();
    names.dedup();
    let mut per_name: Vec<Vec<Vec<LinkId>>> = Vec::new();
    for name in &names {
        let mut neg: Vec<_> = frame
            .atoms
            .iter()
            .filter(|o| &o.name == name && o.polarity == Polarity::Negative)
            .map(|o| o.id)
            .collect();
        let mut pos: Vec<_> = frame
            .atoms
            .iter()
            .filter(|o| &o.name == name && o.polarity == Polarity::Positive)
            .map(|o| o.id)
            .collect();
        neg.sort_unstable();
        pos.sort_unstable();
        if neg.len() != pos.len() {
            return Vec::new();
        }
        let mut matchings = Vec::new();
        permute_into(
            &neg,
            &pos,
            &mut Vec::new(),
            &mut vec![false; pos.len()],
            &mut matchings,
        );
        per_name.push(matchings);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_name.len()];
    'product: loop {
        let mut linking = Linking::new();
        for (b, &i) in idx.iter().enumerate() {
            for &link in &per_name[b][i] {
                linking.insert(link);
            }
        }
        out.push(linking);
        for b in (0..idx.len()).rev() {
            idx[b] += 1;
            if idx[b] < per_name[b].len() {
                continue 'product;
            }
            idx[b] = 0;
        }
        break;
    }
    out
}

fn permute_into(
    neg: &[usize],
    pos: &[usize],
    chosen: &mut Vec<LinkId>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<LinkId>>,
) {
    let row = chosen.len();
    if row == neg.len() {
        out.push(chosen.clone());
        return;
    }
    for (j, &p) in pos.iter().enumerate() {
        if used[j] {
            continue;
        }
        used[j] = true;
        chosen.push(LinkId::new(neg[row], p));
        permute_into(neg, pos, chosen, used, out);
        chosen.pop();
        used[j] = false;
    }
}
