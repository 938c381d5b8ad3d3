//! Proof-net search for the Lambek calculus and multiplicative
//! intuitionistic linear logic.
//!
//! A sequent is unfolded into a proof frame; the only nondeterminism left
//! is the choice of axiom links between opposite-polarity occurrences of
//! the same atom. Candidate links are pruned by two graph filters — an
//! acyclicity test against the transitive closure of the committed edges,
//! and a connectedness test against an exclusion-set-annotated closure —
//! and the remaining choices are explored most-constrained-first. Complete
//! linkings are checked by a direct path criterion on the directed net and,
//! independently, by the exhaustive switching oracle. Linkings can also be
//! ranked by total axiom-link distance via ranked assignment enumeration.
//!
//! ```
//! use prooflink_core::{parse_sequent, prove, SearchOptions};
//!
//! let sequent = parse_sequent(r"s/(np\s), (s/(np\s))\s |- s").unwrap();
//! let nets = prove(&sequent, &SearchOptions::default());
//! assert_eq!(nets.len(), 2);
//! assert_eq!(nets[0].weight, Some(10));
//! ```

pub mod closure;
pub mod filter;
pub mod formula;
pub mod frame;
pub mod kbest;
pub mod prover;

pub use formula::{
    atom_multiset, balanced, parse_formula, parse_sequent, Formula, Polarity, Sequent,
};
pub use frame::{
    candidate_links, count_linkings, essential_graph, unfold, CandidateMatrix, LinkId, Linking,
    ProofFrame,
};
pub use prover::{
    dr_oracle, enumerate_bruteforce, prove, validate_essential, ProofNet, SearchOptions,
};
