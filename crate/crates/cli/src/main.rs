mod lexicon;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prooflink_core::filter::prune_pass;
use prooflink_core::formula::{parse_formula, parse_sequent, Sequent};
use prooflink_core::frame::{candidate_links, unfold, Linking, ProofFrame};
use prooflink_core::kbest::{cost_matrix, murty_kbest, CostGrid, RankedLinking};
use prooflink_core::prover::{
    dr_oracle_bounded, prove_frame, validate_essential, OracleError, ProofNet, SearchOptions,
    DEFAULT_ORACLE_BOUND,
};

use output::{render_matrix, OutputRecord, ProofEntry};

const EXIT_PROVED: u8 = 0;
const EXIT_UNPROVABLE: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "prooflink",
    version,
    about = "Proof-net prover for Lambek/MILL sequents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct ProveFlags {
    /// Reject crossing axiom links (Lambek mode).
    #[arg(long)]
    planar: bool,
    /// Stop after N proofs.
    #[arg(long, value_name = "N")]
    max: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print the candidate matrix before and after pruning.
    #[arg(long)]
    show_matrix: bool,
    /// Print search steps to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Prove a sequent and print its proof nets.
    Prove {
        sequent: String,
        #[command(flatten)]
        flags: ProveFlags,
    },
    /// Rank complete linkings by total axiom-link distance.
    Kbest {
        /// Sequent to rank; omit when using --cost-file.
        sequent: Option<String>,
        #[arg(short, value_name = "N")]
        k: usize,
        /// Rank an explicit cost matrix instead (rows of integers or `inf`).
        #[arg(long, value_name = "PATH")]
        cost_file: Option<PathBuf>,
    },
    /// Look up each word in a lexicon and prove the resulting sequents.
    Parse {
        /// Whitespace-separated words.
        words: String,
        #[arg(long, value_name = "PATH")]
        lexicon: PathBuf,
        /// Goal formula for the succedent.
        #[arg(long, value_name = "FORMULA")]
        goal: String,
        #[command(flatten)]
        flags: ProveFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Prove { sequent, flags } => cmd_prove(&sequent, &flags),
        Command::Kbest {
            sequent,
            k,
            cost_file,
        } => cmd_kbest(sequent.as_deref(), k, cost_file.as_deref()),
        Command::Parse {
            words,
            lexicon,
            goal,
            flags,
        } => cmd_parse(&words, &lexicon, &goal, &flags),
    }
}

fn oracle_bound_from_env() -> usize {
    std::env::var("PROOFLINK_ORACLE_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

fn search_options(flags: &ProveFlags) -> SearchOptions {
    SearchOptions {
        planar: flags.planar,
        max_solutions: flags.max,
        validate_both: true,
        oracle_bound: oracle_bound_from_env(),
        trace: flags.trace,
    }
}

fn input_error(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_INPUT_ERROR)
}

fn cmd_prove(sequent_text: &str, flags: &ProveFlags) -> ExitCode {
    if flags.max == Some(0) {
        return input_error("--max must be at least 1");
    }
    let sequent = match parse_sequent(sequent_text) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let frame = Arc::new(unfold(&sequent));
    if flags.show_matrix {
        let cands = candidate_links(&frame);
        println!("candidate matrix (rows negative, columns positive):");
        print!("{}", render_matrix(&frame, &cands));
        let pruned = prune_pass(&frame, &cands, &Linking::new());
        println!("after one acyclicity+connectedness pass:");
        print!("{}", render_matrix(&frame, &pruned.pruned));
    }
    let (nets, trace) = prove_frame(&frame, &search_options(flags));
    for event in &trace {
        eprintln!("trace: {event}");
    }
    emit_proofs(&sequent, &frame, &nets, flags.format);
    if nets.is_empty() {
        ExitCode::from(EXIT_UNPROVABLE)
    } else {
        ExitCode::from(EXIT_PROVED)
    }
}

fn emit_proofs(sequent: &Sequent, frame: &ProofFrame, nets: &[ProofNet], format: Format) {
    match format {
        Format::Text => {
            println!("{}: {} proof(s)", sequent, nets.len());
            for (i, net) in nets.iter().enumerate() {
                let links: Vec<String> = net
                    .linking
                    .iter()
                    .map(|l| format!("{}-{}", frame.atom_tag(l.neg), frame.atom_tag(l.pos)))
                    .collect();
                let weight = net
                    .weight
                    .map_or(String::new(), |w| format!(" (weight {w})"));
                println!("proof {}: {}{}", i + 1, links.join(" "), weight);
            }
        }
        Format::Json => {
            let record = OutputRecord {
                sequent: sequent.to_string(),
                proofs: nets
                    .iter()
                    .map(|net| ProofEntry {
                        linking: net
                            .linking
                            .iter()
                            .map(|l| (frame.atom_tag(l.neg), frame.atom_tag(l.pos)))
                            .collect(),
                        weight: net.weight,
                        valid: true,
                    })
                    .collect(),
                count: nets.len(),
            };
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
        }
        Format::Dot => {
            for (i, net) in nets.iter().enumerate() {
                print!(
                    "{}",
                    output::export_dot(frame, &net.linking, &format!("net{}", i + 1))
                );
            }
        }
    }
}

fn cmd_kbest(
    sequent_text: Option<&str>,
    k: usize,
    cost_file: Option<&std::path::Path>,
) -> ExitCode {
    if k == 0 {
        return input_error("k must be at least 1");
    }
    match (sequent_text, cost_file) {
        (_, Some(path)) => {
            let grid = match read_cost_file(path) {
                Ok(g) => g,
                Err(e) => return input_error(e),
            };
            let ranked = match murty_kbest(&grid, k) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            for (i, r) in ranked.iter().enumerate() {
                let pairs: Vec<String> = r
                    .linking
                    .iter()
                    .map(|l| format!("r{}-c{}", l.neg, l.pos - grid.rows()))
                    .collect();
                println!("{}: weight {} {}", i + 1, r.weight, pairs.join(" "));
            }
            if ranked.is_empty() {
                println!("no finite-weight assignment");
                ExitCode::from(EXIT_UNPROVABLE)
            } else {
                ExitCode::from(EXIT_PROVED)
            }
        }
        (Some(text), None) => {
            let sequent = match parse_sequent(text) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let frame = unfold(&sequent);
            if !frame.is_balanced() {
                println!("{sequent}: unbalanced atoms, no complete linking");
                return ExitCode::from(EXIT_UNPROVABLE);
            }
            let cands = candidate_links(&frame);
            let grid = cost_matrix(&frame, &cands).composite();
            let ranked = match murty_kbest(&grid, k) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let bound = oracle_bound_from_env();
            let mut any_valid = false;
            for (i, RankedLinking { linking, weight }) in ranked.iter().enumerate() {
                let essential = validate_essential(&frame, linking).unwrap_or(false);
                let valid = essential
                    && match dr_oracle_bounded(&frame, linking, bound) {
                        Ok(dr) => dr,
                        Err(OracleError::TooManyParLinks { .. }) => true,
                        Err(OracleError::IncompleteLinking) => false,
                    };
                any_valid |= valid;
                let pairs: Vec<String> = linking
                    .iter()
                    .map(|l| format!("{}-{}", frame.atom_tag(l.neg), frame.atom_tag(l.pos)))
                    .collect();
                let mark = if valid { "valid" } else { "invalid" };
                println!(
                    "{}: weight {} {} [{}]",
                    i + 1,
                    weight,
                    pairs.join(" "),
                    mark
                );
            }
            if any_valid {
                ExitCode::from(EXIT_PROVED)
            } else {
                ExitCode::from(EXIT_UNPROVABLE)
            }
        }
        (None, None) => input_error("kbest needs a sequent or --cost-file"),
    }
}

fn read_cost_file(path: &std::path::Path) -> Result<CostGrid, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows: Vec<Vec<Option<u64>>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            if tok.eq_ignore_ascii_case("inf") {
                row.push(None);
            } else {
                let w: u64 = tok
                    .parse()
                    .map_err(|_| format!("line {}: bad cost entry {tok:?}", lineno + 1))?;
                row.push(Some(w));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("cost file has no rows".to_string());
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err("cost file rows have unequal lengths".to_string());
    }
    if rows.len() != width {
        return Err(format!(
            "cost matrix is {}x{}, not square",
            rows.len(),
            width
        ));
    }
    Ok(CostGrid::from_rows(rows))
}

fn cmd_parse(
    words: &str,
    lexicon_path: &std::path::Path,
    goal: &str,
    flags: &ProveFlags,
) -> ExitCode {
    let lexicon = match lexicon::load(lexicon_path) {
        Ok(l) => l,
        Err(e) => return input_error(e),
    };
    let goal = match parse_formula(goal) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    let words: Vec<&str> = words.split_whitespace().collect();
    let mut assignments: Vec<&[prooflink_core::Formula]> = Vec::new();
    for word in &words {
        match lexicon.get(word) {
            Some(formulas) => assignments.push(formulas),
            None => return input_error(format!("word not in lexicon: {word}")),
        }
    }
    // Cartesian product of the lexical assignments, in lexicon order.
    let mut total = 0usize;
    let mut idx = vec![0usize; assignments.len()];
    'product: loop {
        let antecedent: Vec<prooflink_core::Formula> = idx
            .iter()
            .enumerate()
            .map(|(w, &i)| assignments[w][i].clone())
            .collect();
        let sequent = Sequent {
            antecedent,
            succedent: goal.clone(),
        };
        let frame = Arc::new(unfold(&sequent));
        let (nets, trace) = prove_frame(&frame, &search_options(flags));
        for event in &trace {
            eprintln!("trace: {event}");
        }
        total += nets.len();
        emit_proofs(&sequent, &frame, &nets, flags.format);
        for w in (0..idx.len()).rev() {
            idx[w] += 1;
            if idx[w] < assignments[w].len() {
                continue 'product;
            }
            idx[w] = 0;
        }
        break;
    }
    if total > 0 {
        ExitCode::from(EXIT_PROVED)
    } else {
        ExitCode::from(EXIT_UNPROVABLE)
    }
}
