//! Lexicon files: one `word: formula` entry per line, `#` comments, blank
//! lines ignored. Repeated words accumulate alternative formulas.

use std::collections::BTreeMap;
use std::path::Path;

use prooflink_core::formula::parse_formula;
use prooflink_core::Formula;

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Formula>>,
}

impl Lexicon {
    pub fn get(&self, word: &str) -> Option<&[Formula]> {
        self.entries.get(word).map(|v| v.as_slice())
    }
}

pub fn load(path: &Path) -> Result<Lexicon, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lexicon = Lexicon::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (word, formula_text) = line
            .split_once(':')
            .ok_or_else(|| format!("line {}: expected `word: formula`", lineno + 1))?;
        let word = word.trim();
        if word.is_empty() {
            return Err(format!("line {}: empty word", lineno + 1));
        }
        let formula =
            parse_formula(formula_text.trim()).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        lexicon
            .entries
            .entry(word.to_string())
            .or_default()
            .push(formula);
    }
    Ok(lexicon)
}
