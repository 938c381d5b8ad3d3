//! Formula and sequent syntax: the three binary connectives `/`, `\`, `*`
//! over named atoms, a hand-rolled parser for them, and the polarity
//! bookkeeping needed before unfolding.

use std::collections::BTreeMap;
use std::fmt;

/// Antecedent/succedent side of an occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Negative => Polarity::Positive,
            Polarity::Positive => Polarity::Negative,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Negative => write!(f, "ant"),
            Polarity::Positive => write!(f, "suc"),
        }
    }
}

/// A category formula. `Over(a, b)` is `a/b`, `Under(b, a)` is `b\a`
/// (`b` is the divisor in both), `Prod(a, b)` is `a*b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Over(Box<Formula>, Box<Formula>),
    Under(Box<Formula>, Box<Formula>),
    Prod(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        debug_assert!(is_valid_atom(name), "invalid atom name: {name:?}");
        Formula::Atom(name.to_string())
    }

    pub fn over(left: Formula, right: Formula) -> Formula {
        Formula::Over(Box::new(left), Box::new(right))
    }

    pub fn under(left: Formula, right: Formula) -> Formula {
        Formula::Under(Box::new(left), Box::new(right))
    }

    pub fn prod(left: Formula, right: Formula) -> Formula {
        Formula::Prod(Box::new(left), Box::new(right))
    }

    /// Node count of the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Over(l, r) | Formula::Under(l, r) | Formula::Prod(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Number of atom occurrences.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Over(l, r) | Formula::Under(l, r) | Formula::Prod(l, r) => {
                l.atom_count() + r.atom_count()
            }
        }
    }
}

fn is_valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

// Printing contexts, used to insert the minimal parentheses that make
// print/parse an identity on every tree.
#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    // right operand of a formula-level connective is open to everything
    Formula,
    // left operand of `/` may itself be an over-chain
    OverLeft,
    // operands that must be at product level or tighter
    ProdLevel,
    // right operand of `*` must be primary
    Primary,
}

fn fmt_in(f: &mut fmt::Formatter<'_>, fml: &Formula, ctx: Ctx) -> fmt::Result {
    let bare = match fml {
        Formula::Atom(_) => true,
        Formula::Prod(..) => ctx != Ctx::Primary,
        Formula::Over(..) => matches!(ctx, Ctx::Formula | Ctx::OverLeft),
        Formula::Under(..) => ctx == Ctx::Formula,
    };
    if !bare {
        write!(f, "(")?;
        fmt_in(f, fml, Ctx::Formula)?;
        return write!(f, ")");
    }
    match fml {
        Formula::Atom(name) => write!(f, "{name}"),
        Formula::Over(l, r) => {
            fmt_in(f, l, Ctx::OverLeft)?;
            write!(f, "/")?;
            fmt_in(f, r, Ctx::ProdLevel)
        }
        Formula::Under(l, r) => {
            fmt_in(f, l, Ctx::ProdLevel)?;
            write!(f, "\\")?;
            fmt_in(f, r, Ctx::Formula)
        }
        Formula::Prod(l, r) => {
            fmt_in(f, l, Ctx::ProdLevel)?;
            write!(f, "*")?;
            fmt_in(f, r, Ctx::Primary)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_in(f, self, Ctx::Formula)
    }
}

/// A sequent `A1, ..., An |- C` with a single succedent formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fml) in self.antecedent.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{fml}")?;
        }
        if self.antecedent.is_empty() {
            write!(f, "|- {}", self.succedent)
        } else {
            write!(f, " |- {}", self.succedent)
        }
    }
}

/// Syntax error with a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Atom(usize, usize), // byte range into the source
    Slash,
    Backslash,
    Star,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

struct Lexer<'a> {
    src: &'a str,
    tokens: Vec<(usize, Token)>,
    cursor: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let bytes = src.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            match b {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'/' => {
                    tokens.push((i, Token::Slash));
                    i += 1;
                }
                b'\\' => {
                    tokens.push((i, Token::Backslash));
                    i += 1;
                }
                b'*' => {
                    tokens.push((i, Token::Star));
                    i += 1;
                }
                b'(' => {
                    tokens.push((i, Token::LParen));
                    i += 1;
                }
                b')' => {
                    tokens.push((i, Token::RParen));
                    i += 1;
                }
                b',' => {
                    tokens.push((i, Token::Comma));
                    i += 1;
                }
                b'|' => {
                    if bytes.get(i + 1) == Some(&b'-') {
                        tokens.push((i, Token::Turnstile));
                        i += 2;
                    } else {
                        return Err(ParseError {
                            position: i,
                            message: "expected '|-'".to_string(),
                        });
                    }
                }
                b'a'..=b'z' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_lowercase()
                            || bytes[i].is_ascii_digit()
                            || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    tokens.push((start, Token::Atom(start, i)));
                }
                _ => {
                    return Err(ParseError {
                        position: i,
                        message: format!(
                            "unexpected character {:?}",
                            src[i..].chars().next().unwrap()
                        ),
                    });
                }
            }
        }
        Ok(Lexer {
            src,
            tokens,
            cursor: 0,
        })
    }

    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.cursor).map(|&(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|&(p, _)| p)
            .unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos(),
            message: message.into(),
        }
    }
}

fn parse_primary(lx: &mut Lexer) -> Result<Formula, ParseError> {
    match lx.peek() {
        Some(Token::Atom(s, e)) => {
            lx.bump();
            Ok(Formula::Atom(lx.src[s..e].to_string()))
        }
        Some(Token::LParen) => {
            lx.bump();
            let inner = parse_formula_inner(lx)?;
            match lx.peek() {
                Some(Token::RParen) => {
                    lx.bump();
                    Ok(inner)
                }
                _ => Err(lx.err("expected ')'")),
            }
        }
        _ => Err(lx.err("expected an atom or '('")),
    }
}

fn parse_prod(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let mut left = parse_primary(lx)?;
    while lx.peek() == Some(Token::Star) {
        lx.bump();
        let right = parse_primary(lx)?;
        left = Formula::prod(left, right);
    }
    Ok(left)
}

// formula = prod , { "/" , prod } | prod , [ "\" , formula ]
fn parse_formula_inner(lx: &mut Lexer) -> Result<Formula, ParseError> {
    let mut left = parse_prod(lx)?;
    match lx.peek() {
        Some(Token::Slash) => {
            while lx.peek() == Some(Token::Slash) {
                lx.bump();
                let right = parse_prod(lx)?;
                left = Formula::over(left, right);
            }
            if lx.peek() == Some(Token::Backslash) {
                return Err(lx.err("cannot mix '/' and '\\' without parentheses"));
            }
            Ok(left)
        }
        Some(Token::Backslash) => {
            lx.bump();
            let right = parse_formula_inner(lx)?;
            Ok(Formula::under(left, right))
        }
        _ => Ok(left),
    }
}

/// Parse a single formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut lx = Lexer::new(text)?;
    if lx.peek().is_none() {
        return Err(lx.err("empty input"));
    }
    let fml = parse_formula_inner(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.err("trailing input after formula"));
    }
    Ok(fml)
}

/// Parse a sequent `Gamma |- C`. The antecedent may be empty.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut lx = Lexer::new(text)?;
    let mut antecedent = Vec::new();
    if lx.peek().is_none() {
        return Err(lx.err("empty input"));
    }
    if lx.peek() != Some(Token::Turnstile) {
        loop {
            antecedent.push(parse_formula_inner(&mut lx)?);
            match lx.peek() {
                Some(Token::Comma) => {
                    lx.bump();
                }
                Some(Token::Turnstile) => break,
                _ => return Err(lx.err("expected ',' or '|-'")),
            }
        }
    }
    match lx.bump() {
        Some(Token::Turnstile) => {}
        _ => return Err(lx.err("expected '|-'")),
    }
    if lx.peek().is_none() {
        return Err(lx.err("empty succedent"));
    }
    if lx.peek() == Some(Token::Turnstile) {
        return Err(lx.err("duplicate '|-'"));
    }
    let succedent = parse_formula_inner(&mut lx)?;
    match lx.peek() {
        None => Ok(Sequent {
            antecedent,
            succedent,
        }),
        Some(Token::Turnstile) => Err(lx.err("duplicate '|-'")),
        _ => Err(lx.err("trailing input after sequent")),
    }
}

/// Per-atom occurrence counts as `(negative, positive)` pairs, taken under
/// the polarities the unfolding assigns: antecedent roots are negative, the
/// succedent root positive, and `/`, `\` flip the divisor subformula.
pub fn atom_multiset(sequent: &Sequent) -> BTreeMap<String, (usize, usize)> {
    let mut counts = BTreeMap::new();
    for fml in &sequent.antecedent {
        count_atoms(fml, Polarity::Negative, &mut counts);
    }
    count_atoms(&sequent.succedent, Polarity::Positive, &mut counts);
    counts
}

fn count_atoms(fml: &Formula, pol: Polarity, counts: &mut BTreeMap<String, (usize, usize)>) {
    match fml {
        Formula::Atom(name) => {
            let entry = counts.entry(name.clone()).or_insert((0, 0));
            match pol {
                Polarity::Negative => entry.0 += 1,
                Polarity::Positive => entry.1 += 1,
            }
        }
        Formula::Over(num, div) => {
            count_atoms(num, pol, counts);
            count_atoms(div, pol.flip(), counts);
        }
        Formula::Under(div, num) => {
            count_atoms(div, pol.flip(), counts);
            count_atoms(num, pol, counts);
        }
        Formula::Prod(l, r) => {
            count_atoms(l, pol, counts);
            count_atoms(r, pol, counts);
        }
    }
}

/// True iff every atom has as many negative as positive occurrences.
pub fn balanced(sequent: &Sequent) -> bool {
    atom_multiset(sequent).values().all(|&(n, p)| n == p)
}
