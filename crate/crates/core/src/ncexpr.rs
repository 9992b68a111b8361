//! Noncommutative expressions over named generators.
//!
//! Generators carry a tag recording whether they are known to commute with the
//! update operator. [`leibniz_expand`] uses those tags to expand
//! `[U, e]` symbolically as `Σ_j A_j [U, d] B_j`: tagged generators are
//! annihilated by `ad_U`, and each occurrence of the discrimination generator
//! `d` contributes one term. The expansion never tries to detect cancellation
//! symbolically; whether the sum vanishes is decided by exact evaluation.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{commutator, int, parse_scalar, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub name: String,
    pub commutes_with_update: bool,
}

impl Generator {
    /// A generator known to lie in the commutant of the update.
    pub fn tagged(name: impl Into<String>) -> Self {
        Generator { name: name.into(), commutes_with_update: true }
    }

    pub fn untagged(name: impl Into<String>) -> Self {
        Generator { name: name.into(), commutes_with_update: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NcExpr {
    /// `c·𝟙`
    Const(Scalar),
    Gen(Generator),
    Sum(Vec<NcExpr>),
    ScalarMul(Scalar, Box<NcExpr>),
    Product(Vec<NcExpr>),
    Power(Box<NcExpr>, u32),
}

impl NcExpr {
    pub fn gen(g: &Generator) -> Self {
        NcExpr::Gen(g.clone())
    }

    pub fn constant(c: Scalar) -> Self {
        NcExpr::Const(c)
    }

    pub fn one() -> Self {
        NcExpr::Const(Scalar::one())
    }

    /// Sum of the given expressions; the empty sum is `0·𝟙`.
    pub fn sum(terms: Vec<NcExpr>) -> Self {
        if terms.is_empty() {
            NcExpr::Const(Scalar::zero())
        } else {
            NcExpr::Sum(terms)
        }
    }

    /// Product of the given factors; the empty product is `𝟙`.
    pub fn product(factors: Vec<NcExpr>) -> Self {
        if factors.is_empty() {
            NcExpr::one()
        } else {
            NcExpr::Product(factors)
        }
    }

    pub fn scaled(self, c: Scalar) -> Self {
        NcExpr::ScalarMul(c, Box::new(self))
    }

    pub fn pow(self, exponent: u32) -> Self {
        NcExpr::Power(Box::new(self), exponent)
    }

    /// Every generator mentioned anywhere in the expression, by name.
    pub fn generators(&self) -> BTreeMap<String, Generator> {
        let mut out = BTreeMap::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeMap<String, Generator>) {
        match self {
            NcExpr::Const(_) => {}
            NcExpr::Gen(g) => {
                out.entry(g.name.clone()).or_insert_with(|| g.clone());
            }
            NcExpr::Sum(items) | NcExpr::Product(items) => items.iter().for_each(|e| e.collect_generators(out)),
            NcExpr::ScalarMul(_, e) | NcExpr::Power(e, _) => e.collect_generators(out),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.generators().contains_key(name)
    }
}

/// A word in the generators. Ordered length-first, then lexicographically by
/// generator name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word(letters)
    }

    pub fn to_expr(&self) -> NcExpr {
        match self.0.len() {
            0 => NcExpr::one(),
            1 => NcExpr::Gen(self.0[0].clone()),
            _ => NcExpr::Product(self.0.iter().cloned().map(NcExpr::Gen).collect()),
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(|g| &g.name).cmp(other.0.iter().map(|g| &g.name)))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", g.name)?;
        }
        Ok(())
    }
}

/// A finite sum of scalar-weighted words with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NormalForm {
    terms: BTreeMap<Word, Scalar>,
}

impl NormalForm {
    pub fn zero() -> Self {
        NormalForm::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut nf = NormalForm::zero();
        nf.add_term(Word::empty(), c);
        nf
    }

    pub fn word(w: Word) -> Self {
        let mut nf = NormalForm::zero();
        nf.add_term(w, Scalar::one());
        nf
    }

    pub fn from_expr(e: &NcExpr) -> Self {
        match e {
            NcExpr::Const(c) => NormalForm::scalar(c.clone()),
            NcExpr::Gen(g) => NormalForm::word(Word(vec![g.clone()])),
            NcExpr::Sum(items) => {
                items.iter().fold(NormalForm::zero(), |acc, item| acc.add(&NormalForm::from_expr(item)))
            }
            NcExpr::ScalarMul(c, inner) => NormalForm::from_expr(inner).scale(c),
            NcExpr::Product(items) => {
                items.iter().fold(NormalForm::scalar(Scalar::one()), |acc, item| acc.mul(&NormalForm::from_expr(item)))
            }
            NcExpr::Power(base, k) => {
                let base = NormalForm::from_expr(base);
                (0..*k).fold(NormalForm::scalar(Scalar::one()), |acc, _| acc.mul(&base))
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> NormalForm {
        if c.is_zero() {
            return NormalForm::zero();
        }
        NormalForm { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Rebuilds an expression: a `Sum` of `ScalarMul(c, word)` monomials, or
    /// `Const(0)` for the zero form.
    pub fn to_expr(&self) -> NcExpr {
        if self.terms.is_empty() {
            return NcExpr::Const(Scalar::zero());
        }
        let monomials: Vec<NcExpr> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    NcExpr::Const(c.clone())
                } else if c.is_one() {
                    w.to_expr()
                } else {
                    w.to_expr().scaled(c.clone())
                }
            })
            .collect();
        if monomials.len() == 1 {
            monomials.into_iter().next().expect("one monomial")
        } else {
            NcExpr::Sum(monomials)
        }
    }
}

/// Flattens, distributes, and collects like words.
pub fn normalize(e: &NcExpr) -> NcExpr {
    NormalForm::from_expr(e).to_expr()
}

/// One summand `coeff · left · [U, d] · right` of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub coeff: Scalar,
    pub left: Word,
    pub right: Word,
}

/// Symbolic expansion `[U, e] = Σ_j A_j [U, d] B_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionForm {
    pub update: String,
    pub discrimination: Generator,
    pub terms: Vec<ExpansionTerm>,
}

impl ExpansionForm {
    pub fn bracket_symbol(&self) -> String {
        format!("[{},{}]", self.update, self.discrimination.name)
    }
}

impl fmt::Display for ExpansionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let bracket = self.bracket_symbol();
        for (i, t) in self.terms.iter().enumerate() {
            let magnitude = t.coeff.abs();
            if i == 0 {
                if t.coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if t.coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}*")?;
            }
            if !t.left.is_empty() {
                write!(f, "{}*", t.left)?;
            }
            write!(f, "{bracket}")?;
            if !t.right.is_empty() {
                write!(f, "*{}", t.right)?;
            }
        }
        Ok(())
    }
}

/// Expands `ad_U(e)` through the Leibniz rule.
///
/// Each monomial `c·w` contributes one term per occurrence of `d` in `w`,
/// split at that occurrence. Generators other than `d` must be tagged as
/// commuting with the update.
pub fn leibniz_expand(e: &NcExpr, d: &Generator) -> Result<ExpansionForm> {
    leibniz_expand_with_update(e, d, "U")
}

pub fn leibniz_expand_with_update(e: &NcExpr, d: &Generator, update: &str) -> Result<ExpansionForm> {
    let nf = NormalForm::from_expr(e);
    let mut terms = Vec::new();
    for (word, coeff) in nf.terms() {
        for (i, g) in word.0.iter().enumerate() {
            if g.name == d.name {
                terms.push(ExpansionTerm {
                    coeff: coeff.clone(),
                    left: Word(word.0[..i].to_vec()),
                    right: Word(word.0[i + 1..].to_vec()),
                });
            } else if !g.commutes_with_update {
                return Err(Error::UntaggedGenerator(g.name.clone()));
            }
        }
    }
    Ok(ExpansionForm { update: update.to_string(), discrimination: d.clone(), terms })
}

/// Matrices assigned to generators, plus (optionally) the update matrix used
/// to verify tagged generators.
#[derive(Clone, Debug)]
pub struct Assignment {
    dim: usize,
    update: Option<Matrix>,
    values: BTreeMap<String, Matrix>,
}

impl Assignment {
    pub fn new(dim: usize) -> Self {
        Assignment { dim, update: None, values: BTreeMap::new() }
    }

    pub fn with_update(mut self, update: Matrix) -> Self {
        self.update = Some(update);
        self
    }

    pub fn with(mut self, name: impl Into<String>, m: Matrix) -> Self {
        self.values.insert(name.into(), m);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, m: Matrix) {
        self.values.insert(name.into(), m);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn update(&self) -> Option<&Matrix> {
        self.update.as_ref()
    }

    fn lookup(&self, g: &Generator) -> Result<&Matrix> {
        let m = self.values.get(&g.name).ok_or_else(|| Error::MissingAssignment(g.name.clone()))?;
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "generator {:?} assigned a {}x{} matrix in dim {}",
                g.name,
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        if g.commutes_with_update {
            if let Some(u) = &self.update {
                if !commutator(u, m)?.is_zero() {
                    return Err(Error::TagViolation(g.name.clone()));
                }
            }
        }
        Ok(m)
    }

    fn word(&self, w: &Word) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.dim);
        for g in &w.0 {
            acc = &acc * self.lookup(g)?;
        }
        Ok(acc)
    }
}

/// Evaluates the expression tree directly (without normalizing it first).
pub fn evaluate(e: &NcExpr, assignment: &Assignment) -> Result<Matrix> {
    if let Some(u) = assignment.update() {
        if u.rows() != assignment.dim() || !u.is_square() {
            return Err(Error::ShapeMismatch("update matrix does not match assignment dim".into()));
        }
    }
    eval_tree(e, assignment)
}

fn eval_tree(e: &NcExpr, a: &Assignment) -> Result<Matrix> {
    let n = a.dim();
    Ok(match e {
        NcExpr::Const(c) => Matrix::scalar(n, c.clone()),
        NcExpr::Gen(g) => a.lookup(g)?.clone(),
        NcExpr::Sum(items) => {
            let mut acc = Matrix::zeros(n, n);
            for item in items {
                acc = &acc + &eval_tree(item, a)?;
            }
            acc
        }
        NcExpr::ScalarMul(c, inner) => eval_tree(inner, a)?.scale(c),
        NcExpr::Product(items) => {
            let mut acc = Matrix::identity(n);
            for item in items {
                acc = &acc * &eval_tree(item, a)?;
            }
            acc
        }
        NcExpr::Power(base, k) => eval_tree(base, a)?.pow(*k),
    })
}

/// Evaluates `Σ_j coeff_j · A_j · [U, d] · B_j` exactly.
pub fn evaluate_expansion(f: &ExpansionForm, assignment: &Assignment) -> Result<Matrix> {
    let n = assignment.dim();
    if f.terms.is_empty() {
        return Ok(Matrix::zeros(n, n));
    }
    let u = assignment.update().ok_or(Error::MissingUpdate)?;
    let d = assignment.lookup(&f.discrimination)?;
    let bracket = commutator(u, d)?;
    let mut acc = Matrix::zeros(n, n);
    for t in &f.terms {
        let term = &(&assignment.word(&t.left)? * &bracket) * &assignment.word(&t.right)?;
        acc = &acc + &term.scale(&t.coeff);
    }
    Ok(acc)
}

impl fmt::Display for NcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NcExpr::Const(c) => write!(f, "{c}"),
            NcExpr::Gen(g) => write!(f, "{}", g.name),
            NcExpr::Sum(items) => {
                for (i, item) in items.iter().enumerate() {
                    match (i, negated(item)) {
                        (0, _) => write!(f, "{}", Term(item))?,
                        (_, Some(positive)) => write!(f, " - {}", Term(&positive))?,
                        (_, None) => write!(f, " + {}", Term(item))?,
                    }
                }
                Ok(())
            }
            NcExpr::ScalarMul(c, inner) => write!(f, "{c}*{}", Factor(inner)),
            NcExpr::Product(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", Factor(item))?;
                }
                Ok(())
            }
            NcExpr::Power(base, k) => write!(f, "{}^{k}", Atom(base)),
        }
    }
}

/// The positive counterpart of a negatively scaled term, for `a - b` output.
fn negated(e: &NcExpr) -> Option<NcExpr> {
    match e {
        NcExpr::Const(c) if c.is_negative() => Some(NcExpr::Const(-c)),
        NcExpr::ScalarMul(c, inner) if c.is_negative() => {
            let magnitude = -c;
            Some(if magnitude.is_one() && negated(inner).is_none() {
                (**inner).clone()
            } else {
                NcExpr::ScalarMul(magnitude, inner.clone())
            })
        }
        _ => None,
    }
}

struct Term<'a>(&'a NcExpr);

impl fmt::Display for Term<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NcExpr::Sum(_) => write!(f, "({})", self.0),
            _ => write!(f, "{}", self.0),
        }
    }
}

struct Factor<'a>(&'a NcExpr);

impl fmt::Display for Factor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NcExpr::Sum(_) | NcExpr::ScalarMul(..) | NcExpr::Const(_) => write!(f, "({})", self.0),
            _ => write!(f, "{}", self.0),
        }
    }
}

struct Atom<'a>(&'a NcExpr);

impl fmt::Display for Atom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NcExpr::Gen(_) => write!(f, "{}", self.0),
            _ => write!(f, "({})", self.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Number(Scalar),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((column, tok));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value = parse_scalar(&literal)
                .map_err(|_| Error::ExprSyntax { column, message: format!("invalid rational {literal:?}") })?;
            out.push((column, Token::Number(value)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((column, Token::Ident(chars[start..i].iter().collect())));
        } else {
            return Err(Error::ExprSyntax { column, message: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

/// Parses an expression string, resolving identifiers against `generators`.
///
/// ```text
/// expr   := ['-'] term (('+' | '-') term)*
/// term   := [rational ['*']] factor ('*'? factor)*  |  rational
/// factor := primary ('^' INT)*
/// primary:= IDENT | '(' expr ')'
/// ```
pub fn parse_expr(text: &str, generators: &BTreeMap<String, Generator>) -> Result<NcExpr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, generators, end_column: text.chars().count() + 1 };
    let e = parser.expr()?;
    if let Some((column, tok)) = parser.tokens.get(parser.pos) {
        return Err(Error::ExprSyntax { column: *column, message: format!("unexpected token {tok:?}") });
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    generators: &'a BTreeMap<String, Generator>,
    end_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(c, _)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::ExprSyntax { column: self.column(), message: message.into() })
    }

    fn expr(&mut self) -> Result<NcExpr> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            negative = true;
        }
        loop {
            let t = self.term()?;
            terms.push(if negative { t.scaled(int(-1)) } else { t });
            match self.peek() {
                Some(Token::Plus) => negative = false,
                Some(Token::Minus) => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { NcExpr::Sum(terms) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::LParen))
    }

    fn term(&mut self) -> Result<NcExpr> {
        let mut coeff = None;
        if let Some(Token::Number(c)) = self.peek() {
            coeff = Some(c.clone());
            self.pos += 1;
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
                if !self.starts_factor() {
                    return self.error("expected a factor after '*'");
                }
            }
        }
        let mut factors = Vec::new();
        loop {
            if self.starts_factor() {
                factors.push(self.factor()?);
            } else if self.peek() == Some(&Token::Star) && !factors.is_empty() {
                self.pos += 1;
                if !self.starts_factor() {
                    return self.error("expected a factor after '*'");
                }
            } else {
                break;
            }
        }
        let body = match factors.len() {
            0 => {
                return match coeff {
                    Some(c) => Ok(NcExpr::Const(c)),
                    None => self.error("expected a term"),
                }
            }
            1 => factors.pop().expect("one factor"),
            _ => NcExpr::Product(factors),
        };
        Ok(match coeff {
            Some(c) => body.scaled(c),
            None => body,
        })
    }

    fn factor(&mut self) -> Result<NcExpr> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = match self.peek() {
                Some(Token::Number(k)) if k.is_integer() && !k.is_negative() => u32::try_from(k.to_integer()).ok(),
                _ => None,
            };
            let Some(k) = exponent else {
                return self.error("expected a non-negative integer exponent");
            };
            self.pos += 1;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<NcExpr> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                let Some(g) = self.generators.get(&name) else {
                    return self.error(format!("unknown generator {name:?}"));
                };
                self.pos += 1;
                Ok(NcExpr::Gen(g.clone()))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => self.error("expected a generator or '('"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    fn d() -> Generator {
        Generator::untagged("D")
    }
    fn x() -> Generator {
        Generator::tagged("X")
    }
    fn x2() -> Generator {
        Generator::tagged("Y")
    }
    fn gens() -> BTreeMap<String, Generator> {
        [d(), x(), x2()].into_iter().map(|g| (g.name.clone(), g)).collect()
    }
    fn swap() -> Matrix {
        Matrix::from_ints(&[[0, 1], [1, 0]])
    }
    fn word(gs: &[Generator]) -> Word {
        Word(gs.to_vec())
    }

    #[test]
    fn normalize_collects_like_terms() {
        let e = NcExpr::sum(vec![NcExpr::gen(&d()), NcExpr::gen(&d())]);
        assert_eq!(normalize(&e), NcExpr::gen(&d()).scaled(int(2)));
    }

    #[test]
    fn normalize_flattens_products() {
        let e = NcExpr::product(vec![NcExpr::product(vec![NcExpr::gen(&x()), NcExpr::gen(&d())]), NcExpr::gen(&d())]);
        assert_eq!(normalize(&e), word(&[x(), d(), d()]).to_expr());
    }

    #[test]
    fn normalize_distributes() {
        let e = NcExpr::product(vec![NcExpr::gen(&d()), NcExpr::sum(vec![NcExpr::gen(&x()), NcExpr::gen(&x2())])]);
        assert_eq!(normalize(&e), NcExpr::Sum(vec![word(&[d(), x()]).to_expr(), word(&[d(), x2()]).to_expr()]));
    }

    #[test]
    fn normal_form_orders_length_first() {
        let e = parse_expr("X*D + D + 3 + D*D*D", &gens()).unwrap();
        assert_eq!(normalize(&e).to_string(), "3 + D + X*D + D*D*D");
    }

    #[test]
    fn expand_single_generator() {
        let f = leibniz_expand(&NcExpr::gen(&d()), &d()).unwrap();
        assert_eq!(f.terms, vec![ExpansionTerm { coeff: int(1), left: Word::empty(), right: Word::empty() }]);
        assert_eq!(f.to_string(), "[U,D]");
    }

    #[test]
    fn expand_square() {
        let f = leibniz_expand(&NcExpr::gen(&d()).pow(2), &d()).unwrap();
        assert_eq!(f.terms.len(), 2);
        assert!(f.terms.contains(&ExpansionTerm { coeff: int(1), left: Word::empty(), right: word(&[d()]) }));
        assert!(f.terms.contains(&ExpansionTerm { coeff: int(1), left: word(&[d()]), right: Word::empty() }));
    }

    #[test]
    fn expand_sandwiched_generator() {
        let e = NcExpr::product(vec![NcExpr::gen(&x()), NcExpr::gen(&d()), NcExpr::gen(&x2())]);
        let f = leibniz_expand(&e, &d()).unwrap();
        assert_eq!(f.terms, vec![ExpansionTerm { coeff: int(1), left: word(&[x()]), right: word(&[x2()]) }]);
        assert_eq!(f.to_string(), "X*[U,D]*Y");
    }

    #[test]
    fn power_rule_term_count() {
        for n in 0..6u32 {
            let f = leibniz_expand(&NcExpr::gen(&d()).pow(n), &d()).unwrap();
            assert_eq!(f.terms.len(), n as usize);
            for j in 0..n as usize {
                assert!(f.terms.contains(&ExpansionTerm {
                    coeff: int(1),
                    left: Word(vec![d(); j]),
                    right: Word(vec![d(); n as usize - 1 - j]),
                }));
            }
        }
    }

    #[test]
    fn expand_rejects_untagged() {
        let e = NcExpr::product(vec![NcExpr::gen(&Generator::untagged("Q")), NcExpr::gen(&d())]);
        assert_eq!(leibniz_expand(&e, &d()), Err(Error::UntaggedGenerator("Q".into())));
    }

    #[test]
    fn evaluate_examples() {
        let a = Assignment::new(2).with("D", Matrix::diag_ints(&[1, -1])).with("X", Matrix::scalar(2, int(2)));
        assert_eq!(evaluate(&NcExpr::one(), &a).unwrap(), Matrix::identity(2));
        assert_eq!(evaluate(&NcExpr::gen(&d()).pow(2), &a).unwrap(), Matrix::identity(2));
        let xd = NcExpr::product(vec![NcExpr::gen(&x()), NcExpr::gen(&d())]);
        assert_eq!(evaluate(&xd, &a).unwrap(), Matrix::diag_ints(&[2, -2]));
    }

    #[test]
    fn evaluate_errors() {
        let a = Assignment::new(2).with("D", Matrix::identity(3));
        assert!(matches!(evaluate(&NcExpr::gen(&d()), &a), Err(Error::ShapeMismatch(_))));
        assert_eq!(evaluate(&NcExpr::gen(&x()), &Assignment::new(2)), Err(Error::MissingAssignment("X".into())));
        let bad = Assignment::new(2).with_update(swap()).with("X", Matrix::diag_ints(&[1, 0]));
        assert_eq!(evaluate(&NcExpr::gen(&x()), &bad), Err(Error::TagViolation("X".into())));
    }

    #[test]
    fn evaluate_expansion_examples() {
        let a = Assignment::new(2).with_update(swap()).with("D", Matrix::diag_ints(&[1, -1]));
        let empty = leibniz_expand(&NcExpr::constant(int(3)), &d()).unwrap();
        assert!(empty.terms.is_empty());
        assert!(evaluate_expansion(&empty, &a).unwrap().is_zero());
        let single = leibniz_expand(&NcExpr::gen(&d()), &d()).unwrap();
        assert_eq!(evaluate_expansion(&single, &a).unwrap(), Matrix::from_ints(&[[0, -2], [2, 0]]));
        let square = leibniz_expand(&NcExpr::gen(&d()).pow(2), &d()).unwrap();
        assert_eq!(square.terms.len(), 2);
        assert!(evaluate_expansion(&square, &a).unwrap().is_zero());
    }

    #[test]
    fn parse_grammar() {
        let g = gens();
        let e = parse_expr("1/2 * X D^2 + (D + X)^2 - 3", &g).unwrap();
        let a = Assignment::new(2).with("D", Matrix::diag_ints(&[1, 2])).with("X", swap());
        let direct = {
            let dm = Matrix::diag_ints(&[1, 2]);
            let s = &dm + &swap();
            let first = (&swap() * &(&dm * &dm)).scale(&frac(1, 2));
            &(&first + &(&s * &s)) - &Matrix::scalar(2, int(3))
        };
        assert_eq!(evaluate(&e, &a).unwrap(), direct);
        assert_eq!(parse_expr("-D", &g).unwrap(), NcExpr::gen(&d()).scaled(int(-1)));
        assert_eq!(parse_expr("D X", &g).unwrap(), parse_expr("D*X", &g).unwrap());
    }

    #[test]
    fn parse_errors_carry_columns() {
        let g = gens();
        assert_eq!(
            parse_expr("D + Q", &g),
            Err(Error::ExprSyntax { column: 5, message: "unknown generator \"Q\"".into() })
        );
        assert!(matches!(parse_expr("D +", &g), Err(Error::ExprSyntax { column: 4, .. })));
        assert!(matches!(parse_expr("(D", &g), Err(Error::ExprSyntax { .. })));
        assert!(matches!(parse_expr("D^-1", &g), Err(Error::ExprSyntax { .. })));
        assert!(matches!(parse_expr("D # X", &g), Err(Error::ExprSyntax { column: 3, .. })));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let g = gens();
        for text in ["D", "2*X*D - D^2", "-1/3*(D + X)*Y", "(X*D)^3 + 4", "D - 2"] {
            let e = parse_expr(text, &g).unwrap();
            let reparsed = parse_expr(&e.to_string(), &g).unwrap();
            assert_eq!(normalize(&e), normalize(&reparsed), "{text} -> {e}");
        }
        let d = NcExpr::Gen(Generator::untagged("D"));
        let inner = NcExpr::Sum(vec![NcExpr::Const(int(-1)), d.clone()]);
        let nested = NcExpr::Sum(vec![d.clone(), inner.clone()]);
        assert_eq!(nested.to_string(), "D + (-1 + D)");
        let subtracted = NcExpr::Sum(vec![d.clone(), NcExpr::ScalarMul(int(-1), Box::new(inner))]);
        assert_eq!(subtracted.to_string(), "D - (-1 + D)");
        let double_negative =
            NcExpr::Sum(vec![d.clone(), NcExpr::ScalarMul(int(-1), Box::new(NcExpr::Const(int(-1))))]);
        assert_eq!(double_negative.to_string(), "D - 1*(-1)");
        for e in [nested, subtracted, double_negative] {
            assert_eq!(normalize(&parse_expr(&e.to_string(), &g).unwrap()), normalize(&e));
        }
    }
}
