//! Semiring polynomials, identities and their evaluation.
//!
//! Surface syntax (see [`parse`]): juxtaposition or `*` is product, `+` is
//! sum, `<=` and `=` separate the sides of an identity, and product binds
//! tighter than sum. Variables match `[a-z][a-z0-9_]*`, so `x2_4` is a
//! single variable.

mod check;
mod parse;
mod wordfn;

pub use check::{check_identity, CheckBudget, CheckMode, Verdict};
pub use parse::{parse, parse_identity, parse_polynomial, Parsed};
pub use wordfn::{word_function_semigroup, WordFunctionSemigroup};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'));
        if !ok {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("`{name}` is not a variable name"),
            });
        }
        Ok(Var(name))
    }

    /// `x{i}` for an index; always a valid name.
    pub fn indexed(i: usize) -> Self {
        Var(format!("x{i}"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Var {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Var::new(s)
    }
}

impl From<Var> for String {
    fn from(v: Var) -> String {
        v.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A nonempty sequence of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Var>);

impl Word {
    pub fn new(letters: Vec<Var>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty word".into(),
            });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().cloned().collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn occurrences(&self, v: &Var) -> usize {
        self.0.iter().filter(|x| *x == v).count()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        if self.0.len() == 1 {
            Polynomial::Var(self.0[0].clone())
        } else {
            Polynomial::Product(self.0.iter().cloned().map(Polynomial::Var).collect())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(v.name())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Syntax tree of a polynomial. Parentheses are not nodes; nesting is kept
/// exactly as written so printing and re-parsing is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Polynomial {
    Var(Var),
    Sum(Vec<Polynomial>),
    Product(Vec<Polynomial>),
}

/// Default cap on the size of a distributive expansion.
pub const DEFAULT_MAX_WORDS: usize = 1 << 16;

impl std::ops::Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, other: Polynomial) -> Polynomial {
        Polynomial::Product(vec![self, other])
    }
}

impl Polynomial {
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Polynomial::Var(v) => {
                out.insert(v.clone());
            }
            Polynomial::Sum(ps) | Polynomial::Product(ps) => ps.iter().for_each(|p| p.collect_vars(out)),
        }
    }

    pub fn normal(&self) -> Result<BTreeSet<Word>> {
        normalize(self, DEFAULT_MAX_WORDS)
    }


    /// The word this polynomial denotes, if it contains no sums.
    pub fn as_word(&self) -> Option<Word> {
        match self {
            Polynomial::Var(v) => Some(Word(vec![v.clone()])),
            Polynomial::Sum(_) => None,
            Polynomial::Product(ps) => {
                let mut letters = Vec::new();
                for p in ps {
                    letters.extend(p.as_word()?.0);
                }
                Some(Word(letters))
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polynomial::Var(v) => f.write_str(v.name()),
            Polynomial::Sum(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match p {
                        Polynomial::Sum(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            Polynomial::Product(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match p {
                        Polynomial::Var(_) => write!(f, "{p}")?,
                        _ => write!(f, "({p})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Distributive expansion into a duplicate-free, sorted set of words.
pub fn normalize(p: &Polynomial, max_words: usize) -> Result<BTreeSet<Word>> {
    let out = match p {
        Polynomial::Var(v) => BTreeSet::from([Word(vec![v.clone()])]),
        Polynomial::Sum(ps) => {
            let mut out = BTreeSet::new();
            for q in ps {
                out.extend(normalize(q, max_words)?);
                if out.len() > max_words {
                    return Err(Error::budget("normal form size", out.len() as u128, max_words as u128));
                }
            }
            out
        }
        Polynomial::Product(ps) => {
            let mut acc: Option<BTreeSet<Word>> = None;
            for q in ps {
                let right = normalize(q, max_words)?;
                acc = Some(match acc {
                    None => right,
                    Some(left) => {
                        let needed = left.len() as u128 * right.len() as u128;
                        if needed > max_words as u128 * 8 {
                            return Err(Error::budget("normal form size", needed, max_words as u128));
                        }
                        let mut prod = BTreeSet::new();
                        for a in &left {
                            for b in &right {
                                prod.insert(a.concat(b));
                            }
                        }
                        prod
                    }
                });
            }
            acc.unwrap_or_default()
        }
    };
    if out.len() > max_words {
        return Err(Error::budget("normal form size", out.len() as u128, max_words as u128));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equation,
    Inequality,
}

/// `lhs = rhs`, or `lhs <= rhs` which is checked as `lhs + rhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Polynomial,
    pub rhs: Polynomial,
    pub kind: Relation,
}

impl Identity {
    pub fn eq(lhs: Polynomial, rhs: Polynomial) -> Self {
        Identity {
            lhs,
            rhs,
            kind: Relation::Equation,
        }
    }

    pub fn leq(lhs: Polynomial, rhs: Polynomial) -> Self {
        Identity {
            lhs,
            rhs,
            kind: Relation::Inequality,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            Relation::Equation => "=",
            Relation::Inequality => "<=",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

/// An assignment of semiring elements to variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(pub BTreeMap<Var, ElementId>);

impl Substitution {
    pub fn get(&self, v: &Var) -> Option<ElementId> {
        self.0.get(v).copied()
    }

    pub fn with(mut self, v: Var, a: ElementId) -> Self {
        self.0.insert(v, a);
        self
    }

    /// `{"x": "c", ...}` with element names.
    pub fn to_json(&self, s: &FiniteAiSemiring) -> serde_json::Value {
        serde_json::Value::Object(
            self.0
                .iter()
                .map(|(v, &a)| (v.name().to_string(), serde_json::Value::String(s.element_name(a).into())))
                .collect(),
        )
    }
}

pub fn evaluate(p: &Polynomial, s: &FiniteAiSemiring, phi: &Substitution) -> Result<ElementId> {
    match p {
        Polynomial::Var(v) => phi.get(v).ok_or_else(|| Error::Unbound(v.name().into())),
        Polynomial::Sum(ps) => fold(ps, s, phi, |a, b| s.add(a, b)),
        Polynomial::Product(ps) => fold(ps, s, phi, |a, b| s.mul(a, b)),
    }
}

fn fold(
    ps: &[Polynomial],
    s: &FiniteAiSemiring,
    phi: &Substitution,
    op: impl Fn(ElementId, ElementId) -> ElementId,
) -> Result<ElementId> {
    let mut it = ps.iter();
    let first = it.next().ok_or_else(|| Error::Input("empty sum or product".into()))?;
    let mut acc = evaluate(first, s, phi)?;
    for q in it {
        acc = op(acc, evaluate(q, s, phi)?);
    }
    Ok(acc)
}

pub fn evaluate_word(w: &Word, s: &FiniteAiSemiring, phi: &Substitution) -> Result<ElementId> {
    let mut it = w.0.iter();
    let first = it.next().expect("words are nonempty");
    let mut acc = phi.get(first).ok_or_else(|| Error::Unbound(first.name().into()))?;
    for v in it {
        acc = s.mul(acc, phi.get(v).ok_or_else(|| Error::Unbound(v.name().into()))?);
    }
    Ok(acc)
}

/// Sum of word values; agrees with [`evaluate`] on any ai-semiring.
pub fn evaluate_normal(words: &BTreeSet<Word>, s: &FiniteAiSemiring, phi: &Substitution) -> Result<ElementId> {
    let mut acc = None;
    for w in words {
        let v = evaluate_word(w, s, phi)?;
        acc = Some(acc.map_or(v, |a| s.add(a, v)));
    }
    acc.ok_or_else(|| Error::Input("empty normal form".into()))
}

pub fn holds_at(id: &Identity, s: &FiniteAiSemiring, phi: &Substitution) -> Result<bool> {
    let l = evaluate(&id.lhs, s, phi)?;
    let r = evaluate(&id.rhs, s, phi)?;
    Ok(match id.kind {
        Relation::Equation => l == r,
        Relation::Inequality => s.add(l, r) == r,
    })
}
