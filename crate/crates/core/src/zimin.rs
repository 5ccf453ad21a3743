//! Zimin words and minimal / maximal / isolated words of a finite
//! ai-semiring.
//!
//! # Decision procedure
//!
//! Let `w` be a word with alphabet `X = vars(w)` and let `T` be the word
//! function semigroup of `S` over `X` (see
//! [`crate::terms::WordFunctionSemigroup`]). A word `w'` over `X` satisfies
//! `S |= w' <= w` exactly when its function `g` has `g + ŵ = ŵ` pointwise,
//! so the violators of minimality are the words other than `w` whose state
//! lies in `D = { g : g + ŵ = ŵ }` (dually `ŵ + g = g` for maximality).
//!
//! *Length bound.* `T` is a deterministic transition system, so a word
//! longer than `|T|` revisits a state within its first `|T| + 1` prefixes,
//! and cutting that loop (length at most `|T|`) keeps the final state.
//! Starting from a violator longer than `|w| + |T|` and cutting while the
//! length exceeds `|w| + |T|` ends at a length in `(|w|, |w| + |T|]`, which
//! is still a violator and cannot be `w`. Hence `w` is minimal iff exactly
//! one word of length `1..=|w| + |T|` has its state in `D`. Counting is a
//! path-count dynamic programme on `T`, saturating at 2.
//!
//! *Alphabet.* A violator `w'` that uses a variable `y` outside `X` yields a
//! violator over `X`: substitute `y -> x^(|w|+1)` for some `x` in `X`.
//! Identities are closed under substitution and `w` does not contain `y`,
//! and the result is longer than `w`, so it differs from `w`.
//!
//! When `T` exceeds the state budget, or the wall-clock limit is hit, the
//! verdict is `Inconclusive`; a definite answer is never guessed.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::par;
use crate::terms::{word_function_semigroup, Var, Word, WordFunctionSemigroup};

/// `Z_1 = x1`, `Z_{m+1} = Z_m x_{m+1} Z_m`.
pub fn zimin(m: usize) -> Word {
    assert!(m >= 1, "Zimin words start at m = 1");
    let mut letters = vec![Var::indexed(1)];
    for k in 2..=m {
        let prev = letters.clone();
        letters.push(Var::indexed(k));
        letters.extend(prev);
    }
    Word::new(letters).expect("nonempty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Minimal,
    Maximal,
    Isolated,
}

impl std::str::FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(Property::Minimal),
            "maximal" => Ok(Property::Maximal),
            "isolated" => Ok(Property::Isolated),
            _ => Err(Error::Input(format!("unknown property `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Status {
    Confirmed,
    /// `witness` differs from the word and satisfies `witness <= word`
    /// (minimal) or `word <= witness` (maximal) in the semiring.
    Refuted {
        witness: Word,
        direction: Property,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct IsolationVerdict {
    pub word: Word,
    pub semiring: String,
    pub property: Property,
    pub status: Status,
    /// Largest word length counted, `|w| + |T|`.
    pub bound: usize,
    pub states: usize,
    pub elapsed_ms: u128,
    /// The minimal and maximal halves of an isolation verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<IsolationVerdict>,
}

impl IsolationVerdict {
    pub fn confirmed(&self) -> bool {
        self.status == Status::Confirmed
    }

    pub fn refuted(&self) -> Option<&Word> {
        match &self.status {
            Status::Refuted { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZiminBudget {
    pub max_states: usize,
    pub time_limit: Duration,
}

impl Default for ZiminBudget {
    fn default() -> Self {
        ZiminBudget {
            max_states: 200_000,
            time_limit: Duration::from_secs(600),
        }
    }
}

pub fn is_minimal(s: &FiniteAiSemiring, w: &Word, budget: ZiminBudget) -> Result<IsolationVerdict> {
    decide(s, w, Property::Minimal, budget)
}

pub fn is_maximal(s: &FiniteAiSemiring, w: &Word, budget: ZiminBudget) -> Result<IsolationVerdict> {
    decide(s, w, Property::Maximal, budget)
}

/// Both halves; the time limit applies to each half separately.
pub fn is_isolated(s: &FiniteAiSemiring, w: &Word, budget: ZiminBudget) -> Result<IsolationVerdict> {
    let start = Instant::now();
    let min = is_minimal(s, w, budget)?;
    let max = is_maximal(s, w, budget)?;
    let status = match (&min.status, &max.status) {
        (Status::Refuted { .. }, _) => min.status.clone(),
        (_, Status::Refuted { .. }) => max.status.clone(),
        (Status::Confirmed, Status::Confirmed) => Status::Confirmed,
        _ => Status::Inconclusive {
            reason: "one of the halves is inconclusive".into(),
        },
    };
    Ok(IsolationVerdict {
        word: w.clone(),
        semiring: s.name().into(),
        property: Property::Isolated,
        status,
        bound: min.bound.max(max.bound),
        states: min.states,
        elapsed_ms: start.elapsed().as_millis(),
        parts: vec![min, max],
    })
}

pub fn decide(s: &FiniteAiSemiring, w: &Word, property: Property, budget: ZiminBudget) -> Result<IsolationVerdict> {
    if property == Property::Isolated {
        return is_isolated(s, w, budget);
    }
    let start = Instant::now();
    let vars: Vec<Var> = w.vars().into_iter().collect();
    let t = word_function_semigroup(s, &vars, budget.max_states)?;
    let verdict = |status, bound| IsolationVerdict {
        word: w.clone(),
        semiring: s.name().into(),
        property,
        status,
        bound,
        states: t.state_count(),
        elapsed_ms: start.elapsed().as_millis(),
        parts: Vec::new(),
    };
    if t.overflowed() {
        return Ok(verdict(
            Status::Inconclusive {
                reason: format!("word function semigroup exceeds {} states", budget.max_states),
            },
            0,
        ));
    }
    let own = t.state_of(w).expect("complete closure contains every word");
    let f_w = t.function(own);
    let in_d: Vec<bool> = (0..t.state_count())
        .map(|g| {
            let f_g = t.function(g);
            match property {
                Property::Minimal => f_g.iter().zip(f_w).all(|(&a, &b)| s.add(a, b) == b),
                _ => f_g.iter().zip(f_w).all(|(&a, &b)| s.add(b, a) == a),
            }
        })
        .collect();
    let bound = w.len() + t.state_count();

    match count_words_into(&t, &in_d, bound, start, budget.time_limit) {
        None => Ok(verdict(
            Status::Inconclusive {
                reason: format!("time limit of {:?} reached", budget.time_limit),
            },
            bound,
        )),
        Some(1) => Ok(verdict(Status::Confirmed, bound)),
        Some(0) => Err(Error::Precondition("the word itself was not counted".into())),
        Some(_) => {
            let witness = violator(&t, w, own, &in_d)
                .ok_or_else(|| Error::Precondition("path count found a violator but none was extracted".into()))?;
            Ok(verdict(
                Status::Refuted {
                    witness,
                    direction: property,
                },
                bound,
            ))
        }
    }
}

/// Number of words of length `1..=bound` ending in a marked state,
/// saturated at 2. `None` on timeout.
fn count_words_into(
    t: &WordFunctionSemigroup,
    marked: &[bool],
    bound: usize,
    start: Instant,
    limit: Duration,
) -> Option<u8> {
    let k = t.vars().len();
    let n = t.state_count();
    let pred = t.predecessors();
    let mut cur = vec![0u8; n];
    for x in 0..k {
        let p = t.projection(x);
        cur[p] = cur[p].saturating_add(1).min(2);
    }
    let tally = |v: &[u8]| -> u8 {
        v.iter()
            .zip(marked)
            .filter(|(_, &m)| m)
            .fold(0u8, |acc, (&c, _)| acc.saturating_add(c).min(2))
    };
    let mut total = tally(&cur);
    for _ in 2..=bound {
        if total >= 2 {
            break;
        }
        if start.elapsed() > limit {
            return None;
        }
        cur = par::map_collect(n, |st| {
            pred[st]
                .iter()
                .fold(0u8, |acc, &(p, _)| acc.saturating_add(cur[p as usize]).min(2))
        });
        total = total.saturating_add(tally(&cur)).min(2);
    }
    Some(total)
}

/// A word other than `w` whose state is marked.
fn violator(t: &WordFunctionSemigroup, w: &Word, own: usize, marked: &[bool]) -> Option<Word> {
    if let Some(g) = (0..t.state_count()).find(|&g| g != own && marked[g]) {
        return Some(t.witness(g));
    }
    // Only the state of `w` is marked: look for a second word reaching it.
    // Any such word first deviates from `w` somewhere, so try every
    // deviation point and finish with a shortest path back to `own`.
    let n = t.state_count();
    let k = t.vars().len();
    let pred = t.predecessors();
    let mut dist = vec![usize::MAX; n];
    let mut next_hop = vec![(0u32, 0u16); n];
    dist[own] = 0;
    let mut queue = std::collections::VecDeque::from([own]);
    while let Some(q) = queue.pop_front() {
        for &(p, x) in &pred[q] {
            if dist[p as usize] == usize::MAX {
                dist[p as usize] = dist[q] + 1;
                next_hop[p as usize] = (q as u32, x);
                queue.push_back(p as usize);
            }
        }
    }
    let finish = |prefix: Vec<Var>, from: usize| -> Vec<Var> {
        let mut letters = prefix;
        let mut s = from;
        while s != own {
            let (q, x) = next_hop[s];
            letters.push(t.vars()[x as usize].clone());
            s = q as usize;
        }
        letters
    };
    let letters = w.letters();
    let letter_idx: Vec<usize> = letters.iter().map(|v| t.letter_of(v).unwrap()).collect();
    let mut prefix_states = Vec::with_capacity(letters.len());
    let mut s = t.projection(letter_idx[0]);
    prefix_states.push(s);
    for &x in &letter_idx[1..] {
        s = t.transition(s, x)?;
        prefix_states.push(s);
    }

    let mut best: Option<Vec<Var>> = None;
    let mut offer = |cand: Vec<Var>| {
        if best.as_ref().is_none_or(|b| cand.len() < b.len()) {
            best = Some(cand);
        }
    };
    // Proper prefixes already in the state of `w`.
    for i in 1..letters.len() {
        if prefix_states[i - 1] == own {
            offer(letters[..i].to_vec());
        }
    }
    // Deviation at position i, or extension past the end (i = |w|).
    for i in 0..=letters.len() {
        for y in 0..k {
            if i < letters.len() && y == letter_idx[i] {
                continue;
            }
            let next = if i == 0 {
                t.projection(y)
            } else {
                match t.transition(prefix_states[i - 1], y) {
                    Some(q) => q,
                    None => continue,
                }
            };
            if dist[next] != usize::MAX {
                let mut prefix = letters[..i].to_vec();
                prefix.push(t.vars()[y].clone());
                offer(finish(prefix, next));
            }
        }
    }
    best.map(|l| Word::new(l).expect("nonempty"))
}

/// Value of a word at an assignment, by direct multiplication.
pub fn word_value(s: &FiniteAiSemiring, w: &Word, vars: &[Var], assignment: &[ElementId]) -> ElementId {
    let pos = |v: &Var| vars.iter().position(|x| x == v).expect("variable in alphabet");
    w.letters()
        .iter()
        .map(|v| assignment[pos(v)])
        .reduce(|a, b| s.mul(a, b))
        .expect("nonempty")
}
