//! The semigroup of word functions `S^X -> S`.
//!
//! A word over `X` defines a function from assignments to `S`. The set of
//! functions realised by nonempty words is closed under right
//! multiplication by the projections, which is how it is built here: a
//! breadth-first closure starting from the projections. Each state keeps a
//! BFS parent, so its witness word is a shortest word realising it.

use std::collections::HashMap;

use super::{Var, Word};
use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::par;

/// Upper bound on `|S|^|X|`, the length of one function vector.
pub const MAX_POINTS: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct WordFunctionSemigroup {
    size: usize,
    vars: Vec<Var>,
    points: usize,
    states: Vec<Box<[ElementId]>>,
    /// Row-major `state * |X| + letter`; `u32::MAX` when the closure
    /// overflowed before the transition was computed.
    trans: Vec<u32>,
    parent: Vec<(u32, u16)>,
    overflow: bool,
}

const ROOT: u32 = u32::MAX;

impl WordFunctionSemigroup {
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// True when `max_states` was reached; the state set is then partial.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn function(&self, state: usize) -> &[ElementId] {
        &self.states[state]
    }

    pub fn transition(&self, state: usize, letter: usize) -> Option<usize> {
        let t = self.trans[state * self.vars.len() + letter];
        (t != u32::MAX).then_some(t as usize)
    }

    pub fn projection(&self, letter: usize) -> usize {
        // Projections are inserted first, in letter order, but coincide
        // when |S| = 1.
        let target = projection_vector(self.size, self.vars.len(), letter);
        self.states
            .iter()
            .position(|s| **s == *target)
            .expect("projections are always present")
    }

    pub fn letter_of(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    pub fn witness(&self, state: usize) -> Word {
        let mut letters = Vec::new();
        let mut s = state as u32;
        loop {
            let (p, x) = self.parent[s as usize];
            letters.push(self.vars[x as usize].clone());
            if p == ROOT {
                break;
            }
            s = p;
        }
        letters.reverse();
        Word::new(letters).expect("nonempty")
    }

    /// The state reached by `w`, or `None` if `w` leaves the alphabet or
    /// runs into a missing transition.
    pub fn state_of(&self, w: &Word) -> Option<usize> {
        let mut it = w.letters().iter();
        let mut s = self.projection(self.letter_of(it.next()?)?);
        for v in it {
            s = self.transition(s, self.letter_of(v)?)?;
        }
        Some(s)
    }

    /// Value of a state's function at an assignment (values in `vars` order).
    pub fn value_at(&self, state: usize, assignment: &[ElementId]) -> ElementId {
        let idx = assignment.iter().fold(0usize, |acc, &v| acc * self.size + v as usize);
        self.states[state][idx]
    }

    /// Incoming edges per state, `(source, letter)`.
    pub fn predecessors(&self) -> Vec<Vec<(u32, u16)>> {
        let k = self.vars.len();
        let mut pred = vec![Vec::new(); self.states.len()];
        for s in 0..self.states.len() {
            for x in 0..k {
                if let Some(t) = self.transition(s, x) {
                    pred[t].push((s as u32, x as u16));
                }
            }
        }
        pred
    }
}

fn projection_vector(size: usize, k: usize, letter: usize) -> Box<[ElementId]> {
    let points = size.pow(k as u32);
    let stride = size.pow((k - 1 - letter) as u32);
    (0..points).map(|p| ((p / stride) % size) as ElementId).collect()
}

pub fn word_function_semigroup(s: &FiniteAiSemiring, vars: &[Var], max_states: usize) -> Result<WordFunctionSemigroup> {
    let size = s.size();
    let k = vars.len();
    if k == 0 {
        return Err(Error::Precondition("alphabet is empty".into()));
    }
    let points = (size as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if points > MAX_POINTS as u128 {
        return Err(Error::budget("word function length |S|^|X|", points, MAX_POINTS as u128));
    }
    let points = points as usize;
    let proj: Vec<Box<[ElementId]>> = (0..k).map(|x| projection_vector(size, k, x)).collect();

    let mut states: Vec<Box<[ElementId]>> = Vec::new();
    let mut parent = Vec::new();
    let mut index: HashMap<Box<[ElementId]>, u32> = HashMap::new();
    let mut overflow = false;
    for (x, p) in proj.iter().enumerate() {
        if !index.contains_key(p) {
            if states.len() == max_states {
                overflow = true;
                break;
            }
            index.insert(p.clone(), states.len() as u32);
            states.push(p.clone());
            parent.push((ROOT, x as u16));
        }
    }
    let mut trans: Vec<u32> = Vec::new();
    let mut frontier = 0..states.len();
    while !overflow && !frontier.is_empty() {
        // Products of one BFS layer are computed in parallel and inserted
        // in (state, letter) order, so numbering does not depend on threads.
        let layer: Vec<usize> = frontier.clone().collect();
        let jobs = layer.len() * k;
        let products: Vec<Box<[ElementId]>> = par::map_collect(jobs, |j| {
            let (st, x) = (layer[j / k], j % k);
            let f = &states[st];
            let px = &proj[x];
            (0..points).map(|p| s.mul(f[p], px[p])).collect()
        });
        let next_start = states.len();
        for (j, v) in products.into_iter().enumerate() {
            let id = match index.get(&v) {
                Some(&id) => id,
                None => {
                    if states.len() == max_states {
                        overflow = true;
                        break;
                    }
                    let id = states.len() as u32;
                    index.insert(v.clone(), id);
                    states.push(v);
                    parent.push((layer[j / k] as u32, (j % k) as u16));
                    id
                }
            };
            trans.push(id);
        }
        frontier = next_start..states.len();
    }
    trans.resize(states.len() * k, u32::MAX);
    Ok(WordFunctionSemigroup {
        size,
        vars: vars.to_vec(),
        points,
        states,
        trans,
        parent,
        overflow,
    })
}
