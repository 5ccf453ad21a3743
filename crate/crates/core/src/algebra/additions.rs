//! Backtracking search for semilattice additions compatible with a fixed
//! multiplication.
//!
//! Upper-triangle entries of the addition table are assigned in row-major
//! order with ascending values; after every assignment all associativity
//! and distributivity instances whose entries are already known are
//! checked. Order compatibility alone is not enough to accept a table.

use super::{check_axioms, ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};

const UNSET: ElementId = ElementId::MAX;

#[derive(Clone, Copy, Debug)]
pub struct AdditionSearchBudget {
    pub max_elements: usize,
    pub max_nodes: u64,
}

impl Default for AdditionSearchBudget {
    fn default() -> Self {
        AdditionSearchBudget {
            max_elements: 8,
            max_nodes: 200_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdditionSearch {
    /// Every compatible structure found, in lexicographic order of the
    /// flattened addition table.
    pub semirings: Vec<FiniteAiSemiring>,
    /// False when the node budget ran out before the tree was exhausted.
    pub complete: bool,
    pub nodes: u64,
}

struct Search<'a> {
    n: usize,
    mul: &'a [ElementId],
    add: Vec<ElementId>,
    pairs: Vec<(usize, usize)>,
    found: Vec<Vec<ElementId>>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    #[inline]
    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    fn a(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.add[a * self.n + b];
        (v != UNSET).then_some(v as usize)
    }

    /// Every fully-determined instance of associativity and both
    /// distributive laws holds.
    fn consistent(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = self.a(x, y) else { continue };
                for z in 0..n {
                    // (x+y)+z = x+(y+z)
                    if let (Some(l), Some(yz)) = (self.a(xy, z), self.a(y, z)) {
                        if let Some(r) = self.a(x, yz) {
                            if l != r {
                                return false;
                            }
                        }
                    }
                    // z(x+y) = zx+zy
                    if let Some(r) = self.a(self.m(z, x), self.m(z, y)) {
                        if self.m(z, xy) != r {
                            return false;
                        }
                    }
                    // (x+y)z = xz+yz
                    if let Some(r) = self.a(self.m(x, z), self.m(y, z)) {
                        if self.m(xy, z) != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) -> bool {
        if self.nodes >= self.max_nodes {
            return false;
        }
        self.nodes += 1;
        if k == self.pairs.len() {
            if check_axioms(self.n, &self.add, self.mul).is_empty() {
                self.found.push(self.add.clone());
            }
            return true;
        }
        let (i, j) = self.pairs[k];
        for v in 0..self.n {
            self.add[i * self.n + j] = v as ElementId;
            self.add[j * self.n + i] = v as ElementId;
            if self.consistent() && !self.run(k + 1) {
                return false;
            }
        }
        self.add[i * self.n + j] = UNSET;
        self.add[j * self.n + i] = UNSET;
        true
    }
}

/// All addition tables turning `(elements, mul)` into an ai-semiring.
pub fn find_compatible_additions(
    name: &str,
    elements: &[String],
    mul: &[Vec<usize>],
    budget: AdditionSearchBudget,
) -> Result<AdditionSearch> {
    let n = elements.len();
    if n == 0 {
        return Err(Error::Input("carrier is empty".into()));
    }
    if n > budget.max_elements {
        return Err(Error::budget("carrier size for addition search", n as u128, budget.max_elements as u128));
    }
    if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
        return Err(Error::Input("multiplication table is not a square table over the carrier".into()));
    }
    let flat: Vec<ElementId> = mul.iter().flatten().map(|&v| v as ElementId).collect();
    let m = |a: usize, b: usize| flat[a * n + b] as usize;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m(a, m(b, c)) != m(m(a, b), c) {
                    return Err(Error::Precondition(format!(
                        "multiplication is not associative at ({},{},{})",
                        elements[a], elements[b], elements[c]
                    )));
                }
            }
        }
    }

    let mut add = vec![UNSET; n * n];
    for i in 0..n {
        add[i * n + i] = i as ElementId;
    }
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut search = Search {
        n,
        mul: &flat,
        add,
        pairs,
        found: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let complete = search.run(0);
    let semirings = search
        .found
        .iter()
        .enumerate()
        .map(|(k, add)| FiniteAiSemiring::from_flat(format!("{name}#{k}"), elements.to_vec(), add.clone(), flat.clone()))
        .collect();
    Ok(AdditionSearch {
        semirings,
        complete,
        nodes: search.nodes,
    })
}
