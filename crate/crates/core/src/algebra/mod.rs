//! Table-based finite ai-semirings.
//!
//! Elements are dense indices `0..n` with a parallel table of names. Both
//! operations are stored row-major, so `add(a, b)` is `add[a * n + b]`.

mod additions;

pub use additions::{find_compatible_additions, AdditionSearch, AdditionSearchBudget};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub type ElementId = u16;

/// Largest carrier the table representation accepts.
pub const MAX_ELEMENTS: usize = ElementId::MAX as usize;

/// Raw, unvalidated tables. This is the shape of the semiring file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringTables {
    pub name: String,
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    AddCommutative,
    AddAssociative,
    AddIdempotent,
    MulAssociative,
    LeftDistributive,
    RightDistributive,
    OrderCompatible,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::AddCommutative,
        Axiom::AddAssociative,
        Axiom::AddIdempotent,
        Axiom::MulAssociative,
        Axiom::LeftDistributive,
        Axiom::RightDistributive,
        Axiom::OrderCompatible,
    ];

    pub fn law(self) -> &'static str {
        match self {
            Axiom::AddCommutative => "a+b=b+a",
            Axiom::AddAssociative => "a+(b+c)=(a+b)+c",
            Axiom::AddIdempotent => "a+a=a",
            Axiom::MulAssociative => "a(bc)=(ab)c",
            Axiom::LeftDistributive => "a(b+c)=ab+ac",
            Axiom::RightDistributive => "(a+b)c=ac+bc",
            Axiom::OrderCompatible => "a<=b implies ac<=bc and ca<=cb",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// Element names of the witnessing tuple.
    pub witness: Vec<String>,
}

/// At most one violation per axiom family, in [`Axiom::ALL`] order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} fails at ({})", v.axiom.law(), v.witness.join(","))?;
        }
        Ok(())
    }
}

/// Checks the shape of a table pair and returns the flattened tables.
fn flatten(t: &SemiringTables) -> Result<(Vec<ElementId>, Vec<ElementId>)> {
    let n = t.elements.len();
    if n == 0 {
        return Err(Error::Input("carrier is empty".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::Input(format!("carrier of {n} elements is too large")));
    }
    let mut seen = HashMap::new();
    for (i, e) in t.elements.iter().enumerate() {
        if seen.insert(e.as_str(), i).is_some() {
            return Err(Error::DuplicateName(e.clone()));
        }
    }
    let flat = |which: &str, rows: &[Vec<usize>]| -> Result<Vec<ElementId>> {
        if rows.len() != n {
            return Err(Error::Input(format!("{which} table has {} rows, expected {n}", rows.len())));
        }
        let mut out = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "{which} table row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::Input(format!("{which}[{i}][{j}] = {v} is out of range")));
                }
                out.push(v as ElementId);
            }
        }
        Ok(out)
    };
    Ok((flat("add", &t.add)?, flat("mul", &t.mul)?))
}

/// Exhaustively checks all seven axiom families.
///
/// Malformed tables are an `Err`; axiom failures are reported in the
/// returned [`ValidationReport`].
pub fn validate(t: &SemiringTables) -> Result<ValidationReport> {
    let (add, mul) = flatten(t)?;
    let raw = check_axioms(t.elements.len(), &add, &mul);
    Ok(ValidationReport {
        violations: raw
            .into_iter()
            .map(|(axiom, w)| Violation {
                axiom,
                witness: w.iter().map(|&i| t.elements[i].clone()).collect(),
            })
            .collect(),
    })
}

pub(crate) fn check_axioms(n: usize, add: &[ElementId], mul: &[ElementId]) -> Vec<(Axiom, Vec<usize>)> {
    let a_ = |x: usize, y: usize| add[x * n + y] as usize;
    let m_ = |x: usize, y: usize| mul[x * n + y] as usize;
    let leq = |x: usize, y: usize| a_(x, y) == y;
    let mut out = Vec::new();

    let comm = par::find_map_first(n, |a| {
        (a + 1..n).find(|&b| a_(a, b) != a_(b, a)).map(|b| vec![a, b])
    });
    let idem = (0..n).find(|&a| a_(a, a) != a).map(|a| vec![a]);
    let triple = |pred: &(dyn Fn(usize, usize, usize) -> bool + Sync)| {
        par::find_map_first(n, |a| {
            for b in 0..n {
                for c in 0..n {
                    if !pred(a, b, c) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        })
    };
    let add_assoc = triple(&|a, b, c| a_(a, a_(b, c)) == a_(a_(a, b), c));
    let mul_assoc = triple(&|a, b, c| m_(a, m_(b, c)) == m_(m_(a, b), c));
    let left = triple(&|a, b, c| m_(a, a_(b, c)) == a_(m_(a, b), m_(a, c)));
    let right = triple(&|a, b, c| m_(a_(a, b), c) == a_(m_(a, c), m_(b, c)));
    let compat = triple(&|a, b, c| !leq(a, b) || (leq(m_(a, c), m_(b, c)) && leq(m_(c, a), m_(c, b))));

    for (axiom, w) in [
        (Axiom::AddCommutative, comm),
        (Axiom::AddAssociative, add_assoc),
        (Axiom::AddIdempotent, idem),
        (Axiom::MulAssociative, mul_assoc),
        (Axiom::LeftDistributive, left),
        (Axiom::RightDistributive, right),
        (Axiom::OrderCompatible, compat),
    ] {
        if let Some(w) = w {
            out.push((axiom, w));
        }
    }
    out
}

/// A validated finite ai-semiring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAiSemiring {
    name: String,
    elements: Vec<String>,
    index: HashMap<String, ElementId>,
    add: Vec<ElementId>,
    mul: Vec<ElementId>,
}

impl FiniteAiSemiring {
    /// Validates `tables` and builds the semiring.
    pub fn new(tables: SemiringTables) -> Result<Self> {
        let (add, mul) = flatten(&tables)?;
        let s = Self::from_flat(tables.name, tables.elements, add, mul);
        let report = s.validate();
        if !report.is_valid() {
            return Err(Error::Axioms(report));
        }
        Ok(s)
    }

    /// Builds from flat tables without checking the axioms. Callers are
    /// constructions that are valid by construction; tests re-validate.
    pub(crate) fn from_flat(
        name: impl Into<String>,
        elements: Vec<String>,
        add: Vec<ElementId>,
        mul: Vec<ElementId>,
    ) -> Self {
        let n = elements.len();
        debug_assert_eq!(add.len(), n * n);
        debug_assert_eq!(mul.len(), n * n);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as ElementId))
            .collect();
        FiniteAiSemiring {
            name: name.into(),
            elements,
            index,
            add,
            mul,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, a: ElementId) -> &str {
        &self.elements[a as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<ElementId> {
        self.index.get(name).copied()
    }

    /// Like [`index_of`](Self::index_of) but with an error for unknown names.
    pub fn element(&self, name: &str) -> Result<ElementId> {
        self.index_of(name).ok_or_else(|| Error::UnknownElement(name.into()))
    }

    #[inline]
    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        self.add[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    /// `a <= b` in the natural order.
    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.add(a, b) == b
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        0..self.elements.len() as ElementId
    }

    pub fn add_table(&self) -> &[ElementId] {
        &self.add
    }

    pub fn mul_table(&self) -> &[ElementId] {
        &self.mul
    }

    pub fn validate(&self) -> ValidationReport {
        let raw = check_axioms(self.size(), &self.add, &self.mul);
        ValidationReport {
            violations: raw
                .into_iter()
                .map(|(axiom, w)| Violation {
                    axiom,
                    witness: w.iter().map(|&i| self.elements[i].clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_tables(&self) -> SemiringTables {
        let n = self.size();
        let rows = |t: &[ElementId]| -> Vec<Vec<usize>> {
            t.chunks(n).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
        };
        SemiringTables {
            name: self.name.clone(),
            elements: self.elements.clone(),
            add: rows(&self.add),
            mul: rows(&self.mul),
        }
    }

    /// The subsemiring on `carrier` (sorted ids, closed under both
    /// operations), with elements renumbered in the given order.
    pub fn restrict(&self, name: impl Into<String>, carrier: &[ElementId]) -> Result<FiniteAiSemiring> {
        let mut pos = vec![u16::MAX; self.size()];
        for (i, &a) in carrier.iter().enumerate() {
            pos[a as usize] = i as ElementId;
        }
        let k = carrier.len();
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &a in carrier {
            for &b in carrier {
                let (s, p) = (pos[self.add(a, b) as usize], pos[self.mul(a, b) as usize]);
                if s == u16::MAX || p == u16::MAX {
                    return Err(Error::Precondition(format!(
                        "carrier is not closed at ({},{})",
                        self.element_name(a),
                        self.element_name(b)
                    )));
                }
                add.push(s);
                mul.push(p);
            }
        }
        let elements = carrier.iter().map(|&a| self.elements[a as usize].clone()).collect();
        Ok(FiniteAiSemiring::from_flat(name, elements, add, mul))
    }

    /// The one-element semiring.
    pub fn trivial() -> Self {
        FiniteAiSemiring::from_flat("trivial", vec!["0".into()], vec![0], vec![0])
    }
}

/// The natural partial order `a <= b <=> a + b = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalOrder {
    n: usize,
    leq: Vec<bool>,
}

impl NaturalOrder {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a as usize * self.n + b as usize]
    }

    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let n = self.n as ElementId;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<ElementId> {
        let n = self.n as ElementId;
        (0..n).filter(|&a| !(0..n).any(|b| self.lt(b, a))).collect()
    }

    pub fn maximal_elements(&self) -> Vec<ElementId> {
        let n = self.n as ElementId;
        (0..n).filter(|&a| !(0..n).any(|b| self.lt(a, b))).collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.n as ElementId;
        (0..n).all(|a| self.leq(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c)))
            })
    }
}

pub fn natural_order(s: &FiniteAiSemiring) -> NaturalOrder {
    let n = s.size();
    let leq = (0..n * n)
        .map(|k| s.leq((k / n) as ElementId, (k % n) as ElementId))
        .collect();
    NaturalOrder { n, leq }
}

pub fn multiplicative_idempotents(s: &FiniteAiSemiring) -> Vec<ElementId> {
    s.ids().filter(|&x| s.mul(x, x) == x).collect()
}

/// Componentwise product; element `(s, t)` has index `s * |T| + t`.
pub fn direct_product(s: &FiniteAiSemiring, t: &FiniteAiSemiring, max_size: usize) -> Result<FiniteAiSemiring> {
    let (ns, nt) = (s.size(), t.size());
    let n = ns * nt;
    if n > max_size.min(MAX_ELEMENTS) {
        return Err(Error::budget("direct product size", n as u128, max_size as u128));
    }
    let pair = |k: usize| ((k / nt) as ElementId, (k % nt) as ElementId);
    let elements = (0..n)
        .map(|k| {
            let (a, b) = pair(k);
            format!("({},{})", s.element_name(a), t.element_name(b))
        })
        .collect();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let (a1, b1) = pair(x);
        for y in 0..n {
            let (a2, b2) = pair(y);
            add.push((s.add(a1, a2) as usize * nt + t.add(b1, b2) as usize) as ElementId);
            mul.push((s.mul(a1, a2) as usize * nt + t.mul(b1, b2) as usize) as ElementId);
        }
    }
    Ok(FiniteAiSemiring::from_flat(
        format!("{}x{}", s.name(), t.name()),
        elements,
        add,
        mul,
    ))
}

/// `S^k` with tuples in mixed-radix order (first coordinate most significant).
pub fn direct_power(s: &FiniteAiSemiring, k: u32, max_size: usize) -> Result<FiniteAiSemiring> {
    if k == 0 {
        return Err(Error::Precondition("power must be positive".into()));
    }
    let base = s.size();
    let n = (base as u128).checked_pow(k).unwrap_or(u128::MAX);
    if n > max_size.min(MAX_ELEMENTS) as u128 {
        return Err(Error::budget("direct power size", n, max_size as u128));
    }
    let n = n as usize;
    let k = k as usize;
    let digits = |mut x: usize| -> Vec<ElementId> {
        let mut d = vec![0; k];
        for slot in d.iter_mut().rev() {
            *slot = (x % base) as ElementId;
            x /= base;
        }
        d
    };
    let encode = |d: &[ElementId]| d.iter().fold(0usize, |acc, &v| acc * base + v as usize) as ElementId;
    let tuples: Vec<Vec<ElementId>> = (0..n).map(digits).collect();
    let elements = tuples
        .iter()
        .map(|d| format!("({})", d.iter().map(|&v| s.element_name(v)).collect::<Vec<_>>().join(",")))
        .collect();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    let mut buf = vec![0; k];
    for x in &tuples {
        for y in &tuples {
            for i in 0..k {
                buf[i] = s.add(x[i], y[i]);
            }
            add.push(encode(&buf));
            for i in 0..k {
                buf[i] = s.mul(x[i], y[i]);
            }
            mul.push(encode(&buf));
        }
    }
    Ok(FiniteAiSemiring::from_flat(format!("{}^{}", s.name(), k), elements, add, mul))
}
