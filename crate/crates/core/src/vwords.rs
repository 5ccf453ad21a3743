//! The words `v_{n,m}^{(h)}` and the test `S |= v = v^2`.
//!
//! Level `h` is `f(v_1, ..., v_{2n})` where
//! `f(b) = b_1 ... b_{2n} (b_n ... b_1 b_{n+1} ... b_{2n})^(2m-1)` and `v_j`
//! is level `h-1` with `j` appended to every index. The blocks `v_j` have
//! pairwise disjoint variables, so each ranges independently over the image
//! of level `h-1`, and `Im(h) = f(Im(h-1)^{2n})` with `Im(0) = S`.
//! Since `(v^2)φ = (vφ)^2`, `v = v^2` holds iff `Im(h)` consists of
//! multiplicative idempotents.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::par;
use crate::terms::{check_identity, CheckBudget, CheckMode, Identity, Polynomial, Var, Verdict, Word};

/// `x_{i_1 ... i_h}`, written `x{i_1}_{i_2}_..._{i_h}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndexVariable {
    indices: Vec<u16>,
}

impl MultiIndexVariable {
    pub fn new(indices: Vec<u16>) -> Result<Self> {
        if indices.is_empty() || indices.contains(&0) {
            return Err(Error::Input("indices must be a nonempty list of positive integers".into()));
        }
        Ok(MultiIndexVariable { indices })
    }

    pub fn indices(&self) -> &[u16] {
        &self.indices
    }

    pub fn to_var(&self) -> Var {
        Var::new(self.to_string()).expect("x followed by digits and underscores")
    }
}

impl fmt::Display for MultiIndexVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, "_")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndexVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix('x')
            .ok_or_else(|| Error::Input(format!("`{s}` is not a multi-index variable")))?;
        let indices = rest
            .split('_')
            .map(|p| p.parse::<u16>().map_err(|_| Error::Input(format!("`{s}` is not a multi-index variable"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }
}

impl Serialize for MultiIndexVariable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VWordSpec {
    pub n: usize,
    pub m: usize,
    pub h: usize,
}

impl VWordSpec {
    pub fn new(n: usize, m: usize, h: usize) -> Result<Self> {
        if n < 2 || m < 1 || h < 1 {
            return Err(Error::Input(format!("need n >= 2, m >= 1, h >= 1, got ({n}, {m}, {h})")));
        }
        if 2 * n > u16::MAX as usize {
            return Err(Error::Input("n too large".into()));
        }
        Ok(VWordSpec { n, m, h })
    }

    /// Block positions `1..=2n` of one level, `4nm` of them.
    pub fn pattern(&self) -> Vec<u16> {
        let n = self.n as u16;
        let mut p: Vec<u16> = (1..=2 * n).collect();
        let back: Vec<u16> = (1..=n).rev().chain(n + 1..=2 * n).collect();
        for _ in 0..2 * self.m - 1 {
            p.extend_from_slice(&back);
        }
        p
    }

    /// `(4nm)^h`, saturating.
    pub fn length(&self) -> u128 {
        ((4 * self.n * self.m) as u128).saturating_pow(self.h as u32)
    }

    /// `(2n)^h`, saturating.
    pub fn variable_count(&self) -> u128 {
        ((2 * self.n) as u128).saturating_pow(self.h as u32)
    }
}

impl fmt::Display for VWordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v(n={}, m={}, h={})", self.n, self.m, self.h)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VWordBudget {
    /// Letters in an explicitly built word.
    pub max_letters: u128,
    /// Tuples `|Im(h-1)|^{2n}` per level times the pattern length.
    pub max_lookups: u128,
    /// Substitutions in the brute-force image.
    pub max_substitutions: u128,
}

impl Default for VWordBudget {
    fn default() -> Self {
        VWordBudget {
            max_letters: 10_000_000,
            max_lookups: 100_000_000,
            max_substitutions: 100_000_000,
        }
    }
}

/// The explicit word, one [`MultiIndexVariable`] per letter.
pub fn v_word_variables(spec: VWordSpec, budget: VWordBudget) -> Result<Vec<MultiIndexVariable>> {
    if spec.length() > budget.max_letters {
        return Err(Error::budget("v-word letters", spec.length(), budget.max_letters));
    }
    let pattern = spec.pattern();
    let mut level: Vec<Vec<u16>> = pattern.iter().map(|&j| vec![j]).collect();
    for _ in 1..spec.h {
        let mut next = Vec::with_capacity(level.len() * pattern.len());
        for &j in &pattern {
            next.extend(level.iter().map(|ix| {
                let mut ix = ix.clone();
                ix.push(j);
                ix
            }));
        }
        level = next;
    }
    Ok(level.into_iter().map(|indices| MultiIndexVariable { indices }).collect())
}

pub fn v_word(spec: VWordSpec, budget: VWordBudget) -> Result<Word> {
    Word::new(v_word_variables(spec, budget)?.iter().map(MultiIndexVariable::to_var).collect())
}

/// `Im(1), ..., Im(h)`, each sorted.
#[derive(Clone, Debug, Serialize)]
pub struct HierarchicalImage {
    pub spec: VWordSpec,
    pub levels: Vec<Vec<ElementId>>,
}

impl HierarchicalImage {
    pub fn image(&self) -> &[ElementId] {
        self.levels.last().expect("h >= 1")
    }
}

fn power(s: &FiniteAiSemiring, mut a: ElementId, mut k: usize) -> ElementId {
    let mut acc: Option<ElementId> = None;
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(acc.map_or(a, |x| s.mul(x, a)));
        }
        a = s.mul(a, a);
        k >>= 1;
    }
    acc.expect("positive exponent")
}

/// `f(b)` for one tuple.
fn level_value(s: &FiniteAiSemiring, n: usize, m: usize, b: &[ElementId]) -> ElementId {
    let p = b[1..].iter().fold(b[0], |x, &y| s.mul(x, y));
    let q = b[..n].iter().rev().chain(&b[n..]).copied();
    let mut q = q.clone().skip(1).fold(b[n - 1], |x, y| s.mul(x, y));
    q = power(s, q, 2 * m - 1);
    s.mul(p, q)
}

const CHUNK: u128 = 4096;

/// `f(I^{2n})` as a sorted list.
fn apply_level(s: &FiniteAiSemiring, spec: VWordSpec, input: &[ElementId]) -> Vec<ElementId> {
    let k = 2 * spec.n;
    let base = input.len() as u128;
    let total = base.pow(k as u32);
    let chunks = total.div_ceil(CHUNK) as usize;
    let size = s.size();
    let hit = par::fold_reduce(
        chunks,
        || vec![false; size],
        |mut hit, c| {
            let start = c as u128 * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut digits = vec![0usize; k];
            let mut r = start;
            for d in digits.iter_mut().rev() {
                *d = (r % base) as usize;
                r /= base;
            }
            let mut b: Vec<ElementId> = digits.iter().map(|&d| input[d]).collect();
            for _ in start..end {
                hit[level_value(s, spec.n, spec.m, &b) as usize] = true;
                for pos in (0..k).rev() {
                    digits[pos] += 1;
                    if digits[pos] < input.len() {
                        b[pos] = input[digits[pos]];
                        break;
                    }
                    digits[pos] = 0;
                    b[pos] = input[0];
                }
            }
            hit
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
            a
        },
    );
    hit.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i as ElementId).collect()
}

pub fn hierarchical_image(s: &FiniteAiSemiring, spec: VWordSpec, budget: VWordBudget) -> Result<HierarchicalImage> {
    let per_tuple = (4 * spec.n * spec.m) as u128;
    let mut current: Vec<ElementId> = s.ids().collect();
    let mut levels = Vec::with_capacity(spec.h);
    for _ in 0..spec.h {
        let lookups = (current.len() as u128).saturating_pow(2 * spec.n as u32).saturating_mul(per_tuple);
        if lookups > budget.max_lookups {
            return Err(Error::budget("v-word image lookups", lookups, budget.max_lookups));
        }
        let next = apply_level(s, spec, &current);
        let stable = next == current;
        levels.push(next.clone());
        current = next;
        if stable {
            // Im is a fixed point of f from here on.
            while levels.len() < spec.h {
                levels.push(current.clone());
            }
            break;
        }
    }
    Ok(HierarchicalImage { spec, levels })
}

/// The image by enumerating every substitution of the explicit word.
pub fn direct_image(s: &FiniteAiSemiring, spec: VWordSpec, budget: VWordBudget) -> Result<Vec<ElementId>> {
    let vars = v_word_variables(spec, budget)?;
    let mut distinct: Vec<MultiIndexVariable> = vars.clone();
    distinct.sort();
    distinct.dedup();
    let k = distinct.len();
    let total = (s.size() as u128).saturating_pow(k as u32);
    if total > budget.max_substitutions {
        return Err(Error::budget("v-word substitutions", total, budget.max_substitutions));
    }
    let letters: Vec<usize> = vars.iter().map(|v| distinct.binary_search(v).expect("present")).collect();
    let size = s.size();
    let hit = par::fold_reduce(
        total as usize,
        || vec![false; size],
        |mut hit, idx| {
            let mut phi = vec![0 as ElementId; k];
            let mut r = idx;
            for p in phi.iter_mut().rev() {
                *p = (r % size) as ElementId;
                r /= size;
            }
            let v = letters[1..].iter().fold(phi[letters[0]], |x, &l| s.mul(x, phi[l]));
            hit[v as usize] = true;
            hit
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
            a
        },
    );
    Ok(hit.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i as ElementId).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SquareVerdict {
    Holds,
    /// A value of the word whose square differs from it.
    Fails { element: String },
}

impl SquareVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SquareVerdict::Holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub semiring: String,
    pub spec: VWordSpec,
    pub verdict: SquareVerdict,
    pub image: Vec<String>,
    pub image_sizes: Vec<usize>,
}

pub fn check_v_square(s: &FiniteAiSemiring, spec: VWordSpec, budget: VWordBudget) -> Result<SquareReport> {
    let im = hierarchical_image(s, spec, budget)?;
    let verdict = match im.image().iter().find(|&&a| s.mul(a, a) != a) {
        None => SquareVerdict::Holds,
        Some(&a) => SquareVerdict::Fails {
            element: s.element_name(a).to_string(),
        },
    };
    Ok(SquareReport {
        semiring: s.name().to_string(),
        spec,
        verdict,
        image: im.image().iter().map(|&a| s.element_name(a).to_string()).collect(),
        image_sizes: im.levels.iter().map(Vec::len).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transfer {
    /// Holds in `R_t` and in `End(P_t)`.
    Confirmed,
    /// Fails in `R_t`: no transfer claim.
    Vacuous,
    /// Holds in `R_t` but fails in `End(P_t)`.
    Violated,
    /// One side has no definite verdict.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub t: usize,
    pub subject: String,
    pub rook: String,
    pub end: String,
    pub transfer: Transfer,
}

fn transfer_of(rook: Option<bool>, end: Option<bool>) -> Transfer {
    match (rook, end) {
        (Some(false), _) => Transfer::Vacuous,
        (Some(true), Some(true)) => Transfer::Confirmed,
        (Some(true), Some(false)) => Transfer::Violated,
        _ => Transfer::Inconclusive,
    }
}

fn pair(t: usize) -> Result<(FiniteAiSemiring, FiniteAiSemiring)> {
    let rook = crate::catalog::rook_semiring(t)?;
    let end = crate::catalog::get_semiring(&format!("End(P{t})"))?;
    Ok((rook, end))
}

/// `v = v^2` in `R_t` and `End(P_t)` by the image method.
pub fn transfer_check(t: usize, spec: VWordSpec, budget: VWordBudget) -> Result<TransferReport> {
    let (rook, end) = pair(t)?;
    let r = check_v_square(&rook, spec, budget)?.verdict;
    let e = check_v_square(&end, spec, budget)?.verdict;
    let show = |v: &SquareVerdict| match v {
        SquareVerdict::Holds => "holds".to_string(),
        SquareVerdict::Fails { element } => format!("fails at value {element}"),
    };
    Ok(TransferReport {
        t,
        subject: spec.to_string(),
        rook: show(&r),
        end: show(&e),
        transfer: transfer_of(Some(r.holds()), Some(e.holds())),
    })
}

/// `w = w^2` in `R_t` and `End(P_t)` by direct identity checking.
pub fn transfer_check_word(t: usize, w: &Word, mode: CheckMode, budget: CheckBudget) -> Result<TransferReport> {
    let (rook, end) = pair(t)?;
    let p = w.to_polynomial();
    let id = Identity::eq(p.clone(), Polynomial::Product(vec![p.clone(), p]));
    let verdict = |s: &FiniteAiSemiring| -> Result<(Option<bool>, String)> {
        Ok(match check_identity(s, &id, mode, budget)? {
            Verdict::Holds => (Some(true), "holds".into()),
            Verdict::Fails(phi) => (Some(false), format!("fails at {}", phi.to_json(s))),
            Verdict::NoCounterexample { count, .. } => (None, format!("no counterexample in {count} samples")),
        })
    };
    let (r, rs) = verdict(&rook)?;
    let (e, es) = verdict(&end)?;
    Ok(TransferReport {
        t,
        subject: w.to_string(),
        rook: rs,
        end: es,
        transfer: transfer_of(r, e),
    })
}
