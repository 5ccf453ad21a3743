//! Finite join-semilattices and their endomorphism semirings.
//!
//! Maps act on the right: `Endomorphism::apply(a)` is `aα`, and the product
//! `αβ` in `End(A)` is "α then β", i.e. `a(αβ) = (aα)β`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{ElementId, FiniteAiSemiring, MAX_ELEMENTS};
use crate::error::{Error, Result};
use crate::par;

/// File form of a semilattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilatticeFile {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilattice {
    name: String,
    elements: Vec<String>,
    covers: Vec<(ElementId, ElementId)>,
    leq: Vec<bool>,
    join: Vec<ElementId>,
}

impl Semilattice {
    pub fn from_covers(name: impl Into<String>, elements: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateName(e.clone()));
            }
        }
        let lookup = |s: &String| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.clone()));
        let idx = covers
            .iter()
            .map(|(lo, hi)| Ok((lookup(lo)?, lookup(hi)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_cover_indices(name, elements, &idx)
    }

    pub fn from_cover_indices(name: impl Into<String>, elements: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Input("semilattice has no elements".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::Input(format!("{n} elements is too many")));
        }
        let mut seen = HashMap::new();
        for e in &elements {
            if seen.insert(e.as_str(), ()).is_some() {
                return Err(Error::DuplicateName(e.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::Input(format!("cover ({lo},{hi}) out of range")));
            }
            if lo == hi {
                return Err(Error::Cycle(elements[lo].clone()));
            }
            leq[lo * n + hi] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle(elements[i].clone()));
                }
            }
        }
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let ubs: Vec<usize> = (0..n).filter(|&u| leq[a * n + u] && leq[b * n + u]).collect();
                let least = ubs.iter().copied().find(|&u| ubs.iter().all(|&v| leq[u * n + v]));
                let Some(u) = least else {
                    return Err(Error::NoJoin(elements[a].clone(), elements[b].clone()));
                };
                join[a * n + b] = u as ElementId;
                join[b * n + a] = u as ElementId;
            }
        }
        Ok(Semilattice {
            name: name.into(),
            elements,
            covers: covers.iter().map(|&(a, b)| (a as ElementId, b as ElementId)).collect(),
            leq,
            join,
        })
    }

    pub fn from_file(f: &SemilatticeFile) -> Result<Self> {
        let covers: Vec<(String, String)> = f.covers.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        Self::from_covers(f.name.clone(), f.elements.clone(), &covers)
    }

    pub fn to_file(&self) -> SemilatticeFile {
        SemilatticeFile {
            name: self.name.clone(),
            elements: self.elements.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| [self.elements[a as usize].clone(), self.elements[b as usize].clone()])
                .collect(),
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_cover_indices(format!("C{n}"), elements, &covers)
    }

    /// The t-pod: minimal elements `1..=t` below the single top `0`.
    pub fn pod(t: usize) -> Result<Self> {
        let elements = (0..=t).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..=t).map(|i| (i, 0)).collect();
        Self::from_cover_indices(format!("P{t}"), elements, &covers)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn covers(&self) -> &[(ElementId, ElementId)] {
        &self.covers
    }

    pub fn index_of(&self, name: &str) -> Option<ElementId> {
        self.elements.iter().position(|e| e == name).map(|i| i as ElementId)
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a as usize * self.size() + b as usize]
    }

    pub fn top(&self) -> ElementId {
        (0..self.size() as ElementId).fold(0, |acc, a| self.join(acc, a))
    }

    /// Number of elements in a longest chain.
    pub fn height(&self) -> usize {
        let n = self.size();
        // Longest path ending at each element; process in order of downset size.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.leq[b * n + a]).count());
        let mut best = vec![1usize; n];
        for (k, &a) in order.iter().enumerate() {
            for &b in &order[..k] {
                if b != a && self.leq[b * n + a] {
                    best[a] = best[a].max(best[b] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Cover pairs of the order (Hasse diagram edges).
    pub fn hasse(&self) -> Vec<(ElementId, ElementId)> {
        let n = self.size() as ElementId;
        let lt = |a, b| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A join-preserving self-map, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomorphism(Vec<ElementId>);

impl Endomorphism {
    pub fn new(image: Vec<ElementId>) -> Self {
        Endomorphism(image)
    }

    pub fn image(&self) -> &[ElementId] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, a: ElementId) -> ElementId {
        self.0[a as usize]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism(self.0.iter().map(|&x| other.apply(x)).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn render(&self, a: &Semilattice) -> String {
        let names: Vec<&str> = self.0.iter().map(|&x| a.elements[x as usize].as_str()).collect();
        if a.elements.iter().all(|e| e.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }
}

/// First pair `(a, b)` with `(a+b)α != aα + bα`, if any.
pub fn first_join_violation(a: &Semilattice, map: &[ElementId]) -> Option<(ElementId, ElementId)> {
    let n = a.size() as ElementId;
    if map.len() != n as usize {
        return Some((0, 0));
    }
    for x in 0..n {
        for y in x..n {
            if map[a.join(x, y) as usize] != a.join(map[x as usize], map[y as usize]) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_endomorphism(a: &Semilattice, map: &[ElementId]) -> bool {
    first_join_violation(a, map).is_none()
}

#[derive(Clone, Copy, Debug)]
pub struct EndomorphismBudget {
    pub max_maps: usize,
}

impl Default for EndomorphismBudget {
    fn default() -> Self {
        EndomorphismBudget { max_maps: 1_000_000 }
    }
}

/// All endomorphisms, in lexicographic order of image vectors.
pub fn enumerate_endomorphisms(a: &Semilattice, budget: EndomorphismBudget) -> Result<Vec<Endomorphism>> {
    let n = a.size();
    // Constraints that become checkable once position k is assigned.
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for x in 0..n {
        for y in x..n {
            let j = a.join(x as ElementId, y as ElementId) as usize;
            checks[x.max(y).max(j)].push((x, y, j));
        }
    }
    let limit = budget.max_maps;
    let branches = par::map_collect(n, |first| {
        let mut img = vec![0 as ElementId; n];
        let mut out = Vec::new();
        img[0] = first as ElementId;
        let ok = checks[0]
            .iter()
            .all(|&(x, y, j)| img[j] == a.join(img[x], img[y]));
        if ok && !extend(a, &checks, &mut img, 1, &mut out, limit) {
            return Err(());
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for b in branches {
        match b {
            Ok(v) => all.extend(v),
            Err(()) => return Err(Error::budget("endomorphism count", limit as u128 + 1, limit as u128)),
        }
        if all.len() > limit {
            return Err(Error::budget("endomorphism count", all.len() as u128, limit as u128));
        }
    }
    Ok(all)
}

fn extend(
    a: &Semilattice,
    checks: &[Vec<(usize, usize, usize)>],
    img: &mut Vec<ElementId>,
    k: usize,
    out: &mut Vec<Endomorphism>,
    limit: usize,
) -> bool {
    let n = a.size();
    if k == n {
        out.push(Endomorphism(img.clone()));
        return out.len() <= limit;
    }
    for v in 0..n as ElementId {
        img[k] = v;
        if checks[k].iter().all(|&(x, y, j)| img[j] == a.join(img[x], img[y])) && !extend(a, checks, img, k + 1, out, limit) {
            return false;
        }
    }
    true
}

/// `End(A)` together with the maps behind each element index.
#[derive(Clone, Debug)]
pub struct EndSemiring {
    pub semilattice: Semilattice,
    pub maps: Vec<Endomorphism>,
    pub semiring: FiniteAiSemiring,
    index: HashMap<Endomorphism, ElementId>,
}

impl EndSemiring {
    pub fn index_of(&self, map: &Endomorphism) -> Option<ElementId> {
        self.index.get(map).copied()
    }

    pub fn map(&self, id: ElementId) -> &Endomorphism {
        &self.maps[id as usize]
    }

    pub fn identity(&self) -> ElementId {
        let id = Endomorphism((0..self.semilattice.size() as ElementId).collect());
        self.index[&id]
    }
}

pub fn endomorphism_semiring(a: &Semilattice) -> Result<EndSemiring> {
    endomorphism_semiring_with(a, EndomorphismBudget::default())
}

pub fn endomorphism_semiring_with(a: &Semilattice, budget: EndomorphismBudget) -> Result<EndSemiring> {
    let maps = enumerate_endomorphisms(a, budget)?;
    if maps.len() > MAX_ELEMENTS {
        return Err(Error::budget("endomorphism count", maps.len() as u128, MAX_ELEMENTS as u128));
    }
    let index: HashMap<Endomorphism, ElementId> =
        maps.iter().enumerate().map(|(i, m)| (m.clone(), i as ElementId)).collect();
    let k = maps.len();
    let rows = par::map_collect(k, |i| {
        let mut add = Vec::with_capacity(k);
        let mut mul = Vec::with_capacity(k);
        let mut buf = vec![0; a.size()];
        for j in 0..k {
            let (f, g) = (&maps[i], &maps[j]);
            for (x, slot) in buf.iter_mut().enumerate() {
                *slot = a.join(f.0[x], g.0[x]);
            }
            add.push(index[buf.as_slice()]);
            for (x, slot) in buf.iter_mut().enumerate() {
                *slot = g.0[f.0[x] as usize];
            }
            mul.push(index[buf.as_slice()]);
        }
        (add, mul)
    });
    let (mut add, mut mul) = (Vec::with_capacity(k * k), Vec::with_capacity(k * k));
    for (r_add, r_mul) in rows {
        add.extend(r_add);
        mul.extend(r_mul);
    }
    let names = maps.iter().map(|m| m.render(a)).collect();
    let semiring = FiniteAiSemiring::from_flat(format!("End({})", a.name()), names, add, mul);
    Ok(EndSemiring {
        semilattice: a.clone(),
        maps,
        semiring,
        index,
    })
}

impl std::borrow::Borrow<[ElementId]> for Endomorphism {
    fn borrow(&self) -> &[ElementId] {
        &self.0
    }
}

/// Canonical code of a labelled order: minimum of the row-major `leq`
/// bitstring over relabellings that respect (downset size, upset size).
fn canonical_code(n: usize, leq: &[bool]) -> (Vec<usize>, Vec<bool>) {
    let key = |a: usize| {
        let down = (0..n).filter(|&b| leq[b * n + a]).count();
        let up = (0..n).filter(|&b| leq[a * n + b]).count();
        (down, std::cmp::Reverse(up))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| key(a));
    // Blocks of equal key may be permuted freely.
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &a in &order {
        match blocks.last_mut() {
            Some(b) if key(b[0]) == key(a) => b.push(a),
            _ => blocks.push(vec![a]),
        }
    }
    let mut best: Option<(Vec<usize>, Vec<bool>)> = None;
    let mut perm = Vec::with_capacity(n);
    permute_blocks(&blocks, 0, &mut perm, &mut |p: &[usize]| {
        let code: Vec<bool> = (0..n * n).map(|k| leq[p[k / n] * n + p[k % n]]).collect();
        if best.as_ref().is_none_or(|(_, c)| code < *c) {
            best = Some((p.to_vec(), code));
        }
    });
    best.expect("at least one labelling")
}

fn permute_blocks(blocks: &[Vec<usize>], i: usize, perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if i == blocks.len() {
        visit(perm);
        return;
    }
    use itertools::Itertools;
    let len = blocks[i].len();
    for p in blocks[i].iter().copied().permutations(len) {
        let base = perm.len();
        perm.extend(p);
        permute_blocks(blocks, i + 1, perm, visit);
        perm.truncate(base);
    }
}

/// All semilattices of size `n` up to isomorphism, in canonical order.
pub fn enumerate_semilattices(n: usize) -> Result<Vec<Semilattice>> {
    if n == 0 || n > 6 {
        return Err(Error::budget("semilattice enumeration size", n as u128, 6));
    }
    // Every poset has a natural labelling, so strict relations inside the
    // upper triangle cover all isomorphism types.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut classes: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[i * n + j] = true;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| !leq[a * n + b] || (0..n).all(|c| !leq[b * n + c] || leq[a * n + c]))
        });
        if !transitive {
            continue;
        }
        let has_joins = (0..n).all(|a| {
            (0..n).all(|b| {
                let ubs: Vec<usize> = (0..n).filter(|&u| leq[a * n + u] && leq[b * n + u]).collect();
                ubs.iter().any(|&u| ubs.iter().all(|&v| leq[u * n + v]))
            })
        });
        if !has_joins {
            continue;
        }
        let (perm, code) = canonical_code(n, &leq);
        classes.entry(code).or_insert(perm);
    }
    classes
        .into_iter()
        .enumerate()
        .map(|(k, (code, _))| {
            let covers: Vec<(usize, usize)> = (0..n * n)
                .filter(|&c| code[c])
                .map(|c| (c / n, c % n))
                .filter(|&(a, b)| a != b)
                .collect();
            let elements = (0..n).map(|i| i.to_string()).collect();
            let s = Semilattice::from_cover_indices(format!("L{n}_{k}"), elements, &covers)?;
            let hasse: Vec<(usize, usize)> = s.hasse().into_iter().map(|(a, b)| (a as usize, b as usize)).collect();
            Semilattice::from_cover_indices(s.name.clone(), s.elements.clone(), &hasse)
        })
        .collect()
}
