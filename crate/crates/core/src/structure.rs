//! Subsemirings, homomorphisms and isomorphisms between finite
//! ai-semirings, variety-membership witnesses, and subgroups of the
//! multiplicative semigroup.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::algebra::{direct_power, multiplicative_idempotents, ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::par;
use crate::terms::{check_identity, parse_identity, CheckBudget, CheckMode, Verdict};

/// Least subset containing `gens` closed under `+` and `·`, sorted.
pub fn generated_subsemiring(s: &FiniteAiSemiring, gens: &[ElementId]) -> Vec<ElementId> {
    let mut member = vec![false; s.size()];
    let mut elems: Vec<ElementId> = Vec::new();
    for &g in gens {
        if !std::mem::replace(&mut member[g as usize], true) {
            elems.push(g);
        }
    }
    // Every pair (i, j) with max(i, j) >= done has not been combined yet.
    let mut done = 0;
    while done < elems.len() {
        let hi = elems.len();
        for j in done..hi {
            for i in 0..=j {
                let (a, b) = (elems[i], elems[j]);
                for c in [s.add(a, b), s.mul(a, b), s.mul(b, a)] {
                    if !std::mem::replace(&mut member[c as usize], true) {
                        elems.push(c);
                    }
                }
            }
        }
        done = hi;
    }
    elems.sort_unstable();
    elems
}

/// Closure under `·` only, sorted.
pub fn generated_subsemigroup(s: &FiniteAiSemiring, gens: &[ElementId]) -> Vec<ElementId> {
    let mut member = vec![false; s.size()];
    let mut elems: Vec<ElementId> = Vec::new();
    for &g in gens {
        if !std::mem::replace(&mut member[g as usize], true) {
            elems.push(g);
        }
    }
    let mut done = 0;
    while done < elems.len() {
        let hi = elems.len();
        for j in done..hi {
            for i in 0..=j {
                let (a, b) = (elems[i], elems[j]);
                for c in [s.mul(a, b), s.mul(b, a)] {
                    if !std::mem::replace(&mut member[c as usize], true) {
                        elems.push(c);
                    }
                }
            }
        }
        done = hi;
    }
    elems.sort_unstable();
    elems
}

/// Extends `gens[i] -> values[i]` to the generated subsemiring.
/// `None` on a conflict.
fn propagate(p: &FiniteAiSemiring, t: &FiniteAiSemiring, gens: &[ElementId], values: &[ElementId]) -> Option<Vec<(ElementId, ElementId)>> {
    let mut image: Vec<Option<ElementId>> = vec![None; p.size()];
    let mut elems: Vec<ElementId> = Vec::new();
    for (&g, &v) in gens.iter().zip(values) {
        match image[g as usize] {
            None => {
                image[g as usize] = Some(v);
                elems.push(g);
            }
            Some(w) if w != v => return None,
            Some(_) => {}
        }
    }
    let mut done = 0;
    while done < elems.len() {
        let hi = elems.len();
        for j in done..hi {
            for i in 0..elems.len().min(hi) {
                if i < done && j < done {
                    continue;
                }
                let (a, b) = (elems[i], elems[j]);
                let (fa, fb) = (image[a as usize].unwrap(), image[b as usize].unwrap());
                for (c, fc) in [
                    (p.add(a, b), t.add(fa, fb)),
                    (p.mul(a, b), t.mul(fa, fb)),
                    (p.mul(b, a), t.mul(fb, fa)),
                ] {
                    match image[c as usize] {
                        None => {
                            image[c as usize] = Some(fc);
                            elems.push(c);
                        }
                        Some(x) if x != fc => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        done = hi;
    }
    let mut out: Vec<(ElementId, ElementId)> = elems.iter().map(|&a| (a, image[a as usize].unwrap())).collect();
    out.sort_unstable();
    Some(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HomSearchBudget {
    /// Largest `|T|^#generators` tried.
    pub max_assignments: u128,
}

impl Default for HomSearchBudget {
    fn default() -> Self {
        HomSearchBudget {
            max_assignments: 1_000_000,
        }
    }
}

/// A surjection from `U = <generators>` inside `source^power` onto `target`.
#[derive(Clone, Debug, Serialize)]
pub struct HomWitness {
    pub source: String,
    pub target: String,
    pub power: u32,
    pub generators: Vec<String>,
    pub elements: Vec<String>,
    pub images: Vec<String>,
    #[serde(skip)]
    pub generator_ids: Vec<ElementId>,
    #[serde(skip)]
    pub element_ids: Vec<ElementId>,
    #[serde(skip)]
    pub image_ids: Vec<ElementId>,
}

impl HomWitness {
    /// Re-checks closure, both operations, and surjectivity against
    /// `ambient` (the power of the source) and `target`.
    pub fn verify(&self, ambient: &FiniteAiSemiring, target: &FiniteAiSemiring) -> bool {
        let pos: HashMap<ElementId, usize> = self.element_ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let f = |a: ElementId| pos.get(&a).map(|&i| self.image_ids[i]);
        let ops = self.element_ids.iter().all(|&a| {
            self.element_ids.iter().all(|&b| {
                let (fa, fb) = (f(a).unwrap(), f(b).unwrap());
                f(ambient.add(a, b)) == Some(target.add(fa, fb)) && f(ambient.mul(a, b)) == Some(target.mul(fa, fb))
            })
        });
        let onto: HashSet<ElementId> = self.image_ids.iter().copied().collect();
        let generated = generated_subsemiring(ambient, &self.generator_ids) == self.element_ids;
        ops && generated && onto.len() == target.size()
    }
}

/// First surjective homomorphism `<gens> -> t`, trying generator values in
/// lexicographic order.
pub fn find_surjective_hom(
    ambient: &FiniteAiSemiring,
    gens: &[ElementId],
    t: &FiniteAiSemiring,
    budget: HomSearchBudget,
) -> Result<Option<(Vec<ElementId>, Vec<ElementId>)>> {
    if gens.is_empty() {
        return Err(Error::Precondition("need at least one generator".into()));
    }
    let total = (t.size() as u128).saturating_pow(gens.len() as u32);
    if total > budget.max_assignments {
        return Err(Error::budget("generator assignments", total, budget.max_assignments));
    }
    let k = gens.len();
    let base = t.size();
    let found = par::find_map_first(total as usize, |mut idx| {
        let mut values = vec![0 as ElementId; k];
        for v in values.iter_mut().rev() {
            *v = (idx % base) as ElementId;
            idx /= base;
        }
        let map = propagate(ambient, t, gens, &values)?;
        let mut hit = vec![false; base];
        map.iter().for_each(|&(_, v)| hit[v as usize] = true);
        hit.iter().all(|&h| h).then(|| map.into_iter().unzip())
    });
    Ok(found)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MembershipBudget {
    pub max_power_size: usize,
    pub max_generators: usize,
    pub hom: HomSearchBudget,
}

impl Default for MembershipBudget {
    fn default() -> Self {
        MembershipBudget {
            max_power_size: 4096,
            max_generators: 3,
            hom: HomSearchBudget::default(),
        }
    }
}

/// An identity holding in the source and failing in the target: a proof
/// that the target is outside the generated variety.
#[derive(Clone, Debug, Serialize)]
pub struct Separator {
    pub identity: String,
    pub holds_in: String,
    pub fails_in: String,
    pub counterexample: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    Found(HomWitness),
    NotFound {
        max_power: u32,
        max_generators: usize,
        subsemirings_searched: usize,
        separator: Option<Separator>,
    },
}

/// Identities tried as separators, simplest first.
pub const SEPARATOR_CANDIDATES: &[&str] = &[
    "x x <= x",
    "x <= x x",
    "x x = x",
    "x y = y x",
    "x y x <= x",
    "x <= x y x",
    "x x x = x",
    "x y x = x y x y x",
    "x + y x y = x + y x y + x y",
];

/// First candidate identity that holds in `s` and fails in `t`.
pub fn find_separator(s: &FiniteAiSemiring, t: &FiniteAiSemiring) -> Result<Option<Separator>> {
    for text in SEPARATOR_CANDIDATES {
        let id = parse_identity(text)?;
        let budget = CheckBudget::default();
        if !check_identity(s, &id, CheckMode::Exhaustive, budget)?.holds() {
            continue;
        }
        if let Verdict::Fails(phi) = check_identity(t, &id, CheckMode::Exhaustive, budget)? {
            return Ok(Some(Separator {
                identity: text.to_string(),
                holds_in: s.name().into(),
                fails_in: t.name().into(),
                counterexample: phi.to_json(t),
            }));
        }
    }
    Ok(None)
}

/// Distinct subsemirings of `p` generated by up to `max_gens` elements,
/// each with its first generating set (by size, then lexicographically).
pub fn small_subsemirings(p: &FiniteAiSemiring, max_gens: usize, min_size: usize) -> Vec<(Vec<ElementId>, Vec<ElementId>)> {
    let mut seen: HashSet<Vec<ElementId>> = HashSet::new();
    let mut out = Vec::new();
    for g in 1..=max_gens.min(p.size()) {
        let sets: Vec<Vec<ElementId>> = p.ids().combinations(g).collect();
        let closures = par::map_slice(&sets, |gens| generated_subsemiring(p, gens));
        for (gens, u) in sets.into_iter().zip(closures) {
            if u.len() >= min_size && seen.insert(u.clone()) {
                out.push((gens, u));
            }
        }
    }
    out
}

/// Searches `T` as a homomorphic image of a subsemiring of `S^k`,
/// `k = 1..=max_power`.
pub fn variety_membership_witness(t: &FiniteAiSemiring, s: &FiniteAiSemiring, max_power: u32, budget: MembershipBudget) -> Result<Membership> {
    let mut searched = 0;
    for k in 1..=max_power {
        let p = direct_power(s, k, budget.max_power_size)?;
        let subs = small_subsemirings(&p, budget.max_generators, t.size());
        searched += subs.len();
        for (gens, _) in &subs {
            if let Some((elems, images)) = find_surjective_hom(&p, gens, t, budget.hom)? {
                let name = |x: &FiniteAiSemiring, v: &[ElementId]| v.iter().map(|&a| x.element_name(a).to_string()).collect::<Vec<_>>();
                return Ok(Membership::Found(HomWitness {
                    source: s.name().into(),
                    target: t.name().into(),
                    power: k,
                    generators: name(&p, gens),
                    elements: name(&p, &elems),
                    images: name(t, &images),
                    generator_ids: gens.clone(),
                    element_ids: elems,
                    image_ids: images,
                }));
            }
        }
    }
    Ok(Membership::NotFound {
        max_power,
        max_generators: budget.max_generators,
        subsemirings_searched: searched,
        separator: find_separator(s, t)?,
    })
}

/// A subgroup of `(S, ·)`.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupInfo {
    pub ambient: String,
    pub elements: Vec<String>,
    pub identity: String,
    pub generators: Vec<String>,
    pub order: usize,
    pub abelian: bool,
    pub nilpotent: bool,
    /// Length of the lower central series minus one, when nilpotent.
    pub class: Option<usize>,
    pub series_orders: Vec<usize>,
    #[serde(skip)]
    pub element_ids: Vec<ElementId>,
    #[serde(skip)]
    pub identity_id: ElementId,
    #[serde(skip)]
    pub generator_ids: Vec<ElementId>,
}

impl SubgroupInfo {
    /// Exhaustive re-check of closure, identity and inverses.
    pub fn verify(&self, s: &FiniteAiSemiring) -> bool {
        let set: HashSet<ElementId> = self.element_ids.iter().copied().collect();
        let e = self.identity_id;
        set.contains(&e)
            && s.mul(e, e) == e
            && self.element_ids.iter().all(|&a| {
                s.mul(e, a) == a
                    && s.mul(a, e) == a
                    && self.element_ids.iter().all(|&b| set.contains(&s.mul(a, b)))
                    && self.element_ids.iter().any(|&b| s.mul(a, b) == e && s.mul(b, a) == e)
            })
    }
}

/// Group elements with identity, for commutator arithmetic.
struct Group<'a> {
    s: &'a FiniteAiSemiring,
    e: ElementId,
    elems: Vec<ElementId>,
}

impl Group<'_> {
    fn inverse(&self, a: ElementId) -> ElementId {
        *self.elems.iter().find(|&&b| self.s.mul(a, b) == self.e).expect("group element has an inverse")
    }

    fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        let s = self.s;
        s.mul(s.mul(self.inverse(a), self.inverse(b)), s.mul(a, b))
    }

    fn generated(&self, gens: &[ElementId]) -> Vec<ElementId> {
        let mut g = gens.to_vec();
        g.push(self.e);
        generated_subsemigroup(self.s, &g)
    }
}

/// `G_1 = G`, `G_{k+1} = <[G_k, G]>`, until it stabilises.
pub fn lower_central_series(s: &FiniteAiSemiring, elements: &[ElementId], identity: ElementId) -> Vec<Vec<ElementId>> {
    let g = Group {
        s,
        e: identity,
        elems: elements.to_vec(),
    };
    let mut series = vec![{
        let mut v = elements.to_vec();
        v.sort_unstable();
        v
    }];
    loop {
        let last = series.last().unwrap();
        let comms: Vec<ElementId> = last
            .iter()
            .flat_map(|&a| elements.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .sorted_unstable()
            .dedup()
            .collect();
        let next = g.generated(&comms);
        if &next == last {
            return series;
        }
        series.push(next);
    }
}

/// The subgroup generated by `gens` inside the group with identity `e`,
/// or `None` if the generated subsemigroup is not a group with that
/// identity.
pub fn subgroup_generated(s: &FiniteAiSemiring, gens: &[ElementId], e: ElementId) -> Option<SubgroupInfo> {
    let mut g = gens.to_vec();
    g.push(e);
    let elems = generated_subsemigroup(s, &g);
    let info = describe_subgroup(s, elems, e, gens.to_vec());
    info.verify(s).then_some(info)
}

fn describe_subgroup(s: &FiniteAiSemiring, elems: Vec<ElementId>, e: ElementId, gens: Vec<ElementId>) -> SubgroupInfo {
    let abelian = elems.iter().all(|&a| elems.iter().all(|&b| s.mul(a, b) == s.mul(b, a)));
    let series = lower_central_series(s, &elems, e);
    let nilpotent = series.last().is_some_and(|l| l == &[e]);
    let name = |v: &[ElementId]| v.iter().map(|&a| s.element_name(a).to_string()).collect::<Vec<_>>();
    SubgroupInfo {
        ambient: s.name().into(),
        elements: name(&elems),
        identity: s.element_name(e).into(),
        generators: name(&gens),
        order: elems.len(),
        abelian,
        nilpotent,
        class: nilpotent.then(|| series.len() - 1),
        series_orders: series.iter().map(Vec::len).collect(),
        element_ids: elems,
        identity_id: e,
        generator_ids: gens,
    }
}

/// The group of units of `eSe`, sorted.
pub fn maximal_subgroup(s: &FiniteAiSemiring, e: ElementId) -> Vec<ElementId> {
    let local: Vec<ElementId> = s.ids().map(|a| s.mul(s.mul(e, a), e)).sorted_unstable().dedup().collect();
    local
        .iter()
        .copied()
        .filter(|&a| local.iter().any(|&b| s.mul(a, b) == e && s.mul(b, a) == e))
        .collect()
}

pub const MAX_SUBGROUP_AMBIENT: usize = 500;

/// For each idempotent `e` in order, the pairs `g < h` of the maximal
/// subgroup at `e`; the first pair generating a nonabelian nilpotent group.
pub fn find_nonabelian_nilpotent_subgroup(s: &FiniteAiSemiring) -> Result<Option<SubgroupInfo>> {
    if s.size() > MAX_SUBGROUP_AMBIENT {
        return Err(Error::budget("subgroup search ambient size", s.size() as u128, MAX_SUBGROUP_AMBIENT as u128));
    }
    for e in multiplicative_idempotents(s) {
        let h = maximal_subgroup(s, e);
        // Nonabelian nilpotent groups have order at least 8.
        if h.len() < 8 {
            continue;
        }
        let pairs: Vec<(ElementId, ElementId)> = h.iter().copied().tuple_combinations().collect();
        let hit = par::find_map_first(pairs.len(), |i| {
            let (a, b) = pairs[i];
            if s.mul(a, b) == s.mul(b, a) {
                return None;
            }
            let info = describe_subgroup(s, generated_subsemigroup(s, &[a, b, e]), e, vec![a, b]);
            (info.nilpotent && !info.abelian).then_some(info)
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

pub const MAX_ISOMORPHISM_SIZE: usize = 40;

fn profile(s: &FiniteAiSemiring, a: ElementId) -> [usize; 6] {
    let n = s.ids();
    [
        usize::from(s.mul(a, a) == a),
        n.clone().filter(|&b| s.leq(b, a)).count(),
        n.clone().filter(|&b| s.leq(a, b)).count(),
        n.clone().filter(|&b| s.mul(a, b) == a).count(),
        n.clone().filter(|&b| s.mul(b, a) == a).count(),
        n.clone().filter(|&b| s.mul(a, b) == s.mul(b, a)).count(),
    ]
}

/// First bijection `S -> T` preserving both operations, by backtracking
/// over candidates with equal invariant profiles.
pub fn is_isomorphic(s: &FiniteAiSemiring, t: &FiniteAiSemiring) -> Result<Option<Vec<ElementId>>> {
    if s.size() != t.size() {
        return Ok(None);
    }
    let n = s.size();
    if n > MAX_ISOMORPHISM_SIZE {
        return Err(Error::budget("isomorphism search size", n as u128, MAX_ISOMORPHISM_SIZE as u128));
    }
    let ps: Vec<_> = s.ids().map(|a| profile(s, a)).collect();
    let pt: Vec<_> = t.ids().map(|a| profile(t, a)).collect();
    if ps.iter().sorted().ne(pt.iter().sorted()) {
        return Ok(None);
    }
    let mut f: Vec<Option<ElementId>> = vec![None; n];
    let mut used = vec![false; n];
    fn go(
        a: usize,
        s: &FiniteAiSemiring,
        t: &FiniteAiSemiring,
        ps: &[[usize; 6]],
        pt: &[[usize; 6]],
        f: &mut Vec<Option<ElementId>>,
        used: &mut [bool],
    ) -> bool {
        let n = s.size();
        if a == n {
            let f: Vec<ElementId> = f.iter().map(|v| v.unwrap()).collect();
            return s.ids().all(|x| {
                s.ids().all(|b| {
                    f[s.add(x, b) as usize] == t.add(f[x as usize], f[b as usize])
                        && f[s.mul(x, b) as usize] == t.mul(f[x as usize], f[b as usize])
                })
            });
        }
        let x = a as ElementId;
        for y in t.ids() {
            if used[y as usize] || ps[a] != pt[y as usize] {
                continue;
            }
            f[a] = Some(y);
            let ok = (0..=a).all(|b| {
                let b = b as ElementId;
                let fb = f[b as usize].unwrap();
                [(s.add(x, b), t.add(y, fb)), (s.mul(x, b), t.mul(y, fb)), (s.mul(b, x), t.mul(fb, y))]
                    .iter()
                    .all(|&(c, fc)| f[c as usize].is_none_or(|v| v == fc) && (f[c as usize].is_some() || !used_or(used, fc, y)))
            });
            if ok {
                used[y as usize] = true;
                if go(a + 1, s, t, ps, pt, f, used) {
                    return true;
                }
                used[y as usize] = false;
            }
            f[a] = None;
        }
        false
    }
    // An unassigned product must not already be the image of another element.
    fn used_or(used: &[bool], fc: ElementId, y: ElementId) -> bool {
        used[fc as usize] || fc == y
    }
    Ok(go(0, s, t, &ps, &pt, &mut f, &mut used).then(|| f.into_iter().map(Option::unwrap).collect()))
}

/// Bijections preserving both operations, counted over all `n!` maps.
pub fn count_isomorphisms_brute_force(s: &FiniteAiSemiring, t: &FiniteAiSemiring) -> Result<usize> {
    if s.size() != t.size() {
        return Ok(0);
    }
    if s.size() > 8 {
        return Err(Error::budget("brute-force bijections", s.size() as u128, 8));
    }
    Ok(t.ids()
        .permutations(s.size())
        .filter(|p| {
            s.ids().all(|a| {
                s.ids().all(|b| {
                    p[s.add(a, b) as usize] == t.add(p[a as usize], p[b as usize])
                        && p[s.mul(a, b) as usize] == t.mul(p[a as usize], p[b as usize])
                })
            })
        })
        .count())
}
