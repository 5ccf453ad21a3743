//! Named constructions: the six-element semirings `B21`, `A21`, `A21bar`,
//! chains `C(n)`, pods `P(t)`, rook semirings `R(t)`, endomorphism
//! semirings, and the explicit maps between them.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::semilattice::{endomorphism_semiring, EndSemiring, Endomorphism, Semilattice};

pub const B21_ELEMENTS: [&str; 6] = ["1", "c", "d", "cd", "dc", "0"];
pub const A21_ELEMENTS: [&str; 6] = ["1", "e", "a", "ae", "ea", "0"];

/// Endomorphisms of `0 < 1 < 2` fixing 2, in [`A21_ELEMENTS`] order.
pub const A21_MAPS: [[ElementId; 3]; 6] = [[0, 1, 2], [0, 0, 2], [1, 2, 2], [0, 2, 2], [1, 1, 2], [2, 2, 2]];
/// Endomorphisms of `0 < 1 < 2` fixing 0, in [`A21_ELEMENTS`] order.
pub const A21BAR_MAPS: [[ElementId; 3]; 6] = [[0, 1, 2], [0, 2, 2], [0, 0, 1], [0, 0, 2], [0, 1, 1], [0, 0, 0]];
/// Rook matrices (row images, 0 = empty row) of `B21_ELEMENTS`:
/// `1 -> I`, `c -> E12`, `d -> E21`, `cd -> E11`, `dc -> E22`, `0 -> 0`.
pub const B21_ROOKS: [[u8; 2]; 6] = [[1, 2], [2, 0], [0, 1], [1, 0], [0, 2], [0, 0]];

/// A zero-one `t x t` matrix with at most one 1 per row and column, stored
/// by rows: `rows[i] = j` means a 1 in position `(i+1, j)`, 0 an empty row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RookMatrix {
    rows: Vec<u8>,
}

impl RookMatrix {
    pub fn from_rows(rows: Vec<u8>) -> Result<Self> {
        let t = rows.len();
        let mut used = vec![false; t + 1];
        for &j in &rows {
            if j as usize > t {
                return Err(Error::Input(format!("column {j} out of range")));
            }
            if j != 0 && std::mem::replace(&mut used[j as usize], true) {
                return Err(Error::Input(format!("column {j} has two ones")));
            }
        }
        Ok(RookMatrix { rows })
    }

    pub fn from_bits(bits: &[Vec<u8>]) -> Result<Self> {
        let t = bits.len();
        let mut rows = Vec::with_capacity(t);
        for r in bits {
            if r.len() != t || r.iter().any(|&b| b > 1) {
                return Err(Error::Input("not a square zero-one matrix".into()));
            }
            match r.iter().positions(|&b| b == 1).collect::<Vec<_>>().as_slice() {
                [] => rows.push(0),
                [j] => rows.push(*j as u8 + 1),
                _ => return Err(Error::Input("row has two ones".into())),
            }
        }
        Self::from_rows(rows)
    }

    pub fn identity(t: usize) -> Self {
        RookMatrix {
            rows: (1..=t as u8).collect(),
        }
    }

    /// Permutation matrix of `i -> perm[i-1]` (1-based images).
    pub fn permutation(perm: &[u8]) -> Result<Self> {
        Self::from_rows(perm.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u8] {
        &self.rows
    }

    pub fn bits(&self) -> Vec<Vec<u8>> {
        let t = self.dim();
        self.rows
            .iter()
            .map(|&j| (1..=t).map(|c| u8::from(c == j as usize)).collect())
            .collect()
    }

    /// Entrywise product with `other`: the semiring sum.
    pub fn hadamard(&self, other: &RookMatrix) -> RookMatrix {
        RookMatrix {
            rows: self.rows.iter().zip(&other.rows).map(|(&a, &b)| if a == b { a } else { 0 }).collect(),
        }
    }

    pub fn product(&self, other: &RookMatrix) -> RookMatrix {
        RookMatrix {
            rows: self
                .rows
                .iter()
                .map(|&j| if j == 0 { 0 } else { other.rows[j as usize - 1] })
                .collect(),
        }
    }

    pub fn pad(&self) -> RookMatrix {
        let mut rows = self.rows.clone();
        rows.push(0);
        RookMatrix { rows }
    }

    pub fn name(&self) -> String {
        self.rows.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(if self.dim() >= 10 { "," } else { "" })
    }
}

/// All `t x t` rook matrices in lexicographic order of their rows.
pub fn rook_matrices(t: usize) -> Vec<RookMatrix> {
    fn go(t: usize, rows: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<RookMatrix>) {
        if rows.len() == t {
            out.push(RookMatrix { rows: rows.clone() });
            return;
        }
        for j in 0..=t {
            if j > 0 && used[j] {
                continue;
            }
            used[j] = j > 0;
            rows.push(j as u8);
            go(t, rows, used, out);
            rows.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut vec![false; t + 1], &mut out);
    out
}

pub const MAX_ROOK_DIM: usize = 5;

/// `R_t`: Hadamard product as addition, matrix product as multiplication.
pub fn rook_semiring(t: usize) -> Result<FiniteAiSemiring> {
    if t == 0 || t > MAX_ROOK_DIM {
        return Err(Error::budget("rook dimension", t as u128, MAX_ROOK_DIM as u128));
    }
    let ms = rook_matrices(t);
    let index: HashMap<&RookMatrix, ElementId> = ms.iter().enumerate().map(|(i, m)| (m, i as ElementId)).collect();
    let n = ms.len();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in &ms {
        for b in &ms {
            add.push(index[&a.hadamard(b)]);
            mul.push(index[&a.product(b)]);
        }
    }
    Ok(FiniteAiSemiring::from_flat(format!("R{t}"), ms.iter().map(RookMatrix::name).collect(), add, mul))
}

/// A map between two finite semirings with exhaustively checked flags.
#[derive(Clone, Debug, Serialize)]
pub struct SemiringMap {
    pub source: String,
    pub target: String,
    pub images: Vec<ElementId>,
    pub injective: bool,
    #[serde(skip)]
    pub surjective: bool,
    pub homomorphism: bool,
}

impl SemiringMap {
    pub fn verify(source: &FiniteAiSemiring, target: &FiniteAiSemiring, images: Vec<ElementId>) -> Result<Self> {
        if images.len() != source.size() || images.iter().any(|&i| i as usize >= target.size()) {
            return Err(Error::Input("image vector does not match source and target".into()));
        }
        let mut hit = vec![false; target.size()];
        let mut injective = true;
        for &i in &images {
            injective &= !std::mem::replace(&mut hit[i as usize], true);
        }
        let f = |a: ElementId| images[a as usize];
        let homomorphism = source.ids().all(|a| {
            source.ids().all(|b| {
                f(source.add(a, b)) == target.add(f(a), f(b)) && f(source.mul(a, b)) == target.mul(f(a), f(b))
            })
        });
        Ok(SemiringMap {
            source: source.name().into(),
            target: target.name().into(),
            surjective: hit.iter().all(|&h| h),
            images,
            injective,
            homomorphism,
        })
    }

    pub fn is_embedding(&self) -> bool {
        self.injective && self.homomorphism
    }

    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective && self.homomorphism
    }

    pub fn apply(&self, a: ElementId) -> ElementId {
        self.images[a as usize]
    }
}

#[derive(Clone, Debug)]
pub enum CatalogObject {
    Semiring(FiniteAiSemiring),
    Semilattice(Semilattice),
}

/// Size limits for parameterised names.
pub const MAX_CHAIN: usize = 64;
pub const MAX_END_CHAIN: usize = 7;
pub const MAX_END_POD: usize = 5;

/// Catalog names (case-insensitive; `C3`, `C(3)` and `c3` are the same).
pub fn names() -> Vec<&'static str> {
    vec![
        "B21", "A21", "A21bar", "C(n)", "P(t)", "R(t)", "End(C(n))", "End(P(t))", "trivial",
    ]
}

fn parse_param(s: &str, prefix: char) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    rest.parse().ok()
}

pub fn get(name: &str) -> Result<CatalogObject> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_uppercase();
    let unknown = || Error::UnknownName(name.into());
    Ok(match key.as_str() {
        "B21" => CatalogObject::Semiring(b21()),
        "A21" => CatalogObject::Semiring(a21()),
        "A21BAR" => CatalogObject::Semiring(a21bar()),
        "TRIVIAL" => CatalogObject::Semiring(FiniteAiSemiring::trivial()),
        k if k.starts_with("END(") && k.ends_with(')') => {
            let inner = &k[4..k.len() - 1];
            let (a, limit) = if let Some(n) = parse_param(inner, 'C') {
                (n, MAX_END_CHAIN)
            } else if let Some(t) = parse_param(inner, 'P') {
                (t, MAX_END_POD)
            } else {
                return Err(unknown());
            };
            if a > limit {
                return Err(Error::budget("endomorphism semiring parameter", a as u128, limit as u128));
            }
            let sl = if inner.starts_with('C') {
                Semilattice::chain(a)?
            } else {
                Semilattice::pod(a)?
            };
            CatalogObject::Semiring(endomorphism_semiring(&sl)?.semiring)
        }
        k => {
            if let Some(n) = parse_param(k, 'C') {
                if n == 0 || n > MAX_CHAIN {
                    return Err(Error::budget("chain length", n as u128, MAX_CHAIN as u128));
                }
                CatalogObject::Semilattice(Semilattice::chain(n)?)
            } else if let Some(t) = parse_param(k, 'P') {
                if t == 0 || t > MAX_CHAIN {
                    return Err(Error::budget("pod size", t as u128, MAX_CHAIN as u128));
                }
                CatalogObject::Semilattice(Semilattice::pod(t)?)
            } else if let Some(t) = parse_param(k, 'R') {
                CatalogObject::Semiring(rook_semiring(t)?)
            } else {
                return Err(unknown());
            }
        }
    })
}

pub fn get_semiring(name: &str) -> Result<FiniteAiSemiring> {
    match get(name)? {
        CatalogObject::Semiring(s) => Ok(s),
        CatalogObject::Semilattice(_) => Err(Error::Input(format!("`{name}` is a semilattice, not a semiring"))),
    }
}

pub fn get_semilattice(name: &str) -> Result<Semilattice> {
    match get(name)? {
        CatalogObject::Semilattice(s) => Ok(s),
        CatalogObject::Semiring(_) => Err(Error::Input(format!("`{name}` is a semiring, not a semilattice"))),
    }
}

fn relabel(s: FiniteAiSemiring, name: &str, names: &[&str]) -> FiniteAiSemiring {
    FiniteAiSemiring::from_flat(
        name,
        names.iter().map(|s| s.to_string()).collect(),
        s.add_table().to_vec(),
        s.mul_table().to_vec(),
    )
}

/// Positions of `maps` inside `End(C3)`.
fn end_c3_positions(end: &EndSemiring, maps: &[[ElementId; 3]; 6]) -> Vec<ElementId> {
    maps.iter()
        .map(|m| end.index_of(&Endomorphism::new(m.to_vec())).expect("listed maps are endomorphisms"))
        .collect()
}

fn end_c3() -> EndSemiring {
    endomorphism_semiring(&Semilattice::chain(3).expect("chain")).expect("End(C3)")
}

/// The Brandt monoid with its unique compatible addition, as the subsemiring
/// of `R_2` on the matrices of [`B21_ROOKS`].
pub fn b21() -> FiniteAiSemiring {
    let r2 = rook_semiring(2).expect("R2");
    let carrier: Vec<ElementId> = B21_ROOKS
        .iter()
        .map(|rows| r2.index_of(&RookMatrix { rows: rows.to_vec() }.name()).expect("rook matrix"))
        .collect();
    relabel(r2.restrict("B21", &carrier).expect("closed"), "B21", &B21_ELEMENTS)
}

/// `A21` with the order of endomorphisms of `0 < 1 < 2` fixing 2.
pub fn a21() -> FiniteAiSemiring {
    let end = end_c3();
    let pos = end_c3_positions(&end, &A21_MAPS);
    relabel(end.semiring.restrict("A21", &pos).expect("closed"), "A21", &A21_ELEMENTS)
}

/// `A21` with the dual order, from endomorphisms fixing 0.
pub fn a21bar() -> FiniteAiSemiring {
    let end = end_c3();
    let pos = end_c3_positions(&end, &A21BAR_MAPS);
    relabel(end.semiring.restrict("A21bar", &pos).expect("closed"), "A21bar", &A21_ELEMENTS)
}

/// `A21 -> End(C3)` (maps fixing 2).
pub fn a21_into_end_c3() -> Result<SemiringMap> {
    let end = end_c3();
    SemiringMap::verify(&a21(), &end.semiring, end_c3_positions(&end, &A21_MAPS))
}

/// `A21bar -> End(C3)` (maps fixing 0).
pub fn a21bar_into_end_c3() -> Result<SemiringMap> {
    let end = end_c3();
    SemiringMap::verify(&a21bar(), &end.semiring, end_c3_positions(&end, &A21BAR_MAPS))
}

/// `B21 -> R2` along [`B21_ROOKS`].
pub fn b21_into_rook() -> Result<SemiringMap> {
    let r2 = rook_semiring(2)?;
    let images = B21_ROOKS
        .iter()
        .map(|rows| r2.element(&RookMatrix { rows: rows.to_vec() }.name()))
        .collect::<Result<Vec<_>>>()?;
    SemiringMap::verify(&b21(), &r2, images)
}

/// `R_t -> R_{t+1}` by padding with a zero row and column.
pub fn padding(t: usize) -> Result<SemiringMap> {
    let (small, big) = (rook_semiring(t)?, rook_semiring(t + 1)?);
    let images = rook_matrices(t)
        .iter()
        .map(|m| big.element(&m.pad().name()))
        .collect::<Result<Vec<_>>>()?;
    SemiringMap::verify(&small, &big, images)
}

/// `End^0(P_t)` and its correspondence with `R_t`.
#[derive(Clone, Debug)]
pub struct RookCorrespondence {
    pub t: usize,
    pub end: EndSemiring,
    pub rook: FiniteAiSemiring,
    /// Indices in `End(P_t)` of the maps fixing the top 0.
    pub end0: Vec<ElementId>,
    pub end0_semiring: FiniteAiSemiring,
    /// `α -> M^α`, from `end0_semiring` to `rook`.
    pub forward: SemiringMap,
    /// `M -> α_M`, from `rook` to `end0_semiring`.
    pub inverse: SemiringMap,
    pub round_trips: bool,
    /// Indices in `End(P_t)` of the maps moving 0.
    pub non_fixing: Vec<ElementId>,
    pub non_fixing_are_constants: bool,
}

pub fn rook_isomorphism(t: usize) -> Result<RookCorrespondence> {
    if t == 0 || t > MAX_END_POD {
        return Err(Error::budget("pod size", t as u128, MAX_END_POD as u128));
    }
    let pod = Semilattice::pod(t)?;
    let end = endomorphism_semiring(&pod)?;
    let rook = rook_semiring(t)?;
    let (end0, non_fixing): (Vec<ElementId>, Vec<ElementId>) = end.semiring.ids().partition(|&a| end.map(a).apply(0) == 0);
    let end0_semiring = end.semiring.restrict(format!("End0(P{t})"), &end0)?;

    // In P_t the element named i has index i, so α(i) = j is column j.
    let to_matrix = |m: &Endomorphism| RookMatrix::from_rows(m.image()[1..].iter().map(|&j| j as u8).collect());
    let forward_images = end0
        .iter()
        .map(|&a| rook.element(&to_matrix(end.map(a))?.name()))
        .collect::<Result<Vec<_>>>()?;
    let forward = SemiringMap::verify(&end0_semiring, &rook, forward_images)?;

    let pos_in_end0: HashMap<ElementId, ElementId> = end0.iter().enumerate().map(|(i, &a)| (a, i as ElementId)).collect();
    let inverse_images = rook_matrices(t)
        .iter()
        .map(|m| {
            let mut img = vec![0 as ElementId];
            img.extend(m.rows().iter().map(|&j| j as ElementId));
            let a = end
                .index_of(&Endomorphism::new(img))
                .ok_or_else(|| Error::Precondition("α_M is not an endomorphism".into()))?;
            pos_in_end0
                .get(&a)
                .copied()
                .ok_or_else(|| Error::Precondition("α_M does not fix 0".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let inverse = SemiringMap::verify(&rook, &end0_semiring, inverse_images)?;
    let round_trips = end0_semiring.ids().all(|a| inverse.apply(forward.apply(a)) == a)
        && rook.ids().all(|m| forward.apply(inverse.apply(m)) == m);
    let non_fixing_are_constants = non_fixing.iter().all(|&a| end.map(a).is_constant());
    Ok(RookCorrespondence {
        t,
        end,
        rook,
        end0,
        end0_semiring,
        forward,
        inverse,
        round_trips,
        non_fixing,
        non_fixing_are_constants,
    })
}

/// `γ -> γ̄` from `End(C3)` into `End(A)` along a chain `v0 < v1 < v2 = top`.
#[derive(Clone, Debug)]
pub struct ConeEmbedding {
    pub chain: [ElementId; 3],
    /// Block index of each element of `A`.
    pub blocks: Vec<u8>,
    pub blocks_are_homomorphism: bool,
    pub map: SemiringMap,
    /// `v_i + v_j = v_max(i,j)` for all i, j.
    pub max_law: bool,
    /// `v_i γ̄ = v_{iγ}` for all i and γ.
    pub compose_law: bool,
    pub end: EndSemiring,
}

pub fn cone_embedding(a: &Semilattice) -> Result<ConeEmbedding> {
    if a.height() < 3 {
        return Err(Error::Precondition(format!("height of {} is {} < 3", a.name(), a.height())));
    }
    let top = a.top();
    let n = a.size() as ElementId;
    let lt = |x: ElementId, y: ElementId| x != y && a.leq(x, y);
    let (v0, v1) = (0..n)
        .cartesian_product(0..n)
        .find(|&(x, y)| lt(x, y) && lt(y, top))
        .expect("height >= 3 gives a chain below the top");
    let v = [v0, v1, top];
    let blocks: Vec<u8> = (0..n)
        .map(|x| {
            if a.leq(x, v0) {
                0
            } else if a.leq(x, v1) {
                1
            } else {
                2
            }
        })
        .collect();
    let blocks_are_homomorphism = (0..n).all(|x| (0..n).all(|y| blocks[a.join(x, y) as usize] == blocks[x as usize].max(blocks[y as usize])));
    let max_law = (0..3).all(|i| (0..3).all(|j| a.join(v[i], v[j]) == v[i.max(j)]));

    let c3 = end_c3();
    let end = endomorphism_semiring(a)?;
    let bar = |g: &Endomorphism| Endomorphism::new(blocks.iter().map(|&b| v[g.apply(b as ElementId) as usize]).collect());
    let images = c3
        .maps
        .iter()
        .map(|g| {
            end.index_of(&bar(g))
                .ok_or_else(|| Error::Precondition("γ̄ is not an endomorphism".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let compose_law = c3
        .maps
        .iter()
        .all(|g| (0..3).all(|i| bar(g).apply(v[i]) == v[g.apply(i as ElementId) as usize]));
    let map = SemiringMap::verify(&c3.semiring, &end.semiring, images)?;
    Ok(ConeEmbedding {
        chain: v,
        blocks,
        blocks_are_homomorphism,
        map,
        max_law,
        compose_law,
        end,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct A21PairReport {
    pub same_multiplication: bool,
    pub dual_orders: bool,
    /// Bijections preserving both operations, out of the 720 tried.
    pub simultaneous_isomorphisms: usize,
    pub bijections_tried: usize,
    pub presentation_a21: bool,
    pub presentation_a21bar: bool,
    pub a21_bottom: String,
    pub a21bar_top: String,
}

impl A21PairReport {
    pub fn passes(&self) -> bool {
        self.same_multiplication
            && self.dual_orders
            && self.simultaneous_isomorphisms == 0
            && self.presentation_a21
            && self.presentation_a21bar
            && self.a21_bottom == "e"
            && self.a21bar_top == "e"
    }
}

/// `eae = e^2 = e`, `aea = a`, `a^2 = 0`, and 1 is neutral.
pub fn a21_presentation_holds(s: &FiniteAiSemiring) -> bool {
    let g = |n: &str| s.index_of(n).expect("A21 labelling");
    let (one, e, a, zero) = (g("1"), g("e"), g("a"), g("0"));
    let m = |x, y| s.mul(x, y);
    m(m(e, a), e) == e
        && m(e, e) == e
        && m(m(a, e), a) == a
        && m(a, a) == zero
        && m(a, e) == g("ae")
        && m(e, a) == g("ea")
        && s.ids().all(|x| m(one, x) == x && m(x, one) == x)
}

/// `cdc = c`, `dcd = d`, `c^2 = d^2 = 0`, and 1 is neutral.
pub fn b21_presentation_holds(s: &FiniteAiSemiring) -> bool {
    let g = |n: &str| s.index_of(n).expect("B21 labelling");
    let (one, c, d, zero) = (g("1"), g("c"), g("d"), g("0"));
    let m = |x, y| s.mul(x, y);
    m(m(c, d), c) == c
        && m(m(d, c), d) == d
        && m(c, c) == zero
        && m(d, d) == zero
        && m(c, d) == g("cd")
        && m(d, c) == g("dc")
        && s.ids().all(|x| m(one, x) == x && m(x, one) == x)
}

pub fn a21_pair_report() -> A21PairReport {
    let (a, b) = (a21(), a21bar());
    let order = |s: &FiniteAiSemiring, top: bool| -> String {
        let n = s.ids();
        let extreme = n.clone().find(|&x| n.clone().all(|y| if top { s.leq(y, x) } else { s.leq(x, y) }));
        extreme.map_or_else(String::new, |x| s.element_name(x).to_string())
    };
    let mut tried = 0;
    let mut hits = 0;
    for p in (0..6 as ElementId).permutations(6) {
        tried += 1;
        let ok = a.ids().all(|x| {
            a.ids().all(|y| {
                p[a.add(x, y) as usize] == b.add(p[x as usize], p[y as usize])
                    && p[a.mul(x, y) as usize] == b.mul(p[x as usize], p[y as usize])
            })
        });
        hits += usize::from(ok);
    }
    A21PairReport {
        same_multiplication: a.mul_table() == b.mul_table(),
        dual_orders: a.ids().all(|x| a.ids().all(|y| a.leq(x, y) == b.leq(y, x))),
        simultaneous_isomorphisms: hits,
        bijections_tried: tried,
        presentation_a21: a21_presentation_holds(&a),
        presentation_a21bar: a21_presentation_holds(&b),
        a21_bottom: order(&a, false),
        a21bar_top: order(&b, true),
    }
}
