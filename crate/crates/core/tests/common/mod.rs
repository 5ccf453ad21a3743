//! Independent oracles shared by the integration tests. Nothing here calls
//! the search procedures it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use aisemiring::algebra::{find_compatible_additions, AdditionSearchBudget};
use aisemiring::semilattice::Semilattice;
use aisemiring::terms::Word;
use aisemiring::{ElementId, FiniteAiSemiring, SemiringTables};

/// Join table of the poset generated by `covers` (lower, upper) over
/// `names`, by least upper bounds of the reflexive-transitive closure.
pub fn join_from_covers(names: &[&str], covers: &[(&str, &str)]) -> Vec<Vec<usize>> {
    let n = names.len();
    let ix = |s: &str| names.iter().position(|&x| x == s).expect("named element");
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in covers {
        leq[ix(a)][ix(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let ub: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
                    *ub.iter().find(|&&u| ub.iter().all(|&v| leq[u][v])).expect("join exists")
                })
                .collect()
        })
        .collect()
}

pub fn add_rows(s: &FiniteAiSemiring) -> Vec<Vec<usize>> {
    let n = s.size();
    s.add_table().chunks(n).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
}

/// Every self-map of `a` preserving joins, by testing all `n^n` maps.
/// Joins are recomputed from the order, not read from the join table.
pub fn brute_force_endomorphisms(a: &Semilattice) -> Vec<Vec<ElementId>> {
    let n = a.size();
    let ids: Vec<ElementId> = (0..n as ElementId).collect();
    let lub = |x: ElementId, y: ElementId| -> ElementId {
        let ub: Vec<ElementId> = ids.iter().copied().filter(|&u| a.leq(x, u) && a.leq(y, u)).collect();
        *ub.iter().find(|&&u| ub.iter().all(|&v| a.leq(u, v))).unwrap()
    };
    let total = n.pow(n as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut f = vec![0 as ElementId; n];
        for slot in f.iter_mut().rev() {
            *slot = (code % n) as ElementId;
            code /= n;
        }
        if ids.iter().all(|&x| ids.iter().all(|&y| f[lub(x, y) as usize] == lub(f[x as usize], f[y as usize]))) {
            out.push(f);
        }
    }
    out
}

/// Every ai-semiring on `{0, .., n-1}`, not up to isomorphism.
pub fn all_ai_semirings(n: usize) -> Vec<FiniteAiSemiring> {
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let cells = n * n;
    let mut out = Vec::new();
    for mut code in 0..n.pow(cells as u32) {
        let mut mul = vec![0usize; cells];
        for slot in mul.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul[mul[a * n + b] * n + c] == mul[a * n + mul[b * n + c]])));
        if !assoc {
            continue;
        }
        let rows: Vec<Vec<usize>> = mul.chunks(n).map(<[usize]>::to_vec).collect();
        let found = find_compatible_additions("S", &names, &rows, AdditionSearchBudget::default()).unwrap();
        out.extend(found.semirings);
    }
    out
}

pub fn semiring(name: &str, elements: &[&str], add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> FiniteAiSemiring {
    FiniteAiSemiring::new(SemiringTables {
        name: name.into(),
        elements: elements.iter().map(|s| s.to_string()).collect(),
        add,
        mul,
    })
    .unwrap()
}

/// Function `S^X -> S` of a word over letters `0..k`, by direct evaluation.
fn word_function(s: &FiniteAiSemiring, k: usize, word: &[usize]) -> Vec<ElementId> {
    let n = s.size();
    (0..n.pow(k as u32))
        .map(|mut code| {
            let mut phi = vec![0 as ElementId; k];
            for slot in phi.iter_mut().rev() {
                *slot = (code % n) as ElementId;
                code /= n;
            }
            word[1..].iter().fold(phi[word[0]], |acc, &l| s.mul(acc, phi[l]))
        })
        .collect()
}

/// Whether some word `w' != w` over the letters of `w` satisfies
/// `w' <= w` (`minimal = true`) or `w <= w'` in `s`.
///
/// Words of length `|w|` are enumerated one by one. For other lengths only
/// the set `F_L` of realised functions matters; `F_{L+1}` is determined by
/// `F_L`, so the sequence is eventually periodic and is followed until a
/// set repeats.
pub fn naive_violator_exists(s: &FiniteAiSemiring, w: &[usize], minimal: bool) -> bool {
    let k = w.iter().max().unwrap() + 1;
    let fw = word_function(s, k, w);
    let in_d = |g: &[ElementId]| {
        g.iter().zip(&fw).all(|(&a, &b)| if minimal { s.add(a, b) == b } else { s.add(b, a) == a })
    };
    // Same length.
    let len = w.len();
    for mut code in 0..k.pow(len as u32) {
        let mut other = vec![0usize; len];
        for slot in other.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        if other != w && in_d(&word_function(s, k, &other)) {
            return true;
        }
    }
    // Other lengths, via the sets F_L.
    let letters: Vec<Vec<ElementId>> = (0..k).map(|x| word_function(s, k, &[x])).collect();
    let extend = |f: &BTreeSet<Vec<ElementId>>| -> BTreeSet<Vec<ElementId>> {
        f.iter()
            .flat_map(|g| letters.iter().map(move |l| g.iter().zip(l).map(|(&a, &b)| s.mul(a, b)).collect()))
            .collect()
    };
    let mut seen: HashMap<BTreeSet<Vec<ElementId>>, usize> = HashMap::new();
    let mut sets: Vec<BTreeSet<Vec<ElementId>>> = Vec::new();
    let mut current: BTreeSet<Vec<ElementId>> = letters.iter().cloned().collect();
    let mut length = 1;
    loop {
        if let Some(&first) = seen.get(&current) {
            // Lengths first..length recur forever at lengths other than |w|.
            return sets[first - 1..].iter().any(|f| f.iter().any(|g| in_d(g)));
        }
        if length != len && current.iter().any(|g| in_d(g)) {
            return true;
        }
        seen.insert(current.clone(), length);
        sets.push(current.clone());
        current = extend(&current);
        length += 1;
    }
}

/// Letters of `w` renumbered by first occurrence.
pub fn letters_of(w: &Word) -> Vec<usize> {
    let mut order: Vec<&str> = Vec::new();
    w.letters()
        .iter()
        .map(|v| match order.iter().position(|&x| x == v.name()) {
            Some(i) => i,
            None => {
                order.push(v.name());
                order.len() - 1
            }
        })
        .collect()
}

/// All words of length `1..=max_len` whose letters appear in first
/// occurrence order `x1, x2, ...`.
pub fn canonical_words(max_len: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            prefix.push(l);
            go(prefix, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), max_len, &mut out);
    out
}
