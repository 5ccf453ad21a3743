//! Randomised invariants checked against the oracles in `common`.

mod common;

use std::sync::OnceLock;

use itertools::Itertools;
use proptest::prelude::*;

use aisemiring::catalog::{self, rook_matrices, rook_semiring};
use aisemiring::repro::{reproduce, ReproBudgets, Scope};
use aisemiring::structure::{generated_subsemiring, is_isomorphic};
use aisemiring::terms::{
    check_identity, evaluate, evaluate_normal, parse_identity, parse_polynomial, CheckBudget, CheckMode, Identity, Polynomial,
    Relation, Substitution, Var, Verdict, Word,
};
use aisemiring::zimin::{decide, Property, Status, ZiminBudget};
use aisemiring::{ElementId, FiniteAiSemiring};

use common::*;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn var(i: usize) -> Var {
    Var::new(NAMES[i]).unwrap()
}

fn polynomial(vars: usize) -> impl Strategy<Value = Polynomial> {
    let leaf = (0..vars).prop_map(|i| Polynomial::Var(var(i)));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Polynomial::Sum),
            prop::collection::vec(inner, 2..4).prop_map(Polynomial::Product),
        ]
    })
}

fn identity(vars: usize) -> impl Strategy<Value = Identity> {
    (polynomial(vars), polynomial(vars), any::<bool>()).prop_map(|(lhs, rhs, leq)| if leq { Identity::leq(lhs, rhs) } else { Identity::eq(lhs, rhs) })
}

/// Evaluation straight from the tables, independent of the crate's evaluator.
fn eval(p: &Polynomial, s: &FiniteAiSemiring, values: &[ElementId]) -> ElementId {
    match p {
        Polynomial::Var(v) => values[NAMES.iter().position(|&n| n == v.name()).unwrap()],
        Polynomial::Sum(ps) => ps.iter().map(|q| eval(q, s, values)).reduce(|a, b| s.add(a, b)).unwrap(),
        Polynomial::Product(ps) => ps.iter().map(|q| eval(q, s, values)).reduce(|a, b| s.mul(a, b)).unwrap(),
    }
}

fn substitution(values: &[ElementId]) -> Substitution {
    values.iter().enumerate().fold(Substitution::default(), |phi, (i, &a)| phi.with(var(i), a))
}

fn small_catalog() -> Vec<FiniteAiSemiring> {
    ["B21", "A21", "A21bar", "R2", "End(C3)", "End(P2)"].iter().map(|n| catalog::get_semiring(n).unwrap()).collect()
}

/// Semirings small enough for the naive violator search.
fn zimin_catalog() -> Vec<FiniteAiSemiring> {
    ["B21", "A21", "A21bar", "End(C2)"].iter().map(|n| catalog::get_semiring(n).unwrap()).collect()
}

fn three_element_semirings() -> &'static [FiniteAiSemiring] {
    static ALL: OnceLock<Vec<FiniteAiSemiring>> = OnceLock::new();
    ALL.get_or_init(|| all_ai_semirings(3))
}

/// `s` with element `i` renamed to position `perm[i]`.
fn relabel(s: &FiniteAiSemiring, perm: &[usize]) -> FiniteAiSemiring {
    let n = s.size();
    let mut elements = vec![String::new(); n];
    let mut add = vec![vec![0; n]; n];
    let mut mul = vec![vec![0; n]; n];
    for a in s.ids() {
        elements[perm[a as usize]] = s.element_name(a).to_string();
        for b in s.ids() {
            let (i, j) = (perm[a as usize], perm[b as usize]);
            add[i][j] = perm[s.add(a, b) as usize];
            mul[i][j] = perm[s.mul(a, b) as usize];
        }
    }
    semiring("relabelled", &elements.iter().map(String::as_str).collect::<Vec<_>>(), add, mul)
}

fn isomorphic_by_permutations(s: &FiniteAiSemiring, t: &FiniteAiSemiring) -> bool {
    s.size() == t.size()
        && (0..s.size() as ElementId).permutations(s.size()).any(|f| {
            s.ids().all(|a| s.ids().all(|b| f[s.add(a, b) as usize] == t.add(f[a as usize], f[b as usize]) && f[s.mul(a, b) as usize] == t.mul(f[a as usize], f[b as usize])))
        })
}

fn word(letters: &[usize]) -> Word {
    Word::new(letters.iter().map(|&i| Var::indexed(i + 1)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(p in polynomial(4)) {
        prop_assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn identities_round_trip(id in identity(3)) {
        let again = parse_identity(&id.to_string()).unwrap();
        prop_assert_eq!(again.kind, id.kind);
        prop_assert_eq!(again, id);
    }

    #[test]
    fn normal_form_evaluates_like_the_tree(p in polynomial(3), s in prop::sample::select(small_catalog()), seed in any::<u64>()) {
        let n = s.size() as u64;
        let values: Vec<ElementId> = (0..3).map(|i| ((seed >> (16 * i)) % n) as ElementId).collect();
        let phi = substitution(&values);
        let normal = p.normal().unwrap();
        prop_assert_eq!(evaluate(&p, &s, &phi).unwrap(), eval(&p, &s, &values));
        prop_assert_eq!(evaluate_normal(&normal, &s, &phi).unwrap(), eval(&p, &s, &values));
    }

    #[test]
    fn exhaustive_check_matches_direct_enumeration(id in identity(3)) {
        let s = catalog::b21();
        let n = s.size() as ElementId;
        let holds_at = |values: &[ElementId]| {
            let (l, r) = (eval(&id.lhs, &s, values), eval(&id.rhs, &s, values));
            match id.kind {
                Relation::Equation => l == r,
                Relation::Inequality => s.add(l, r) == r,
            }
        };
        let vars: Vec<usize> = id.vars().iter().map(|v| NAMES.iter().position(|&x| x == v.name()).unwrap()).collect();
        let mut first_failure = None;
        for assignment in vars.iter().map(|_| 0..n).multi_cartesian_product() {
            let mut values = vec![0; 3];
            for (&v, &a) in vars.iter().zip(&assignment) {
                values[v] = a;
            }
            if !holds_at(&values) {
                first_failure = Some(values);
                break;
            }
        }
        let verdict = check_identity(&s, &id, CheckMode::Exhaustive, CheckBudget::default()).unwrap();
        match (verdict, first_failure) {
            (Verdict::Holds, None) => {}
            (Verdict::Fails(phi), Some(values)) => {
                for &v in &vars {
                    prop_assert_eq!(phi.get(&var(v)), Some(values[v]));
                }
            }
            (v, f) => prop_assert!(false, "{id}: verdict {v:?}, direct failure {f:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn zimin_decisions_match_the_naive_search(
        letters in prop::collection::vec(0usize..3, 1..6),
        s in prop::sample::select(zimin_catalog()),
        minimal in any::<bool>(),
    ) {
        let w = word(&letters);
        let canonical = letters_of(&w);
        let property = if minimal { Property::Minimal } else { Property::Maximal };
        let verdict = decide(&s, &w, property, ZiminBudget::default()).unwrap();
        let expected = naive_violator_exists(&s, &canonical, minimal);
        match &verdict.status {
            Status::Confirmed => prop_assert!(!expected, "{} {:?} in {}: missed violator", w, property, s.name()),
            Status::Refuted { witness, .. } => {
                prop_assert!(expected, "{} {:?} in {}: spurious witness {}", w, property, s.name(), witness);
                prop_assert!(witness != &w);
                let (lhs, rhs) = if minimal { (witness, &w) } else { (&w, witness) };
                let id = Identity::leq(lhs.to_polynomial(), rhs.to_polynomial());
                prop_assert!(check_identity(&s, &id, CheckMode::Exhaustive, CheckBudget::default()).unwrap().holds());
            }
            Status::Inconclusive { reason } => prop_assert!(false, "inconclusive: {reason}"),
        }
    }

    #[test]
    fn generated_subsemirings_are_closures(
        gens in prop::collection::vec(0u16..34, 1..4),
        extra in 0u16..34,
    ) {
        let s = rook_semiring(3).unwrap();
        let sub = generated_subsemiring(&s, &gens);
        for g in &gens {
            prop_assert!(sub.contains(g));
        }
        for &a in &sub {
            for &b in &sub {
                prop_assert!(sub.contains(&s.add(a, b)));
                prop_assert!(sub.contains(&s.mul(a, b)));
            }
        }
        let mut again = generated_subsemiring(&s, &sub);
        again.sort_unstable();
        let mut sorted = sub.clone();
        sorted.sort_unstable();
        prop_assert_eq!(again, sorted);
        let mut more = gens.clone();
        more.push(extra);
        let bigger = generated_subsemiring(&s, &more);
        prop_assert!(sub.iter().all(|a| bigger.contains(a)));
    }

    #[test]
    fn rook_tables_are_matrix_operations(t in 1usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let s = rook_semiring(t).unwrap();
        let m = rook_matrices(t);
        let (a, b) = (i.index(m.len()), j.index(m.len()));
        prop_assert_eq!(s.element_name(a as ElementId), m[a].name());
        prop_assert_eq!(s.element_name(s.mul(a as ElementId, b as ElementId)), m[a].product(&m[b]).name());
        prop_assert_eq!(s.element_name(s.add(a as ElementId, b as ElementId)), m[a].hadamard(&m[b]).name());
    }

    #[test]
    fn relabelled_semirings_are_isomorphic(s in prop::sample::select(small_catalog()), perm_seed in any::<prop::sample::Index>()) {
        let n = s.size();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).take(5040).collect();
        let perm = &perms[perm_seed.index(perms.len())];
        let t = relabel(&s, perm);
        let f = is_isomorphic(&s, &t).unwrap().expect("relabelling is an isomorphism");
        for a in s.ids() {
            for b in s.ids() {
                prop_assert_eq!(f[s.add(a, b) as usize], t.add(f[a as usize], f[b as usize]));
                prop_assert_eq!(f[s.mul(a, b) as usize], t.mul(f[a as usize], f[b as usize]));
            }
        }
    }

    #[test]
    fn isomorphism_search_matches_permutations(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let all = three_element_semirings();
        let (s, t) = (&all[i.index(all.len())], &all[j.index(all.len())]);
        prop_assert_eq!(is_isomorphic(s, t).unwrap().is_some(), isomorphic_by_permutations(s, t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let budgets = ReproBudgets::default();
        let a = reproduce(Scope::Claim1, budgets, seed).without_timings();
        let b = reproduce(Scope::Claim1, budgets, seed).without_timings();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn sampled_checks_are_deterministic(id in identity(3), seed in any::<u64>()) {
        let s = catalog::a21();
        let mode = CheckMode::Sampled { count: 64, seed };
        let first = check_identity(&s, &id, mode, CheckBudget::default()).unwrap();
        prop_assert_eq!(first, check_identity(&s, &id, mode, CheckBudget::default()).unwrap());
    }
}
