//! Satisfaction of identities in a fixed finite ai-semiring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Identity, Polynomial, Relation, Substitution, Var};
use crate::algebra::{ElementId, FiniteAiSemiring};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum CheckMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct CheckBudget {
    /// Largest `|S|^#vars` accepted in exhaustive mode.
    pub max_substitutions: u128,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            max_substitutions: 100_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The first counterexample in mixed-radix order over the variables
    /// sorted by name (exhaustive), or the first failing sample.
    Fails(Substitution),
    NoCounterexample { count: u64, seed: u64 },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

/// Polynomial compiled against a fixed variable order.
enum Compiled {
    Var(usize),
    Sum(Vec<Compiled>),
    Product(Vec<Compiled>),
}

impl Compiled {
    fn new(p: &Polynomial, vars: &[Var]) -> Compiled {
        match p {
            Polynomial::Var(v) => Compiled::Var(vars.binary_search(v).expect("variable collected")),
            Polynomial::Sum(ps) => Compiled::Sum(ps.iter().map(|q| Compiled::new(q, vars)).collect()),
            Polynomial::Product(ps) => Compiled::Product(ps.iter().map(|q| Compiled::new(q, vars)).collect()),
        }
    }

    fn eval(&self, s: &FiniteAiSemiring, vals: &[ElementId]) -> ElementId {
        match self {
            Compiled::Var(i) => vals[*i],
            Compiled::Sum(ps) => ps
                .iter()
                .map(|p| p.eval(s, vals))
                .reduce(|a, b| s.add(a, b))
                .expect("nonempty sum"),
            Compiled::Product(ps) => ps
                .iter()
                .map(|p| p.eval(s, vals))
                .reduce(|a, b| s.mul(a, b))
                .expect("nonempty product"),
        }
    }
}

struct Checker<'a> {
    s: &'a FiniteAiSemiring,
    lhs: Compiled,
    rhs: Compiled,
    kind: Relation,
}

impl Checker<'_> {
    fn holds(&self, vals: &[ElementId]) -> bool {
        let l = self.lhs.eval(self.s, vals);
        let r = self.rhs.eval(self.s, vals);
        match self.kind {
            Relation::Equation => l == r,
            Relation::Inequality => self.s.add(l, r) == r,
        }
    }
}

pub fn check_identity(s: &FiniteAiSemiring, id: &Identity, mode: CheckMode, budget: CheckBudget) -> Result<Verdict> {
    let vars: Vec<Var> = id.vars().into_iter().collect();
    let checker = Checker {
        s,
        lhs: Compiled::new(&id.lhs, &vars),
        rhs: Compiled::new(&id.rhs, &vars),
        kind: id.kind,
    };
    let n = s.size();
    let k = vars.len();
    let witness = match mode {
        CheckMode::Exhaustive => {
            let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if total > budget.max_substitutions {
                return Err(Error::budget("substitution space", total, budget.max_substitutions));
            }
            // Split off enough leading digits to give the workers something to do.
            let mut lead = 0;
            while lead < k && n.pow(lead as u32) < 256 {
                lead += 1;
            }
            let outer = n.pow(lead as u32);
            let inner = n.pow((k - lead) as u32);
            par::find_map_first(outer, |hi| {
                let mut vals = vec![0 as ElementId; k];
                decode(hi, n, &mut vals[..lead]);
                for lo in 0..inner {
                    decode(lo, n, &mut vals[lead..]);
                    if !checker.holds(&vals) {
                        return Some(vals);
                    }
                }
                None
            })
        }
        CheckMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut vals = vec![0 as ElementId; k];
            let mut hit = None;
            for _ in 0..count {
                for v in vals.iter_mut() {
                    *v = rng.gen_range(0..n) as ElementId;
                }
                if !checker.holds(&vals) {
                    hit = Some(vals.clone());
                    break;
                }
            }
            if hit.is_none() {
                return Ok(Verdict::NoCounterexample { count, seed });
            }
            hit
        }
    };
    Ok(match witness {
        None => Verdict::Holds,
        Some(vals) => Verdict::Fails(Substitution(vars.into_iter().zip(vals).collect())),
    })
}

/// Most significant digit first.
fn decode(mut x: usize, base: usize, out: &mut [ElementId]) {
    for slot in out.iter_mut().rev() {
        *slot = (x % base) as ElementId;
        x /= base;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{holds_at, parse_identity};

    fn boolean() -> FiniteAiSemiring {
        FiniteAiSemiring::from_flat("B", vec!["0".into(), "1".into()], vec![0, 1, 1, 1], vec![0, 0, 0, 1])
    }

    #[test]
    fn trivial_identity_holds() {
        let id = parse_identity("x = x").unwrap();
        let v = check_identity(&boolean(), &id, CheckMode::Exhaustive, Default::default()).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn first_witness_in_radix_order() {
        // x + y = x fails first at x=0, y=1.
        let id = parse_identity("x + y = x").unwrap();
        let s = boolean();
        match check_identity(&s, &id, CheckMode::Exhaustive, Default::default()).unwrap() {
            Verdict::Fails(phi) => {
                assert_eq!(phi.get(&Var::new("x").unwrap()), Some(0));
                assert_eq!(phi.get(&Var::new("y").unwrap()), Some(1));
                assert!(!holds_at(&id, &s, &phi).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn budget_and_sampling() {
        let id = parse_identity("a b c d e f g h i j k l m n o p q r s t u v w x y z a1 a2 = a1").unwrap();
        let s = boolean();
        let tight = CheckBudget { max_substitutions: 1000 };
        assert!(matches!(check_identity(&s, &id, CheckMode::Exhaustive, tight), Err(Error::Budget { .. })));
        let id = parse_identity("x y = y x").unwrap();
        let v = check_identity(&s, &id, CheckMode::Sampled { count: 50, seed: 7 }, tight).unwrap();
        assert_eq!(v, Verdict::NoCounterexample { count: 50, seed: 7 });
    }
}
