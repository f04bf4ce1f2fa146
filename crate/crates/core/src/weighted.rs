//! Labelled and symmetry-weighted fibre counts, the coefficient mass, and
//! the weighted generating series.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{factorial, ratio, rational_from_uint, rational_to_uint, Rational};
use crate::error::{Error, Result};
use crate::multiindex::{Alphabet, MultiIndex};
use crate::mutation::Mutation;
use crate::series::TruncatedSeries;

/// Counts attached to a weight -1 profile `k` with `n = |k|` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCounts {
    /// `L_k`: labelled trees on `n` vertices with profile `k`.
    pub labelled: BigUint,
    /// `W_k`: sum of `1/sigma(t)` over the fibre.
    pub weighted: Rational,
    /// `J_k`: sum of `sigma(x^k)/sigma(t)` over the fibre.
    pub mass: BigUint,
}

/// Number of rooted trees on vertices `1..=n` where vertex `i` has exactly
/// `r[i]` children: `(n-1)! / prod r_i!`.
pub fn prescribed_fertility_count(fertilities: &[u64]) -> Result<BigUint> {
    let n = fertilities.len() as u64;
    let sum: u64 = fertilities.iter().sum();
    if n == 0 || sum != n - 1 {
        return Err(Error::FertilitySum {
            sum,
            expected: n.saturating_sub(1),
        });
    }
    let den = fertilities
        .iter()
        .fold(BigUint::one(), |acc, &r| acc * factorial(r));
    Ok(factorial(n - 1) / den)
}

fn require_tree_weight(k: &MultiIndex) -> Result<()> {
    if k.weight() != -1 {
        return Err(Error::WeightNotMinusOne(k.weight()));
    }
    Ok(())
}

pub fn weighted_counts(k: &MultiIndex) -> Result<WeightedCounts> {
    require_tree_weight(k)?;
    let n = k.degree();
    let weighted = closed_form_w(k, None);
    let labelled = rational_to_uint(&(&weighted * rational_from_uint(factorial(n))))
        .expect("labelled count is a nonnegative integer");
    let fertility_den = k.iter().fold(BigUint::one(), |acc, (s, c)| {
        acc * factorial((s.j + 1) as u64).pow(c)
    });
    let mass = rational_to_uint(&ratio(factorial(n - 1), fertility_den))
        .expect("coefficient mass is a nonnegative integer");
    Ok(WeightedCounts {
        labelled,
        weighted,
        mass,
    })
}

/// `W_k = (n-1)! / prod k_j^a! (j+1)!^{k_j^a}`, optionally corrupted for
/// negative-control runs.
#[doc(hidden)]
pub fn closed_form_w(k: &MultiIndex, mutation: Option<Mutation>) -> Rational {
    let n = k.degree();
    let numerator = match mutation {
        Some(Mutation::WNumeratorFactorial) => factorial(n),
        _ => factorial(n.saturating_sub(1)),
    };
    let mut den = BigUint::one();
    for (s, c) in k.iter() {
        if mutation != Some(Mutation::WMultiplicityFactorial) {
            den *= factorial(c as u64);
        }
        let fert = match mutation {
            Some(Mutation::WFertilityFactorial) => (s.j + 2) as u64,
            _ => (s.j + 1) as u64,
        };
        den *= factorial(fert).pow(c);
    }
    ratio(numerator, den)
}

/// Memoized root-decomposition recursion for `W_k`:
/// `W_k = sum_{(a,j)} 1/(j+1)! sum_{k^1+...+k^{j+1} = k - e_j^a} prod W_{k^m}`
/// over ordered tuples of weight -1 parts.
#[derive(Debug, Default)]
pub struct WeightedRecursion {
    memo: RwLock<HashMap<MultiIndex, Rational>>,
    ordered: RwLock<HashMap<(MultiIndex, u32), Rational>>,
}

impl WeightedRecursion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn weighted(&self, k: &MultiIndex) -> Result<Rational> {
        require_tree_weight(k)?;
        Ok(self.w(k))
    }

    fn w(&self, k: &MultiIndex) -> Rational {
        if let Some(v) = self.memo.read().unwrap().get(k) {
            return v.clone();
        }
        let mut total = Rational::zero();
        for (slot, _) in k.iter() {
            let rest = k.minus_unit(slot.decoration, slot.j).unwrap();
            let parts = (slot.j + 1) as u32;
            let inner = self.ordered_products(&rest, parts);
            if !inner.is_zero() {
                total += inner / rational_from_uint(factorial(parts as u64));
            }
        }
        self.memo.write().unwrap().insert(k.clone(), total.clone());
        total
    }

    /// Sum over ordered `parts`-tuples of nonzero weight -1 indices adding up
    /// to `rest` of the product of their `W` values.
    fn ordered_products(&self, rest: &MultiIndex, parts: u32) -> Rational {
        if parts == 0 {
            return if rest.is_empty() {
                Rational::one()
            } else {
                Rational::zero()
            };
        }
        if rest.weight() != -(parts as i64) || rest.degree() < parts as u64 {
            return Rational::zero();
        }
        if parts == 1 {
            return self.w(rest);
        }
        let key = (rest.clone(), parts);
        if let Some(v) = self.ordered.read().unwrap().get(&key) {
            return v.clone();
        }
        let mut total = Rational::zero();
        for first in rest.weight_minus_one_parts() {
            let remaining = rest.subtract(&first).unwrap();
            let tail = self.ordered_products(&remaining, parts - 1);
            if !tail.is_zero() {
                total += self.w(&first) * tail;
            }
        }
        self.ordered.write().unwrap().insert(key, total.clone());
        total
    }
}

pub fn weighted_counts_recursive(k: &MultiIndex) -> Result<Rational> {
    WeightedRecursion::new().weighted(k)
}

/// Right-hand side `sum_{a,j} u_{a,j} T^{j+1}/(j+1)!` truncated at `max_degree`,
/// over `j` in `-1..=max(max_degree-2, -1)`.
pub fn weighted_rhs(alphabet: &Alphabet, t: &TruncatedSeries, max_degree: u64) -> TruncatedSeries {
    let t = t.with_max_degree(max_degree);
    let top = (max_degree as i32 - 2).max(-1);
    let mut out = TruncatedSeries::zero(max_degree);
    let mut power = TruncatedSeries::one(max_degree);
    for j in -1..=top {
        if j >= 0 {
            power = &power * &t;
        }
        let scaled = power.scale(&Rational::new(1.into(), factorial((j + 1) as u64).into()));
        for d in alphabet.decorations() {
            out = &out + &scaled.shift_by(&MultiIndex::unit(d, j));
        }
    }
    out
}

/// The weighted series `T(u)` through total degree `max_degree`, solved
/// degree by degree: the degree-`d` part of the right-hand side only sees the
/// parts of `T` of degree below `d`.
pub fn weighted_series(alphabet: &Alphabet, max_degree: u64) -> TruncatedSeries {
    let mut t = TruncatedSeries::zero(0);
    for d in 1..=max_degree {
        t = weighted_rhs(alphabet, &t, d);
    }
    t.with_max_degree(max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn mi(s: &str) -> MultiIndex {
        alpha().parse_multiindex(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn prescribed_fertility_examples() {
        assert_eq!(prescribed_fertility_count(&[0]).unwrap(), 1u32.into());
        assert_eq!(prescribed_fertility_count(&[2, 0, 0]).unwrap(), 1u32.into());
        assert_eq!(prescribed_fertility_count(&[1, 1, 0]).unwrap(), 2u32.into());
        assert_eq!(
            prescribed_fertility_count(&[1, 1, 1]),
            Err(Error::FertilitySum {
                sum: 3,
                expected: 2
            })
        );
        assert!(prescribed_fertility_count(&[]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let c = weighted_counts(&mi("a:-1=1")).unwrap();
        assert_eq!(c.labelled, 1u32.into());
        assert_eq!(c.weighted, q(1, 1));
        assert_eq!(c.mass, 1u32.into());

        let c = weighted_counts(&mi("a:1=1,a:0=1,a:-1=2")).unwrap();
        assert_eq!(c.weighted, q(3, 2));
        assert_eq!(c.mass, 3u32.into());
        assert_eq!(c.labelled, 36u32.into());

        let c = weighted_counts(&mi("a:1=1,a:-1=2")).unwrap();
        assert_eq!(c.weighted, q(1, 2));
        assert_eq!(c.mass, 1u32.into());
        assert_eq!(c.labelled, 3u32.into());

        assert_eq!(
            weighted_counts(&mi("a:0=1")),
            Err(Error::WeightNotMinusOne(0))
        );
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(weighted_counts_recursive(&mi("a:-1=1")).unwrap(), q(1, 1));
        assert_eq!(
            weighted_counts_recursive(&mi("a:1=1,a:0=1,a:-1=2")).unwrap(),
            q(3, 2)
        );
        assert_eq!(
            weighted_counts_recursive(&mi("a:0=2,a:-1=1")).unwrap(),
            q(1, 1)
        );
        assert!(weighted_counts_recursive(&mi("a:0=2")).is_err());
    }

    #[test]
    fn mutations_change_the_closed_form() {
        let k = mi("a:1=1,a:0=1,a:-1=2");
        let exact = closed_form_w(&k, None);
        for m in [
            Mutation::WNumeratorFactorial,
            Mutation::WMultiplicityFactorial,
            Mutation::WFertilityFactorial,
        ] {
            assert_ne!(closed_form_w(&k, Some(m)), exact, "{m:?}");
        }
    }

    #[test]
    fn series_examples() {
        let a = alpha();
        let t1 = weighted_series(&a, 1);
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.coefficient(&mi("a:-1=1")), q(1, 1));

        let t3 = weighted_series(&a, 3);
        assert_eq!(t3.coefficient(&mi("a:1=1,a:-1=2")), q(1, 2));
        assert!(t3.terms().all(|(k, _)| k.weight() == -1));

        let t5 = weighted_series(&a, 5);
        assert_eq!(weighted_rhs(&a, &t5, 5), t5);
    }
}
