//! Ordinary fibre counts `F_k` through the multiset recursion on root
//! branches, the branch-multiset series `H_m`, the cycle index of `SET_m`,
//! and the ordinary generating series.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{factorial, rational_from_uint, Rational};
use crate::error::{Error, Result};
use crate::multiindex::{weight_minus_one_profiles, Alphabet, MultiIndex};
use crate::series::TruncatedSeries;

/// Number of `m`-element multisets drawn from an `r`-element set:
/// `binomial(r + m - 1, m)` for `r >= 1`, and `[m = 0]` for `r = 0`.
pub fn mlt(r: &BigUint, m: u64) -> BigUint {
    if r.is_zero() {
        return if m == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let mut num = BigUint::one();
    for i in 0..m {
        num *= r + BigUint::from(i);
    }
    num / factorial(m)
}

/// A multiset of weight -1 branch profiles, `profile -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileMultiplicity {
    entries: std::collections::BTreeMap<MultiIndex, u32>,
}

impl ProfileMultiplicity {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, profile: MultiIndex, multiplicity: u32) {
        if multiplicity > 0 {
            *self.entries.entry(profile).or_insert(0) += multiplicity;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, u32)> {
        self.entries.iter().map(|(k, &m)| (k, m))
    }

    /// `|nu|`, the number of branches.
    pub fn size(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    /// `Sigma(nu) = sum nu_l * l`.
    pub fn total(&self) -> MultiIndex {
        self.entries
            .iter()
            .fold(MultiIndex::new(), |acc, (k, &m)| acc.add(&k.scale(m)))
    }
}

/// Memoized `F_k`. The memo accepts concurrent identical writes.
#[derive(Debug, Default)]
pub struct OrdinaryCounter {
    memo: RwLock<HashMap<MultiIndex, BigUint>>,
}

impl OrdinaryCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, k: &MultiIndex) -> Result<BigUint> {
        if k.weight() != -1 {
            return Err(Error::WeightNotMinusOne(k.weight()));
        }
        Ok(self.f(k))
    }

    fn f(&self, k: &MultiIndex) -> BigUint {
        if let Some(v) = self.memo.read().unwrap().get(k) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for (slot, _) in k.iter() {
            let rest = k.minus_unit(slot.decoration, slot.j).unwrap();
            let branches = (slot.j + 1) as u64;
            let candidates = rest.weight_minus_one_parts();
            total += self.branch_multisets(&candidates, 0, &rest, branches);
        }
        self.memo.write().unwrap().insert(k.clone(), total.clone());
        total
    }

    /// `sum_nu prod_l Mlt(F_l, nu_l)` over multisets `nu` with `|nu| = slots`
    /// and `Sigma(nu) = remaining`, using candidates from index `start` on.
    fn branch_multisets(
        &self,
        candidates: &[MultiIndex],
        start: usize,
        remaining: &MultiIndex,
        slots: u64,
    ) -> BigUint {
        if slots == 0 {
            return if remaining.is_empty() {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if remaining.weight() != -(slots as i64) || remaining.degree() < slots {
            return BigUint::zero();
        }
        let mut total = BigUint::zero();
        for (i, profile) in candidates.iter().enumerate().skip(start) {
            if !profile.is_le(remaining) {
                continue;
            }
            let f = self.f(profile);
            let mut rest = remaining.clone();
            for m in 1..=slots {
                rest = match rest.subtract(profile) {
                    Ok(r) => r,
                    Err(_) => break,
                };
                let tail = self.branch_multisets(candidates, i + 1, &rest, slots - m);
                if !tail.is_zero() {
                    total += mlt(&f, m) * tail;
                }
            }
        }
        total
    }

    /// Enumerates the branch multisets counted for root slot `(a, j)`; each
    /// is returned with its product of multiset numbers.
    pub fn branch_data(&self, k: &MultiIndex) -> Vec<(ProfileMultiplicity, BigUint)> {
        let mut out = Vec::new();
        for (slot, _) in k.iter() {
            let rest = k.minus_unit(slot.decoration, slot.j).unwrap();
            let candidates = rest.weight_minus_one_parts();
            let mut nu = ProfileMultiplicity::new();
            self.collect_multisets(
                &candidates,
                0,
                &rest,
                (slot.j + 1) as u64,
                &mut nu,
                &mut out,
            );
        }
        out
    }

    fn collect_multisets(
        &self,
        candidates: &[MultiIndex],
        start: usize,
        remaining: &MultiIndex,
        slots: u64,
        nu: &mut ProfileMultiplicity,
        out: &mut Vec<(ProfileMultiplicity, BigUint)>,
    ) {
        if slots == 0 {
            if remaining.is_empty() {
                let w = nu.iter().fold(BigUint::one(), |acc, (l, m)| {
                    acc * mlt(&self.f(l), m as u64)
                });
                out.push((nu.clone(), w));
            }
            return;
        }
        for (i, profile) in candidates.iter().enumerate().skip(start) {
            let mut rest = remaining.clone();
            for m in 1..=slots {
                rest = match rest.subtract(profile) {
                    Ok(r) => r,
                    Err(_) => break,
                };
                let saved = nu.clone();
                nu.insert(profile.clone(), m as u32);
                self.collect_multisets(candidates, i + 1, &rest, slots - m, nu, out);
                *nu = saved;
            }
        }
    }
}

pub fn ordinary_count(k: &MultiIndex) -> Result<BigUint> {
    OrdinaryCounter::new().count(k)
}

/// Partitions of `m` in multiplicity notation: `mult[r-1]` is the number of
/// parts equal to `r`. Ordered lexicographically on the multiplicity vector.
pub fn partitions(m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; m];
    fn rec(r: usize, remaining: usize, mult: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 0 {
            if remaining == 0 {
                out.push(mult.clone());
            }
            return;
        }
        for c in 0..=(remaining / r) {
            mult[r - 1] = c as u32;
            rec(r - 1, remaining - c * r, mult, out);
        }
        mult[r - 1] = 0;
    }
    rec(m, m, &mut mult, &mut out);
    out.sort();
    out
}

/// `z_lambda = prod_r r^{m_r} m_r!`.
pub fn z_lambda(mult: &[u32]) -> BigUint {
    mult.iter()
        .enumerate()
        .fold(BigUint::one(), |acc, (i, &c)| {
            acc * BigUint::from(i + 1).pow(c) * factorial(c as u64)
        })
}

/// Values the cycle index can be evaluated on.
pub trait CycleIndexValue: Clone {
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl CycleIndexValue for Rational {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl CycleIndexValue for TruncatedSeries {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries::scale(self, c)
    }
}

/// Power-sum values `p_1, ..., p_m` fed to the cycle index, plus the unit
/// of the ring they live in.
#[derive(Clone, Debug)]
pub struct CycleIndexInput<T> {
    pub unit: T,
    pub power_values: Vec<T>,
}

/// `Z_{SET_m}(p_1, ..., p_m) = sum_{lambda |- m} p_lambda / z_lambda`.
pub fn cycle_index_set<T: CycleIndexValue>(m: usize, input: &CycleIndexInput<T>) -> T {
    assert!(input.power_values.len() >= m, "need p_1..p_{m}");
    let mut total: Option<T> = None;
    for mult in partitions(m) {
        let mut term = input.unit.clone();
        for (i, &c) in mult.iter().enumerate() {
            for _ in 0..c {
                term = term.mul(&input.power_values[i]);
            }
        }
        let term = term.scale(&Rational::new(1.into(), z_lambda(&mult).into()));
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    total.expect("every m has at least one partition")
}

pub fn plethysm_substitute(s: &TruncatedSeries, r: u32, max_degree: u64) -> TruncatedSeries {
    s.plethysm(r, max_degree)
}

fn plethysm_input(
    f: &TruncatedSeries,
    m: usize,
    max_degree: u64,
) -> CycleIndexInput<TruncatedSeries> {
    CycleIndexInput {
        unit: TruncatedSeries::one(max_degree),
        power_values: (1..=m as u32).map(|r| f.plethysm(r, max_degree)).collect(),
    }
}

/// `H_m = Z_{SET_m}(F(u^[1]), ..., F(u^[m]))` truncated at `max_degree`.
pub fn h_series_cycle_index(f: &TruncatedSeries, m: usize, max_degree: u64) -> TruncatedSeries {
    cycle_index_set(m, &plethysm_input(f, m, max_degree))
}

/// `H_m = [z^m] prod_l (1 - z u^l)^{-F_l}` truncated at `max_degree`, with
/// the `F_l` taken from the multiset recursion.
pub fn h_series_euler(
    alphabet: &Alphabet,
    counter: &OrdinaryCounter,
    m: usize,
    max_degree: u64,
) -> TruncatedSeries {
    let decorations = alphabet.decorations();
    let mut by_z: Vec<TruncatedSeries> = (0..=m)
        .map(|i| {
            if i == 0 {
                TruncatedSeries::one(max_degree)
            } else {
                TruncatedSeries::zero(max_degree)
            }
        })
        .collect();
    for n in 1..=max_degree {
        for profile in weight_minus_one_profiles(&decorations, n) {
            let f = counter.count(&profile).expect("profile has weight -1");
            if f.is_zero() {
                continue;
            }
            let mut next: Vec<TruncatedSeries> = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let mut acc = TruncatedSeries::zero(max_degree);
                for take in 0..=i as u64 {
                    if take * n > max_degree {
                        break;
                    }
                    let c = rational_from_uint(mlt(&f, take));
                    let shifted = by_z[i - take as usize].shift_by(&profile.scale(take as u32));
                    acc = &acc + &shifted.scale(&c);
                }
                next.push(acc);
            }
            by_z = next;
        }
    }
    by_z.swap_remove(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HSeriesMethod {
    EulerProduct,
    CycleIndex,
}

/// `H_m(u)` through total degree `max_degree` by the chosen route.
pub fn h_series(
    alphabet: &Alphabet,
    m: usize,
    max_degree: u64,
    method: HSeriesMethod,
) -> TruncatedSeries {
    match method {
        HSeriesMethod::EulerProduct => {
            h_series_euler(alphabet, &OrdinaryCounter::new(), m, max_degree)
        }
        HSeriesMethod::CycleIndex => {
            let f = ordinary_series(alphabet, max_degree);
            h_series_cycle_index(&f, m, max_degree)
        }
    }
}

/// Right-hand side `sum_{a,j} u_{a,j} Z_{SET_{j+1}}(F(u^[1]), ..., F(u^[j+1]))`
/// truncated at `max_degree`.
pub fn ordinary_rhs(alphabet: &Alphabet, f: &TruncatedSeries, max_degree: u64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(max_degree);
    if max_degree == 0 {
        return out;
    }
    let inner = max_degree - 1;
    let top = (max_degree as i32 - 2).max(-1);
    let input = plethysm_input(&f.with_max_degree(inner), (top + 1) as usize, inner);
    for j in -1..=top {
        let z = cycle_index_set((j + 1) as usize, &input).with_max_degree(max_degree);
        for d in alphabet.decorations() {
            out = &out + &z.shift_by(&MultiIndex::unit(d, j));
        }
    }
    out
}

/// The ordinary series `F(u)` through total degree `max_degree`, one degree
/// per pass.
pub fn ordinary_series(alphabet: &Alphabet, max_degree: u64) -> TruncatedSeries {
    let mut f = TruncatedSeries::zero(0);
    for d in 1..=max_degree {
        f = ordinary_rhs(alphabet, &f, d);
    }
    f.with_max_degree(max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp_in_z;

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
    fn multiset_numbers() {
        assert_eq!(mlt(&2u32.into(), 2), 3u32.into());
        assert_eq!(mlt(&0u32.into(), 0), 1u32.into());
        assert_eq!(mlt(&0u32.into(), 3), 0u32.into());
        for m in 0..6 {
            assert_eq!(mlt(&1u32.into(), m), 1u32.into());
        }
        assert_eq!(mlt(&5u32.into(), 3), 35u32.into());
    }

    #[test]
    fn ordinary_examples() {
        assert_eq!(ordinary_count(&mi("a:-1=1")).unwrap(), 1u32.into());
        assert_eq!(
            ordinary_count(&mi("a:1=1,a:0=1,a:-1=2")).unwrap(),
            2u32.into()
        );
        assert_eq!(ordinary_count(&mi("a:1=1,a:-1=2")).unwrap(), 1u32.into());
        assert_eq!(
            ordinary_count(&mi("a:0=1")),
            Err(Error::WeightNotMinusOne(0))
        );
    }

    #[test]
    fn branch_data_matches_count() {
        let counter = OrdinaryCounter::new();
        let k = mi("a:2=1,a:1=1,a:-1=4");
        let data = counter.branch_data(&k);
        let total = data.iter().fold(BigUint::zero(), |a, (_, w)| a + w);
        assert_eq!(total, counter.count(&k).unwrap());
        for (nu, _) in &data {
            assert_eq!(nu.total().degree() + 1, k.degree());
            assert_eq!(nu.total().weight(), -(nu.size() as i64));
        }
    }

    #[test]
    fn cycle_index_small_cases() {
        let p: Vec<Rational> = vec![q(2, 1), q(3, 1), q(5, 1)];
        let input = CycleIndexInput {
            unit: q(1, 1),
            power_values: p,
        };
        assert_eq!(cycle_index_set(0, &input), q(1, 1));
        assert_eq!(cycle_index_set(1, &input), q(2, 1));
        // (p1^2 + p2)/2
        assert_eq!(cycle_index_set(2, &input), q(4 + 3, 2));
        // (p1^3 + 3 p1 p2 + 2 p3)/6
        assert_eq!(cycle_index_set(3, &input), q(8 + 18 + 10, 6));
    }

    #[test]
    fn cycle_index_is_normalized() {
        for m in 0..=8 {
            let total = partitions(m).iter().fold(Rational::zero(), |acc, mult| {
                acc + Rational::new(1.into(), z_lambda(mult).into())
            });
            assert_eq!(total, q(1, 1), "m = {m}");
        }
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn h_series_examples() {
        let a = alpha();
        let f = ordinary_series(&a, 4);
        assert_eq!(h_series_cycle_index(&f, 0, 4), TruncatedSeries::one(4));
        assert_eq!(h_series_cycle_index(&f, 1, 4), f);
        let h2 = h_series_cycle_index(&f, 2, 4);
        assert_eq!(h2.coefficient(&mi("a:-1=2")), q(1, 1));
        let counter = OrdinaryCounter::new();
        for m in 0..=3 {
            assert_eq!(
                h_series_euler(&a, &counter, m, 4),
                h_series_cycle_index(&f, m, 4),
                "m = {m}"
            );
        }
    }

    #[test]
    fn h_series_match_plethystic_exponential() {
        let a = alpha();
        let n = 5;
        let f = ordinary_series(&a, n);
        let mut g = vec![TruncatedSeries::zero(n)];
        for r in 1..=4u32 {
            g.push(f.plethysm(r, n).scale(&q(1, r as i64)));
        }
        let e = exp_in_z(&g).unwrap();
        for (m, em) in e.iter().enumerate() {
            assert_eq!(em, &h_series_cycle_index(&f, m, n));
        }
    }

    #[test]
    fn series_examples() {
        let a = alpha();
        let f1 = ordinary_series(&a, 1);
        assert_eq!(f1, TruncatedSeries::variable(a.decorations()[0], -1, 1));
        let f3 = ordinary_series(&a, 3);
        assert_eq!(f3.coefficient(&mi("a:1=1,a:-1=2")), q(1, 1));
        let f4 = ordinary_series(&a, 4);
        assert_eq!(f4.coefficient(&mi("a:1=1,a:0=1,a:-1=2")), q(2, 1));
        assert_eq!(ordinary_rhs(&a, &f4, 4), f4);
    }

    #[test]
    fn plethysm_examples() {
        let a = alpha();
        let x = TruncatedSeries::variable(a.decorations()[0], -1, 6);
        assert_eq!(
            plethysm_substitute(&x, 3, 6).coefficient(&mi("a:-1=3")),
            q(1, 1)
        );
        assert_eq!(plethysm_substitute(&x, 1, 6), x);
    }
}
