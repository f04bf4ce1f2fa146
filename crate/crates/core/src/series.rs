//! Multivariate formal power series in the variables `u_{a,j}` with exact
//! rational coefficients, truncated at a total degree bound.
//!
//! A monomial `u^k` is keyed by the multi-index `k`; its total degree is
//! `|k|`. Every product drops monomials above the bound eagerly.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{rational_from_int, Rational};
use crate::multiindex::{Decoration, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    terms: BTreeMap<MultiIndex, Rational>,
    max_degree: u64,
}

impl TruncatedSeries {
    pub fn zero(max_degree: u64) -> Self {
        Self {
            terms: BTreeMap::new(),
            max_degree,
        }
    }

    pub fn one(max_degree: u64) -> Self {
        Self::monomial(MultiIndex::new(), Rational::one(), max_degree)
    }

    pub fn constant(c: Rational, max_degree: u64) -> Self {
        Self::monomial(MultiIndex::new(), c, max_degree)
    }

    /// `c * u^k`, or zero if `|k|` exceeds the bound.
    pub fn monomial(k: MultiIndex, c: Rational, max_degree: u64) -> Self {
        let mut s = Self::zero(max_degree);
        if k.degree() <= max_degree && !c.is_zero() {
            s.terms.insert(k, c);
        }
        s
    }

    /// The single variable `u_{a,j}`.
    pub fn variable(d: Decoration, j: i32, max_degree: u64) -> Self {
        Self::monomial(MultiIndex::unit(d, j), Rational::one(), max_degree)
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    pub fn coefficient(&self, k: &MultiIndex) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MultiIndex::new())
    }

    /// Nonzero terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: MultiIndex, c: Rational) {
        if c.is_zero() || k.degree() > self.max_degree {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Drops every monomial of total degree above `max_degree` and lowers the
    /// bound accordingly.
    pub fn truncate(&self, max_degree: u64) -> Self {
        let max_degree = max_degree.min(self.max_degree);
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= max_degree)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            max_degree,
        }
    }

    /// Same terms, with the bound replaced (terms above a lower bound are dropped).
    pub fn with_max_degree(&self, max_degree: u64) -> Self {
        let mut s = self.truncate(max_degree);
        s.max_degree = max_degree;
        s
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous(&self, d: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            max_degree: self.max_degree,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.max_degree);
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            max_degree: self.max_degree,
        }
    }

    /// Multiplies every monomial by `u^k`.
    pub fn shift_by(&self, k: &MultiIndex) -> Self {
        let mut out = Self::zero(self.max_degree);
        for (m, c) in &self.terms {
            out.add_term(m.add(k), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.max_degree);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Plethystic substitution `u_{a,j} -> u_{a,j}^r`, i.e. `u^l -> u^{r l}`,
    /// truncated at `max_degree`.
    pub fn plethysm(&self, r: u32, max_degree: u64) -> Self {
        assert!(r >= 1, "plethysm needs r >= 1");
        let mut out = Self::zero(max_degree);
        for (k, c) in &self.terms {
            if k.degree() * r as u64 <= max_degree {
                out.add_term(k.scale(r), c.clone());
            }
        }
        out
    }

    fn graded(&self) -> Vec<Self> {
        (0..=self.max_degree).map(|d| self.homogeneous(d)).collect()
    }

    /// `exp(S)` for `S` with zero constant term, via `n E_n = sum_d d S_d E_{n-d}`.
    pub fn exp(&self) -> Option<Self> {
        if !self.constant_term().is_zero() {
            return None;
        }
        let n_max = self.max_degree as usize;
        let s = self.graded();
        let mut e: Vec<Self> = vec![Self::one(self.max_degree)];
        for n in 1..=n_max {
            let mut acc = Self::zero(self.max_degree);
            for d in 1..=n {
                let term = &s[d] * &e[n - d];
                acc = &acc + &term.scale(&rational_from_int(d as i64));
            }
            e.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
        }
        Some(e.iter().fold(Self::zero(self.max_degree), |a, b| &a + b))
    }

    /// `log(S)` for `S` with constant term 1, via
    /// `n L_n = n S_n - sum_{d<n} d L_d S_{n-d}`.
    pub fn log(&self) -> Option<Self> {
        if !self.constant_term().is_one() {
            return None;
        }
        let n_max = self.max_degree as usize;
        let s = self.graded();
        let mut l: Vec<Self> = vec![Self::zero(self.max_degree)];
        for n in 1..=n_max {
            let mut acc = s[n].scale(&rational_from_int(n as i64));
            for d in 1..n {
                let term = &l[d] * &s[n - d];
                acc = &acc - &term.scale(&rational_from_int(d as i64));
            }
            l.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
        }
        Some(l.iter().fold(Self::zero(self.max_degree), |a, b| &a + b))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.with_max_degree(self.max_degree.min(rhs.max_degree));
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
            max_degree: self.max_degree,
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let bound = self.max_degree.min(rhs.max_degree);
        let mut left: Vec<(u64, &MultiIndex, &Rational)> =
            self.terms.iter().map(|(k, c)| (k.degree(), k, c)).collect();
        let mut right: Vec<(u64, &MultiIndex, &Rational)> =
            rhs.terms.iter().map(|(k, c)| (k.degree(), k, c)).collect();
        left.sort_by_key(|t| t.0);
        right.sort_by_key(|t| t.0);
        let mut acc: std::collections::HashMap<MultiIndex, Rational> = Default::default();
        for &(dl, kl, cl) in &left {
            if dl > bound {
                break;
            }
            for &(dr, kr, cr) in &right {
                if dl + dr > bound {
                    break;
                }
                *acc.entry(kl.add(kr)).or_insert_with(Rational::zero) += cl * cr;
            }
        }
        TruncatedSeries {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            max_degree: bound,
        }
    }
}

/// Series in an auxiliary variable `z` with coefficients in
/// [`TruncatedSeries`]: `coeffs[i]` multiplies `z^i`.
pub type ZSeries = Vec<TruncatedSeries>;

/// `exp(G)` in `z` for `G` with zero `z^0` coefficient, using
/// `n E_n = sum_{r=1}^n r G_r E_{n-r}`.
pub fn exp_in_z(g: &[TruncatedSeries]) -> Option<ZSeries> {
    let first = g.first()?;
    if !first.is_zero() {
        return None;
    }
    let bound = first.max_degree();
    let mut e: ZSeries = vec![TruncatedSeries::one(bound)];
    for n in 1..g.len() {
        let mut acc = TruncatedSeries::zero(bound);
        for r in 1..=n {
            acc = &acc + &(&g[r] * &e[n - r]).scale(&rational_from_int(r as i64));
        }
        e.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
    }
    Some(e)
}

/// `log(E)` in `z` for `E` with `z^0` coefficient exactly 1, using
/// `n L_n = n E_n - sum_{r=1}^{n-1} r L_r E_{n-r}`.
pub fn log_in_z(e: &[TruncatedSeries]) -> Option<ZSeries> {
    let first = e.first()?;
    if first != &TruncatedSeries::one(first.max_degree()) {
        return None;
    }
    let bound = first.max_degree();
    let mut l: ZSeries = vec![TruncatedSeries::zero(bound)];
    for n in 1..e.len() {
        let mut acc = e[n].scale(&rational_from_int(n as i64));
        for r in 1..n {
            acc = &acc - &(&l[r] * &e[n - r]).scale(&rational_from_int(r as i64));
        }
        l.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::Alphabet;
    use proptest::prelude::*;

    fn alphabet() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn multiplication_truncates() {
        let a = alphabet();
        let d = a.decorations();
        let x = TruncatedSeries::variable(d[0], -1, 3);
        let y = TruncatedSeries::variable(d[1], 0, 3);
        let s = &(&x + &y) * &(&x + &y);
        assert_eq!(s.len(), 3);
        assert_eq!(
            s.coefficient(&a.parse_multiindex("a:-1=1,b:0=1").unwrap()),
            q(2, 1)
        );
        assert!(s.pow(2).is_zero());
        assert_eq!(x.pow(3).len(), 1);
    }

    #[test]
    fn plethysm_scales_exponents() {
        let a = alphabet();
        let d = a.decorations();
        let x = TruncatedSeries::variable(d[0], -1, 5);
        let p = x.plethysm(3, 5);
        assert_eq!(
            p.coefficient(&a.parse_multiindex("a:-1=3").unwrap()),
            q(1, 1)
        );
        assert_eq!(x.plethysm(1, 5), x);
        let y = TruncatedSeries::variable(d[1], 2, 5);
        assert!((&x * &y).plethysm(3, 5).is_zero());
    }

    #[test]
    fn exp_of_single_variable() {
        let a = alphabet();
        let d = a.decorations();
        let x = TruncatedSeries::variable(d[0], -1, 4);
        let e = x.exp().unwrap();
        for n in 0..=4u32 {
            let k = if n == 0 {
                MultiIndex::new()
            } else {
                a.parse_multiindex(&format!("a:-1={n}")).unwrap()
            };
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(e.coefficient(&k), q(1, fact));
        }
        assert!(e.exp().is_none());
        assert!(x.log().is_none());
    }

    fn small_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((0u16..2, -1i32..2, 1u32..3, -4i64..5, 1i64..4), 0..6).prop_map(
            |terms| {
                let mut s = TruncatedSeries::zero(5);
                for (d, j, c, n, den) in terms {
                    let k = MultiIndex::from_entries([(Decoration(d), j, c)]).unwrap();
                    s.add_term(k, q(n, den));
                }
                s
            },
        )
    }

    proptest! {
        #[test]
        fn log_inverts_exp(s in small_series()) {
            let s = &s - &TruncatedSeries::constant(s.constant_term(), 5);
            let e = s.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), s);
        }

        #[test]
        fn multiplication_commutes(s in small_series(), t in small_series()) {
            prop_assert_eq!(&s * &t, &t * &s);
        }
    }
}
