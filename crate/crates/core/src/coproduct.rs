//! The LOT coproduct of a weight -1 monomial, expanded as an exact tensor
//! sum `forest (x) monomial`:
//!
//! `Delta(x^k) = sum_r sum_{k = k^1+...+k^r+b} k!/(sigma(forest) b!) forest (x) dbar^r x^b`
//!
//! with the right leg expanded either by iterating `dbar` or through the
//! `C` / `D` shift coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{factorial, format_rational, ratio, rational_from_uint, Rational};
use crate::error::{Error, Result};
use crate::lowering::{
    lowering_slots, lowerings_of_size, NormalizedShiftCoefficients, Polynomial, ShiftCoefficients,
};
use crate::multiindex::{Alphabet, MultiIndex};

/// Convention for the symmetry factor of a product of monomials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ForestSigma {
    /// `prod_distinct mult! * prod_i sigma(x^{k^i})`.
    #[default]
    MultTimesSigma,
    /// `prod_i sigma(x^{k^i})`.
    SigmaOnly,
    /// `prod_distinct mult!`.
    MultOnly,
}

/// Whether decompositions `k = k^1+...+k^r+b` are counted as multisets or
/// as ordered tuples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Decomposition {
    #[default]
    Multiset,
    Ordered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoproductForm {
    RawDbar,
    RefinedC,
    RefinedD,
}

impl CoproductForm {
    pub const ALL: [CoproductForm; 3] = [
        CoproductForm::RawDbar,
        CoproductForm::RefinedC,
        CoproductForm::RefinedD,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoproductOptions {
    pub forest_sigma: ForestSigma,
    pub decomposition: Decomposition,
}

/// Commutative product of weight -1 monomials, `k^i -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialForest {
    factors: BTreeMap<MultiIndex, u32>,
}

impl MonomialForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (MultiIndex, u32)>>(factors: I) -> Self {
        let mut f = Self::new();
        for (k, m) in factors {
            f.insert(k, m);
        }
        f
    }

    pub fn insert(&mut self, k: MultiIndex, multiplicity: u32) {
        if multiplicity > 0 {
            *self.factors.entry(k).or_insert(0) += multiplicity;
        }
    }

    pub fn factors(&self) -> &BTreeMap<MultiIndex, u32> {
        &self.factors
    }

    /// Number of factors `r`, with multiplicity.
    pub fn order(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of all factors.
    pub fn total(&self) -> MultiIndex {
        self.factors
            .iter()
            .fold(MultiIndex::new(), |acc, (k, &m)| acc.add(&k.scale(m)))
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|(k, &m)| {
                let base = format!("[{}]", alphabet.format_multiindex(k));
                if m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊙ ")
    }
}

pub fn forest_symmetry(forest: &MonomialForest, convention: ForestSigma) -> BigUint {
    let mut out = BigUint::one();
    for (k, &m) in forest.factors() {
        if convention != ForestSigma::SigmaOnly {
            out *= factorial(m as u64);
        }
        if convention != ForestSigma::MultOnly {
            out *= k.symmetry_factor().pow(m);
        }
    }
    out
}

/// One decomposition `k = k^1 + ... + k^r + b` before the right leg
/// `dbar^r x^b` is expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub forest: MonomialForest,
    pub remainder: MultiIndex,
    pub order: u32,
    pub prefactor: Rational,
}

pub fn coproduct_raw(k: &MultiIndex, options: CoproductOptions) -> Result<Vec<RawTerm>> {
    if k.weight() != -1 {
        return Err(Error::WeightNotMinusOne(k.weight()));
    }
    let candidates = k.weight_minus_one_parts();
    let mut forests = Vec::new();
    collect_forests(&candidates, 0, k, &mut MonomialForest::new(), &mut forests);

    let k_factorial = k.factorial();
    let mut terms: Vec<RawTerm> = forests
        .into_iter()
        .map(|(forest, remainder)| {
            let order = forest.order();
            let den = forest_symmetry(&forest, options.forest_sigma) * remainder.factorial();
            let mut prefactor = ratio(k_factorial.clone(), den);
            if options.decomposition == Decomposition::Ordered {
                let arrangements = forest
                    .factors()
                    .values()
                    .fold(BigUint::one(), |acc, &m| acc * factorial(m as u64));
                prefactor *= ratio(factorial(order as u64), arrangements);
            }
            RawTerm {
                forest,
                remainder,
                order,
                prefactor,
            }
        })
        .collect();
    terms.sort_by(|a, b| (a.order, &a.forest).cmp(&(b.order, &b.forest)));
    Ok(terms)
}

fn collect_forests(
    candidates: &[MultiIndex],
    start: usize,
    remaining: &MultiIndex,
    forest: &mut MonomialForest,
    out: &mut Vec<(MonomialForest, MultiIndex)>,
) {
    out.push((forest.clone(), remaining.clone()));
    for (i, part) in candidates.iter().enumerate().skip(start) {
        if let Ok(rest) = remaining.subtract(part) {
            forest.insert(part.clone(), 1);
            collect_forests(candidates, i, &rest, forest, out);
            let m = forest.factors.get_mut(part).unwrap();
            *m -= 1;
            if *m == 0 {
                forest.factors.remove(part);
            }
        }
    }
}

/// Expansion of `dbar^r x^b` in the requested form, keyed by target.
pub fn expand_right_leg(
    b: &MultiIndex,
    r: u32,
    form: CoproductForm,
) -> BTreeMap<MultiIndex, Rational> {
    let mut out: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    match form {
        CoproductForm::RawDbar => {
            let p = Polynomial::monomial(b.clone()).dbar_pow(r);
            out.extend(p.terms().iter().map(|(k, c)| (k.clone(), c.clone())));
        }
        CoproductForm::RefinedC => {
            let mut c = ShiftCoefficients::new(b.clone());
            for (l, coeff) in c.of_size(r) {
                let target = b
                    .shift_target(&l)
                    .expect("nonzero C has a nonnegative target");
                *out.entry(target).or_insert_with(Rational::zero) += Rational::from_integer(coeff);
            }
        }
        CoproductForm::RefinedD => {
            let mut d = NormalizedShiftCoefficients::new(b.clone());
            for l in lowerings_of_size(&lowering_slots(b), r) {
                let Some(target) = b.shift_target(&l) else {
                    continue;
                };
                let coeff = d.coefficient(&l);
                if coeff.is_zero() {
                    continue;
                }
                let value = Rational::from_integer(coeff) / rational_from_uint(target.factorial());
                *out.entry(target).or_insert_with(Rational::zero) += value;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Collected tensor terms `(forest, x^c) -> coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorExpansion {
    terms: BTreeMap<(MonomialForest, MultiIndex), Rational>,
}

impl TensorExpansion {
    pub fn terms(&self) -> &BTreeMap<(MonomialForest, MultiIndex), Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, forest: &MonomialForest, right: &MultiIndex) -> Rational {
        self.terms
            .get(&(forest.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add(&mut self, forest: MonomialForest, right: MultiIndex, c: Rational) {
        let key = (forest, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> ShowExpansion<'a> {
        ShowExpansion {
            expansion: self,
            alphabet,
        }
    }
}

pub struct ShowExpansion<'a> {
    expansion: &'a TensorExpansion,
    alphabet: &'a Alphabet,
}

impl fmt::Display for ShowExpansion<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((forest, right), c) in self.expansion.terms() {
            writeln!(
                f,
                "{} ⊗ {} : {}",
                forest.format(self.alphabet),
                self.alphabet.format_multiindex(right),
                format_rational(c)
            )?;
        }
        Ok(())
    }
}

pub fn coproduct(
    k: &MultiIndex,
    form: CoproductForm,
    options: CoproductOptions,
) -> Result<TensorExpansion> {
    let mut out = TensorExpansion::default();
    for term in coproduct_raw(k, options)? {
        for (target, c) in expand_right_leg(&term.remainder, term.order, form) {
            out.add(term.forest.clone(), target, &term.prefactor * c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn mi(s: &str) -> MultiIndex {
        alpha().parse_multiindex(s).unwrap()
    }

    fn one() -> Rational {
        Rational::one()
    }

    #[test]
    fn forest_symmetry_examples() {
        let conv = ForestSigma::MultTimesSigma;
        assert_eq!(
            forest_symmetry(&MonomialForest::new(), conv),
            BigUint::one()
        );
        let f = MonomialForest::from_factors([(mi("a:-1=1"), 2)]);
        assert_eq!(forest_symmetry(&f, conv), BigUint::from(2u32));
        assert_eq!(forest_symmetry(&f, ForestSigma::SigmaOnly), BigUint::one());
        let f = MonomialForest::from_factors([(mi("a:-1=1"), 1), (mi("b:-1=1"), 1)]);
        assert_eq!(forest_symmetry(&f, conv), BigUint::one());
        let f = MonomialForest::from_factors([(mi("a:1=1,a:-1=2"), 2)]);
        assert_eq!(forest_symmetry(&f, conv), BigUint::from(8u32));
        assert_eq!(
            forest_symmetry(&f, ForestSigma::MultOnly),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn raw_terms_of_a_leaf() {
        let k = mi("a:-1=1");
        let raw = coproduct_raw(&k, CoproductOptions::default()).unwrap();
        assert_eq!(
            raw,
            vec![
                RawTerm {
                    forest: MonomialForest::new(),
                    remainder: k.clone(),
                    order: 0,
                    prefactor: one()
                },
                RawTerm {
                    forest: MonomialForest::from_factors([(k.clone(), 1)]),
                    remainder: MultiIndex::new(),
                    order: 1,
                    prefactor: one()
                },
            ]
        );
    }

    #[test]
    fn raw_terms_with_two_decorations() {
        let k = mi("a:0=1,b:-1=1");
        let raw = coproduct_raw(&k, CoproductOptions::default()).unwrap();
        assert_eq!(raw[0].order, 0);
        assert_eq!(raw[0].prefactor, one());
        assert!(raw.contains(&RawTerm {
            forest: MonomialForest::from_factors([(mi("b:-1=1"), 1)]),
            remainder: mi("a:0=1"),
            order: 1,
            prefactor: one(),
        }));
        assert!(coproduct_raw(&mi("a:0=1"), CoproductOptions::default()).is_err());
    }

    #[test]
    fn coproduct_examples() {
        let opts = CoproductOptions::default();
        let k = mi("a:-1=1");
        for form in CoproductForm::ALL {
            let e = coproduct(&k, form, opts).unwrap();
            assert_eq!(e.len(), 1);
            assert_eq!(e.coefficient(&MonomialForest::new(), &k), one());
            assert_eq!(e.display(&alpha()).to_string(), "1 ⊗ a:-1=1 : 1\n");
        }

        let k = mi("a:0=1,b:-1=1");
        let e = coproduct(&k, CoproductForm::RawDbar, opts).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coefficient(&MonomialForest::new(), &k), one());
        let f = MonomialForest::from_factors([(mi("b:-1=1"), 1)]);
        assert_eq!(e.coefficient(&f, &mi("a:-1=1")), one());
    }

    #[test]
    fn forms_agree_on_a_cherry() {
        let k = mi("a:1=1,a:-1=2");
        for decomposition in [Decomposition::Multiset, Decomposition::Ordered] {
            let opts = CoproductOptions {
                decomposition,
                ..Default::default()
            };
            let raw = coproduct(&k, CoproductForm::RawDbar, opts).unwrap();
            assert_eq!(raw, coproduct(&k, CoproductForm::RefinedC, opts).unwrap());
            assert_eq!(raw, coproduct(&k, CoproductForm::RefinedD, opts).unwrap());
        }
    }

    #[test]
    fn ordered_mode_counts_arrangements() {
        let k = mi("a:-1=3,a:1=1,b:1=1");
        let multiset = coproduct_raw(&k, CoproductOptions::default()).unwrap();
        let ordered = coproduct_raw(
            &k,
            CoproductOptions {
                decomposition: Decomposition::Ordered,
                ..Default::default()
            },
        )
        .unwrap();
        for (m, o) in multiset.iter().zip(&ordered) {
            assert_eq!(m.forest, o.forest);
            let distinct = m.forest.factors().len() as i64;
            if m.order == 2 && distinct == 2 {
                assert_eq!(
                    &o.prefactor / &m.prefactor,
                    Rational::from_integer(2.into())
                );
            }
            if distinct <= 1 {
                assert_eq!(o.prefactor, m.prefactor);
            }
        }
    }
}
