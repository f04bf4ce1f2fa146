//! The lowering derivation `dbar` on the polynomial algebra in `x_j^a`,
//! its shift coefficients `C_{k,l}` and `D_{k,l}`, the coefficient
//! generating functions in an auxiliary variable `u`, and transport arrays.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arith::{factorial, format_rational, rational_from_uint, Rational};
use crate::multiindex::{Decoration, MultiIndex, Slot};
use crate::mutation::Mutation;

/// Finite linear combination of monomials `x^m` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: MultiIndex) -> Self {
        let mut p = Self::zero();
        p.add_term(k, Rational::one());
        p
    }

    pub fn add_term(&mut self, k: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, k: &MultiIndex) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Applies `dbar(x^m) = sum_{a, j >= 0} m_j^a x^{m - e_j^a + e_{j-1}^a}`.
    pub fn dbar(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (slot, count) in m.iter() {
                if slot.j < 0 {
                    continue;
                }
                let lowered = m
                    .minus_unit(slot.decoration, slot.j)
                    .unwrap()
                    .plus_unit(slot.decoration, slot.j - 1);
                out.add_term(lowered, c * Rational::from_integer(count.into()));
            }
        }
        out
    }

    pub fn dbar_pow(&self, r: u32) -> Self {
        (0..r).fold(self.clone(), |p, _| p.dbar())
    }
}

pub fn dbar(p: &Polynomial) -> Polynomial {
    p.dbar()
}

/// Polynomial in one variable `u` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UPolynomial {
    coefficients: BTreeMap<u32, Rational>,
}

impl UPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(degree: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    pub fn add_term(&mut self, degree: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .coefficients
            .entry(degree)
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coefficients.remove(&degree);
        }
    }

    pub fn coefficient(&self, degree: u32) -> Rational {
        self.coefficients
            .get(&degree)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, Rational> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Some((degree, c))` when the polynomial is the single term `c u^degree`.
    pub fn as_monomial(&self) -> Option<(u32, &Rational)> {
        if self.coefficients.len() == 1 {
            self.coefficients.iter().next().map(|(d, c)| (*d, c))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.coefficients {
            out.add_term(*d, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, c1) in &self.coefficients {
            for (d2, c2) in &other.coefficients {
                out.add_term(d1 + d2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (d, v) in &self.coefficients {
            out.add_term(*d, v * c);
        }
        out
    }
}

impl fmt::Display for UPolynomial {
    /// Renders e.g. `u^2/2`, `3*u + 1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&d, c) in self.coefficients.iter().rev() {
            let negative = c.is_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let c = c.abs();
            if d == 0 {
                f.write_str(&format_rational(&c))?;
                continue;
            }
            let var = if d == 1 {
                "u".to_string()
            } else {
                format!("u^{d}")
            };
            if !c.numer().is_one() {
                write!(f, "{}*", c.numer())?;
            }
            f.write_str(&var)?;
            if !c.denom().is_one() {
                write!(f, "/{}", c.denom())?;
            }
        }
        Ok(())
    }
}

/// Slots `(a, j)` with `0 <= j <= max index of a in k`: the only places a
/// lowering index with a nonzero shift coefficient can live.
pub fn lowering_slots(k: &MultiIndex) -> Vec<Slot> {
    let mut slots = Vec::new();
    for d in k.decorations() {
        let top = k
            .iter()
            .filter(|(s, _)| s.decoration == d)
            .map(|(s, _)| s.j)
            .max()
            .unwrap_or(-1);
        for j in 0..=top {
            slots.push(Slot::new(d, j));
        }
    }
    slots
}

/// All lowering indices of total size `r` supported on `slots`, sorted.
pub fn lowerings_of_size(slots: &[Slot], r: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current: Vec<(Decoration, i32, u32)> = Vec::new();
    fn rec(
        slots: &[Slot],
        remaining: u32,
        current: &mut Vec<(Decoration, i32, u32)>,
        out: &mut Vec<MultiIndex>,
    ) {
        let Some((slot, rest)) = slots.split_first() else {
            if remaining == 0 {
                out.push(MultiIndex::from_entries(current.iter().copied()).unwrap());
            }
            return;
        };
        for c in 0..=remaining {
            current.push((slot.decoration, slot.j, c));
            rec(rest, remaining - c, current, out);
            current.pop();
        }
    }
    rec(slots, r, &mut current, &mut out);
    out.sort();
    out
}

/// Memoized shift coefficients `C_{k,l}` for a fixed source `k`:
/// `C_{k,0} = 1`,
/// `C_{k,l} = sum_{a, j >= 0, l_j^a >= 1} C_{k, l - e_j^a} (k_j^a - l_j^a + 1 + l_{j+1}^a)`,
/// and `C_{k,l} = 0` whenever `k - l + <-l` has a negative component.
#[derive(Debug)]
pub struct ShiftCoefficients {
    source: MultiIndex,
    offset: i64,
    memo: HashMap<MultiIndex, BigInt>,
}

impl ShiftCoefficients {
    pub fn new(source: MultiIndex) -> Self {
        Self::with_mutation(source, None)
    }

    #[doc(hidden)]
    pub fn with_mutation(source: MultiIndex, mutation: Option<Mutation>) -> Self {
        let offset = if mutation == Some(Mutation::CRecursionOffset) {
            2
        } else {
            1
        };
        Self {
            source,
            offset,
            memo: HashMap::new(),
        }
    }

    pub fn source(&self) -> &MultiIndex {
        &self.source
    }

    pub fn coefficient(&mut self, lowering: &MultiIndex) -> BigInt {
        assert!(lowering.is_lowering(), "not a lowering multi-index");
        if lowering.is_empty() {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(lowering) {
            return v.clone();
        }
        let value = if self.source.shift_target(lowering).is_none() {
            BigInt::zero()
        } else {
            let mut total = BigInt::zero();
            for (slot, lj) in lowering.iter() {
                let smaller = lowering.minus_unit(slot.decoration, slot.j).unwrap();
                let prev = self.coefficient(&smaller);
                if prev.is_zero() {
                    continue;
                }
                let factor = self.source.get(slot.decoration, slot.j) as i64 - lj as i64
                    + self.offset
                    + lowering.get(slot.decoration, slot.j + 1) as i64;
                total += prev * factor;
            }
            total
        };
        self.memo.insert(lowering.clone(), value.clone());
        value
    }

    /// Every nonzero `C_{k,l}` with `|l| = r`, built level by level from
    /// the nonzero coefficients of size `r - 1` while tracking the targets.
    pub fn of_size(&mut self, r: u32) -> BTreeMap<MultiIndex, BigInt> {
        let slots = lowering_slots(&self.source);
        let mut level: HashMap<MultiIndex, (MultiIndex, BigInt)> = HashMap::new();
        level.insert(MultiIndex::new(), (self.source.clone(), BigInt::one()));
        for _ in 0..r {
            let mut next: HashMap<MultiIndex, (MultiIndex, BigInt)> = HashMap::new();
            for (l, (target, c)) in &level {
                for slot in &slots {
                    let (d, j) = (slot.decoration, slot.j);
                    let Some(lowered) = target.minus_unit(d, j) else {
                        continue;
                    };
                    let grown = l.plus_unit(d, j);
                    let factor = self.source.get(d, j) as i64 - grown.get(d, j) as i64
                        + self.offset
                        + grown.get(d, j + 1) as i64;
                    let entry = next
                        .entry(grown)
                        .or_insert_with(|| (lowered.plus_unit(d, j - 1), BigInt::zero()));
                    entry.1 += c * factor;
                }
            }
            next.retain(|_, (_, c)| !c.is_zero());
            level = next;
        }
        level.into_iter().map(|(l, (_, c))| (l, c)).collect()
    }
}

/// All nonzero `C_{k,l}` with `|l| = r`, keyed by `l`.
pub fn c_coefficients(k: &MultiIndex, r: u32) -> BTreeMap<MultiIndex, BigInt> {
    ShiftCoefficients::new(k.clone()).of_size(r)
}

pub fn c_coefficient(k: &MultiIndex, lowering: &MultiIndex) -> BigInt {
    ShiftCoefficients::new(k.clone()).coefficient(lowering)
}

/// `D_{k,l} = C_{k,l} (k - l + <-l)!` when the target is nonnegative, else 0.
pub fn d_coefficient(k: &MultiIndex, lowering: &MultiIndex) -> BigInt {
    match k.shift_target(lowering) {
        Some(target) => c_coefficient(k, lowering) * BigInt::from(target.factorial()),
        None => BigInt::zero(),
    }
}

/// Memoized factorial-normalized recursion:
/// `D_{k,0} = k!`,
/// `D_{k,l} = sum_{a, j >= 0, l_j^a >= 1} D_{k, l - e_j^a} (k_{j-1}^a - l_{j-1}^a + l_j^a)`
/// on nonnegative targets, and 0 elsewhere.
#[derive(Debug)]
pub struct NormalizedShiftCoefficients {
    source: MultiIndex,
    memo: HashMap<MultiIndex, BigInt>,
}

impl NormalizedShiftCoefficients {
    pub fn new(source: MultiIndex) -> Self {
        Self {
            source,
            memo: HashMap::new(),
        }
    }

    pub fn coefficient(&mut self, lowering: &MultiIndex) -> BigInt {
        assert!(lowering.is_lowering(), "not a lowering multi-index");
        if lowering.is_empty() {
            return BigInt::from(self.source.factorial());
        }
        if let Some(v) = self.memo.get(lowering) {
            return v.clone();
        }
        let value = if self.source.shift_target(lowering).is_none() {
            BigInt::zero()
        } else {
            let mut total = BigInt::zero();
            for (slot, lj) in lowering.iter() {
                let smaller = lowering.minus_unit(slot.decoration, slot.j).unwrap();
                let prev = self.coefficient(&smaller);
                if prev.is_zero() {
                    continue;
                }
                let factor = self.source.get(slot.decoration, slot.j - 1) as i64
                    - lowering.get(slot.decoration, slot.j - 1) as i64
                    + lj as i64;
                total += prev * factor;
            }
            total
        };
        self.memo.insert(lowering.clone(), value.clone());
        value
    }
}

pub fn d_coefficient_recursive(k: &MultiIndex, lowering: &MultiIndex) -> BigInt {
    NormalizedShiftCoefficients::new(k.clone()).coefficient(lowering)
}

/// `C_{k,b}(u)` for every target `b`, by expanding
/// `prod_{a,j} (sum_{m=0}^{j+1} u^m/m! x_{j-m}^a)^{k_j^a}`.
pub fn coefficient_gf(k: &MultiIndex) -> BTreeMap<MultiIndex, UPolynomial> {
    let mut acc: BTreeMap<MultiIndex, UPolynomial> = BTreeMap::new();
    acc.insert(MultiIndex::new(), UPolynomial::one());
    for (slot, count) in k.iter() {
        let factor: Vec<(MultiIndex, UPolynomial)> = (0..=(slot.j + 1) as u32)
            .map(|m| {
                let c = Rational::new(BigInt::one(), BigInt::from(factorial(m as u64)));
                (
                    MultiIndex::unit(slot.decoration, slot.j - m as i32),
                    UPolynomial::monomial(m, c),
                )
            })
            .collect();
        for _ in 0..count {
            let mut next: BTreeMap<MultiIndex, UPolynomial> = BTreeMap::new();
            for (target, poly) in &acc {
                for (x, up) in &factor {
                    let entry = next.entry(target.add(x)).or_default();
                    *entry = entry.add(&poly.mul(up));
                }
            }
            next.retain(|_, p| !p.is_zero());
            acc = next;
        }
    }
    acc
}

/// Nonnegative integer array `n_{a,j,s}` (`-1 <= s <= j`) with row sums
/// `k_j^a` and column sums `b_s^a`. Only positive entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransportArray {
    entries: BTreeMap<(Decoration, i32, i32), u32>,
}

impl TransportArray {
    pub fn entries(&self) -> &BTreeMap<(Decoration, i32, i32), u32> {
        &self.entries
    }

    pub fn get(&self, d: Decoration, j: i32, s: i32) -> u32 {
        self.entries.get(&(d, j, s)).copied().unwrap_or(0)
    }

    /// Exponent of `u`: `sum (j - s) n_{a,j,s}`.
    pub fn u_degree(&self) -> u32 {
        self.entries
            .iter()
            .map(|(&(_, j, s), &n)| (j - s) as u32 * n)
            .sum()
    }

    pub fn row_sums(&self) -> MultiIndex {
        MultiIndex::from_entries(self.entries.iter().map(|(&(d, j, _), &n)| (d, j, n))).unwrap()
    }

    pub fn column_sums(&self) -> MultiIndex {
        MultiIndex::from_entries(self.entries.iter().map(|(&(d, _, s), &n)| (d, s, n))).unwrap()
    }

    /// `prod_{a,j} k_j^a!/prod_s n_{a,j,s}!  /  prod (j-s)!^{n_{a,j,s}}`.
    pub fn weight(&self) -> Rational {
        let rows = self.row_sums();
        let mut num = BigUint::one();
        for (_, c) in rows.iter() {
            num *= factorial(c as u64);
        }
        let mut den = BigUint::one();
        for (&(_, j, s), &n) in &self.entries {
            den *= factorial(n as u64) * factorial((j - s) as u64).pow(n);
        }
        Rational::new(num.into(), den.into())
    }
}

/// Every transport array from `k` to `b`, in lexicographic order.
pub fn transport_arrays(k: &MultiIndex, b: &MultiIndex) -> Vec<TransportArray> {
    let mut decorations = k.decorations();
    decorations.extend(b.decorations());
    decorations.sort();
    decorations.dedup();

    let mut combined: Vec<TransportArray> = vec![TransportArray::default()];
    for d in decorations {
        let rows: Vec<(i32, u32)> = k
            .iter()
            .filter(|(s, _)| s.decoration == d)
            .map(|(s, c)| (s.j, c))
            .collect();
        let mut columns: BTreeMap<i32, u32> = b
            .iter()
            .filter(|(s, _)| s.decoration == d)
            .map(|(s, c)| (s.j, c))
            .collect();
        let mut partial = Vec::new();
        let mut found = Vec::new();
        fill_rows(d, &rows, &mut columns, &mut partial, &mut found);
        if found.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(combined.len() * found.len());
        for base in &combined {
            for extra in &found {
                let mut t = base.clone();
                t.entries.extend(extra.iter().map(|(key, n)| (*key, *n)));
                next.push(t);
            }
        }
        combined = next;
    }
    combined.sort();
    combined
}

type Cells = Vec<((Decoration, i32, i32), u32)>;

fn fill_rows(
    d: Decoration,
    rows: &[(i32, u32)],
    columns: &mut BTreeMap<i32, u32>,
    partial: &mut Cells,
    found: &mut Vec<Cells>,
) {
    let Some((&(j, row_total), rest)) = rows.split_first() else {
        if columns.values().all(|&c| c == 0) {
            found.push(partial.clone());
        }
        return;
    };
    let targets: Vec<i32> = (-1..=j).collect();
    fill_cells(d, j, &targets, row_total, rest, columns, partial, found);
}

#[allow(clippy::too_many_arguments)]
fn fill_cells(
    d: Decoration,
    j: i32,
    targets: &[i32],
    remaining: u32,
    rows_after: &[(i32, u32)],
    columns: &mut BTreeMap<i32, u32>,
    partial: &mut Cells,
    found: &mut Vec<Cells>,
) {
    let Some((&s, rest)) = targets.split_first() else {
        if remaining == 0 {
            fill_rows(d, rows_after, columns, partial, found);
        }
        return;
    };
    let capacity = columns.get(&s).copied().unwrap_or(0);
    for n in 0..=remaining.min(capacity) {
        if n > 0 {
            *columns.get_mut(&s).unwrap() -= n;
            partial.push(((d, j, s), n));
        }
        fill_cells(
            d,
            j,
            rest,
            remaining - n,
            rows_after,
            columns,
            partial,
            found,
        );
        if n > 0 {
            *columns.get_mut(&s).unwrap() += n;
            partial.pop();
        }
    }
}

/// `C_{k,b}(u)` as the sum over transport arrays of
/// `weight(n) u^{sum (j-s) n_{a,j,s}}`.
pub fn transition_gf(k: &MultiIndex, b: &MultiIndex) -> UPolynomial {
    let mut out = UPolynomial::zero();
    for array in transport_arrays(k, b) {
        out.add_term(array.u_degree(), array.weight());
    }
    out
}

/// `D_{k,b}(u) = b! C_{k,b}(u)`.
pub fn normalized_transition_gf(k: &MultiIndex, b: &MultiIndex) -> UPolynomial {
    transition_gf(k, b).scale(&rational_from_uint(b.factorial()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::{find_shift, Alphabet};

    fn alpha() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn mi(s: &str) -> MultiIndex {
        alpha().parse_multiindex(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn dbar_examples() {
        assert!(Polynomial::monomial(mi("a:-1=1")).dbar().is_zero());
        let p = Polynomial::monomial(mi("a:0=2")).dbar();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coefficient(&mi("a:-1=1,a:0=1")), q(2, 1));
        let x1 = Polynomial::monomial(mi("a:1=1"));
        assert_eq!(x1.dbar(), Polynomial::monomial(mi("a:0=1")));
        assert_eq!(x1.dbar_pow(2), Polynomial::monomial(mi("a:-1=1")));
        assert!(x1.dbar_pow(3).is_zero());
    }

    #[test]
    fn c_examples() {
        let k = mi("a:0=2");
        let c0 = c_coefficients(&k, 0);
        assert_eq!(c0.len(), 1);
        assert_eq!(c0[&MultiIndex::new()], BigInt::one());
        let c1 = c_coefficients(&k, 1);
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[&mi("a:0=1")], BigInt::from(2));
        let c2 = c_coefficients(&mi("a:1=1"), 2);
        assert_eq!(c2.len(), 1);
        assert_eq!(c2[&mi("a:1=1,a:0=1")], BigInt::one());
    }

    #[test]
    fn level_build_matches_recursion() {
        for spec in ["a:2=1,a:0=2,b:1=1", "a:3=1,a:-1=2", "a:1=2,b:0=1,b:2=1"] {
            let k = mi(spec);
            let mut c = ShiftCoefficients::new(k.clone());
            for r in 0..=4 {
                let built = c.of_size(r);
                for l in lowerings_of_size(&lowering_slots(&k), r) {
                    let direct = c.coefficient(&l);
                    assert_eq!(
                        built.get(&l).cloned().unwrap_or_default(),
                        direct,
                        "{spec} {l:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn d_examples() {
        let k = mi("a:0=2");
        assert_eq!(d_coefficient(&k, &MultiIndex::new()), BigInt::from(2));
        assert_eq!(
            d_coefficient_recursive(&k, &MultiIndex::new()),
            BigInt::from(2)
        );
        assert_eq!(d_coefficient(&k, &mi("a:0=1")), BigInt::from(2));
        assert_eq!(d_coefficient_recursive(&k, &mi("a:0=1")), BigInt::from(2));
        // a:-1=1 cannot be lowered at index 0.
        assert_eq!(d_coefficient(&mi("a:-1=1"), &mi("a:0=1")), BigInt::zero());
        assert_eq!(
            d_coefficient_recursive(&mi("a:-1=1"), &mi("a:0=1")),
            BigInt::zero()
        );
    }

    #[test]
    fn coefficient_gf_examples() {
        let g = coefficient_gf(&mi("a:-1=1"));
        assert_eq!(g.len(), 1);
        assert_eq!(g[&mi("a:-1=1")], UPolynomial::one());

        let g = coefficient_gf(&mi("a:1=1"));
        assert_eq!(g.len(), 3);
        assert_eq!(g[&mi("a:1=1")], UPolynomial::one());
        assert_eq!(g[&mi("a:0=1")], UPolynomial::monomial(1, q(1, 1)));
        assert_eq!(g[&mi("a:-1=1")], UPolynomial::monomial(2, q(1, 2)));
    }

    #[test]
    fn coefficient_gf_matches_exponential_of_dbar() {
        let k = mi("a:2=1,a:0=2,b:1=1");
        let g = coefficient_gf(&k);
        let mut expected: BTreeMap<MultiIndex, UPolynomial> = BTreeMap::new();
        let mut p = Polynomial::monomial(k.clone());
        let mut r = 0u32;
        while !p.is_zero() {
            for (target, c) in p.terms() {
                let term = UPolynomial::monomial(r, c / rational_from_uint(factorial(r as u64)));
                let e = expected.entry(target.clone()).or_default();
                *e = e.add(&term);
            }
            p = p.dbar();
            r += 1;
        }
        assert_eq!(g, expected);
        for b in g.keys() {
            assert!(find_shift(&k, b).lowering().is_some());
        }
    }

    #[test]
    fn transport_examples() {
        let k = mi("a:-1=1");
        let arrays = transport_arrays(&k, &k);
        assert_eq!(arrays.len(), 1);
        let d = alpha().lookup("a").unwrap();
        assert_eq!(arrays[0].get(d, -1, -1), 1);

        let arrays = transport_arrays(&mi("a:1=1"), &mi("a:-1=1"));
        assert_eq!(arrays.len(), 1);
        assert_eq!(arrays[0].get(d, 1, -1), 1);

        assert!(transport_arrays(&mi("a:-1=1"), &mi("a:0=1")).is_empty());
        assert!(transport_arrays(&mi("a:-1=1"), &mi("b:-1=1")).is_empty());

        let arrays = transport_arrays(&mi("a:1=2,a:0=1"), &mi("a:-1=2,a:0=1"));
        for t in &arrays {
            assert_eq!(t.row_sums(), mi("a:1=2,a:0=1"));
            assert_eq!(t.column_sums(), mi("a:-1=2,a:0=1"));
        }
        assert_eq!(arrays.len(), 2);
    }

    #[test]
    fn transition_examples() {
        let t = transition_gf(&mi("a:1=1"), &mi("a:-1=1"));
        assert_eq!(t, UPolynomial::monomial(2, q(1, 2)));
        assert_eq!(t.to_string(), "u^2/2");
        let k = mi("a:1=1,a:-1=2");
        assert_eq!(transition_gf(&k, &k), UPolynomial::one());
        assert!(transition_gf(&mi("a:-1=1"), &mi("a:0=1")).is_zero());
        // Cross-check with u^{|l|}/|l|! C_{k,l}.
        let l = mi("a:1=1,a:0=1");
        assert_eq!(c_coefficient(&mi("a:1=1"), &l), BigInt::one());
    }

    #[test]
    fn upolynomial_display() {
        assert_eq!(UPolynomial::zero().to_string(), "0");
        assert_eq!(UPolynomial::one().to_string(), "1");
        let p = UPolynomial::monomial(1, q(3, 1)).add(&UPolynomial::monomial(0, q(-1, 2)));
        assert_eq!(p.to_string(), "3*u - 1/2");
        assert_eq!(UPolynomial::monomial(3, q(-2, 3)).to_string(), "-2*u^3/3");
    }
}
