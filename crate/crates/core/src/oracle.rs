//! Batch cross-checks of every closed formula, recursion and series solver
//! against brute-force tree enumeration.
//!
//! Each check walks a deterministic list of cases and reports the first
//! mismatch in that order, so the report does not depend on how many
//! threads evaluated it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{factorial, format_rational, ratio, rational_from_uint, Rational};
use crate::coproduct::{coproduct, CoproductForm, CoproductOptions, Decomposition};
use crate::lowering::{
    lowerings_of_size, transition_gf, NormalizedShiftCoefficients, Polynomial, ShiftCoefficients,
};
use crate::multiindex::{weight_minus_one_profiles, Alphabet, MultiIndex, Slot};
use crate::mutation::Mutation;
use crate::ordinary::{
    h_series_cycle_index, h_series_euler, ordinary_rhs, ordinary_series, OrdinaryCounter,
};
use crate::series::TruncatedSeries;
use crate::trees::{enumerate_fibre, enumerate_trees, jmath_expansion};
use crate::weighted::{
    closed_form_w, prescribed_fertility_count, weighted_counts, weighted_rhs, weighted_series,
    WeightedRecursion,
};

/// Largest vertex count used by the labelled-tree enumeration.
pub const LABELLED_MAX_N: u64 = 6;
/// Largest degree of the source monomial in the lowering check.
pub const LOWERING_MAX_DEGREE: u64 = 6;
/// Largest fertility index of the source monomial in the lowering check.
pub const LOWERING_MAX_INDEX: i32 = 4;
/// Largest lowering size in the lowering check.
pub const LOWERING_MAX_ORDER: u32 = 4;
/// Largest `m` for the `H_m` comparison.
pub const H_MAX_M: usize = 5;
/// Largest degree in the coproduct check.
pub const COPRODUCT_MAX_DEGREE: u64 = 5;

/// First disagreement found by a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub quantity: String,
    pub key: String,
    pub expected: String,
    pub got: String,
}

impl Mismatch {
    fn new(quantity: &str, key: String, expected: impl ToString, got: impl ToString) -> Self {
        Self {
            quantity: quantity.to_string(),
            key,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}: expected {}, got {}",
            self.quantity, self.key, self.expected, self.got
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub mismatch: Option<Mismatch>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub alphabet: Alphabet,
    pub max_n: u64,
    pub mutation: Option<Mutation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub alphabet: Vec<String>,
    pub max_n: u64,
    pub checks: Vec<CheckReport>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn first_mismatch(&self) -> Option<(&'static str, &Mismatch)> {
        self.checks
            .iter()
            .find_map(|c| c.mismatch.as_ref().map(|m| (c.name, m)))
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "oracle alphabet={} max-n={}",
            self.alphabet.join(","),
            self.max_n
        )?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{:<width$}  {:>7}  {}", c.name, c.cases, status)?;
        }
        match self.first_mismatch() {
            None => writeln!(f, "all checks passed"),
            Some((name, m)) => writeln!(f, "first mismatch [{name}]: {m}"),
        }
    }
}

/// Runs every check in a fixed order.
pub fn run_oracle(config: &OracleConfig) -> OracleReport {
    let a = &config.alphabet;
    let n = config.max_n;
    let m = config.mutation;
    let checks = vec![
        check_weighted(a, n, m),
        check_labelled(a, n, m),
        check_mass(a, n),
        check_ordinary(a, n),
        check_weighted_series(a, n),
        check_ordinary_series(a, n),
        check_h_series(a, n),
        check_lowering(a, n, m),
        check_coproduct(a, n),
    ];
    OracleReport {
        alphabet: a.names().to_vec(),
        max_n: n,
        checks,
    }
}

/// [`run_oracle`] on a dedicated pool of `threads` workers.
pub fn run_oracle_with_threads(config: &OracleConfig, threads: usize) -> OracleReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build thread pool");
    pool.install(|| run_oracle(config))
}

fn first_failure<T, F>(cases: &[T], f: F) -> Option<Mismatch>
where
    T: Sync,
    F: Fn(&T) -> Option<Mismatch> + Sync + Send,
{
    cases.par_iter().find_map_first(f)
}

/// All weight -1 profiles with `1 <= |k| <= max_n`, by degree then key.
pub fn tree_profiles(alphabet: &Alphabet, max_n: u64) -> Vec<MultiIndex> {
    let decorations = alphabet.decorations();
    (1..=max_n)
        .flat_map(|n| weight_minus_one_profiles(&decorations, n))
        .collect()
}

fn brute_weighted(k: &MultiIndex) -> Rational {
    enumerate_fibre(k)
        .iter()
        .map(|t| ratio(BigUint::one(), t.automorphism_order()))
        .fold(Rational::zero(), |a, b| a + b)
}

/// Closed formula, root recursion and `sum 1/sigma(t)` agree on `W_k`.
pub fn check_weighted(alphabet: &Alphabet, max_n: u64, mutation: Option<Mutation>) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n);
    let recursion = WeightedRecursion::new();
    let mismatch = first_failure(&profiles, |k| {
        let key = alphabet.format_multiindex(k);
        let brute = brute_weighted(k);
        let closed = closed_form_w(k, mutation);
        if closed != brute {
            return Some(Mismatch::new(
                "W_k closed form",
                key,
                format_rational(&brute),
                format_rational(&closed),
            ));
        }
        let rec = recursion.weighted(k).expect("profile has weight -1");
        (rec != brute).then(|| {
            Mismatch::new(
                "W_k recursion",
                key,
                format_rational(&brute),
                format_rational(&rec),
            )
        })
    });
    CheckReport {
        name: "weighted",
        cases: profiles.len(),
        mismatch,
    }
}

/// Fertility sequences of all rooted trees on vertices `0..n`, with the
/// number of trees realizing each, found by scanning parent arrays.
pub fn labelled_fertility_census(n: usize) -> BTreeMap<Vec<u64>, u64> {
    fn rec(i: usize, n: usize, parent: &mut Vec<usize>, out: &mut BTreeMap<Vec<u64>, u64>) {
        if i == n {
            if parent.iter().filter(|&&p| p == n).count() != 1 {
                return;
            }
            for start in 0..n {
                let mut v = start;
                let mut steps = 0;
                while v != n {
                    v = parent[v];
                    steps += 1;
                    if steps > n {
                        return;
                    }
                }
            }
            let mut fert = vec![0u64; n];
            for &p in parent.iter() {
                if p < n {
                    fert[p] += 1;
                }
            }
            *out.entry(fert).or_insert(0) += 1;
            return;
        }
        for p in 0..=n {
            if p == i {
                continue;
            }
            parent.push(p);
            rec(i + 1, n, parent, out);
            parent.pop();
        }
    }
    let mut out = BTreeMap::new();
    rec(0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `L_k` for every profile with `n` vertices, by decorating every labelled
/// rooted tree in every way.
fn labelled_profile_census(
    alphabet: &Alphabet,
    census: &BTreeMap<Vec<u64>, u64>,
    n: usize,
) -> BTreeMap<MultiIndex, BigUint> {
    let decorations = alphabet.decorations();
    let base = decorations.len();
    let mut out: BTreeMap<MultiIndex, BigUint> = BTreeMap::new();
    for (fert, &count) in census {
        let mut digits = vec![0usize; n];
        loop {
            let k = (0..n).fold(MultiIndex::new(), |k, v| {
                k.plus_unit(decorations[digits[v]], fert[v] as i32 - 1)
            });
            *out.entry(k).or_insert_with(BigUint::zero) += count;
            let mut pos = 0;
            while pos < n {
                digits[pos] += 1;
                if digits[pos] < base {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    out
}

/// Prescribed-fertility counts and `L_k = n! W_k` against labelled trees.
pub fn check_labelled(alphabet: &Alphabet, max_n: u64, mutation: Option<Mutation>) -> CheckReport {
    let top = max_n.min(LABELLED_MAX_N) as usize;
    let mut cases = 0;
    let mut mismatch = None;
    for n in 1..=top {
        let census = labelled_fertility_census(n);
        let seqs: Vec<(&Vec<u64>, &u64)> = census.iter().collect();
        cases += seqs.len();
        mismatch = first_failure(&seqs, |(fert, &count)| {
            let formula = prescribed_fertility_count(fert).expect("fertilities sum to n-1");
            (formula != BigUint::from(count)).then(|| {
                let key = format!("{fert:?}");
                Mismatch::new("prescribed fertility count", key, count, formula)
            })
        });
        if mismatch.is_some() {
            break;
        }
        // Every fertility sequence with sum n-1 must occur.
        let expected_seqs = crate::arith::binomial(2 * n as u64 - 2, n as u64 - 1);
        if BigUint::from(census.len()) != expected_seqs {
            mismatch = Some(Mismatch::new(
                "fertility sequences",
                format!("n={n}"),
                expected_seqs,
                census.len(),
            ));
            break;
        }

        let labelled = labelled_profile_census(alphabet, &census, n);
        let profiles = weight_minus_one_profiles(&alphabet.decorations(), n as u64);
        cases += profiles.len();
        if labelled.len() != profiles.len() {
            mismatch = Some(Mismatch::new(
                "labelled profiles",
                format!("n={n}"),
                profiles.len(),
                labelled.len(),
            ));
            break;
        }
        mismatch = first_failure(&profiles, |k| {
            let key = alphabet.format_multiindex(k);
            let brute = labelled.get(k).cloned().unwrap_or_default();
            let counts = weighted_counts(k).expect("profile has weight -1");
            if counts.labelled != brute {
                return Some(Mismatch::new("L_k", key, brute, counts.labelled));
            }
            let scaled = closed_form_w(k, mutation) * rational_from_uint(factorial(n as u64));
            (scaled != rational_from_uint(brute.clone()))
                .then(|| Mismatch::new("n! W_k", key, brute, format_rational(&scaled)))
        });
        if mismatch.is_some() {
            break;
        }
    }
    CheckReport {
        name: "labelled",
        cases,
        mismatch,
    }
}

/// `J_k` is an integer, equals `k! W_k`, and equals the total of the tree
/// expansion.
pub fn check_mass(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n);
    let mismatch = first_failure(&profiles, |k| {
        let key = alphabet.format_multiindex(k);
        let counts = weighted_counts(k).expect("profile has weight -1");
        let mass = rational_from_uint(counts.mass.clone());
        let from_w = &counts.weighted * rational_from_uint(k.factorial());
        if !from_w.is_integer() || from_w != mass {
            return Some(Mismatch::new(
                "J_k integrality",
                key,
                counts.mass,
                format_rational(&from_w),
            ));
        }
        let total = jmath_expansion(k).expect("profile has weight -1").total();
        (total != mass)
            .then(|| Mismatch::new("J_k expansion", key, format_rational(&total), counts.mass))
    });
    CheckReport {
        name: "mass",
        cases: profiles.len(),
        mismatch,
    }
}

/// Multiset recursion against fibre sizes, and total tree counts.
pub fn check_ordinary(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n);
    let counter = OrdinaryCounter::new();
    let counts: Vec<(BigUint, usize)> = profiles
        .par_iter()
        .map(|k| {
            (
                counter.count(k).expect("profile has weight -1"),
                enumerate_fibre(k).len(),
            )
        })
        .collect();
    let mut mismatch = profiles.iter().zip(&counts).find_map(|(k, (f, brute))| {
        (*f != BigUint::from(*brute))
            .then(|| Mismatch::new("F_k", alphabet.format_multiindex(k), brute, f))
    });
    let mut cases = profiles.len();
    if mismatch.is_none() {
        for n in 1..=max_n {
            cases += 1;
            let sum = profiles
                .iter()
                .zip(&counts)
                .filter(|(k, _)| k.degree() == n)
                .fold(BigUint::zero(), |acc, (_, (f, _))| acc + f);
            let trees = enumerate_trees(n as usize, alphabet).len();
            if sum != BigUint::from(trees) {
                mismatch = Some(Mismatch::new("sum of F_k", format!("n={n}"), trees, sum));
                break;
            }
        }
    }
    CheckReport {
        name: "ordinary",
        cases,
        mismatch,
    }
}

fn compare_series(
    alphabet: &Alphabet,
    quantity: &str,
    series: &TruncatedSeries,
    expected: &BTreeMap<MultiIndex, Rational>,
) -> Option<Mismatch> {
    for (k, c) in expected {
        let got = series.coefficient(k);
        if &got != c {
            return Some(Mismatch::new(
                quantity,
                alphabet.format_multiindex(k),
                format_rational(c),
                format_rational(&got),
            ));
        }
    }
    series
        .terms()
        .find(|(k, _)| !expected.contains_key(*k))
        .map(|(k, c)| {
            Mismatch::new(
                quantity,
                alphabet.format_multiindex(k),
                0,
                format_rational(c),
            )
        })
}

fn series_difference(
    alphabet: &Alphabet,
    quantity: &str,
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
) -> Option<Mismatch> {
    let diff = lhs - rhs;
    let first = diff.terms().next().map(|(k, _)| k.clone())?;
    Some(Mismatch::new(
        quantity,
        alphabet.format_multiindex(&first),
        format_rational(&lhs.coefficient(&first)),
        format_rational(&rhs.coefficient(&first)),
    ))
}

/// `T(u)` carries `W_k` and solves its functional equation.
pub fn check_weighted_series(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n);
    let expected: BTreeMap<MultiIndex, Rational> = profiles
        .iter()
        .map(|k| {
            (
                k.clone(),
                weighted_counts(k).expect("profile has weight -1").weighted,
            )
        })
        .collect();
    let t = weighted_series(alphabet, max_n);
    let mismatch = compare_series(alphabet, "T coefficient", &t, &expected).or_else(|| {
        let rhs = weighted_rhs(alphabet, &t, max_n);
        series_difference(alphabet, "T fixpoint", &t, &rhs)
    });
    CheckReport {
        name: "weighted-series",
        cases: profiles.len() + 1,
        mismatch,
    }
}

/// `F(u)` carries `F_k` and solves its cycle-index equation.
pub fn check_ordinary_series(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n);
    let counter = OrdinaryCounter::new();
    let expected: BTreeMap<MultiIndex, Rational> = profiles
        .iter()
        .map(|k| {
            (
                k.clone(),
                rational_from_uint(counter.count(k).expect("profile has weight -1")),
            )
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let f = ordinary_series(alphabet, max_n);
    let mismatch = compare_series(alphabet, "F coefficient", &f, &expected).or_else(|| {
        let rhs = ordinary_rhs(alphabet, &f, max_n);
        series_difference(alphabet, "F fixpoint", &f, &rhs)
    });
    CheckReport {
        name: "ordinary-series",
        cases: profiles.len() + 1,
        mismatch,
    }
}

/// `H_m` from the Euler product and from the cycle index, `m <= 5`.
pub fn check_h_series(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let counter = OrdinaryCounter::new();
    let f = ordinary_series(alphabet, max_n);
    let ms: Vec<usize> = (0..=H_MAX_M).collect();
    let mismatch = first_failure(&ms, |&m| {
        let euler = h_series_euler(alphabet, &counter, m, max_n);
        let cycle = h_series_cycle_index(&f, m, max_n);
        series_difference(alphabet, &format!("H_{m}"), &euler, &cycle)
    });
    CheckReport {
        name: "h-series",
        cases: ms.len(),
        mismatch,
    }
}

/// Every multi-index over `alphabet` with degree at most `max_degree` and
/// indices in `-1..=max_index`.
pub fn bounded_multiindices(
    alphabet: &Alphabet,
    max_degree: u64,
    max_index: i32,
) -> Vec<MultiIndex> {
    let slots: Vec<Slot> = alphabet
        .decorations()
        .into_iter()
        .flat_map(|d| (-1..=max_index).map(move |j| Slot::new(d, j)))
        .collect();
    (0..=max_degree as u32)
        .flat_map(|r| lowerings_of_size(&slots, r))
        .collect()
}

fn lowering_case(
    alphabet: &Alphabet,
    k: &MultiIndex,
    mutation: Option<Mutation>,
) -> Option<Mismatch> {
    let key = |l: &MultiIndex| {
        format!(
            "k={} l={}",
            alphabet.format_multiindex(k),
            alphabet.format_multiindex(l)
        )
    };
    let mut c = ShiftCoefficients::with_mutation(k.clone(), mutation);
    let mut d = NormalizedShiftCoefficients::new(k.clone());
    let mut p = Polynomial::monomial(k.clone());
    for r in 0..=LOWERING_MAX_ORDER {
        let coefficients = c.of_size(r);
        let r_factorial = rational_from_uint(factorial(r as u64));
        let mut seen = 0usize;
        for (l, coeff) in &coefficients {
            let Some(target) = k.shift_target(l) else {
                return Some(Mismatch::new("C_{k,l} support", key(l), 0, coeff));
            };
            seen += 1;
            let c_rat = Rational::from_integer(coeff.clone());
            let from_dbar = p.coefficient(&target);
            if from_dbar != c_rat {
                return Some(Mismatch::new(
                    "C_{k,l} vs dbar^r",
                    key(l),
                    format_rational(&from_dbar),
                    coeff,
                ));
            }
            let gf = transition_gf(k, &target);
            let expected_term = &c_rat / &r_factorial;
            match gf.as_monomial() {
                Some((deg, v)) if deg == r && *v == expected_term => {}
                _ => {
                    let want = format!("u^{r} * {}", format_rational(&expected_term));
                    return Some(Mismatch::new("transition monomial", key(l), want, &gf));
                }
            }
            let normalized = coeff * BigInt::from(target.factorial());
            let recursive = d.coefficient(l);
            if normalized != recursive {
                return Some(Mismatch::new("D_{k,l}", key(l), normalized, recursive));
            }
        }
        if seen != p.terms().len() {
            let l = MultiIndex::new();
            return Some(Mismatch::new(
                &format!("number of dbar^{r} terms"),
                key(&l),
                p.terms().len(),
                seen,
            ));
        }
        p = p.dbar();
    }
    None
}

/// `C` recursion, iterated `dbar`, transport-array generating function and
/// both `D` routes agree.
pub fn check_lowering(alphabet: &Alphabet, max_n: u64, mutation: Option<Mutation>) -> CheckReport {
    let ks = bounded_multiindices(alphabet, max_n.min(LOWERING_MAX_DEGREE), LOWERING_MAX_INDEX);
    let mismatch = first_failure(&ks, |k| lowering_case(alphabet, k, mutation));
    CheckReport {
        name: "lowering",
        cases: ks.len(),
        mismatch,
    }
}

/// The three coproduct expansions coincide under both decomposition modes.
pub fn check_coproduct(alphabet: &Alphabet, max_n: u64) -> CheckReport {
    let profiles = tree_profiles(alphabet, max_n.min(COPRODUCT_MAX_DEGREE));
    let cases: Vec<(MultiIndex, Decomposition)> = profiles
        .iter()
        .flat_map(|k| [Decomposition::Multiset, Decomposition::Ordered].map(|m| (k.clone(), m)))
        .collect();
    let mismatch = first_failure(&cases, |(k, mode)| {
        let options = CoproductOptions {
            decomposition: *mode,
            ..Default::default()
        };
        let raw = coproduct(k, CoproductForm::RawDbar, options).expect("profile has weight -1");
        for form in [CoproductForm::RefinedC, CoproductForm::RefinedD] {
            let refined = coproduct(k, form, options).expect("profile has weight -1");
            if refined != raw {
                let key = format!("{} ({mode:?})", alphabet.format_multiindex(k));
                return Some(Mismatch::new(
                    &format!("coproduct {form:?}"),
                    key,
                    format!("{} terms", raw.len()),
                    format!("{} terms", refined.len()),
                ));
            }
        }
        None
    });
    CheckReport {
        name: "coproduct",
        cases: cases.len(),
        mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    #[test]
    fn labelled_census_counts_rooted_trees() {
        for n in 1..=5usize {
            let total: u64 = labelled_fertility_census(n).values().sum();
            assert_eq!(total, (n as u64).pow(n as u32 - 1));
        }
    }

    #[test]
    fn bounded_multiindices_counts() {
        // 6 slots, degree <= 2: 1 + 6 + 21.
        assert_eq!(bounded_multiindices(&a(), 2, 4).len(), 28);
    }

    #[test]
    fn small_run_passes() {
        let report = run_oracle(&OracleConfig {
            alphabet: a(),
            max_n: 4,
            mutation: None,
        });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn mutations_are_caught() {
        for m in Mutation::ALL {
            let report = run_oracle(&OracleConfig {
                alphabet: a(),
                max_n: 4,
                mutation: Some(m),
            });
            assert!(!report.passed(), "{m:?} survived");
        }
    }
}
