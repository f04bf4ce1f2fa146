//! Decorated multi-indices: finitely supported maps `(a, j) -> count` with
//! `j >= -1`, stored sparsely with zero counts removed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::factorial;
use crate::error::{Error, Result};

/// Interned decoration; ids are only meaningful inside the [`Alphabet`]
/// that issued them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decoration(pub(crate) u16);

impl Decoration {
    pub fn id(self) -> u16 {
        self.0
    }
}

/// A finite decoration alphabet. Names are kept sorted so that id order
/// coincides with lexicographic name order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::Alphabet("alphabet is empty".into()));
        }
        if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
            return Err(Error::Alphabet(format!("invalid decoration name `{bad}`")));
        }
        names.sort();
        names.dedup();
        if names.len() > u16::MAX as usize {
            return Err(Error::Alphabet("too many decorations".into()));
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn decorations(&self) -> Vec<Decoration> {
        (0..self.names.len() as u16).map(Decoration).collect()
    }

    pub fn name(&self, d: Decoration) -> &str {
        &self.names[d.0 as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Decoration> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| Decoration(i as u16))
    }

    fn lookup_or_err(&self, name: &str) -> Result<Decoration> {
        if !valid_name(name) {
            return Err(Error::Parse(format!("invalid decoration name `{name}`")));
        }
        self.lookup(name)
            .ok_or_else(|| Error::UnknownDecoration(name.to_string()))
    }

    /// Parses `a:-1=2,a:1=1` (any entry order) or `0` for the empty index.
    pub fn parse_multiindex(&self, text: &str) -> Result<MultiIndex> {
        let text = text.trim();
        if text == "0" {
            return Ok(MultiIndex::new());
        }
        if text.is_empty() {
            return Err(Error::Parse("empty multi-index".into()));
        }
        let mut entries = BTreeMap::new();
        for entry in text.split(',') {
            let entry = entry.trim();
            let (dec, rest) = entry
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing ':' in entry `{entry}`")))?;
            let (j, count) = rest
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("missing '=' in entry `{entry}`")))?;
            let d = self.lookup_or_err(dec)?;
            let j: i32 = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad fertility index in `{entry}`")))?;
            if j < -1 {
                return Err(Error::Parse(format!("fertility index {j} below -1")));
            }
            let count: u32 = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in `{entry}`")))?;
            if count == 0 {
                return Err(Error::Parse(format!("zero count in `{entry}`")));
            }
            let slot = Slot::new(d, j);
            if entries.insert(slot, count).is_some() {
                return Err(Error::Parse(format!("duplicate key {dec}:{j}")));
            }
        }
        Ok(MultiIndex { entries })
    }

    pub fn format_multiindex(&self, k: &MultiIndex) -> String {
        if k.is_empty() {
            return "0".to_string();
        }
        k.iter()
            .map(|(s, c)| format!("{}:{}={}", self.name(s.decoration), s.j, c))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Display adapter for a multi-index.
    pub fn show<'a>(&'a self, k: &'a MultiIndex) -> ShowIndex<'a> {
        ShowIndex {
            alphabet: self,
            index: k,
        }
    }
}

pub struct ShowIndex<'a> {
    alphabet: &'a Alphabet,
    index: &'a MultiIndex,
}

impl fmt::Display for ShowIndex<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_multiindex(self.index))
    }
}

/// A coordinate `(a, j)`. Ordering is by decoration, then `j` ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub decoration: Decoration,
    pub j: i32,
}

impl Slot {
    pub fn new(decoration: Decoration, j: i32) -> Self {
        Self { decoration, j }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: BTreeMap<Slot, u32>,
}

impl MultiIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unit index `e_j^a`.
    pub fn unit(d: Decoration, j: i32) -> Self {
        assert!(j >= -1, "fertility index below -1");
        let mut entries = BTreeMap::new();
        entries.insert(Slot::new(d, j), 1);
        Self { entries }
    }

    /// Builds an index from `(decoration, j, count)` triples; zero counts are
    /// dropped and repeated keys accumulate.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Decoration, i32, u32)>,
    {
        let mut out = BTreeMap::new();
        for (d, j, c) in entries {
            if j < -1 {
                return Err(Error::IndexBelowMinusOne(j as i64));
            }
            if c > 0 {
                *out.entry(Slot::new(d, j)).or_insert(0) += c;
            }
        }
        Ok(Self { entries: out })
    }

    pub fn get(&self, d: Decoration, j: i32) -> u32 {
        self.entries.get(&Slot::new(d, j)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Slot, u32)> + '_ {
        self.entries.iter().map(|(s, c)| (*s, *c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) coordinates.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> u64 {
        self.entries.values().map(|&c| c as u64).sum()
    }

    pub fn weight(&self) -> i64 {
        self.entries
            .iter()
            .map(|(s, &c)| s.j as i64 * c as i64)
            .sum()
    }

    /// `sum (j+1) k_j^a`: the number of edges of any tree with this profile.
    pub fn lowering_capacity(&self) -> u64 {
        self.entries
            .iter()
            .map(|(s, &c)| (s.j + 1) as u64 * c as u64)
            .sum()
    }

    /// Product of coordinate factorials.
    pub fn symmetry_factor(&self) -> BigUint {
        self.entries
            .values()
            .fold(BigUint::one(), |acc, &c| acc * factorial(c as u64))
    }

    /// Same value as [`Self::symmetry_factor`], written `k!` in the
    /// coproduct formulas.
    pub fn factorial(&self) -> BigUint {
        self.symmetry_factor()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = self.entries.clone();
        for (s, c) in other.iter() {
            *entries.entry(s).or_insert(0) += c;
        }
        Self { entries }
    }

    pub fn subtract(&self, other: &MultiIndex) -> Result<MultiIndex> {
        let mut entries = self.entries.clone();
        for (s, c) in other.iter() {
            match entries.get_mut(&s) {
                Some(v) if *v > c => *v -= c,
                Some(v) if *v == c => {
                    entries.remove(&s);
                }
                _ => return Err(Error::NegativeComponent),
            }
        }
        Ok(Self { entries })
    }

    /// `self + e_j^a`.
    pub fn plus_unit(&self, d: Decoration, j: i32) -> MultiIndex {
        let mut out = self.clone();
        *out.entries.entry(Slot::new(d, j)).or_insert(0) += 1;
        out
    }

    /// `self - e_j^a`, or `None` if that coordinate is zero.
    pub fn minus_unit(&self, d: Decoration, j: i32) -> Option<MultiIndex> {
        let slot = Slot::new(d, j);
        let c = *self.entries.get(&slot)?;
        let mut out = self.clone();
        if c == 1 {
            out.entries.remove(&slot);
        } else {
            out.entries.insert(slot, c - 1);
        }
        Some(out)
    }

    pub fn scale(&self, r: u32) -> MultiIndex {
        if r == 0 {
            return MultiIndex::new();
        }
        Self {
            entries: self.entries.iter().map(|(s, c)| (*s, c * r)).collect(),
        }
    }

    /// Componentwise `self <= other`.
    pub fn is_le(&self, other: &MultiIndex) -> bool {
        self.iter()
            .all(|(s, c)| other.entries.get(&s).is_some_and(|&o| o >= c))
    }

    pub fn is_lowering(&self) -> bool {
        self.entries.keys().all(|s| s.j >= 0)
    }

    /// The left shift `(<-l)_j^a = l_{j+1}^a`.
    pub fn left_shift(&self) -> Result<MultiIndex> {
        if !self.is_lowering() {
            return Err(Error::NotLowering);
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .map(|(s, &c)| (Slot::new(s.decoration, s.j - 1), c))
                .collect(),
        })
    }

    /// `self - l + <-l` for a lowering index `l`, or `None` when some
    /// coordinate would be negative.
    pub fn shift_target(&self, lowering: &MultiIndex) -> Option<MultiIndex> {
        debug_assert!(lowering.is_lowering());
        let mut signed: BTreeMap<Slot, i64> =
            self.entries.iter().map(|(s, &c)| (*s, c as i64)).collect();
        for (s, c) in lowering.iter() {
            *signed.entry(s).or_insert(0) -= c as i64;
            *signed.entry(Slot::new(s.decoration, s.j - 1)).or_insert(0) += c as i64;
        }
        let mut entries = BTreeMap::new();
        for (s, c) in signed {
            match c {
                c if c < 0 => return None,
                0 => {}
                c => {
                    entries.insert(s, c as u32);
                }
            }
        }
        Some(Self { entries })
    }

    /// Decorations with at least one nonzero coordinate, ascending.
    pub fn decorations(&self) -> Vec<Decoration> {
        let mut out: Vec<Decoration> = self.entries.keys().map(|s| s.decoration).collect();
        out.dedup();
        out
    }

    pub fn max_index(&self) -> Option<i32> {
        self.entries.keys().map(|s| s.j).max()
    }

    /// Total count carried by decoration `d`.
    pub fn decoration_degree(&self, d: Decoration) -> u64 {
        self.iter()
            .filter(|(s, _)| s.decoration == d)
            .map(|(_, c)| c as u64)
            .sum()
    }

    /// Every `m` with `0 <= m <= self` componentwise, in canonical order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let slots: Vec<(Slot, u32)> = self.iter().collect();
        let mut out = Vec::new();
        let mut current = BTreeMap::new();
        fn rec(
            slots: &[(Slot, u32)],
            current: &mut BTreeMap<Slot, u32>,
            out: &mut Vec<MultiIndex>,
        ) {
            let Some(((slot, max), rest)) = slots.split_first() else {
                out.push(MultiIndex {
                    entries: current.clone(),
                });
                return;
            };
            for c in 0..=*max {
                if c == 0 {
                    current.remove(slot);
                } else {
                    current.insert(*slot, c);
                }
                rec(rest, current, out);
            }
            current.remove(slot);
        }
        rec(&slots, &mut current, &mut out);
        out.sort();
        out
    }

    /// Nonzero sub-indices of weight -1: the candidate branch profiles.
    pub fn weight_minus_one_parts(&self) -> Vec<MultiIndex> {
        self.sub_indices()
            .into_iter()
            .filter(|m| !m.is_empty() && m.weight() == -1)
            .collect()
    }
}

/// Outcome of [`find_shift`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftResult {
    Reachable(MultiIndex),
    Unreachable,
}

impl ShiftResult {
    pub fn lowering(&self) -> Option<&MultiIndex> {
        match self {
            ShiftResult::Reachable(l) => Some(l),
            ShiftResult::Unreachable => None,
        }
    }
}

/// Finds the unique lowering `l` with `b = k - l + <-l`.
///
/// Requires per-decoration degree balance and nonnegative tail sums
/// `sum_{m >= j} (k_m^a - b_m^a)` for all `j >= 0`; those tail sums are `l`.
pub fn find_shift(k: &MultiIndex, b: &MultiIndex) -> ShiftResult {
    let mut decorations = k.decorations();
    decorations.extend(b.decorations());
    decorations.sort();
    decorations.dedup();

    let mut entries = Vec::new();
    for &d in &decorations {
        if k.decoration_degree(d) != b.decoration_degree(d) {
            return ShiftResult::Unreachable;
        }
        let top = k.max_index().max(b.max_index()).unwrap_or(-1);
        let mut tail: i64 = 0;
        for j in (0..=top).rev() {
            tail += k.get(d, j) as i64 - b.get(d, j) as i64;
            if tail < 0 {
                return ShiftResult::Unreachable;
            }
            if tail > 0 {
                entries.push((d, j, tail as u32));
            }
        }
    }
    let lowering = MultiIndex::from_entries(entries).expect("indices are nonnegative");
    match k.shift_target(&lowering) {
        Some(target) if &target == b => ShiftResult::Reachable(lowering),
        _ => ShiftResult::Unreachable,
    }
}

/// All weight -1 multi-indices of total degree `n` over `decorations`
/// (the profiles a tree with `n` vertices can have), in canonical order.
pub fn weight_minus_one_profiles(decorations: &[Decoration], n: u64) -> Vec<MultiIndex> {
    if n == 0 {
        return Vec::new();
    }
    // Vertices of fertility f = j + 1 use up f edges out of n - 1.
    let mut slots = Vec::new();
    for &d in decorations {
        for j in -1..=(n as i32 - 2) {
            slots.push(Slot::new(d, j));
        }
    }
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    fn rec(
        slots: &[Slot],
        vertices_left: u64,
        edges_left: u64,
        current: &mut BTreeMap<Slot, u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        let Some((slot, rest)) = slots.split_first() else {
            if vertices_left == 0 && edges_left == 0 {
                out.push(MultiIndex {
                    entries: current.clone(),
                });
            }
            return;
        };
        let fert = (slot.j + 1) as u64;
        let mut c = 0u64;
        loop {
            if c > vertices_left || c * fert > edges_left {
                break;
            }
            if c > 0 {
                current.insert(*slot, c as u32);
            }
            rec(rest, vertices_left - c, edges_left - c * fert, current, out);
            c += 1;
        }
        current.remove(slot);
    }
    rec(&slots, n, n - 1, &mut current, &mut out);
    out.sort();
    out
}
