//! Decorated rooted trees in canonical form, the fertility map, and the
//! brute-force fibre enumeration used as an oracle by the counting modules.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{factorial, ratio, Rational};
use crate::error::{Error, Result};
use crate::multiindex::{Alphabet, Decoration, MultiIndex};

/// A rooted tree with decorated vertices. Children are kept sorted by the
/// derived order (decoration, then child list lexicographically), so two
/// trees are isomorphic exactly when they are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedTree {
    decoration: Decoration,
    children: Vec<DecoratedTree>,
}

impl DecoratedTree {
    pub fn leaf(decoration: Decoration) -> Self {
        Self {
            decoration,
            children: Vec::new(),
        }
    }

    /// Canonical tree with the given root decoration and child multiset.
    pub fn canonicalize(decoration: Decoration, mut children: Vec<DecoratedTree>) -> Self {
        children.sort();
        Self {
            decoration,
            children,
        }
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    pub fn children(&self) -> &[DecoratedTree] {
        &self.children
    }

    pub fn fertility(&self) -> usize {
        self.children.len()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DecoratedTree::size).sum::<usize>()
    }

    pub fn is_canonical(&self) -> bool {
        self.children.windows(2).all(|w| w[0] <= w[1])
            && self.children.iter().all(DecoratedTree::is_canonical)
    }

    /// `|Aut(t)|`: runs of equal children permute freely, and each child
    /// contributes its own automorphisms.
    pub fn automorphism_order(&self) -> BigUint {
        let mut total = BigUint::one();
        for child in &self.children {
            total *= child.automorphism_order();
        }
        let mut i = 0;
        while i < self.children.len() {
            let run = self.children[i..]
                .iter()
                .take_while(|c| **c == self.children[i])
                .count();
            total *= factorial(run as u64);
            i += run;
        }
        total
    }

    /// The multi-index `k(t)` with `k_j^a = #{v : d(v) = a, f(v) = j + 1}`.
    pub fn profile(&self) -> MultiIndex {
        let mut counts: BTreeMap<(Decoration, i32), u32> = BTreeMap::new();
        self.visit(&mut |t| {
            *counts
                .entry((t.decoration, t.fertility() as i32 - 1))
                .or_insert(0) += 1;
        });
        MultiIndex::from_entries(counts.into_iter().map(|((d, j), c)| (d, j, c)))
            .expect("fertility index is at least -1")
    }

    fn visit(&self, f: &mut impl FnMut(&DecoratedTree)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

pub fn format_tree(alphabet: &Alphabet, t: &DecoratedTree) -> String {
    let mut out = String::new();
    write_tree(alphabet, t, &mut out);
    out
}

fn write_tree(alphabet: &Alphabet, t: &DecoratedTree, out: &mut String) {
    out.push_str(alphabet.name(t.decoration));
    if !t.children.is_empty() {
        out.push('(');
        for (i, c) in t.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_tree(alphabet, c, out);
        }
        out.push(')');
    }
}

/// Parses `a(a,a(b))`; the result is canonical whatever the child order.
pub fn parse_tree(alphabet: &Alphabet, text: &str) -> Result<DecoratedTree> {
    let bytes: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let t = parse_node(alphabet, &bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(Error::Parse(format!("trailing input at position {pos}")));
    }
    Ok(t)
}

fn parse_node(alphabet: &Alphabet, s: &[char], pos: &mut usize) -> Result<DecoratedTree> {
    let start = *pos;
    while *pos < s.len() && (s[*pos].is_ascii_alphanumeric() || s[*pos] == '_') {
        *pos += 1;
    }
    let name: String = s[start..*pos].iter().collect();
    if name.is_empty() {
        return Err(Error::Parse(format!(
            "expected decoration at position {start}"
        )));
    }
    let d = alphabet
        .lookup(&name)
        .ok_or_else(|| Error::UnknownDecoration(name.clone()))?;
    let mut children = Vec::new();
    if *pos < s.len() && s[*pos] == '(' {
        *pos += 1;
        loop {
            children.push(parse_node(alphabet, s, pos)?);
            match s.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "expected ',' or ')' at position {pos}"
                    )))
                }
            }
        }
    }
    Ok(DecoratedTree::canonicalize(d, children))
}

/// Per-decoration-set cache of all canonical trees by vertex count.
#[derive(Clone, Debug)]
pub struct TreeCatalog {
    decorations: Vec<Decoration>,
    by_size: Vec<Vec<DecoratedTree>>,
}

impl TreeCatalog {
    pub fn new(mut decorations: Vec<Decoration>) -> Self {
        decorations.sort();
        decorations.dedup();
        Self {
            decorations,
            by_size: vec![Vec::new()],
        }
    }

    pub fn for_alphabet(alphabet: &Alphabet) -> Self {
        Self::new(alphabet.decorations())
    }

    /// All canonical trees with exactly `n` vertices, sorted.
    pub fn trees(&mut self, n: usize) -> &[DecoratedTree] {
        while self.by_size.len() <= n {
            let m = self.by_size.len();
            let next = self.generate(m);
            self.by_size.push(next);
        }
        &self.by_size[n]
    }

    fn generate(&self, n: usize) -> Vec<DecoratedTree> {
        // Children form a multiset of smaller trees with sizes summing to
        // n - 1; indices into `pool` are chosen in nondecreasing order.
        let pool: Vec<(usize, &DecoratedTree)> = self
            .by_size
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (s, t)))
            .collect();
        let mut multisets: Vec<Vec<DecoratedTree>> = Vec::new();
        let mut current = Vec::new();
        fn rec<'a>(
            pool: &[(usize, &'a DecoratedTree)],
            start: usize,
            remaining: usize,
            current: &mut Vec<&'a DecoratedTree>,
            out: &mut Vec<Vec<DecoratedTree>>,
        ) {
            if remaining == 0 {
                out.push(current.iter().map(|t| (*t).clone()).collect());
                return;
            }
            for i in start..pool.len() {
                let (size, t) = pool[i];
                if size > remaining {
                    break;
                }
                current.push(t);
                rec(pool, i, remaining - size, current, out);
                current.pop();
            }
        }
        if n == 0 {
            return Vec::new();
        }
        rec(&pool, 0, n - 1, &mut current, &mut multisets);
        let mut out = Vec::with_capacity(multisets.len() * self.decorations.len());
        for &d in &self.decorations {
            for ms in &multisets {
                out.push(DecoratedTree::canonicalize(d, ms.clone()));
            }
        }
        out.sort();
        out
    }
}

/// All canonical trees with `n` vertices decorated from `alphabet`.
pub fn enumerate_trees(n: usize, alphabet: &Alphabet) -> Vec<DecoratedTree> {
    TreeCatalog::for_alphabet(alphabet).trees(n).to_vec()
}

/// The fibre over `x^k`: every canonical tree whose profile is `k`.
pub fn enumerate_fibre(k: &MultiIndex) -> Vec<DecoratedTree> {
    if k.is_empty() || k.weight() != -1 {
        return Vec::new();
    }
    let mut catalog = TreeCatalog::new(k.decorations());
    catalog
        .trees(k.degree() as usize)
        .iter()
        .filter(|t| t.profile() == *k)
        .cloned()
        .collect()
}

/// Tree expansion `sum_t sigma(x^k)/sigma(t) t` over the fibre of `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreExpansion {
    profile: MultiIndex,
    terms: BTreeMap<DecoratedTree, Rational>,
}

impl FibreExpansion {
    pub fn profile(&self) -> &MultiIndex {
        &self.profile
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedTree, Rational> {
        &self.terms
    }

    pub fn total(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }
}

pub fn jmath_expansion(k: &MultiIndex) -> Result<FibreExpansion> {
    if k.weight() != -1 {
        return Err(Error::WeightNotMinusOne(k.weight()));
    }
    let sigma_k = k.symmetry_factor();
    let terms = enumerate_fibre(k)
        .into_iter()
        .map(|t| {
            let c = ratio(sigma_k.clone(), t.automorphism_order());
            (t, c)
        })
        .collect();
    Ok(FibreExpansion {
        profile: k.clone(),
        terms,
    })
}
