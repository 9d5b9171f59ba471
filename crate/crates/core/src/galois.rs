//! Finite permutation groups acting on `{0, .., n-1}`, standing in for the
//! action of a Galois group on the embeddings of a number field.
//!
//! Everything here is computed by brute force over the enumerated group:
//! orbit-length extremes (`λ`, `λ′`), the slopes `σ = 1 − λ/n` and
//! `σ′ = 1 − λ′/n`, bisecting elements and Chebotarev-style counting
//! fractions. Groups are closed by breadth-first multiplication up to a hard
//! element cap.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::Rational;
use crate::util::{bigint_opt, is_prime_u64};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("not a permutation of 0..{n}: {detail}")]
    NotAPermutation { n: usize, detail: String },
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error("generator acts on {got} points, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("group closure exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("the group must act on at least one point")]
    EmptyDomain,
    #[error("invalid block system: {0}")]
    BadBlocks(String),
}

/// A bijection of `{0, .., n-1}`, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, GaloisError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(GaloisError::NotAPermutation { n, detail: format!("{images:?}") });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// Build from disjoint or overlapping cycles, composed left to right as
    /// written (rightmost applied first).
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, GaloisError> {
        let mut p = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let mut c = Permutation::identity(n);
            for (idx, &a) in cycle.iter().enumerate() {
                let b = cycle[(idx + 1) % cycle.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(GaloisError::NotAPermutation { n, detail: format!("{cycle:?}") });
                }
                c.images[a as usize] = b;
            }
            let c = Permutation::new(c.images)?;
            p = c.compose(&p);
        }
        Ok(p)
    }

    /// Parse cycle notation `"(0 1)(2 3)"` or a one-line image list
    /// `"1,0,3,2"`. `"()"` is the identity.
    pub fn parse(s: &str, n: usize) -> Result<Self, GaloisError> {
        let t = s.trim();
        if t.starts_with('(') {
            let mut cycles: Vec<Vec<u32>> = Vec::new();
            let mut rest = t;
            while !rest.is_empty() {
                let rest_t = rest.trim_start();
                if rest_t.is_empty() {
                    break;
                }
                if !rest_t.starts_with('(') {
                    return Err(GaloisError::Parse(s.to_string()));
                }
                let close = rest_t.find(')').ok_or_else(|| GaloisError::Parse(s.to_string()))?;
                let body = &rest_t[1..close];
                let cycle = body
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|w| !w.is_empty())
                    .map(|w| w.parse::<u32>().map_err(|_| GaloisError::Parse(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                let distinct: HashSet<_> = cycle.iter().collect();
                if distinct.len() != cycle.len() {
                    return Err(GaloisError::Parse(s.to_string()));
                }
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
                rest = &rest_t[close + 1..];
            }
            let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
            Permutation::from_cycles(n, &refs)
        } else {
            let images = t
                .split(',')
                .map(|w| w.trim().parse::<u32>().map_err(|_| GaloisError::Parse(s.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if images.len() != n {
                return Err(GaloisError::DegreeMismatch { expected: n, got: images.len() });
            }
            Permutation::new(images)
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Orbit lengths, sorted ascending; they sum to `n`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    /// `λ(g)`, the largest orbit length.
    pub fn lambda_max(&self) -> usize {
        self.cycle_type().last().copied().unwrap_or(0)
    }

    /// `λ′(g)`, the smallest orbit length.
    pub fn lambda_min(&self) -> usize {
        self.cycle_type().first().copied().unwrap_or(0)
    }

    /// Exactly two orbits, of equal size.
    ///
    /// On two points the identity qualifies (two fixed points).
    pub fn bisects(&self) -> bool {
        matches!(self.cycle_type().as_slice(), [a, b] if a == b)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, fixed points omitted; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x.to_string());
                x = self.images[x] as usize;
            }
            write!(f, "({})", cyc.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

/// A permutation group given by generators, with its element list
/// enumerated on first use.
#[derive(Debug)]
pub struct PermGroupAction {
    n: usize,
    generators: Vec<Permutation>,
    cap: usize,
    elements: OnceLock<Result<Vec<Permutation>, GaloisError>>,
}

impl Clone for PermGroupAction {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        PermGroupAction { n: self.n, generators: self.generators.clone(), cap: self.cap, elements }
    }
}

impl PermGroupAction {
    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self, GaloisError> {
        Self::with_cap(n, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(n: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self, GaloisError> {
        if n == 0 {
            return Err(GaloisError::EmptyDomain);
        }
        for g in &generators {
            if g.degree() != n {
                return Err(GaloisError::DegreeMismatch { expected: n, got: g.degree() });
            }
        }
        Ok(PermGroupAction { n, generators, cap, elements: OnceLock::new() })
    }

    /// Semicolon-separated generators, each in either permutation syntax.
    /// An empty string gives the trivial group.
    pub fn parse(gens: &str, n: usize) -> Result<Self, GaloisError> {
        let generators = gens
            .split(';')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(|g| Permutation::parse(g, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, generators)
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("n >= 1")
    }

    /// `Z/n` acting regularly on itself.
    pub fn cyclic(n: usize) -> Self {
        let gen = Permutation { images: (0..n as u32).map(|i| (i + 1) % n as u32).collect() };
        Self::new(n, vec![gen]).expect("n >= 1")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
            let long: Vec<u32> = (0..n as u32).collect();
            gens.push(Permutation::from_cycles(n, &[&long]).unwrap());
        }
        Self::new(n, gens).expect("n >= 1")
    }

    /// Generated by the 3-cycles `(0 1 i)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (2..n as u32)
            .map(|i| Permutation::from_cycles(n, &[&[0, 1, i]]).unwrap())
            .collect();
        Self::new(n, gens).expect("n >= 1")
    }

    /// The Klein four-group acting on itself by translation.
    pub fn klein_regular() -> Self {
        Self::parse("(0 1)(2 3);(0 2)(1 3)", 4).unwrap()
    }

    /// Symmetries of the `n`-gon with vertices `0..n` in cyclic order.
    pub fn dihedral(n: usize) -> Self {
        let rot = Permutation { images: (0..n as u32).map(|i| (i + 1) % n as u32).collect() };
        let refl = Permutation { images: (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect() };
        Self::new(n, vec![rot, refl]).expect("n >= 1")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The enumerated closure, identity first.
    pub fn elements(&self) -> Result<&[Permutation], GaloisError> {
        self.elements
            .get_or_init(|| close(self.n, &self.generators, self.cap))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<usize, GaloisError> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, GaloisError> {
        Ok(self.elements()?.contains(g))
    }

    /// Extremum over the group of `λ(g)` (`Max`) or `λ′(g)` (`Min`).
    pub fn lambda(&self, which: Extremum) -> Result<usize, GaloisError> {
        let els = self.elements()?;
        let it = els.par_iter();
        Ok(match which {
            Extremum::Max => it.map(Permutation::lambda_max).max(),
            Extremum::Min => it.map(Permutation::lambda_min).max(),
        }
        .unwrap_or(0))
    }

    /// `σ = 1 − λ(G)/n`, in `[0, 1)`.
    pub fn slope(&self) -> Result<Rational, GaloisError> {
        Ok(Rational::one() - Rational::new(self.lambda(Extremum::Max)?.into(), self.n.into()))
    }

    /// `σ′ = 1 − λ′(G)/n`, in `[0, 1]`.
    pub fn slope_prime(&self) -> Result<Rational, GaloisError> {
        Ok(Rational::one() - Rational::new(self.lambda(Extremum::Min)?.into(), self.n.into()))
    }

    pub fn has_bisecting(&self) -> Result<bool, GaloisError> {
        Ok(self.elements()?.par_iter().any(Permutation::bisects))
    }

    /// Fraction of group elements satisfying `predicate`. The density reading
    /// needs a conjugation-invariant predicate; that is not checked.
    pub fn chebotarev_fraction<P>(&self, predicate: P) -> Result<Rational, GaloisError>
    where
        P: Fn(&Permutation) -> bool + Sync,
    {
        let els = self.elements()?;
        let hits = els.par_iter().filter(|g| predicate(g)).count();
        Ok(Rational::new(hits.into(), els.len().into()))
    }

    /// The action on a `G`-stable partition into equal-size blocks. Block `j`
    /// of the result is `blocks[j]`.
    pub fn induced_block_action(&self, blocks: &[Vec<usize>]) -> Result<PermGroupAction, GaloisError> {
        let system = BlockSystem::new(self.n, blocks)?;
        let gens = self
            .generators
            .iter()
            .map(|g| system.induced(g))
            .collect::<Result<Vec<_>, _>>()?;
        PermGroupAction::with_cap(system.len(), gens, self.cap)
    }
}

fn close(n: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>, GaloisError> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    // finite group: closure under multiplication by generators already contains inverses
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(GaloisError::CapExceeded { cap });
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

/// A partition of `{0, .., n-1}` into blocks of one common size.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self, GaloisError> {
        let bad = |m: &str| GaloisError::BadBlocks(m.to_string());
        if blocks.is_empty() {
            return Err(bad("no blocks"));
        }
        let size = blocks[0].len();
        if size == 0 || blocks.iter().any(|b| b.len() != size) {
            return Err(bad("blocks must be non-empty and of equal size"));
        }
        let mut block_of = vec![usize::MAX; n];
        for (j, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= n || block_of[x] != usize::MAX {
                    return Err(bad("blocks must partition the point set"));
                }
                block_of[x] = j;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(bad("blocks must cover every point"));
        }
        Ok(BlockSystem { blocks: blocks.to_vec(), block_of })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// Image of `g` on block indices; fails if `g` does not permute blocks.
    pub fn induced(&self, g: &Permutation) -> Result<Permutation, GaloisError> {
        let mut images = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let target = self.block_of[g.apply(b[0])];
            if b.iter().any(|&x| self.block_of[g.apply(x)] != target) {
                return Err(GaloisError::BadBlocks(format!("{g} does not preserve the partition")));
            }
            images.push(target as u32);
        }
        Permutation::new(images)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisGroupKind {
    Symmetric,
    Alternating,
    Cyclic,
    Klein,
    Dihedral,
    #[default]
    Other,
}

/// Field data feeding the slope shortcut rules: `K` is the coefficient
/// field, `F` the ground field and `F̃` its Galois closure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractMetadata {
    pub deg_k: u64,
    pub deg_f: u64,
    #[serde(default)]
    pub deg_f_tilde: Option<u64>,
    /// Group of the Galois closure of `K` over `Q`.
    #[serde(default)]
    pub galois_group_kind: GaloisGroupKind,
    #[serde(default, with = "bigint_opt")]
    pub disc_k: Option<BigInt>,
    #[serde(default, with = "bigint_opt")]
    pub disc_f: Option<BigInt>,
    /// Known linear disjointness of the Galois closures of `K` and `F`.
    #[serde(default)]
    pub linearly_disjoint: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractFact {
    SlopeZeroOverF,
    SlopeZeroOverFTilde,
    SlopeEqualsRationalBase,
    BisectionTransfers,
}

/// Facts derivable from the three shortcut rules:
///
/// 1. `[K:Q]` prime and not dividing `[F:Q]` gives `σ_F(K) = 0`;
/// 2. symmetric Galois group for `K` and `[F̃:Q]` odd gives `σ_F̃(K) = 0`;
/// 3. linearly disjoint closures (implied by coprime discriminants) give
///    `σ_F(K) = σ_Q(K)` and transfer of bisecting elements.
pub fn interact_rules(meta: &InteractMetadata) -> BTreeSet<InteractFact> {
    let mut facts = BTreeSet::new();
    if meta.deg_k > 0 && meta.deg_f > 0 && is_prime_u64(meta.deg_k) && !meta.deg_f.is_multiple_of(meta.deg_k) {
        facts.insert(InteractFact::SlopeZeroOverF);
    }
    if meta.galois_group_kind == GaloisGroupKind::Symmetric {
        if let Some(dt) = meta.deg_f_tilde {
            if dt % 2 == 1 {
                facts.insert(InteractFact::SlopeZeroOverFTilde);
            }
        }
    }
    let coprime = match (&meta.disc_k, &meta.disc_f) {
        (Some(a), Some(b)) => !a.is_zero() && !b.is_zero() && a.gcd(b).is_one(),
        _ => false,
    };
    if coprime || meta.linearly_disjoint == Some(true) {
        facts.insert(InteractFact::SlopeEqualsRationalBase);
        facts.insert(InteractFact::BisectionTransfers);
    }
    facts
}
