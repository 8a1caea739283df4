//! Permutation groups from generators: exact order, membership, orbits,
//! block systems, primitivity, the two-element generation test, and
//! conjugacy-class representatives under an intransitive subgroup.
//!
//! Orders and membership come from a deterministic stabilizer chain with the
//! fixed base 1, 2, …, n, so identical generator lists always produce
//! identical chains, transversals, and enumeration orders. Groups are
//! immutable after construction and all queries are read-only.

mod necklace;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::perm::{Parity, Permutation};

/// Errors from group construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// A group needs at least one generator (use the identity for the trivial group).
    #[error("empty generator list")]
    EmptyGenerators,
    /// Generators (or query arguments) of different degrees were mixed.
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u16, right: u16 },
    /// An operation that needs a transitive group got an intransitive one.
    #[error("group is not transitive")]
    Intransitive,
    /// A block system was requested through a repeated point.
    #[error("the two seed points must differ (both are {0})")]
    SamePoint(u16),
    /// The degree is too small for the query.
    #[error("degree {0} is too small for this query")]
    DegreeTooSmall(u16),
    /// An alternating-group generation test received an odd generator.
    #[error("odd generator {0} is not an element of the alternating group")]
    OddGeneratorForAlt(String),
    /// A subgroup argument is not actually contained in the group.
    #[error("claimed subgroup is not contained in the group: {0} is not a member")]
    NotSubgroup(String),
    /// A permutation does not preserve the given block system.
    #[error("permutation does not preserve the block system")]
    BlockSystemNotPreserved,
    /// A cycle index was out of range.
    #[error("cycle index {index} out of range: permutation has {count} non-trivial cycles")]
    CycleIndexOutOfRange { index: usize, count: usize },
    /// The generic class-enumeration fallback refuses to list this many elements.
    #[error("group order {order} exceeds the generic enumeration bound {bound}")]
    TooLargeForEnumeration { order: String, bound: u64 },
}

/// Whether the ambient group is the full symmetric group or its alternating
/// subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GroupKind {
    /// The symmetric group Sym(n).
    Sym,
    /// The alternating group Alt(n).
    Alt,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Sym => write!(f, "Sym"),
            GroupKind::Alt => write!(f, "Alt"),
        }
    }
}

/// One level of the stabilizer chain: the subgroup fixing the base points of
/// all earlier levels, acting on the orbit of its own base point.
#[derive(Debug, Clone)]
struct Level {
    base: u16,
    /// Strong generators for this level (they fix all earlier base points).
    gens: Vec<Permutation>,
    /// Orbit of `base` in discovery order; `orbit[0] == base`.
    orbit: Vec<u16>,
    /// `transversal[p-1]` maps `base ↦ p` for p in the orbit.
    transversal: Vec<Option<Permutation>>,
    /// `processed[j]` = how many of `gens` have been closed against `orbit[j]`.
    processed: Vec<usize>,
}

impl Level {
    fn new(base: u16, degree: u16) -> Self {
        let mut transversal = vec![None; degree as usize];
        transversal[base as usize - 1] = Some(Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            processed: vec![0],
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain for
/// exact order and membership. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: u16,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermutationGroup {
    /// Builds the group generated by the given permutations.
    ///
    /// The stabilizer chain uses the fixed base 1, 2, …, n and deterministic
    /// closure order, so the same generator list always yields the same
    /// chain.
    ///
    /// # Errors
    /// Fails on an empty list or mismatched degrees.
    pub fn build(generators: Vec<Permutation>) -> Result<Self, GroupError> {
        let first = generators.first().ok_or(GroupError::EmptyGenerators)?;
        let degree = first.degree();
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let mut levels: Vec<Level> = (1..=degree).map(|b| Level::new(b, degree)).collect();
        for g in &generators {
            add_strong_generator(&mut levels, g.clone());
        }
        let order = levels
            .iter()
            .fold(BigUint::from(1u8), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(PermutationGroup { degree, generators, levels, order })
    }

    /// The number of points acted on.
    #[must_use]
    pub fn degree(&self) -> u16 {
        self.degree
    }

    /// The generators the group was built from.
    #[must_use]
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The exact group order.
    #[must_use]
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The orbit sizes along the stabilizer chain (base 1, 2, …, n); their
    /// product is the order.
    #[must_use]
    pub fn chain_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Membership test by sifting through the stabilizer chain.
    ///
    /// # Errors
    /// Fails on degree mismatch.
    pub fn contains(&self, p: &Permutation) -> Result<bool, GroupError> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch { left: self.degree, right: p.degree() });
        }
        Ok(sift(&self.levels, 0, p.clone()).is_none())
    }

    /// True iff every generator of `h` is a member, i.e. ⟨h⟩ ≤ self.
    ///
    /// # Errors
    /// Fails on degree mismatch.
    pub fn is_supergroup_of(&self, h: &PermutationGroup) -> Result<bool, GroupError> {
        for g in &h.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The orbit partition of `{1..n}`, each orbit sorted ascending, orbits
    /// ordered by smallest point.
    #[must_use]
    pub fn orbits(&self) -> Vec<Vec<u16>> {
        let n = self.degree as usize;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=self.degree {
            if seen[start as usize - 1] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize - 1] = true;
            let mut i = 0;
            while i < orbit.len() {
                let p = orbit[i];
                for g in &self.generators {
                    let q = g.apply(p);
                    if !seen[q as usize - 1] {
                        seen[q as usize - 1] = true;
                        orbit.push(q);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// True iff the group has a single orbit on points.
    #[must_use]
    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Visits every group element exactly once, in the deterministic order
    /// induced by the stabilizer chain (deepest level varies first).
    pub fn for_each_element(&self, f: &mut impl FnMut(&Permutation)) {
        let nontrivial: Vec<&Level> =
            self.levels.iter().filter(|l| l.orbit.len() > 1).collect();
        let id = Permutation::identity(self.degree);
        visit_elements(&nontrivial, nontrivial.len(), &id, f);
    }

    /// Streams the elements like [`Self::for_each_element`] but lets the
    /// visitor break out early; returns the break value if one was produced.
    /// The visiting order is the same deterministic order as
    /// [`Self::for_each_element`].
    pub fn try_for_each_element<B>(
        &self,
        f: &mut impl FnMut(&Permutation) -> std::ops::ControlFlow<B>,
    ) -> Option<B> {
        let nontrivial: Vec<&Level> =
            self.levels.iter().filter(|l| l.orbit.len() > 1).collect();
        let id = Permutation::identity(self.degree);
        match try_visit_elements(&nontrivial, nontrivial.len(), &id, f) {
            std::ops::ControlFlow::Break(b) => Some(b),
            std::ops::ControlFlow::Continue(()) => None,
        }
    }

    /// Collects all elements; intended for small groups.
    #[must_use]
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_element(&mut |p| out.push(p.clone()));
        out
    }

    /// A uniformly random element (product of uniformly chosen coset
    /// representatives along the chain).
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        // Deepest factors apply first under the right-action convention.
        for level in self.levels.iter().rev() {
            if level.orbit.len() == 1 {
                continue;
            }
            let p = level.orbit[rng.gen_range(0..level.orbit.len())];
            let u = level.transversal[p as usize - 1].as_ref().expect("orbit point has a coset rep");
            acc = acc.compose(u).expect("equal degrees");
        }
        acc
    }
}

/// Visits products u_(deepest)·…·u_(shallowest) over all transversal choices.
fn visit_elements(
    levels: &[&Level],
    depth: usize,
    acc: &Permutation,
    f: &mut impl FnMut(&Permutation),
) {
    if depth == 0 {
        f(acc);
        return;
    }
    let level = levels[depth - 1];
    for &p in &level.orbit {
        let u = level.transversal[p as usize - 1].as_ref().expect("orbit point has a coset rep");
        let next = acc.compose(u).expect("equal degrees");
        visit_elements(levels, depth - 1, &next, f);
    }
}

fn try_visit_elements<B>(
    levels: &[&Level],
    depth: usize,
    acc: &Permutation,
    f: &mut impl FnMut(&Permutation) -> std::ops::ControlFlow<B>,
) -> std::ops::ControlFlow<B> {
    if depth == 0 {
        return f(acc);
    }
    let level = levels[depth - 1];
    for &p in &level.orbit {
        let u = level.transversal[p as usize - 1].as_ref().expect("orbit point has a coset rep");
        let next = acc.compose(u).expect("equal degrees");
        if let std::ops::ControlFlow::Break(b) = try_visit_elements(levels, depth - 1, &next, f) {
            return std::ops::ControlFlow::Break(b);
        }
    }
    std::ops::ControlFlow::Continue(())
}

/// Sifts `h` through the chain starting at `start`. Returns `None` when the
/// residue is the identity (h is in the subgroup), otherwise the level where
/// sifting stuck together with the non-trivial residue (which fixes all
/// earlier base points).
fn sift(levels: &[Level], start: usize, h: Permutation) -> Option<(usize, Permutation)> {
    let mut h = h;
    for (i, level) in levels.iter().enumerate().skip(start) {
        let p = h.apply(level.base);
        if p == level.base {
            continue;
        }
        match &level.transversal[p as usize - 1] {
            None => return Some((i, h)),
            Some(u) => {
                h = h.compose(&u.inverse()).expect("equal degrees");
            }
        }
    }
    debug_assert!(h.is_identity(), "residue must be trivial after fixing the whole base");
    None
}

/// Adds a strong generator and restores chain completeness. The generator
/// belongs to every level whose base points it fixes plus the first level it
/// moves: it fixes the shallower bases but can still extend their orbits
/// through non-base points.
fn add_strong_generator(levels: &mut Vec<Level>, g: Permutation) {
    if g.is_identity() {
        return;
    }
    let first_moved = (0..levels.len())
        .find(|&i| g.apply(levels[i].base) != levels[i].base)
        .expect("a non-identity permutation moves some base point");
    for level in levels.iter_mut().take(first_moved + 1) {
        level.gens.push(g.clone());
    }
    for i in (0..=first_moved).rev() {
        close_level(levels, i);
    }
}

/// Re-closes the orbit of `level` and sifts every unprocessed Schreier
/// generator, recursing into deeper levels as needed.
fn close_level(levels: &mut Vec<Level>, level: usize) {
    let mut j = 0;
    loop {
        let (orbit_len, gens_len) = {
            let l = &levels[level];
            (l.orbit.len(), l.gens.len())
        };
        if j >= orbit_len {
            break;
        }
        while levels[level].processed[j] < gens_len {
            let gi = levels[level].processed[j];
            levels[level].processed[j] += 1;
            let p = levels[level].orbit[j];
            let s = levels[level].gens[gi].clone();
            let q = s.apply(p);
            if levels[level].transversal[q as usize - 1].is_none() {
                let u_p = levels[level].transversal[p as usize - 1]
                    .as_ref()
                    .expect("orbit point has a coset rep")
                    .clone();
                let u_q = u_p.compose(&s).expect("equal degrees");
                levels[level].transversal[q as usize - 1] = Some(u_q);
                levels[level].orbit.push(q);
                levels[level].processed.push(0);
            }
            // Schreier generator u_p · s · u_q⁻¹ fixes this level's base.
            let u_p = levels[level].transversal[p as usize - 1]
                .as_ref()
                .expect("orbit point has a coset rep")
                .clone();
            let u_q = levels[level].transversal[q as usize - 1]
                .as_ref()
                .expect("orbit point has a coset rep")
                .clone();
            let schreier = u_p
                .compose(&s)
                .and_then(|t| t.compose(&u_q.inverse()))
                .expect("equal degrees");
            if let Some((_, residue)) = sift(levels, level + 1, schreier) {
                add_strong_generator(levels, residue);
            }
        }
        j += 1;
    }
}

/// The symmetric group Sym(n) with its natural two generators.
///
/// # Panics
/// Panics if `n == 0`.
#[must_use]
pub fn symmetric_group(n: u16) -> PermutationGroup {
    let gens = if n < 2 {
        vec![Permutation::identity(n)]
    } else {
        let transposition = Permutation::from_disjoint_cycles(n, &[vec![1, 2]]).expect("valid");
        let cycle = Permutation::from_disjoint_cycles(n, &[(1..=n).collect()]).expect("valid");
        vec![transposition, cycle]
    };
    PermutationGroup::build(gens).expect("valid generators")
}

/// The alternating group Alt(n).
///
/// # Panics
/// Panics if `n == 0`.
#[must_use]
pub fn alternating_group(n: u16) -> PermutationGroup {
    let gens = if n < 3 {
        vec![Permutation::identity(n)]
    } else if n % 2 == 1 {
        // An n-cycle is even for odd n.
        vec![
            Permutation::from_disjoint_cycles(n, &[vec![1, 2, 3]]).expect("valid"),
            Permutation::from_disjoint_cycles(n, &[(1..=n).collect()]).expect("valid"),
        ]
    } else {
        // An (n−1)-cycle is even for even n.
        vec![
            Permutation::from_disjoint_cycles(n, &[vec![1, 2, 3]]).expect("valid"),
            Permutation::from_disjoint_cycles(n, &[(2..=n).collect()]).expect("valid"),
        ]
    };
    PermutationGroup::build(gens).expect("valid generators")
}

/// The ambient group of the given kind.
#[must_use]
pub fn ambient_group(n: u16, kind: GroupKind) -> PermutationGroup {
    match kind {
        GroupKind::Sym => symmetric_group(n),
        GroupKind::Alt => alternating_group(n),
    }
}

/// The intransitive subgroup (Sym(k) × Sym(n−k)) ∩ G stabilizing
/// `{1..k} | {k+1..n}`, for G of the given kind.
///
/// # Panics
/// Panics unless `1 ≤ k < n`.
#[must_use]
pub fn intransitive_subgroup(n: u16, k: u16, kind: GroupKind) -> PermutationGroup {
    assert!(k >= 1 && k < n, "need 1 ≤ k < n, got k={k}, n={n}");
    let mut gens: Vec<Permutation> = Vec::new();
    let cycle = |points: Vec<u16>| Permutation::from_disjoint_cycles(n, &[points]).expect("valid");
    match kind {
        GroupKind::Sym => {
            if k >= 2 {
                gens.push(cycle(vec![1, 2]));
                gens.push(cycle((1..=k).collect()));
            }
            if n - k >= 2 {
                gens.push(cycle(vec![k + 1, k + 2]));
                gens.push(cycle((k + 1..=n).collect()));
            }
        }
        GroupKind::Alt => {
            if k >= 3 {
                gens.push(cycle(vec![1, 2, 3]));
                if k % 2 == 1 {
                    gens.push(cycle((1..=k).collect()));
                } else {
                    gens.push(cycle((2..=k).collect()));
                }
            }
            if n - k >= 3 {
                gens.push(cycle(vec![k + 1, k + 2, k + 3]));
                if (n - k) % 2 == 1 {
                    gens.push(cycle((k + 1..=n).collect()));
                } else {
                    gens.push(cycle((k + 2..=n).collect()));
                }
            }
            if k >= 2 && n - k >= 2 {
                // An odd·odd element linking the two even halves.
                gens.push(
                    Permutation::from_disjoint_cycles(n, &[vec![1, 2], vec![k + 1, k + 2]])
                        .expect("valid"),
                );
            }
        }
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    PermutationGroup::build(gens).expect("valid generators")
}

/// A partition of `{1..n}` into equal-size blocks permuted by a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    degree: u16,
    /// Blocks sorted by smallest member, each sorted ascending.
    blocks: Vec<Vec<u16>>,
}

impl BlockSystem {
    /// Builds a block system after checking the partition axioms: disjoint
    /// equal-size parts covering `{1..n}`.
    ///
    /// # Errors
    /// Fails (with a description) if the parts do not partition `{1..n}`
    /// into equal sizes.
    pub fn new(degree: u16, mut blocks: Vec<Vec<u16>>) -> Result<Self, String> {
        if blocks.is_empty() {
            return Err("no blocks".to_string());
        }
        let size = blocks[0].len();
        let mut seen = vec![false; degree as usize];
        for block in &mut blocks {
            block.sort_unstable();
            if block.len() != size {
                return Err(format!("block sizes differ: {} vs {size}", block.len()));
            }
            for &p in block.iter() {
                if p == 0 || p > degree {
                    return Err(format!("point {p} out of range 1..={degree}"));
                }
                if seen[p as usize - 1] {
                    return Err(format!("point {p} appears in two blocks"));
                }
                seen[p as usize - 1] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("blocks do not cover {1..n}".to_string());
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(BlockSystem { degree, blocks })
    }

    /// The ambient degree n.
    #[must_use]
    pub fn degree(&self) -> u16 {
        self.degree
    }

    /// The blocks, sorted by smallest member.
    #[must_use]
    pub fn blocks(&self) -> &[Vec<u16>] {
        &self.blocks
    }

    /// The common block size d.
    #[must_use]
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// True iff there is only one block or all blocks are singletons.
    #[must_use]
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 || self.block_size() == 1
    }

    /// Index of the block containing `p`.
    ///
    /// # Panics
    /// Panics if `p` is outside `1..=degree`.
    #[must_use]
    pub fn block_index_of(&self, p: u16) -> usize {
        assert!(p >= 1 && p <= self.degree);
        self.blocks
            .iter()
            .position(|b| b.binary_search(&p).is_ok())
            .expect("blocks partition {1..n}")
    }

    /// True iff `g` maps every block onto a block (the block axiom).
    #[must_use]
    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        for block in &self.blocks {
            let target = self.block_index_of(g.apply(block[0]));
            for &p in block {
                if self.block_index_of(g.apply(p)) != target {
                    return false;
                }
            }
        }
        true
    }
}

impl serde::Serialize for BlockSystem {
    /// Serializes as `{"degree": n, "blocks": [[…], …]}`.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("BlockSystem", 2)?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("blocks", &self.blocks)?;
        s.end()
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{{")?;
            for (j, p) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// The finest block system of a transitive group in which `a` and `b` share
/// a block (union-refinement over the generator action).
///
/// # Errors
/// Fails if the group is intransitive or `a == b`.
pub fn minimal_block_system(
    g: &PermutationGroup,
    a: u16,
    b: u16,
) -> Result<BlockSystem, GroupError> {
    if a == b {
        return Err(GroupError::SamePoint(a));
    }
    if !g.is_transitive() {
        return Err(GroupError::Intransitive);
    }
    let n = g.degree() as usize;
    let mut parent: Vec<u16> = (0..n as u16).collect();
    fn find(parent: &mut Vec<u16>, x: u16) -> u16 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut queue: Vec<(u16, u16)> = vec![(a - 1, b - 1)];
    parent[b as usize - 1] = find(&mut parent, a - 1);
    while let Some((u, v)) = queue.pop() {
        for gen in g.generators() {
            let iu = gen.apply(u + 1) - 1;
            let iv = gen.apply(v + 1) - 1;
            let ru = find(&mut parent, iu);
            let rv = find(&mut parent, iv);
            if ru != rv {
                parent[rv as usize] = ru;
                queue.push((iu, iv));
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<u16, Vec<u16>> = std::collections::BTreeMap::new();
    for p in 0..n as u16 {
        let r = find(&mut parent, p);
        by_root.entry(r).or_default().push(p + 1);
    }
    let blocks: Vec<Vec<u16>> = by_root.into_values().collect();
    BlockSystem::new(g.degree(), blocks).map_err(|_| GroupError::Intransitive)
}

/// Whether a transitive group is primitive; if not, a witnessing nontrivial
/// block system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    Imprimitive(BlockSystem),
}

/// Decides primitivity of a transitive group of degree ≥ 2 by testing
/// `minimal_block_system(g, 1, b)` for every b ≠ 1.
///
/// # Errors
/// Fails on intransitive input or degree < 2.
pub fn is_primitive(g: &PermutationGroup) -> Result<Primitivity, GroupError> {
    if g.degree() < 2 {
        return Err(GroupError::DegreeTooSmall(g.degree()));
    }
    if !g.is_transitive() {
        return Err(GroupError::Intransitive);
    }
    for b in 2..=g.degree() {
        let system = minimal_block_system(g, 1, b)?;
        if !system.is_trivial() {
            return Ok(Primitivity::Imprimitive(system));
        }
    }
    Ok(Primitivity::Primitive)
}

/// The cycle induced on blocks by the `cycle_index`-th non-trivial cycle of
/// `h` (0-based, cycles in canonical order). Returns the visited block
/// indices; the cycle's length always divides the point-cycle's length.
///
/// # Errors
/// Fails if `h` does not preserve the system or the index is out of range.
pub fn induced_block_cycle(
    h: &Permutation,
    cycle_index: usize,
    system: &BlockSystem,
) -> Result<Vec<usize>, GroupError> {
    if !system.is_preserved_by(h) {
        return Err(GroupError::BlockSystemNotPreserved);
    }
    let cycles = h.cycles();
    let cycle = cycles.get(cycle_index).ok_or(GroupError::CycleIndexOutOfRange {
        index: cycle_index,
        count: cycles.len(),
    })?;
    let first = system.block_index_of(cycle[0]);
    let mut out = vec![first];
    for &p in &cycle[1..] {
        let blk = system.block_index_of(p);
        if blk == first {
            break;
        }
        out.push(blk);
    }
    debug_assert_eq!(
        cycle.len() % out.len(),
        0,
        "induced block-cycle length must divide the point-cycle length"
    );
    Ok(out)
}

/// The verdict of a two-element generation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    /// ⟨x,y⟩ is the full symmetric group.
    Full,
    /// ⟨x,y⟩ is the alternating group (and both generators are even).
    Alternating,
    /// ⟨x,y⟩ is a proper subgroup of the target.
    Proper,
}

/// Outcome of [`generates_pair`]: the verdict together with the exact order
/// of ⟨x,y⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationOutcome {
    pub verdict: Verdict,
    pub order: BigUint,
}

impl GenerationOutcome {
    /// True iff the verdict matches the target kind ("the pair generates G").
    #[must_use]
    pub fn generates(&self, kind: GroupKind) -> bool {
        match kind {
            GroupKind::Sym => self.verdict == Verdict::Full,
            GroupKind::Alt => self.verdict == Verdict::Alternating,
        }
    }
}

/// Decides what ⟨x,y⟩ is: the full symmetric group, the alternating group,
/// or a proper subgroup. The decision is by exact order comparison against
/// n! and n!/2 — never by primitivity heuristics.
///
/// # Errors
/// Fails on degree mismatch, or on an odd generator when `kind` is `Alt`.
pub fn generates_pair(
    x: &Permutation,
    y: &Permutation,
    kind: GroupKind,
) -> Result<GenerationOutcome, GroupError> {
    if x.degree() != y.degree() {
        return Err(GroupError::DegreeMismatch { left: x.degree(), right: y.degree() });
    }
    if kind == GroupKind::Alt {
        for p in [x, y] {
            if p.parity() == Parity::Odd {
                return Err(GroupError::OddGeneratorForAlt(p.to_string()));
            }
        }
    }
    let group = PermutationGroup::build(vec![x.clone(), y.clone()])?;
    let n = x.degree();
    let both_even = x.parity() == Parity::Even && y.parity() == Parity::Even;
    let verdict = verdict_from_orbit_sizes(&group.chain_orbit_sizes(), n, both_even);
    Ok(GenerationOutcome { verdict, order: group.order().clone() })
}

/// Classifies a chain's orbit-size profile: Sym(n) has profile
/// (n, n−1, …, 1) and Alt(n) has (n, n−1, …, 3, 1, 1).
fn verdict_from_orbit_sizes(sizes: &[usize], n: u16, both_even: bool) -> Verdict {
    let n = n as usize;
    let full = (0..n).all(|i| sizes[i] == n - i);
    if full {
        return Verdict::Full;
    }
    if n >= 2 {
        let alt = (0..n - 2).all(|i| sizes[i] == n - i) && sizes[n - 2] == 1 && sizes[n - 1] == 1;
        if alt && both_even {
            return Verdict::Alternating;
        }
    }
    Verdict::Proper
}

/// Fast in-process form of [`generates_pair`]: true iff ⟨x,y⟩ equals the
/// ambient group of the given kind. Callers must already know x and y are
/// members of that ambient group. Runs cheap transitivity and parity
/// prechecks before building a chain.
#[must_use]
pub fn generates_pair_fast(x: &Permutation, y: &Permutation, kind: GroupKind) -> bool {
    let n = x.degree();
    debug_assert_eq!(n, y.degree());
    // Parity precheck: two even elements can never generate Sym(n).
    let x_even = x.is_even();
    let y_even = y.is_even();
    match kind {
        GroupKind::Sym => {
            if n >= 2 && x_even && y_even {
                return false;
            }
        }
        GroupKind::Alt => {
            debug_assert!(x_even && y_even, "alternating generators must be even");
        }
    }
    // Transitivity precheck: union the edges p—p^x and p—p^y.
    if !pair_is_transitive(x, y) {
        return n <= 1;
    }
    let group = match PermutationGroup::build(vec![x.clone(), y.clone()]) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let verdict = verdict_from_orbit_sizes(&group.chain_orbit_sizes(), n, x_even && y_even);
    match kind {
        GroupKind::Sym => verdict == Verdict::Full,
        GroupKind::Alt => verdict == Verdict::Alternating,
    }
}

/// Union-find transitivity test for ⟨x,y⟩ without building a chain.
fn pair_is_transitive(x: &Permutation, y: &Permutation) -> bool {
    let n = x.degree() as usize;
    let mut parent: Vec<u16> = (0..n as u16).collect();
    fn find(parent: &mut [u16], v: u16) -> u16 {
        let mut root = v;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = v;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    let mut components = n;
    for p in 0..n as u16 {
        for img in [x.apply(p + 1), y.apply(p + 1)] {
            let a = find(&mut parent, p);
            let b = find(&mut parent, img - 1);
            if a != b {
                parent[b as usize] = a;
                components -= 1;
            }
        }
    }
    components == 1
}

/// Bound on |G| for the generic brute-force path of [`m_class_reps`].
const GENERIC_ENUMERATION_BOUND: u64 = 5_000_000;

/// One representative per M-conjugacy class of the elements of G \ M.
///
/// When G is Sym(n) or Alt(n) and M is the intransitive subgroup
/// (Sym(k) × Sym(n−k)) ∩ G, classes are enumerated directly from their
/// invariant (the multiset of side-colored cycle words), which scales far
/// beyond brute force; otherwise a generic orbit partition over the listed
/// elements of G is used.
///
/// # Errors
/// Fails if M is not a subgroup of G, or if the generic path would have to
/// enumerate more than [`GENERIC_ENUMERATION_BOUND`] elements.
pub fn m_class_reps(
    g: &PermutationGroup,
    m: &PermutationGroup,
) -> Result<Vec<Permutation>, GroupError> {
    if g.degree() != m.degree() {
        return Err(GroupError::DegreeMismatch { left: g.degree(), right: m.degree() });
    }
    for gen in m.generators() {
        if !g.contains(gen)? {
            return Err(GroupError::NotSubgroup(gen.to_string()));
        }
    }
    if let Some((k, kind)) = intransitive_scenario_shape(g, m) {
        return Ok(necklace::class_reps(g.degree(), k, kind));
    }
    // Generic fallback: list G and partition G \ M into M-conjugacy orbits.
    let bound = BigUint::from(GENERIC_ENUMERATION_BOUND);
    if *g.order() > bound {
        return Err(GroupError::TooLargeForEnumeration {
            order: g.order().to_string(),
            bound: GENERIC_ENUMERATION_BOUND,
        });
    }
    let mut reps = Vec::new();
    let mut classified: HashSet<Permutation> = HashSet::new();
    let mut result: Result<(), GroupError> = Ok(());
    g.for_each_element(&mut |x| {
        if result.is_err() || classified.contains(x) {
            return;
        }
        match m.contains(x) {
            Err(e) => result = Err(e),
            Ok(true) => {}
            Ok(false) => {
                // BFS over the M-class of x using M's generators.
                let mut class = vec![x.clone()];
                classified.insert(x.clone());
                let mut i = 0;
                while i < class.len() {
                    for gen in m.generators() {
                        let conj = class[i].conjugate(gen).expect("equal degrees");
                        if classified.insert(conj.clone()) {
                            class.push(conj);
                        }
                    }
                    i += 1;
                }
                let rep = class.iter().min().expect("nonempty class").clone();
                reps.push(rep);
            }
        }
    });
    result?;
    Ok(reps)
}

/// Detects the (k, kind) shape where G is Sym(n)/Alt(n) and M is the
/// intransitive subgroup over `{1..k} | {k+1..n}`; returns None otherwise.
fn intransitive_scenario_shape(
    g: &PermutationGroup,
    m: &PermutationGroup,
) -> Option<(u16, GroupKind)> {
    let n = g.degree();
    if n < 2 {
        return None;
    }
    let kind = if *g.order() == factorial(n) {
        GroupKind::Sym
    } else if n >= 3 && *g.order() == factorial(n) / BigUint::from(2u8) {
        GroupKind::Alt
    } else {
        return None;
    };
    let orbits = m.orbits();
    if orbits.len() != 2 {
        return None;
    }
    let k = orbits[0].len() as u16;
    let first: Vec<u16> = (1..=k).collect();
    let second: Vec<u16> = (k + 1..=n).collect();
    if orbits[0] != first || orbits[1] != second {
        return None;
    }
    let expected = match kind {
        GroupKind::Sym => factorial(k) * factorial(n - k),
        GroupKind::Alt => factorial(k) * factorial(n - k) / BigUint::from(2u8),
    };
    if *m.order() != expected {
        return None;
    }
    Some((k, kind))
}

/// n! as an exact integer.
#[must_use]
pub fn factorial(n: u16) -> BigUint {
    (1..=u64::from(n)).fold(BigUint::from(1u8), |acc, i| acc * BigUint::from(i))
}

/// Exact data for one M-conjugacy class of Sym(n) \ M, where M is the
/// intransitive subgroup Sym(k) × Sym(n−k) over `{1..k} | {k+1..n}`.
#[derive(Debug, Clone)]
pub struct ClassStatistics {
    /// The canonical representative; it always maps 1 to k+1.
    pub representative: Permutation,
    /// |C_M(representative)|, computed from the class invariant.
    pub centralizer_order: BigUint,
    /// The class size |M| / |C_M(representative)| (orbit–stabilizer).
    pub class_size: BigUint,
}

/// Statistics for every M-conjugacy class of Sym(n) \ M over the split
/// `{1..k} | {k+1..n}`: one canonical representative per class with its
/// exact centralizer order and class size. Each representative's invariant
/// is recomputed from the permutation itself and must reproduce the
/// enumerated class invariant, so the entries satisfy two checkable
/// identities: `centralizer_order · class_size = k!(n−k)!` per class, and
/// `Σ class_size = n! − k!(n−k)!` over the whole list.
///
/// # Errors
/// [`GroupError::DegreeTooSmall`] unless n ≥ 2 and 0 < k < n.
pub fn m_class_statistics(n: u16, k: u16) -> Result<Vec<ClassStatistics>, GroupError> {
    if n < 2 || k == 0 || k >= n {
        return Err(GroupError::DegreeTooSmall(n));
    }
    let mut out = Vec::new();
    for shape in necklace::enumerate_shapes(n, k) {
        let representative = shape.canonical_rep(n, k);
        debug_assert_eq!(
            necklace::ClassShape::of(&representative, k),
            shape,
            "the canonical representative must reproduce its class invariant"
        );
        out.push(ClassStatistics {
            centralizer_order: shape.centralizer_order_in_m(),
            class_size: shape.class_size_sym(n, k),
            representative,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str, n: u16) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn build_s5_from_textbook_generators() {
        let g = PermutationGroup::build(vec![p("(1,2)", 5), p("(1,2,3,4,5)", 5)]).unwrap();
        assert_eq!(*g.order(), BigUint::from(120u32));
    }

    #[test]
    fn build_trivial_and_cyclic() {
        let id = PermutationGroup::build(vec![Permutation::identity(4)]).unwrap();
        assert_eq!(*id.order(), BigUint::from(1u8));
        let c3 = PermutationGroup::build(vec![p("(1,2,3)", 3)]).unwrap();
        assert_eq!(*c3.order(), BigUint::from(3u8));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(PermutationGroup::build(vec![]).unwrap_err(), GroupError::EmptyGenerators);
        let err = PermutationGroup::build(vec![Permutation::identity(3), Permutation::identity(4)])
            .unwrap_err();
        assert!(matches!(err, GroupError::DegreeMismatch { .. }));
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        for n in 1..=8u16 {
            assert_eq!(*symmetric_group(n).order(), factorial(n), "Sym({n})");
        }
        for n in 3..=8u16 {
            assert_eq!(
                *alternating_group(n).order(),
                factorial(n) / BigUint::from(2u8),
                "Alt({n})"
            );
        }
    }

    #[test]
    fn intransitive_subgroup_orders() {
        // (S_4 × S_2) in S_6 has order 48.
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        assert_eq!(*m.order(), BigUint::from(48u32));
        let m_alt = intransitive_subgroup(6, 4, GroupKind::Alt);
        assert_eq!(*m_alt.order(), BigUint::from(24u32));
        for gen in m_alt.generators() {
            assert!(gen.is_even());
        }
        // Degenerate sides.
        let m = intransitive_subgroup(4, 3, GroupKind::Sym);
        assert_eq!(*m.order(), BigUint::from(6u32));
        let m = intransitive_subgroup(3, 2, GroupKind::Alt);
        assert_eq!(*m.order(), BigUint::from(1u32));
    }

    #[test]
    fn membership_examples() {
        let s3 = PermutationGroup::build(vec![p("(1,2)", 3), p("(1,2,3)", 3)]).unwrap();
        assert!(s3.contains(&p("(1,3)", 3)).unwrap());
        assert!(s3.contains(&Permutation::identity(3)).unwrap());
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        assert!(!m.contains(&p("(1,5)", 6)).unwrap());
        assert!(m.contains(&p("(1,2)(5,6)", 6)).unwrap());
    }

    #[test]
    fn orbits_examples() {
        let c6 = PermutationGroup::build(vec![p("(1,2,3,4,5,6)", 6)]).unwrap();
        assert_eq!(c6.orbits(), vec![(1..=6).collect::<Vec<u16>>()]);
        assert!(c6.is_transitive());
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        assert_eq!(m.orbits(), vec![vec![1, 2, 3, 4], vec![5, 6]]);
        let trivial = PermutationGroup::build(vec![Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.orbits().len(), 3);
    }

    #[test]
    fn order_matches_brute_force_closure_on_random_small_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(2..=7u16);
            let g1 = random_perm(&mut rng, n);
            let g2 = random_perm(&mut rng, n);
            let group = PermutationGroup::build(vec![g1.clone(), g2.clone()]).unwrap();
            let brute = brute_closure(&[g1, g2]);
            assert_eq!(*group.order(), BigUint::from(brute.len()));
            // Every element listed by the chain is in the brute closure and
            // the counts match, so the listings agree as sets.
            let listed = group.elements();
            assert_eq!(listed.len(), brute.len());
            for e in &listed {
                assert!(brute.contains(e));
            }
        }
    }

    fn random_perm(rng: &mut impl Rng, n: u16) -> Permutation {
        let mut images: Vec<u16> = (1..=n).collect();
        for i in (1..images.len()).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Permutation::from_images(images).unwrap()
    }

    fn brute_closure(gens: &[Permutation]) -> HashSet<Permutation> {
        let n = gens[0].degree();
        let mut set: HashSet<Permutation> = HashSet::new();
        set.insert(Permutation::identity(n));
        let mut frontier: Vec<Permutation> = vec![Permutation::identity(n)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.compose(g).unwrap();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn minimal_block_systems_of_a_hexagon_rotation() {
        let c6 = PermutationGroup::build(vec![p("(1,2,3,4,5,6)", 6)]).unwrap();
        let b = minimal_block_system(&c6, 1, 3).unwrap();
        assert_eq!(b.blocks(), &[vec![1, 3, 5], vec![2, 4, 6]]);
        let b = minimal_block_system(&c6, 1, 4).unwrap();
        assert_eq!(b.blocks(), &[vec![1, 4], vec![2, 5], vec![3, 6]]);
        for gen in c6.generators() {
            assert!(b.is_preserved_by(gen));
        }
        let s6 = symmetric_group(6);
        let b = minimal_block_system(&s6, 1, 2).unwrap();
        assert_eq!(b.blocks().len(), 1);
    }

    #[test]
    fn minimal_block_system_rejects_bad_input() {
        let c6 = PermutationGroup::build(vec![p("(1,2,3,4,5,6)", 6)]).unwrap();
        assert_eq!(minimal_block_system(&c6, 2, 2).unwrap_err(), GroupError::SamePoint(2));
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        assert_eq!(minimal_block_system(&m, 1, 2).unwrap_err(), GroupError::Intransitive);
    }

    #[test]
    fn primitivity_examples() {
        let c6 = PermutationGroup::build(vec![p("(1,2,3,4,5,6)", 6)]).unwrap();
        match is_primitive(&c6).unwrap() {
            Primitivity::Imprimitive(system) => {
                assert!(!system.is_trivial());
                for gen in c6.generators() {
                    assert!(system.is_preserved_by(gen));
                }
            }
            Primitivity::Primitive => panic!("C6 on 6 points is imprimitive"),
        }
        assert_eq!(is_primitive(&symmetric_group(5)).unwrap(), Primitivity::Primitive);
        let c5 = PermutationGroup::build(vec![p("(1,2,3,4,5)", 5)]).unwrap();
        assert_eq!(is_primitive(&c5).unwrap(), Primitivity::Primitive);
    }

    #[test]
    fn induced_block_cycle_examples() {
        let h = p("(1,2,3,4,5,6)", 6);
        let b = BlockSystem::new(6, vec![vec![1, 3, 5], vec![2, 4, 6]]).unwrap();
        let cycle = induced_block_cycle(&h, 0, &b).unwrap();
        assert_eq!(cycle.len(), 2);
        assert_eq!(6 % cycle.len(), 0);
        let b = BlockSystem::new(6, vec![vec![1, 4], vec![2, 5], vec![3, 6]]).unwrap();
        let cycle = induced_block_cycle(&h, 0, &b).unwrap();
        assert_eq!(cycle.len(), 3);
        // A cycle inside one block induces a trivial cycle.
        let h = p("(1,3,5)", 6);
        let b = BlockSystem::new(6, vec![vec![1, 3, 5], vec![2, 4, 6]]).unwrap();
        assert_eq!(induced_block_cycle(&h, 0, &b).unwrap().len(), 1);
        // Non-preserving permutation is rejected.
        let h = p("(1,2)", 6);
        assert_eq!(
            induced_block_cycle(&h, 0, &b).unwrap_err(),
            GroupError::BlockSystemNotPreserved
        );
    }

    #[test]
    fn generates_pair_examples() {
        let out = generates_pair(&p("(1,2)", 5), &p("(1,2,3,4,5)", 5), GroupKind::Sym).unwrap();
        assert_eq!(out.verdict, Verdict::Full);
        assert_eq!(out.order, BigUint::from(120u32));
        assert!(out.generates(GroupKind::Sym));

        let id = Permutation::identity(4);
        let out = generates_pair(&id, &id, GroupKind::Sym).unwrap();
        assert_eq!(out.verdict, Verdict::Proper);

        let out = generates_pair(&p("(1,2,3)", 5), &p("(1,2,3,4,5)", 5), GroupKind::Alt).unwrap();
        assert_eq!(out.verdict, Verdict::Alternating);
        assert_eq!(out.order, BigUint::from(60u32));

        let err = generates_pair(&p("(1,2)", 5), &p("(1,2,3)", 5), GroupKind::Alt).unwrap_err();
        assert!(matches!(err, GroupError::OddGeneratorForAlt(_)));
    }

    #[test]
    fn no_transposition_pair_generates_sym_6_over_m() {
        // x = (1,5) with M = S_4 × S_2: no y in M makes ⟨x,y⟩ = S_6.
        let x = p("(1,5)", 6);
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        let mut found = false;
        m.for_each_element(&mut |y| {
            if generates_pair_fast(&x, y, GroupKind::Sym) {
                found = true;
            }
        });
        assert!(!found);
    }

    #[test]
    fn fast_and_slow_generation_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(3..=8u16);
            let x = random_perm(&mut rng, n);
            let y = random_perm(&mut rng, n);
            let slow = generates_pair(&x, &y, GroupKind::Sym).unwrap().generates(GroupKind::Sym);
            assert_eq!(generates_pair_fast(&x, &y, GroupKind::Sym), slow);
            if x.is_even() && y.is_even() {
                let slow =
                    generates_pair(&x, &y, GroupKind::Alt).unwrap().generates(GroupKind::Alt);
                assert_eq!(generates_pair_fast(&x, &y, GroupKind::Alt), slow);
            }
        }
    }

    #[test]
    fn m_class_reps_cover_s4_minus_m_exactly() {
        let g = symmetric_group(4);
        let m = intransitive_subgroup(4, 3, GroupKind::Sym);
        let reps = m_class_reps(&g, &m).unwrap();
        // Expand every class by brute force and check the partition.
        let mut covered: HashSet<Permutation> = HashSet::new();
        for rep in &reps {
            let mut class = vec![rep.clone()];
            let mut seen: HashSet<Permutation> = class.iter().cloned().collect();
            let mut i = 0;
            while i < class.len() {
                for gen in m.generators() {
                    let c = class[i].conjugate(gen).unwrap();
                    if seen.insert(c.clone()) {
                        class.push(c);
                    }
                }
                i += 1;
            }
            for e in class {
                assert!(!m.contains(&e).unwrap(), "class member {e} landed inside M");
                assert!(covered.insert(e), "classes overlap");
            }
        }
        assert_eq!(covered.len(), 24 - 6, "classes must cover G \\ M exactly");
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn m_class_reps_empty_when_m_equals_g() {
        let g = symmetric_group(4);
        let reps = m_class_reps(&g, &g).unwrap();
        assert!(reps.is_empty());
    }

    #[test]
    fn m_class_reps_rejects_non_subgroup() {
        let g = PermutationGroup::build(vec![p("(1,2,3)", 3)]).unwrap();
        let m = symmetric_group(3);
        assert!(matches!(m_class_reps(&g, &m).unwrap_err(), GroupError::NotSubgroup(_)));
    }

    #[test]
    fn random_elements_are_members() {
        let g = alternating_group(7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = g.random_element(&mut rng);
            assert!(g.contains(&x).unwrap());
            assert!(x.is_even());
        }
    }
}
