//! Conjugacy classes of G \ M under the intransitive subgroup M, enumerated
//! through their complete invariant instead of by listing group elements.
//!
//! Two elements of Sym(n) are conjugate under M = Sym(k) × Sym(n−k) exactly
//! when their cycles carry the same multiset of *side-colored cycle words*:
//! for each cycle, the cyclic word recording which side (Ω₁ = `{1..k}` or
//! Ω₂ = `{k+1..n}`) each point lies on, up to rotation. Conjugating by M
//! relabels points within the sides, preserving every word; conversely equal
//! multisets admit a side-preserving relabelling. Fixed points contribute
//! one-letter words, and elements outside M are exactly those with a mixed
//! word. For Alt(n) the same data decides how classes split: the M-class of
//! an even x splits in two exactly when the centralizer C_M(x) contains no
//! odd permutation, and both facts are readable off the words.

use num_bigint::BigUint;

use crate::group::GroupKind;
use crate::perm::{Parity, Permutation};

/// Side marker: 0 = Ω₁ (`{1..k}`), 1 = Ω₂ (`{k+1..n}`).
const SIDE_A: u8 = 0;
const SIDE_B: u8 = 1;

/// A cyclic binary word, stored as its lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Necklace {
    word: Vec<u8>,
}

impl Necklace {
    pub(crate) fn new(raw: &[u8]) -> Self {
        debug_assert!(!raw.is_empty() && raw.iter().all(|&c| c == SIDE_A || c == SIDE_B));
        let mut best = raw.to_vec();
        let mut rotated = raw.to_vec();
        for _ in 1..raw.len() {
            rotated.rotate_left(1);
            if rotated < best {
                best.clone_from(&rotated);
            }
        }
        Necklace { word: best }
    }

    pub(crate) fn len(&self) -> usize {
        self.word.len()
    }

    pub(crate) fn count_a(&self) -> usize {
        self.word.iter().filter(|&&c| c == SIDE_A).count()
    }

    pub(crate) fn count_b(&self) -> usize {
        self.word.len() - self.count_a()
    }

    /// True iff the word uses both sides — i.e. the cycle crosses Ω₁/Ω₂.
    pub(crate) fn is_mixed(&self) -> bool {
        self.count_a() > 0 && self.count_b() > 0
    }

    /// The smallest period p (dividing the length) with word = word rotated
    /// by p.
    pub(crate) fn min_period(&self) -> usize {
        let l = self.word.len();
        for p in 1..=l {
            if l % p != 0 {
                continue;
            }
            if (0..l).all(|i| self.word[i] == self.word[(i + p) % l]) {
                return p;
            }
        }
        unreachable!("rotation by the full length is always trivial")
    }
}

/// The multiset of side-colored cycle words of one M-class, in a canonical
/// internal order: mixed words first, then longer words, then lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ClassShape {
    /// `(necklace, multiplicity)` with multiplicity ≥ 1.
    items: Vec<(Necklace, usize)>,
}

fn shape_order(a: &(Necklace, usize), b: &(Necklace, usize)) -> std::cmp::Ordering {
    let mixed = b.0.is_mixed().cmp(&a.0.is_mixed());
    let len = b.0.len().cmp(&a.0.len());
    mixed.then(len).then_with(|| a.0.word.cmp(&b.0.word))
}

impl ClassShape {
    fn new(mut items: Vec<(Necklace, usize)>) -> Self {
        items.retain(|&(_, m)| m > 0);
        items.sort_by(shape_order);
        ClassShape { items }
    }

    /// The shape of a concrete permutation relative to the split at `k`.
    pub(crate) fn of(x: &Permutation, k: u16) -> Self {
        let n = x.degree();
        let mut counts: std::collections::BTreeMap<Necklace, usize> =
            std::collections::BTreeMap::new();
        let mut in_cycle = vec![false; n as usize];
        for cycle in x.cycles() {
            let word: Vec<u8> =
                cycle.iter().map(|&p| if p <= k { SIDE_A } else { SIDE_B }).collect();
            for &p in &cycle {
                in_cycle[p as usize - 1] = true;
            }
            *counts.entry(Necklace::new(&word)).or_insert(0) += 1;
        }
        for p in 1..=n {
            if !in_cycle[p as usize - 1] {
                let word = [if p <= k { SIDE_A } else { SIDE_B }];
                *counts.entry(Necklace::new(&word)).or_insert(0) += 1;
            }
        }
        Self::new(counts.into_iter().collect())
    }

    /// True iff some word is mixed, i.e. the class lies outside M.
    pub(crate) fn is_mixed(&self) -> bool {
        self.items.iter().any(|(neck, _)| neck.is_mixed())
    }

    /// Parity of any element with this shape: Σ (length − 1) per cycle.
    pub(crate) fn parity(&self) -> Parity {
        let transpositions: usize =
            self.items.iter().map(|(neck, m)| (neck.len() - 1) * m).sum();
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// |C_M(x)| for x of this shape and M = Sym(k) × Sym(n−k): an element
    /// commuting with x and preserving the sides permutes equal-word cycles
    /// and rotates each by a multiple of its word's minimal period, giving
    /// ∏ m! · (ℓ/p)^m over the word classes.
    pub(crate) fn centralizer_order_in_m(&self) -> BigUint {
        let mut order = BigUint::from(1u8);
        for (neck, m) in &self.items {
            let rotations = neck.len() / neck.min_period();
            for i in 1..=*m {
                order *= BigUint::from(i);
                order *= BigUint::from(rotations);
            }
        }
        order
    }

    /// True iff C_M(x) contains an odd permutation: either some cycle of
    /// even length admits an odd color-preserving rotation (minimal period
    /// odd), or two equal cycles of odd length can be swapped.
    pub(crate) fn centralizer_in_m_has_odd(&self) -> bool {
        self.items.iter().any(|(neck, m)| {
            (neck.len() % 2 == 0 && neck.min_period() % 2 == 1)
                || (*m >= 2 && neck.len() % 2 == 1)
        })
    }

    /// The canonical representative: the first mixed word is walked from its
    /// first Ω₁→Ω₂ boundary so that 1 maps to k+1, and every position takes
    /// the smallest unused point of its side, in walk order.
    pub(crate) fn canonical_rep(&self, n: u16, k: u16) -> Permutation {
        debug_assert!(self.is_mixed(), "only classes outside M have representatives here");
        let mut next_a = 1u16;
        let mut next_b = k + 1;
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut anchor = true;
        for (neck, mult) in &self.items {
            for _ in 0..*mult {
                let l = neck.len();
                let start = if anchor {
                    anchor = false;
                    (0..l)
                        .find(|&i| neck.word[i] == SIDE_A && neck.word[(i + 1) % l] == SIDE_B)
                        .expect("the first word is mixed, so an A→B boundary exists")
                } else {
                    0
                };
                let mut cycle = Vec::with_capacity(l);
                for j in 0..l {
                    let side = neck.word[(start + j) % l];
                    if side == SIDE_A {
                        cycle.push(next_a);
                        next_a += 1;
                    } else {
                        cycle.push(next_b);
                        next_b += 1;
                    }
                }
                if l > 1 {
                    cycles.push(cycle);
                }
            }
        }
        debug_assert_eq!(next_a, k + 1, "Ω₁ budget must be exhausted");
        debug_assert_eq!(next_b, n + 1, "Ω₂ budget must be exhausted");
        Permutation::from_disjoint_cycles(n, &cycles).expect("disjoint by construction")
    }

    /// Size of the M-class of one representative in the Sym case.
    pub(crate) fn class_size_sym(&self, n: u16, k: u16) -> BigUint {
        let m_order = crate::group::factorial(k) * crate::group::factorial(n - k);
        m_order / self.centralizer_order_in_m()
    }
}

/// All class shapes over the split (k, n−k) whose elements lie outside M,
/// in a fixed deterministic order.
pub(crate) fn enumerate_shapes(n: u16, k: u16) -> Vec<ClassShape> {
    // Every binary necklace of length ≤ n, ordered long-to-short so the two
    // one-letter words come last and can absorb any leftover side budgets.
    let mut necklaces: Vec<Necklace> = Vec::new();
    for l in (1..=n as usize).rev() {
        let mut seen: std::collections::BTreeSet<Vec<u8>> = std::collections::BTreeSet::new();
        for bits in 0..(1u32 << l) {
            let word: Vec<u8> =
                (0..l).map(|i| if bits & (1 << i) != 0 { SIDE_B } else { SIDE_A }).collect();
            seen.insert(Necklace::new(&word).word);
        }
        for word in seen {
            necklaces.push(Necklace { word });
        }
    }
    let mut shapes = Vec::new();
    let mut chosen: Vec<(Necklace, usize)> = Vec::new();
    fill_shapes(
        &necklaces,
        0,
        k as usize,
        (n - k) as usize,
        false,
        &mut chosen,
        &mut shapes,
    );
    shapes
}

fn fill_shapes(
    necklaces: &[Necklace],
    idx: usize,
    budget_a: usize,
    budget_b: usize,
    have_mixed: bool,
    chosen: &mut Vec<(Necklace, usize)>,
    shapes: &mut Vec<ClassShape>,
) {
    if budget_a == 0 && budget_b == 0 {
        if have_mixed {
            shapes.push(ClassShape::new(chosen.clone()));
        }
        return;
    }
    if idx == necklaces.len() {
        return;
    }
    let neck = &necklaces[idx];
    let (a, b) = (neck.count_a(), neck.count_b());
    // One-letter words close the remaining budget outright.
    if neck.len() == 1 {
        let take = if a == 1 { budget_a } else { budget_b };
        let (rem_a, rem_b) =
            if a == 1 { (0, budget_b) } else { (budget_a, 0) };
        if take > 0 {
            chosen.push((neck.clone(), take));
        }
        fill_shapes(necklaces, idx + 1, rem_a, rem_b, have_mixed, chosen, shapes);
        if take > 0 {
            chosen.pop();
        }
        return;
    }
    let max_mult = {
        let by_a = if a > 0 { budget_a / a } else { usize::MAX };
        let by_b = if b > 0 { budget_b / b } else { usize::MAX };
        by_a.min(by_b)
    };
    for mult in 0..=max_mult {
        if mult > 0 {
            chosen.push((neck.clone(), mult));
        }
        fill_shapes(
            necklaces,
            idx + 1,
            budget_a - a * mult,
            budget_b - b * mult,
            have_mixed || (mult > 0 && neck.is_mixed()),
            chosen,
            shapes,
        );
        if mult > 0 {
            chosen.pop();
        }
    }
}

/// An odd element of M = Sym(k) × Sym(n−k), fixing 1 and k+1 when possible,
/// used to produce the second representative of a split Alt class.
pub(crate) fn odd_twist(n: u16, k: u16) -> Permutation {
    let pair = if k >= 3 {
        vec![2, 3]
    } else if n - k >= 3 {
        vec![k + 2, k + 3]
    } else if k >= 2 {
        vec![1, 2]
    } else {
        vec![k + 1, k + 2]
    };
    Permutation::from_disjoint_cycles(n, &[pair]).expect("valid transposition")
}

/// One representative per M-class of G \ M for G = Sym(n)/Alt(n) and the
/// intransitive M over `{1..k} | {k+1..n}`, via shape enumeration. For Alt,
/// classes whose centralizer lies inside Alt(n) split and contribute a
/// second, odd-conjugated representative.
pub(crate) fn class_reps(n: u16, k: u16, kind: GroupKind) -> Vec<Permutation> {
    let mut reps = Vec::new();
    for shape in enumerate_shapes(n, k) {
        match kind {
            GroupKind::Sym => reps.push(shape.canonical_rep(n, k)),
            GroupKind::Alt => {
                if shape.parity() == Parity::Even {
                    let rep = shape.canonical_rep(n, k);
                    if !shape.centralizer_in_m_has_odd() {
                        let twisted = rep.conjugate(&odd_twist(n, k)).expect("equal degrees");
                        reps.push(rep);
                        reps.push(twisted);
                    } else {
                        reps.push(rep);
                    }
                }
            }
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{factorial, intransitive_subgroup, symmetric_group};
    use crate::perm::parse_cycles;
    use std::collections::HashSet;

    #[test]
    fn necklace_canonical_rotation_and_period() {
        let neck = Necklace::new(&[SIDE_B, SIDE_A, SIDE_B, SIDE_A]);
        assert_eq!(neck.word, vec![SIDE_A, SIDE_B, SIDE_A, SIDE_B]);
        assert_eq!(neck.min_period(), 2);
        let neck = Necklace::new(&[SIDE_B, SIDE_A, SIDE_A]);
        assert_eq!(neck.word, vec![SIDE_A, SIDE_A, SIDE_B]);
        assert_eq!(neck.min_period(), 3);
        assert!(neck.is_mixed());
        let neck = Necklace::new(&[SIDE_A, SIDE_A]);
        assert_eq!(neck.min_period(), 1);
        assert!(!neck.is_mixed());
    }

    #[test]
    fn shape_of_canonical_rep_round_trips() {
        for (n, k) in [(5u16, 3u16), (6, 4), (7, 4), (8, 6)] {
            for shape in enumerate_shapes(n, k) {
                let rep = shape.canonical_rep(n, k);
                assert_eq!(ClassShape::of(&rep, k), shape, "round-trip at ({n},{k})");
                assert_eq!(rep.apply(1), k + 1, "canonical rep must map 1 to k+1");
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_complement_of_m() {
        for (n, k) in [(4u16, 3u16), (5, 3), (6, 4), (7, 4), (7, 5), (8, 5), (9, 6)] {
            let total: BigUint =
                enumerate_shapes(n, k).iter().map(|s| s.class_size_sym(n, k)).sum();
            let expected = factorial(n) - factorial(k) * factorial(n - k);
            assert_eq!(total, expected, "Sym({n}) with k={k}");
        }
    }

    #[test]
    fn alt_class_sizes_sum_to_complement_of_m() {
        for (n, k) in [(5u16, 3u16), (6, 4), (7, 4), (8, 5)] {
            let mut total = BigUint::from(0u8);
            for shape in enumerate_shapes(n, k) {
                if shape.parity() != Parity::Even {
                    continue;
                }
                let sym_size = shape.class_size_sym(n, k);
                // Split classes halve; unsplit classes keep the Sym size.
                total += sym_size;
            }
            let expected =
                factorial(n) / BigUint::from(2u8) - factorial(k) * factorial(n - k) / BigUint::from(2u8);
            assert_eq!(total, expected, "Alt({n}) with k={k}");
        }
    }

    #[test]
    fn centralizer_order_matches_brute_force() {
        let m = intransitive_subgroup(6, 4, GroupKind::Sym);
        let elements = symmetric_group(6).elements();
        for x in elements.iter().take(720) {
            let shape = ClassShape::of(x, 4);
            let mut brute = 0u32;
            let mut has_odd = false;
            m.for_each_element(&mut |c| {
                let xc = x.compose(c).unwrap();
                let cx = c.compose(x).unwrap();
                if xc == cx {
                    brute += 1;
                    if !c.is_even() {
                        has_odd = true;
                    }
                }
            });
            assert_eq!(
                BigUint::from(brute),
                shape.centralizer_order_in_m(),
                "centralizer size for {x}"
            );
            assert_eq!(has_odd, shape.centralizer_in_m_has_odd(), "odd detection for {x}");
        }
    }

    #[test]
    fn canonical_reps_match_named_survivor_strings() {
        let rep = ClassShape::of(&parse_cycles("(1,4)(2,3)", 4).unwrap(), 3).canonical_rep(4, 3);
        assert_eq!(rep.to_string(), "(1,4)(2,3)");
        let rep = ClassShape::of(&parse_cycles("(1,5)(2,6)", 6).unwrap(), 4).canonical_rep(6, 4);
        assert_eq!(rep.to_string(), "(1,5)(2,6)");
        let rep = ClassShape::of(&parse_cycles("(1,5)", 6).unwrap(), 4).canonical_rep(6, 4);
        assert_eq!(rep.to_string(), "(1,5)");
        let rep = ClassShape::of(&parse_cycles("(1,7)", 9).unwrap(), 6).canonical_rep(9, 6);
        assert_eq!(rep.to_string(), "(1,7)");
    }

    #[test]
    fn alt_reps_partition_matches_brute_force() {
        // Compare the shape-based (possibly split) classes against a brute
        // partition of Alt(6) \ M under conjugation by M = (S_4 × S_2) ∩ A_6.
        let (n, k) = (6u16, 4u16);
        let m = intransitive_subgroup(n, k, GroupKind::Alt);
        let reps = class_reps(n, k, GroupKind::Alt);
        let mut covered: HashSet<Permutation> = HashSet::new();
        for rep in &reps {
            assert!(!m.contains(rep).unwrap());
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
                assert!(covered.insert(e), "classes overlap at rep {rep}");
            }
        }
        // |A_6| / 2... the complement of M inside A_6:
        let expected = 360 - 24;
        assert_eq!(covered.len(), expected);
    }

    #[test]
    fn sym_rep_count_matches_brute_force_at_5_3() {
        let (n, k) = (5u16, 3u16);
        let g = symmetric_group(n);
        let m = intransitive_subgroup(n, k, GroupKind::Sym);
        let reps = class_reps(n, k, GroupKind::Sym);
        // Partition S_5 \ M by brute force.
        let mut classified: HashSet<Permutation> = HashSet::new();
        let mut brute_count = 0;
        for x in g.elements() {
            if m.contains(&x).unwrap() || classified.contains(&x) {
                continue;
            }
            brute_count += 1;
            let mut class = vec![x.clone()];
            classified.insert(x);
            let mut i = 0;
            while i < class.len() {
                for gen in m.generators() {
                    let c = class[i].conjugate(gen).unwrap();
                    if classified.insert(c.clone()) {
                        class.push(c);
                    }
                }
                i += 1;
            }
        }
        assert_eq!(reps.len(), brute_count);
    }
}
