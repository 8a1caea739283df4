//! Exact arithmetic on permutations of `{1..n}`.
//!
//! Points are 1-based throughout, matching the usual cycle notation
//! `(1,5)(2,6)`. Permutations act on the right: the product `a·b` sends a
//! point p to `(p^a)^b` (apply `a` first, then `b`), and conjugation is
//! `x^h = h⁻¹xh`, so the cycle structure of `x^h` is the cycle structure of
//! `x` with every point relabelled through `h`.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Errors from parsing, construction, and point selection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    /// Two permutations of different degrees were combined.
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u16, right: u16 },
    /// An image list did not describe a bijection of `{1..n}`.
    #[error("invalid image list: {0}")]
    InvalidImages(String),
    /// Cycle notation failed to parse; `position` is a byte offset into the input.
    #[error("cycle parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    /// A point-selection precondition failed; `clause` names the violated condition.
    #[error("point selection rejected: {clause}")]
    SelectionRejected { clause: String },
}

/// A bijection of `{1..n}`, stored as the image of every point.
///
/// Ordering and equality are lexicographic on the image sequence
/// `(1^p, 2^p, …, n^p)`, which makes "lexicographically least element" of a
/// set of permutations well defined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// `img[i]` is the image of point `i+1`; values are 1-based.
    img: Vec<u16>,
}

impl Permutation {
    /// The identity permutation of degree `n`.
    ///
    /// # Panics
    /// Panics if `n == 0`; the degree must be at least 1.
    #[must_use]
    pub fn identity(n: u16) -> Self {
        assert!(n >= 1, "degree must be at least 1");
        Permutation { img: (1..=n).collect() }
    }

    /// Builds a permutation from the image list `images[i] = (i+1)^p`.
    ///
    /// # Errors
    /// Fails unless `images` is a permutation of `1..=images.len()` with at
    /// least one point.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 || n > u16::MAX as usize {
            return Err(PermError::InvalidImages(format!(
                "degree {n} out of range 1..={}",
                u16::MAX
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v as usize > n {
                return Err(PermError::InvalidImages(format!(
                    "image {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize] {
                return Err(PermError::InvalidImages(format!("image {v} repeated")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { img: images })
    }

    /// Builds a permutation of degree `n` from explicit disjoint cycles.
    ///
    /// # Errors
    /// Fails if a point is outside `1..=n` or appears twice.
    pub fn from_disjoint_cycles(n: u16, cycles: &[Vec<u16>]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::InvalidImages("degree 0".into()));
        }
        let mut img: Vec<u16> = (1..=n).collect();
        let mut seen = vec![false; n as usize + 1];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(PermError::InvalidImages(format!(
                        "point {p} out of range 1..={n}"
                    )));
                }
                if seen[p as usize] {
                    return Err(PermError::InvalidImages(format!("point {p} repeated")));
                }
                seen[p as usize] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                img[p as usize - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { img })
    }

    /// The number of points acted on.
    #[must_use]
    pub fn degree(&self) -> u16 {
        self.img.len() as u16
    }

    /// The image `p^x` of a point under this permutation (1-based).
    ///
    /// # Panics
    /// Panics if `p` is outside `1..=degree`.
    #[must_use]
    pub fn apply(&self, p: u16) -> u16 {
        self.img[p as usize - 1]
    }

    /// The full image sequence `(1^p, …, n^p)`.
    #[must_use]
    pub fn images(&self) -> &[u16] {
        &self.img
    }

    /// Right-action product: the result maps `p ↦ (p^self)^other`.
    ///
    /// # Errors
    /// Fails on degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let img = self.img.iter().map(|&v| other.img[v as usize - 1]).collect();
        Ok(Permutation { img })
    }

    /// The inverse permutation.
    #[must_use]
    pub fn inverse(&self) -> Permutation {
        let mut img = vec![0u16; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize - 1] = i as u16 + 1;
        }
        Permutation { img }
    }

    /// Conjugate `self^h = h⁻¹·self·h`: maps `p^h ↦ (p^self)^h`, so it has
    /// the same cycle type as `self` with points relabelled through `h`.
    ///
    /// # Errors
    /// Fails on degree mismatch.
    pub fn conjugate(&self, h: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != h.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: h.degree(),
            });
        }
        let mut img = vec![0u16; self.img.len()];
        for p in 0..self.img.len() {
            let ph = h.img[p] as usize - 1;
            img[ph] = h.img[self.img[p] as usize - 1];
        }
        Ok(Permutation { img })
    }

    /// The power `self^e` (negative exponents give powers of the inverse).
    #[must_use]
    pub fn power(&self, e: i64) -> Permutation {
        let n = self.img.len();
        let mut img = vec![0u16; n];
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut p = self.img[start] as usize - 1;
            while p != start {
                visited[p] = true;
                cycle.push(p);
                p = self.img[p] as usize - 1;
            }
            let len = cycle.len() as i64;
            let shift = e.rem_euclid(len) as usize;
            for (i, &c) in cycle.iter().enumerate() {
                img[c] = cycle[(i + shift) % cycle.len()] as u16 + 1;
            }
        }
        Permutation { img }
    }

    /// True if this is the identity.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// The order of the cyclic group ⟨self⟩ (lcm of cycle lengths).
    #[must_use]
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .lengths()
            .iter()
            .fold(1u64, |acc, &l| lcm(acc, u64::from(l)))
    }

    /// The non-trivial cycles, each rotated to start at its smallest point,
    /// sorted by smallest moved point. This is the canonical decomposition
    /// behind [`fmt::Display`].
    #[must_use]
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let n = self.img.len();
        let mut visited = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if visited[start] || self.img[start] as usize == start + 1 {
                continue;
            }
            let mut cycle = vec![start as u16 + 1];
            visited[start] = true;
            let mut p = self.img[start] as usize - 1;
            while p != start {
                visited[p] = true;
                cycle.push(p as u16 + 1);
                p = self.img[p] as usize - 1;
            }
            out.push(cycle);
        }
        out
    }

    /// The multiset of cycle lengths, including trivial 1-cycles.
    #[must_use]
    pub fn cycle_type(&self) -> CycleType {
        let n = self.img.len();
        let mut visited = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut len = 1u16;
            let mut p = self.img[start] as usize - 1;
            while p != start {
                visited[p] = true;
                len += 1;
                p = self.img[p] as usize - 1;
            }
            lengths.push(len);
        }
        CycleType::from_lengths(lengths)
    }

    /// The parity of the permutation.
    ///
    /// Computed two independent ways which must agree: (a) the sum of
    /// (length − 1) over all cycles, mod 2; (b) even iff the cycle count t
    /// (fixed points included) has the same parity as the degree n.
    ///
    /// # Panics
    /// Panics if the two rules disagree (they cannot, for a valid bijection).
    #[must_use]
    pub fn parity(&self) -> Parity {
        let n = self.img.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0usize;
        let mut cycle_count = 0usize;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            cycle_count += 1;
            let mut p = self.img[start] as usize - 1;
            while p != start {
                visited[p] = true;
                transpositions += 1;
                p = self.img[p] as usize - 1;
            }
        }
        let by_transpositions = if transpositions % 2 == 0 { Parity::Even } else { Parity::Odd };
        let by_cycle_count = if cycle_count % 2 == n % 2 { Parity::Even } else { Parity::Odd };
        assert_eq!(by_transpositions, by_cycle_count, "parity rules disagree");
        by_transpositions
    }

    /// True iff the permutation is even.
    #[must_use]
    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// `(supp, fix)`: the moved points and the fixed points, which partition
    /// `{1..n}`.
    #[must_use]
    pub fn support_and_fix(&self) -> (PointSet, PointSet) {
        let n = self.degree();
        let mut supp = PointSet::empty(n);
        let mut fix = PointSet::empty(n);
        for (i, &v) in self.img.iter().enumerate() {
            let p = i as u16 + 1;
            if v == p {
                fix.insert(p);
            } else {
                supp.insert(p);
            }
        }
        (supp, fix)
    }

    /// The moved points.
    #[must_use]
    pub fn support(&self) -> PointSet {
        self.support_and_fix().0
    }
}

impl serde::Serialize for Permutation {
    /// Serializes as the canonical cycle string, e.g. `"(1,5)(2,6)"`.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Permutation {
    /// Canonical cycle notation: cycles sorted by smallest moved point, each
    /// rotated to start at its smallest point; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parses cycle notation like `"(1,5)(2,6)"` into a permutation of degree `n`.
///
/// The grammar is a product of parenthesized comma-separated positive
/// integers with optional whitespace anywhere between tokens; the cycles must
/// be disjoint; points not named are fixed. The empty string and `"()"` both
/// denote the identity.
///
/// # Errors
/// Repeated points, points outside `1..=n`, and malformed tokens are
/// rejected with the byte position of the offending token.
pub fn parse_cycles(text: &str, degree: u16) -> Result<Permutation, PermError> {
    if degree == 0 {
        return Err(PermError::InvalidImages("degree 0".into()));
    }
    let bytes = text.as_bytes();
    let mut img: Vec<u16> = (1..=degree).collect();
    let mut seen = vec![false; degree as usize + 1];
    let mut i = 0usize;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        if bytes[i] != b'(' {
            return Err(PermError::Parse {
                position: i,
                message: format!("expected '(' but found {:?}", bytes[i] as char),
            });
        }
        i += 1;
        skip_ws(&mut i);
        if i < bytes.len() && bytes[i] == b')' {
            // "()" is an explicit identity factor.
            i += 1;
            continue;
        }
        let mut cycle: Vec<u16> = Vec::new();
        loop {
            skip_ws(&mut i);
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == start {
                let found = if i < bytes.len() {
                    format!("{:?}", bytes[i] as char)
                } else {
                    "end of input".to_string()
                };
                return Err(PermError::Parse {
                    position: start,
                    message: format!("expected a point but found {found}"),
                });
            }
            let point: u32 = text[start..i].parse().map_err(|_| PermError::Parse {
                position: start,
                message: format!("point {} too large", &text[start..i]),
            })?;
            if point == 0 || point > u32::from(degree) {
                return Err(PermError::Parse {
                    position: start,
                    message: format!("point {point} out of range 1..={degree}"),
                });
            }
            let point = point as u16;
            if seen[point as usize] {
                return Err(PermError::Parse {
                    position: start,
                    message: format!("point {point} repeated"),
                });
            }
            seen[point as usize] = true;
            cycle.push(point);
            skip_ws(&mut i);
            match bytes.get(i) {
                Some(b',') => {
                    i += 1;
                }
                Some(b')') => {
                    i += 1;
                    break;
                }
                Some(&c) => {
                    return Err(PermError::Parse {
                        position: i,
                        message: format!("expected ',' or ')' but found {:?}", c as char),
                    });
                }
                None => {
                    return Err(PermError::Parse {
                        position: i,
                        message: "unclosed cycle".to_string(),
                    });
                }
            }
        }
        for (j, &p) in cycle.iter().enumerate() {
            img[p as usize - 1] = cycle[(j + 1) % cycle.len()];
        }
    }
    Ok(Permutation { img })
}

/// The multiset of cycle lengths of a permutation, 1-cycles included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    /// Sorted descending.
    lengths: Vec<u16>,
}

impl CycleType {
    /// Builds a cycle type from a list of lengths (any order, 1s included).
    #[must_use]
    pub fn from_lengths(mut lengths: Vec<u16>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths }
    }

    /// Builds a cycle type from `(length, multiplicity)` pairs.
    #[must_use]
    pub fn from_counts(pairs: &[(u16, u16)]) -> Self {
        let mut lengths = Vec::new();
        for &(len, mult) in pairs {
            for _ in 0..mult {
                lengths.push(len);
            }
        }
        Self::from_lengths(lengths)
    }

    /// Cycle lengths, sorted descending.
    #[must_use]
    pub fn lengths(&self) -> &[u16] {
        &self.lengths
    }

    /// Sum of the lengths: the degree of the underlying permutation.
    #[must_use]
    pub fn total(&self) -> u32 {
        self.lengths.iter().map(|&l| u32::from(l)).sum()
    }

    /// Number of cycles t, fixed points included.
    #[must_use]
    pub fn cycle_count(&self) -> usize {
        self.lengths.len()
    }

    /// How many cycles have exactly this length.
    #[must_use]
    pub fn count_of(&self, len: u16) -> usize {
        self.lengths.iter().filter(|&&l| l == len).count()
    }
}

impl fmt::Display for CycleType {
    /// Multiplicative notation with exponents, e.g. `3·2^2` or `1^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lengths.is_empty() {
            return write!(f, "∅");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.lengths.len() {
            let len = self.lengths[i];
            let mut mult = 1;
            while i + mult < self.lengths.len() && self.lengths[i + mult] == len {
                mult += 1;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if mult == 1 {
                write!(f, "{len}")?;
            } else {
                write!(f, "{len}^{mult}")?;
            }
            i += mult;
        }
        Ok(())
    }
}

/// Even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of a product: even·even = odd·odd = even.
    #[must_use]
    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A subset of `{1..n}` that remembers its ambient degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    degree: u16,
    members: BTreeSet<u16>,
}

impl PointSet {
    /// The empty subset of `{1..n}`.
    #[must_use]
    pub fn empty(degree: u16) -> Self {
        PointSet { degree, members: BTreeSet::new() }
    }

    /// Builds a set from the given points.
    ///
    /// # Panics
    /// Panics if a point is outside `1..=degree`.
    #[must_use]
    pub fn from_points(degree: u16, points: impl IntoIterator<Item = u16>) -> Self {
        let mut s = Self::empty(degree);
        for p in points {
            s.insert(p);
        }
        s
    }

    /// Inserts a point.
    ///
    /// # Panics
    /// Panics if `p` is outside `1..=degree`.
    pub fn insert(&mut self, p: u16) {
        assert!(p >= 1 && p <= self.degree, "point {p} out of range 1..={}", self.degree);
        self.members.insert(p);
    }

    /// Membership test.
    #[must_use]
    pub fn contains(&self, p: u16) -> bool {
        self.members.contains(&p)
    }

    /// Number of members.
    #[must_use]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True iff empty.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The ambient degree n.
    #[must_use]
    pub fn degree(&self) -> u16 {
        self.degree
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.members.iter().copied()
    }

    /// The complement within `{1..n}`.
    #[must_use]
    pub fn complement(&self) -> PointSet {
        let members = (1..=self.degree).filter(|p| !self.members.contains(p)).collect();
        PointSet { degree: self.degree, members }
    }

    /// The intersection with another set over the same degree.
    #[must_use]
    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let members = self.members.intersection(&other.members).copied().collect();
        PointSet { degree: self.degree, members }
    }
}

/// Which point-selection variant to run: how many moved-point pairs are
/// needed and which extra freedoms the caller gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointVariant {
    /// Three points r, s, t with r, r^x, s, s^x, t, t^x all distinct.
    One,
    /// Points s, t plus a free pair u, v that is not a 2-cycle of x.
    Two,
}

/// Result of [`select_points`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectedPoints {
    /// Variant-one triple.
    One { r: u16, s: u16, t: u16 },
    /// Variant-two quadruple.
    Two { s: u16, t: u16, u: u16, v: u16 },
}

/// Deterministically selects auxiliary points inside `supp(x) \ {1, k+1}`.
///
/// Requires `1^x = k+1` and `|supp(x)| ≥ 8`. Variant one returns the
/// lexicographically least `(r, s, t)` such that r, r^x, s, s^x, t, t^x are
/// six distinct points avoiding `{1, k+1}`; it rejects the cycle types
/// `1^(n−8)·2·3²`, `1^(n−8)·3·5`, and `1^(n−9)·3³`, for which no such triple
/// exists. Variant two returns the lexicographically least `(s, t, u, v)`
/// such that s, s^x, t, t^x, u, v are six distinct points avoiding
/// `{1, k+1}` and `(u, v)` is not a 2-cycle of x; it rejects the cycle type
/// `1^(n−8)·2⁴`.
///
/// # Errors
/// A violated precondition is reported with the violated clause named; an
/// exhausted search (impossible for admissible inputs) is reported likewise.
pub fn select_points(
    x: &Permutation,
    k: u16,
    variant: PointVariant,
) -> Result<SelectedPoints, PermError> {
    let n = x.degree();
    if k + 1 > n {
        return Err(PermError::SelectionRejected {
            clause: format!("k+1 = {} exceeds degree {n}", k + 1),
        });
    }
    if x.apply(1) != k + 1 {
        return Err(PermError::SelectionRejected {
            clause: format!("1^x = k+1 (got 1^x = {}, k+1 = {})", x.apply(1), k + 1),
        });
    }
    let supp = x.support();
    if supp.len() < 8 {
        return Err(PermError::SelectionRejected {
            clause: format!("|supp(x)| ≥ 8 (got {})", supp.len()),
        });
    }
    let ct = x.cycle_type();
    let fixed = n - supp.len() as u16;
    let excluded: &[CycleType] = match variant {
        PointVariant::One => &[
            CycleType::from_counts(&[(1, fixed), (2, 1), (3, 2)]),
            CycleType::from_counts(&[(1, fixed), (3, 1), (5, 1)]),
            CycleType::from_counts(&[(1, fixed), (3, 3)]),
        ],
        PointVariant::Two => &[CycleType::from_counts(&[(1, fixed), (2, 4)])],
    };
    if excluded.contains(&ct) {
        return Err(PermError::SelectionRejected {
            clause: format!(
                "cycle type {ct} is excluded for variant {}",
                match variant {
                    PointVariant::One => "one",
                    PointVariant::Two => "two",
                }
            ),
        });
    }

    let forbidden = [1u16, k + 1];
    let pool: Vec<u16> = supp.iter().filter(|p| !forbidden.contains(p)).collect();
    let ok = |p: u16| !forbidden.contains(&p);
    match variant {
        PointVariant::One => {
            for &r in &pool {
                let rx = x.apply(r);
                if !ok(rx) {
                    continue;
                }
                for &s in &pool {
                    let sx = x.apply(s);
                    if !ok(sx) || !all_distinct(&[r, rx, s, sx]) {
                        continue;
                    }
                    for &t in &pool {
                        let tx = x.apply(t);
                        if ok(tx) && all_distinct(&[r, rx, s, sx, t, tx]) {
                            return Ok(SelectedPoints::One { r, s, t });
                        }
                    }
                }
            }
        }
        PointVariant::Two => {
            for &s in &pool {
                let sx = x.apply(s);
                if !ok(sx) {
                    continue;
                }
                for &t in &pool {
                    let tx = x.apply(t);
                    if !ok(tx) || !all_distinct(&[s, sx, t, tx]) {
                        continue;
                    }
                    for &u in &pool {
                        if !all_distinct(&[s, sx, t, tx, u]) {
                            continue;
                        }
                        for &v in &pool {
                            if !all_distinct(&[s, sx, t, tx, u, v]) {
                                continue;
                            }
                            let is_two_cycle = x.apply(u) == v && x.apply(v) == u;
                            if !is_two_cycle {
                                return Ok(SelectedPoints::Two { s, t, u, v });
                            }
                        }
                    }
                }
            }
        }
    }
    Err(PermError::SelectionRejected {
        clause: format!("no admissible tuple exists for cycle type {ct} (variant search exhausted)"),
    })
}

fn all_distinct(points: &[u16]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return false;
            }
        }
    }
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
