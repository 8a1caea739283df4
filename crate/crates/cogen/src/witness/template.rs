//! Cycle-shape templates over a two-orbit ground set, with a deterministic
//! enumerator of every permutation matching the shape.
//!
//! A template prescribes, for a permutation y of `{1..n}` preserving the
//! split Ω₁ = `{1..k}`, Ω₂ = `{k+1..n}`:
//!
//! * an ordered list of cycle slots Θ₁, Θ₂, … — each pinned to one side with
//!   a fixed length (trivial 1-cycles are listed explicitly, so the slots
//!   cover both sides exactly);
//! * membership constraints: a named point must, or must not, lie in a given
//!   slot;
//! * image equations `p^y = q` and `p^{y²} = q`.
//!
//! [`CycleTemplate::enumerate`] streams every matching permutation exactly
//! once, in a deterministic order: slot supports are chosen as
//! lexicographically increasing combinations of the unplaced points (slots in
//! Θ-order, the last slot of each side taking the remainder), and each slot's
//! cyclic arrangement is built from its smallest point with free positions
//! filled in ascending order. Two adjacent same-side slots of equal length
//! with no distinguishing constraints are deduplicated by requiring their
//! minima to increase, so no permutation is emitted twice.

use std::collections::HashMap;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::perm::{Parity, Permutation};

/// Errors from template construction and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    /// Slot lengths fail to cover the two sides exactly.
    #[error("bad slot lengths: {0}")]
    BadLengths(String),
    /// Contradictory membership constraints for a point.
    #[error("placement conflict: {0}")]
    PlacementConflict(String),
    /// A point was required inside a slot on the other side.
    #[error("point {point} lies outside the side of slot {slot}")]
    WrongSide { point: u16, slot: usize },
    /// More points were required inside a slot than it can hold.
    #[error("slot {slot} of length {len} cannot hold {required} required points")]
    Capacity { slot: usize, required: usize, len: u16 },
    /// An image equation relates points that cannot share a cycle.
    #[error("image equation splits across slots or sides: {0}")]
    SplitEquation(String),
}

/// Which orbit of the point stabiliser a slot lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Ω₁ = `{1..k}`.
    Left,
    /// Ω₂ = `{k+1..n}`.
    Right,
}

/// One cycle of the template: a side and a length (1 = fixed point).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub side: Side,
    pub len: u16,
}

/// Convenience constructor for a left-side slot.
#[must_use]
pub fn left(len: u16) -> Slot {
    Slot { side: Side::Left, len }
}

/// Convenience constructor for a right-side slot.
#[must_use]
pub fn right(len: u16) -> Slot {
    Slot { side: Side::Right, len }
}

/// A constrained cycle shape on the split `{1..k} ∪ {k+1..n}`.
#[derive(Debug, Clone)]
pub struct CycleTemplate {
    n: u16,
    k: u16,
    slots: Vec<Slot>,
    /// (point, slot): the point must lie in the slot's cycle.
    require_in: Vec<(u16, usize)>,
    /// (point, slot): the point must not lie in the slot's cycle.
    require_not_in: Vec<(u16, usize)>,
    /// (p, q): `p^y = q`.
    successors: Vec<(u16, u16)>,
    /// (p, q): `p^{y²} = q`.
    successors2: Vec<(u16, u16)>,
}

impl CycleTemplate {
    /// Builds a template after checking that the left slot lengths sum to k
    /// and the right slot lengths to n−k, with every length positive.
    ///
    /// # Errors
    /// Rejects empty or non-covering slot lists.
    pub fn new(n: u16, k: u16, slots: Vec<Slot>) -> Result<Self, TemplateError> {
        if k == 0 || k >= n {
            return Err(TemplateError::BadLengths(format!(
                "need 0 < k < n, got k = {k}, n = {n}"
            )));
        }
        if slots.iter().any(|s| s.len == 0) {
            return Err(TemplateError::BadLengths("zero-length slot".to_string()));
        }
        let left_sum: u32 =
            slots.iter().filter(|s| s.side == Side::Left).map(|s| u32::from(s.len)).sum();
        let right_sum: u32 =
            slots.iter().filter(|s| s.side == Side::Right).map(|s| u32::from(s.len)).sum();
        if left_sum != u32::from(k) || right_sum != u32::from(n - k) {
            return Err(TemplateError::BadLengths(format!(
                "slot lengths sum to {left_sum} | {right_sum}, need {k} | {}",
                n - k
            )));
        }
        Ok(Self {
            n,
            k,
            slots,
            require_in: Vec::new(),
            require_not_in: Vec::new(),
            successors: Vec::new(),
            successors2: Vec::new(),
        })
    }

    fn side_of(&self, p: u16) -> Side {
        if p <= self.k {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn check_point(&self, p: u16) -> Result<(), TemplateError> {
        if p == 0 || p > self.n {
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} outside 1..={}",
                self.n
            )));
        }
        Ok(())
    }

    /// Requires `p` to lie in slot `slot`.
    ///
    /// # Errors
    /// Rejects cross-side placements, double placements to different slots,
    /// conflicts with an exclusion, and slot-capacity overflow.
    pub fn place(&mut self, p: u16, slot: usize) -> Result<(), TemplateError> {
        self.check_point(p)?;
        if self.side_of(p) != self.slots[slot].side {
            return Err(TemplateError::WrongSide { point: p, slot });
        }
        if let Some(&(_, prev)) = self.require_in.iter().find(|&&(q, _)| q == p) {
            if prev == slot {
                return Ok(());
            }
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} already required in slot {prev}, cannot also require slot {slot}"
            )));
        }
        if self.require_not_in.contains(&(p, slot)) {
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} is excluded from slot {slot}"
            )));
        }
        let occupied = self.require_in.iter().filter(|&&(_, s)| s == slot).count();
        if occupied + 1 > self.slots[slot].len as usize {
            return Err(TemplateError::Capacity {
                slot,
                required: occupied + 1,
                len: self.slots[slot].len,
            });
        }
        self.require_in.push((p, slot));
        Ok(())
    }

    /// Excludes `p` from slot `slot`. A point on the other side is excluded
    /// trivially and the constraint is dropped.
    ///
    /// # Errors
    /// Rejects a conflict with an existing placement of `p` into `slot`.
    pub fn forbid(&mut self, p: u16, slot: usize) -> Result<(), TemplateError> {
        self.check_point(p)?;
        if self.side_of(p) != self.slots[slot].side {
            return Ok(());
        }
        if self.require_in.contains(&(p, slot)) {
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} is required in slot {slot}"
            )));
        }
        if !self.require_not_in.contains(&(p, slot)) {
            self.require_not_in.push((p, slot));
        }
        Ok(())
    }

    /// Adds the equation `p^y = q`.
    ///
    /// # Errors
    /// Rejects `p = q`, cross-side pairs, and a second target for `p`.
    pub fn successor(&mut self, p: u16, q: u16) -> Result<(), TemplateError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p == q {
            return Err(TemplateError::PlacementConflict(format!(
                "successor equation {p}^y = {p} would fix a point inside a cycle"
            )));
        }
        if self.side_of(p) != self.side_of(q) {
            return Err(TemplateError::SplitEquation(format!("{p}^y = {q} crosses the split")));
        }
        if let Some(&(_, prev)) = self.successors.iter().find(|&&(a, _)| a == p) {
            if prev == q {
                return Ok(());
            }
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} already has successor {prev}"
            )));
        }
        self.successors.push((p, q));
        Ok(())
    }

    /// Adds the equation `p^{y²} = q`.
    ///
    /// # Errors
    /// Rejects `p = q`, cross-side pairs, and a second target for `p`.
    pub fn successor2(&mut self, p: u16, q: u16) -> Result<(), TemplateError> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p == q {
            return Err(TemplateError::PlacementConflict(format!(
                "equation {p}^(y²) = {p} is not expressible inside one cycle here"
            )));
        }
        if self.side_of(p) != self.side_of(q) {
            return Err(TemplateError::SplitEquation(format!("{p}^(y²) = {q} crosses the split")));
        }
        if let Some(&(_, prev)) = self.successors2.iter().find(|&&(a, _)| a == p) {
            if prev == q {
                return Ok(());
            }
            return Err(TemplateError::PlacementConflict(format!(
                "point {p} already has a y² target {prev}"
            )));
        }
        self.successors2.push((p, q));
        Ok(())
    }

    /// Degree of the enumerated permutations.
    #[must_use]
    pub fn degree(&self) -> u16 {
        self.n
    }

    /// The slots in Θ-order.
    #[must_use]
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Total number of cycles, trivial cycles included.
    #[must_use]
    pub fn cycle_count(&self) -> usize {
        self.slots.len()
    }

    /// The parity every matching permutation has: the sum of (length − 1)
    /// over all slots.
    #[must_use]
    pub fn forced_parity(&self) -> Parity {
        let transpositions: u32 = self.slots.iter().map(|s| u32::from(s.len) - 1).sum();
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Human-readable shape like `"4·5·1 | 9"`.
    #[must_use]
    pub fn describe(&self) -> String {
        let join = |side: Side| {
            self.slots
                .iter()
                .filter(|s| s.side == side)
                .map(|s| s.len.to_string())
                .collect::<Vec<_>>()
                .join("·")
        };
        format!("{} | {}", join(Side::Left), join(Side::Right))
    }

    /// True iff `y` matches the template: its cycles (trivial ones included)
    /// are side-pure with exactly the prescribed multiset of lengths per
    /// side, all image equations hold, and some assignment of cycles to slots
    /// satisfies every membership constraint.
    #[must_use]
    pub fn satisfies(&self, y: &Permutation) -> bool {
        if y.degree() != self.n {
            return false;
        }
        let mut cycles = y.cycles();
        for p in 1..=self.n {
            if y.apply(p) == p {
                cycles.push(vec![p]);
            }
        }
        for c in &cycles {
            let side = self.side_of(c[0]);
            if c.iter().any(|&p| self.side_of(p) != side) {
                return false;
            }
        }
        let mut want: Vec<(Side, u16)> =
            self.slots.iter().map(|s| (s.side, s.len)).collect();
        let mut have: Vec<(Side, u16)> =
            cycles.iter().map(|c| (self.side_of(c[0]), c.len() as u16)).collect();
        let key = |&(side, len): &(Side, u16)| (side == Side::Right, len);
        want.sort_unstable_by_key(key);
        have.sort_unstable_by_key(key);
        if want != have {
            return false;
        }
        if self.successors.iter().any(|&(p, q)| y.apply(p) != q) {
            return false;
        }
        if self.successors2.iter().any(|&(p, q)| y.apply(y.apply(p)) != q) {
            return false;
        }
        self.assignment_exists(&cycles, &mut vec![false; cycles.len()], 0)
    }

    /// Backtracking search for an assignment of distinct cycles to slots that
    /// honours every membership constraint.
    fn assignment_exists(&self, cycles: &[Vec<u16>], used: &mut Vec<bool>, slot: usize) -> bool {
        if slot == self.slots.len() {
            return true;
        }
        let spec = self.slots[slot];
        for (i, c) in cycles.iter().enumerate() {
            if used[i]
                || c.len() != spec.len as usize
                || self.side_of(c[0]) != spec.side
                || self
                    .require_in
                    .iter()
                    .any(|&(p, s)| s == slot && !c.contains(&p))
                || self
                    .require_not_in
                    .iter()
                    .any(|&(p, s)| s == slot && c.contains(&p))
            {
                continue;
            }
            used[i] = true;
            if self.assignment_exists(cycles, used, slot + 1) {
                used[i] = false;
                return true;
            }
            used[i] = false;
        }
        false
    }

    fn validate(&self) -> Result<(), TemplateError> {
        let pinned: HashMap<u16, usize> = self.require_in.iter().copied().collect();
        for &(p, q) in self.successors.iter().chain(&self.successors2) {
            if let (Some(&a), Some(&b)) = (pinned.get(&p), pinned.get(&q)) {
                if a != b {
                    return Err(TemplateError::SplitEquation(format!(
                        "equation relating {p} and {q} spans slots {a} and {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Streams every matching permutation once, in the documented
    /// deterministic order, until the visitor breaks.
    ///
    /// # Errors
    /// Fails if the accumulated constraints are contradictory in a way
    /// construction could not see (an image equation pinned across slots).
    pub fn enumerate<B>(
        &self,
        visit: &mut impl FnMut(&Permutation) -> ControlFlow<B>,
    ) -> Result<Option<B>, TemplateError> {
        self.validate()?;
        let nslots = self.slots.len();
        let mut mandatory: Vec<Vec<u16>> = vec![Vec::new(); nslots];
        for &(p, s) in &self.require_in {
            mandatory[s].push(p);
        }
        for m in &mut mandatory {
            m.sort_unstable();
        }
        let mut forbidden: Vec<Vec<u16>> = vec![Vec::new(); nslots];
        for &(p, s) in &self.require_not_in {
            forbidden[s].push(p);
        }

        // Last slot per side takes the side's remaining points.
        let last_of = |side: Side| {
            (0..nslots).rev().find(|&i| self.slots[i].side == side)
        };
        let last_left = last_of(Side::Left);
        let last_right = last_of(Side::Right);

        // Interchangeable-slot deduplication (see module docs).
        let side_has_equation = |side: Side| {
            self.successors
                .iter()
                .chain(&self.successors2)
                .any(|&(p, q)| self.side_of(p) == side || self.side_of(q) == side)
        };
        let mut dedupe_prev: Vec<Option<usize>> = vec![None; nslots];
        for idx in 0..nslots {
            let side = self.slots[idx].side;
            let Some(prev) = (0..idx).rev().find(|&j| self.slots[j].side == side) else {
                continue;
            };
            if self.slots[prev].len == self.slots[idx].len
                && mandatory[idx].is_empty()
                && mandatory[prev].is_empty()
                && forbidden[idx].is_empty()
                && forbidden[prev].is_empty()
                && !side_has_equation(side)
            {
                dedupe_prev[idx] = Some(prev);
            }
        }

        let placed: HashMap<u16, usize> = self.require_in.iter().copied().collect();
        let pool_l: Vec<u16> = (1..=self.k).filter(|p| !placed.contains_key(p)).collect();
        let pool_r: Vec<u16> =
            (self.k + 1..=self.n).filter(|p| !placed.contains_key(p)).collect();

        let mut ctx = Ctx {
            t: self,
            mandatory,
            forbidden,
            dedupe_prev,
            last_left,
            last_right,
            succ: self.successors.iter().copied().collect(),
            succ2: self.successors2.iter().copied().collect(),
            succ_rev: self.successors.iter().map(|&(p, q)| (q, p)).collect(),
            succ2_rev: self.successors2.iter().map(|&(p, q)| (q, p)).collect(),
            supports: vec![Vec::new(); nslots],
            images: (1..=self.n).collect(),
        };
        match assign(&mut ctx, 0, &pool_l, &pool_r, visit) {
            ControlFlow::Break(b) => Ok(Some(b)),
            ControlFlow::Continue(()) => Ok(None),
        }
    }
}

struct Ctx<'a> {
    t: &'a CycleTemplate,
    mandatory: Vec<Vec<u16>>,
    forbidden: Vec<Vec<u16>>,
    dedupe_prev: Vec<Option<usize>>,
    last_left: Option<usize>,
    last_right: Option<usize>,
    succ: HashMap<u16, u16>,
    succ2: HashMap<u16, u16>,
    succ_rev: HashMap<u16, u16>,
    succ2_rev: HashMap<u16, u16>,
    supports: Vec<Vec<u16>>,
    images: Vec<u16>,
}

/// Chooses the support of slot `idx` and recurses; at the end of the slot
/// list, checks that every equation stayed inside one slot and hands over to
/// the arrangement phase.
fn assign<B>(
    ctx: &mut Ctx<'_>,
    idx: usize,
    pool_l: &[u16],
    pool_r: &[u16],
    visit: &mut dyn FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let nslots = ctx.t.slots.len();
    if idx == nslots {
        for &(p, q) in ctx.t.successors.iter().chain(&ctx.t.successors2) {
            let slot_of = |x: u16| {
                ctx.supports.iter().position(|s| s.binary_search(&x).is_ok())
            };
            if slot_of(p) != slot_of(q) {
                return ControlFlow::Continue(());
            }
        }
        return arrange(ctx, 0, visit);
    }
    let slot = ctx.t.slots[idx];
    let pool: &[u16] = match slot.side {
        Side::Left => pool_l,
        Side::Right => pool_r,
    };
    let need = slot.len as usize - ctx.mandatory[idx].len();
    let is_last = match slot.side {
        Side::Left => ctx.last_left == Some(idx),
        Side::Right => ctx.last_right == Some(idx),
    };

    let try_support = |ctx: &mut Ctx<'_>,
                           extras: &[u16],
                           rest: &[u16],
                           visit: &mut dyn FnMut(&Permutation) -> ControlFlow<B>|
     -> ControlFlow<B> {
        let mut support = ctx.mandatory[idx].clone();
        support.extend_from_slice(extras);
        support.sort_unstable();
        if let Some(prev) = ctx.dedupe_prev[idx] {
            if ctx.supports[prev][0] > support[0] {
                return ControlFlow::Continue(());
            }
        }
        ctx.supports[idx] = support;
        match slot.side {
            Side::Left => assign(ctx, idx + 1, rest, pool_r, visit),
            Side::Right => assign(ctx, idx + 1, pool_l, rest, visit),
        }
    };

    if is_last {
        if pool.len() != need {
            debug_assert!(false, "slot arithmetic must leave exactly the remainder");
            return ControlFlow::Continue(());
        }
        if pool.iter().any(|p| ctx.forbidden[idx].contains(p)) {
            return ControlFlow::Continue(());
        }
        return try_support(ctx, pool, &[], visit);
    }

    let eligible: Vec<u16> =
        pool.iter().copied().filter(|p| !ctx.forbidden[idx].contains(p)).collect();
    if eligible.len() < need {
        return ControlFlow::Continue(());
    }
    if need == 0 {
        return try_support(ctx, &[], pool, visit);
    }

    // Lexicographic combinations of `eligible` choose `need`.
    let mut idxs: Vec<usize> = (0..need).collect();
    loop {
        let comb: Vec<u16> = idxs.iter().map(|&i| eligible[i]).collect();
        let rest: Vec<u16> =
            pool.iter().copied().filter(|p| comb.binary_search(p).is_err()).collect();
        if let ControlFlow::Break(b) = try_support(ctx, &comb, &rest, visit) {
            return ControlFlow::Break(b);
        }
        // Advance to the next combination.
        let mut j = need;
        let advanced = loop {
            if j == 0 {
                break false;
            }
            j -= 1;
            if idxs[j] + (need - j) <= eligible.len() - 1 {
                idxs[j] += 1;
                for l in j + 1..need {
                    idxs[l] = idxs[l - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            return ControlFlow::Continue(());
        }
    }
}

/// Arranges slot `slot_idx` into a cycle and recurses; at the end of the
/// slot list, emits the assembled permutation.
fn arrange<B>(
    ctx: &mut Ctx<'_>,
    slot_idx: usize,
    visit: &mut dyn FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if slot_idx == ctx.t.slots.len() {
        let y = Permutation::from_images(ctx.images.clone())
            .expect("cycle writes preserve bijectivity");
        debug_assert!(ctx.t.satisfies(&y), "emitted candidate must match its template");
        return visit(&y);
    }
    let support = ctx.supports[slot_idx].clone();
    if support.len() == 1 {
        return arrange(ctx, slot_idx + 1, visit);
    }
    let mut seq: Vec<u16> = Vec::with_capacity(support.len());
    seq.push(support[0]);
    let mut used = vec![false; support.len()];
    used[0] = true;
    extend_cycle(ctx, slot_idx, &support, &mut seq, &mut used, visit)
}

/// Backtracking extension of one slot's cycle word. The word starts at the
/// slot's smallest point; a position immediately after an equation source is
/// forced, and free positions exclude equation targets that could not
/// possibly be satisfied there.
fn extend_cycle<B>(
    ctx: &mut Ctx<'_>,
    slot_idx: usize,
    support: &[u16],
    seq: &mut Vec<u16>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let len = support.len();
    let pos = seq.len();
    if pos == len {
        // Close the cycle: re-check every equation touching this support.
        for (i, &p) in seq.iter().enumerate() {
            if let Some(&q) = ctx.succ.get(&p) {
                if seq[(i + 1) % len] != q {
                    return ControlFlow::Continue(());
                }
            }
            if let Some(&q) = ctx.succ2.get(&p) {
                if seq[(i + 2) % len] != q {
                    return ControlFlow::Continue(());
                }
            }
        }
        for i in 0..len {
            ctx.images[seq[i] as usize - 1] = seq[(i + 1) % len];
        }
        let out = arrange(ctx, slot_idx + 1, visit);
        for &p in seq.iter() {
            ctx.images[p as usize - 1] = p;
        }
        return out;
    }

    let forced1 = ctx.succ.get(&seq[pos - 1]).copied();
    let forced2 = if pos >= 2 { ctx.succ2.get(&seq[pos - 2]).copied() } else { None };
    let recurse_with = |ctx: &mut Ctx<'_>,
                        c: u16,
                        i: usize,
                        seq: &mut Vec<u16>,
                        used: &mut Vec<bool>,
                        visit: &mut dyn FnMut(&Permutation) -> ControlFlow<B>|
     -> ControlFlow<B> {
        used[i] = true;
        seq.push(c);
        let out = extend_cycle(ctx, slot_idx, support, seq, used, visit);
        seq.pop();
        used[i] = false;
        out
    };

    match (forced1, forced2) {
        (Some(a), Some(b)) if a != b => ControlFlow::Continue(()),
        (Some(c), _) | (None, Some(c)) => match support.binary_search(&c) {
            Ok(i) if !used[i] => recurse_with(ctx, c, i, seq, used, visit),
            _ => ControlFlow::Continue(()),
        },
        (None, None) => {
            for i in 0..len {
                if used[i] {
                    continue;
                }
                let c = support[i];
                if ctx.succ_rev.contains_key(&c) {
                    // A y-successor target may only follow its source (forced
                    // above) or sit at the fixed start of the word.
                    continue;
                }
                if let Some(&src2) = ctx.succ2_rev.get(&c) {
                    // A y²-target two positions after the start can still wrap
                    // onto an unplaced source; anywhere else it is dead.
                    if pos >= 2 {
                        continue;
                    }
                    match support.binary_search(&src2) {
                        Ok(j) if !used[j] => {}
                        _ => continue,
                    }
                }
                if let ControlFlow::Break(b) = recurse_with(ctx, c, i, seq, used, visit) {
                    return ControlFlow::Break(b);
                }
            }
            ControlFlow::Continue(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect_all(t: &CycleTemplate) -> Vec<Permutation> {
        let mut out = Vec::new();
        let broke = t
            .enumerate(&mut |y| {
                out.push(y.clone());
                ControlFlow::<()>::Continue(())
            })
            .expect("valid template");
        assert!(broke.is_none());
        out
    }

    fn count_all(t: &CycleTemplate) -> u64 {
        let mut n = 0u64;
        t.enumerate(&mut |_| {
            n += 1;
            ControlFlow::<()>::Continue(())
        })
        .expect("valid template");
        n
    }

    #[test]
    fn full_side_cycles_count_and_order() {
        let t = CycleTemplate::new(6, 4, vec![left(4), right(2)]).unwrap();
        let all = collect_all(&t);
        assert_eq!(all.len(), 6); // 3! · 1!
        assert_eq!(all[0].to_string(), "(1,2,3,4)(5,6)");
        let mut distinct = all.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), all.len());
        for y in &all {
            assert!(t.satisfies(y));
        }
    }

    #[test]
    fn interchangeable_fixed_points_are_deduplicated() {
        let t = CycleTemplate::new(6, 4, vec![left(4), right(1), right(1)]).unwrap();
        let all = collect_all(&t);
        assert_eq!(all.len(), 6); // 3! left arrangements, one split of {5, 6}
        for y in &all {
            assert_eq!(y.apply(5), 5);
            assert_eq!(y.apply(6), 6);
        }
    }

    #[test]
    fn placements_pin_points_to_slots() {
        // Left 7-cycle, right 5-cycle holding 8, right fixed point 9.
        let mut t = CycleTemplate::new(13, 7, vec![left(7), right(5), right(1)]).unwrap();
        t.place(8, 1).unwrap();
        t.place(9, 2).unwrap();
        let mut first = None;
        t.enumerate(&mut |y| {
            first = Some(y.clone());
            ControlFlow::Break(())
        })
        .unwrap();
        assert_eq!(first.unwrap().to_string(), "(1,2,3,4,5,6,7)(8,10,11,12,13)");
        assert_eq!(count_all(&t), 720 * 24); // 6! · 4!
    }

    #[test]
    fn image_equations_are_enforced() {
        // 1^{y²} = 2 on the left, 8^y = 9 on the right.
        let mut t = CycleTemplate::new(12, 7, vec![left(7), right(5)]).unwrap();
        t.successor2(1, 2).unwrap();
        t.successor(8, 9).unwrap();
        let all = collect_all(&t);
        // Left: 5 choices for the point after 1, then 2 is forced, then 4!.
        // Right: 9 forced after 8, then 3!.
        assert_eq!(all.len(), 5 * 24 * 6);
        assert_eq!(all[0].to_string(), "(1,3,2,4,5,6,7)(8,9,10,11,12)");
        for y in &all {
            assert_eq!(y.apply(y.apply(1)), 2);
            assert_eq!(y.apply(8), 9);
            assert!(t.satisfies(y));
        }
    }

    #[test]
    fn exclusions_steer_supports() {
        // A single left fixed point that must not be 2.
        let mut t = CycleTemplate::new(12, 7, vec![left(1), left(6), right(5)]).unwrap();
        t.forbid(2, 0).unwrap();
        let all = collect_all(&t);
        assert_eq!(all.len(), 6 * 120 * 24); // 6 fixed-point choices · 5! · 4!
        for y in &all {
            assert_ne!(y.apply(2), 2, "2 may never be the left fixed point");
        }
    }

    #[test]
    fn cross_side_exclusion_is_trivial() {
        let mut t = CycleTemplate::new(6, 4, vec![left(4), right(2)]).unwrap();
        t.forbid(5, 0).unwrap(); // right-side point, left slot: no constraint
        assert_eq!(count_all(&t), 6);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(matches!(
            CycleTemplate::new(6, 4, vec![left(3), right(2)]),
            Err(TemplateError::BadLengths(_))
        ));
        let mut t = CycleTemplate::new(6, 4, vec![left(4), right(2)]).unwrap();
        assert!(matches!(t.place(5, 0), Err(TemplateError::WrongSide { .. })));
        assert!(matches!(t.successor(1, 5), Err(TemplateError::SplitEquation(_))));
        assert!(matches!(t.successor(1, 1), Err(TemplateError::PlacementConflict(_))));

        let mut t2 = CycleTemplate::new(6, 4, vec![left(1), left(3), right(2)]).unwrap();
        t2.place(1, 0).unwrap();
        assert!(matches!(t2.place(2, 0), Err(TemplateError::Capacity { .. })));

        // Equation endpoints pinned to different slots fail at enumeration.
        let mut t3 = CycleTemplate::new(6, 4, vec![left(2), left(2), right(2)]).unwrap();
        t3.place(1, 0).unwrap();
        t3.place(2, 1).unwrap();
        t3.successor(1, 2).unwrap();
        let r = t3.enumerate(&mut |_| ControlFlow::<()>::Continue(()));
        assert!(matches!(r, Err(TemplateError::SplitEquation(_))));
    }

    #[test]
    fn forced_parity_matches_members() {
        let shapes: Vec<CycleTemplate> = vec![
            CycleTemplate::new(12, 7, vec![left(7), right(5)]).unwrap(),
            CycleTemplate::new(12, 7, vec![left(7), right(4), right(1)]).unwrap(),
            CycleTemplate::new(13, 7, vec![left(3), left(4), right(6)]).unwrap(),
        ];
        for t in &shapes {
            let want = t.forced_parity();
            let mut seen = 0;
            t.enumerate(&mut |y| {
                assert_eq!(y.parity(), want);
                seen += 1;
                if seen == 50 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .unwrap();
            assert!(seen > 0);
        }
    }

    #[test]
    fn early_break_stops_enumeration() {
        let t = CycleTemplate::new(12, 7, vec![left(7), right(5)]).unwrap();
        let mut seen = 0u32;
        let broke = t
            .enumerate(&mut |_| {
                seen += 1;
                if seen == 3 {
                    ControlFlow::Break("stop")
                } else {
                    ControlFlow::Continue(())
                }
            })
            .unwrap();
        assert_eq!(broke, Some("stop"));
        assert_eq!(seen, 3);
    }

    #[test]
    fn satisfies_rejects_mismatches() {
        let mut t = CycleTemplate::new(13, 7, vec![left(7), right(5), right(1)]).unwrap();
        t.place(9, 2).unwrap();
        let good =
            Permutation::from_disjoint_cycles(13, &[
                (1..=7).collect(),
                vec![8, 10, 11, 12, 13],
            ])
            .unwrap();
        assert!(t.satisfies(&good));
        // Wrong fixed point.
        let bad = Permutation::from_disjoint_cycles(13, &[
            (1..=7).collect(),
            vec![8, 9, 11, 12, 13],
        ])
        .unwrap();
        assert!(!t.satisfies(&bad));
        // Side-impure cycle.
        let crossing =
            Permutation::from_disjoint_cycles(13, &[(2..=8).collect(), vec![1, 10, 11, 12, 13]])
                .unwrap();
        assert!(!t.satisfies(&crossing));
    }

    #[test]
    fn successor_chain_on_cycle_start_is_forced() {
        // 8 is the smallest right point, so 8^y = 10 then 10^y = 12 pin the
        // first three positions of the right cycle word.
        let mut t = CycleTemplate::new(12, 7, vec![left(7), right(5)]).unwrap();
        t.successor(8, 10).unwrap();
        t.successor(10, 12).unwrap();
        let all = collect_all(&t);
        assert_eq!(all.len(), 720 * 2); // 6! left · (9, 11) in two orders
        for y in &all {
            assert_eq!(y.apply(8), 10);
            assert_eq!(y.apply(10), 12);
        }
        assert_eq!(all[0].to_string(), "(1,2,3,4,5,6,7)(8,10,12,9,11)");
    }
}
