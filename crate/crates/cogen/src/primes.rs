//! Certified prime-existence searches.
//!
//! The witness builder needs three families of auxiliary primes, each backed
//! by a classical existence result, so the searches here are total on their
//! stated domains:
//!
//! * [`bertrand_pk`] — a prime strictly between `k/2` and `k−1` (exists for
//!   every `k ≥ 7`, and is automatically at least 5 and coprime to `k`);
//! * [`prime_p1`] — an odd prime at most `k−5` that does not divide `n−k`
//!   (exists whenever `n > k > n/2` and `k ≥ 10`);
//! * [`prime_p2`] — a prime strictly between 2 and `n−k−3` that does not
//!   divide `k`, **or** a proof that `n−k+1 < 2(√n − 1)`, whichever holds
//!   (at least one does whenever `n > k > n/2` and `n−k > 10`).
//!
//! Every search returns a [`PrimeWitness`] carrying the list of facts that
//! were checked, each as a machine-verifiable [`Constraint`], so callers can
//! re-verify a witness without trusting the search. If a search exhausts its
//! range — impossible unless one of the existence results is false — it
//! reports an internal-inconsistency error rather than guessing.
//!
//! Primality is decided by deterministic trial division; all values handled
//! here are far below any range where that is a bottleneck.

use serde::Serialize;
use thiserror::Error;

/// Errors from the prime searches.
#[derive(Debug, Error)]
pub enum PrimeError {
    /// The input lies outside the stated domain of the operation.
    #[error("precondition violated in {op}: {message}")]
    Precondition {
        /// Operation that rejected the input.
        op: &'static str,
        /// Human-readable description of the violated requirement.
        message: String,
    },
    /// A search exhausted its range even though an existence theorem
    /// guarantees a result; this indicates a bug, never a valid outcome.
    #[error("internal inconsistency in {op}: {message}")]
    InternalInconsistency {
        /// Operation whose search ran dry.
        op: &'static str,
        /// What was searched and where it failed.
        message: String,
    },
}

/// Deterministic primality test by trial division.
///
/// Suitable for the small values used throughout this crate; no
/// probabilistic shortcuts are taken.
#[must_use]
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut d = 3u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Which of the three prime families a witness belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    /// Mid-range prime: `k/2 < p < k−1`.
    Pk,
    /// Small odd prime `≤ k−5` avoiding `n−k`.
    P1,
    /// Prime in `(2, n−k−3)` avoiding `k`.
    P2,
}

/// A single machine-checkable fact recorded by a search.
///
/// Witnesses carry these so that their defining properties can be
/// re-verified independently of the search that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// `value` is prime.
    IsPrime {
        /// The number claimed prime.
        value: u64,
    },
    /// `value` is odd.
    IsOdd {
        /// The number claimed odd.
        value: u64,
    },
    /// `value < bound`.
    LessThan {
        /// Left-hand side.
        value: u64,
        /// Strict upper bound.
        bound: u64,
    },
    /// `value ≤ bound`.
    AtMost {
        /// Left-hand side.
        value: u64,
        /// Inclusive upper bound.
        bound: u64,
    },
    /// `value > bound`.
    GreaterThan {
        /// Left-hand side.
        value: u64,
        /// Strict lower bound.
        bound: u64,
    },
    /// `2·value > target`; encodes `value > target/2` without rationals.
    DoubleExceeds {
        /// The value whose double is compared.
        value: u64,
        /// The quantity that must be exceeded by `2·value`.
        target: u64,
    },
    /// `divisor` does not divide `target` (with `target ≥ 1`).
    DoesNotDivide {
        /// Candidate divisor.
        divisor: u64,
        /// Number it must not divide.
        target: u64,
    },
    /// `divisor` divides `target`.
    Divides {
        /// Candidate divisor.
        divisor: u64,
        /// Number it must divide.
        target: u64,
    },
    /// `base² < bound`; encodes a square-root inequality exactly.
    SquaredLessThan {
        /// The side that gets squared.
        base: u64,
        /// Strict upper bound on the square.
        bound: u64,
    },
}

impl Constraint {
    /// Re-evaluates the fact from scratch.
    #[must_use]
    pub fn holds(&self) -> bool {
        match *self {
            Constraint::IsPrime { value } => is_prime(value),
            Constraint::IsOdd { value } => value % 2 == 1,
            Constraint::LessThan { value, bound } => value < bound,
            Constraint::AtMost { value, bound } => value <= bound,
            Constraint::GreaterThan { value, bound } => value > bound,
            Constraint::DoubleExceeds { value, target } => 2 * value > target,
            Constraint::DoesNotDivide { divisor, target } => {
                target >= 1 && divisor >= 1 && target % divisor != 0
            }
            Constraint::Divides { divisor, target } => divisor >= 1 && target % divisor == 0,
            Constraint::SquaredLessThan { base, bound } => base * base < bound,
        }
    }
}

/// A prime found by one of the searches, with the facts that certify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    /// Which search produced the witness.
    pub kind: PrimeKind,
    /// The prime itself.
    pub value: u64,
    /// Every inequality and divisibility fact the search verified.
    pub constraints_checked: Vec<Constraint>,
}

impl PrimeWitness {
    /// Re-verifies every recorded constraint from scratch.
    #[must_use]
    pub fn reverify(&self) -> bool {
        self.constraints_checked.iter().all(Constraint::holds)
    }
}

/// Outcome of [`prime_p2`]: either a qualifying prime exists, or the
/// fallback inequality `n−k+1 < 2(√n − 1)` holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Dichotomy {
    /// A prime in `(2, n−k−3)` coprime to `k` was found.
    Prime {
        /// The certified prime.
        witness: PrimeWitness,
    },
    /// No such prime exists, and `n−k+1 < 2(√n − 1)` was verified exactly
    /// (as `(n−k+3)² < 4n`, avoiding floating point).
    InequalityCase {
        /// Degree parameter.
        n: u64,
        /// Side size parameter.
        k: u64,
        /// The facts verified for this branch: that every prime in the
        /// searched range divides `k`, and the squared-form inequality.
        constraints_checked: Vec<Constraint>,
    },
}

impl Dichotomy {
    /// The witness, when the prime branch was taken.
    #[must_use]
    pub fn witness(&self) -> Option<&PrimeWitness> {
        match self {
            Dichotomy::Prime { witness } => Some(witness),
            Dichotomy::InequalityCase { .. } => None,
        }
    }

    /// True when the inequality branch was taken.
    #[must_use]
    pub fn is_inequality_case(&self) -> bool {
        matches!(self, Dichotomy::InequalityCase { .. })
    }
}

/// Tie-breaking rule when several primes qualify.
///
/// The existence results never single out one prime, so any qualifying
/// choice is mathematically valid; fixing a rule makes witnesses
/// reproducible. `Spec` is the rule used throughout the crate (largest for
/// the mid-range prime, smallest for the other two); `Opposite` flips every
/// choice and exists so tests can confirm that downstream constructions do
/// not secretly depend on the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeRule {
    /// Largest mid-range prime; smallest `p⁽¹⁾`/`p⁽²⁾`.
    Spec,
    /// Smallest mid-range prime; largest `p⁽¹⁾`/`p⁽²⁾`.
    Opposite,
}

/// Finds a prime `p` with `k/2 < p < k−1` (largest under
/// [`PrimeRule::Spec`]).
///
/// Such a prime always exists for `k ≥ 7`, is automatically at least 5, and
/// never divides `k` (any multiple of `p` other than `p` itself already
/// exceeds `k`); both facts are checked and recorded anyway.
///
/// # Errors
///
/// `Precondition` if `k < 7`; `InternalInconsistency` if the search range
/// contains no prime (impossible for valid input).
pub fn bertrand_pk(k: u64) -> Result<PrimeWitness, PrimeError> {
    bertrand_pk_with(k, PrimeRule::Spec)
}

/// [`bertrand_pk`] with an explicit tie-breaking rule.
///
/// # Errors
///
/// Same conditions as [`bertrand_pk`].
pub fn bertrand_pk_with(k: u64, rule: PrimeRule) -> Result<PrimeWitness, PrimeError> {
    const OP: &str = "bertrand_pk";
    if k < 7 {
        return Err(PrimeError::Precondition {
            op: OP,
            message: format!("k must be at least 7, got {k}"),
        });
    }
    // Candidates p with 2p > k and p < k−1, i.e. p in (k/2, k−1). The range
    // is scanned from the end the rule selects, so the first hit is the
    // answer and the scan stops there.
    let qualifies = |p: u64| 2 * p > k && is_prime(p);
    let found = match rule {
        PrimeRule::Spec => (2..k - 1).rev().find(|&p| qualifies(p)),
        PrimeRule::Opposite => (2..k - 1).find(|&p| qualifies(p)),
    };
    let Some(p) = found else {
        return Err(PrimeError::InternalInconsistency {
            op: OP,
            message: format!("no prime strictly between {k}/2 and {}", k - 1),
        });
    };
    let constraints = vec![
        Constraint::IsPrime { value: p },
        Constraint::DoubleExceeds { value: p, target: k },
        Constraint::LessThan {
            value: p,
            bound: k - 1,
        },
        Constraint::GreaterThan { value: p, bound: 4 },
        Constraint::DoesNotDivide {
            divisor: p,
            target: k,
        },
    ];
    finish_witness(OP, PrimeKind::Pk, p, constraints)
}

/// Finds an odd prime `p ≤ k−5` with `p ∤ (n−k)` (smallest under
/// [`PrimeRule::Spec`]).
///
/// Such a prime always exists for `n > k > n/2` with `k ≥ 10`.
///
/// # Errors
///
/// `Precondition` if the domain requirements fail; `InternalInconsistency`
/// if every odd prime `≤ k−5` divides `n−k` (impossible for valid input).
pub fn prime_p1(n: u64, k: u64) -> Result<PrimeWitness, PrimeError> {
    prime_p1_with(n, k, PrimeRule::Spec)
}

/// [`prime_p1`] with an explicit tie-breaking rule.
///
/// # Errors
///
/// Same conditions as [`prime_p1`].
pub fn prime_p1_with(n: u64, k: u64, rule: PrimeRule) -> Result<PrimeWitness, PrimeError> {
    const OP: &str = "prime_p1";
    check_half_range(OP, n, k)?;
    if k < 10 {
        return Err(PrimeError::Precondition {
            op: OP,
            message: format!("k must be at least 10, got {k}"),
        });
    }
    // Scanned from the end the rule selects; the first hit is the answer.
    let qualifies = |p: u64| p % 2 == 1 && is_prime(p) && (n - k) % p != 0;
    let found = match rule {
        PrimeRule::Spec => (3..=k - 5).find(|&p| qualifies(p)),
        PrimeRule::Opposite => (3..=k - 5).rev().find(|&p| qualifies(p)),
    };
    let Some(p) = found else {
        return Err(PrimeError::InternalInconsistency {
            op: OP,
            message: format!(
                "every odd prime at most {} divides {}",
                k - 5,
                n - k
            ),
        });
    };
    let constraints = vec![
        Constraint::IsPrime { value: p },
        Constraint::IsOdd { value: p },
        Constraint::AtMost {
            value: p,
            bound: k - 5,
        },
        Constraint::DoesNotDivide {
            divisor: p,
            target: n - k,
        },
    ];
    finish_witness(OP, PrimeKind::P1, p, constraints)
}

/// Searches for a prime `p` with `2 < p < n−k−3` and `p ∤ k` (smallest under
/// [`PrimeRule::Spec`]); when none exists, verifies the fallback inequality
/// `n−k+1 < 2(√n − 1)` instead, in the exact squared form `(n−k+3)² < 4n`.
///
/// For `n > k > n/2` with `n−k > 10`, at least one branch always holds.
///
/// # Errors
///
/// `Precondition` if the domain requirements fail; `InternalInconsistency`
/// if neither branch verifies (impossible for valid input).
pub fn prime_p2(n: u64, k: u64) -> Result<Dichotomy, PrimeError> {
    prime_p2_with(n, k, PrimeRule::Spec)
}

/// [`prime_p2`] with an explicit tie-breaking rule.
///
/// # Errors
///
/// Same conditions as [`prime_p2`].
pub fn prime_p2_with(n: u64, k: u64, rule: PrimeRule) -> Result<Dichotomy, PrimeError> {
    const OP: &str = "prime_p2";
    check_half_range(OP, n, k)?;
    if n - k <= 10 {
        return Err(PrimeError::Precondition {
            op: OP,
            message: format!("n - k must exceed 10, got {}", n - k),
        });
    }
    // Scanned from the end the rule selects; the first hit is the answer.
    let qualifies = |p: u64| is_prime(p) && k % p != 0;
    let found = match rule {
        PrimeRule::Spec => (3..n - k - 3).find(|&p| qualifies(p)),
        PrimeRule::Opposite => (3..n - k - 3).rev().find(|&p| qualifies(p)),
    };
    if let Some(p) = found {
        let constraints = vec![
            Constraint::IsPrime { value: p },
            Constraint::GreaterThan { value: p, bound: 2 },
            Constraint::LessThan {
                value: p,
                bound: n - k - 3,
            },
            Constraint::DoesNotDivide {
                divisor: p,
                target: k,
            },
        ];
        return Ok(Dichotomy::Prime {
            witness: finish_witness(OP, PrimeKind::P2, p, constraints)?,
        });
    }
    // No qualifying prime: the inequality n−k+1 < 2(√n − 1) must hold.
    // Both sides are positive, so squaring (n−k+3) < 2√n is exact.
    let inequality = Constraint::SquaredLessThan {
        base: n - k + 3,
        bound: 4 * n,
    };
    if !inequality.holds() {
        return Err(PrimeError::InternalInconsistency {
            op: OP,
            message: format!(
                "no prime in (2, {}) avoids dividing {k}, yet ({})^2 >= 4*{n}",
                n - k - 3,
                n - k + 3
            ),
        });
    }
    let mut constraints: Vec<Constraint> = (3..n - k - 3)
        .filter(|&p| is_prime(p))
        .map(|p| Constraint::Divides {
            divisor: p,
            target: k,
        })
        .collect();
    constraints.push(inequality);
    debug_assert!(constraints.iter().all(Constraint::holds));
    Ok(Dichotomy::InequalityCase {
        n,
        k,
        constraints_checked: constraints,
    })
}

/// Confirms the forced-value property of a mid-range prime `pk` for `(n,k)`:
/// if `pk` divides `n−k` then `pk = n−k`, and if `pk` divides `n−k−1` then
/// `pk = n−k−1`.
///
/// Both implications hold for every valid `(n, k, pk)` triple, so this is
/// used as a sweep oracle that is expected to always return `true`. A zero
/// quantity (`n−k−1 = 0` when `n = k+1`) imposes no constraint.
#[must_use]
pub fn lemma23_check(n: u64, k: u64, pk: u64) -> bool {
    let first = {
        let d = n - k;
        d == 0 || d % pk != 0 || pk == d
    };
    let second = {
        let d = n - k - 1;
        d == 0 || d % pk != 0 || pk == d
    };
    first && second
}

/// Shared domain check `n > k > n/2` (the latter as `2k > n`).
fn check_half_range(op: &'static str, n: u64, k: u64) -> Result<(), PrimeError> {
    if n <= k || 2 * k <= n {
        return Err(PrimeError::Precondition {
            op,
            message: format!("need n > k > n/2, got n={n}, k={k}"),
        });
    }
    Ok(())
}

/// Wraps a found prime in a witness after re-verifying every constraint.
fn finish_witness(
    op: &'static str,
    kind: PrimeKind,
    value: u64,
    constraints_checked: Vec<Constraint>,
) -> Result<PrimeWitness, PrimeError> {
    if let Some(bad) = constraints_checked.iter().find(|c| !c.holds()) {
        return Err(PrimeError::InternalInconsistency {
            op,
            message: format!("recorded constraint fails to re-verify: {bad:?}"),
        });
    }
    Ok(PrimeWitness {
        kind,
        value,
        constraints_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_division_matches_small_table() {
        let primes_below_60: Vec<u64> = (0..60).filter(|&m| is_prime(m)).collect();
        assert_eq!(
            primes_below_60,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(999_983));
        assert!(!is_prime(999_981));
    }

    #[test]
    fn bertrand_pk_known_values() {
        assert_eq!(bertrand_pk(7).unwrap().value, 5);
        assert_eq!(bertrand_pk(12).unwrap().value, 7);
        assert_eq!(bertrand_pk(20).unwrap().value, 17);
    }

    #[test]
    fn bertrand_pk_rejects_small_k() {
        assert!(matches!(
            bertrand_pk(6),
            Err(PrimeError::Precondition { .. })
        ));
    }

    #[test]
    fn bertrand_pk_range_and_reverify_sweep() {
        for k in 7..=2000 {
            let w = bertrand_pk(k).unwrap();
            assert_eq!(w.kind, PrimeKind::Pk);
            assert!(is_prime(w.value));
            assert!(2 * w.value > k, "k={k}");
            assert!(w.value < k - 1, "k={k}");
            assert!(w.value >= 5, "k={k}");
            assert!(k % w.value != 0, "k={k}");
            assert!(w.reverify());
        }
    }

    #[test]
    fn opposite_rule_still_produces_valid_mid_range_primes() {
        assert_eq!(bertrand_pk_with(20, PrimeRule::Opposite).unwrap().value, 11);
        for k in [7u64, 12, 20, 57, 100, 501] {
            let w = bertrand_pk_with(k, PrimeRule::Opposite).unwrap();
            assert!(2 * w.value > k && w.value < k - 1 && is_prime(w.value));
            assert!(w.reverify());
        }
    }

    #[test]
    fn prime_p1_known_values() {
        assert_eq!(prime_p1(19, 10).unwrap().value, 5);
        assert_eq!(prime_p1(21, 11).unwrap().value, 3);
        assert_eq!(prime_p1(16, 10).unwrap().value, 5);
    }

    #[test]
    fn prime_p1_rejects_out_of_domain_input() {
        assert!(matches!(
            prime_p1(19, 9),
            Err(PrimeError::Precondition { .. })
        ));
        assert!(matches!(
            prime_p1(22, 11),
            Err(PrimeError::Precondition { .. })
        ));
        assert!(matches!(
            prime_p1(10, 11),
            Err(PrimeError::Precondition { .. })
        ));
    }

    #[test]
    fn prime_p1_exists_on_domain_sweep() {
        for k in 10..=300 {
            for n in (k + 1)..(2 * k) {
                let w = prime_p1(n, k).unwrap();
                assert!(w.value % 2 == 1 && w.value <= k - 5);
                assert!((n - k) % w.value != 0);
                assert!(w.reverify());
            }
        }
    }

    #[test]
    fn prime_p1_opposite_rule_valid_on_samples() {
        let w = prime_p1_with(19, 10, PrimeRule::Opposite).unwrap();
        assert_eq!(w.value, 5);
        for (n, k) in [(21u64, 11u64), (40, 25), (100, 60), (399, 200)] {
            let w = prime_p1_with(n, k, PrimeRule::Opposite).unwrap();
            assert!(w.value % 2 == 1 && w.value <= k - 5 && (n - k) % w.value != 0);
            assert!(w.reverify());
        }
    }

    #[test]
    fn prime_p2_known_values() {
        let d = prime_p2(40, 25).unwrap();
        assert_eq!(d.witness().unwrap().value, 3);
        let d = prime_p2(36, 24).unwrap();
        assert_eq!(d.witness().unwrap().value, 5);
        let d = prime_p2(221, 210).unwrap();
        assert!(d.is_inequality_case());
    }

    #[test]
    fn prime_p2_inequality_case_records_exact_squared_comparison() {
        let Dichotomy::InequalityCase {
            n,
            k,
            constraints_checked,
        } = prime_p2(221, 210).unwrap()
        else {
            panic!("expected the inequality branch");
        };
        assert_eq!((n, k), (221, 210));
        assert!(constraints_checked.contains(&Constraint::SquaredLessThan {
            base: 14,
            bound: 884
        }));
        assert!(constraints_checked.iter().all(Constraint::holds));
    }

    #[test]
    fn prime_p2_rejects_out_of_domain_input() {
        assert!(matches!(
            prime_p2(20, 11),
            Err(PrimeError::Precondition { .. })
        ));
        assert!(matches!(
            prime_p2(40, 20),
            Err(PrimeError::Precondition { .. })
        ));
    }

    #[test]
    fn prime_p2_verified_branch_on_domain_sweep() {
        for n in 12..=800u64 {
            for k in (n / 2 + 1)..n {
                if n - k <= 10 {
                    continue;
                }
                match prime_p2(n, k).unwrap() {
                    Dichotomy::Prime { witness } => {
                        let p = witness.value;
                        assert!(p > 2 && p < n - k - 3 && k % p != 0 && is_prime(p));
                        assert!(witness.reverify());
                    }
                    Dichotomy::InequalityCase {
                        constraints_checked,
                        ..
                    } => {
                        assert!((n - k + 3) * (n - k + 3) < 4 * n);
                        assert!(constraints_checked.iter().all(Constraint::holds));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_p2_opposite_rule_valid_on_samples() {
        let d = prime_p2_with(40, 25, PrimeRule::Opposite).unwrap();
        assert_eq!(d.witness().unwrap().value, 11);
        let d = prime_p2_with(221, 210, PrimeRule::Opposite).unwrap();
        assert!(d.is_inequality_case());
    }

    #[test]
    fn lemma23_known_values() {
        assert!(lemma23_check(12, 7, 5));
        assert!(lemma23_check(13, 7, 5));
    }

    #[test]
    fn lemma23_exhaustive_sweep() {
        for k in 7..=500u64 {
            let pk = bertrand_pk(k).unwrap().value;
            for n in (k + 1)..(2 * k) {
                assert!(lemma23_check(n, k, pk), "n={n}, k={k}, pk={pk}");
            }
        }
    }

    #[test]
    fn lemma23_detects_forced_value_violations() {
        // Outside the valid domain the implications can genuinely fail:
        // 5 divides 10 but 5 != 10.
        assert!(!lemma23_check(17, 7, 5));
    }

    #[test]
    fn tampered_witness_fails_reverification() {
        let mut w = bertrand_pk(20).unwrap();
        w.constraints_checked.push(Constraint::DoesNotDivide {
            divisor: 17,
            target: 34,
        });
        assert!(!w.reverify());
    }

    #[test]
    fn witnesses_serialize_with_kind_tags() {
        let w = bertrand_pk(12).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["kind"], "pk");
        assert_eq!(json["value"], 7);
        assert!(json["constraints_checked"].as_array().unwrap().len() >= 4);
        let d = prime_p2(221, 210).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["case"], "inequality_case");
    }
}
