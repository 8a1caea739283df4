//! Cross-operation properties of the coclique module at integration scale:
//! the survivor sweep up to degree 9, closure certificates at degrees 8–10,
//! and agreement between the arithmetic criterion and the exhaustive sweeps.

use cogen::coclique::{
    coclique_closure, graph_edges, is_coclique, is_maximal_coclique, reproduce_lemma_3_2,
    split_subgroup_maximality, Certification, TheoremStatus,
};
use cogen::coclique::theorem_status;
use cogen::group::{intransitive_subgroup, GroupKind};
use cogen::perm::{parse_cycles, Permutation};
use cogen::witness::Scenario;

fn subgroup_nonidentity(n: u16, k: u16, kind: GroupKind) -> Vec<Permutation> {
    intransitive_subgroup(n, k, kind)
        .elements()
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect()
}

#[test]
fn survivor_sweep_up_to_degree_nine_matches_the_frozen_list() {
    let report = reproduce_lemma_3_2(9).unwrap();
    let got: Vec<(GroupKind, u16, u16, String, u64)> = report
        .survivors
        .iter()
        .map(|s| (s.kind, s.n, s.k, s.representative.to_string(), s.class_size))
        .collect();
    let expected = vec![
        (GroupKind::Sym, 4, 3, "(1,2)(3,4)".to_string(), 3),
        (GroupKind::Alt, 5, 3, "(1,2)(3,4)".to_string(), 6),
        (GroupKind::Sym, 6, 4, "(4,5)".to_string(), 8),
        (GroupKind::Alt, 6, 4, "(3,5)(4,6)".to_string(), 12),
        (GroupKind::Sym, 8, 6, "(6,7)".to_string(), 12),
        (GroupKind::Sym, 9, 6, "(6,7)".to_string(), 18),
    ];
    assert_eq!(got, expected);
    // 2 + 4 + 4 + 6 + 6 + 8 scenarios for n = 4..=9.
    assert_eq!(report.scenarios_swept, 30);
}

#[test]
fn survivor_sweep_over_the_full_range_matches_the_frozen_list() {
    let report = reproduce_lemma_3_2(11).unwrap();
    let got: Vec<(GroupKind, u16, u16, String, u64)> = report
        .survivors
        .iter()
        .map(|s| (s.kind, s.n, s.k, s.representative.to_string(), s.class_size))
        .collect();
    let expected = vec![
        (GroupKind::Sym, 4, 3, "(1,2)(3,4)".to_string(), 3),
        (GroupKind::Alt, 5, 3, "(1,2)(3,4)".to_string(), 6),
        (GroupKind::Sym, 6, 4, "(4,5)".to_string(), 8),
        (GroupKind::Alt, 6, 4, "(3,5)(4,6)".to_string(), 12),
        (GroupKind::Sym, 8, 6, "(6,7)".to_string(), 12),
        (GroupKind::Sym, 9, 6, "(6,7)".to_string(), 18),
        (GroupKind::Sym, 10, 6, "(6,7)".to_string(), 24),
        (GroupKind::Sym, 10, 8, "(8,9)".to_string(), 16),
    ];
    assert_eq!(got, expected, "nothing survives at degree 11");
    assert_eq!(report.scenarios_swept, 48);
}

#[test]
fn closure_at_degree_eight_is_fully_verified() {
    let s = Scenario::new(8, 6, GroupKind::Sym).unwrap();
    let closure = coclique_closure(&s).unwrap();
    assert_eq!(closure.extra_class.len(), 12);
    assert_eq!(closure.elements.len(), 1439 + 12);
    assert_eq!(closure.extra_class[0].to_string(), "(6,7)");
    match closure.certification {
        Certification::FullyVerified { pair_tests, extension_tests } => {
            let m = 1451u64;
            assert_eq!(pair_tests, m * (m - 1) / 2);
            assert!(extension_tests > 0);
        }
        other => panic!("expected a full certificate at degree 8, got {other:?}"),
    }
    // The certified closure also passes the public maximality sweep.
    let report = is_maximal_coclique(&closure.elements, GroupKind::Sym, 8, 20_000_000).unwrap();
    assert!(report.is_coclique);
    assert!(report.is_maximal);
    assert_eq!(report.elements_checked, 40320 - 1452);
}

#[test]
fn closures_at_degrees_nine_and_ten_are_class_reduced() {
    let cases: [(u16, u16, usize, usize, &str); 3] = [
        (9, 6, 18, 4319 + 18, "(6,7)"),
        (10, 6, 24, 17279 + 24, "(6,7)"),
        (10, 8, 16, 80639 + 16, "(8,9)"),
    ];
    for (n, k, class_size, closure_size, least) in cases {
        let s = Scenario::new(n, k, GroupKind::Sym).unwrap();
        let closure = coclique_closure(&s).unwrap();
        assert_eq!(closure.extra_class.len(), class_size, "class size at ({n},{k})");
        assert_eq!(closure.elements.len(), closure_size, "closure size at ({n},{k})");
        assert_eq!(closure.extra_class[0].to_string(), least);
        assert!(
            matches!(closure.certification, Certification::ClassReduced { .. }),
            "expected a class-reduced certificate at ({n},{k})"
        );
        // The adjoined class consists of the cross transpositions.
        assert!(closure
            .extra_class
            .iter()
            .all(|t| t.cycles().len() == 1 && t.cycles()[0].len() == 2));
        assert!(closure.extra_class.contains(&parse_cycles(&format!("(1,{})", k + 1), n).unwrap()));
    }
}

#[test]
fn arithmetic_criterion_agrees_with_the_full_sweep_up_to_degree_seven() {
    for n in 4u16..=7 {
        for k in (n / 2 + 1)..n {
            for kind in [GroupKind::Sym, GroupKind::Alt] {
                let set = subgroup_nonidentity(n, k, kind);
                let report = is_maximal_coclique(&set, kind, n, 10_000_000).unwrap();
                assert!(report.is_coclique, "M must be a coclique at ({n},{k},{kind})");
                let status = theorem_status(n, k, kind).unwrap();
                assert_eq!(
                    report.is_maximal,
                    status == TheoremStatus::Maximal,
                    "full sweep disagrees with the criterion at ({n},{k},{kind})"
                );
            }
        }
    }
}

#[test]
fn arithmetic_criterion_agrees_with_the_reduced_sweep_up_to_degree_nine() {
    for n in 4u16..=9 {
        for k in (n / 2 + 1)..n {
            for kind in [GroupKind::Sym, GroupKind::Alt] {
                let s = Scenario::new(n, k, kind).unwrap();
                let report = split_subgroup_maximality(&s).unwrap();
                let status = theorem_status(n, k, kind).unwrap();
                assert_eq!(
                    report.is_maximal,
                    status == TheoremStatus::Maximal,
                    "reduced sweep disagrees with the criterion at ({n},{k},{kind})"
                );
            }
        }
    }
}

#[test]
fn no_two_transpositions_generate_beyond_degree_three() {
    for n in 4u16..=8 {
        let mut transpositions = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                transpositions.push(parse_cycles(&format!("({a},{b})"), n).unwrap());
            }
        }
        let report = is_coclique(&transpositions, GroupKind::Sym, n).unwrap();
        assert!(report.is_coclique, "transpositions form a coclique at n = {n}");
        let pairs = transpositions.len() as u64;
        assert_eq!(report.elements_checked, pairs * (pairs - 1) / 2);
    }
}

#[test]
fn closure_element_counts_follow_the_subgroup_order() {
    // |elements| = |M| - 1 + |class| in every closure case.
    let cases =
        [(4u16, 3u16, GroupKind::Sym), (5, 3, GroupKind::Alt), (6, 4, GroupKind::Sym), (6, 4, GroupKind::Alt)];
    for (n, k, kind) in cases {
        let s = Scenario::new(n, k, kind).unwrap();
        let closure = coclique_closure(&s).unwrap();
        let m_order: u64 = subgroup_nonidentity(n, k, kind).len() as u64 + 1;
        assert_eq!(
            closure.elements.len() as u64,
            m_order - 1 + closure.extra_class.len() as u64,
            "element count at ({n},{k},{kind})"
        );
    }
}

#[test]
fn degree_five_graph_confirms_the_coclique_reports() {
    // Brute-force cross-check at degree 5: the edge list and the coclique
    // check must tell the same story about the split subgroup.
    let edges = graph_edges(GroupKind::Sym, 5).unwrap();
    let set: Vec<Permutation> = subgroup_nonidentity(5, 3, GroupKind::Sym);
    let inside: std::collections::HashSet<&Permutation> = set.iter().collect();
    let internal_edges = edges
        .iter()
        .filter(|(u, v)| inside.contains(u) && inside.contains(v))
        .count();
    assert_eq!(internal_edges, 0, "the split subgroup spans no edges");
    let report = is_coclique(&set, GroupKind::Sym, 5).unwrap();
    assert!(report.is_coclique);
}
