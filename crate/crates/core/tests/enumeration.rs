//! The streaming enumerator against a literal, fully materialized
//! construction of the iterated partition sets, and against the counting
//! routes.

use std::collections::BTreeSet;

use hyperbell::enumerator::{
    census, distinct_serializations, ground_census, iterate_partitions, partitions_of,
    verify_distinct_children, NestedPartition, DEFAULT_BUDGET,
};
use hyperbell::exact::{nat, rat_from_nat, Nat, Rat};
use hyperbell::triangles::{
    average_cardinality, bell, global_cache, higher_stirling, BellMethod, StirlingMethod,
};
use num_bigint::BigInt;

/// Set partitions by inserting each element into an existing block or a new
/// one. Shares nothing with the restricted-growth enumerator.
fn naive_partitions(items: &[String]) -> Vec<Vec<Vec<String>>> {
    let Some((last, rest)) = items.split_last() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in naive_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(last.clone());
            out.push(q);
        }
        let mut q = p.clone();
        q.push(vec![last.clone()]);
        out.push(q);
    }
    out
}

/// A set of canonical strings rendered as a canonical set string.
fn set_of(mut members: Vec<String>) -> String {
    members.sort_by(|a, b| min_atom(a).cmp(&min_atom(b)).then(a.cmp(b)));
    format!("{{{}}}", members.join(","))
}

fn min_atom(s: &str) -> u32 {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().unwrap())
        .min()
        .unwrap()
}

/// Outer boxes of a canonical element string.
fn outer_boxes(element: &str) -> Vec<String> {
    let inner = &element[1..element.len() - 1];
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in inner.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(inner[start..i].to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(inner[start..].to_string());
    out
}

/// The order-`m` partition set of `{1..n}`, built literally: the union over
/// every order `m - 1` element of the partition set of its boxes.
fn literal_partition_set(n: usize, m: usize) -> BTreeSet<String> {
    let atoms: Vec<String> = (1..=n).map(|a| a.to_string()).collect();
    let mut current: BTreeSet<String> = naive_partitions(&atoms)
        .into_iter()
        .map(|p| set_of(p.into_iter().map(set_of).collect()))
        .collect();
    for _ in 1..m {
        let mut next = BTreeSet::new();
        for element in &current {
            for p in naive_partitions(&outer_boxes(element)) {
                next.insert(set_of(p.into_iter().map(set_of).collect()));
            }
        }
        current = next;
    }
    current
}

#[test]
fn enumerator_matches_literal_construction() {
    for (n, m) in [(1, 1), (1, 3), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let literal = literal_partition_set(n, m);
        let streamed: Vec<String> = iterate_partitions(n, m, DEFAULT_BUDGET)
            .unwrap()
            .map(|p| p.serialize())
            .collect();
        let streamed_set: BTreeSet<String> = streamed.iter().cloned().collect();
        assert_eq!(streamed.len(), streamed_set.len(), "duplicates at ({n},{m})");
        assert_eq!(streamed_set, literal, "({n},{m})");
    }
}

#[test]
fn literal_oracle_recovers_second_order_counts_of_three() {
    let atoms: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    assert_eq!(naive_partitions(&atoms).len(), 5);
    assert_eq!(literal_partition_set(3, 2).len(), 12);
}

#[test]
fn partitions_of_counts_are_bell_numbers() {
    for len in 1..=8usize {
        let items: Vec<usize> = (0..len).collect();
        let count = partitions_of(&items).unwrap().count();
        assert_eq!(nat(count as u64), bell(len, 1, BellMethod::TriangleRecurrence));
    }
}

fn enumerated_range() -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = (1..=5).flat_map(|n| (1..=3).map(move |m| (n, m))).collect();
    cells.push((6, 2));
    cells
}

#[test]
fn count_and_census_laws() {
    for (n, m) in enumerated_range() {
        let c = census(n, m, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.total, bell(n, m, BellMethod::RowSum), "count ({n},{m})");
        let t = higher_stirling(n, m, StirlingMethod::MatrixPower);
        for k in 1..=n {
            assert_eq!(c.count(k), t.get(n, k), "census ({n},{m}) k={k}");
        }
        assert_eq!(c.count(0), nat(0));
        assert_eq!(c.count(n + 1), nat(0));
        let sum: Nat = c.counts.iter().sum();
        assert_eq!(sum, c.total);
    }
}

#[test]
fn grouping_by_ground_partition_reproduces_recurrence_terms() {
    for n in 1..=5 {
        for m in 1..=2 {
            let g = ground_census(n, m + 1, DEFAULT_BUDGET).unwrap();
            let s = global_cache().get(n, 1);
            for k in 1..=n {
                let expected = bell(k, m, BellMethod::FixedElement) * s.get(n, k);
                assert_eq!(g.count(k), expected, "n={n} m={m} k={k}");
            }
        }
    }
}

#[test]
fn average_cardinality_from_census() {
    for (n, m) in enumerated_range() {
        let c = census(n, m, DEFAULT_BUDGET).unwrap();
        let from_census = Rat::new(BigInt::from(c.weighted_total()), BigInt::from(c.total.clone()));
        assert_eq!(from_census, average_cardinality(n, m), "({n},{m})");
    }
    assert_eq!(average_cardinality(1, 4), rat_from_nat(&nat(1)));
}

#[test]
fn serialization_round_trips_over_full_sets() {
    for (n, m) in [(4, 2), (3, 3), (5, 2)] {
        for p in iterate_partitions(n, m, DEFAULT_BUDGET).unwrap() {
            let text = p.serialize();
            let back = NestedPartition::parse(&text).unwrap();
            assert_eq!(back.serialize(), text);
            assert_eq!(back.order(), m);
            assert_eq!(back.n(), n);
            assert_eq!(back.outer_cardinality(), p.outer_cardinality());
        }
    }
}

#[test]
fn children_of_distinct_parents_are_distinct() {
    assert!(verify_distinct_children(3, 2, DEFAULT_BUDGET).unwrap());
    assert!(verify_distinct_children(1, 4, DEFAULT_BUDGET).unwrap());
    assert_eq!(distinct_serializations(4, 3, DEFAULT_BUDGET).unwrap(), (154, 154));
    assert_eq!(distinct_serializations(3, 2, DEFAULT_BUDGET).unwrap(), (12, 12));
}

#[test]
fn every_child_has_a_parent_in_the_previous_set() {
    let parents: BTreeSet<String> = iterate_partitions(4, 2, DEFAULT_BUDGET)
        .unwrap()
        .map(|p| p.serialize())
        .collect();
    for child in iterate_partitions(4, 3, DEFAULT_BUDGET).unwrap() {
        let parent = child.parent().unwrap().serialize();
        assert!(parents.contains(&parent), "{child} has unknown parent {parent}");
    }
}

#[test]
fn published_census_rows() {
    let c = census(5, 5, DEFAULT_BUDGET).unwrap();
    let want: Vec<Nat> = [0u64, 3455, 3325, 725, 50, 1].iter().map(|&v| nat(v)).collect();
    assert_eq!(c.counts, want);
    assert_eq!(census(5, 3, DEFAULT_BUDGET).unwrap().total, nat(1304));
}
