use arrangeclass::enumerate::{enumerate_omega, EnumerateOptions};
use arrangeclass::similarity::{classify, relation_table, RelationSet, SimilarityOptions};
use arrangeclass::Signature;

fn classes(s: &str) -> usize {
    let sig: Signature = s.parse().unwrap();
    let omega = enumerate_omega(&sig, &EnumerateOptions::default()).unwrap();
    classify(&omega, RelationSet::ALL).unwrap().len()
}

#[test]
fn six_and_seven_lines() {
    for (s, n) in [
        ("2^3 3^4", 1),
        ("2^6 3^3", 2),
        ("2^3 3^6", 1),
        ("2^6 3^3 4^1", 1),
        ("2^6 3^5", 2),
        ("2^9 3^2 4^1", 3),
        ("2^9 3^4", 6),
        ("2^12 3^3", 4),
    ] {
        assert_eq!(classes(s), n, "[{s}]");
    }
}

#[test]
fn eight_lines() {
    for (s, n) in [
        ("2^4 3^6 4^1", 1),
        ("2^7 3^3 4^2", 1),
        ("2^9 3^3 5^1", 2),
        ("2^7 3^5 4^1", 4),
        ("2^7 3^7", 4),
        ("2^10 3^2 4^2", 4),
        ("2^12 3^2 5^1", 4),
        ("2^10 3^4 4^1", 18),
        ("2^10 3^6", 19),
        ("2^13 3^1 4^2", 4),
    ] {
        assert_eq!(classes(s), n, "[{s}]");
    }
}

#[test]
fn relation_table_shape() {
    let sig: Signature = "2^6 3^3".parse().unwrap();
    let omega = enumerate_omega(&sig, &EnumerateOptions::default()).unwrap();
    let table = relation_table(&omega, &SimilarityOptions::default()).unwrap();
    assert_eq!(table[0].1, omega.len());
    for (r, n) in &table {
        for (q, m) in &table {
            if r.is_subset_of(q) {
                assert!(m <= n, "{r}: {n} vs {q}: {m}");
            }
        }
    }
    // tau adds nothing once sigma and mu are present
    let get = |s: &str| table.iter().find(|(r, _)| *r == s.parse().unwrap()).unwrap().1;
    assert_eq!(get("sm"), get("stm"));
    assert_eq!(get("smx"), get("stmx"));
}
