//! Exhaustive enumeration for small wire counts, independent of the
//! meet-in-the-middle search.

mod common;

use arrangeclass::enumerate::{enumerate_omega, EnumerateOptions};
use arrangeclass::sigs::admissible_signatures;
use common::{brute_force, pairs_of, Pairs};

#[test]
fn small_signatures_match_exhaustive_search() {
    let mut total = 0;
    for lines in 2..=5 {
        for sig in admissible_signatures(lines).unwrap() {
            let want = brute_force(&sig, lines);
            let got: Vec<Pairs> = enumerate_omega(&sig, &EnumerateOptions::default())
                .unwrap()
                .reps
                .iter()
                .map(pairs_of)
                .collect();
            assert_eq!(got, want, "[{sig}] on {lines} lines");
            assert!(!want.is_empty(), "[{sig}]");
            total += want.len();
        }
    }
    assert!(total > 0);
}
