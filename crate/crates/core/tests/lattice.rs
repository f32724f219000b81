use arrangeclass::diagram::random_uip_list;
use arrangeclass::lattice::{canonical_form, lattice_of, lattices_isomorphic, IncidenceLattice};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn relabel(lat: &IncidenceLattice, perm: &[usize], rng: &mut ChaCha8Rng) -> IncidenceLattice {
    let mut cols: Vec<u16> = lat
        .columns()
        .iter()
        .map(|&c| (0..lat.lines()).filter(|&i| c >> i & 1 == 1).fold(0u16, |m, i| m | 1 << perm[i]))
        .collect();
    cols.shuffle(rng);
    IncidenceLattice::from_columns(lat.lines(), cols).unwrap()
}

/// Isomorphism by trying every line bijection.
fn brute_isomorphic(x: &IncidenceLattice, y: &IncidenceLattice) -> bool {
    if x.lines() != y.lines() || x.points() != y.points() {
        return false;
    }
    let mut target: Vec<u16> = y.columns().to_vec();
    target.sort_unstable();
    let mut perm: Vec<usize> = (0..x.lines()).collect();
    loop {
        let mut cols: Vec<u16> = x
            .columns()
            .iter()
            .map(|&c| (0..x.lines()).filter(|&i| c >> i & 1 == 1).fold(0u16, |m, i| m | 1 << perm[i]))
            .collect();
        cols.sort_unstable();
        if cols == target {
            return true;
        }
        // next permutation
        let Some(i) = (0..perm.len().saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return false;
        };
        let j = (i + 1..perm.len()).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn canonical_form_ignores_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for lines in 2..=9 {
        for k in 0..60 {
            let lat = lattice_of(&random_uip_list(lines, (k % 4) as f64 * 0.25, &mut rng).unwrap());
            let mut perm: Vec<usize> = (0..lines).collect();
            perm.shuffle(&mut rng);
            let other = relabel(&lat, &perm, &mut rng);
            assert_eq!(canonical_form(&lat).unwrap(), canonical_form(&other).unwrap());
        }
    }
}

#[test]
fn canonical_form_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut same = 0;
    for lines in 3..=7 {
        let lats: Vec<IncidenceLattice> = (0..40)
            .map(|k| lattice_of(&random_uip_list(lines, 0.2 + (k % 3) as f64 * 0.2, &mut rng).unwrap()))
            .collect();
        for x in &lats {
            for y in &lats {
                let want = brute_isomorphic(x, y);
                assert_eq!(lattices_isomorphic(x, y).unwrap(), want);
                same += usize::from(want);
            }
        }
    }
    assert!(same > 5 * 40);
}

#[test]
fn isomorphism_is_an_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let lats: Vec<IncidenceLattice> = (0..30).map(|_| lattice_of(&random_uip_list(6, 0.5, &mut rng).unwrap())).collect();
    for x in &lats {
        assert!(lattices_isomorphic(x, x).unwrap());
        for y in &lats {
            let xy = lattices_isomorphic(x, y).unwrap();
            assert_eq!(xy, lattices_isomorphic(y, x).unwrap());
            for z in &lats {
                if xy && lattices_isomorphic(y, z).unwrap() {
                    assert!(lattices_isomorphic(x, z).unwrap());
                }
            }
        }
    }
}
