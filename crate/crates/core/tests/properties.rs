use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arrangeclass::diagram::random_uip_list;
use arrangeclass::lattice::{canonical_form, lattice_of};
use arrangeclass::moves::{equiv_class_min, tau};
use arrangeclass::{LefschetzList, Signature};

fn uip_list() -> impl Strategy<Value = LefschetzList> {
    (2usize..=8, 0.0f64..0.9, any::<u64>())
        .prop_map(|(lines, grow, seed)| random_uip_list(lines, grow, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
}

proptest! {
    #[test]
    fn list_text_round_trips(l in uip_list()) {
        prop_assert_eq!(l.to_string().parse::<LefschetzList>().unwrap(), l);
    }

    #[test]
    fn signature_text_round_trips(ms in proptest::collection::vec(2usize..8, 1..12)) {
        let s = Signature::from_multiplicities(ms);
        prop_assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
    }

    #[test]
    fn class_min_is_idempotent(l in uip_list()) {
        let m = equiv_class_min(&l);
        prop_assert!(m <= l);
        prop_assert_eq!(equiv_class_min(&m), m.clone());
        prop_assert_eq!(m.signature(), l.signature());
    }

    #[test]
    fn tau_is_an_involution_up_to_commutation(l in uip_list()) {
        let m = equiv_class_min(&l);
        prop_assert_eq!(equiv_class_min(&tau(&tau(&m))), m.clone());
        prop_assert_eq!(canonical_form(&lattice_of(&tau(&m))).unwrap(), canonical_form(&lattice_of(&m)).unwrap());
    }
}
