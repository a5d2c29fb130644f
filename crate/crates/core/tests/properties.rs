use proptest::prelude::*;

use toric_fano::fan::{product_of_projective, star_subdivision, validate, Fan, ValidationOptions};
use toric_fano::fvector::{complete_from_lower, f_vector, is_palindromic, lemma_degree_sum_check};
use toric_fano::io::{parse_fan, serialize_fan};
use toric_fano::oracle::{oracle_f_vector, oracle_primitive_collections};
use toric_fano::primitive::primitive_collections;
use toric_fano::report::{analyze_with, to_json};
use toric_fano::Execution;

/// Smooth complete fans: a product of projective spaces followed by a few
/// star subdivisions of faces picked by index.
fn smooth_fan() -> impl Strategy<Value = Fan> {
    let dims = prop_oneof![
        Just(vec![2]),
        Just(vec![3]),
        Just(vec![1, 1]),
        Just(vec![1, 2]),
        Just(vec![1, 1, 1]),
        Just(vec![4]),
        Just(vec![2, 2]),
    ];
    let picks = prop::collection::vec((any::<usize>(), any::<usize>(), any::<usize>()), 0..4);
    (dims, picks).prop_map(|(dims, picks)| {
        let mut fan = product_of_projective(&dims);
        for (cone, size, face) in picks {
            if fan.num_rays() >= 14 {
                break;
            }
            let sigma = fan.max_cones()[cone % fan.max_cones().len()];
            let faces = sigma.subsets_of_size(2 + size % (fan.dim() - 1));
            fan = star_subdivision(&fan, faces[face % faces.len()]).expect("faces subdivide");
        }
        fan
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subdivisions_stay_valid(fan in smooth_fan()) {
        prop_assert!(validate(&fan).is_valid());
    }

    #[test]
    fn serialization_round_trips(fan in smooth_fan()) {
        let text = serialize_fan(&fan);
        let back = parse_fan(&text).unwrap();
        prop_assert_eq!(serialize_fan(&back), text);
    }

    #[test]
    fn face_numbers_satisfy_dehn_sommerville(fan in smooth_fan()) {
        let fv = f_vector(&fan);
        let oracle = oracle_f_vector(&fan);
        prop_assert_eq!(fv.entries(), oracle.as_slice());
        prop_assert!(fv.euler_holds());
        prop_assert!(is_palindromic(&fv));
        let completed = complete_from_lower(fan.dim(), fv.entries()).unwrap();
        prop_assert_eq!(completed.as_slice(), fv.entries());
    }

    #[test]
    fn collections_match_brute_force(fan in smooth_fan()) {
        prop_assert_eq!(primitive_collections(&fan), oracle_primitive_collections(&fan).unwrap());
    }

    #[test]
    fn wall_degrees_sum_to_face_count_side(fan in smooth_fan()) {
        prop_assert!(lemma_degree_sum_check(&fan).unwrap().identity_holds);
    }

    #[test]
    fn execution_mode_does_not_change_results(fan in smooth_fan()) {
        let opts = ValidationOptions::default();
        let seq = analyze_with(&fan, opts, Execution::Sequential).unwrap();
        let par = analyze_with(&fan, opts, Execution::Parallel).unwrap();
        prop_assert_eq!(to_json(&seq), to_json(&par));
    }
}
