//! Randomized structural invariants: the rewriting engine, the nilpotent
//! filtration, and the interplay between per-element verdicts and
//! per-degree stages.

use proptest::prelude::*;

use steem::steenrod::{adem_reduce_with, multiply, RewriteStrategy, SqWord};
use steem::unstable::{
    make_catalog, nilpotency_degree, nilpotent_filtration, weight, NilpotencyVerdict,
};

fn sq_word(max_len: usize, max_exp: u32) -> impl Strategy<Value = SqWord> {
    prop::collection::vec(1..=max_exp, 1..=max_len).prop_map(SqWord::new)
}

fn catalog_name() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("H".to_string()),
        Just("F1".to_string()),
        Just("F2".to_string()),
        (1usize..=2).prop_map(|n| format!("F({n})")),
        (1usize..=4).prop_map(|d| format!("SigmaF1({d})")),
        (1usize..=6).prop_map(|d| format!("SigmaF2({d})")),
        (1usize..=4, 1usize..=3)
            .prop_map(|(a, b)| format!("Sum(SigmaF2({a}),SigmaF1({b}))")),
        Just("Tensor(F1,F1)".to_string()),
        (1usize..=3).prop_map(|d| format!("Tensor(SigmaF2({d}),F1)")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_is_confluent(w in sq_word(4, 8)) {
        let a = adem_reduce_with(&w, RewriteStrategy::LeftmostFirst);
        let b = adem_reduce_with(&w, RewriteStrategy::RightmostFirst);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplication_is_associative(
        x in sq_word(2, 6),
        y in sq_word(2, 6),
        z in sq_word(2, 6),
    ) {
        let xy = multiply(&adem_reduce_with(&x, RewriteStrategy::LeftmostFirst),
                          &adem_reduce_with(&y, RewriteStrategy::LeftmostFirst));
        let yz = multiply(&adem_reduce_with(&y, RewriteStrategy::LeftmostFirst),
                          &adem_reduce_with(&z, RewriteStrategy::LeftmostFirst));
        let zred = adem_reduce_with(&z, RewriteStrategy::LeftmostFirst);
        let xred = adem_reduce_with(&x, RewriteStrategy::LeftmostFirst);
        prop_assert_eq!(multiply(&xy, &zred), multiply(&xred, &yz));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filtration_stages_decrease_and_stay_stable(
        name in catalog_name(),
        bound in 8usize..=12,
    ) {
        let m = make_catalog(&name, bound).unwrap();
        let f = nilpotent_filtration(&m).unwrap();
        for s in 1..f.depth() {
            for d in 0..=bound {
                prop_assert!(
                    f.stage(s - 1)[d].contains_subspace(&f.stage(s)[d]),
                    "{name}: M_{} ⊄ M_{} in degree {d}", s, s - 1
                );
            }
        }
        for s in 0..f.depth() {
            for d in 0..=bound {
                for k in 1..=(bound - d) {
                    let img = f.stage(s)[d].image_row(&m.sq_matrix(k, d));
                    prop_assert!(
                        f.stage(s)[d + k].contains_subspace(&img),
                        "{name}: Sq^{k} leaves M_{s} in degree {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn subquotients_are_reduced(name in catalog_name(), bound in 8usize..=12) {
        let m = make_catalog(&name, bound).unwrap();
        let f = nilpotent_filtration(&m).unwrap();
        for (s, q) in f.quotients().iter().enumerate() {
            prop_assert!(q.is_reduced(), "{name}: R_{s} not reduced");
        }
    }

    #[test]
    fn suspension_shifts_the_subquotients(name in catalog_name(), bound in 8usize..=11) {
        let m = make_catalog(&name, bound).unwrap();
        let sm = m.suspend(1);
        let fm = nilpotent_filtration(&m).unwrap();
        let fsm = nilpotent_filtration(&sm).unwrap();
        if let Some(r0) = fsm.quotient(0) {
            prop_assert_eq!(r0.total_dim(), 0, "{}: ΣM has a reduced part", &name);
        }
        for n in 1..fsm.quotients().len() {
            let shifted = fsm.quotient(n).unwrap();
            let dims_shifted = shifted.dims().to_vec();
            let dims_plain = match fm.quotient(n - 1) {
                Some(q) => q.dims().to_vec(),
                None => vec![0; bound + 2 - n],
            };
            prop_assert_eq!(
                &dims_shifted, &dims_plain,
                "{}: R_{} of the suspension vs R_{} (bounds {} vs {})",
                &name, n, n - 1, shifted.bound(), bound
            );
        }
    }

    #[test]
    fn tensor_weight_is_subadditive(
        a_pick in 0usize..3,
        b_pick in 0usize..3,
        bound in 8usize..=12,
    ) {
        let reduced = ["H", "F1", "F(2)"];
        let a = make_catalog(reduced[a_pick], bound).unwrap();
        let b = make_catalog(reduced[b_pick], bound).unwrap();
        let t = a.tensor(&b);
        let (wa, wb) = (weight(&a).unwrap(), weight(&b).unwrap());
        let wt = weight(&t).unwrap();
        prop_assert!(
            wt <= wa + wb,
            "weight({}⊗{}) = {wt} > {wa} + {wb}", reduced[a_pick], reduced[b_pick]
        );
    }

    #[test]
    fn verdicts_agree_with_naive_stages(
        name in catalog_name(),
        bound in 8usize..=12,
        deg_seed in 0usize..64,
        mask_seed in 1usize..256,
    ) {
        let m = make_catalog(&name, bound).unwrap();
        let live: Vec<usize> = (0..=bound).filter(|&d| m.dim(d) > 0).collect();
        prop_assume!(!live.is_empty());
        let d = live[deg_seed % live.len()];
        let mut vec = steem::f2::F2Vector::zero(m.dim(d));
        for bit in 0..m.dim(d) {
            if (mask_seed >> (bit % 8)) & 1 == 1 {
                vec.set(bit, true);
            }
        }
        prop_assume!(!vec.is_zero());
        let x = m.element(d, vec.clone());
        let f = nilpotent_filtration(&m).unwrap();
        match nilpotency_degree(&m, &x) {
            NilpotencyVerdict::Infinite => prop_assert!(vec.is_zero()),
            NilpotencyVerdict::ExactlyNilpotent(s) | NilpotencyVerdict::AtLeastNilpotent(s) => {
                prop_assert!(
                    f.naive_stage(s)[d].contains(&vec),
                    "{name}: verdict {s} but x ∉ naive M_{s} in degree {d}"
                );
                prop_assert!(
                    !f.naive_stage(s + 1)[d].contains(&vec),
                    "{name}: verdict {s} but x ∈ naive M_{} in degree {d}", s + 1
                );
            }
        }
    }
}
