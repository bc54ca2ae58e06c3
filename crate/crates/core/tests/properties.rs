mod common;

use logenriques::abelian::{symplectic_multiplier, CmType, SurfaceAffineAuto};
use logenriques::arith::{matrix_order, solve_linear_mod, IntMatrix, TorsionVector};
use logenriques::index::{self, IndexResult};
use logenriques::singular::{self, FixedComponentModel, SingularityClass};
use num_integer::Integer;
use proptest::prelude::*;

fn matrix(dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, dim), dim)
}

fn sized_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|d| matrix(d, 50))
}

fn curve_and_exp() -> impl Strategy<Value = (CmType, u32)> {
    prop_oneof![
        (0u32..2).prop_map(|e| (CmType::Generic, e)),
        (0u32..4).prop_map(|e| (CmType::Gauss, e)),
        (0u32..6).prop_map(|e| (CmType::Eisenstein, e)),
    ]
}

fn affine_auto() -> impl Strategy<Value = SurfaceAffineAuto> {
    (curve_and_exp(), curve_and_exp(), 1u64..=6, prop::collection::vec(0i64..6, 4)).prop_map(
        |((c1, e1), (c2, e2), n, t)| {
            let u = TorsionVector::new(n, [t[0], t[1]]).unwrap();
            let v = TorsionVector::new(n, [t[2], t[3]]).unwrap();
            SurfaceAffineAuto::from_parts(c1.unit(e1), c2.unit(e2), &u, &v).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_is_a_smith_decomposition(rows in sized_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(common::check_snf(&m), Ok(()));
    }

    #[test]
    fn solve_matches_exhaustive_search(
        (rows, t) in (1usize..=3).prop_flat_map(|d| (matrix(d, 9), prop::collection::vec(0i64..8, d))),
        modulus in 1i64..=8,
    ) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let tv = TorsionVector::new(modulus as u64, t.iter().copied()).unwrap();
        let solved = solve_linear_mod(&m, &tv).unwrap();
        prop_assert_eq!(solved.is_some(), common::exhaustive_solvable(&rows, &t, modulus));
        if let Some(x) = solved {
            let x: Vec<i64> = x.coords().iter().map(|&c| c as i64).collect();
            for (i, row) in rows.iter().enumerate() {
                let s: i64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                prop_assert_eq!((s - t[i]).rem_euclid(modulus), 0);
            }
        }
    }

    #[test]
    fn order_of_square((c1, e1) in curve_and_exp(), (c2, e2) in curve_and_exp()) {
        let m = IntMatrix::block_diag(&c1.unit(e1).matrix(), &c2.unit(e2).matrix());
        let ord = matrix_order(&m, 12).unwrap();
        let ord2 = matrix_order(&m.pow(2), 12).unwrap();
        prop_assert_eq!(ord2, ord / ord.gcd(&2));
    }

    #[test]
    fn multiplier_of_powers(f in affine_auto(), k in 1u64..12) {
        let base = symplectic_multiplier(&f);
        let pow = symplectic_multiplier(&f.pow(k));
        // ξ_d^{k·e} reduced
        let e = (base.k * k) % base.d;
        let g = e.gcd(&base.d);
        prop_assert_eq!((pow.k, pow.d), (e / g, base.d / g));
    }

    #[test]
    fn canonical_index_properties(n in 1u64..=300, d in 2u64..=300) {
        let r = index::canonical_index(n, d).unwrap();
        let order = r.torsion_order();
        prop_assert_eq!(d % order, 0);
        prop_assert_eq!((order * n) % d, 0);
        let brute = (1..=d).find(|r| (r * n) % d == 0).unwrap();
        prop_assert_eq!(order, brute);
        prop_assert_eq!(r.is_trivial(), n % d == 0);
        prop_assert_eq!(r == IndexResult::LogEnriques { index: d }, n.gcd(&d) == 1);
    }

    #[test]
    fn age_matches_closed_form(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23]),
        n in 1u64..=15,
        seed in any::<u64>(),
    ) {
        let models = singular::enumerate_models(p, n);
        let m = &models[(seed % models.len() as u64) as usize];
        let w = singular::weights_from_model(m);
        prop_assert_eq!(w.exps.len() as u64, 2 * n);
        let symbolic = singular::symbolic_age(p, n, m.s()).unwrap();
        prop_assert_eq!(singular::age(&w), symbolic);
        if n % p != 0 {
            let class = singular::classify_generator(m).unwrap();
            prop_assert_ne!(class, SingularityClass::CanonicalNotTerminal);
            prop_assert_eq!(
                class == SingularityClass::Terminal,
                singular::paper_terminality_conditions(p, n, m.s())
            );
        }
    }
}

#[test]
fn invalid_models_name_the_violated_invariant() {
    let err = FixedComponentModel::new(4, 3, 1, vec![]).unwrap_err().to_string();
    assert!(err.contains("not prime"), "{err}");
    let err = FixedComponentModel::new(5, 3, 4, vec![]).unwrap_err().to_string();
    assert!(err.contains("exceeds n"), "{err}");
    let err = FixedComponentModel::new(5, 3, 1, vec![5]).unwrap_err().to_string();
    assert!(err.contains("1 < a_j < p"), "{err}");
    let err = FixedComponentModel::new(2, 3, 1, vec![]).unwrap_err().to_string();
    assert!(err.contains("p = 2 forces"), "{err}");
}
