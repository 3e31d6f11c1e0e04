//! Randomized invariants across modules.

use proptest::prelude::*;
use std::f64::consts::PI;

use bartnik::bartnik_search::{minimize_adm, BoundaryType, ExtensionFamily};
use bartnik::horizon_analysis::{check_condition, lattice_violation, ConditionN};
use bartnik::io::{profile_json, ProfileFile};
use bartnik::radial_geometry::{hawking_mass_nodes, scalar_curvature_nodes, BoundaryData, SchwarzschildSlice};
use bartnik::verify::neck_profile;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn n_epsilon_is_monotone_and_lattice_holds(depth in 0.0f64..0.6, r0 in 0.5f64..3.0) {
        let p = neck_profile(r0, depth).unwrap();
        prop_assert!(lattice_violation(&p, &[0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0]).unwrap().is_none());
        let om = check_condition(&p, ConditionN::OutwardMinimizing).unwrap().pass;
        let n0 = check_condition(&p, ConditionN::NEpsilon(0.0)).unwrap().pass;
        prop_assert_eq!(om, n0);
    }

    #[test]
    fn family_profiles_keep_nonnegative_curvature(
        thetas in proptest::collection::vec(0.0f64..=1.0, 16),
        v in 0.0f64..=1.0,
        h in 0.2f64..3.0,
    ) {
        let fam = ExtensionFamily::new(BoundaryData::new(4.0 * PI, h).unwrap(), BoundaryType::Type3);
        let mut x = thetas;
        x.push(v);
        if let Ok(c) = fam.generate(&x) {
            prop_assert!(scalar_curvature_nodes(&c.collar).iter().all(|&r| r >= -1e-12));
            let m = hawking_mass_nodes(&c.collar);
            prop_assert!(m.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            prop_assert!((m[m.len() - 1] - c.mass).abs() <= 1e-12 * c.mass.abs().max(1.0));
        }
    }

    #[test]
    fn profile_json_round_trips(m in -0.5f64..2.0, n in 8usize..200) {
        let p = SchwarzschildSlice { mass: m }.exterior(2.0 * m.max(0.0) + 1.0, 500.0, n).unwrap();
        let text = profile_json(&p);
        let back = serde_json::from_str::<ProfileFile>(&text).unwrap().to_profile().unwrap();
        prop_assert_eq!(profile_json(&back), text);
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let fam = ExtensionFamily::new(BoundaryData::new(4.0 * PI, 1.0).unwrap(), BoundaryType::Type3);
        let a = minimize_adm(&fam, ConditionN::OutwardMinimizing, 40, seed).unwrap();
        let b = minimize_adm(&fam, ConditionN::OutwardMinimizing, 40, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
