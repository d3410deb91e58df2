use std::collections::BTreeMap;

use num_traits::One;
use proptest::prelude::*;

use planar_mobiles::bijection::*;
use planar_mobiles::map::{MapJson, PlanarMap};
use planar_mobiles::mobile::{Mobile, MobileJson};
use planar_mobiles::sampler::{SampleSpec, Sampler};
use planar_mobiles::series::{Ring, Series, Q};
use planar_mobiles::solve::{solve_bipartite, WeightSpec};

fn sampler() -> Sampler {
    let weights = BTreeMap::from([(2, 0.05), (4, 0.03), (6, 0.003)]);
    Sampler::new(SampleSpec::new(weights, (1, 30), 0)).unwrap()
}

/// Map and mobile drawn from the stream `stream` of the test sampler.
fn draw(stream: u64) -> (PlanarMap, Mobile) {
    let s = sampler();
    let mut rng = s.worker_rng(stream as usize);
    let mobile = s.sample_mobile(&mut rng).unwrap();
    (mobile_to_map_bipartite(&mobile).unwrap(), mobile)
}

fn series_from(ring: &std::sync::Arc<Ring>, c: &[i64]) -> Series {
    let x = Series::var(ring, "x");
    let y = Series::var(ring, "y");
    let mut s = Series::constant(ring, Q::from_integer(c[0] as i128));
    s = s + x.scale(Q::from_integer(c[1] as i128)) + y.scale(Q::from_integer(c[2] as i128));
    s + (&x * &y).scale(Q::new(c[3] as i128, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_mobiles_are_well_labeled(stream in 0u64..1000) {
        let (_, mobile) = draw(stream);
        prop_assert!(mobile.validate().is_valid());
        prop_assert!(mobile.check_well_labeled());
    }

    #[test]
    fn any_origin_round_trips(stream in 0u64..1000, pick in any::<prop::sample::Index>()) {
        let (map, _) = draw(stream);
        let origin = pick.index(map.num_vertices());
        let pointed = map.with_markers(Some(origin), None).unwrap();
        let mobile = map_to_mobile_bipartite(&pointed, None).unwrap();
        prop_assert_eq!(mobile_to_map_bipartite(&mobile).unwrap().canonical_code(), pointed.canonical_code());
        let colored = pointed.dual();
        let o = pick.index(colored.num_vertices());
        let pointed = colored.with_markers(Some(o), None).unwrap();
        let mobile = map_to_mobile_eulerian(&pointed, None).unwrap();
        prop_assert_eq!(mobile_to_map_eulerian(&mobile).unwrap().canonical_code(), pointed.canonical_code());
    }

    #[test]
    fn canonical_code_ignores_half_edge_names(stream in 0u64..1000, seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let (map, _) = draw(stream);
        let mut perm: Vec<usize> = (0..map.num_half_edges()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(map.relabel(&perm).canonical_code(), map.canonical_code());
    }

    #[test]
    fn json_round_trips(stream in 0u64..1000) {
        let (map, mobile) = draw(stream);
        let j: MapJson = serde_json::from_str(&serde_json::to_string(&map.to_json()).unwrap()).unwrap();
        prop_assert_eq!(PlanarMap::from_json(&j).unwrap().canonical_code(), map.canonical_code());
        let j: MobileJson = serde_json::from_str(&serde_json::to_string(&mobile.to_json()).unwrap()).unwrap();
        prop_assert_eq!(Mobile::from_json(&j).unwrap().canonical_code(), mobile.canonical_code());
    }

    #[test]
    fn vertex_and_edge_counts_add_up(stream in 0u64..1000) {
        let (map, _) = draw(stream);
        let p = profile(&map, None).unwrap();
        prop_assert_eq!(p.vertices.values().sum::<u64>() as usize, map.num_vertices());
        prop_assert_eq!(p.edges.values().sum::<u64>() as usize, map.num_edges());
        prop_assert!(p.edges.keys().all(|&(a, b)| b == a + 1));
    }

    #[test]
    fn series_field_laws(a in prop::collection::vec(-5i64..6, 4), b in prop::collection::vec(-5i64..6, 4)) {
        let ring = Ring::new(vec!["x".into(), "y".into()], 4);
        let (mut sa, sb) = (series_from(&ring, &a), series_from(&ring, &b));
        prop_assert_eq!(&sa * &sb, &sb * &sa);
        if a[0] != 0 {
            prop_assert_eq!(&sa.recip() * &sa, Series::one(&ring));
        }
        // log turns products of unit-constant series into sums
        sa = sa.clone() - Series::constant(&ring, sa.constant_term()) + Series::one(&ring);
        let sb = sb.clone() - Series::constant(&ring, sb.constant_term()) + Series::one(&ring);
        prop_assert_eq!((&sa * &sb).log(), sa.log() + sb.log());
    }

    #[test]
    fn r_increases_with_the_label(support in prop::sample::subsequence(vec![2usize, 4, 6], 1..=3)) {
        let mut w = WeightSpec::new(3);
        for k in support {
            w = w.white_var(k);
        }
        let sol = solve_bipartite(&w, 5).unwrap();
        for n in 0..5 {
            prop_assert!((sol.r[n + 1].clone() - sol.r[n].clone()).is_nonnegative());
        }
        prop_assert!(sol.r[1].constant_term().is_one());
    }
}
