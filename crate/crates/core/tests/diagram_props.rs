use bandsim::diagram::{project, reduce_r1_r2, simplify, PdCode, ProjectionSeed};
use bandsim::invariants::{homfly, HOMFLY_CAP};
use bandsim::lattice::{BfacfChain, LatticePolygon};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_polygon(seed: u64, steps: usize) -> LatticePolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = BfacfChain::new(&LatticePolygon::rectangle(3, 2), 0.23, 200);
    for _ in 0..steps {
        chain.step(&mut rng);
    }
    chain.polygon()
}

fn table_diagrams() -> Vec<PdCode> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/knotinfo_source.tsv")).unwrap();
    text.lines()
        .skip(2)
        .filter_map(|l| {
            let pd = l.split('\t').nth(2)?;
            let tuples: Vec<[u32; 4]> = serde_json::from_str(pd).ok()?;
            Some(PdCode::from_pd_tuples(&tuples, 0).unwrap())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplify_preserves_homfly(seed in any::<u64>(), steps in 200usize..3000, view in any::<u64>()) {
        let p = random_polygon(seed, steps);
        let d = project(&p, ProjectionSeed(view)).unwrap();
        let s = simplify(&d);
        prop_assert!(s.crossing_count() <= d.crossing_count());
        prop_assert_eq!(s.n_components(), 1);
        prop_assert_eq!(simplify(&s).crossing_count(), s.crossing_count());
        if d.crossing_count() <= HOMFLY_CAP {
            prop_assert_eq!(homfly(&d).unwrap(), homfly(&s).unwrap());
        }
    }

    #[test]
    fn reduce_keeps_mirror_symmetry(seed in any::<u64>(), view in any::<u64>()) {
        let p = random_polygon(seed, 1500);
        let d = project(&p, ProjectionSeed(view)).unwrap();
        let a = reduce_r1_r2(&d.mirror());
        let b = reduce_r1_r2(&d).mirror();
        prop_assert_eq!(a.crossing_count(), b.crossing_count());
    }
}

#[test]
fn table_diagrams_keep_homfly_under_simplify() {
    for d in table_diagrams() {
        let s = simplify(&d);
        assert_eq!(homfly(&s).unwrap(), homfly(&d).unwrap(), "{d}");
    }
}

#[test]
fn composite_diagrams_keep_homfly_under_simplify() {
    let t = table_diagrams();
    for (i, a) in t.iter().enumerate().take(12) {
        let b = &t[(i * 7 + 3) % 12];
        let d = a.connected_sum(&b.mirror());
        if d.crossing_count() <= HOMFLY_CAP {
            assert_eq!(homfly(&simplify(&d)).unwrap(), homfly(&d).unwrap(), "{d}");
        }
    }
}

#[test]
fn most_small_lattice_polygons_simplify_to_the_unknot() {
    let mut trivial = 0;
    let n = 60;
    for seed in 0..n {
        let p = random_polygon(seed, 400);
        let s = simplify(&project(&p, ProjectionSeed(seed)).unwrap());
        if s.crossing_count() == 0 {
            trivial += 1;
        }
    }
    assert!(trivial * 10 >= n * 9, "{trivial}/{n}");
}
