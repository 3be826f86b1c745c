use hfsign_core::diagram::{self, GridDiagram};
use hfsign_core::formal::{flows_from, FormalGenerator};
use hfsign_core::homology::{rational_rank, smith_normal_form, SparseIntMatrix};
use hfsign_core::relations::{self, RelationInstance};
use hfsign_core::signs::{apply_gauge, solve_global, GaugeMap, SignTable};
use hfsign_core::{companion, CurveFrame, DegenerationKind, FormalFlow, Limits, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn generator() -> impl Strategy<Value = FormalGenerator> {
    (1usize..=6).prop_flat_map(|n| {
        (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(s, e)| FormalGenerator::new(s, e.into_iter().map(Sign::from_bit).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn flows_have_valid_ends(x in generator()) {
        for f in flows_from(&x) {
            prop_assert!(f.is_valid());
            let y = f.end().unwrap();
            prop_assert!(y.is_valid());
            prop_assert_eq!(y.power(), x.power());
        }
    }

    #[test]
    fn companions_run_backwards_and_are_involutive(x in generator()) {
        for f in flows_from(&x) {
            for kind in [DegenerationKind::Alpha, DegenerationKind::Beta] {
                let c = companion(&f, kind).unwrap();
                prop_assert_eq!(c.start(), &f.end().unwrap());
                prop_assert_eq!(&c.end().unwrap(), f.start());
                prop_assert_eq!(companion(&c, kind).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn keys_and_json_round_trip(x in generator()) {
        for f in flows_from(&x) {
            prop_assert_eq!(FormalFlow::parse_key(&f.key()).unwrap(), f.clone());
            let json = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(serde_json::from_str::<FormalFlow>(&json).unwrap(), f);
        }
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<FormalGenerator>(&json).unwrap(), x);
    }
}

fn n3_table() -> &'static SignTable {
    static T: OnceLock<SignTable> = OnceLock::new();
    T.get_or_init(|| solve_global(3, &Limits::default()).unwrap().table)
}

fn product(t: &SignTable, inst: &RelationInstance) -> Sign {
    Sign::product(inst.flows.iter().map(|f| t.get(f).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gauges_preserve_every_relation(seed in any::<u64>(), restricted in any::<bool>()) {
        let t = n3_table();
        let g = apply_gauge(t, &GaugeMap::Seeded { seed, restricted });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for fam in hfsign_core::gf2::Family::ALL {
            for _ in 0..20 {
                if let Some(inst) = relations::sample_instance(3, fam, &mut rng).unwrap() {
                    prop_assert_eq!(product(&g, &inst), product(t, &inst));
                    prop_assert_eq!(product(t, &inst), inst.expected_product(false));
                }
            }
        }
    }
}

/// `d_k` = gcd of all k×k minors of a 3×3 matrix.
fn determinantal_divisors(a: &[[i64; 3]; 3]) -> [BigInt; 3] {
    let m = |r: usize, c: usize| BigInt::from(a[r][c]);
    let mut d1 = BigInt::zero();
    let mut d2 = BigInt::zero();
    for r in 0..3 {
        for c in 0..3 {
            d1 = d1.gcd(&m(r, c));
        }
    }
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            d2 = d2.gcd(&(m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)));
        }
    }
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    [d1, d2, det.abs()]
}

proptest! {
    #[test]
    fn snf_matches_determinantal_divisors(a in proptest::array::uniform3(proptest::array::uniform3(-12i64..=12))) {
        let mut m = SparseIntMatrix::new(3, 3);
        for (r, row) in a.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.add(r, c, v);
                }
            }
        }
        let snf = smith_normal_form(&m);
        let dk = determinantal_divisors(&a);
        let rank = dk.iter().take_while(|d| !d.is_zero()).count();
        prop_assert_eq!(snf.rank, rank);
        prop_assert_eq!(rational_rank(&m), rank);
        let mut prod = BigInt::from(1);
        for k in 0..rank {
            prod *= &snf.invariant_factors[k];
            prop_assert_eq!(&prod, &dk[k]);
        }
        for w in snf.invariant_factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn diagram_flows_are_coherent(seed in any::<u64>(), n in 2usize..=5, k in 0usize..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut o: Vec<u8> = (0..n as u8).collect();
        rand::seq::SliceRandom::shuffle(o.as_mut_slice(), &mut rng);
        let d = GridDiagram::s3(o).unwrap().with_frame(CurveFrame::random(n, &mut rng)).unwrap().stabilized(k);
        let gens = diagram::generators(&d).unwrap();
        for x in gens.iter().step_by(3) {
            for (f, y) in diagram::flows_from(&d, x).unwrap() {
                let ff = diagram::to_formal(&d, &f, x).unwrap();
                prop_assert!(ff.is_valid());
                prop_assert_eq!(ff.power(), n + k);
                prop_assert_eq!(ff.end().unwrap(), diagram::formal_generator(&d, &y));
            }
        }
    }
}
