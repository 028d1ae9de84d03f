use diagmon::cells::rank_permutation_invariant;
use diagmon::gram::{gram_symbolic, RankMode};
use diagmon::twist::{canonical_twisting_from, twisted_product, CommutativeMonoid};
use diagmon::{compose, enumerate, green, DiagramProducts, EvaluationMap, Flavor};
use proptest::prelude::*;

const FLAVORS: [Flavor; 9] = [
    Flavor::Partition,
    Flavor::PlanarPartition,
    Flavor::Brauer,
    Flavor::TemperleyLieb,
    Flavor::RookBrauer,
    Flavor::Motzkin,
    Flavor::Rook,
    Flavor::PlanarRook,
    Flavor::Symmetric,
];

fn flavor() -> impl Strategy<Value = Flavor> {
    prop::sample::select(FLAVORS.to_vec())
}

fn eval_map() -> impl Strategy<Value = EvaluationMap> {
    (prop::collection::vec(any::<bool>(), 1..4), 1usize..3)
        .prop_map(|(prefix, period)| EvaluationMap::new(prefix.clone(), period.min(prefix.len())).unwrap())
}

fn allowed_genera(f: Flavor) -> Option<&'static [u32]> {
    match f {
        Flavor::TemperleyLieb | Flavor::Brauer | Flavor::Symmetric => Some(&[1]),
        Flavor::Rook | Flavor::PlanarRook => Some(&[0]),
        Flavor::Motzkin | Flavor::RookBrauer => Some(&[0, 1]),
        Flavor::Partition | Flavor::PlanarPartition => None,
    }
}

/// Partition genera are not associative: the loop closed between the cap
/// and the full block gets absorbed into an open block in one bracketing.
#[test]
fn partition_genera_depend_on_bracketing() {
    let d = |s: &str| -> diagmon::Diagram {
        enumerate(Flavor::Partition, 2).unwrap().into_iter().find(|d| d.to_string() == s).unwrap()
    };
    let (x, y, z) = (d("Pa(2)[{B1,B2} {T1,T2}]"), d("Pa(2)[{B1,B2,T1,T2}]"), d("Pa(2)[{B1,B2} {T1} {T2}]"));
    let xy = compose(&x, &y).unwrap();
    let yz = compose(&y, &z).unwrap();
    let left = xy.floats.merged(&compose(&xy.result, &z).unwrap().floats);
    let right = yz.floats.merged(&compose(&x, &yz.result).unwrap().floats);
    assert_eq!(left.total(), right.total());
    assert_ne!(left, right);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn products_associate_with_floats(f in flavor(), n in 0usize..=4, picks in any::<[prop::sample::Index; 3]>()) {
        let ds = enumerate(f, n).unwrap();
        let [x, y, z] = picks.map(|i| &ds[i.index(ds.len())]);
        let xy = compose(x, y).unwrap();
        let yz = compose(y, z).unwrap();
        let left = compose(&xy.result, z).unwrap();
        let right = compose(x, &yz.result).unwrap();
        prop_assert_eq!(&left.result, &right.result);
        let (lf, rf) = (xy.floats.merged(&left.floats), yz.floats.merged(&right.floats));
        prop_assert_eq!(lf.total(), rf.total());
        if !matches!(f, Flavor::Partition | Flavor::PlanarPartition) {
            prop_assert_eq!(lf, rf);
        }
    }

    #[test]
    fn floats_stay_in_flavor_genera(f in flavor(), n in 0usize..=4, picks in any::<[prop::sample::Index; 2]>()) {
        let ds = enumerate(f, n).unwrap();
        let out = compose(&ds[picks[0].index(ds.len())], &ds[picks[1].index(ds.len())]).unwrap();
        prop_assert!(out.result.validate_flavor());
        if let Some(allowed) = allowed_genera(f) {
            for g in out.floats.genera() {
                prop_assert!(allowed.contains(&g), "genus {} in {:?}", g, f);
            }
        }
    }

    #[test]
    fn involution_reverses_products(f in flavor(), n in 0usize..=4, picks in any::<[prop::sample::Index; 2]>()) {
        let ds = enumerate(f, n).unwrap();
        let (x, y) = (&ds[picks[0].index(ds.len())], &ds[picks[1].index(ds.len())]);
        prop_assert_eq!(x.involute().involute(), x.clone());
        let xy = compose(x, y).unwrap();
        let yx = compose(&y.involute(), &x.involute()).unwrap();
        prop_assert_eq!(xy.result.involute(), yx.result);
        prop_assert_eq!(xy.floats, yx.floats);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gram_rank_ignores_orderings(f in prop::sample::select(vec![Flavor::TemperleyLieb, Flavor::Motzkin, Flavor::PlanarRook, Flavor::PlanarPartition]), n in 1usize..=3, seed in any::<u64>()) {
        let m = DiagramProducts::new(f, n).unwrap().evaluate(&EvaluationMap::classical());
        let g = green(&m);
        for j in 0..g.j_count() {
            let gm = gram_symbolic(&m, &g, j).unwrap();
            let mode = RankMode::Generic { seed };
            prop_assert!(rank_permutation_invariant(&gm, &mode, 5, seed ^ j as u64).unwrap());
        }
    }

    #[test]
    fn d_equals_j(f in flavor(), n in 0usize..=3, a in eval_map()) {
        let m = DiagramProducts::new(f, n).unwrap().evaluate(&a);
        prop_assert!(green(&m).d_equals_j());
    }

    #[test]
    fn canonical_twistings_satisfy_the_cocycle(
        f in prop::sample::select(vec![Flavor::TemperleyLieb, Flavor::Brauer, Flavor::Rook, Flavor::Motzkin]),
        n in 1usize..=3,
        zero in any::<bool>(),
        m in 1usize..5,
        q in 0usize..5,
    ) {
        let a = if zero { EvaluationMap::zero() } else { EvaluationMap::classical() };
        let t = canonical_twisting_from(&DiagramProducts::new(f, n).unwrap(), &a).unwrap();
        prop_assert_eq!(t.cocycle_violation(1), None);
        let base = CommutativeMonoid::saturating(m);
        let tm = twisted_product(&base, &t, q.min(m)).unwrap();
        prop_assert_eq!(tm.monoid.associativity_violation(500, 20_000, 3), None);
    }
}
