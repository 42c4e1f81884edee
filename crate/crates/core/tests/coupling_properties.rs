use lsystems::coupling::couple;
use lsystems::verify::Generator;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupled_systems_validate(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let (a, b) = g.factor_pair().unwrap();
        let pair = couple(&a, &b).unwrap();
        prop_assert_eq!(pair.coupled.state_dim(), a.state_dim() + b.state_dim());
        prop_assert!(pair.coupled.imbalance_residual() <= 1e-10);
        prop_assert!(pair.coupled.directing().dist(a.directing()) <= 1e-12);
    }

    #[test]
    fn coupling_is_associative_at_transfer_level(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let (a, b) = g.factor_pair().unwrap();
        let n = a.state_dim();
        let c = g.system_with(n, a.directing()).unwrap();
        let left = couple(&couple(&a, &b).unwrap().coupled, &c).unwrap().coupled;
        let right = couple(&a, &couple(&b, &c).unwrap().coupled).unwrap().coupled;
        for _ in 0..5 {
            let z = g.z_clear_of(&[a.main_operator(), b.main_operator(), c.main_operator()]).unwrap();
            let wl = left.transfer(z).unwrap();
            let wr = right.transfer(z).unwrap();
            prop_assert!(wl.dist(&wr) <= 1e-9);
        }
    }

    #[test]
    fn coupling_order_matters_only_through_products(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let (a, b) = g.factor_pair().unwrap();
        let ab = couple(&a, &b).unwrap();
        let ba = couple(&b, &a).unwrap();
        let z = g.z_clear_of(&[a.main_operator(), b.main_operator()]).unwrap();
        let wa = a.transfer(z).unwrap();
        let wb = b.transfer(z).unwrap();
        prop_assert!(ab.coupled.transfer(z).unwrap().dist(&wa.matmul(&wb).unwrap()) <= 1e-10);
        prop_assert!(ba.coupled.transfer(z).unwrap().dist(&wb.matmul(&wa).unwrap()) <= 1e-10);
    }
}
