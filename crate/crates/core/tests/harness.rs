use dgdef::harness::{
    manetti_battery, schlessinger_homotopy_battery, standard_battery, zoo, FunctorUnderTest, Verdict,
};

#[test]
fn batteries_over_the_zoo() {
    let b = standard_battery().unwrap();
    for l in zoo() {
        let t = std::time::Instant::now();
        let mc = manetti_battery(&FunctorUnderTest::mc(l.clone()), &b).unwrap();
        assert!(matches!(mc.verdict, Verdict::PreDeformation | Verdict::Deformation), "{mc}");
        let def = manetti_battery(&FunctorUnderTest::def(l.clone()), &b).unwrap();
        assert_eq!(def.verdict, Verdict::Deformation, "{def}");
        let s = schlessinger_homotopy_battery(&FunctorUnderTest::mc(l.clone()), &b).unwrap();
        assert_eq!(s.verdict, Verdict::Pass, "{s}");
        eprintln!("{} {:?} {:?}", l.name(), mc.verdict, t.elapsed());
    }
}
