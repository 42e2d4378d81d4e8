//! Growth curves on the two-sugar fixture model, frozen against an
//! independent step-by-step reference integration.

use std::path::Path;

use reservoirflux::bigg::load_model;
use reservoirflux::dfba::{DfbaConfig, GrowthSimulator};
use reservoirflux::model::MetabolicModel;

fn model() -> MetabolicModel {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/e_coli_core_xyl.json");
    load_model(&path, None).unwrap()
}

#[test]
fn diauxic_curve_matches_reference() {
    let sim = GrowthSimulator::new(&model(), DfbaConfig::default()).unwrap();
    let t = sim.simulate(10.0, 10.0).unwrap();

    assert_eq!(t.len(), 200);
    assert!((t.time_h[0] - 0.1).abs() < 1e-12);
    assert!((t.time_h[199] - 20.0).abs() < 1e-12);

    // first step: nitrogen-capped growth on glucose
    let mu0 = 0.320936032864;
    assert!((t.biomass[0] - 0.01 * (1.0 + mu0 * 0.1)).abs() < 1e-9, "got {}", t.biomass[0]);
    assert!((t.glucose[0] - 9.992321554).abs() < 1e-7, "got {}", t.glucose[0]);
    assert_eq!(t.xylose[0], 10.0);

    // glucose crosses 0.1 mM at step index 118 (t = 11.9 h)
    let shift = t.glucose.iter().position(|&g| g <= 0.1).unwrap();
    assert_eq!(shift, 118);

    // no xylose is touched while glucose is above the shift threshold
    let consumed_before = 10.0 - t.xylose[shift - 1];
    assert!(
        consumed_before.abs() < 1e-9,
        "xylose consumed pre-shift: {consumed_before}"
    );

    // final plateau: both sugars exhausted, biomass settled
    assert_eq!(t.glucose[199], 0.0);
    assert_eq!(t.xylose[199], 0.0);
    assert!((t.biomass[199] - 0.671312394).abs() < 1e-6, "got {}", t.biomass[199]);

    // pools never increase, biomass never decreases
    for w in t.glucose.windows(2) {
        assert!(w[1] <= w[0]);
    }
    for w in t.xylose.windows(2) {
        assert!(w[1] <= w[0]);
    }
    for w in t.biomass.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn repeat_runs_are_bitwise_identical() {
    let sim = GrowthSimulator::new(&model(), DfbaConfig::default()).unwrap();
    let a = sim.simulate(10.0, 10.0).unwrap();
    let b = sim.simulate(10.0, 10.0).unwrap();
    for (x, y) in a.biomass.iter().zip(&b.biomass) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
    for (x, y) in a.glucose.iter().zip(&b.glucose) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
    for (x, y) in a.xylose.iter().zip(&b.xylose) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn glucose_only_curve_leaves_xylose_pool_full() {
    let sim = GrowthSimulator::new(&model(), DfbaConfig::default()).unwrap();
    let t = sim.simulate(5.0, 0.0).unwrap();
    assert!(t.xylose.iter().all(|&x| x == 0.0));
    assert_eq!(t.glucose[199], 0.0);
    assert!(t.biomass[199] > 0.01);
}
