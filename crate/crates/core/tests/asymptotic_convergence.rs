//! High-energy behaviour of the asymptotic bounds against the full bound.

use ircoop::asymptotics::{diversity_estimate, fer_asym, ScenarioKind};
use ircoop::outage::{fer_bound, McOptions};
use ircoop::protocol::{link_snrs, CoopConfig, Geometry};

const C_STAR: f64 = 0.17;
const TOL: f64 = 0.1;

fn ratio_at(kind: ScenarioKind, r: f64, d: f64, energy: f64) -> (f64, f64) {
    let cfg = CoopConfig::uniform(2).unwrap();
    let geom = Geometry::from_profile(2, r, d, 1.0, 3.0, energy).unwrap();
    let eta = link_snrs(&geom).to_destination[0];
    let full = fer_bound(&cfg, &geom, C_STAR, McOptions::new(10_000, 1)).unwrap().value;
    let asym = fer_asym(kind, &cfg, &geom, C_STAR).unwrap().value;
    (full / asym, eta)
}

#[test]
fn full_bound_approaches_asymptotic_forms() {
    let cases = [
        (ScenarioKind::TransmitterClustering, 1e-4, 1.0),
        (ScenarioKind::ReceiverClustering, 1.0, 1e-4),
        (ScenarioKind::ClusterHopping, 0.5, 0.5),
    ];
    for (kind, r, d) in cases {
        for energy in [1e3, 1e4, 1e5] {
            let (ratio, eta) = ratio_at(kind, r, d, energy);
            assert!(eta >= 1e3 * (1.0 - 1e-12));
            assert!(ratio <= 1.0 + TOL, "{kind:?} at E = {energy}: ratio {ratio}");
        }
    }
}

/// Limit of `η² P{τ e^{−ν0 η} + τ e^{−ν1 η} ≥ e^{−c}}` for `τ = 1/2`: the area
/// of `{x, y ≥ 0 : e^{−x} + e^{−y} ≥ 2e^{−c}}`, by the midpoint rule.
fn two_slot_area(c: f64) -> f64 {
    let cap = 2.0 * (-c).exp();
    let x_max = -(cap - 1.0).ln();
    let n = 2_000_000;
    let h = x_max / n as f64;
    (0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            -(cap - (-x).exp()).ln() * h
        })
        .sum()
}

#[test]
fn transmitter_clustering_limit_matches_area() {
    let rhs = 0.5 * (0.5 / ((-C_STAR).exp() - 0.5)).ln().powi(2);
    let want = two_slot_area(C_STAR) / rhs;
    let (got, _) = ratio_at(ScenarioKind::TransmitterClustering, 1e-4, 1.0, 1e6);
    assert!(want < 1.0);
    assert!((got - want).abs() < 1e-3, "{got} vs {want}");
}

#[test]
fn full_bound_has_full_diversity() {
    let cfg = CoopConfig::uniform(2).unwrap();
    let curve: Vec<(f64, f64)> = [1e2, 1e3, 1e4, 3e4, 1e5]
        .iter()
        .map(|&e| {
            let geom = Geometry::from_profile(2, 0.5, 0.5, 1.0, 3.0, e).unwrap();
            (e, fer_bound(&cfg, &geom, C_STAR, McOptions::new(10_000, 1)).unwrap().value)
        })
        .collect();
    let slope = diversity_estimate(&curve).unwrap();
    assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
}
