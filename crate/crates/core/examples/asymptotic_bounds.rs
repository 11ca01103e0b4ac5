//! High-energy bounds for the three cluster geometries, coding gain and
//! diversity.

use ircoop::asymptotics::{coding_gain_bound, diversity_estimate, fer_asym, fer_asym_small_cstar, ScenarioKind};
use ircoop::protocol::{CoopConfig, Geometry};

fn main() -> ircoop::Result<()> {
    let c_star = 0.05;
    let cfg = CoopConfig::uniform(3)?;
    let energy = 300.0;
    let geom = Geometry::from_profile(3, 0.5, 0.5, 1.0, 3.0, energy)?;
    for kind in [ScenarioKind::TransmitterClustering, ScenarioKind::ReceiverClustering, ScenarioKind::ClusterHopping] {
        println!("{kind:?}: {:.4e}", fer_asym(kind, &cfg, &geom, c_star)?.value);
    }
    println!("small-threshold form: {:.4e}", fer_asym_small_cstar(&cfg, &geom, c_star)?.value);
    println!("c* x cooperative coding gain >= {:.4}", coding_gain_bound(&cfg, &geom, c_star)?);

    let curve: Vec<(f64, f64)> = [1e2, 1e3, 1e4, 3e4, 1e5]
        .iter()
        .map(|&e| {
            let g = geom.with_symbol_energy(e)?;
            Ok((e, fer_asym(ScenarioKind::ClusterHopping, &cfg, &g, c_star)?.value))
        })
        .collect::<ircoop::Result<_>>()?;
    println!("diversity {:.3}", diversity_estimate(&curve)?);
    Ok(())
}
