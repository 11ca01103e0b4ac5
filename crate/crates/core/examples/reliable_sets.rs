//! Reliable-set probabilities and transmission schedules for a small cluster.

use ircoop::protocol::{link_snrs, reliable_set_prob, schedule, CoopConfig, Geometry};
use ircoop::puncturing::punctured_threshold;

fn main() -> ircoop::Result<()> {
    let c_star = 0.17;
    let cfg = CoopConfig::uniform(4)?;
    let geom = Geometry::from_profile(4, 0.8, 0.5, 1.0, 3.0, 1.0)?;
    let snrs = link_snrs(&geom);
    let chi0 = punctured_threshold(c_star, cfg.tau0())?;
    println!("chi(tau0) = {chi0:.4}, sender-to-helper SNRs {:?}", snrs.sender_to_helper);
    for (f, p) in reliable_set_prob(&cfg, &snrs.sender_to_helper, chi0)? {
        println!("  F = {f:<9} P = {p:.5}  slots {:?}", schedule(f, 4)?.slot_tx);
    }
    Ok(())
}
