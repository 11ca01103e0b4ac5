//! UB threshold, simple threshold and SF distance of a spectrum file.
//!
//! `cargo run --example code_thresholds -- crates/core/data/synthetic_r1_7.json`

use ircoop::spectra::WeightSpectrum;

fn main() -> ircoop::Result<()> {
    let spectrum = match std::env::args().nth(1) {
        Some(path) => WeightSpectrum::load(path)?,
        None => WeightSpectrum::random_binary(1.0 / 7.0, 1000)?,
    };
    let t = spectrum.simple_threshold()?;
    println!("{} (R = {:.4})", spectrum.label(), spectrum.rate());
    println!("  c0     = {:.6} nats", t.c0);
    println!("  c*     = {:.6} nats at P* = {:.4}", t.c_star, t.p_star);
    println!("  xi     = {:.6} bits", spectrum.sf_distance());
    println!("  -ln(1-R) = {:.6}", -(1.0 - spectrum.rate()).ln());
    for p in [0.1, 0.2, 0.3, 0.4] {
        let (c_p, xi_p) = spectrum.restricted_quantities(p)?;
        println!("  P = {p:.1}: c_P = {c_p:.6}, xi_P = {xi_p:.6}");
    }
    Ok(())
}
