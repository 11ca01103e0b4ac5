//! Energy savings of cooperation: the clustering table and a κ sweep.

use ircoop::energy::{achievable_energy, energy_saving, energy_saving_firf, optimize_tau0, EnergyMode, EnergyQuery};
use ircoop::to_db;

fn main() -> ircoop::Result<()> {
    let (eps, c_star) = (0.01, 0.17);
    for m in 2..=5 {
        let q = EnergyQuery::new(eps, m, c_star);
        let exact = achievable_energy(&EnergyQuery::new(eps, 1, c_star), EnergyMode::Direct, None)?
            / achievable_energy(&q, EnergyMode::TransmitterClusteringExact, None)?;
        println!("M = {m}: U = {:.2} dB (exact factorial {:.2} dB)", to_db(energy_saving(&q)?), to_db(exact));
    }
    println!("FIRF: U = {:.2} dB", to_db(energy_saving_firf(c_star, eps)));

    let q = EnergyQuery::new(eps, 5, 0.05);
    for k in 1..=9 {
        let kappa = k as f64 / 10.0;
        let (tau0, u) = optimize_tau0(&q, kappa)?;
        println!("kappa = {kappa:.1}: tau0* = {tau0:.4}, U = {:.2} dB", to_db(u));
    }
    Ok(())
}
