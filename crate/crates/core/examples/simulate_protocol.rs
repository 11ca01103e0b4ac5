//! Monte Carlo simulation of the protocol against the FER bound.

use ircoop::from_db;
use ircoop::outage::{fer_bound, McOptions};
use ircoop::scenario::Scenario;
use ircoop::simulator::{simulate_fer, SimConfig};

fn main() -> ircoop::Result<()> {
    let c_star = 0.17;
    println!("{:>8} {:>22} {:>22} {:>12}", "lambda", "simulated", "bound", "direct");
    for db in [0.0, 4.0, 8.0, 12.0] {
        let s = Scenario::symmetric(5, 1.0, from_db(db), from_db(db), c_star)?;
        let sim = simulate_fer(&SimConfig::new(s.clone(), 200_000, 42))?;
        let bound = fer_bound(&s.coop, &s.geometry, c_star, McOptions::new(100_000, 7))?;
        println!(
            "{db:>6.1}dB {:>12.4e} ± {:.1e} {:>12.4e} ± {:.1e} {:>12.4e}",
            sim.fer.value, sim.fer.half_width, bound.value, bound.half_width, sim.direct_fer.value
        );
    }
    Ok(())
}
