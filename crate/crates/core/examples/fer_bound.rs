//! FER upper bound against average SNR for direct and cooperative links.

use ircoop::from_db;
use ircoop::outage::{fer_bound, outage_m1, McOptions};
use ircoop::scenario::Scenario;

fn main() -> ircoop::Result<()> {
    let c_star = 0.17;
    println!("{:>8} {:>12} {:>12} {:>12}", "SNR dB", "M=1", "M=2", "M=3");
    for db in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let snr = from_db(db);
        let mut row = vec![outage_m1(c_star, snr)?.value];
        for m in [2, 3] {
            let s = Scenario::symmetric(m, snr, snr, snr, c_star)?;
            row.push(fer_bound(&s.coop, &s.geometry, c_star, McOptions::new(200_000, 1))?.value);
        }
        println!("{db:>8.1} {:>12.4e} {:>12.4e} {:>12.4e}", row[0], row[1], row[2]);
    }
    Ok(())
}
