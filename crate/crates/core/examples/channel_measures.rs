//! Capacity, Bhattacharyya rate and cutoff rate for the supported channels.

use ircoop::channels::ChannelSpec;
use ircoop::from_db;

fn main() -> ircoop::Result<()> {
    println!("{:<10} {:>8} {:>10} {:>10} {:>10}", "channel", "param", "capacity", "B = 1-g", "R0");
    for p in [0.1, 0.3, 0.5] {
        let m = ChannelSpec::bec(p)?.measures()?;
        println!(
            "{:<10} {:>8.3} {:>10.6} {:>10.6} {:>10.6}",
            "BEC", p, m.capacity, m.bhattacharyya_rate, m.cutoff_rate
        );
    }
    for db in [-5.0, 0.0, 5.0] {
        let m = ChannelSpec::bi_awgn(from_db(db))?.measures()?;
        println!(
            "{:<10} {:>6.1}dB {:>10.6} {:>10.6} {:>10.6}",
            "BI-AWGN", db, m.capacity, m.bhattacharyya_rate, m.cutoff_rate
        );
    }
    for db in [0.0, 10.0] {
        let ch = ChannelSpec::firf(from_db(db))?;
        println!(
            "{:<10} {:>6.1}dB {:>10} {:>10.6} {:>10.6}",
            "FIRF",
            db,
            "-",
            ch.bhattacharyya_rate(),
            ch.cutoff_rate()
        );
    }
    Ok(())
}
