//! Punctured thresholds and the listen-fraction adjustment.

use ircoop::puncturing::{
    adjusted_threshold, effective_listen_fraction, punctured_threshold, self_decodable_limit, DEFAULT_LISTEN_MARGIN,
};
use ircoop::to_db;

fn main() -> ircoop::Result<()> {
    let c_star = 0.17;
    println!("c* = {c_star}, self-decodable above tau = {:.4}", self_decodable_limit(c_star));
    for k in (1..=7).rev() {
        let tau = k as f64 / 7.0;
        match punctured_threshold(c_star, tau) {
            Ok(chi) => println!("  tau = {k}/7: chi = {chi:.4} ({:.2} dB)", to_db(chi)),
            Err(e) => println!("  tau = {k}/7: {e}"),
        }
    }
    let (tau0, theta) = (0.5, 1.0);
    let listen = effective_listen_fraction(c_star, theta, tau0, DEFAULT_LISTEN_MARGIN)?;
    println!("helper at broadcast SNR {theta} can stop listening after {listen:.4} of the frame");
    for latency in [0.0, 0.05, 0.1] {
        println!("  decoding latency {latency:.2}: threshold {:.4}", adjusted_threshold(c_star, tau0, latency)?);
    }
    Ok(())
}
