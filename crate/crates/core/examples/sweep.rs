//! Prints the exhaustive catalog sweep as JSON, then every profile whose
//! witness comes from the quotient fallback instead of a table row.
//!
//!     cargo run --example sweep -- 6

use freetorus_core::{catalog, oracle};

fn main() {
    let bound: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(oracle::MAX_SWEEP_BOUND);
    let r = oracle::exhaustive_row_sweep(bound).expect("bound within range");
    println!("{}", r.to_json());
    for n in 7..=10 {
        for p in oracle::enumerate_profiles(n, bound) {
            if let Ok(Some(w)) = catalog::table1_base(&p) {
                if w.source == "quotient" {
                    println!("fallback: {p}");
                }
            }
        }
    }
}
