// How many uses of one gate a single use of another can be worth, and the
// capacity of several uses processed together.
//
// `cargo run --example interconversion`

use entcap::capacity::{interconversion_bounds, n_copy_capacity};
use entcap::optimize::OptimizerConfig;
use entcap::qcore::gates::{cnot, dcnot};
use entcap::{ComplexMatrix, Error};

pub fn run_example() -> entcap::Result<()> {
    let cfg = OptimizerConfig::default().with_seed(1).with_restarts(16);
    let pairs = [("DCNOT", dcnot(), "CNOT", cnot()), ("CNOT", cnot(), "DCNOT", dcnot())];
    for (n1, u1, n2, u2) in &pairs {
        let b = interconversion_bounds(u1, u2, &cfg)?;
        println!(
            "{n1} -> {n2}: one use makes >= {:.4} ebits, simulates <= {:.4} uses of {n2}",
            b.ebit_lower_bound, b.rate_upper_bound
        );
    }
    match interconversion_bounds(&cnot(), &ComplexMatrix::identity(4), &cfg) {
        Err(Error::ZeroCapacityDenominator(v)) => println!("CNOT -> identity: no finite rate (capacity {v:.1e})"),
        other => println!("unexpected: {other:?}"),
    }
    for n in 1..=3 {
        println!("{n} uses of CNOT: {:.4} ebits", n_copy_capacity(&cnot(), n, &cfg)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
