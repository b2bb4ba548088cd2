// Closed-form capacities without ancillas across the three parameter regions.
//
// `cargo run --example analytic_capacity`

use std::f64::consts::PI;

use entcap::capacity::{
    capacity_c2, capacity_concurrence, capacity_entropy_no_ancilla, capacity_linear_entropy,
    region_of, SCAN_TOL,
};
use entcap::CanonicalParams;

pub fn run_example() -> entcap::Result<()> {
    let points = [
        [PI / 8.0, PI / 16.0, 0.0],
        [PI / 4.0, 0.0, 0.0],
        [PI / 4.0, PI / 4.0, PI / 8.0],
        [PI / 4.0, PI / 4.0, PI / 4.0],
    ];
    println!("{:>34} {:>8} {:>9} {:>9} {:>9} {:>9}", "alpha", "region", "C^2", "C", "R (2R)", "E");
    for a in points {
        let p = CanonicalParams::canonical(a)?;
        let c2 = capacity_c2(&p)?;
        let c = capacity_concurrence(&p)?;
        let r = capacity_linear_entropy(&p)?;
        let e = capacity_entropy_no_ancilla(&p, SCAN_TOL)?;
        println!(
            "{:>34} {:>8} {:>9.6} {:>9.6} {:>9.6} {:>9.6}{}",
            format!("({:.4}, {:.4}, {:.4})", a[0], a[1], a[2]),
            region_of(&p)?.to_string(),
            c2.value,
            c.value,
            r.rescaled_value.unwrap_or(f64::NAN),
            e.value,
            if c.extrapolated { "  (C extrapolated)" } else { "" }
        );
    }
    let p = CanonicalParams::canonical([PI / 8.0, PI / 16.0, 0.0])?;
    let e = capacity_entropy_no_ancilla(&p, SCAN_TOL)?;
    println!("entropy optimum at (pi/8, pi/16, 0) starts with {:.6} ebits", e.initial_entanglement);
    if let Some(psi) = &e.optimal_state {
        for (k, z) in psi.amplitudes().iter().enumerate() {
            println!("  |{k:02b}>  {:+.6} {:+.6}i", z.re, z.im);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
