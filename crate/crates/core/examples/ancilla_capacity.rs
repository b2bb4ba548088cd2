// Numerical capacities with ancillas: SWAP needs them to entangle at all,
// and entangled inputs beat product inputs for a partial CNOT.
//
// `cargo run --example ancilla_capacity`

use std::f64::consts::PI;

use entcap::measures::binary_entropy;
use entcap::optimize::{
    family_unitary, numeric_capacity, product_start_capacity, FamilyKind, GateFamily, OptimizerConfig,
};
use entcap::qcore::gates::swap;
use entcap::MeasureKind;

pub fn run_example() -> entcap::Result<()> {
    let entropy = MeasureKind::EntropyOfEntanglement;
    let cfg = OptimizerConfig::default().with_seed(2024);

    for (anc_a, anc_b) in [(0, 0), (1, 1)] {
        let r = numeric_capacity(&swap(), entropy, anc_a, anc_b, &cfg)?;
        println!(
            "SWAP, {anc_a}+{anc_b} ancillas: {:.6} ebits ({} of {} restarts converged)",
            r.value, r.converged_restarts, r.restarts
        );
    }

    let alpha = PI / 8.0;
    let u = family_unitary(&GateFamily::new(FamilyKind::Cnot, alpha)?)?;
    let product = product_start_capacity(&u, entropy, 1, 1, &cfg)?;
    let full = numeric_capacity(&u, entropy, 1, 1, &cfg)?;
    println!("CNOT family at alpha = pi/8, 1+1 ancillas:");
    println!("  product inputs   {:.6} (H(cos^2 alpha) = {:.6})", product.value, binary_entropy(alpha.cos().powi(2)));
    println!("  entangled inputs {:.6}, starting from {:.6} ebits", full.value, full.initial_entanglement);
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
