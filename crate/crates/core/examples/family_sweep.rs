// Capacity curves of the three gate families, printed as CSV, plus the
// least initial entanglement that still reaches the optimum.
//
// `cargo run --example family_sweep > families.csv`

use std::f64::consts::FRAC_PI_4;

use entcap::cli::{linspace, sweep_csv};
use entcap::optimize::{
    family_sweep, family_unitary, min_initial_entanglement, numeric_capacity, FamilyKind, GateFamily,
    OptimizerConfig,
};
use entcap::MeasureKind;

pub fn run_example() -> entcap::Result<()> {
    let entropy = MeasureKind::EntropyOfEntanglement;
    let cfg = OptimizerConfig::default().with_seed(7).with_restarts(16);
    let grid = linspace(0.0, FRAC_PI_4, 9);
    for kind in [FamilyKind::Cnot, FamilyKind::Dcnot, FamilyKind::Swap] {
        let rows = family_sweep(kind, &grid, entropy, 1, 1, &cfg)?;
        println!("# {kind} family, 1+1 ancillas");
        print!("{}", sweep_csv(&rows, false));
    }

    let u = family_unitary(&GateFamily::new(FamilyKind::Cnot, 0.3)?)?;
    let best = numeric_capacity(&u, entropy, 0, 0, &cfg)?;
    let least = min_initial_entanglement(&u, entropy, 0, 0, &best, 1e-6, &cfg)?;
    println!(
        "# CNOT family at 0.3: capacity {:.6}, initial entanglement {:.6} (least found {:.6})",
        best.value, best.initial_entanglement, least.initial_entanglement
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
