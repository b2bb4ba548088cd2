// Recover the canonical parameters of a gate hidden behind local unitaries.
//
// `cargo run --example decompose_gate`

use entcap::canonical::{decompose, is_locally_equivalent, local_invariants};
use entcap::qcore::gates::{cnot, swap};
use entcap::qcore::{haar_random_local_unitary, tensor_product};
use entcap::{build_canonical_unitary, CanonicalParams, ComplexMatrix};

fn dressed(u: &ComplexMatrix, seed: u64) -> ComplexMatrix {
    let (va, vb) = haar_random_local_unitary(seed);
    let (wa, wb) = haar_random_local_unitary(seed + 1);
    &(&tensor_product(&va, &vb) * u) * &tensor_product(&wa, &wb)
}

pub fn run_example() -> entcap::Result<()> {
    let target = CanonicalParams::new([0.6, 0.35, -0.2]);
    let gates = [
        ("CNOT", dressed(&cnot(), 11)),
        ("SWAP", dressed(&swap(), 12)),
        ("U_d(0.6, 0.35, -0.2)", dressed(&build_canonical_unitary(&target), 13)),
    ];
    for (name, u) in &gates {
        let p = decompose(u)?;
        let [a1, a2, a3] = p.alpha();
        println!("{name:>22}: alpha = ({a1:.12}, {a2:.12}, {a3:.12}), conjugated = {}", p.conjugated());
        let phases = local_invariants(u)?.phases();
        println!("{:>22}  invariant phases {phases:.6?}", "");
    }
    let u = &gates[2].1;
    println!("locally equivalent to U_d(0.6, 0.35, -0.2): {}", is_locally_equivalent(u, &target, 1e-9)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
