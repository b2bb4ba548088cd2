// The four pure-state measures on a few states, including a state with
// ancillas where only the entropies apply.
//
// `cargo run --example entanglement_measures`

use entcap::measures::{entropy_from_concurrence, evaluate, value_and_gradient};
use entcap::qcore::random::haar_random_state;
use entcap::{MeasureKind, Party, PureState, C64};

pub fn run_example() -> entcap::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ab = vec![Party::A, Party::B];
    let states = [
        ("|00>", PureState::basis("00", ab.clone())?),
        (
            "Bell",
            PureState::new(vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)], ab.clone())?,
        ),
        ("Haar (seed 5)", haar_random_state(2, 5)),
    ];
    for (name, psi) in &states {
        let values: Vec<String> = MeasureKind::ALL
            .iter()
            .map(|&m| Ok(format!("{m} = {:.6}", evaluate(m, psi)?)))
            .collect::<entcap::Result<_>>()?;
        println!("{name:>14}: {}", values.join(", "));
    }

    let psi = &states[2].1;
    let c = evaluate(MeasureKind::Concurrence, psi)?;
    println!(
        "entropy from concurrence: {:.12} vs direct {:.12}",
        entropy_from_concurrence(c)?,
        evaluate(MeasureKind::EntropyOfEntanglement, psi)?
    );

    // Alice holds qubits 0 and 1, Bob holds 2 and 3.
    let wide = PureState::normalized(
        haar_random_state(4, 9).into_amplitudes(),
        vec![Party::A, Party::A, Party::B, Party::B],
    )?;
    let (e, grad) = value_and_gradient(MeasureKind::EntropyOfEntanglement, &wide)?;
    let norm: f64 = grad.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    println!("4-qubit state: entropy {e:.6} bits, gradient norm {norm:.6}");
    match evaluate(MeasureKind::Concurrence, &wide) {
        Err(err) => println!("concurrence on 4 qubits: {err}"),
        Ok(v) => println!("unexpected concurrence {v}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
