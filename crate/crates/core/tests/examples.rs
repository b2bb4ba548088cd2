macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(decompose_gate, "decompose_gate.rs", decompose_gate_runs);
example!(entanglement_measures, "entanglement_measures.rs", entanglement_measures_runs);
example!(analytic_capacity, "analytic_capacity.rs", analytic_capacity_runs);
example!(ancilla_capacity, "ancilla_capacity.rs", ancilla_capacity_runs);
example!(family_sweep, "family_sweep.rs", family_sweep_runs);
example!(interconversion, "interconversion.rs", interconversion_runs);
example!(command_line, "command_line.rs", command_line_runs);
