// Drive the `entcap` command line in-process: write a gate to disk, then
// decompose it, query its capacity and sweep a family into a CSV file.
//
// `cargo run --example command_line`

use std::path::PathBuf;

use entcap::cli::run_with;

fn entcap(args: &[&str]) -> entcap::Result<String> {
    let mut argv = vec!["entcap"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    if code != 0 {
        return Err(entcap::Error::Parse(format!(
            "exit {code}: {}",
            String::from_utf8_lossy(&err)
        )));
    }
    Ok(String::from_utf8_lossy(&out).into_owned())
}

pub fn run_example() -> entcap::Result<()> {
    let dir: PathBuf = std::env::temp_dir().join(format!("entcap-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let gate = dir.join("cnot.txt");
    std::fs::write(&gate, "1 0 0 0\n0 1 0 0\n0 0 0 1\n0 0 1 0\n")?;
    let gate = gate.to_str().expect("utf-8 path");

    print!("{}", entcap(&["decompose", "--matrix", gate])?);
    print!("{}", entcap(&["capacity", "--matrix", gate, "--measure", "c2"])?);
    print!("{}", entcap(&["capacity", "--alpha", "0.3,0.2,0.1", "--measure", "entropy"])?);

    let csv = dir.join("swap.csv");
    entcap(&[
        "sweep", "--family", "swap", "--alpha-min", "0", "--alpha-max", "0.7853981634", "--steps", "4",
        "--measure", "entropy", "--anc-a", "1", "--anc-b", "1", "--restarts", "8", "--seed", "7",
        "--out", csv.to_str().expect("utf-8 path"),
    ])?;
    print!("{}", std::fs::read_to_string(&csv)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> entcap::Result<()> {
    run_example()
}
