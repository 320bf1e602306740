//! Run every theorem verifier on a group and print the verdicts.
//!
//! `cargo run --release --example verify_suite -- higman 3 3`

use pqp::corpus::{build, FamilySpec};
use pqp::theorems::{run_suite, Suite, VerifyOptions};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let spec = match args.first().map(String::as_str) {
        Some("higman") => FamilySpec::higman(arg(&args, 1, 3), arg(&args, 2, 2)),
        Some("extraspecial") => FamilySpec::extraspecial(arg(&args, 1, 3)),
        Some("256") => FamilySpec::paper_256(),
        _ => FamilySpec::paper_729(),
    };
    let g = build(&spec).unwrap();
    let verdicts = run_suite(&g, &spec.label(), Suite::All, VerifyOptions::default()).unwrap();
    for v in verdicts {
        println!("{:<12} {:?}  [{}]", v.id, v.status, v.swept);
        if let Some(w) = &v.witness {
            println!("    {}", w.note);
        }
    }
}

fn arg(args: &[String], i: usize, default: u32) -> u32 {
    args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}
