//! Random failures and repairs on the 56-state code.
use std::sync::Arc;

use frcode::partition_code::{build_partition, code_states};
use frcode::simulator::{dss_init, run_random};
use frcode::storage::VerifiedCode;
use frcode::Vector;

fn main() -> frcode::Result<()> {
    let model = build_partition()?;
    let code = Arc::new(VerifiedCode::new(code_states(&model)?)?);
    let x = Vector::new(&model.gf2, vec![1, 0, 1, 1, 0])?;
    let mut dss = dss_init(code, x)?.seeded(42);
    let report = run_random(&mut dss, 200, 42, true)?;
    println!("{}", report.summary());
    print!("{}", report.transcript.lines().take(7).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
