//! The 56-state code from a partition of GF(2)^5 and its maximality.
use frcode::partition_code::{build_partition, code_states, max_collection_check, semilinear_map, Semilinear};
use frcode::storage::{VerifiedCode, VerifyOptions};

fn main() -> frcode::Result<()> {
    let model = build_partition()?;
    let code = VerifiedCode::with_options(code_states(&model)?, &VerifyOptions::full())?;
    println!("{}", code.report().summary());
    let g = Semilinear::new(3, 5, 1)?;
    let map = semilinear_map(&model, g)?;
    for beta in 0..8 {
        let image = model
            .index_of(&map.apply(model.space(beta))?)
            .expect("a partition plane");
        println!("L_g(U_{beta}) = U_{image}, g({beta}) = {}", g.eval(&model.field8, beta));
    }
    let report = max_collection_check(&model, false)?;
    println!("largest collection: {} planes", report.maximum);
    Ok(())
}
