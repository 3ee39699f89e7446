//! The four-node exact-repair code over GF(2)^4: verification and the
//! repair of node 0 from x0 + x3, x2 and x3.
use std::sync::Arc;

use frcode::fixtures::{four_node_params, four_node_spaces};
use frcode::simulator::dss_init_with_layout;
use frcode::storage::{exact_to_states, recovery_dimension, VerifiedCode};
use frcode::{Field, Subspace, Vector};

fn main() -> frcode::Result<()> {
    let spaces = four_node_spaces();
    let params = four_node_params();
    let code = Arc::new(VerifiedCode::new(exact_to_states(&spaces, &params)?)?);
    println!("{}", code.report().summary());
    println!("recovery dimension {}", recovery_dimension(&spaces, params.m)?);

    let f = Arc::new(Field::gf2());
    let x = Vector::new(&f, vec![1, 1, 0, 1])?;
    let mut dss = dss_init_with_layout(code, spaces.clone(), x)?;
    dss.fail(0)?;
    let line = |v: Vec<u32>| Subspace::from_rows(&f, 4, vec![v]);
    let helpers = vec![
        (1, line(vec![1, 0, 0, 1])?),
        (2, line(vec![0, 0, 1, 0])?),
        (3, line(vec![0, 0, 0, 1])?),
    ];
    let t = dss.repair_with(0, &spaces[0], &helpers)?;
    print!("{}", t.to_text());
    println!("recovered from nodes 2, 3: {:?}", dss.collect(&[2, 3])?.coords());
    Ok(())
}
