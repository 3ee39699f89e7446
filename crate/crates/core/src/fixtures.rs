//! Small worked instances used by tests, examples and the CLI.

use std::sync::Arc;

use crate::gf::Field;
use crate::storage::CodeParams;
use crate::subspace::Subspace;

fn plane(f: &Arc<Field>, m: usize, a: &[u32], b: &[u32]) -> Subspace {
    assert_eq!(a.len(), m);
    Subspace::from_rows(f, m, vec![a.to_vec(), b.to_vec()]).expect("valid rows")
}

/// The exact-repair code over `F_2^4` with node spaces
/// `U_i = <e_i, e_{i+2} + e_{i+3}>` (indices mod 4).
pub fn four_node_spaces() -> Vec<Subspace> {
    let f = Arc::new(Field::gf2());
    (0..4)
        .map(|i| {
            let mut a = [0u32; 4];
            a[i] = 1;
            let mut b = [0u32; 4];
            b[(i + 2) % 4] = 1;
            b[(i + 3) % 4] = 1;
            plane(&f, 4, &a, &b)
        })
        .collect()
}

/// `(m=4; n=4, k=2, r=3, alpha=2, beta=1)` over GF(2).
pub fn four_node_params() -> CodeParams {
    CodeParams::new(4, 4, 2, 3, 2, 1, 2).expect("valid parameters")
}

/// `(m=5; n=4, k=3, r=3, alpha=2, beta=1)` over GF(2).
pub fn good_triple_params() -> CodeParams {
    CodeParams::new(5, 4, 3, 3, 2, 1, 2).expect("valid parameters")
}

/// `<e1,a1>, <e2,a2>, <e3,a3>` in `F_2^5` with coordinates `(e1,e2,e3,a1,a2)`
/// and `a3 = a1 + a2`.
pub fn good_triple() -> Vec<Subspace> {
    let f = Arc::new(Field::gf2());
    vec![
        plane(&f, 5, &[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0]),
        plane(&f, 5, &[0, 1, 0, 0, 0], &[0, 0, 0, 0, 1]),
        plane(&f, 5, &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 1]),
    ]
}

/// `<e1 + e2, e1 + e3>`, a valid fourth node for [`good_triple`].
pub fn good_triple_newcomer() -> Subspace {
    let f = Arc::new(Field::gf2());
    plane(&f, 5, &[1, 1, 0, 0, 0], &[1, 0, 1, 0, 0])
}
