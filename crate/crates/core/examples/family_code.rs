//! An (r,s)-good collection, random family steps, and the reachable code.
use frcode::family::{
    canonical_choice, construct_good, family_closure, family_params, family_step, is_good, random_choice,
};
use frcode::storage::VerifiedCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> frcode::Result<()> {
    let (r, s, q) = (3, 1, 2);
    let params = family_params(r, s, q)?;
    let good = construct_good(r, s, q)?;
    println!("{params}: seed {:?}", good.spaces());
    let choice = canonical_choice(&good)?;
    let step = family_step(&good, &choice)?;
    println!("canonical newcomer {:?}", step.newcomer);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut current = good;
    for _ in 0..100 {
        let step = family_step(&current, &random_choice(&current, &mut rng)?)?;
        current = step.successors[rng.gen_range(0..r)].clone();
        assert!(is_good(current.spaces(), r, s)?);
    }
    println!("100 random steps stayed good; now at {:?}", current.spaces());

    let (r, s) = (3, 0);
    let code = VerifiedCode::new(family_closure(r, s, q, 10_000)?)?;
    println!("({r},{s}) closure: {}", code.report().summary());
    Ok(())
}
