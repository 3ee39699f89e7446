//! Arithmetic in GF(8) and GF(16).
use frcode::Field;

fn main() -> frcode::Result<()> {
    let f8 = Field::with_order(8)?;
    let a = f8.primitive_element();
    println!("GF(8), alpha = {a}, modulus {:?}", f8.modulus());
    for i in 0..7 {
        println!("  alpha^{i} = {}", f8.exp(i));
    }
    println!("  alpha^3 + alpha + 1 = {}", f8.add(f8.add(f8.pow(a, 3), a), 1));
    println!("  frobenius(alpha) = {}", f8.frobenius(a, 1));

    let f16 = Field::with_order(16)?;
    let x = f16.element(11)?;
    let y = f16.inv_element(x)?;
    println!("GF(16): 11 * {} = {}", y.value(), f16.mul_elements(x, y)?.value());
    Ok(())
}
