//! Small finite fields GF(p^e).
//!
//! Elements are integers in `[0, q)` whose base-`p` digits (little-endian) are
//! the coefficients of a polynomial in `x` reduced modulo a fixed irreducible
//! polynomial. For GF(8) the modulus is `x^3 + x + 1`, so the element `2`
//! (the polynomial `x`) is a primitive element with `x^3 = x + 1`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 4096;

/// A finite field with precomputed exp/log tables.
///
/// Immutable after construction; share it with `Arc<Field>`.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.e)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.e.hash(state);
        self.modulus.hash(state);
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Fixed moduli, little-endian coefficients including the leading 1.
fn fixed_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    match (p, e) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

fn digits(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn from_digits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    for deg in 1..=e / 2 {
        for low in 0..p.pow(deg as u32) {
            let mut d = digits(low, p, deg);
            d.push(1);
            if poly_rem(modulus, &d, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^e). Fails for a non-prime `p`, `e = 0`, or an order above
    /// [`MAX_ORDER`].
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadDegree(e));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge { p, e, max: MAX_ORDER });
        }
        let q = q as u32;
        let modulus = match fixed_modulus(p, e) {
            Some(m) => m,
            None => (0..q)
                .map(|low| {
                    let mut m = digits(low, p, e as usize);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .ok_or_else(|| Error::Consistency(format!("no irreducible modulus for {p}^{e}")))?,
        };
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables()?;
        Ok(field)
    }

    /// The field with `q` elements; `q` must be a prime power.
    pub fn with_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
        let mut e = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::Params(format!("{q} is not a prime power")));
        }
        Field::new(p, e)
    }

    /// GF(2).
    pub fn gf2() -> Field {
        Field::new(2, 1).expect("GF(2) is always constructible")
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let e = self.e as usize;
        let da = digits(a, self.p, e);
        let db = digits(b, self.p, e);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        from_digits(&r, self.p)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        if q == 2 {
            self.primitive = 1;
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return Ok(());
        }
        let x = if self.e > 1 { self.p } else { 2 };
        let candidates = std::iter::once(x).chain(2..q);
        let mut found = None;
        for g in candidates {
            let mut v = g;
            let mut order = 1;
            while v != 1 {
                v = self.slow_mul(v, g);
                order += 1;
                if order > q {
                    break;
                }
            }
            if order == q - 1 {
                found = Some(g);
                break;
            }
        }
        let g = found.ok_or_else(|| Error::Consistency("no primitive element".into()))?;
        self.primitive = g;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut v = 1;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = v;
            log[v as usize] = i as u32;
            v = self.slow_mul(v, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, little-endian, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The generator of the multiplicative group used for the tables.
    pub fn primitive_element(&self) -> u32 {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if self.q == 2 {
            return Ok(1);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (n % order)) % order;
        self.exp[l as usize]
    }

    /// `a^(p^i)` with `i` taken modulo the extension degree.
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        let i = i % self.e;
        self.pow(a, (self.p as u64).pow(i))
    }

    /// Discrete log base [`Field::primitive_element`]; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| if self.q == 2 { 0 } else { self.log[a as usize] })
    }

    /// `primitive^i`.
    pub fn exp(&self, i: u32) -> u32 {
        if self.q == 2 {
            return 1;
        }
        self.exp[(i % (self.q - 1)) as usize]
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.q {
            return Err(Error::NotAnElement { value, q: self.q });
        }
        Ok(FieldElement { value, order: self.q })
    }

    fn check(&self, a: FieldElement) -> Result<u32> {
        if a.order != self.q {
            return Err(Error::FieldMismatch(a.order, self.q));
        }
        Ok(a.value)
    }

    fn check2(&self, a: FieldElement, b: FieldElement) -> Result<(u32, u32)> {
        if a.order != b.order {
            return Err(Error::FieldMismatch(a.order, b.order));
        }
        Ok((self.check(a)?, self.check(b)?))
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { value, order: self.q }
    }

    pub fn add_elements(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (a, b) = self.check2(a, b)?;
        Ok(self.wrap(self.add(a, b)))
    }

    pub fn mul_elements(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (a, b) = self.check2(a, b)?;
        Ok(self.wrap(self.mul(a, b)))
    }

    pub fn neg_element(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.neg(self.check(a)?)))
    }

    pub fn inv_element(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.inv(self.check(a)?)?))
    }

    pub fn pow_element(&self, a: FieldElement, n: u64) -> Result<FieldElement> {
        Ok(self.wrap(self.pow(self.check(a)?, n)))
    }

    pub fn frobenius_element(&self, a: FieldElement, i: u32) -> Result<FieldElement> {
        Ok(self.wrap(self.frobenius(self.check(a)?, i)))
    }
}

/// A field element tagged with the order of its field, so that mixing
/// elements of different fields is caught.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    order: u32,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field_order(self) -> u32 {
        self.order
    }
}
