//! Dense row-reduction helpers over a [`Field`].
//!
//! Rows are `Vec<u32>` of field elements. Over GF(2) with at most 64 columns
//! the reduction runs on bit-packed words instead; both paths produce the
//! same reduced row echelon form.

use crate::gf::Field;

pub(crate) type Rows = Vec<Vec<u32>>;

/// In-place reduced row echelon form. Zero rows are dropped; returns the
/// pivot columns in increasing order.
pub(crate) fn rref(field: &Field, rows: &mut Rows, ncols: usize) -> Vec<usize> {
    if field.order() == 2 && ncols <= 64 {
        let mut packed: Vec<u64> = rows.iter().map(|r| pack(r)).collect();
        let pivots = rref_bits(&mut packed, ncols);
        *rows = packed.iter().map(|&w| unpack(w, ncols)).collect();
        return pivots;
    }
    rref_generic(field, rows, ncols)
}

pub(crate) fn rref_generic(field: &Field, rows: &mut Rows, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = field.neg(row[c]);
            for (x, &y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = field.add(*x, field.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

#[inline]
pub(crate) fn pack(row: &[u32]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | (((x & 1) as u64) << i))
}

#[inline]
pub(crate) fn unpack(w: u64, ncols: usize) -> Vec<u32> {
    (0..ncols).map(|i| ((w >> i) & 1) as u32).collect()
}

/// Bit-packed RREF over GF(2); bit `i` of a word is column `i`.
pub(crate) fn rref_bits(rows: &mut Vec<u64>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let bit = 1u64 << c;
        let Some(pr) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let p = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(field: &Field, rows: &[Vec<u32>], ncols: usize) -> usize {
    let mut rows = rows.to_vec();
    rref(field, &mut rows, ncols).len()
}

/// Reduces `v` against RREF `basis` with the given pivots; the result is zero
/// iff `v` lies in the row space.
pub(crate) fn reduce(field: &Field, basis: &[&[u32]], pivots: &[usize], v: &mut [u32]) {
    for (row, &c) in basis.iter().zip(pivots) {
        let f = v[c];
        if f != 0 {
            let nf = field.neg(f);
            for (x, &y) in v.iter_mut().zip(row.iter()) {
                *x = field.add(*x, field.mul(nf, y));
            }
        }
    }
}

/// Solves `coeffs · rows = target` for some coefficient vector, if one exists.
pub(crate) fn solve_combination(field: &Field, rows: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let n = rows.len();
    let m = target.len();
    // augment each row with an identity tag so the combination is tracked
    let mut aug: Rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend((0..n).map(|j| u32::from(i == j)));
            a
        })
        .collect();
    let pivots = rref_generic(field, &mut aug, m + n);
    let mut v: Vec<u32> = target.to_vec();
    v.extend(std::iter::repeat_n(0, n));
    // rows whose pivot lies in the first m columns span the row space
    let mut coeff = vec![0u32; n];
    for (row, &c) in aug.iter().zip(&pivots) {
        if c >= m {
            break;
        }
        let f = v[c];
        if f != 0 {
            for (x, &y) in v.iter_mut().zip(row.iter()) {
                *x = field.sub(*x, field.mul(f, y));
            }
            for (j, cj) in coeff.iter_mut().enumerate() {
                *cj = field.add(*cj, field.mul(f, row[m + j]));
            }
        }
    }
    v[..m].iter().all(|&x| x == 0).then_some(coeff)
}

/// Basis of the left kernel `{c : c · rows = 0}` of an `n × ncols` matrix.
pub(crate) fn left_kernel(field: &Field, rows: &[Vec<u32>], ncols: usize) -> Rows {
    let n = rows.len();
    let mut aug: Rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend((0..n).map(|j| u32::from(i == j)));
            a
        })
        .collect();
    let pivots = rref_generic(field, &mut aug, ncols + n);
    aug.iter()
        .zip(&pivots)
        .filter(|(_, &c)| c >= ncols)
        .map(|(row, _)| row[ncols..].to_vec())
        .collect()
}

/// Row-vector matrix product `a · b` (`a` is `n × k`, `b` is `k × m`).
pub(crate) fn mat_mul(field: &Field, a: &[Vec<u32>], b: &[Vec<u32>], m: usize) -> Rows {
    a.iter().map(|row| vec_mat(field, row, b, m)).collect()
}

pub(crate) fn vec_mat(field: &Field, v: &[u32], b: &[Vec<u32>], m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    for (&x, brow) in v.iter().zip(b) {
        if x == 0 {
            continue;
        }
        for (o, &y) in out.iter_mut().zip(brow) {
            *o = field.add(*o, field.mul(x, y));
        }
    }
    out
}

/// Inverse of a square matrix, if it exists.
pub(crate) fn invert(field: &Field, a: &[Vec<u32>]) -> Option<Rows> {
    let n = a.len();
    let mut aug: Rows = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    let pivots = rref_generic(field, &mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn dot(field: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Gaussian binomial coefficient `[n choose k]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = q.checked_pow((n - i) as u32).and_then(|x| x.checked_sub(1));
        let b = q.checked_pow((i + 1) as u32).and_then(|x| x.checked_sub(1));
        match (a.and_then(|a| num.checked_mul(a)), b.and_then(|b| den.checked_mul(b))) {
            (Some(x), Some(y)) => {
                let g = gcd(x, y);
                num = x / g;
                den = y / g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
