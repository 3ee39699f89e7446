//! Subspaces of `F_q^m` in canonical reduced row echelon form.
//!
//! A [`Subspace`] stores its RREF basis, so equality, ordering and hashing of
//! subspaces are plain comparisons of that basis. The byte key returned by
//! [`Subspace::key`] orders the same way as the basis.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{self, Rows};

/// Default cap on the number of vectors yielded by [`Subspace::vectors`].
pub const DEFAULT_VECTOR_CAP: u64 = 1 << 20;
/// Default cap on the number of subspaces yielded by [`enumerate_subspaces`].
pub const DEFAULT_SUBSPACE_CAP: u64 = 1_000_000;

/// A vector of `F_q^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Arc<Field>,
    coords: Vec<u32>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Vector {
    pub fn new(field: &Arc<Field>, coords: Vec<u32>) -> Result<Vector> {
        if let Some(&bad) = coords.iter().find(|&&c| c >= field.order()) {
            return Err(Error::NotAnElement {
                value: bad,
                q: field.order(),
            });
        }
        Ok(Vector {
            field: field.clone(),
            coords,
        })
    }

    pub(crate) fn from_raw(field: &Arc<Field>, coords: Vec<u32>) -> Vector {
        Vector {
            field: field.clone(),
            coords,
        }
    }

    pub fn zero(field: &Arc<Field>, m: usize) -> Vector {
        Vector::from_raw(field, vec![0; m])
    }

    /// The `i`-th standard basis vector of `F_q^m`.
    pub fn unit(field: &Arc<Field>, m: usize, i: usize) -> Vector {
        let mut c = vec![0; m];
        c[i] = 1;
        Vector::from_raw(field, c)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if *self.field != *other.field || self.len() != other.len() {
            return Err(Error::Ambient(format!(
                "vectors in GF({})^{} and GF({})^{}",
                self.field.order(),
                self.len(),
                other.field.order(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        let f = &self.field;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Vector::from_raw(f, coords))
    }

    pub fn scale(&self, c: u32) -> Vector {
        let f = &self.field;
        Vector::from_raw(f, self.coords.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn dot(&self, other: &Vector) -> Result<u32> {
        self.check(other)?;
        Ok(linalg::dot(&self.field, &self.coords, &other.coords))
    }
}

/// A subspace of `F_q^m`, held as its reduced row echelon basis.
#[derive(Clone)]
pub struct Subspace {
    field: Arc<Field>,
    m: usize,
    dim: usize,
    rows: Box<[u32]>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.field.order() == other.field.order() && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.rows.hash(state);
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .order()
            .cmp(&other.field.order())
            .then(self.m.cmp(&other.m))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.basis().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for &x in row {
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    /// The zero subspace of `F_q^m`.
    pub fn zero(field: &Arc<Field>, m: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            m,
            dim: 0,
            rows: Box::new([]),
        }
    }

    /// All of `F_q^m`.
    pub fn full(field: &Arc<Field>, m: usize) -> Subspace {
        let rows: Rows = (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect();
        Subspace::from_rref(field, m, rows)
    }

    /// The span of `vectors`; the empty list spans the zero subspace.
    pub fn span(field: &Arc<Field>, m: usize, vectors: &[Vector]) -> Result<Subspace> {
        for v in vectors {
            if v.len() != m || *v.field != **field {
                return Err(Error::Ambient(format!(
                    "vector of length {} over GF({}) in GF({})^{m}",
                    v.len(),
                    v.field.order(),
                    field.order()
                )));
            }
        }
        Ok(Subspace::from_rows_unchecked(
            field,
            m,
            vectors.iter().map(|v| v.coords.clone()).collect(),
        ))
    }

    /// Span of raw coordinate rows, validating lengths and entries.
    pub fn from_rows(field: &Arc<Field>, m: usize, rows: Vec<Vec<u32>>) -> Result<Subspace> {
        for r in &rows {
            if r.len() != m {
                return Err(Error::Ambient(format!("row of length {} in F^{m}", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&c| c >= field.order()) {
                return Err(Error::NotAnElement {
                    value: bad,
                    q: field.order(),
                });
            }
        }
        Ok(Subspace::from_rows_unchecked(field, m, rows))
    }

    pub(crate) fn from_rows_unchecked(field: &Arc<Field>, m: usize, mut rows: Rows) -> Subspace {
        linalg::rref(field, &mut rows, m);
        Subspace::from_rref(field, m, rows)
    }

    /// `rows` must already be in reduced row echelon form.
    pub(crate) fn from_rref(field: &Arc<Field>, m: usize, rows: Rows) -> Subspace {
        let dim = rows.len();
        Subspace {
            field: field.clone(),
            m,
            dim,
            rows: rows.into_iter().flatten().collect(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Ambient dimension.
    pub fn ambient(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rows of the RREF basis.
    pub fn basis(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.rows.chunks(self.m.max(1)).take(self.dim)
    }

    pub fn basis_rows(&self) -> Rows {
        self.basis().map(|r| r.to_vec()).collect()
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis()
            .map(|r| Vector::from_raw(&self.field, r.to_vec()))
            .collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis()
            .map(|r| r.iter().position(|&x| x != 0).expect("basis rows are nonzero"))
            .collect()
    }

    /// Canonical byte string: one byte per coordinate when `q <= 256`,
    /// otherwise two big-endian bytes.
    pub fn key(&self) -> Vec<u8> {
        if self.field.order() <= 256 {
            self.rows.iter().map(|&x| x as u8).collect()
        } else {
            self.rows.iter().flat_map(|&x| (x as u16).to_be_bytes()).collect()
        }
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.m != other.m || *self.field != *other.field {
            return Err(Error::Ambient(format!(
                "subspaces of GF({})^{} and GF({})^{}",
                self.field.order(),
                self.m,
                other.field.order(),
                other.m
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace) -> Subspace {
        if other.dim == 0 {
            return self.clone();
        }
        if self.dim == 0 {
            return other.clone();
        }
        let rows = self.basis().chain(other.basis()).map(|r| r.to_vec()).collect();
        Subspace::from_rows_unchecked(&self.field, self.m, rows)
    }

    /// Sum of any number of subspaces sharing `field` and `m`.
    pub fn sum_all<'a>(
        field: &Arc<Field>,
        m: usize,
        spaces: impl IntoIterator<Item = &'a Subspace>,
    ) -> Result<Subspace> {
        let mut rows = Vec::new();
        for s in spaces {
            if s.m != m || *s.field != **field {
                return Err(Error::Ambient("mixed ambient spaces in sum".into()));
            }
            rows.extend(s.basis().map(|r| r.to_vec()));
        }
        Ok(Subspace::from_rows_unchecked(field, m, rows))
    }

    /// Dimension of the sum without building the canonical form.
    pub(crate) fn sum_dim<'a>(spaces: impl IntoIterator<Item = &'a Subspace>) -> usize {
        let mut iter = spaces.into_iter().peekable();
        let Some(first) = iter.peek() else { return 0 };
        let field = first.field.clone();
        let m = first.m;
        let rows: Rows = iter.flat_map(|s| s.basis().map(|r| r.to_vec())).collect();
        linalg::rank(&field, &rows, m)
    }

    /// Exact intersection by two-block elimination of `[A A; B 0]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let m = self.m;
        let mut rows: Rows = self
            .basis()
            .map(|r| r.iter().chain(r.iter()).copied().collect())
            .chain(
                other
                    .basis()
                    .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, m)).collect()),
            )
            .collect();
        let pivots = linalg::rref(&self.field, &mut rows, 2 * m);
        let inter: Rows = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, c)| *c >= m)
            .map(|(r, _)| r[m..].to_vec())
            .collect();
        Ok(Subspace::from_rows_unchecked(&self.field, m, inter))
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        if v.len() != self.m || *v.field != *self.field {
            return Err(Error::Ambient("vector outside ambient space".into()));
        }
        Ok(self.contains_coords(&v.coords))
    }

    pub(crate) fn contains_coords(&self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        let basis: Vec<&[u32]> = self.basis().collect();
        linalg::reduce(&self.field, &basis, &self.pivots(), &mut v);
        v.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(self.is_subspace_of_unchecked(other))
    }

    pub(crate) fn is_subspace_of_unchecked(&self, other: &Subspace) -> bool {
        self.dim <= other.dim && self.basis().all(|r| other.contains_coords(r))
    }

    /// Coordinates of `v` in this subspace's RREF basis, if `v` lies in it.
    pub(crate) fn coordinates_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots().iter().map(|&c| v[c]).collect();
        let recon = self.combine(&coords);
        (recon == v).then_some(coords)
    }

    /// `Σ coeffs[i] · basis[i]`.
    pub(crate) fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let basis: Rows = self.basis_rows();
        linalg::vec_mat(&self.field, coeffs, &basis, self.m)
    }

    /// All vectors of the subspace, lexicographic in coefficient space.
    pub fn vectors(&self) -> Result<VectorIter> {
        self.vectors_capped(DEFAULT_VECTOR_CAP)
    }

    pub fn vectors_capped(&self, cap: u64) -> Result<VectorIter> {
        let q = self.field.order() as u64;
        let count = q.checked_pow(self.dim as u32).unwrap_or(u64::MAX);
        if count > cap {
            return Err(Error::CapExceeded {
                what: "vector enumeration",
                cap,
            });
        }
        Ok(VectorIter {
            space: self.clone(),
            basis: self.basis_rows(),
            next: Some(vec![0; self.dim]),
        })
    }

    /// All `d`-dimensional subspaces of this subspace, sorted by key.
    pub fn subspaces(&self, d: usize) -> Result<Vec<Subspace>> {
        if d > self.dim {
            return Err(Error::Dimension(format!(
                "no {d}-dimensional subspaces in a {}-dimensional space",
                self.dim
            )));
        }
        let coeff = enumerate_subspaces(&self.field, self.dim, d)?;
        let basis = self.basis_rows();
        let mut out: Vec<Subspace> = coeff
            .iter()
            .map(|c| {
                let rows = linalg::mat_mul(&self.field, &c.basis_rows(), &basis, self.m);
                Subspace::from_rows_unchecked(&self.field, self.m, rows)
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Iterator over the vectors of a subspace.
pub struct VectorIter {
    space: Subspace,
    basis: Rows,
    next: Option<Vec<u32>>,
}

impl Iterator for VectorIter {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        let coeffs = self.next.take()?;
        let field = &self.space.field;
        let v = linalg::vec_mat(field, &coeffs, &self.basis, self.space.m);
        // advance the coefficient odometer, last coordinate fastest
        let q = field.order();
        let mut c = coeffs;
        let mut i = c.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < q {
                self.next = Some(c);
                break;
            }
            c[i] = 0;
        }
        Some(Vector::from_raw(field, v))
    }
}

/// Every `d`-dimensional subspace of `F_q^m`, in canonical-key order.
pub fn enumerate_subspaces(field: &Arc<Field>, m: usize, d: usize) -> Result<Vec<Subspace>> {
    enumerate_subspaces_capped(field, m, d, DEFAULT_SUBSPACE_CAP)
}

pub fn enumerate_subspaces_capped(field: &Arc<Field>, m: usize, d: usize, cap: u64) -> Result<Vec<Subspace>> {
    if d > m {
        return Err(Error::Dimension(format!("subspace dimension {d} exceeds {m}")));
    }
    let count = linalg::gaussian_binomial(field.order() as u64, m, d);
    if count > cap as u128 {
        return Err(Error::CapExceeded {
            what: "subspace enumeration",
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let q = field.order();
    for pivots in combinations(m, d) {
        // free entries: row t, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(t, &p)| {
                let pivots = &pivots;
                ((p + 1)..m).filter(move |c| !pivots.contains(c)).map(move |c| (t, c))
            })
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; m]; d];
            for (t, &p) in pivots.iter().enumerate() {
                rows[t][p] = 1;
            }
            for (&(t, c), &v) in free.iter().zip(&vals) {
                rows[t][c] = v;
            }
            out.push(Subspace::from_rref(field, m, rows));
            let mut i = vals.len();
            let mut done = true;
            while i > 0 {
                i -= 1;
                vals[i] += 1;
                if vals[i] < q {
                    done = false;
                    break;
                }
                vals[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
