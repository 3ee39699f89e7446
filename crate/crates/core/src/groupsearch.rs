//! Building small codes from symmetry.
//!
//! Given a state `(U, U_n)`, find invertible maps `L_i` sending the collection
//! `U` onto `U + {U_n} - {U_i}`, generate the group they span, and take the
//! orbit of `U`. The orbit is a set of admissible repairing collections; it
//! is verified with [`check_repair_property`] rather than trusted.
//!
//! Maps act on row vectors: `v -> v M`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{self, Rows};
use crate::storage::{
    find_witness, spanning_subset, CodeParams, RepairWitness, RepairingCollection, StateSet, VerifiedCode,
};
use crate::subspace::{Subspace, Vector};

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

/// An invertible `m x m` matrix over a field.
#[derive(Clone)]
pub struct LinearMap {
    field: Arc<Field>,
    m: usize,
    matrix: Rows,
}

impl PartialEq for LinearMap {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.matrix == other.matrix && *self.field == *other.field
    }
}

impl Eq for LinearMap {}

impl Hash for LinearMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.matrix.hash(state);
    }
}

impl PartialOrd for LinearMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.m, &self.matrix).cmp(&(other.m, &other.matrix))
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for x in row {
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

impl LinearMap {
    /// Fails with [`Error::NotInvertible`] for a singular matrix.
    pub fn new(field: &Arc<Field>, matrix: Rows) -> Result<Self> {
        let m = matrix.len();
        if matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        if matrix.iter().flatten().any(|&x| x >= field.order()) {
            return Err(Error::NotAnElement {
                value: *matrix.iter().flatten().find(|&&x| x >= field.order()).unwrap(),
                q: field.order(),
            });
        }
        if linalg::rank(field, &matrix, m) != m {
            return Err(Error::NotInvertible);
        }
        Ok(LinearMap {
            field: field.clone(),
            m,
            matrix,
        })
    }

    pub fn identity(field: &Arc<Field>, m: usize) -> Self {
        LinearMap {
            field: field.clone(),
            m,
            matrix: (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &Rows {
        &self.matrix
    }

    /// Row-major bytes.
    pub fn key(&self) -> Vec<u8> {
        self.matrix
            .iter()
            .flatten()
            .flat_map(|&x| {
                if self.field.order() <= 256 {
                    vec![x as u8]
                } else {
                    (x as u16).to_be_bytes().to_vec()
                }
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == u32::from(i == j)))
    }

    pub fn apply_coords(&self, v: &[u32]) -> Vec<u32> {
        linalg::vec_mat(&self.field, v, &self.matrix, self.m)
    }

    pub fn apply_vector(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.m {
            return Err(Error::Ambient(format!(
                "vector of length {} for a {}-map",
                v.len(),
                self.m
            )));
        }
        Vector::new(&self.field, self.apply_coords(v.coords()))
    }

    pub fn apply(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.m || **s.field() != *self.field {
            return Err(Error::Ambient("subspace and map live in different spaces".into()));
        }
        let rows = linalg::mat_mul(&self.field, &s.basis_rows(), &self.matrix, self.m);
        Subspace::from_rows(&self.field, self.m, rows)
    }

    pub fn apply_collection(&self, c: &RepairingCollection) -> Result<RepairingCollection> {
        Ok(RepairingCollection::new(
            c.spaces().iter().map(|s| self.apply(s)).collect::<Result<_>>()?,
        ))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearMap) -> LinearMap {
        LinearMap {
            field: self.field.clone(),
            m: self.m,
            matrix: linalg::mat_mul(&self.field, &self.matrix, &next.matrix, self.m),
        }
    }

    /// `h ∘ g`: apply `g`, then `h`.
    pub fn compose(h: &LinearMap, g: &LinearMap) -> LinearMap {
        g.then(h)
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap {
            field: self.field.clone(),
            m: self.m,
            matrix: linalg::invert(&self.field, &self.matrix).expect("maps are invertible"),
        }
    }

    /// Multiplicative order, up to `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_identity() {
                return Some(k);
            }
            p = p.then(self);
        }
        None
    }

    /// The permutation of `spaces` induced by the map, if it permutes them.
    pub fn permutation_of(&self, spaces: &[Subspace]) -> Option<Vec<usize>> {
        let mut used = vec![false; spaces.len()];
        let mut perm = Vec::with_capacity(spaces.len());
        for s in spaces {
            let img = self.apply(s).ok()?;
            let j = (0..spaces.len()).find(|&j| !used[j] && spaces[j] == img)?;
            used[j] = true;
            perm.push(j);
        }
        Some(perm)
    }
}

/// A finite matrix group given by generators, closed by breadth-first search.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub generators: Vec<LinearMap>,
    /// Sorted by matrix key.
    pub elements: Vec<LinearMap>,
    pub cap: usize,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &LinearMap) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Checks closure under products and inverses exhaustively.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|g| self.contains(&g.inverse()) && self.elements.iter().all(|h| self.contains(&g.then(h))))
    }

    /// Number of elements of order exactly 2.
    pub fn involutions(&self) -> usize {
        self.elements
            .iter()
            .filter(|g| !g.is_identity() && g.then(g).is_identity())
            .count()
    }

    /// Whether the group permutes `spaces` transitively.
    pub fn is_transitive_on(&self, spaces: &[Subspace]) -> bool {
        let perms: Vec<Vec<usize>> = self.elements.iter().filter_map(|g| g.permutation_of(spaces)).collect();
        orbit_of_zero(&perms, spaces.len()) == spaces.len()
    }
}

fn orbit_of_zero(perms: &[Vec<usize>], n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for p in perms {
            if !seen[p[i]] {
                seen[p[i]] = true;
                stack.push(p[i]);
            }
        }
    }
    seen.iter().filter(|&&b| b).count()
}

/// Closes `generators` under multiplication. Exceeding `cap` elements is an
/// error, never a truncated group.
pub fn generate_group(generators: &[LinearMap], cap: usize) -> Result<GroupClosure> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Precondition("no generators".into()))?;
    for g in generators {
        if g.m != first.m || *g.field != *first.field {
            return Err(Error::Precondition("generators act on different spaces".into()));
        }
    }
    if first.field.order() == 2 && first.m <= 8 {
        return generate_packed(generators, cap);
    }
    let id = LinearMap::identity(&first.field, first.m);
    let mut seen: HashSet<LinearMap> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.then(s);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        cap: cap as u64,
                    });
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut elements: Vec<LinearMap> = seen.into_iter().collect();
    elements.sort();
    Ok(GroupClosure {
        generators: generators.to_vec(),
        elements,
        cap,
    })
}

/// GF(2) matrices with at most 8 columns, packed row-major into `m * m`
/// bits.
fn pack_matrix(g: &LinearMap) -> u64 {
    g.matrix
        .iter()
        .flatten()
        .enumerate()
        .fold(0, |acc, (k, &x)| acc | (u64::from(x) << k))
}

fn unpack_matrix(field: &Arc<Field>, m: usize, w: u64) -> LinearMap {
    LinearMap {
        field: field.clone(),
        m,
        matrix: (0..m)
            .map(|i| (0..m).map(|j| ((w >> (i * m + j)) & 1) as u32).collect())
            .collect(),
    }
}

fn packed_mul(a: u64, b: u64, m: usize) -> u64 {
    let mask = (1u64 << m) - 1;
    let mut out = 0u64;
    for i in 0..m {
        let row = (a >> (i * m)) & mask;
        let mut acc = 0u64;
        for j in 0..m {
            if row >> j & 1 == 1 {
                acc ^= (b >> (j * m)) & mask;
            }
        }
        out |= acc << (i * m);
    }
    out
}

/// Visited set: a flat bitmap for up to 25 bits, a hash set beyond.
enum Visited {
    Bits(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl Visited {
    fn new(bits: usize) -> Self {
        if bits <= 25 {
            Visited::Bits(vec![0; (1usize << bits).div_ceil(64)])
        } else {
            Visited::Hashed(HashSet::new())
        }
    }

    fn insert(&mut self, w: u64) -> bool {
        match self {
            Visited::Bits(v) => {
                let (i, b) = ((w >> 6) as usize, 1u64 << (w & 63));
                let fresh = v[i] & b == 0;
                v[i] |= b;
                fresh
            }
            Visited::Hashed(h) => h.insert(w),
        }
    }
}

fn generate_packed(generators: &[LinearMap], cap: usize) -> Result<GroupClosure> {
    let field = generators[0].field.clone();
    let m = generators[0].m;
    let gens: Vec<u64> = generators.iter().map(pack_matrix).collect();
    let id = pack_matrix(&LinearMap::identity(&field, m));
    let mut seen = Visited::new(m * m);
    let mut found = vec![id];
    seen.insert(id);
    let mut next = 0;
    while next < found.len() {
        let g = found[next];
        next += 1;
        for &s in &gens {
            let h = packed_mul(g, s, m);
            if seen.insert(h) {
                if found.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        cap: cap as u64,
                    });
                }
                found.push(h);
            }
        }
    }
    let mut elements: Vec<LinearMap> = found.into_iter().map(|w| unpack_matrix(&field, m, w)).collect();
    elements.sort();
    Ok(GroupClosure {
        generators: generators.to_vec(),
        elements,
        cap,
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Backtracking over images of an adapted basis, for one fixed assignment of
/// source spaces to target spaces.
struct PairSearch<'a> {
    field: &'a Arc<Field>,
    m: usize,
    basis: Rows,
    /// Candidate images per basis vector.
    candidates: Vec<Vec<Vec<u32>>>,
    /// Per pair: coefficients of its basis rows over `basis`, and target.
    checks: Vec<Vec<(Rows, &'a Subspace)>>,
    nodes: &'a AtomicU64,
    cap: u64,
}

impl<'a> PairSearch<'a> {
    fn new(
        field: &'a Arc<Field>,
        m: usize,
        pairs: &[(&'a Subspace, &'a Subspace)],
        nodes: &'a AtomicU64,
        cap: u64,
    ) -> Result<Self> {
        let mut basis: Rows = Vec::new();
        let mut owner: Vec<Option<usize>> = Vec::new();
        for (p, (src, _)) in pairs.iter().enumerate() {
            for row in src.basis() {
                let mut trial = basis.clone();
                trial.push(row.to_vec());
                if linalg::rank(field, &trial, m) == trial.len() {
                    basis = trial;
                    owner.push(Some(p));
                }
            }
        }
        for i in 0..m {
            let mut trial = basis.clone();
            trial.push((0..m).map(|j| u32::from(i == j)).collect());
            if linalg::rank(field, &trial, m) == trial.len() {
                basis = trial;
                owner.push(None);
            }
        }
        let full = Subspace::full(field, m);
        let candidates = owner
            .iter()
            .map(|o| {
                let t = o.map_or(&full, |p| pairs[p].1);
                Ok(t.vectors()?.filter(|v| !v.is_zero()).map(Vector::into_coords).collect())
            })
            .collect::<Result<Vec<Vec<Vec<u32>>>>>()?;
        let mut checks: Vec<Vec<(Rows, &Subspace)>> = vec![Vec::new(); m + 1];
        for (src, tgt) in pairs {
            let coeffs: Rows = src
                .basis()
                .map(|b| linalg::solve_combination(field, &basis, b).expect("basis spans"))
                .collect();
            let last = coeffs
                .iter()
                .filter_map(|c| c.iter().rposition(|&x| x != 0))
                .max()
                .map_or(0, |t| t + 1);
            checks[last].push((coeffs, *tgt));
        }
        Ok(PairSearch {
            field,
            m,
            basis,
            candidates,
            checks,
            nodes,
            cap,
        })
    }

    fn run(&self, images: &mut Rows, out: &mut Vec<LinearMap>) -> Result<()> {
        let t = images.len();
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            return Err(Error::CapExceeded {
                what: "transition map search nodes",
                cap: self.cap,
            });
        }
        for (coeffs, tgt) in &self.checks[t] {
            for c in coeffs {
                let img = linalg::vec_mat(self.field, &c[..t], images, self.m);
                if !tgt.contains_coords(&img) {
                    return Ok(());
                }
            }
        }
        if t == self.m {
            let inv = linalg::invert(self.field, &self.basis).expect("adapted basis is a basis");
            let matrix = linalg::mat_mul(self.field, &inv, images, self.m);
            out.push(LinearMap {
                field: self.field.clone(),
                m: self.m,
                matrix,
            });
            return Ok(());
        }
        for cand in &self.candidates[t] {
            images.push(cand.clone());
            if linalg::rank(self.field, images, self.m) == images.len() {
                self.run(images, out)?;
            }
            images.pop();
        }
        Ok(())
    }
}

/// All invertible maps sending `sources` onto `targets` as multisets and
/// each `fixed.0` onto `fixed.1`. Sorted by matrix, deduplicated.
pub fn find_set_maps(
    sources: &[Subspace],
    targets: &[Subspace],
    fixed: &[(Subspace, Subspace)],
    cap: u64,
) -> Result<Vec<LinearMap>> {
    let Some(any) = sources.first().or(fixed.first().map(|p| &p.0)) else {
        return Err(Error::Precondition("nothing to map".into()));
    };
    let field = any.field().clone();
    let m = any.ambient();
    for s in sources
        .iter()
        .chain(targets)
        .chain(fixed.iter().flat_map(|(a, b)| [a, b]))
    {
        if s.ambient() != m || **s.field() != *field {
            return Err(Error::Ambient("spaces live in different ambient spaces".into()));
        }
    }
    if sources.len() != targets.len() {
        return Ok(Vec::new());
    }
    if fixed.iter().any(|(a, b)| a.dim() != b.dim()) {
        return Ok(Vec::new());
    }
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..targets.len()).collect();
    loop {
        if sources.iter().zip(&p).all(|(s, &j)| s.dim() == targets[j].dim()) {
            perms.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    let nodes = AtomicU64::new(0);
    let found = perms
        .par_iter()
        .map(|perm| {
            let pairs: Vec<(&Subspace, &Subspace)> = fixed
                .iter()
                .map(|(a, b)| (a, b))
                .chain(sources.iter().zip(perm).map(|(s, &j)| (s, &targets[j])))
                .collect();
            let search = PairSearch::new(&field, m, &pairs, &nodes, cap)?;
            let mut out = Vec::new();
            search.run(&mut Vec::with_capacity(m), &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<LinearMap> = found.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    let want = RepairingCollection::new(targets.to_vec());
    for g in &all {
        let img = RepairingCollection::new(sources.iter().map(|s| g.apply(s)).collect::<Result<_>>()?);
        if img != want || fixed.iter().any(|(a, b)| g.apply(a).ok().as_ref() != Some(b)) {
            return Err(Error::Consistency(format!("map {g:?} fails its defining equation")));
        }
    }
    Ok(all)
}

/// Some invertible map sending the set `a` onto the set `b`, if one exists.
///
/// Fixes the images of a spanning prefix of `a` one injection at a time and
/// checks the rest, instead of running through every bijection.
pub fn equivalence_map(a: &[Subspace], b: &[Subspace], cap: u64) -> Result<Option<LinearMap>> {
    if a.len() != b.len() || a.is_empty() {
        return Ok(None);
    }
    let field = a[0].field().clone();
    let m = a[0].ambient();
    let mut prefix = Vec::new();
    let mut span = Subspace::zero(&field, m);
    for s in a {
        if !s.is_subspace_of(&span)? {
            span = span.sum(s)?;
            prefix.push(s.clone());
        }
        if span.dim() == m {
            break;
        }
    }
    let want = RepairingCollection::new(b.to_vec());
    let mut found = None;
    let mut choice: Vec<usize> = Vec::new();
    fn rec(
        prefix: &[Subspace],
        a: &[Subspace],
        b: &[Subspace],
        want: &RepairingCollection,
        choice: &mut Vec<usize>,
        cap: u64,
        found: &mut Option<LinearMap>,
    ) -> Result<()> {
        if found.is_some() {
            return Ok(());
        }
        if choice.len() == prefix.len() {
            let fixed: Vec<(Subspace, Subspace)> = prefix
                .iter()
                .zip(choice.iter())
                .map(|(s, &j)| (s.clone(), b[j].clone()))
                .collect();
            for g in find_set_maps(&[], &[], &fixed, cap)? {
                let img = RepairingCollection::new(a.iter().map(|s| g.apply(s)).collect::<Result<_>>()?);
                if img == *want {
                    *found = Some(g);
                    return Ok(());
                }
            }
            return Ok(());
        }
        for j in 0..b.len() {
            if !choice.contains(&j) && b[j].dim() == prefix[choice.len()].dim() {
                choice.push(j);
                rec(prefix, a, b, want, choice, cap, found)?;
                choice.pop();
            }
        }
        Ok(())
    }
    rec(&prefix, a, b, &want, &mut choice, cap, &mut found)?;
    Ok(found)
}

/// `|GL(m, q)|`.
pub fn gl_order(m: usize, q: u64) -> u128 {
    let qm = (q as u128).pow(m as u32);
    (0..m).map(|i| qm - (q as u128).pow(i as u32)).product()
}

/// Same as [`find_set_maps`] by running through all of GL(m, 2). Only for
/// `m <= 5` over GF(2); used as an independent oracle.
pub fn brute_force_maps(
    sources: &[Subspace],
    targets: &[Subspace],
    fixed: &[(Subspace, Subspace)],
) -> Result<Vec<LinearMap>> {
    let any = sources
        .first()
        .or(fixed.first().map(|p| &p.0))
        .ok_or_else(|| Error::Precondition("nothing to map".into()))?;
    let field = any.field().clone();
    let m = any.ambient();
    if field.order() != 2 || m > 5 {
        return Err(Error::Precondition("brute force needs q = 2 and m <= 5".into()));
    }
    let want = RepairingCollection::new(targets.to_vec());
    let total: u64 = 1 << (m * m);
    let found: Vec<LinearMap> = (0..total)
        .into_par_iter()
        .filter_map(|bits| {
            let matrix: Rows = (0..m)
                .map(|i| (0..m).map(|j| ((bits >> (i * m + j)) & 1) as u32).collect())
                .collect();
            if linalg::rank(&field, &matrix, m) != m {
                return None;
            }
            let g = LinearMap {
                field: field.clone(),
                m,
                matrix,
            };
            if fixed.iter().any(|(a, b)| g.apply(a).ok().as_ref() != Some(b)) {
                return None;
            }
            let img = RepairingCollection::new(sources.iter().map(|s| g.apply(s).unwrap()).collect());
            (img == want).then_some(g)
        })
        .collect();
    let mut found = found;
    found.sort();
    Ok(found)
}

/// All invertible `L` with `L(collection) = collection + {newcomer} - {U_i}`.
pub fn find_transition_maps(collection: &RepairingCollection, newcomer: &Subspace, i: usize) -> Result<Vec<LinearMap>> {
    find_transition_maps_capped(collection, newcomer, i, DEFAULT_NODE_CAP)
}

pub fn find_transition_maps_capped(
    collection: &RepairingCollection,
    newcomer: &Subspace,
    i: usize,
    cap: u64,
) -> Result<Vec<LinearMap>> {
    if i >= collection.len() {
        return Err(Error::Precondition(format!("index {i} outside the collection")));
    }
    let target = collection.replace(i, newcomer);
    find_set_maps(collection.spaces(), target.spaces(), &[], cap)
}

/// The stabilizer of a state and how it acts on the collection.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub group: GroupClosure,
    pub transitive: bool,
    /// First element (by matrix order) whose cyclic group is transitive on
    /// the members.
    pub cyclic_transitive: Option<LinearMap>,
}

impl Stabilizer {
    /// Generators of a transitive subgroup: the cyclic one if it exists,
    /// otherwise the whole stabilizer.
    pub fn transitive_generators(&self) -> Option<Vec<LinearMap>> {
        if !self.transitive {
            return None;
        }
        Some(match &self.cyclic_transitive {
            Some(t) => vec![t.clone()],
            None => self.group.elements.clone(),
        })
    }
}

/// All invertible maps fixing `collection` setwise and `newcomer`.
pub fn stabilizer(collection: &RepairingCollection, newcomer: &Subspace) -> Result<Stabilizer> {
    stabilizer_capped(collection, newcomer, DEFAULT_NODE_CAP)
}

pub fn stabilizer_capped(collection: &RepairingCollection, newcomer: &Subspace, cap: u64) -> Result<Stabilizer> {
    let spaces = collection.spaces();
    let elements = find_set_maps(spaces, spaces, &[(newcomer.clone(), newcomer.clone())], cap)?;
    let group = GroupClosure {
        generators: elements.clone(),
        elements,
        cap: usize::MAX,
    };
    let transitive = group.is_transitive_on(spaces);
    let cyclic_transitive = group
        .elements
        .iter()
        .find(|g| {
            g.permutation_of(spaces)
                .is_some_and(|p| orbit_of_zero(&[p], spaces.len()) == spaces.len())
        })
        .cloned();
    Ok(Stabilizer {
        group,
        transitive,
        cyclic_transitive,
    })
}

fn map_witness(
    g: &LinearMap,
    collection: &RepairingCollection,
    image: &RepairingCollection,
    newcomer: &Subspace,
    witness: &RepairWitness,
) -> Result<Option<RepairWitness>> {
    let mut helpers = Vec::new();
    let mut spaces = Vec::new();
    let mut used = vec![false; image.len()];
    for (&h, w) in witness.helpers.iter().zip(&witness.repair_spaces) {
        let hi = g.apply(&collection.spaces()[h])?;
        let Some(j) = (0..image.len()).find(|&j| !used[j] && image.spaces()[j] == hi) else {
            return Ok(None);
        };
        used[j] = true;
        helpers.push(j);
        spaces.push(g.apply(w)?);
    }
    Ok(RepairWitness::build(newcomer, helpers, spaces))
}

/// The orbit of the seed collection under `group`, each image carrying the
/// image of the seed newcomer. Only the generators are used. The result is
/// verified.
pub fn orbit_code(
    group: &GroupClosure,
    seed: &RepairingCollection,
    newcomer: &Subspace,
    params: &CodeParams,
) -> Result<VerifiedCode> {
    orbit_code_capped(group, seed, newcomer, params, DEFAULT_ORBIT_CAP)
}

pub fn orbit_code_capped(
    group: &GroupClosure,
    seed: &RepairingCollection,
    newcomer: &Subspace,
    params: &CodeParams,
    cap: usize,
) -> Result<VerifiedCode> {
    let witness = find_witness(seed, newcomer, params)?
        .ok_or_else(|| Error::Precondition("seed newcomer is not obtainable by repair".into()))?;
    if params.k < params.n - 1 && spanning_subset(seed.spaces(), params.k, params.m).is_none() {
        return Err(Error::Precondition(format!("seed has no spanning {}-subset", params.k)));
    }
    // breadth-first over states under the generators; the collections seen
    // are exactly the orbit of the seed
    let mut states = StateSet::new(*params, newcomer.field().clone())?;
    let mut seen: HashSet<(RepairingCollection, Subspace)> = HashSet::new();
    let mut collections: HashSet<RepairingCollection> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((seed.clone(), newcomer.clone()));
    collections.insert(seed.clone());
    queue.push_back((seed.clone(), newcomer.clone(), witness));
    while let Some((c, u, w)) = queue.pop_front() {
        for g in &group.generators {
            let image = g.apply_collection(&c)?;
            let v = g.apply(&u)?;
            if seen.contains(&(image.clone(), v.clone())) {
                continue;
            }
            let mapped = map_witness(g, &c, &image, &v, &w)?
                .ok_or_else(|| Error::Consistency("image of a witness does not verify".into()))?;
            seen.insert((image.clone(), v.clone()));
            collections.insert(image.clone());
            if collections.len() > cap {
                return Err(Error::CapExceeded {
                    what: "orbit size",
                    cap: cap as u64,
                });
            }
            queue.push_back((image, v, mapped));
        }
        states.add_transition(c, u, Some(w))?;
    }
    VerifiedCode::new(states)
}

/// Search settings for [`ltgc_search`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub node_cap: u64,
    pub group_cap: usize,
    pub orbit_cap: usize,
    /// Limit on generator sets tried when every index needs its own map.
    pub combination_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_cap: DEFAULT_NODE_CAP,
            group_cap: DEFAULT_GROUP_CAP,
            orbit_cap: DEFAULT_ORBIT_CAP,
            combination_cap: 10_000,
        }
    }
}

/// A group found by the search together with its verified orbit code.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// The transition maps among the generators.
    pub maps: Vec<LinearMap>,
    /// Image of the newcomer under the first transition map.
    pub successor: Subspace,
    pub group: GroupClosure,
    pub code: VerifiedCode,
}

impl SearchResult {
    pub fn orbit_size(&self) -> usize {
        self.code.states().len()
    }
}

/// Everything the search learned about a seed.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub stabilizer_order: usize,
    pub transitive: bool,
    /// Transition maps found for the searched indices.
    pub candidate_maps: usize,
    /// Distinct images of the newcomer among the candidates (index 0 only);
    /// maps differing by the state stabilizer give the same image.
    pub distinct_successors: usize,
    /// Successes, sorted by orbit size then group order.
    pub results: Vec<SearchResult>,
    /// One line per candidate generator set.
    pub log: Vec<String>,
}

fn fingerprint(g: &LinearMap) -> String {
    let h = g.key().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    format!("{:08x}", h as u32)
}

/// Looks for small groups generated by a transitive part of the stabilizer
/// and one transition map (or one map per index if the stabilizer is not
/// transitive), and keeps those whose orbit passes verification.
pub fn ltgc_search(
    collection: &RepairingCollection,
    newcomer: &Subspace,
    params: &CodeParams,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let stab = stabilizer_capped(collection, newcomer, opts.node_cap)?;
    let mut log = Vec::new();
    // (transitive part, transition maps)
    let mut generator_sets: Vec<(Vec<LinearMap>, Vec<LinearMap>)> = Vec::new();
    let first = find_transition_maps_capped(collection, newcomer, 0, opts.node_cap)?;
    let distinct_successors = first
        .iter()
        .map(|l| l.apply(newcomer))
        .collect::<Result<HashSet<_>>>()?
        .len();
    let candidate_maps;
    if let Some(t) = stab.transitive_generators() {
        candidate_maps = first.len();
        for l in &first {
            generator_sets.push((t.clone(), vec![l.clone()]));
        }
    } else {
        let mut per_index = vec![first];
        for i in 1..collection.len() {
            per_index.push(find_transition_maps_capped(collection, newcomer, i, opts.node_cap)?);
        }
        candidate_maps = per_index.iter().map(Vec::len).sum();
        if per_index.iter().all(|v| !v.is_empty()) {
            let mut idx = vec![0usize; per_index.len()];
            'outer: while generator_sets.len() < opts.combination_cap {
                let maps = idx.iter().zip(&per_index).map(|(&j, v)| v[j].clone()).collect();
                generator_sets.push((Vec::new(), maps));
                for (k, v) in idx.iter_mut().zip(&per_index).rev() {
                    *k += 1;
                    if *k < v.len() {
                        continue 'outer;
                    }
                    *k = 0;
                }
                break;
            }
        }
    }
    log.push(format!(
        "stabilizer order {}, transitive {}, {} candidate maps, {} distinct successors",
        stab.group.order(),
        stab.transitive,
        candidate_maps,
        distinct_successors
    ));
    let mut results = Vec::new();
    for (base, maps) in generator_sets {
        let gens: Vec<LinearMap> = base.into_iter().chain(maps.iter().cloned()).collect();
        let fps: Vec<String> = gens.iter().map(fingerprint).collect();
        let line = match generate_group(&gens, opts.group_cap) {
            Err(Error::CapExceeded { cap, .. }) => format!("gens {} order > {cap} skipped", fps.join(",")),
            Err(e) => return Err(e),
            Ok(group) => match orbit_code_capped(&group, collection, newcomer, params, opts.orbit_cap) {
                Ok(code) => {
                    let line = format!(
                        "gens {} order {} orbit {} verified",
                        fps.join(","),
                        group.order(),
                        code.states().len()
                    );
                    let successor = maps[0].apply(newcomer)?;
                    results.push(SearchResult {
                        maps,
                        successor,
                        group,
                        code,
                    });
                    line
                }
                Err(Error::NotAStorageCode(f)) => {
                    format!("gens {} order {} failed: {f}", fps.join(","), group.order())
                }
                Err(Error::CapExceeded { cap, .. }) => {
                    format!("gens {} order {} orbit > {cap} skipped", fps.join(","), group.order())
                }
                Err(e) => return Err(e),
            },
        };
        log.push(line);
    }
    results.sort_by_key(|r| (r.orbit_size(), r.group.order()));
    Ok(SearchOutcome {
        stabilizer_order: stab.group.order(),
        transitive: stab.transitive,
        candidate_maps,
        distinct_successors,
        results,
        log,
    })
}
