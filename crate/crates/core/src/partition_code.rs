//! A small code from a vector space partition of `V = W + U` over GF(2).
//!
//! `W = GF(8)` with `α^3 = α + 1`, and `U = {0, α, α^2, α^4}` is the
//! Frobenius-invariant plane of `W`. For each `β` in GF(8) the plane
//! `U_β = {(βu, u) : u in U}` lives in `V = GF(2)^5`; together with `W` they
//! partition the nonzero vectors of `V`. The code's states are
//! `({U_β, U_γ, U_δ}, U_ε)` with `ε^2 = βγ + βδ + γδ`.
//!
//! Coordinates of `V`: the first three are `w` in the basis `1, α, α^2`
//! (the bits of the field element), the last two are `u` in the basis
//! `α, α^2`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::groupsearch::{find_set_maps, gl_order, LinearMap};
use crate::storage::{find_witness, CodeParams, RepairingCollection, StateSet};
use crate::subspace::{combinations, enumerate_subspaces, Subspace};

/// The elements of `U` as GF(8) values: `0, α, α^2, α^4 = α^2 + α`.
pub const U_VALUES: [u32; 4] = [0, 2, 4, 6];

/// `(m=5; n=4, k=3, r=3, alpha=2, beta=1)` over GF(2).
pub fn partition_params() -> CodeParams {
    CodeParams::new(5, 4, 3, 3, 2, 1, 2).expect("valid parameters")
}

/// The fields, the ambient space and the eight planes `U_β`.
#[derive(Clone, Debug)]
pub struct PartitionModel {
    pub field8: Arc<Field>,
    pub gf2: Arc<Field>,
    /// `W + {0}`.
    pub w_space: Subspace,
    /// `spaces[β]` is `U_β`, indexed by the integer value of `β`.
    pub spaces: Vec<Subspace>,
}

fn u_coords(u: u32) -> [u32; 2] {
    debug_assert!(U_VALUES.contains(&u));
    [(u >> 1) & 1, (u >> 2) & 1]
}

fn vector(w: u32, u: u32) -> Vec<u32> {
    let [c3, c4] = u_coords(u);
    vec![w & 1, (w >> 1) & 1, (w >> 2) & 1, c3, c4]
}

impl PartitionModel {
    /// `U_β`, for `β` given as a GF(8) value.
    pub fn space(&self, beta: u32) -> &Subspace {
        &self.spaces[beta as usize]
    }

    /// Which `β` a plane is, if it is one of the eight.
    pub fn index_of(&self, s: &Subspace) -> Option<u32> {
        self.spaces.iter().position(|t| t == s).map(|i| i as u32)
    }

    pub fn collection(&self, betas: &[u32]) -> RepairingCollection {
        RepairingCollection::new(betas.iter().map(|&b| self.space(b).clone()).collect())
    }

    /// The seed state `({U_0, U_1, U_α}, U_ε)`.
    pub fn seed(&self) -> (RepairingCollection, Subspace) {
        let eps = epsilon_raw(&self.field8, 0, 1, 2);
        (self.collection(&[0, 1, 2]), self.space(eps).clone())
    }
}

fn invariant(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Consistency(format!("partition invariant failed: {what}")))
    }
}

/// Builds the model and checks every invariant by enumerating `V`.
pub fn build_partition() -> Result<PartitionModel> {
    let field8 = Arc::new(Field::new(2, 3)?);
    let gf2 = Arc::new(Field::gf2());
    for &u in &U_VALUES {
        invariant(U_VALUES.contains(&field8.frobenius(u, 1)), "U is Frobenius invariant")?;
    }
    let spaces = (0..8u32)
        .map(|beta| {
            let rows = [2u32, 4].iter().map(|&u| vector(field8.mul(beta, u), u)).collect();
            Subspace::from_rows(&gf2, 5, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let w_space = Subspace::from_rows(&gf2, 5, (0..3).map(|k| vector(1 << k, 0)).collect())?;
    for (beta, s) in spaces.iter().enumerate() {
        invariant(s.dim() == 2, "each U_β is a plane")?;
        for &u in &U_VALUES {
            invariant(
                s.contains_coords(&vector(field8.mul(beta as u32, u), u)),
                "U_β contains (βu, u)",
            )?;
        }
    }
    invariant(
        spaces[0] == Subspace::from_rows(&gf2, 5, vec![vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]])?,
        "U_0 = {0} + U",
    )?;
    let mut in_w = 0;
    let mut in_spaces = [0usize; 8];
    for v in Subspace::full(&gf2, 5).vectors()? {
        if v.is_zero() {
            continue;
        }
        let hits_w = w_space.contains(&v)?;
        let hits: Vec<usize> = (0..8).filter(|&b| spaces[b].contains_coords(v.coords())).collect();
        invariant(
            hits.len() + usize::from(hits_w) == 1,
            "each nonzero vector lies in exactly one part",
        )?;
        if hits_w {
            in_w += 1;
        } else {
            in_spaces[hits[0]] += 1;
        }
    }
    invariant(in_w == 7 && in_spaces.iter().all(|&c| c == 3), "counts 7 + 8 x 3")?;
    for pair in combinations(8, 2) {
        invariant(
            spaces[pair[0]].intersect(&spaces[pair[1]])?.dim() == 0,
            "distinct planes meet trivially",
        )?;
    }
    for t in combinations(8, 3) {
        invariant(
            Subspace::sum_dim(t.iter().map(|&i| &spaces[i])) == 5,
            "any three planes span V",
        )?;
    }
    Ok(PartitionModel {
        field8,
        gf2,
        w_space,
        spaces,
    })
}

fn epsilon_raw(f: &Field, b: u32, c: u32, d: u32) -> u32 {
    let s = f.add(f.add(f.mul(b, c), f.mul(b, d)), f.mul(c, d));
    f.pow(s, 4)
}

/// The square root of `βγ + βδ + γδ` in GF(8), computed as its fourth power.
pub fn epsilon(field8: &Field, beta: FieldElement, gamma: FieldElement, delta: FieldElement) -> Result<FieldElement> {
    if field8.order() != 8 {
        return Err(Error::Precondition("epsilon is defined over GF(8)".into()));
    }
    for x in [beta, gamma, delta] {
        if x.field_order() != 8 {
            return Err(Error::FieldMismatch(x.field_order(), 8));
        }
    }
    let (b, c, d) = (beta.value(), gamma.value(), delta.value());
    if b == c || b == d || c == d {
        return Err(Error::Precondition("β, γ, δ must be distinct".into()));
    }
    let e = epsilon_raw(field8, b, c, d);
    if e == b || e == c || e == d {
        return Err(Error::Consistency(format!("ε = {e} repeats an argument")));
    }
    field8.element(e)
}

/// The 56 states, each with its newcomer and a repair witness.
pub fn code_states(model: &PartitionModel) -> Result<StateSet> {
    let params = partition_params();
    let mut states = StateSet::new(params, model.gf2.clone())?;
    let f = &model.field8;
    for t in combinations(8, 3) {
        let [b, c, d] = [t[0] as u32, t[1] as u32, t[2] as u32];
        let e = epsilon(f, f.element(b)?, f.element(c)?, f.element(d)?)?.value();
        let collection = model.collection(&[b, c, d]);
        let newcomer = model.space(e).clone();
        let witness = find_witness(&collection, &newcomer, &params)?
            .ok_or_else(|| Error::Consistency(format!("U_ε not obtainable for {{{b},{c},{d}}}")))?;
        states.add_transition(collection, newcomer, Some(witness))?;
    }
    Ok(states)
}

/// An element `x -> a x^(2^i) + b` of the semilinear group on GF(8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Semilinear {
    pub a: u32,
    pub b: u32,
    pub i: u32,
}

impl Semilinear {
    pub fn new(a: u32, b: u32, i: u32) -> Result<Self> {
        if a == 0 || a >= 8 || b >= 8 {
            return Err(Error::Precondition(format!("invalid semilinear map ({a},{b},{i})")));
        }
        Ok(Semilinear { a, b, i: i % 3 })
    }

    pub fn all() -> Vec<Semilinear> {
        let mut out = Vec::with_capacity(168);
        for a in 1..8 {
            for b in 0..8 {
                for i in 0..3 {
                    out.push(Semilinear { a, b, i });
                }
            }
        }
        out
    }

    pub fn eval(&self, f: &Field, x: u32) -> u32 {
        f.add(f.mul(self.a, f.frobenius(x, self.i)), self.b)
    }

    /// `h ∘ g` for `h = self`: `x -> c a^(2^j) x^(2^(i+j)) + (c b^(2^j) + d)`.
    pub fn after(&self, g: &Semilinear, f: &Field) -> Semilinear {
        let (c, d, j) = (self.a, self.b, self.i);
        Semilinear {
            a: f.mul(c, f.frobenius(g.a, j)),
            b: f.add(f.mul(c, f.frobenius(g.b, j)), d),
            i: (g.i + j) % 3,
        }
    }
}

/// The GF(2)-matrix of `(w, u) -> (a w^(2^i) + b u^(2^i), u^(2^i))`.
pub fn semilinear_map(model: &PartitionModel, g: Semilinear) -> Result<LinearMap> {
    if g.a == 0 {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    let f = &model.field8;
    let image = |w: u32, u: u32| {
        let fw = f.frobenius(w, g.i);
        let fu = f.frobenius(u, g.i);
        vector(f.add(f.mul(g.a, fw), f.mul(g.b, fu)), fu)
    };
    let rows = vec![image(1, 0), image(2, 0), image(4, 0), image(0, 2), image(0, 4)];
    LinearMap::new(&model.gf2, rows)
}

/// Outcome of the exhaustive maximality search.
#[derive(Clone, Debug)]
pub struct MaxCollectionReport {
    pub maximum: usize,
    /// A maximum collection (lexicographically first found).
    pub witness: Vec<Subspace>,
    /// Whether the eight `U_β` satisfy both conditions.
    pub partition_is_valid: bool,
    /// Number of maximum collections, if enumerated.
    pub maximum_count: Option<u64>,
    pub nodes: u64,
}

type Bits = [u64; 3];

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_and(a: &Bits, b: &Bits) -> Bits {
    [a[0] & b[0], a[1] & b[1], a[2] & b[2]]
}

fn popcount(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn first_bit(b: &Bits) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| 64 * k + w.trailing_zeros() as usize)
}

fn clear_below(b: &Bits, i: usize) -> Bits {
    let mut out = *b;
    for (k, w) in out.iter_mut().enumerate() {
        let lo = 64 * k;
        if i >= lo + 64 {
            *w = 0;
        } else if i > lo {
            *w &= !0u64 << (i - lo);
        }
    }
    out
}

struct CliqueSearch {
    n: usize,
    /// `pair_ok[a]`: planes meeting `a` trivially.
    pair_ok: Vec<Bits>,
    /// `triple_ok[a * n + b]`: planes `c` with `a + b + c = V`.
    triple_ok: Vec<Bits>,
    best: usize,
    best_set: Vec<usize>,
    count_size: Option<usize>,
    count: u64,
    nodes: u64,
}

impl CliqueSearch {
    fn extend(&mut self, chosen: &mut Vec<usize>, cand: Bits) {
        self.nodes += 1;
        if chosen.len() > self.best {
            self.best = chosen.len();
            self.best_set = chosen.clone();
        }
        if Some(chosen.len()) == self.count_size {
            self.count += 1;
        }
        let bound = match self.count_size {
            Some(target) => target,
            None => self.best + 1,
        };
        let mut cand = cand;
        while let Some(c) = first_bit(&cand) {
            if chosen.len() + popcount(&cand) < bound {
                return;
            }
            cand = clear_below(&cand, c + 1);
            let mut next = bit_and(&cand, &self.pair_ok[c]);
            for &a in chosen.iter() {
                next = bit_and(&next, &self.triple_ok[a * self.n + c]);
            }
            chosen.push(c);
            self.extend(chosen, next);
            chosen.pop();
        }
    }
}

fn clique_tables(planes: &[Subspace]) -> (Vec<Bits>, Vec<Bits>) {
    let n = planes.len();
    let mut pair_ok = vec![[0u64; 3]; n];
    let mut triple_ok = vec![[0u64; 3]; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b && Subspace::sum_dim([&planes[a], &planes[b]]) == 4 {
                bit_set(&mut pair_ok[a], b);
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let ab = planes[a].sum(&planes[b]).expect("same ambient");
            if ab.dim() != 4 {
                continue;
            }
            for c in 0..n {
                if Subspace::sum_dim([&ab, &planes[c]]) == 5 {
                    bit_set(&mut triple_ok[a * n + c], b);
                    bit_set(&mut triple_ok[b * n + c], a);
                }
            }
        }
    }
    (pair_ok, triple_ok)
}

/// Largest set of planes in GF(2)^5 with pairwise trivial intersections and
/// every three spanning, by exhaustive branch and bound over all 155 planes.
/// With `count_all`, also counts the maximum sets.
pub fn max_collection_check(model: &PartitionModel, count_all: bool) -> Result<MaxCollectionReport> {
    let planes = enumerate_subspaces(&model.gf2, 5, 2)?;
    let n = planes.len();
    if n > 192 {
        return Err(Error::Consistency(format!("{n} planes do not fit the bitsets")));
    }
    let (pair_ok, triple_ok) = clique_tables(&planes);
    let mut all = [0u64; 3];
    for i in 0..n {
        bit_set(&mut all, i);
    }
    let mut search = CliqueSearch {
        n,
        pair_ok,
        triple_ok,
        best: 0,
        best_set: Vec::new(),
        count_size: None,
        count: 0,
        nodes: 0,
    };
    search.extend(&mut Vec::new(), all);
    let maximum = search.best;
    let witness: Vec<Subspace> = search.best_set.iter().map(|&i| planes[i].clone()).collect();
    let maximum_count = if count_all {
        search.count_size = Some(maximum);
        search.count = 0;
        search.extend(&mut Vec::new(), all);
        Some(search.count)
    } else {
        None
    };
    let pairs_ok = combinations(8, 2)
        .iter()
        .all(|p| Subspace::sum_dim([&model.spaces[p[0]], &model.spaces[p[1]]]) == 4);
    let triples_ok = combinations(8, 3)
        .iter()
        .all(|t| Subspace::sum_dim(t.iter().map(|&i| &model.spaces[i])) == 5);
    Ok(MaxCollectionReport {
        maximum,
        witness,
        partition_is_valid: pairs_ok && triples_ok,
        maximum_count,
        nodes: search.nodes,
    })
}

/// Evidence that every maximum collection is equivalent to the `U_β`.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub maximum_count: u64,
    /// Order of the setwise stabilizer of `{U_β}` in GL(5, 2).
    pub stabilizer_order: usize,
    pub gl_order: u128,
}

impl UniquenessReport {
    /// The orbit of `{U_β}` has `|GL| / |stabilizer|` members; it accounts
    /// for every maximum collection exactly when that equals the count.
    pub fn all_equivalent(&self) -> bool {
        self.gl_order / self.stabilizer_order as u128 == self.maximum_count as u128
    }
}

/// Counts maximum collections and compares with the orbit size of the `U_β`.
/// Takes seconds; not part of the default checks.
pub fn uniqueness_check(model: &PartitionModel) -> Result<UniquenessReport> {
    let report = max_collection_check(model, true)?;
    let stab = find_set_maps(&model.spaces, &model.spaces, &[], u64::MAX)?;
    Ok(UniquenessReport {
        maximum_count: report.maximum_count.unwrap_or(0),
        stabilizer_order: stab.len(),
        gl_order: gl_order(5, 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupsearch::generate_group;
    use crate::storage::{VerifiedCode, VerifyOptions};
    use crate::subspace::Vector;

    fn model() -> PartitionModel {
        build_partition().unwrap()
    }

    #[test]
    fn partition_basics() {
        let m = model();
        assert_eq!(m.space(0).basis_rows(), vec![vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]]);
        // U_1 is the diagonal: (α, α) and (α^2, α^2)
        let u1 = Subspace::from_rows(&m.gf2, 5, vec![vec![0, 1, 0, 1, 0], vec![0, 0, 1, 0, 1]]).unwrap();
        assert_eq!(*m.space(1), u1);
        assert_eq!(m.w_space.dim(), 3);
        assert_eq!(m.index_of(&u1), Some(1));
    }

    #[test]
    fn epsilon_values() {
        let m = model();
        let f = &m.field8;
        let el = |v| f.element(v).unwrap();
        // ε^2 = α, so ε = α^4 = α^2 + α
        let e = epsilon(f, el(0), el(1), el(2)).unwrap();
        assert_eq!(e.value(), 6);
        assert_eq!(f.mul(6, 6), 2);
        for c in 2..8 {
            assert_eq!(
                epsilon(f, el(1), el(0), el(c)).unwrap(),
                epsilon(f, el(0), el(1), el(c)).unwrap()
            );
        }
        let mut n = 0;
        for t in combinations(8, 3) {
            let e = epsilon(f, el(t[0] as u32), el(t[1] as u32), el(t[2] as u32)).unwrap();
            assert!(!t.contains(&(e.value() as usize)));
            n += 1;
        }
        assert_eq!(n, 56);
        assert!(epsilon(f, el(1), el(1), el(2)).is_err());
        let f4 = Field::new(2, 2).unwrap();
        assert!(epsilon(f, f4.element(1).unwrap(), el(0), el(2)).is_err());
    }

    #[test]
    fn semilinear_identity_and_action() {
        let m = model();
        let f = &m.field8;
        let id = semilinear_map(&m, Semilinear::new(1, 0, 0).unwrap()).unwrap();
        assert!(id.is_identity());
        for g in Semilinear::all() {
            let l = semilinear_map(&m, g).unwrap();
            for beta in 0..8 {
                assert_eq!(l.apply(m.space(beta)).unwrap(), *m.space(g.eval(f, beta)));
            }
            // W is preserved
            assert_eq!(l.apply(&m.w_space).unwrap(), m.w_space);
        }
    }

    #[test]
    fn semilinear_composition_exhaustive() {
        let m = model();
        let f = &m.field8;
        let all = Semilinear::all();
        let mats: Vec<LinearMap> = all.iter().map(|&g| semilinear_map(&m, g).unwrap()).collect();
        for (gi, g) in all.iter().enumerate() {
            for (hi, h) in all.iter().enumerate() {
                let hg = h.after(g, f);
                for x in 0..8 {
                    assert_eq!(hg.eval(f, x), h.eval(f, g.eval(f, x)));
                }
                let idx = all.iter().position(|k| *k == hg).unwrap();
                assert_eq!(LinearMap::compose(&mats[hi], &mats[gi]), mats[idx]);
            }
        }
    }

    #[test]
    fn semilinear_group_signature() {
        let m = model();
        let mats: Vec<LinearMap> = Semilinear::all()
            .into_iter()
            .map(|g| semilinear_map(&m, g).unwrap())
            .collect();
        let group = generate_group(&mats, 1000).unwrap();
        assert_eq!(group.order(), 168);
        assert_eq!(group.involutions(), 7);
        let mut sorted = mats.clone();
        sorted.sort();
        assert_eq!(group.elements, sorted);
    }

    #[test]
    fn code_states_have_unique_newcomers() {
        let m = model();
        let states = code_states(&m).unwrap();
        assert_eq!(states.len(), 56);
        for c in states.collections() {
            assert!(crate::storage::is_recovery_set(c.spaces(), 5));
        }
        let code = VerifiedCode::with_options(states, &VerifyOptions::full()).unwrap();
        assert_eq!(code.report().unique_newcomers(), Some(true));
        for e in &code.report().entries {
            let u = &e.valid_newcomers.as_ref().unwrap()[0];
            assert_eq!(code.states().transitions(&e.collection)[0].newcomer, *u);
        }
    }

    #[test]
    fn states_are_invariant_under_the_group() {
        let m = model();
        let f = &m.field8;
        let states = code_states(&m).unwrap();
        for g in Semilinear::all() {
            let l = semilinear_map(&m, g).unwrap();
            for t in combinations(8, 3) {
                let [b, c, d] = [t[0] as u32, t[1] as u32, t[2] as u32];
                let e = epsilon_raw(f, b, c, d);
                let img = l.apply_collection(&m.collection(&[b, c, d])).unwrap();
                assert!(states.contains(&img));
                let (gb, gc, gd) = (g.eval(f, b), g.eval(f, c), g.eval(f, d));
                assert_eq!(g.eval(f, e), epsilon_raw(f, gb, gc, gd));
                assert_eq!(states.transitions(&img)[0].newcomer, l.apply(m.space(e)).unwrap());
            }
        }
    }

    #[test]
    fn maximum_is_eight() {
        let m = model();
        let report = max_collection_check(&m, false).unwrap();
        assert_eq!(report.maximum, 8);
        assert!(report.partition_is_valid);
        assert_eq!(report.witness.len(), 8);
        // a ninth plane never fits next to the U_β
        for p in enumerate_subspaces(&m.gf2, 5, 2).unwrap() {
            if m.index_of(&p).is_some() {
                continue;
            }
            let pairs = m.spaces.iter().all(|s| Subspace::sum_dim([s, &p]) == 4);
            let triples = combinations(8, 2)
                .iter()
                .all(|t| Subspace::sum_dim([&m.spaces[t[0]], &m.spaces[t[1]], &p]) == 5);
            assert!(!(pairs && triples));
        }
    }

    #[test]
    #[ignore = "about a minute unoptimized; run with --ignored"]
    fn maximum_collections_are_all_equivalent() {
        let r = uniqueness_check(&model()).unwrap();
        assert_eq!(r.maximum_count, 59_520);
        assert_eq!(r.stabilizer_order, 168);
        assert!(r.all_equivalent());
    }

    #[test]
    fn vector_layout() {
        let m = model();
        let v = Vector::new(&m.gf2, vector(6, 6)).unwrap();
        // (α^4, α^4) lies in U_1
        assert!(m.space(1).contains(&v).unwrap());
    }
}
