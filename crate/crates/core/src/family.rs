//! The `(r, s)`-good code family.
//!
//! A collection of `r` subspaces of dimension `s + 1` in `F^m`, with
//! `m = m_rs(r, s) = (r - s)(s + 1) + s(s + 1)/2`, is `(r, s)`-good when any
//! `r - s + j` of them span a space of dimension
//! `(r - s)(s + 1) + s + (s - 1) + ... + (s + 1 - j)` for `j = 0..=s`.
//!
//! Picking `w_i` in each member and an `(s + 1)`-dimensional `U` inside the
//! span of the `w_i` keeps every one-member replacement good exactly when the
//! `w_i` are independent, no `w_i` lies in the sum of the other members, and
//! the code `C = {c : sum c_j w_j in U}` is an `[r, s + 1, r - s]` MDS code.
//! Without the middle condition the equivalence fails (see
//! `literal_criterion_counterexamples`). Repeating the step gives
//! functional-repair codes with parameters `(m_rs; r + 1, r, r, s + 1, 1)`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{self, Rows};
use crate::storage::{CodeParams, RepairWitness, RepairingCollection, StateSet};
use crate::subspace::{combinations, enumerate_subspaces_capped, Subspace, Vector};

/// Cap on codewords enumerated for a distance computation.
pub const DISTANCE_CAP: u64 = 1 << 20;

/// `m_{r,s} = (r - s)(s + 1) + s(s + 1)/2`.
pub fn m_rs(r: usize, s: usize) -> Result<usize> {
    if r <= s {
        return Err(Error::Params(format!("need r > s, got r = {r}, s = {s}")));
    }
    Ok((r - s) * (s + 1) + s * (s + 1) / 2)
}

/// Required span dimension of any `r - s + j` members.
pub fn span_target(r: usize, s: usize, j: usize) -> usize {
    (r - s) * (s + 1) + (0..j).map(|t| s - t).sum::<usize>()
}

/// Parameters `(m_rs; n = r + 1, k = r, r, alpha = s + 1, beta = 1)`.
pub fn family_params(r: usize, s: usize, q: u32) -> Result<CodeParams> {
    CodeParams::new(m_rs(r, s)?, r + 1, r, r, s + 1, 1, q)
}

/// Cutset sum `sum_{i<k} min(alpha, (r - i) beta)`.
pub fn cutset_bound(k: usize, r: usize, alpha: usize, beta: usize) -> usize {
    (0..k).map(|i| alpha.min(r.saturating_sub(i) * beta)).sum()
}

/// Checks the `(r, s)`-good rank conditions on every relevant subset.
pub fn is_good(spaces: &[Subspace], r: usize, s: usize) -> Result<bool> {
    let m = m_rs(r, s)?;
    if spaces.len() != r {
        return Err(Error::Dimension(format!("{} spaces, expected r = {r}", spaces.len())));
    }
    for u in spaces {
        if u.ambient() != m {
            return Err(Error::Ambient(format!("ambient {} != m_rs = {m}", u.ambient())));
        }
        if u.dim() != s + 1 {
            return Err(Error::Dimension(format!("member of dimension {} != s + 1", u.dim())));
        }
    }
    for j in 0..=s {
        let target = span_target(r, s, j);
        for idx in combinations(r, r - s + j) {
            if Subspace::sum_dim(idx.iter().map(|&i| &spaces[i])) != target {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A verified `(r, s)`-good collection; member order is significant for the
/// choice of `w_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCollection {
    r: usize,
    s: usize,
    spaces: Vec<Subspace>,
}

impl GoodCollection {
    pub fn new(r: usize, s: usize, spaces: Vec<Subspace>) -> Result<Self> {
        if !is_good(&spaces, r, s)? {
            return Err(Error::Precondition(format!("collection is not ({r},{s})-good")));
        }
        Ok(GoodCollection { r, s, spaces })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn field(&self) -> &Arc<Field> {
        self.spaces[0].field()
    }

    pub fn ambient(&self) -> usize {
        self.spaces[0].ambient()
    }

    pub fn to_collection(&self) -> RepairingCollection {
        RepairingCollection::new(self.spaces.clone())
    }

    /// The same collection with members in canonical order.
    pub fn sorted(&self) -> GoodCollection {
        GoodCollection {
            r: self.r,
            s: self.s,
            spaces: self.to_collection().spaces().to_vec(),
        }
    }
}

/// The code `C = {c in F^r : sum c_j w_j in U}` with its exhaustive minimum
/// distance (`None` for the zero code).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairCode {
    pub r: usize,
    pub code: Subspace,
    pub min_distance: Option<usize>,
}

impl RepairCode {
    pub fn dim(&self) -> usize {
        self.code.dim()
    }

    pub fn generator(&self) -> Rows {
        self.code.basis_rows()
    }

    pub fn is_mds(&self) -> bool {
        self.dim() > 0 && self.min_distance == Some(self.r - self.dim() + 1)
    }
}

fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Minimum nonzero weight of a code, by enumerating every codeword.
pub fn min_distance(code: &Subspace) -> Result<Option<usize>> {
    Ok(code
        .vectors_capped(DISTANCE_CAP)?
        .map(|v| weight(v.coords()))
        .filter(|&w| w > 0)
        .min())
}

/// True iff `generator` spans a `kdim`-dimensional code of length `r` with
/// minimum distance `r - kdim + 1`.
pub fn mds_check(field: &Arc<Field>, generator: &[Vec<u32>], r: usize, kdim: usize) -> Result<bool> {
    let code = Subspace::from_rows(field, r, generator.to_vec())?;
    if code.dim() != kdim || kdim == 0 {
        return Ok(false);
    }
    Ok(min_distance(&code)? == Some(r + 1 - kdim))
}

fn check_w(spaces: &[Subspace], w: &[Vector]) -> Result<()> {
    if w.len() != spaces.len() {
        return Err(Error::Precondition(format!(
            "{} vectors for {} spaces",
            w.len(),
            spaces.len()
        )));
    }
    for (i, (u, v)) in spaces.iter().zip(w).enumerate() {
        if !u.contains(v)? {
            return Err(Error::Precondition(format!("w_{i} is not in U_{i}")));
        }
    }
    Ok(())
}

/// True iff no `w_i` lies in the sum of the members other than `U_i`.
pub fn outside_others(spaces: &[Subspace], w: &[Vector]) -> Result<bool> {
    check_w(spaces, w)?;
    let field = spaces[0].field();
    let m = spaces[0].ambient();
    for (i, wi) in w.iter().enumerate() {
        let others = Subspace::sum_all(
            field,
            m,
            spaces.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, u)| u),
        )?;
        if others.contains(wi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Computes `C` for the given `w` and `U` by solving the linear condition.
pub fn repair_code(spaces: &[Subspace], w: &[Vector], u: &Subspace) -> Result<RepairCode> {
    check_w(spaces, w)?;
    let field = u.field().clone();
    let m = u.ambient();
    let span = Subspace::span(&field, m, w)?;
    if !u.is_subspace_of(&span)? {
        return Err(Error::Precondition("U is not inside the span of the w_i".into()));
    }
    // reduce each w_j modulo U; C is the left kernel of the residues
    let basis: Vec<&[u32]> = u.basis().collect();
    let pivots = u.pivots();
    let residues: Rows = w
        .iter()
        .map(|v| {
            let mut c = v.coords().to_vec();
            linalg::reduce(&field, &basis, &pivots, &mut c);
            c
        })
        .collect();
    let kernel = linalg::left_kernel(&field, &residues, m);
    let code = Subspace::from_rows(&field, w.len(), kernel)?;
    let min_distance = min_distance(&code)?;
    Ok(RepairCode {
        r: w.len(),
        code,
        min_distance,
    })
}

/// Both sides of the MDS criterion, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtmdsSides {
    /// Goodness of each one-member replacement.
    pub replacements_good: Vec<bool>,
    pub w_independent: bool,
    /// `w_i` outside the sum of the other members, for every `i`.
    pub w_outside_others: bool,
    pub code: RepairCode,
}

impl LtmdsSides {
    pub fn good_side(&self) -> bool {
        self.replacements_good.iter().all(|&b| b)
    }

    pub fn mds_side(&self, s: usize) -> bool {
        self.w_outside_others && self.literal_mds_side(s)
    }

    /// Independence and MDS only, without the outside-others condition.
    pub fn literal_mds_side(&self, s: usize) -> bool {
        self.w_independent && self.code.dim() == s + 1 && self.code.is_mds()
    }
}

pub fn ltmds_sides(good: &GoodCollection, w: &[Vector], u: &Subspace) -> Result<LtmdsSides> {
    let (r, s) = (good.r, good.s);
    if u.dim() != s + 1 {
        return Err(Error::Precondition(format!("U has dimension {} != s + 1", u.dim())));
    }
    let code = repair_code(&good.spaces, w, u)?;
    let replacements_good = (0..r)
        .map(|i| {
            let mut t = good.spaces.clone();
            t[i] = u.clone();
            is_good(&t, r, s)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Rows = w.iter().map(|v| v.coords().to_vec()).collect();
    let w_independent = linalg::rank(good.field(), &rows, good.ambient()) == r;
    let w_outside_others = outside_others(&good.spaces, w)?;
    Ok(LtmdsSides {
        replacements_good,
        w_independent,
        w_outside_others,
        code,
    })
}

/// Evaluates both sides of the criterion and returns their common value;
/// disagreement is an internal consistency failure.
pub fn verify_ltmds(good: &GoodCollection, w: &[Vector], u: &Subspace) -> Result<bool> {
    let sides = ltmds_sides(good, w, u)?;
    let (a, b) = (sides.good_side(), sides.mds_side(good.s));
    if a != b {
        return Err(Error::Consistency(format!(
            "replacements good = {a} but independent+MDS = {b} for w = {w:?}, U = {u:?}"
        )));
    }
    Ok(a)
}

/// A fixed MDS generator of length `n` and dimension `k` over `field`:
/// repetition, single parity, (extended) Reed-Solomon, or a search over
/// systematic generators.
pub fn canonical_mds_generator(field: &Arc<Field>, n: usize, k: usize) -> Result<Rows> {
    let q = field.order();
    let no_code = || Error::NoMdsCode { n, k, q };
    if k > n {
        return Err(no_code());
    }
    let unit = |i: usize| (0..n).map(|j| u32::from(i == j)).collect::<Vec<u32>>();
    let rows: Rows = if k == 0 {
        Vec::new()
    } else if k == n {
        (0..n).map(unit).collect()
    } else if k == 1 {
        vec![vec![1; n]]
    } else if k == n - 1 {
        (0..k)
            .map(|i| {
                let mut r = unit(i);
                r[n - 1] = field.neg(1);
                r
            })
            .collect()
    } else if n <= q as usize {
        (0..k)
            .map(|j| (0..n as u32).map(|x| field.pow(x, j as u64)).collect())
            .collect()
    } else if n == q as usize + 1 {
        (0..k)
            .map(|j| {
                let mut r: Vec<u32> = (0..q).map(|x| field.pow(x, j as u64)).collect();
                r.push(u32::from(j == k - 1));
                r
            })
            .collect()
    } else {
        return search_mds(field, n, k).ok_or_else(no_code);
    };
    if k > 0 && !mds_check(field, &rows, n, k)? {
        return search_mds(field, n, k).ok_or_else(no_code);
    }
    Ok(rows)
}

/// First MDS generator of the form `[I | P]`, if the search space is small.
fn search_mds(field: &Arc<Field>, n: usize, k: usize) -> Option<Rows> {
    let q = field.order() as u64;
    let free = k * (n - k);
    let total = q.checked_pow(free as u32)?;
    if total > 1_000_000 {
        return None;
    }
    let mut vals = vec![0u32; free];
    for _ in 0..total {
        let rows: Rows = (0..k)
            .map(|i| {
                let mut r: Vec<u32> = (0..k).map(|j| u32::from(i == j)).collect();
                r.extend_from_slice(&vals[i * (n - k)..(i + 1) * (n - k)]);
                r
            })
            .collect();
        if mds_check(field, &rows, n, k).unwrap_or(false) {
            return Some(rows);
        }
        for v in vals.iter_mut().rev() {
            *v += 1;
            if (*v as u64) < q {
                break;
            }
            *v = 0;
        }
    }
    None
}

/// Builds an `(r, s)`-good collection over GF(q) deterministically.
///
/// Starts from the coordinate axes of `F^r` (the `(r, 0)` case); going from
/// `s - 1` to `s` appends `r - s` coordinates and adjoins to member `i` the
/// `i`-th column of an `[r, r - s]` MDS generator placed in the new
/// coordinates.
pub fn construct_good(r: usize, s: usize, q: u32) -> Result<GoodCollection> {
    m_rs(r, s)?;
    let field = Arc::new(Field::with_order(q)?);
    let mut m = r;
    let mut rows: Vec<Rows> = (0..r)
        .map(|i| vec![(0..r).map(|j| u32::from(i == j)).collect()])
        .collect();
    for level in 1..=s {
        let extra = r - level;
        let gen = canonical_mds_generator(&field, r, extra)?;
        for (i, member) in rows.iter_mut().enumerate() {
            for row in member.iter_mut() {
                row.extend(std::iter::repeat_n(0, extra));
            }
            let mut new_row = vec![0u32; m];
            new_row.extend(gen.iter().map(|g| g[i]));
            member.push(new_row);
        }
        m += extra;
    }
    let spaces = rows
        .into_iter()
        .map(|member| Subspace::from_rows(&field, m, member))
        .collect::<Result<Vec<_>>>()?;
    let good = GoodCollection::new(r, s, spaces)
        .map_err(|e| Error::Consistency(format!("recursive construction is not good: {e}")))?;
    Ok(good)
}

/// A choice of vectors `w_i in U_i` and an `[r, s + 1]` generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyChoice {
    pub w: Vec<Vector>,
    pub generator: Rows,
}

/// Lexicographically first admissible `w` and the canonical MDS generator.
pub fn canonical_choice(good: &GoodCollection) -> Result<FamilyChoice> {
    let field = good.field().clone();
    let m = good.ambient();
    let r = good.r;
    let options: Vec<Vec<Vec<u32>>> = (0..r)
        .map(|i| {
            let others = Subspace::sum_all(
                &field,
                m,
                good.spaces.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, u)| u),
            )?;
            Ok(good.spaces[i]
                .vectors()?
                .filter(|v| !others.contains_coords(v.coords()))
                .map(Vector::into_coords)
                .collect())
        })
        .collect::<Result<_>>()?;
    fn pick(field: &Field, m: usize, options: &[Vec<Vec<u32>>], chosen: &mut Rows) -> bool {
        let i = chosen.len();
        if i == options.len() {
            return true;
        }
        for v in &options[i] {
            chosen.push(v.clone());
            if linalg::rank(field, chosen, m) == chosen.len() && pick(field, m, options, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if !pick(&field, m, &options, &mut chosen) {
        return Err(Error::Precondition("no admissible choice of w exists".into()));
    }
    Ok(FamilyChoice {
        w: chosen
            .into_iter()
            .map(|c| Vector::new(&field, c))
            .collect::<Result<_>>()?,
        generator: canonical_mds_generator(&field, good.r, good.s + 1)?,
    })
}

/// Random admissible `w` and a random `[r, s + 1]` MDS generator.
pub fn random_choice<R: Rng>(good: &GoodCollection, rng: &mut R) -> Result<FamilyChoice> {
    let field = good.field().clone();
    let (r, s, m) = (good.r, good.s, good.ambient());
    let q = field.order();
    let mut w = None;
    for _ in 0..1000 {
        let cand: Rows = good
            .spaces
            .iter()
            .map(|u| {
                let coeffs: Vec<u32> = (0..u.dim()).map(|_| rng.gen_range(0..q)).collect();
                linalg::vec_mat(&field, &coeffs, &u.basis_rows(), m)
            })
            .collect();
        if linalg::rank(&field, &cand, m) != r {
            continue;
        }
        let vecs = cand
            .into_iter()
            .map(|c| Vector::new(&field, c))
            .collect::<Result<Vec<_>>>()?;
        if outside_others(&good.spaces, &vecs)? {
            w = Some(vecs);
            break;
        }
    }
    let w = match w {
        Some(w) => w,
        None => return canonical_choice(good),
    };
    let mut generator = None;
    for _ in 0..200 {
        let g: Rows = (0..=s).map(|_| (0..r).map(|_| rng.gen_range(0..q)).collect()).collect();
        if mds_check(&field, &g, r, s + 1)? {
            generator = Some(g);
            break;
        }
    }
    let generator = match generator {
        Some(g) => g,
        None => canonical_mds_generator(&field, r, s + 1)?,
    };
    Ok(FamilyChoice { w, generator })
}

/// Outcome of one family step.
#[derive(Clone, Debug)]
pub struct FamilyStep {
    pub newcomer: Subspace,
    /// Member `i` replaced by the newcomer, for each `i`.
    pub successors: Vec<GoodCollection>,
    /// Repair spaces `<w_i>`, indexed against the canonically sorted
    /// collection.
    pub witness: RepairWitness,
}

/// Builds `U = {sum c_j w_j : c in C}` and the `r` replaced collections.
pub fn family_step(good: &GoodCollection, choice: &FamilyChoice) -> Result<FamilyStep> {
    let field = good.field().clone();
    let (r, s, m) = (good.r, good.s, good.ambient());
    check_w(&good.spaces, &choice.w)?;
    let w_rows: Rows = choice.w.iter().map(|v| v.coords().to_vec()).collect();
    if linalg::rank(&field, &w_rows, m) != r {
        return Err(Error::Precondition("the w_i are not independent".into()));
    }
    if !outside_others(&good.spaces, &choice.w)? {
        return Err(Error::Precondition(
            "some w_i lies in the sum of the other members".into(),
        ));
    }
    if choice.generator.len() != s + 1 || !mds_check(&field, &choice.generator, r, s + 1)? {
        return Err(Error::Precondition(format!(
            "generator is not an [{r},{}] MDS code",
            s + 1
        )));
    }
    let newcomer = Subspace::from_rows(&field, m, linalg::mat_mul(&field, &choice.generator, &w_rows, m))?;
    let successors = (0..r)
        .map(|i| {
            let mut t = good.spaces.clone();
            t[i] = newcomer.clone();
            GoodCollection::new(r, s, t).map_err(|e| Error::Consistency(format!("replacement {i} lost goodness: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let sorted = good.to_collection();
    let mut pairs: Vec<(usize, Subspace)> = Vec::with_capacity(r);
    let mut used = vec![false; r];
    for (u, w) in good.spaces.iter().zip(&choice.w) {
        let idx = (0..r)
            .find(|&j| !used[j] && sorted.spaces()[j] == *u)
            .expect("member present in sorted collection");
        used[idx] = true;
        pairs.push((idx, Subspace::span(&field, m, std::slice::from_ref(w))?));
    }
    pairs.sort_by_key(|(i, _)| *i);
    let (helpers, repair_spaces): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let witness = RepairWitness::build(&newcomer, helpers, repair_spaces)
        .ok_or_else(|| Error::Consistency("newcomer outside the span of the w_i".into()))?;
    Ok(FamilyStep {
        newcomer,
        successors,
        witness,
    })
}

/// The state set reachable from [`construct_good`] when every collection is
/// repaired with its [`canonical_choice`]. Each collection carries its
/// canonical newcomer as a declared transition.
pub fn family_closure(r: usize, s: usize, q: u32, cap: usize) -> Result<StateSet> {
    let params = family_params(r, s, q)?;
    let seed = construct_good(r, s, q)?.sorted();
    let mut states = StateSet::new(params, seed.field().clone())?;
    let mut seen: HashSet<RepairingCollection> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.to_collection());
    queue.push_back(seed);
    while let Some(good) = queue.pop_front() {
        let step = family_step(&good, &canonical_choice(&good)?)?;
        states.add_transition(good.to_collection(), step.newcomer.clone(), Some(step.witness))?;
        for next in step.successors {
            let next = next.sorted();
            if seen.insert(next.to_collection()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "family closure size",
                        cap: cap as u64,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(states)
}

/// Every `(r, s)`-good collection over GF(q), as a state set.
pub fn all_good_collections(r: usize, s: usize, q: u32, cap: u64) -> Result<StateSet> {
    let params = family_params(r, s, q)?;
    let field = Arc::new(Field::with_order(q)?);
    let m = params.m;
    let members = enumerate_subspaces_capped(&field, m, s + 1, cap)?;
    let mut states = StateSet::new(params, field)?;
    let mut chosen: Vec<usize> = Vec::new();
    // extend in increasing index order; every subset containing the newest
    // member must already meet its rank condition
    fn admissible(members: &[Subspace], chosen: &[usize], r: usize, s: usize) -> bool {
        let last = *chosen.last().unwrap();
        let rest = &chosen[..chosen.len() - 1];
        for t in 1..=rest.len() {
            let size = t + 1;
            let target = if size <= r - s {
                size * (s + 1)
            } else {
                span_target(r, s, size - (r - s))
            };
            for idx in combinations(rest.len(), t) {
                let dim = Subspace::sum_dim(
                    idx.iter()
                        .map(|&i| &members[rest[i]])
                        .chain(std::iter::once(&members[last])),
                );
                if dim != target {
                    return false;
                }
            }
        }
        true
    }
    fn extend(members: &[Subspace], chosen: &mut Vec<usize>, r: usize, s: usize, states: &mut StateSet) -> Result<()> {
        if chosen.len() == r {
            let c = RepairingCollection::new(chosen.iter().map(|&i| members[i].clone()).collect());
            states.insert(c)?;
            return Ok(());
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..members.len() {
            chosen.push(i);
            if admissible(members, chosen, r, s) {
                extend(members, chosen, r, s, states)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    extend(&members, &mut chosen, r, s, &mut states)?;
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> Arc<Field> {
        Arc::new(Field::with_order(q).unwrap())
    }

    #[test]
    fn m_rs_values() {
        assert_eq!(m_rs(3, 1).unwrap(), 5);
        assert_eq!(m_rs(7, 0).unwrap(), 7);
        assert_eq!(m_rs(4, 2).unwrap(), 9);
        assert!(m_rs(2, 2).is_err());
        assert_eq!(span_target(3, 1, 0), 4);
        assert_eq!(span_target(3, 1, 1), 5);
    }

    #[test]
    fn cutset_examples() {
        assert_eq!(cutset_bound(3, 3, 2, 1), 5);
        assert_eq!(cutset_bound(4, 6, 3, 3), 12);
        assert_eq!(cutset_bound(3, 2, 2, 1), 3);
    }

    #[test]
    fn good_triple_is_good() {
        let t = fixtures::good_triple();
        assert!(is_good(&t, 3, 1).unwrap());
        let f = gf(2);
        let axes: Vec<Subspace> = (0..4)
            .map(|i| Subspace::span(&f, 4, &[Vector::unit(&f, 4, i)]).unwrap())
            .collect();
        assert!(is_good(&axes, 4, 0).unwrap());
        let dup = vec![t[0].clone(), t[0].clone(), t[1].clone()];
        assert!(!is_good(&dup, 3, 1).unwrap());
        assert!(is_good(&t[..2], 3, 1).is_err());
    }

    fn even_weight_setup() -> (GoodCollection, Vec<Vector>, Subspace) {
        let good = GoodCollection::new(3, 1, fixtures::good_triple()).unwrap();
        let f = good.field().clone();
        let w: Vec<Vector> = (0..3).map(|i| Vector::unit(&f, 5, i)).collect();
        (good, w, fixtures::good_triple_newcomer())
    }

    #[test]
    fn even_weight_repair_code() {
        let (good, w, u) = even_weight_setup();
        let c = repair_code(good.spaces(), &w, &u).unwrap();
        let words: Vec<Vec<u32>> = c.code.vectors().unwrap().map(Vector::into_coords).collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(c.min_distance, Some(2));
        assert!(c.is_mds());
        assert!(verify_ltmds(&good, &w, &u).unwrap());
    }

    #[test]
    fn repair_code_matches_exhaustive_loop() {
        let (good, w, u) = even_weight_setup();
        let f = good.field().clone();
        let c = repair_code(good.spaces(), &w, &u).unwrap();
        let mut brute = Vec::new();
        for bits in 0..8u32 {
            let coeffs: Vec<u32> = (0..3).map(|j| (bits >> (2 - j)) & 1).collect();
            let rows: Rows = w.iter().map(|v| v.coords().to_vec()).collect();
            let v = linalg::vec_mat(&f, &coeffs, &rows, 5);
            if u.contains_coords(&v) {
                brute.push(coeffs);
            }
        }
        let ours: Vec<Vec<u32>> = c.code.vectors().unwrap().map(Vector::into_coords).collect();
        assert_eq!(ours, brute);
    }

    #[test]
    fn degenerate_u_breaks_mds() {
        let (good, w, _) = even_weight_setup();
        let f = good.field().clone();
        let u = Subspace::span(&f, 5, &w[..2]).unwrap();
        let c = repair_code(good.spaces(), &w, &u).unwrap();
        assert_eq!(c.min_distance, Some(1));
        assert!(!c.is_mds());
        assert!(!verify_ltmds(&good, &w, &u).unwrap());
        let zero = repair_code(good.spaces(), &w, &Subspace::zero(&f, 5)).unwrap();
        assert_eq!(zero.dim(), 0);
        assert_eq!(zero.min_distance, None);
    }

    #[test]
    fn dependent_w_fails_both_sides() {
        let good = GoodCollection::new(3, 1, fixtures::good_triple()).unwrap();
        let f = good.field().clone();
        let a1 = Vector::unit(&f, 5, 3);
        let a2 = Vector::unit(&f, 5, 4);
        let a3 = a1.add(&a2).unwrap();
        let w = vec![a1.clone(), a2.clone(), a3];
        let u = Subspace::span(&f, 5, &[a1, a2]).unwrap();
        let sides = ltmds_sides(&good, &w, &u).unwrap();
        assert!(!sides.w_independent);
        assert!(!verify_ltmds(&good, &w, &u).unwrap());
    }

    #[test]
    fn w_outside_member_is_rejected() {
        let (good, mut w, u) = even_weight_setup();
        w.swap(0, 1);
        assert!(matches!(
            repair_code(good.spaces(), &w, &u),
            Err(Error::Precondition(_))
        ));
    }

    fn all_w_and_u(good: &GoodCollection) -> Vec<(Vec<Vector>, Subspace)> {
        let f = good.field().clone();
        let m = good.ambient();
        let mut out = Vec::new();
        let mut w: Vec<Vector> = Vec::new();
        fn rec(
            good: &GoodCollection,
            f: &Arc<Field>,
            m: usize,
            w: &mut Vec<Vector>,
            out: &mut Vec<(Vec<Vector>, Subspace)>,
        ) {
            let i = w.len();
            if i == good.r() {
                let span = Subspace::span(f, m, w).unwrap();
                if span.dim() > good.s() {
                    for u in span.subspaces(good.s() + 1).unwrap() {
                        out.push((w.clone(), u));
                    }
                }
                return;
            }
            for v in good.spaces()[i].vectors().unwrap() {
                w.push(v);
                rec(good, f, m, w, out);
                w.pop();
            }
        }
        rec(good, &f, m, &mut w, &mut out);
        out
    }

    #[test]
    fn criterion_exhaustive_r3_s1() {
        let good = construct_good(3, 1, 2).unwrap();
        let cases = all_w_and_u(&good);
        assert_eq!(cases.len(), 210);
        let holds = cases.iter().filter(|(w, u)| verify_ltmds(&good, w, u).unwrap()).count();
        assert!(holds > 0);
    }

    #[test]
    fn literal_criterion_counterexamples() {
        // independence plus MDS alone is not sufficient: w = (a1, a2, e3)
        // with U = <a1 + a2, a1 + e3> keeps the code even-weight, yet
        // replacing U_1 puts U and U_3 inside a common 3-space
        let good = construct_good(3, 1, 2).unwrap();
        let f = good.field().clone();
        let w = vec![Vector::unit(&f, 5, 3), Vector::unit(&f, 5, 4), Vector::unit(&f, 5, 2)];
        let u = Subspace::from_rows(&f, 5, vec![vec![0, 0, 0, 1, 1], vec![0, 0, 1, 1, 0]]).unwrap();
        let sides = ltmds_sides(&good, &w, &u).unwrap();
        assert!(sides.literal_mds_side(1));
        assert!(!sides.good_side());
        assert!(!sides.w_outside_others);
        let literal = all_w_and_u(&good)
            .iter()
            .filter(|(w, u)| {
                let sd = ltmds_sides(&good, w, u).unwrap();
                sd.good_side() != sd.literal_mds_side(1)
            })
            .count();
        assert_eq!(literal, 18);
    }

    #[test]
    fn mds_examples() {
        let f = gf(2);
        assert!(mds_check(&f, &[vec![1, 0, 1], vec![0, 1, 1]], 3, 2).unwrap());
        assert!(mds_check(&f, &[vec![1; 5]], 5, 1).unwrap());
        // no [4,2,3] binary code: exhaust every 2-dimensional subspace
        let all = crate::subspace::enumerate_subspaces(&f, 4, 2).unwrap();
        assert_eq!(all.len(), 35);
        for c in &all {
            assert!(!mds_check(&f, &c.basis_rows(), 4, 2).unwrap());
            assert!(min_distance(c).unwrap().unwrap() <= 2);
        }
        assert!(matches!(
            canonical_mds_generator(&f, 4, 2),
            Err(Error::NoMdsCode { .. })
        ));
    }

    #[test]
    fn canonical_generators_are_mds() {
        for q in [2u32, 3, 4, 5, 7, 8] {
            let f = gf(q);
            for n in 1..=(q as usize + 1).min(7) {
                for k in (1..=n).filter(|&k| (q as u64).pow(k as u32) <= 1 << 16) {
                    match canonical_mds_generator(&f, n, k) {
                        Ok(g) => assert!(mds_check(&f, &g, n, k).unwrap(), "q={q} n={n} k={k}"),
                        Err(Error::NoMdsCode { .. }) => {
                            assert!(q == 2 && k > 1 && k < n - 1, "q={q} n={n} k={k}")
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn construct_good_examples() {
        let g = construct_good(3, 1, 2).unwrap();
        assert_eq!(g.spaces(), fixtures::good_triple().as_slice());
        let axes = construct_good(5, 0, 2).unwrap();
        let f = axes.field().clone();
        for (i, u) in axes.spaces().iter().enumerate() {
            assert_eq!(*u, Subspace::span(&f, 5, &[Vector::unit(&f, 5, i)]).unwrap());
        }
        let g = construct_good(4, 2, 4).unwrap();
        assert_eq!(g.ambient(), 9);
        assert!(is_good(g.spaces(), 4, 2).unwrap());
        for (r, s, q) in [(4, 1, 2), (5, 2, 4), (6, 3, 5), (5, 4, 4), (4, 3, 3)] {
            let g = construct_good(r, s, q).unwrap();
            assert!(is_good(g.spaces(), r, s).unwrap(), "({r},{s},{q})");
        }
    }

    #[test]
    fn canonical_step_on_good_triple() {
        let g = construct_good(3, 1, 2).unwrap();
        let choice = canonical_choice(&g).unwrap();
        let step = family_step(&g, &choice).unwrap();
        assert_eq!(step.newcomer.dim(), 2);
        for succ in &step.successors {
            assert!(is_good(succ.spaces(), 3, 1).unwrap());
        }
        let params = family_params(3, 1, 2).unwrap();
        step.witness
            .verify(&g.to_collection(), &step.newcomer, &params)
            .unwrap();
    }

    #[test]
    fn even_weight_step_gives_good_triple_newcomer() {
        let (good, w, u) = even_weight_setup();
        let choice = FamilyChoice {
            w,
            generator: vec![vec![1, 1, 0], vec![1, 0, 1]],
        };
        let step = family_step(&good, &choice).unwrap();
        assert_eq!(step.newcomer, u);
        assert_eq!(step.successors.len(), 3);
    }

    #[test]
    fn repetition_step_when_s_is_zero() {
        let g = construct_good(4, 0, 2).unwrap();
        let step = family_step(&g, &canonical_choice(&g).unwrap()).unwrap();
        let f = g.field().clone();
        assert_eq!(
            step.newcomer,
            Subspace::from_rows(&f, 4, vec![vec![1, 1, 1, 1]]).unwrap()
        );
    }

    #[test]
    fn no_binary_step_for_r4_s1() {
        // a (4,1) step needs a [4,2,3] code, which GF(2) lacks
        let g = construct_good(4, 1, 2).unwrap();
        assert!(matches!(canonical_choice(&g), Err(Error::NoMdsCode { .. })));
    }

    #[test]
    fn random_steps_stay_good() {
        for (r, s, q, steps) in [(3, 1, 2, 200), (4, 2, 4, 40), (4, 1, 4, 40), (5, 2, 4, 20)] {
            let mut rng = ChaCha8Rng::seed_from_u64(r as u64 * 100 + s as u64);
            let mut g = construct_good(r, s, q).unwrap();
            for _ in 0..steps {
                let choice = random_choice(&g, &mut rng).unwrap();
                let step = family_step(&g, &choice).unwrap();
                let i = rng.gen_range(0..r);
                g = step.successors[i].clone();
                assert!(is_good(g.spaces(), r, s).unwrap());
            }
        }
    }

    #[test]
    fn family_rate_and_cutset_identities() {
        for r in 1..=10usize {
            for s in 0..r {
                let m = m_rs(r, s).unwrap();
                assert_eq!(cutset_bound(r, r, s + 1, 1), m);
                // m / ((r + 1)(s + 1)) == (r - s/2) / (r + 1)  <=>  2m == (2r - s)(s + 1)
                assert_eq!(2 * m, (2 * r - s) * (s + 1));
            }
        }
    }

    #[test]
    fn closure_of_r3_s0() {
        let states = family_closure(3, 0, 2, 1_000).unwrap();
        assert!(!states.is_empty());
        for c in states.collections().into_iter().take(50) {
            assert!(is_good(c.spaces(), 3, 0).unwrap());
        }
    }
}
