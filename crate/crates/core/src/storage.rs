//! Functional-repair storage codes as sets of admissible repairing
//! collections.
//!
//! A code with parameters `(m; n, k, r, alpha, beta)` is a [`StateSet`] of
//! repairing collections: multisets of `n - 1` subspaces of dimension
//! `alpha` in `F_q^m`. A subspace `U` is *obtainable* from a collection by
//! `(r, beta)`-repair when `r` members contain `beta`-dimensional repair
//! spaces whose sum contains `U`. The set is a storage code when every
//! collection has an obtainable newcomer for which each one-member
//! replacement is again in the set, and every collection contains `k`
//! members spanning `F_q^m`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{self, Rows};
use crate::subspace::{combinations, enumerate_subspaces, Subspace};

/// Default cap on distinct candidate newcomers examined per collection.
pub const DEFAULT_NEWCOMER_CAP: u64 = 100_000;

/// Code parameters `(m; n, k, r, alpha, beta)` over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub alpha: usize,
    pub beta: usize,
    pub q: u32,
}

impl CodeParams {
    pub fn new(m: usize, n: usize, k: usize, r: usize, alpha: usize, beta: usize, q: u32) -> Result<Self> {
        let p = CodeParams {
            m,
            n,
            k,
            r,
            alpha,
            beta,
            q,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::Params(format!("{s} in {self}")));
        if self.m == 0 || self.n < 2 || self.k == 0 || self.r == 0 || self.alpha == 0 || self.beta == 0 {
            return bad("parameters must be positive (n >= 2)");
        }
        if self.k > self.n {
            return bad("k > n");
        }
        if self.r > self.n - 1 {
            return bad("r > n - 1");
        }
        if self.alpha > self.m {
            return bad("alpha > m");
        }
        if self.beta > self.alpha {
            return bad("beta > alpha");
        }
        Ok(())
    }

    /// Information per stored symbol, `m / (n alpha)`.
    pub fn rate(&self) -> f64 {
        self.m as f64 / (self.n * self.alpha) as f64
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {},{},{},{},{}) over GF({})",
            self.m, self.n, self.k, self.r, self.alpha, self.beta, self.q
        )
    }
}

/// A multiset of node spaces, kept sorted so that identity is
/// order-independent. Duplicates are preserved.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepairingCollection {
    spaces: Vec<Subspace>,
}

impl fmt::Debug for RepairingCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.spaces).finish()
    }
}

impl RepairingCollection {
    pub fn new(mut spaces: Vec<Subspace>) -> Self {
        spaces.sort();
        RepairingCollection { spaces }
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// Concatenation of the member keys in sorted order.
    pub fn key(&self) -> Vec<u8> {
        self.spaces.iter().flat_map(|s| s.key()).collect()
    }

    /// The collection with member `i` replaced by `newcomer`.
    pub fn replace(&self, i: usize, newcomer: &Subspace) -> RepairingCollection {
        let mut spaces = self.spaces.clone();
        spaces[i] = newcomer.clone();
        RepairingCollection::new(spaces)
    }

    pub fn has_duplicates(&self) -> bool {
        self.spaces.windows(2).any(|w| w[0] == w[1])
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.spaces.binary_search(s).is_ok()
    }

    pub fn span(&self) -> Result<Subspace> {
        let first = self
            .spaces
            .first()
            .ok_or_else(|| Error::Params("empty collection".into()))?;
        Subspace::sum_all(first.field(), first.ambient(), &self.spaces)
    }
}

/// Evidence that a newcomer is obtainable by `(r, beta)`-repair.
///
/// `coefficients[l]` expresses the `l`-th RREF basis row of the newcomer as a
/// combination of the concatenated RREF basis rows of `repair_spaces`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairWitness {
    /// Indices into the collection's sorted members.
    pub helpers: Vec<usize>,
    pub repair_spaces: Vec<Subspace>,
    pub coefficients: Rows,
}

impl RepairWitness {
    /// Builds a witness if `newcomer` lies in the sum of `repair_spaces`.
    pub fn build(newcomer: &Subspace, helpers: Vec<usize>, repair_spaces: Vec<Subspace>) -> Option<Self> {
        let field = newcomer.field();
        let rows: Rows = repair_spaces.iter().flat_map(|w| w.basis_rows()).collect();
        let coefficients = newcomer
            .basis()
            .map(|b| linalg::solve_combination(field, &rows, b))
            .collect::<Option<Rows>>()?;
        Some(RepairWitness {
            helpers,
            repair_spaces,
            coefficients,
        })
    }

    /// Checks every condition of `(r, beta)`-repair exactly.
    pub fn verify(&self, collection: &RepairingCollection, newcomer: &Subspace, params: &CodeParams) -> Result<()> {
        let fail = |s: String| Err(Error::Precondition(format!("invalid repair witness: {s}")));
        if self.helpers.len() != params.r || self.repair_spaces.len() != params.r {
            return fail(format!("expected {} helpers", params.r));
        }
        let mut sorted = self.helpers.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.helpers.len() || sorted.iter().any(|&h| h >= collection.len()) {
            return fail("helper indices must be distinct members".into());
        }
        for (&h, w) in self.helpers.iter().zip(&self.repair_spaces) {
            if w.dim() != params.beta {
                return fail(format!("repair space of dimension {} != beta", w.dim()));
            }
            if !w.is_subspace_of(&collection.spaces[h])? {
                return fail(format!("repair space not inside helper {h}"));
            }
        }
        if newcomer.dim() != params.alpha {
            return fail("newcomer dimension differs from alpha".into());
        }
        let rows: Rows = self.repair_spaces.iter().flat_map(|w| w.basis_rows()).collect();
        if self.coefficients.len() != newcomer.dim() {
            return fail("coefficient count".into());
        }
        for (c, b) in self.coefficients.iter().zip(newcomer.basis()) {
            if c.len() != rows.len() || linalg::vec_mat(newcomer.field(), c, &rows, params.m) != b {
                return fail("coefficients do not reproduce the newcomer basis".into());
            }
        }
        Ok(())
    }
}

/// A repairing collection together with a newcomer and its repair witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleState {
    pub collection: RepairingCollection,
    pub newcomer: Subspace,
    pub witness: RepairWitness,
}

/// A declared newcomer for a collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub newcomer: Subspace,
    pub witness: Option<RepairWitness>,
}

/// A set of repairing collections with optional declared transitions.
#[derive(Clone, Debug)]
pub struct StateSet {
    params: CodeParams,
    field: Arc<Field>,
    collections: HashSet<RepairingCollection>,
    transitions: BTreeMap<RepairingCollection, Vec<Transition>>,
}

impl StateSet {
    pub fn new(params: CodeParams, field: Arc<Field>) -> Result<Self> {
        params.validate()?;
        if field.order() != params.q {
            return Err(Error::Params(format!(
                "field GF({}) does not match q = {}",
                field.order(),
                params.q
            )));
        }
        Ok(StateSet {
            params,
            field,
            collections: HashSet::new(),
            transitions: BTreeMap::new(),
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn check_space(&self, s: &Subspace) -> Result<()> {
        if s.ambient() != self.params.m || **s.field() != *self.field {
            return Err(Error::Ambient(format!(
                "subspace of GF({})^{} in a code over GF({})^{}",
                s.field().order(),
                s.ambient(),
                self.field.order(),
                self.params.m
            )));
        }
        if s.dim() != self.params.alpha {
            return Err(Error::Dimension(format!(
                "node space of dimension {} (alpha = {})",
                s.dim(),
                self.params.alpha
            )));
        }
        Ok(())
    }

    /// Adds a collection; returns whether it was new.
    pub fn insert(&mut self, collection: RepairingCollection) -> Result<bool> {
        if collection.len() != self.params.n - 1 {
            return Err(Error::Dimension(format!(
                "collection of {} spaces (n - 1 = {})",
                collection.len(),
                self.params.n - 1
            )));
        }
        for s in collection.spaces() {
            self.check_space(s)?;
        }
        Ok(self.collections.insert(collection))
    }

    /// Declares `newcomer` for `collection` (inserting the collection).
    pub fn add_transition(
        &mut self,
        collection: RepairingCollection,
        newcomer: Subspace,
        witness: Option<RepairWitness>,
    ) -> Result<()> {
        self.check_space(&newcomer)?;
        self.insert(collection.clone())?;
        let list = self.transitions.entry(collection).or_default();
        if !list.iter().any(|t| t.newcomer == newcomer) {
            list.push(Transition { newcomer, witness });
        }
        Ok(())
    }

    pub fn contains(&self, c: &RepairingCollection) -> bool {
        self.collections.contains(c)
    }

    pub fn len(&self) -> usize {
        self.collections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.collections.is_empty()
    }

    /// Collections in canonical order.
    pub fn collections(&self) -> Vec<&RepairingCollection> {
        let mut v: Vec<_> = self.collections.iter().collect();
        v.sort();
        v
    }

    pub fn transitions(&self, c: &RepairingCollection) -> &[Transition] {
        self.transitions.get(c).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all_transitions(&self) -> impl Iterator<Item = (&RepairingCollection, &Transition)> {
        self.transitions
            .iter()
            .flat_map(|(c, ts)| ts.iter().map(move |t| (c, t)))
    }

    /// Sorted collection keys, for comparing state sets.
    pub fn key_set(&self) -> Vec<Vec<u8>> {
        let mut keys: Vec<_> = self.collections.iter().map(|c| c.key()).collect();
        keys.sort();
        keys
    }

    /// Whether replacing each member of `collection` by `newcomer` stays in
    /// the set.
    pub fn accepts(&self, collection: &RepairingCollection, newcomer: &Subspace) -> bool {
        (0..collection.len()).all(|i| self.contains(&collection.replace(i, newcomer)))
    }
}

/// True iff the spaces together span `F^m`.
pub fn is_recovery_set(spaces: &[Subspace], m: usize) -> bool {
    Subspace::sum_dim(spaces) == m
}

/// Smallest number of the given spaces that span `F^m`.
pub fn recovery_dimension(spaces: &[Subspace], m: usize) -> Result<usize> {
    if !is_recovery_set(spaces, m) {
        return Err(Error::NotAStorageCode(
            "the node spaces do not span the message space".into(),
        ));
    }
    if m == 0 {
        return Ok(0);
    }
    for k in 1..=spaces.len() {
        if spanning_subset(spaces, k, m).is_some() {
            return Ok(k);
        }
    }
    unreachable!("the full list spans")
}

/// First `k`-subset (lexicographic) of `spaces` spanning `F^m`.
pub fn spanning_subset(spaces: &[Subspace], k: usize, m: usize) -> Option<Vec<usize>> {
    combinations(spaces.len(), k)
        .into_iter()
        .find(|idx| Subspace::sum_dim(idx.iter().map(|&i| &spaces[i])) == m)
}

/// Enumerates newcomers obtainable from one collection.
struct RepairSearch<'a> {
    collection: &'a RepairingCollection,
    params: &'a CodeParams,
    local: Vec<Vec<Subspace>>,
    coeff: HashMap<usize, Vec<Rows>>,
    seen: HashSet<Subspace>,
    cap: u64,
}

impl<'a> RepairSearch<'a> {
    fn new(collection: &'a RepairingCollection, params: &'a CodeParams, cap: u64) -> Result<Self> {
        let local = collection
            .spaces()
            .iter()
            .map(|s| {
                if s.dim() < params.beta {
                    Ok(Vec::new())
                } else {
                    s.subspaces(params.beta)
                }
            })
            .collect::<Result<_>>()?;
        Ok(RepairSearch {
            collection,
            params,
            local,
            coeff: HashMap::new(),
            seen: HashSet::new(),
            cap,
        })
    }

    fn field(&self) -> &Arc<Field> {
        self.collection.spaces()[0].field()
    }

    /// Calls `f` on every choice of helpers and repair spaces, in
    /// lexicographic order.
    fn for_each_repair_choice(
        &self,
        mut f: impl FnMut(&[usize], &[&Subspace]) -> Result<ControlFlow<()>>,
    ) -> Result<()> {
        for helpers in combinations(self.collection.len(), self.params.r) {
            let options: Vec<&Vec<Subspace>> = helpers.iter().map(|&h| &self.local[h]).collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; helpers.len()];
            loop {
                let chosen: Vec<&Subspace> = idx.iter().zip(&options).map(|(&i, o)| &o[i]).collect();
                if f(&helpers, &chosen)?.is_break() {
                    return Ok(());
                }
                let mut i = idx.len();
                let mut done = true;
                while i > 0 {
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < options[i].len() {
                        done = false;
                        break;
                    }
                    idx[i] = 0;
                }
                if done {
                    break;
                }
            }
        }
        Ok(())
    }

    /// Calls `f` once per distinct obtainable newcomer, with the first
    /// witness found for it.
    fn for_each_newcomer(
        &mut self,
        mut f: impl FnMut(&Subspace, &[usize], &[&Subspace]) -> ControlFlow<()>,
    ) -> Result<()> {
        let field = self.field().clone();
        let m = self.params.m;
        let alpha = self.params.alpha;
        let mut seen = std::mem::take(&mut self.seen);
        let mut coeff = std::mem::take(&mut self.coeff);
        let cap = self.cap;
        let flow = self.for_each_repair_choice(|helpers, chosen| {
            let sum = Subspace::sum_all(&field, m, chosen.iter().copied())?;
            if sum.dim() < alpha {
                return Ok(ControlFlow::Continue(()));
            }
            let coeff_spaces = match coeff.entry(sum.dim()) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(e) => e.insert(
                    enumerate_subspaces(&field, sum.dim(), alpha)?
                        .iter()
                        .map(|s| s.basis_rows())
                        .collect(),
                ),
            };
            let basis = sum.basis_rows();
            for c in coeff_spaces.iter() {
                let rows = linalg::mat_mul(&field, c, &basis, m);
                let cand = Subspace::from_rows_unchecked(&field, m, rows);
                if seen.contains(&cand) {
                    continue;
                }
                if seen.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: "candidate newcomers per collection",
                        cap,
                    });
                }
                seen.insert(cand.clone());
                if f(&cand, helpers, chosen).is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
            Ok(ControlFlow::Continue(()))
        });
        self.seen = seen;
        self.coeff = coeff;
        flow
    }
}

fn witness_from(newcomer: &Subspace, helpers: &[usize], chosen: &[&Subspace]) -> RepairWitness {
    RepairWitness::build(
        newcomer,
        helpers.to_vec(),
        chosen.iter().map(|s| (*s).clone()).collect(),
    )
    .expect("newcomer lies in the sum of the repair spaces")
}

/// Every `alpha`-dimensional space obtainable from `collection` by
/// `(r, beta)`-repair, each with the first witness found.
pub fn obtainable_spaces(
    collection: &RepairingCollection,
    params: &CodeParams,
) -> Result<BTreeMap<Subspace, RepairWitness>> {
    obtainable_spaces_capped(collection, params, DEFAULT_NEWCOMER_CAP)
}

pub fn obtainable_spaces_capped(
    collection: &RepairingCollection,
    params: &CodeParams,
    cap: u64,
) -> Result<BTreeMap<Subspace, RepairWitness>> {
    let mut out = BTreeMap::new();
    if collection.is_empty() {
        return Ok(out);
    }
    let mut search = RepairSearch::new(collection, params, cap)?;
    search.for_each_newcomer(|u, helpers, chosen| {
        out.insert(u.clone(), witness_from(u, helpers, chosen));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Finds repair spaces proving that `newcomer` is obtainable, if any.
pub fn find_witness(
    collection: &RepairingCollection,
    newcomer: &Subspace,
    params: &CodeParams,
) -> Result<Option<RepairWitness>> {
    if newcomer.dim() != params.alpha || collection.is_empty() {
        return Ok(None);
    }
    let search = RepairSearch::new(collection, params, DEFAULT_NEWCOMER_CAP)?;
    let mut found = None;
    let field = newcomer.field().clone();
    search.for_each_repair_choice(|helpers, chosen| {
        let sum = Subspace::sum_all(&field, params.m, chosen.iter().copied())?;
        if newcomer.is_subspace_of_unchecked(&sum) {
            found = Some(witness_from(newcomer, helpers, chosen));
            return Ok(ControlFlow::Break(()));
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(found)
}

/// Options for [`check_repair_property`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Compute every valid newcomer and per-member feasibility instead of
    /// stopping at the first valid newcomer.
    pub full_report: bool,
    pub newcomer_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            full_report: false,
            newcomer_cap: DEFAULT_NEWCOMER_CAP,
        }
    }
}

impl VerifyOptions {
    pub fn full() -> Self {
        VerifyOptions {
            full_report: true,
            ..Self::default()
        }
    }
}

/// Verification outcome for one collection.
#[derive(Clone, Debug)]
pub struct CollectionReport {
    pub collection: RepairingCollection,
    /// First spanning `k`-subset, as member indices.
    pub spanning_subset: Option<Vec<usize>>,
    /// A valid newcomer with its witness.
    pub admissible: Option<AdmissibleState>,
    /// Every valid newcomer, sorted (full reports only).
    pub valid_newcomers: Option<Vec<Subspace>>,
    /// Number of distinct obtainable spaces (full reports only).
    pub obtainable_count: Option<usize>,
    /// For each member `i`: whether some obtainable space keeps the
    /// replacement of member `i` inside the set (full reports only).
    pub per_index_feasible: Option<Vec<bool>>,
    pub duplicates: bool,
}

impl CollectionReport {
    pub fn passed(&self) -> bool {
        self.spanning_subset.is_some() && self.admissible.is_some()
    }
}

/// Result of checking the repair property over a whole state set.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub params: CodeParams,
    /// One entry per collection, in canonical order.
    pub entries: Vec<CollectionReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CollectionReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CollectionReport> {
        self.entries.iter().filter(|e| !e.passed())
    }

    pub fn first_failure(&self) -> Option<&CollectionReport> {
        self.failures().next()
    }

    /// Whether each collection has exactly one valid newcomer (full reports).
    pub fn unique_newcomers(&self) -> Option<bool> {
        self.entries
            .iter()
            .map(|e| e.valid_newcomers.as_ref().map(|v| v.len() == 1))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().all(|b| b))
    }

    pub fn duplicates_seen(&self) -> bool {
        self.entries.iter().any(|e| e.duplicates)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} collections, {} failing, parameters {}",
            self.entries.len(),
            self.failures().count(),
            self.params
        );
        if let Some(u) = self.unique_newcomers() {
            s.push_str(if u {
                ", unique newcomer per collection"
            } else {
                ", some collections have several valid newcomers"
            });
        }
        if self.duplicates_seen() {
            s.push_str(", repeated members present (treated as a multiset)");
        }
        s
    }

    /// Human-readable description of the first falsifying collection.
    pub fn falsification(&self) -> Option<String> {
        self.first_failure().map(|e| {
            let reason = if e.spanning_subset.is_none() {
                "no spanning k-subset"
            } else {
                "no valid newcomer"
            };
            format!("{:?}: {reason}", e.collection)
        })
    }
}

fn check_collection(
    states: &StateSet,
    collection: &RepairingCollection,
    opts: &VerifyOptions,
) -> Result<CollectionReport> {
    let params = states.params();
    let spanning_subset = spanning_subset(collection.spaces(), params.k, params.m);
    let mut report = CollectionReport {
        collection: collection.clone(),
        spanning_subset,
        admissible: None,
        valid_newcomers: None,
        obtainable_count: None,
        per_index_feasible: None,
        duplicates: collection.has_duplicates(),
    };
    if opts.full_report {
        let all = obtainable_spaces_capped(collection, params, opts.newcomer_cap)?;
        let mut feasible = vec![false; collection.len()];
        let mut valid = Vec::new();
        for (u, w) in &all {
            let mut ok = true;
            for (i, f) in feasible.iter_mut().enumerate() {
                let inside = states.contains(&collection.replace(i, u));
                *f |= inside;
                ok &= inside;
            }
            if ok {
                if report.admissible.is_none() {
                    report.admissible = Some(AdmissibleState {
                        collection: collection.clone(),
                        newcomer: u.clone(),
                        witness: w.clone(),
                    });
                }
                valid.push(u.clone());
            }
        }
        report.obtainable_count = Some(all.len());
        report.valid_newcomers = Some(valid);
        report.per_index_feasible = Some(feasible);
        return Ok(report);
    }
    for t in states.transitions(collection) {
        if !states.accepts(collection, &t.newcomer) {
            continue;
        }
        let witness = match &t.witness {
            Some(w) if w.verify(collection, &t.newcomer, params).is_ok() => Some(w.clone()),
            _ => find_witness(collection, &t.newcomer, params)?,
        };
        if let Some(witness) = witness {
            report.admissible = Some(AdmissibleState {
                collection: collection.clone(),
                newcomer: t.newcomer.clone(),
                witness,
            });
            return Ok(report);
        }
    }
    let mut search = RepairSearch::new(collection, params, opts.newcomer_cap)?;
    let mut found = None;
    search.for_each_newcomer(|u, helpers, chosen| {
        if states.accepts(collection, u) {
            found = Some(AdmissibleState {
                collection: collection.clone(),
                newcomer: u.clone(),
                witness: witness_from(u, helpers, chosen),
            });
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    report.admissible = found;
    Ok(report)
}

/// Checks the repair property and the spanning requirement for every
/// collection. A failing collection is reported, not returned as an error;
/// errors are reserved for exceeded caps.
pub fn check_repair_property(states: &StateSet, opts: &VerifyOptions) -> Result<VerificationReport> {
    let collections = states.collections();
    let entries = collections
        .par_iter()
        .map(|c| check_collection(states, c, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        params: *states.params(),
        entries,
    })
}

/// The admissible states `({U_1..U_n} \ {U_i}, U_i)` of an exact-repair code.
pub fn exact_to_states(node_spaces: &[Subspace], params: &CodeParams) -> Result<StateSet> {
    if node_spaces.len() != params.n {
        return Err(Error::Params(format!(
            "{} node spaces for n = {}",
            node_spaces.len(),
            params.n
        )));
    }
    let field = node_spaces[0].field().clone();
    let mut states = StateSet::new(*params, field)?;
    for i in 0..node_spaces.len() {
        let others: Vec<Subspace> = node_spaces
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, s)| s.clone())
            .collect();
        let collection = RepairingCollection::new(others);
        let witness = find_witness(&collection, &node_spaces[i], params)?
            .ok_or_else(|| Error::NotAStorageCode(format!("node space {i} has no repair set of size {}", params.r)))?;
        if spanning_subset(collection.spaces(), params.k, params.m).is_none() {
            return Err(Error::NotAStorageCode(format!(
                "the spaces other than {i} contain no spanning {}-subset",
                params.k
            )));
        }
        states.add_transition(collection, node_spaces[i].clone(), Some(witness))?;
    }
    Ok(states)
}

/// A state set that has passed [`check_repair_property`].
#[derive(Clone, Debug)]
pub struct VerifiedCode {
    states: StateSet,
    report: VerificationReport,
}

impl VerifiedCode {
    pub fn new(states: StateSet) -> Result<Self> {
        Self::with_options(states, &VerifyOptions::default())
    }

    pub fn with_options(states: StateSet, opts: &VerifyOptions) -> Result<Self> {
        let report = check_repair_property(&states, opts)?;
        if let Some(f) = report.falsification() {
            return Err(Error::NotAStorageCode(f));
        }
        Ok(VerifiedCode { states, report })
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn params(&self) -> &CodeParams {
        self.states.params()
    }

    pub fn into_states(self) -> StateSet {
        self.states
    }
}
