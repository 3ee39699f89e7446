//! A distributed storage system driven by a verified code.
//!
//! Each node stores `x . b` for every basis row `b` of its space. A failed
//! node is rebuilt by downloading `beta` symbols from each of `r` helpers and
//! recombining them; the new node's space is a valid newcomer for the
//! survivors' collection. The data vector is kept alongside so that every
//! stored and recovered symbol can be checked.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{self, Rows};
use crate::storage::{obtainable_spaces, CodeParams, RepairWitness, RepairingCollection, StateSet, VerifiedCode};
use crate::subspace::{combinations, Subspace, Vector};

/// One storage node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub space: Subspace,
    /// Canonical basis rows of `space`; the node stores `x . b` for each.
    pub basis: Rows,
    pub stored: Vec<u32>,
    pub alive: bool,
}

/// What one helper sent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HelperDownload {
    pub node: usize,
    pub repair_space: Subspace,
    /// `beta x alpha`: combinations of the helper's stored symbols.
    pub combination: Rows,
    pub symbols: Vec<u32>,
}

/// A complete record of one repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTranscript {
    pub failed: usize,
    pub helpers: Vec<HelperDownload>,
    pub newcomer: Subspace,
    pub newcomer_basis: Rows,
    pub stored: Vec<u32>,
    /// Hex key of the node spaces after the repair.
    pub collection_key: String,
}

fn digits(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn matrix(rows: &Rows) -> String {
    rows.iter().map(|r| digits(r)).collect::<Vec<_>>().join(";")
}

impl RepairTranscript {
    pub fn downloaded(&self) -> usize {
        self.helpers.iter().map(|h| h.symbols.len()).sum()
    }

    /// Fixed-order text block.
    pub fn to_text(&self) -> String {
        let mut s = format!("repair node={}\n", self.failed);
        for h in &self.helpers {
            let _ = writeln!(
                s,
                "  helper node={} space={:?} combine={} symbols={}",
                h.node,
                h.repair_space,
                matrix(&h.combination),
                digits(&h.symbols)
            );
        }
        let _ = writeln!(
            s,
            "  newcomer space={:?} basis={} stored={}",
            self.newcomer,
            matrix(&self.newcomer_basis),
            digits(&self.stored)
        );
        let _ = writeln!(s, "  state={}", self.collection_key);
        s
    }
}

/// How the newcomer is picked among the valid ones.
#[derive(Clone, Debug)]
pub enum NewcomerChoice {
    /// The least valid newcomer in canonical order.
    Least,
    Seeded(Box<ChaCha8Rng>),
}

/// A running system.
#[derive(Clone, Debug)]
pub struct DssState {
    code: Arc<VerifiedCode>,
    nodes: Vec<Node>,
    x: Vector,
    choice: NewcomerChoice,
    valid_cache: HashMap<RepairingCollection, Vec<Subspace>>,
    log: Vec<String>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn make_node(id: usize, space: Subspace, x: &Vector) -> Node {
    let basis = space.basis_rows();
    let stored = basis.iter().map(|b| linalg::dot(x.field(), x.coords(), b)).collect();
    Node {
        id,
        space,
        basis,
        stored,
        alive: true,
    }
}

/// Starts the system on the first collection of the code and its least valid
/// newcomer as the last node.
pub fn dss_init(code: Arc<VerifiedCode>, x: Vector) -> Result<DssState> {
    let states = code.states();
    let first = states
        .collections()
        .first()
        .map(|c| (*c).clone())
        .ok_or_else(|| Error::NotAStorageCode("empty state set".into()))?;
    let newcomer = valid_newcomers(states, &first)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Consistency("verified collection without a valid newcomer".into()))?;
    let mut spaces = first.spaces().to_vec();
    spaces.push(newcomer);
    dss_init_with_layout(code, spaces, x)
}

/// Starts the system with the given node spaces, in node order. Every
/// `n - 1` of them must form a collection of the code.
pub fn dss_init_with_layout(code: Arc<VerifiedCode>, spaces: Vec<Subspace>, x: Vector) -> Result<DssState> {
    let params = *code.params();
    if spaces.len() != params.n {
        return Err(Error::Params(format!("{} nodes for n = {}", spaces.len(), params.n)));
    }
    if x.len() != params.m || x.field().order() != params.q {
        return Err(Error::Ambient(format!(
            "data vector must lie in GF({})^{}",
            params.q, params.m
        )));
    }
    let nodes: Vec<Node> = spaces
        .into_iter()
        .enumerate()
        .map(|(i, s)| make_node(i, s, &x))
        .collect();
    let mut state = DssState {
        code,
        nodes,
        x,
        choice: NewcomerChoice::Least,
        valid_cache: HashMap::new(),
        log: Vec::new(),
    };
    state.check_closure()?;
    state.log.push(format!("init state={}", state.state_key()));
    Ok(state)
}

/// Every valid newcomer for `collection`, in canonical order.
pub fn valid_newcomers(states: &StateSet, collection: &RepairingCollection) -> Result<Vec<Subspace>> {
    Ok(obtainable_spaces(collection, states.params())?
        .into_keys()
        .filter(|u| states.accepts(collection, u))
        .collect())
}

impl DssState {
    pub fn with_choice(mut self, choice: NewcomerChoice) -> Self {
        self.choice = choice;
        self
    }

    pub fn seeded(self, seed: u64) -> Self {
        self.with_choice(NewcomerChoice::Seeded(Box::new(ChaCha8Rng::seed_from_u64(seed))))
    }

    pub fn params(&self) -> &CodeParams {
        self.code.params()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn data(&self) -> &Vector {
        &self.x
    }

    pub fn field(&self) -> &Arc<Field> {
        self.x.field()
    }

    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Hex key of the multiset of node spaces.
    pub fn state_key(&self) -> String {
        let c = RepairingCollection::new(self.nodes.iter().map(|n| n.space.clone()).collect());
        hex(&c.key())
    }

    fn survivors(&self, failed: usize) -> RepairingCollection {
        RepairingCollection::new(
            self.nodes
                .iter()
                .filter(|n| n.id != failed)
                .map(|n| n.space.clone())
                .collect(),
        )
    }

    /// Every `n - 1` of the node spaces must be a collection of the code.
    fn check_closure(&self) -> Result<()> {
        for i in 0..self.nodes.len() {
            let c = self.survivors(i);
            if !self.code.states().contains(&c) {
                return Err(Error::CorruptState(format!(
                    "the nodes other than {i} form {c:?}, not in the code"
                )));
            }
        }
        Ok(())
    }

    /// Checks every alive node's symbols against the data vector.
    pub fn check_stored(&self) -> Result<()> {
        for n in self.nodes.iter().filter(|n| n.alive) {
            let want: Vec<u32> = n
                .basis
                .iter()
                .map(|b| linalg::dot(self.field(), self.x.coords(), b))
                .collect();
            if want != n.stored {
                return Err(Error::Integrity(format!(
                    "node {} stores {:?}, expected {:?}",
                    n.id, n.stored, want
                )));
            }
        }
        Ok(())
    }

    pub fn fail(&mut self, id: usize) -> Result<()> {
        if id >= self.nodes.len() {
            return Err(Error::Precondition(format!("no node {id}")));
        }
        if let Some(dead) = self.nodes.iter().find(|n| !n.alive) {
            return Err(Error::Precondition(format!("node {} is already down", dead.id)));
        }
        self.nodes[id].alive = false;
        self.nodes[id].stored.clear();
        self.log.push(format!("fail node={id}"));
        Ok(())
    }

    fn failed_node(&self, id: usize) -> Result<()> {
        if id >= self.nodes.len() || self.nodes[id].alive {
            return Err(Error::Precondition(format!("node {id} has not failed")));
        }
        Ok(())
    }

    /// Rebuilds the failed node with a newcomer picked per the choice mode.
    pub fn repair(&mut self, id: usize) -> Result<RepairTranscript> {
        self.failed_node(id)?;
        let survivors = self.survivors(id);
        if !self.code.states().contains(&survivors) {
            return Err(Error::CorruptState(format!(
                "survivors {survivors:?} are not in the code"
            )));
        }
        if !self.valid_cache.contains_key(&survivors) {
            let v = valid_newcomers(self.code.states(), &survivors)?;
            self.valid_cache.insert(survivors.clone(), v);
        }
        let valid = &self.valid_cache[&survivors];
        let newcomer = match &mut self.choice {
            NewcomerChoice::Least => valid.first(),
            NewcomerChoice::Seeded(rng) => valid.choose(rng.as_mut()),
        }
        .cloned()
        .ok_or_else(|| Error::Consistency(format!("no valid newcomer for {survivors:?}")))?;
        let witness = obtainable_spaces(&survivors, self.params())?
            .remove(&newcomer)
            .ok_or_else(|| Error::Consistency("valid newcomer lost its witness".into()))?;
        let helper_ids = self.helper_ids(id, &survivors, &witness);
        let helpers: Vec<(usize, Subspace)> = helper_ids.into_iter().zip(witness.repair_spaces).collect();
        self.repair_with(id, &newcomer, &helpers)
    }

    /// Maps sorted-collection indices of a witness to node ids.
    fn helper_ids(&self, failed: usize, survivors: &RepairingCollection, witness: &RepairWitness) -> Vec<usize> {
        let mut ids: Vec<usize> = Vec::new();
        let mut used = vec![false; self.nodes.len()];
        for &h in &witness.helpers {
            let space = &survivors.spaces()[h];
            let node = self
                .nodes
                .iter()
                .find(|n| n.id != failed && !used[n.id] && n.space == *space)
                .expect("helper space belongs to a survivor");
            used[node.id] = true;
            ids.push(node.id);
        }
        ids
    }

    /// Rebuilds the failed node as `newcomer` from the given helpers and
    /// repair spaces.
    pub fn repair_with(
        &mut self,
        id: usize,
        newcomer: &Subspace,
        helpers: &[(usize, Subspace)],
    ) -> Result<RepairTranscript> {
        self.failed_node(id)?;
        let params = *self.params();
        let field = self.field().clone();
        if helpers.len() != params.r {
            return Err(Error::Precondition(format!(
                "{} helpers, r = {}",
                helpers.len(),
                params.r
            )));
        }
        let ids: BTreeSet<usize> = helpers.iter().map(|h| h.0).collect();
        if ids.len() != helpers.len() || ids.contains(&id) || ids.iter().any(|&h| h >= self.nodes.len()) {
            return Err(Error::Precondition("helpers must be distinct surviving nodes".into()));
        }
        let survivors = self.survivors(id);
        if !self.code.states().accepts(&survivors, newcomer) {
            return Err(Error::Precondition(format!(
                "{newcomer:?} is not a valid newcomer here"
            )));
        }
        let mut downloads = Vec::with_capacity(helpers.len());
        for (h, w) in helpers {
            let node = &self.nodes[*h];
            if w.dim() != params.beta || !w.is_subspace_of(&node.space)? {
                return Err(Error::Precondition(format!(
                    "repair space not a {}-subspace of node {h}",
                    params.beta
                )));
            }
            let combination: Rows = w
                .basis()
                .map(|b| node.space.coordinates_of(b).expect("inside the node space"))
                .collect();
            let symbols = combination
                .iter()
                .map(|c| linalg::dot(&field, c, &node.stored))
                .collect();
            downloads.push(HelperDownload {
                node: *h,
                repair_space: w.clone(),
                combination,
                symbols,
            });
        }
        let rows: Rows = downloads.iter().flat_map(|d| d.repair_space.basis_rows()).collect();
        let symbols: Vec<u32> = downloads.iter().flat_map(|d| d.symbols.iter().copied()).collect();
        let newcomer_basis = newcomer.basis_rows();
        let mut stored = Vec::with_capacity(newcomer_basis.len());
        for b in &newcomer_basis {
            let c = linalg::solve_combination(&field, &rows, b)
                .ok_or_else(|| Error::Precondition("newcomer is not inside the downloaded span".into()))?;
            stored.push(linalg::dot(&field, &c, &symbols));
        }
        self.nodes[id] = Node {
            id,
            space: newcomer.clone(),
            basis: newcomer_basis.clone(),
            stored: stored.clone(),
            alive: true,
        };
        self.check_stored()?;
        self.check_closure()?;
        let transcript = RepairTranscript {
            failed: id,
            helpers: downloads,
            newcomer: newcomer.clone(),
            newcomer_basis,
            stored,
            collection_key: self.state_key(),
        };
        if transcript.downloaded() != params.r * params.beta {
            return Err(Error::Consistency(format!(
                "downloaded {} symbols",
                transcript.downloaded()
            )));
        }
        self.log.push(transcript.to_text());
        Ok(transcript)
    }

    /// Recovers the data from the chosen alive nodes.
    pub fn collect(&self, ids: &[usize]) -> Result<Vector> {
        let m = self.params().m;
        let field = self.field().clone();
        let mut aug: Rows = Vec::new();
        for &i in ids {
            let n = self
                .nodes
                .get(i)
                .filter(|n| n.alive)
                .ok_or_else(|| Error::Precondition(format!("node {i} is not available")))?;
            for (b, &s) in n.basis.iter().zip(&n.stored) {
                let mut row = b.clone();
                row.push(s);
                aug.push(row);
            }
        }
        let pivots = linalg::rref_generic(&field, &mut aug, m + 1);
        if pivots.last() == Some(&m) {
            return Err(Error::Integrity("stored symbols are inconsistent".into()));
        }
        if pivots.len() < m {
            return Err(Error::Insufficient(format!(
                "nodes {ids:?} span only {} of {m} dimensions",
                pivots.len()
            )));
        }
        Vector::new(&field, aug.iter().take(m).map(|r| r[m]).collect())
    }

    /// Node sets of size `k` whose spaces span the message space.
    pub fn spanning_k_sets(&self) -> Vec<Vec<usize>> {
        let params = self.params();
        combinations(self.nodes.len(), params.k)
            .into_iter()
            .filter(|set| {
                set.iter().all(|&i| self.nodes[i].alive)
                    && Subspace::sum_dim(set.iter().map(|&i| &self.nodes[i].space)) == params.m
            })
            .collect()
    }
}

/// Summary of a random run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub steps: usize,
    pub states_visited: usize,
    pub total_downloaded: usize,
    /// Downloads of each repair.
    pub per_repair: BTreeSet<usize>,
    pub collects: usize,
    pub integrity_ok: bool,
    pub transcript: String,
}

impl RunReport {
    pub fn summary(&self) -> String {
        format!(
            "steps {} states {} downloaded {} per-repair {:?} collects {} integrity {}",
            self.steps,
            self.states_visited,
            self.total_downloaded,
            self.per_repair,
            self.collects,
            if self.integrity_ok { "ok" } else { "FAILED" }
        )
    }
}

/// Fails a random node, repairs it, and recovers the data, `steps` times.
/// With `exhaustive`, every spanning `k`-set is collected after each repair;
/// otherwise one random set.
pub fn run_random(state: &mut DssState, steps: usize, seed: u64, exhaustive: bool) -> Result<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transcript = String::new();
    let mut visited = BTreeSet::new();
    visited.insert(state.state_key());
    let mut report = RunReport {
        steps,
        states_visited: 0,
        total_downloaded: 0,
        per_repair: BTreeSet::new(),
        collects: 0,
        integrity_ok: true,
        transcript: String::new(),
    };
    let check = |state: &DssState, set: &[usize], transcript: &str| -> Result<()> {
        let got = state.collect(set)?;
        if got != *state.data() {
            return Err(Error::Integrity(format!(
                "nodes {set:?} recovered {:?}, expected {:?}\n{transcript}",
                got.coords(),
                state.data().coords()
            )));
        }
        Ok(())
    };
    for set in state.spanning_k_sets() {
        check(state, &set, &transcript)?;
        report.collects += 1;
    }
    for step in 0..steps {
        let id = rng.gen_range(0..state.nodes.len());
        state.fail(id)?;
        let t = state.repair(id).map_err(|e| match e {
            Error::Integrity(s) => Error::Integrity(format!("{s}\n{transcript}")),
            e => e,
        })?;
        let _ = write!(transcript, "step {step}\n{}", t.to_text());
        report.total_downloaded += t.downloaded();
        report.per_repair.insert(t.downloaded());
        visited.insert(state.state_key());
        let sets = state.spanning_k_sets();
        if sets.is_empty() {
            return Err(Error::Integrity(format!(
                "no spanning {}-set after step {step}",
                state.params().k
            )));
        }
        if exhaustive {
            for set in &sets {
                check(state, set, &transcript)?;
                report.collects += 1;
            }
        } else {
            let set = sets.choose(&mut rng).expect("nonempty");
            check(state, set, &transcript)?;
            report.collects += 1;
        }
    }
    report.states_visited = visited.len();
    report.transcript = transcript;
    Ok(report)
}

/// Parses a data vector: one base-36 digit per coordinate, or integers
/// separated by commas or spaces.
pub fn parse_data(field: &Arc<Field>, m: usize, text: &str) -> Result<Vector> {
    let text = text.trim();
    let values: Vec<u32> = if text.contains([',', ' ']) {
        text.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Error::Params(format!("bad symbol {t:?}"))))
            .collect::<Result<_>>()?
    } else {
        text.chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Params(format!("bad digit {c:?}"))))
            .collect::<Result<_>>()?
    };
    if values.len() != m {
        return Err(Error::Params(format!("{} symbols for m = {m}", values.len())));
    }
    Vector::new(field, values)
}

/// A random data vector.
pub fn random_data(field: &Arc<Field>, m: usize, rng: &mut impl Rng) -> Vector {
    let q = field.order();
    Vector::new(field, (0..m).map(|_| rng.gen_range(0..q)).collect()).expect("symbols below q")
}
