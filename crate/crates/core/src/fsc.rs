//! The `.fsc` text format for subspace collections, state sets and maps.
//!
//! ```text
//! FSC 1
//! field 2 1
//! ambient 4
//! params 4 2 3 2 1        # n k r alpha beta
//! subspace U0
//! row 1 0 0 0
//! row 0 0 1 1
//! end
//! map T
//! row ...
//! end
//! collection C0 U1 U2 U3
//! state C0 -> U0
//! witness C0 -> U0 U1:R1 U2:R2 U3:R3
//! ```
//!
//! Names are defined before use. Emission is canonical: sections in the
//! order above, names sorted, subspaces as reduced row echelon bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::groupsearch::LinearMap;
use crate::storage::{CodeParams, RepairWitness, RepairingCollection, StateSet};
use crate::subspace::Subspace;

/// The `params` line; `m` and `q` come from `ambient` and `field`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamsLine {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub alpha: usize,
    pub beta: usize,
}

/// One `helper:repair-space` pair of a witness line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WitnessPart {
    pub helper: String,
    pub repair_space: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FscDocument {
    pub field: Arc<Field>,
    pub m: usize,
    pub params: Option<ParamsLine>,
    pub subspaces: BTreeMap<String, Subspace>,
    pub maps: BTreeMap<String, LinearMap>,
    /// Member names, sorted.
    pub collections: BTreeMap<String, Vec<String>>,
    pub states: BTreeSet<(String, String)>,
    pub witnesses: BTreeMap<(String, String), Vec<WitnessPart>>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s != "->" && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.'".contains(c))
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn split(number: usize, text: &'a str) -> Self {
        let text = text.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &text[s..]));
        }
        Line { number, tokens }
    }

    fn err(&self, token: usize, message: impl Into<String>) -> Error {
        let column = self.tokens.get(token).or(self.tokens.last()).map_or(1, |t| t.0);
        err(self.number, column, message)
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n {
            return Err(self.err(
                self.tokens.len().min(n),
                format!("`{}` takes {} argument(s)", self.tokens[0].1, n - 1),
            ));
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(&self, i: usize) -> Result<T> {
        self.tokens[i]
            .1
            .parse()
            .map_err(|_| self.err(i, format!("expected a number, found {:?}", self.tokens[i].1)))
    }

    fn name(&self, i: usize) -> Result<&'a str> {
        let s = self.tokens.get(i).ok_or_else(|| self.err(i, "missing name"))?.1;
        if !valid_name(s) {
            return Err(self.err(i, format!("invalid name {s:?}")));
        }
        Ok(s)
    }
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<&Line<'a>> {
        while self.pos < self.lines.len() {
            self.pos += 1;
            if !self.lines[self.pos - 1].tokens.is_empty() {
                return Some(&self.lines[self.pos - 1]);
            }
        }
        None
    }

    fn last_line(&self) -> usize {
        self.lines.len().max(1)
    }

    fn header(&mut self, keyword: &str, args: usize) -> Result<&Line<'a>> {
        let eof = self.last_line();
        let line = self
            .next()
            .ok_or_else(|| err(eof, 1, format!("expected `{keyword}`, found end of file")))?;
        if line.tokens[0].1 != keyword {
            return Err(line.err(0, format!("expected `{keyword}`, found {:?}", line.tokens[0].1)));
        }
        line.arity(args + 1)?;
        Ok(line)
    }

    /// `row` lines up to `end`, each of length `m`.
    fn block(&mut self, field: &Field, m: usize, what: &str, start: usize) -> Result<Vec<Vec<u32>>> {
        let mut rows = Vec::new();
        loop {
            let eof = self.last_line();
            let line = self
                .next()
                .ok_or_else(|| err(eof, 1, format!("{what} opened at line {start} has no `end`")))?;
            match line.tokens[0].1 {
                "end" => {
                    line.arity(1)?;
                    return Ok(rows);
                }
                "row" => {
                    if line.tokens.len() != m + 1 {
                        return Err(line.err(
                            line.tokens.len().min(m + 1),
                            format!("row has {} entries, ambient dimension is {m}", line.tokens.len() - 1),
                        ));
                    }
                    let mut row = Vec::with_capacity(m);
                    for i in 1..=m {
                        let v: u32 = line.number(i)?;
                        if v >= field.order() {
                            return Err(line.err(i, format!("{v} is not an element of GF({})", field.order())));
                        }
                        row.push(v);
                    }
                    rows.push(row);
                }
                other => return Err(line.err(0, format!("expected `row` or `end`, found {other:?}"))),
            }
        }
    }
}

/// Parses a document; every error carries a line and column.
pub fn parse_fsc(text: &str) -> Result<FscDocument> {
    let mut p = Parser {
        lines: text.lines().enumerate().map(|(i, l)| Line::split(i + 1, l)).collect(),
        pos: 0,
    };
    let line = p.header("FSC", 1)?;
    let version: u32 = line.number(1)?;
    if version != 1 {
        return Err(line.err(1, format!("unsupported version {version}")));
    }
    let line = p.header("field", 2)?;
    let (pc, e): (u32, u32) = (line.number(1)?, line.number(2)?);
    let field = Arc::new(Field::new(pc, e).map_err(|x| line.err(1, format!("unknown field order: {x}")))?);
    let line = p.header("ambient", 1)?;
    let m: usize = line.number(1)?;
    if m == 0 {
        return Err(line.err(1, "ambient dimension must be positive"));
    }
    let mut doc = FscDocument {
        field: field.clone(),
        m,
        params: None,
        subspaces: BTreeMap::new(),
        maps: BTreeMap::new(),
        collections: BTreeMap::new(),
        states: BTreeSet::new(),
        witnesses: BTreeMap::new(),
    };
    let mut code_params = None;
    while let Some(line) = p.next() {
        let number = line.number;
        let keyword = line.tokens[0].1;
        let defined = |doc: &FscDocument, name: &str| {
            doc.subspaces.contains_key(name) || doc.maps.contains_key(name) || doc.collections.contains_key(name)
        };
        match keyword {
            "params" => {
                line.arity(6)?;
                if doc.params.is_some() {
                    return Err(line.err(0, "duplicate `params` line"));
                }
                let v: Vec<usize> = (1..=5).map(|i| line.number(i)).collect::<Result<_>>()?;
                let pl = ParamsLine {
                    n: v[0],
                    k: v[1],
                    r: v[2],
                    alpha: v[3],
                    beta: v[4],
                };
                let cp = CodeParams::new(m, pl.n, pl.k, pl.r, pl.alpha, pl.beta, field.order())
                    .map_err(|x| line.err(1, x.to_string()))?;
                code_params = Some(cp);
                doc.params = Some(pl);
            }
            "subspace" | "map" => {
                line.arity(2)?;
                let name = line.name(1)?.to_string();
                if defined(&doc, &name) {
                    return Err(line.err(1, format!("{name:?} is already defined")));
                }
                let rows = p.block(&field, m, keyword, number)?;
                if keyword == "subspace" {
                    let s = Subspace::from_rows(&field, m, rows).map_err(|x| err(number, 1, x.to_string()))?;
                    doc.subspaces.insert(name, s);
                } else {
                    if rows.len() != m {
                        return Err(err(
                            number,
                            1,
                            format!("map {name:?} has {} rows, expected {m}", rows.len()),
                        ));
                    }
                    let map = LinearMap::new(&field, rows)
                        .map_err(|_| err(number, 1, format!("map {name:?} is not invertible")))?;
                    doc.maps.insert(name, map);
                }
            }
            "collection" => {
                if line.tokens.len() < 2 {
                    return Err(line.err(0, "`collection` needs a name"));
                }
                let name = line.name(1)?.to_string();
                if defined(&doc, &name) {
                    return Err(line.err(1, format!("{name:?} is already defined")));
                }
                let mut members = Vec::new();
                for i in 2..line.tokens.len() {
                    let s = line.name(i)?;
                    if !doc.subspaces.contains_key(s) {
                        return Err(line.err(i, format!("undefined subspace {s:?}")));
                    }
                    members.push(s.to_string());
                }
                if let Some(cp) = &code_params {
                    if members.len() != cp.n - 1 {
                        return Err(line.err(
                            0,
                            format!("collection has {} members, n - 1 = {}", members.len(), cp.n - 1),
                        ));
                    }
                    if let Some(i) = members.iter().position(|s| doc.subspaces[s].dim() != cp.alpha) {
                        return Err(line.err(i + 2, format!("member dimension differs from alpha = {}", cp.alpha)));
                    }
                }
                members.sort();
                doc.collections.insert(name, members);
            }
            "state" | "witness" => {
                if line.tokens.len() < 4 || line.tokens[2].1 != "->" {
                    return Err(line.err(0, format!("expected `{keyword} COLLECTION -> SUBSPACE`")));
                }
                let c = line.name(1)?.to_string();
                let u = line.name(3)?.to_string();
                if !doc.collections.contains_key(&c) {
                    return Err(line.err(1, format!("undefined collection {c:?}")));
                }
                if !doc.subspaces.contains_key(&u) {
                    return Err(line.err(3, format!("undefined subspace {u:?}")));
                }
                if keyword == "state" {
                    line.arity(4)?;
                    if let Some(cp) = &code_params {
                        if doc.subspaces[&u].dim() != cp.alpha {
                            return Err(line.err(3, format!("newcomer dimension differs from alpha = {}", cp.alpha)));
                        }
                    }
                    doc.states.insert((c, u));
                    continue;
                }
                let key = (c, u);
                if !doc.states.contains(&key) {
                    return Err(line.err(1, "witness for an undeclared state"));
                }
                if doc.witnesses.contains_key(&key) {
                    return Err(line.err(1, "duplicate witness"));
                }
                let mut parts = Vec::new();
                for i in 4..line.tokens.len() {
                    let (h, w) = line.tokens[i]
                        .1
                        .split_once(':')
                        .ok_or_else(|| line.err(i, "expected HELPER:REPAIRSPACE"))?;
                    for s in [h, w] {
                        if !valid_name(s) || !doc.subspaces.contains_key(s) {
                            return Err(line.err(i, format!("undefined subspace {s:?}")));
                        }
                    }
                    parts.push(WitnessPart {
                        helper: h.to_string(),
                        repair_space: w.to_string(),
                    });
                }
                let witness = doc
                    .witness(&key.0, &key.1, &parts)
                    .map_err(|x| line.err(4, x.to_string()))?;
                if let Some(cp) = &code_params {
                    let collection = doc.collection(&key.0);
                    witness
                        .verify(&collection, &doc.subspaces[&key.1], cp)
                        .map_err(|x| line.err(4, x.to_string()))?;
                }
                doc.witnesses.insert(key, parts);
            }
            other => return Err(line.err(0, format!("unknown keyword {other:?}"))),
        }
    }
    Ok(doc)
}

impl FscDocument {
    pub fn new(field: Arc<Field>, m: usize) -> Self {
        FscDocument {
            field,
            m,
            params: None,
            subspaces: BTreeMap::new(),
            maps: BTreeMap::new(),
            collections: BTreeMap::new(),
            states: BTreeSet::new(),
            witnesses: BTreeMap::new(),
        }
    }

    pub fn code_params(&self) -> Result<CodeParams> {
        let p = self
            .params
            .ok_or_else(|| Error::Params("document has no `params` line".into()))?;
        CodeParams::new(self.m, p.n, p.k, p.r, p.alpha, p.beta, self.field.order())
    }

    /// The named collection as a multiset of spaces.
    pub fn collection(&self, name: &str) -> RepairingCollection {
        RepairingCollection::new(
            self.collections[name]
                .iter()
                .map(|s| self.subspaces[s].clone())
                .collect(),
        )
    }

    fn witness(&self, collection: &str, newcomer: &str, parts: &[WitnessPart]) -> Result<RepairWitness> {
        let sorted = self.collection(collection);
        let mut used = vec![false; sorted.len()];
        let mut helpers = Vec::new();
        for part in parts {
            let space = &self.subspaces[&part.helper];
            let idx = (0..sorted.len())
                .find(|&i| !used[i] && sorted.spaces()[i] == *space)
                .ok_or_else(|| {
                    Error::Precondition(format!("{} is not an unused member of {collection}", part.helper))
                })?;
            used[idx] = true;
            helpers.push(idx);
        }
        let repair_spaces = parts.iter().map(|p| self.subspaces[&p.repair_space].clone()).collect();
        RepairWitness::build(&self.subspaces[newcomer], helpers, repair_spaces)
            .ok_or_else(|| Error::Precondition("newcomer is not inside the sum of the repair spaces".into()))
    }

    /// Every named collection, with declared states and witnesses.
    pub fn to_state_set(&self) -> Result<StateSet> {
        let mut states = StateSet::new(self.code_params()?, self.field.clone())?;
        for name in self.collections.keys() {
            states.insert(self.collection(name))?;
        }
        for (c, u) in &self.states {
            let key = (c.clone(), u.clone());
            let witness = match self.witnesses.get(&key) {
                Some(parts) => Some(self.witness(c, u, parts)?),
                None => None,
            };
            states.add_transition(self.collection(c), self.subspaces[u].clone(), witness)?;
        }
        Ok(states)
    }

    /// Names members `S…`, collections `C…` and maps `L…` in canonical
    /// order, zero-padded so that name order equals canonical order.
    pub fn from_state_set(states: &StateSet, maps: &[LinearMap]) -> FscDocument {
        let params = states.params();
        let mut doc = FscDocument::new(states.field().clone(), params.m);
        doc.params = Some(ParamsLine {
            n: params.n,
            k: params.k,
            r: params.r,
            alpha: params.alpha,
            beta: params.beta,
        });
        let collections = states.collections();
        let mut spaces: BTreeSet<&Subspace> = BTreeSet::new();
        for c in &collections {
            spaces.extend(c.spaces());
            for t in states.transitions(c) {
                spaces.insert(&t.newcomer);
                if let Some(w) = &t.witness {
                    spaces.extend(&w.repair_spaces);
                }
            }
        }
        let width = |n: usize| n.saturating_sub(1).to_string().len();
        let sw = width(spaces.len());
        let names: BTreeMap<&Subspace, String> = spaces
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, format!("S{i:0sw$}")))
            .collect();
        for (s, name) in &names {
            doc.subspaces.insert(name.clone(), (*s).clone());
        }
        let mw = width(maps.len());
        for (i, map) in maps.iter().enumerate() {
            doc.maps.insert(format!("L{i:0mw$}"), map.clone());
        }
        let cw = width(collections.len());
        for (i, c) in collections.iter().enumerate() {
            let cname = format!("C{i:0cw$}");
            let mut members: Vec<String> = c.spaces().iter().map(|s| names[s].clone()).collect();
            members.sort();
            doc.collections.insert(cname.clone(), members);
            for t in states.transitions(c) {
                let key = (cname.clone(), names[&t.newcomer].clone());
                if let Some(w) = &t.witness {
                    let parts = w
                        .helpers
                        .iter()
                        .zip(&w.repair_spaces)
                        .map(|(&h, rs)| WitnessPart {
                            helper: names[&c.spaces()[h]].clone(),
                            repair_space: names[rs].clone(),
                        })
                        .collect();
                    doc.witnesses.insert(key.clone(), parts);
                }
                doc.states.insert(key);
            }
        }
        doc
    }

    /// A collections-only document.
    pub fn from_collections(field: Arc<Field>, m: usize, collections: &[(String, Vec<Subspace>)]) -> FscDocument {
        let mut doc = FscDocument::new(field, m);
        let spaces: BTreeSet<&Subspace> = collections.iter().flat_map(|c| &c.1).collect();
        let sw = spaces.len().saturating_sub(1).to_string().len();
        let names: BTreeMap<&Subspace, String> = spaces
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, format!("S{i:0sw$}")))
            .collect();
        for (s, name) in &names {
            doc.subspaces.insert(name.clone(), (*s).clone());
        }
        for (cname, members) in collections {
            let mut m: Vec<String> = members.iter().map(|s| names[s].clone()).collect();
            m.sort();
            doc.collections.insert(cname.clone(), m);
        }
        doc
    }
}

fn row_text(row: &[u32]) -> String {
    let mut s = "row".to_string();
    for v in row {
        let _ = write!(s, " {v}");
    }
    s
}

/// Canonical text of a document.
pub fn emit_fsc(doc: &FscDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "FSC 1");
    let _ = writeln!(s, "field {} {}", doc.field.characteristic(), doc.field.degree());
    let _ = writeln!(s, "ambient {}", doc.m);
    if let Some(p) = &doc.params {
        let _ = writeln!(s, "params {} {} {} {} {}", p.n, p.k, p.r, p.alpha, p.beta);
    }
    for (name, space) in &doc.subspaces {
        let _ = writeln!(s, "subspace {name}");
        for row in space.basis() {
            let _ = writeln!(s, "{}", row_text(row));
        }
        let _ = writeln!(s, "end");
    }
    for (name, map) in &doc.maps {
        let _ = writeln!(s, "map {name}");
        for row in map.matrix() {
            let _ = writeln!(s, "{}", row_text(row));
        }
        let _ = writeln!(s, "end");
    }
    for (name, members) in &doc.collections {
        let _ = write!(s, "collection {name}");
        for m in members {
            let _ = write!(s, " {m}");
        }
        s.push('\n');
    }
    for (c, u) in &doc.states {
        let _ = writeln!(s, "state {c} -> {u}");
    }
    for ((c, u), parts) in &doc.witnesses {
        let _ = write!(s, "witness {c} -> {u}");
        for p in parts {
            let _ = write!(s, " {}:{}", p.helper, p.repair_space);
        }
        s.push('\n');
    }
    s
}

/// Reads and parses a file.
pub fn read_fsc(path: &std::path::Path) -> Result<FscDocument> {
    parse_fsc(&std::fs::read_to_string(path)?)
}
