//! File formats: symbol sequences, functional CSV, tree and chain documents,
//! emitter sets and DOT export.
//!
//! Every `parse_*` function validates what it reads and never panics on
//! malformed input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::context::{Alphabet, Context, Symbol};
use crate::error::{Error, Result};
use crate::sample::FunctionalResponses;
use crate::simulate::EmitterSet;
use crate::transitions::TransitionTable;
use crate::tree::{validate, ContextTree};
use crate::tuning::ChampionChain;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads decimal symbols separated by whitespace.
///
/// The canonical form written by [`write_sequence`] is a single line with
/// single spaces; any whitespace is accepted on input.
pub fn parse_sequence(text: &str) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let s: Symbol = token
                .parse()
                .map_err(|_| parse_error(i + 1, format!("`{token}` is not a symbol in 0..=255")))?;
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(parse_error(1, "empty sequence"));
    }
    Ok(out)
}

pub fn write_sequence(x: &[Symbol]) -> String {
    let mut s = String::with_capacity(2 * x.len() + 1);
    for (i, v) in x.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
    }
    s.push('\n');
    s
}

/// Reads a `D × n` CSV without header; column `t` is the response at step `t`.
pub fn parse_functional_csv(text: &str) -> Result<FunctionalResponses> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                let v: f64 = f
                    .parse()
                    .map_err(|_| parse_error(i + 1, format!("`{f}` is not a number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(parse_error(i + 1, format!("non-finite value `{f}`")))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let dim = rows.len();
    if dim < 2 {
        return Err(parse_error(dim.max(1), "functional data needs at least 2 rows"));
    }
    let n = rows[0].len();
    if n == 0 {
        return Err(parse_error(1, "functional data has no columns"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(parse_error(i + 1, format!("expected {n} columns, found {}", rows[i].len())));
    }
    let mut data = vec![0.0; dim * n];
    for (i, row) in rows.iter().enumerate() {
        for (t, &v) in row.iter().enumerate() {
            data[t * dim + i] = v;
        }
    }
    FunctionalResponses::from_columns(dim, data)
}

pub fn write_functional_csv(y: &FunctionalResponses) -> String {
    let mut s = String::new();
    for i in 0..y.dim() {
        for t in 0..y.len() {
            if t > 0 {
                s.push(',');
            }
            write!(s, "{}", y.column(t)[i]).unwrap();
        }
        s.push('\n');
    }
    s
}

/// A context tree with optional transition rows, as stored on disk.
///
/// Contexts are listed oldest symbol first. Rows of zeros mark contexts
/// that were never observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub alphabet_size: usize,
    pub contexts: Vec<Context>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

fn table_rows(table: &TransitionTable) -> Vec<Vec<f64>> {
    (0..table.len())
        .map(|i| {
            if table.is_observed(i) {
                table.row(i).to_vec()
            } else {
                vec![0.0; table.width()]
            }
        })
        .collect()
}

fn rows_to_table(rows: &[Vec<f64>]) -> TransitionTable {
    let width = rows.first().map_or(0, Vec::len);
    let observed = rows.iter().map(|r| r.iter().any(|&v| v != 0.0)).collect();
    TransitionTable::with_flags(width, rows.to_vec(), observed)
}

fn check_model(tree: &ContextTree, table: Option<&TransitionTable>) -> Result<()> {
    if let Some(t) = table {
        if t.width() == 0 {
            return Err(Error::InvalidModel("transition rows are empty".into()));
        }
    }
    let report = validate(tree, table);
    if report.is_empty() {
        Ok(())
    } else {
        let text: Vec<String> = report.iter().map(ToString::to_string).collect();
        Err(Error::InvalidModel(text.join("; ")))
    }
}

impl TreeDocument {
    pub fn new(tree: &ContextTree, table: Option<&TransitionTable>) -> Self {
        Self {
            alphabet_size: tree.alphabet().size(),
            contexts: if tree.is_root() {
                Vec::new()
            } else {
                tree.contexts().to_vec()
            },
            transitions: table.map(table_rows),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.alphabet_size)
    }

    pub fn tree(&self) -> Result<ContextTree> {
        Ok(ContextTree::new(self.alphabet()?, self.contexts.clone()))
    }

    pub fn table(&self) -> Option<TransitionTable> {
        self.transitions.as_deref().map(rows_to_table)
    }

    /// Tree and (when present) table, after validation.
    pub fn model(&self) -> Result<(ContextTree, Option<TransitionTable>)> {
        let tree = self.tree()?;
        let table = self.table();
        check_model(&tree, table.as_ref())?;
        Ok((tree, table))
    }

    pub fn to_json(&self) -> String {
        to_json_text(self)
    }
}

/// Parses and validates a tree document.
pub fn parse_tree_document(text: &str) -> Result<TreeDocument> {
    let doc: TreeDocument = serde_json::from_str(text)?;
    doc.model()?;
    Ok(doc)
}

/// One champion tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    pub contexts: Vec<Context>,
    pub transitions: Vec<Vec<f64>>,
    pub log_likelihood: f64,
    pub cutoff: f64,
}

/// A champion chain as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub alphabet_size: usize,
    pub height: usize,
    pub c_max: f64,
    pub champions: Vec<ChainEntry>,
}

impl ChainDocument {
    pub fn new(chain: &ChampionChain) -> Self {
        let alphabet_size = chain.trees.first().map_or(1, |t| t.alphabet().size());
        let champions = chain
            .trees
            .iter()
            .zip(&chain.tables)
            .zip(chain.log_likelihoods.iter().zip(&chain.cutoffs))
            .map(|((tree, table), (&ll, &c))| ChainEntry {
                contexts: if tree.is_root() {
                    Vec::new()
                } else {
                    tree.contexts().to_vec()
                },
                transitions: table_rows(table),
                log_likelihood: ll,
                cutoff: c,
            })
            .collect();
        Self {
            alphabet_size,
            height: chain.height,
            c_max: chain.c_max,
            champions,
        }
    }

    /// Rebuilds the chain, validating every tree and the chain order.
    pub fn chain(&self) -> Result<ChampionChain> {
        let alphabet = Alphabet::new(self.alphabet_size)?;
        if self.champions.is_empty() {
            return Err(Error::InvalidModel("chain has no trees".into()));
        }
        let mut trees = Vec::with_capacity(self.champions.len());
        let mut tables = Vec::with_capacity(self.champions.len());
        for entry in &self.champions {
            let tree = ContextTree::new(alphabet, entry.contexts.clone());
            let table = rows_to_table(&entry.transitions);
            check_model(&tree, Some(&table))?;
            trees.push(tree);
            tables.push(table);
        }
        let chain = ChampionChain {
            trees,
            tables,
            log_likelihoods: self.champions.iter().map(|e| e.log_likelihood).collect(),
            cutoffs: self.champions.iter().map(|e| e.cutoff).collect(),
            c_max: self.c_max,
            height: self.height,
        };
        if let Some(v) = chain.violations().into_iter().next() {
            return Err(Error::InvalidModel(v));
        }
        Ok(chain)
    }

    pub fn to_json(&self) -> String {
        to_json_text(self)
    }

    /// `index,leaves,log_likelihood,cutoff` rows, one per champion.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,leaves,log_likelihood,cutoff\n");
        for (i, e) in self.champions.iter().enumerate() {
            let leaves = e.contexts.len().max(1);
            writeln!(s, "{i},{leaves},{},{}", e.log_likelihood, e.cutoff).unwrap();
        }
        s
    }
}

/// Parses a chain document and checks that it is a valid chain.
pub fn parse_chain_document(text: &str) -> Result<ChampionChain> {
    let doc: ChainDocument = serde_json::from_str(text)?;
    doc.chain()
}

/// Parses and checks an emitter set.
pub fn parse_emitters(text: &str) -> Result<EmitterSet> {
    let set: EmitterSet = serde_json::from_str(text)?;
    set.check()?;
    if let Some(e) = set
        .contexts
        .iter()
        .flat_map(|c| c.emitter.mean.iter())
        .chain(&set.baseline.mean)
        .find(|v| !v.is_finite())
    {
        return Err(Error::InvalidParameter(format!("non-finite emitter mean {e}")));
    }
    Ok(set)
}

pub fn write_emitters(set: &EmitterSet) -> String {
    to_json_text(set)
}

/// Indented JSON with arrays of scalars kept on one line.
fn to_json_text<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("documents serialize");
    let mut s = String::new();
    write_value(&mut s, &value, 0);
    s.push('\n');
    s
}

fn is_flat(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        serde_json::Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(s: &mut String, v: &serde_json::Value, indent: usize) {
    use serde_json::Value;
    let pad = |s: &mut String, n: usize| s.push_str(&" ".repeat(n));
    match v {
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            s.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(s, indent + 2);
                write_value(s, item, indent + 2);
                s.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            s.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(s, indent + 2);
                s.push_str(&Value::String(k.clone()).to_string());
                s.push_str(": ");
                write_value(s, item, indent + 2);
                s.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(s, indent);
            s.push('}');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            s.push('[');
            s.push_str(&parts.join(", "));
            s.push(']');
        }
        other => s.push_str(&other.to_string()),
    }
}

/// Graphviz rendering of a tree: one node per suffix trie prefix, edges
/// labelled with the symbol read further into the past.
pub fn to_dot(tree: &ContextTree, table: Option<&TransitionTable>) -> String {
    let mut nodes: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    nodes.insert(Vec::new());
    for w in tree.contexts() {
        for start in 0..w.len() {
            nodes.insert(w.symbols()[start..].to_vec());
        }
    }
    let mut nodes: Vec<Vec<Symbol>> = nodes.into_iter().collect();
    nodes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let id = |w: &[Symbol]| -> String {
        if w.is_empty() {
            "root".to_string()
        } else {
            let parts: Vec<String> = w.iter().map(u8::to_string).collect();
            format!("n_{}", parts.join("_"))
        }
    };
    let mut s = String::from("digraph context_tree {\n  node [shape=circle, label=\"\"];\n");
    for w in &nodes {
        let context = Context::from(w.as_slice());
        match tree.position(&context) {
            Some(i) => {
                let mut label = if context.is_root() {
                    "root".to_string()
                } else {
                    context.to_string()
                };
                if let Some(t) = table.filter(|t| i < t.len()) {
                    let row: Vec<String> = t.row(i).iter().map(|p| format!("{p:.3}")).collect();
                    write!(label, "\\n[{}]", row.join(", ")).unwrap();
                }
                writeln!(s, "  {} [shape=box, label=\"{label}\"];", id(w)).unwrap();
            }
            None => writeln!(s, "  {};", id(w)).unwrap(),
        }
    }
    for w in nodes.iter().filter(|w| !w.is_empty()) {
        writeln!(s, "  {} -> {} [label=\"{}\"];", id(&w[1..]), id(w), w[0]).unwrap();
    }
    s.push_str("}\n");
    s
}
