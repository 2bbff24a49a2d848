//! The line-oriented text format for automata and oracle tables.
//!
//! Files are UTF-8 with `#` comments. The first significant line names the
//! kind — `dfta`, `nfta`, `wfta rational`, `wfta bool`, or `table` — and the
//! rest is `key: value` lines plus an indented block under `trans:` (or
//! `map:` for tables):
//!
//! ```text
//! dfta
//! sig: f/2 g/1
//! frontier: x y
//! outputs: 0 1
//! states: q0 q1
//! init: x -> q0 ; y -> q1
//! out: q0 -> 0 ; q1 -> 1
//! trans:
//!   f(q0,q0) -> q0
//!   f(q0,q1) -> q1
//!   f(q1,q0) -> q1
//!   f(q1,q1) -> q0
//!   g(q0) -> q0
//!   g(q1) -> q1
//! ```
//!
//! Deterministic automata must list a transition for *every* argument tuple;
//! a missing tuple is a validation error, not an empty default.
//! Nondeterministic files write state sets in braces (`init: x -> {q0,q1}`,
//! `f(q0,q0) -> {q0}`) and a `final:` state list; unlisted tuples mean the
//! empty set, and an absent `final:` line means no final states. Weighted
//! files write vectors as `1 q0 + 0 q1` with semiring literals; unlisted
//! tuples and an absent `out:` line mean zero. Table files carry a `map:`
//! block of `tree -> value` lines, an optional `default:` value, and an
//! optional `outputs:` line restricting the values.
//!
//! Rendering is canonical — sections in a fixed order, transitions grouped by
//! signature order and then by argument rank, zero/empty entries omitted where
//! the format defaults them — so equal automata render to byte-equal files.
//!
//! Malformed lines are reported as [`Error::File`] with their line number;
//! references to undeclared names, arity mismatches, and totality violations
//! are [`Error::Invalid`].

use std::collections::{BTreeMap, BTreeSet};

use crate::dfta::Dfta;
use crate::effectful::{Nfta, WeightVector, Wfta};
use crate::error::{Error, Result};
use crate::nerode::TableOracle;
use crate::semiring::{Bool, Rational, Semiring};
use crate::term::{parse_tree, Frontier, OutputSet, Signature};
use crate::util::{tuple_unrank, tuples};

/// Any automaton the file format can carry, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automaton {
    Dfta(Dfta),
    Nfta(Nfta),
    WftaRational(Wfta<Rational>),
    WftaBool(Wfta<Bool>),
}

impl Automaton {
    pub fn kind(&self) -> &'static str {
        match self {
            Automaton::Dfta(_) => "dfta",
            Automaton::Nfta(_) => "nfta",
            Automaton::WftaRational(_) => "wfta rational",
            Automaton::WftaBool(_) => "wfta bool",
        }
    }
}

/// Any file the format can carry: an automaton or an oracle table.
#[derive(Debug, Clone)]
pub enum ParsedFile {
    Automaton(Automaton),
    Table(TableOracle),
}

impl ParsedFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedFile::Automaton(a) => a.kind(),
            ParsedFile::Table(_) => "table",
        }
    }
}

/// A file cut into its header, `key: value` lines, and block lines.
struct Sections<'a> {
    header_line: usize,
    header: &'a str,
    keyed: Vec<(usize, &'a str, &'a str)>,
    trans: Vec<(usize, &'a str)>,
    map: Vec<(usize, &'a str)>,
}

const KEYS: &[&str] = &[
    "sig", "frontier", "outputs", "states", "init", "out", "final", "default", "trans", "map",
];

fn split_sections(text: &str) -> Result<Sections<'_>> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        (!stripped.is_empty()).then_some((i + 1, stripped))
    });
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::file(1, "empty file: expected a header line"))?;
    if header.contains(':') {
        return Err(Error::file(
            header_line,
            "expected a header line (dfta, nfta, wfta rational, wfta bool, or table)",
        ));
    }
    let mut sections = Sections {
        header_line,
        header,
        keyed: Vec::new(),
        trans: Vec::new(),
        map: Vec::new(),
    };
    // which block the indented lines currently belong to
    enum Block {
        None,
        Trans,
        Map,
    }
    let mut block = Block::None;
    for (lineno, line) in lines {
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(Error::file(lineno, format!("unknown section {key:?}")));
            }
            if key == "trans" || key == "map" {
                if !value.is_empty() {
                    return Err(Error::file(
                        lineno,
                        format!("`{key}:` entries belong on their own lines"),
                    ));
                }
                block = if key == "trans" {
                    Block::Trans
                } else {
                    Block::Map
                };
            } else {
                block = Block::None;
                sections.keyed.push((lineno, key, value));
            }
        } else {
            match block {
                Block::None => {
                    return Err(Error::file(
                        lineno,
                        "expected a `key: value` line or an entry under trans:/map:",
                    ))
                }
                Block::Trans => sections.trans.push((lineno, line)),
                Block::Map => sections.map.push((lineno, line)),
            }
        }
    }
    Ok(sections)
}

impl<'a> Sections<'a> {
    /// The value of a key that may appear at most once.
    fn get(&self, key: &str) -> Result<Option<(usize, &'a str)>> {
        let mut found = None;
        for &(lineno, k, v) in &self.keyed {
            if k == key {
                if found.is_some() {
                    return Err(Error::file(lineno, format!("duplicate `{key}:` line")));
                }
                found = Some((lineno, v));
            }
        }
        Ok(found)
    }

    fn require(&self, key: &str) -> Result<(usize, &'a str)> {
        self.get(key)?
            .ok_or_else(|| Error::file(self.header_line, format!("missing `{key}:` line")))
    }

    fn forbid(&self, key: &str, kind: &str) -> Result<()> {
        if let Some((lineno, _)) = self.get(key)? {
            return Err(Error::file(
                lineno,
                format!("{kind} files have no `{key}:` line"),
            ));
        }
        Ok(())
    }
}

fn parse_signature(value: &str) -> Result<Signature> {
    let mut symbols = Vec::new();
    for item in value.split_whitespace() {
        let Some((name, arity)) = item.split_once('/') else {
            return Err(Error::invalid(format!(
                "signature entry {item:?} is not of the form name/arity"
            )));
        };
        let arity: usize = arity
            .parse()
            .map_err(|_| Error::invalid(format!("invalid arity in {item:?}")))?;
        symbols.push((name, arity));
    }
    Signature::new(symbols)
}

fn split_arrow(clause: &str, lineno: usize) -> Result<(&str, &str)> {
    match clause.split_once("->") {
        Some((lhs, rhs)) => Ok((lhs.trim(), rhs.trim())),
        None => Err(Error::file(lineno, format!("missing `->` in {clause:?}"))),
    }
}

fn clauses(value: &str, lineno: usize) -> Result<Vec<&str>> {
    value
        .split(';')
        .map(|clause| {
            let clause = clause.trim();
            if clause.is_empty() {
                Err(Error::file(lineno, "empty clause between `;` separators"))
            } else {
                Ok(clause)
            }
        })
        .collect()
}

fn leaf_index(frontier: &Frontier, name: &str, lineno: usize) -> Result<usize> {
    frontier
        .index_of(name)
        .ok_or_else(|| Error::invalid(format!("line {lineno}: unknown leaf {name:?}")))
}

fn state_index(states: &[String], name: &str, lineno: usize) -> Result<usize> {
    states
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| Error::invalid(format!("line {lineno}: unknown state {name:?}")))
}

fn state_list(value: &str) -> Vec<&str> {
    value.split_whitespace().collect()
}

/// `{q0,q1}` (spaces tolerated) to a set of state indices.
fn parse_state_set(value: &str, states: &[String], lineno: usize) -> Result<BTreeSet<usize>> {
    let inner = value
        .strip_prefix('{')
        .and_then(|v| v.strip_suffix('}'))
        .ok_or_else(|| {
            Error::file(
                lineno,
                format!("expected a state set in braces, found {value:?}"),
            )
        })?
        .trim();
    let mut set = BTreeSet::new();
    if inner.is_empty() {
        return Ok(set);
    }
    for name in inner.split(',') {
        set.insert(state_index(states, name.trim(), lineno)?);
    }
    Ok(set)
}

/// `f(q0,q1)` or a bare nullary `c` to a symbol and its argument names.
fn parse_lhs(lhs: &str, lineno: usize) -> Result<(&str, Vec<&str>)> {
    match lhs.find('(') {
        None => Ok((lhs, Vec::new())),
        Some(open) => {
            let inner = lhs[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::file(lineno, format!("missing `)` in {lhs:?}")))?
                .trim();
            let args = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            Ok((&lhs[..open], args))
        }
    }
}

fn symbol_args(
    sig: &Signature,
    states: &[String],
    lhs: &str,
    lineno: usize,
) -> Result<(usize, Vec<usize>)> {
    let (name, arg_names) = parse_lhs(lhs, lineno)?;
    let sym = sig
        .index_of(name)
        .ok_or_else(|| Error::invalid(format!("line {lineno}: unknown symbol {name:?}")))?;
    if arg_names.len() != sig.arity(sym) {
        return Err(Error::invalid(format!(
            "line {lineno}: {name} has arity {}, {} argument(s) given",
            sig.arity(sym),
            arg_names.len()
        )));
    }
    let args = arg_names
        .iter()
        .map(|a| state_index(states, a, lineno))
        .collect::<Result<_>>()?;
    Ok((sym, args))
}

/// `1 q0 + 0 q1` to a dense weight vector; the empty string is zero.
fn parse_vector<S: Semiring>(
    value: &str,
    states: &[String],
    lineno: usize,
) -> Result<WeightVector<S>> {
    let mut vector = WeightVector::zeros(states.len());
    if value.is_empty() {
        return Ok(vector);
    }
    let mut seen = vec![false; states.len()];
    for term in value.split('+') {
        let parts: Vec<&str> = term.split_whitespace().collect();
        let [literal, state] = parts[..] else {
            return Err(Error::file(
                lineno,
                format!("expected `weight state` in term {:?}", term.trim()),
            ));
        };
        let weight = S::parse_literal(literal).map_err(|e| Error::file(lineno, e.to_string()))?;
        let q = state_index(states, state, lineno)?;
        if seen[q] {
            return Err(Error::invalid(format!(
                "line {lineno}: state {state} appears twice in one vector"
            )));
        }
        seen[q] = true;
        vector.0[q] = weight;
    }
    Ok(vector)
}

fn render_args(names: &mut String, sig: &Signature, states: &[String], sym: usize, args: &[usize]) {
    names.push_str(sig.name(sym));
    if !args.is_empty() {
        names.push('(');
        for (i, &q) in args.iter().enumerate() {
            if i > 0 {
                names.push(',');
            }
            names.push_str(&states[q]);
        }
        names.push(')');
    }
}

fn build_dfta(s: &Sections) -> Result<Dfta> {
    s.forbid("final", "dfta")?;
    s.forbid("default", "dfta")?;
    if !s.map.is_empty() {
        return Err(Error::file(s.map[0].0, "dfta files have no `map:` block"));
    }
    let sig = parse_signature(s.require("sig")?.1)?;
    let frontier = Frontier::new(state_list(s.require("frontier")?.1))?;
    let outputs = OutputSet::new(state_list(s.require("outputs")?.1))?;
    let states: Vec<String> = state_list(s.require("states")?.1)
        .into_iter()
        .map(str::to_string)
        .collect();
    let n = states.len();

    let (init_line, init_value) = s.require("init")?;
    let mut init: Vec<Option<usize>> = vec![None; frontier.len()];
    for clause in clauses(init_value, init_line)? {
        let (lhs, rhs) = split_arrow(clause, init_line)?;
        let leaf = leaf_index(&frontier, lhs, init_line)?;
        if init[leaf].is_some() {
            return Err(Error::invalid(format!(
                "line {init_line}: leaf {lhs} assigned twice"
            )));
        }
        init[leaf] = Some(state_index(&states, rhs, init_line)?);
    }
    let init: Vec<usize> = init
        .into_iter()
        .enumerate()
        .map(|(l, q)| {
            q.ok_or_else(|| {
                Error::invalid(format!("no initial state for leaf {}", frontier.name(l)))
            })
        })
        .collect::<Result<_>>()?;

    let (out_line, out_value) = s.require("out")?;
    let mut out: Vec<Option<usize>> = vec![None; n];
    for clause in clauses(out_value, out_line)? {
        let (lhs, rhs) = split_arrow(clause, out_line)?;
        let q = state_index(&states, lhs, out_line)?;
        if out[q].is_some() {
            return Err(Error::invalid(format!(
                "line {out_line}: state {lhs} assigned an output twice"
            )));
        }
        let value = outputs.index_of(rhs).ok_or_else(|| {
            Error::invalid(format!("line {out_line}: unknown output value {rhs:?}"))
        })?;
        out[q] = Some(value);
    }
    let out: Vec<usize> = out
        .into_iter()
        .enumerate()
        .map(|(q, v)| {
            v.ok_or_else(|| Error::invalid(format!("no output value for state {}", states[q])))
        })
        .collect::<Result<_>>()?;

    let mut maps: Vec<BTreeMap<Vec<usize>, usize>> = vec![BTreeMap::new(); sig.len()];
    for &(lineno, line) in &s.trans {
        let (lhs, rhs) = split_arrow(line, lineno)?;
        let (sym, args) = symbol_args(&sig, &states, lhs, lineno)?;
        let target = state_index(&states, rhs, lineno)?;
        if maps[sym].insert(args, target).is_some() {
            return Err(Error::invalid(format!(
                "line {lineno}: transition {lhs} defined twice"
            )));
        }
    }
    let mut trans = Vec::with_capacity(sig.len());
    for (sym, map) in maps.iter().enumerate() {
        let mut table = Vec::with_capacity(n.pow(sig.arity(sym) as u32));
        for args in tuples(n, sig.arity(sym)) {
            match map.get(&args) {
                Some(&target) => table.push(target),
                None => {
                    let mut missing = String::new();
                    render_args(&mut missing, &sig, &states, sym, &args);
                    return Err(Error::invalid(format!(
                        "transition table is missing {missing}"
                    )));
                }
            }
        }
        trans.push(table);
    }
    Dfta::new(sig, frontier, outputs, states, init, trans, out)
}

fn build_nfta(s: &Sections) -> Result<Nfta> {
    s.forbid("outputs", "nfta")?;
    s.forbid("out", "nfta")?;
    s.forbid("default", "nfta")?;
    if !s.map.is_empty() {
        return Err(Error::file(s.map[0].0, "nfta files have no `map:` block"));
    }
    let sig = parse_signature(s.require("sig")?.1)?;
    let frontier = Frontier::new(state_list(s.require("frontier")?.1))?;
    let states: Vec<String> = state_list(s.require("states")?.1)
        .into_iter()
        .map(str::to_string)
        .collect();

    let (init_line, init_value) = s.require("init")?;
    let mut init: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); frontier.len()];
    let mut seen = vec![false; frontier.len()];
    for clause in clauses(init_value, init_line)? {
        let (lhs, rhs) = split_arrow(clause, init_line)?;
        let leaf = leaf_index(&frontier, lhs, init_line)?;
        if seen[leaf] {
            return Err(Error::invalid(format!(
                "line {init_line}: leaf {lhs} assigned twice"
            )));
        }
        seen[leaf] = true;
        init[leaf] = parse_state_set(rhs, &states, init_line)?;
    }

    let final_states = match s.get("final")? {
        Some((lineno, value)) => state_list(value)
            .into_iter()
            .map(|name| state_index(&states, name, lineno))
            .collect::<Result<_>>()?,
        None => BTreeSet::new(),
    };

    let mut trans: Vec<BTreeMap<Vec<usize>, BTreeSet<usize>>> = vec![BTreeMap::new(); sig.len()];
    for &(lineno, line) in &s.trans {
        let (lhs, rhs) = split_arrow(line, lineno)?;
        let (sym, args) = symbol_args(&sig, &states, lhs, lineno)?;
        let image = parse_state_set(rhs, &states, lineno)?;
        if trans[sym].contains_key(&args) {
            return Err(Error::invalid(format!(
                "line {lineno}: transition {lhs} defined twice"
            )));
        }
        // an explicitly empty image is the same as an absent line
        if !image.is_empty() {
            trans[sym].insert(args, image);
        }
    }
    Nfta::new(sig, frontier, states, init, trans, final_states)
}

fn build_wfta<S: Semiring>(s: &Sections) -> Result<Wfta<S>> {
    s.forbid("outputs", "wfta")?;
    s.forbid("final", "wfta")?;
    s.forbid("default", "wfta")?;
    if !s.map.is_empty() {
        return Err(Error::file(s.map[0].0, "wfta files have no `map:` block"));
    }
    let sig = parse_signature(s.require("sig")?.1)?;
    let frontier = Frontier::new(state_list(s.require("frontier")?.1))?;
    let states: Vec<String> = state_list(s.require("states")?.1)
        .into_iter()
        .map(str::to_string)
        .collect();
    let n = states.len();

    let (init_line, init_value) = s.require("init")?;
    let mut init: Vec<WeightVector<S>> = vec![WeightVector::zeros(n); frontier.len()];
    let mut seen = vec![false; frontier.len()];
    for clause in clauses(init_value, init_line)? {
        let (lhs, rhs) = split_arrow(clause, init_line)?;
        let leaf = leaf_index(&frontier, lhs, init_line)?;
        if seen[leaf] {
            return Err(Error::invalid(format!(
                "line {init_line}: leaf {lhs} assigned twice"
            )));
        }
        seen[leaf] = true;
        init[leaf] = parse_vector(rhs, &states, init_line)?;
    }

    let out = match s.get("out")? {
        Some((lineno, value)) => parse_vector(value, &states, lineno)?,
        None => WeightVector::zeros(n),
    };

    let mut rows: Vec<BTreeMap<Vec<usize>, WeightVector<S>>> = vec![BTreeMap::new(); sig.len()];
    for &(lineno, line) in &s.trans {
        let (lhs, rhs) = split_arrow(line, lineno)?;
        let (sym, args) = symbol_args(&sig, &states, lhs, lineno)?;
        let row = parse_vector(rhs, &states, lineno)?;
        if rows[sym].insert(args, row).is_some() {
            return Err(Error::invalid(format!(
                "line {lineno}: transition {lhs} defined twice"
            )));
        }
    }
    let mut trans = Vec::with_capacity(sig.len());
    for (sym, sym_rows) in rows.iter().enumerate() {
        let mut matrix = vec![S::zero(); n.pow(sig.arity(sym) as u32) * n];
        for (args, row) in sym_rows {
            let base = crate::util::tuple_rank(args, n) * n;
            matrix[base..base + n].clone_from_slice(&row.0);
        }
        trans.push(matrix);
    }
    Wfta::new(sig, frontier, states, init, trans, out)
}

fn build_table(s: &Sections) -> Result<TableOracle> {
    s.forbid("states", "table")?;
    s.forbid("init", "table")?;
    s.forbid("out", "table")?;
    s.forbid("final", "table")?;
    if !s.trans.is_empty() {
        return Err(Error::file(
            s.trans[0].0,
            "table files have no `trans:` block",
        ));
    }
    let sig = parse_signature(s.require("sig")?.1)?;
    let frontier = Frontier::new(state_list(s.require("frontier")?.1))?;
    let outputs = match s.get("outputs")? {
        Some((_, value)) => Some(OutputSet::new(state_list(value))?),
        None => None,
    };
    let check_value = |value: &str, lineno: usize| -> Result<()> {
        if let Some(outs) = &outputs {
            if outs.index_of(value).is_none() {
                return Err(Error::invalid(format!(
                    "line {lineno}: value {value:?} is not among the declared outputs"
                )));
            }
        }
        Ok(())
    };
    let default = match s.get("default")? {
        Some((lineno, value)) => {
            check_value(value, lineno)?;
            Some(value.to_string())
        }
        None => None,
    };
    let mut entries = Vec::with_capacity(s.map.len());
    for &(lineno, line) in &s.map {
        let (lhs, rhs) = split_arrow(line, lineno)?;
        let tree =
            parse_tree(lhs, &sig, &frontier).map_err(|e| Error::file(lineno, e.to_string()))?;
        check_value(rhs, lineno)?;
        entries.push((tree, rhs.to_string()));
    }
    TableOracle::new(sig, frontier, entries, default)
}

pub fn parse_dfta(text: &str) -> Result<Dfta> {
    let s = split_sections(text)?;
    expect_header(&s, "dfta")?;
    build_dfta(&s)
}

pub fn parse_nfta(text: &str) -> Result<Nfta> {
    let s = split_sections(text)?;
    expect_header(&s, "nfta")?;
    build_nfta(&s)
}

pub fn parse_table(text: &str) -> Result<TableOracle> {
    let s = split_sections(text)?;
    expect_header(&s, "table")?;
    build_table(&s)
}

fn expect_header(s: &Sections, want: &str) -> Result<()> {
    if s.header == want {
        Ok(())
    } else {
        Err(Error::file(
            s.header_line,
            format!("expected a `{want}` file, found header {:?}", s.header),
        ))
    }
}

/// Parses any automaton file, dispatching on the header keyword.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let s = split_sections(text)?;
    match s.header {
        "dfta" => Ok(Automaton::Dfta(build_dfta(&s)?)),
        "nfta" => Ok(Automaton::Nfta(build_nfta(&s)?)),
        "wfta rational" => Ok(Automaton::WftaRational(build_wfta(&s)?)),
        "wfta bool" => Ok(Automaton::WftaBool(build_wfta(&s)?)),
        other => Err(Error::file(
            s.header_line,
            format!("unknown header {other:?}: expected dfta, nfta, wfta rational, or wfta bool"),
        )),
    }
}

/// Parses any file the format knows, automata and tables alike.
pub fn parse_file(text: &str) -> Result<ParsedFile> {
    let s = split_sections(text)?;
    if s.header == "table" {
        Ok(ParsedFile::Table(build_table(&s)?))
    } else {
        parse_automaton(text).map(ParsedFile::Automaton)
    }
}

fn push_header_sections(out: &mut String, sig: &Signature, frontier: &Frontier) {
    out.push_str("sig:");
    for (name, arity) in sig.iter() {
        out.push_str(&format!(" {name}/{arity}"));
    }
    out.push_str("\nfrontier:");
    for leaf in frontier.iter() {
        out.push_str(&format!(" {leaf}"));
    }
    out.push('\n');
}

pub fn render_dfta(a: &Dfta) -> String {
    let mut out = String::from("dfta\n");
    push_header_sections(&mut out, a.sig(), a.frontier());
    out.push_str("outputs:");
    for value in a.outputs().iter() {
        out.push_str(&format!(" {value}"));
    }
    out.push_str("\nstates:");
    for state in a.state_names() {
        out.push_str(&format!(" {state}"));
    }
    out.push_str("\ninit: ");
    for leaf in 0..a.frontier().len() {
        if leaf > 0 {
            out.push_str(" ; ");
        }
        out.push_str(&format!(
            "{} -> {}",
            a.frontier().name(leaf),
            a.state_name(a.init_of(leaf))
        ));
    }
    out.push_str("\nout: ");
    for q in 0..a.num_states() {
        if q > 0 {
            out.push_str(" ; ");
        }
        out.push_str(&format!("{} -> {}", a.state_name(q), a.out_value(q)));
    }
    out.push_str("\ntrans:\n");
    let n = a.num_states();
    for sym in 0..a.sig().len() {
        let table = a.trans_table(sym);
        for (rank, &target) in table.iter().enumerate() {
            let args = tuple_unrank(rank, n, a.sig().arity(sym));
            out.push_str("  ");
            render_args(&mut out, a.sig(), a.state_names(), sym, &args);
            out.push_str(&format!(" -> {}\n", a.state_name(target)));
        }
    }
    out
}

fn render_state_set(set: &BTreeSet<usize>, states: &[String]) -> String {
    let mut out = String::from("{");
    for (i, &q) in set.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&states[q]);
    }
    out.push('}');
    out
}

pub fn render_nfta(a: &Nfta) -> String {
    let mut out = String::from("nfta\n");
    push_header_sections(&mut out, a.sig(), a.frontier());
    out.push_str("states:");
    for state in a.state_names() {
        out.push_str(&format!(" {state}"));
    }
    out.push_str("\ninit: ");
    for leaf in 0..a.frontier().len() {
        if leaf > 0 {
            out.push_str(" ; ");
        }
        out.push_str(&format!(
            "{} -> {}",
            a.frontier().name(leaf),
            render_state_set(a.init_of(leaf), a.state_names())
        ));
    }
    out.push('\n');
    if !a.final_states().is_empty() {
        out.push_str("final:");
        for &q in a.final_states() {
            out.push_str(&format!(" {}", a.state_names()[q]));
        }
        out.push('\n');
    }
    out.push_str("trans:\n");
    for sym in 0..a.sig().len() {
        for (args, image) in a.trans_map(sym) {
            out.push_str("  ");
            render_args(&mut out, a.sig(), a.state_names(), sym, args);
            out.push_str(&format!(
                " -> {}\n",
                render_state_set(image, a.state_names())
            ));
        }
    }
    out
}

pub fn render_wfta<S: Semiring>(a: &Wfta<S>) -> String {
    let mut out = String::from("wfta ");
    out.push_str(S::NAME);
    out.push('\n');
    push_header_sections(&mut out, a.sig(), a.frontier());
    out.push_str("states:");
    for state in a.state_names() {
        out.push_str(&format!(" {state}"));
    }
    out.push_str("\ninit: ");
    for leaf in 0..a.frontier().len() {
        if leaf > 0 {
            out.push_str(" ; ");
        }
        out.push_str(&format!(
            "{} -> {}",
            a.frontier().name(leaf),
            a.init_of(leaf).render(a.state_names())
        ));
    }
    out.push('\n');
    let zero = WeightVector::<S>::zeros(a.num_states());
    if *a.out_vector() != zero {
        out.push_str(&format!(
            "out: {}\n",
            a.out_vector().render(a.state_names())
        ));
    }
    out.push_str("trans:\n");
    let n = a.num_states();
    for sym in 0..a.sig().len() {
        for args in tuples(n, a.sig().arity(sym)) {
            let row: Vec<(usize, &S)> = (0..n)
                .map(|q| (q, a.trans_weight(sym, &args, q)))
                .filter(|(_, w)| !w.is_zero())
                .collect();
            if row.is_empty() {
                continue;
            }
            out.push_str("  ");
            render_args(&mut out, a.sig(), a.state_names(), sym, &args);
            out.push_str(" ->");
            for (i, (q, w)) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str(" +");
                }
                out.push_str(&format!(" {w} {}", a.state_names()[*q]));
            }
            out.push('\n');
        }
    }
    out
}

pub fn render_table(t: &TableOracle) -> String {
    let mut out = String::from("table\n");
    push_header_sections(&mut out, t.sig(), t.frontier());
    if let Some(default) = t.default_value() {
        out.push_str(&format!("default: {default}\n"));
    }
    if !t.is_empty() {
        out.push_str("map:\n");
        for (tree, value) in t.entries() {
            out.push_str(&format!("  {tree} -> {value}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::a0;

    /// The format's own running example, transitions deliberately out of
    /// canonical order.
    const A0_TEXT: &str = "\
dfta
sig: f/2 g/1
frontier: x y
outputs: 0 1
states: q0 q1
init: x -> q0 ; y -> q1
out: q0 -> 0 ; q1 -> 1
trans:
  g(q0) -> q0
  g(q1) -> q1
  f(q0,q0) -> q0
  f(q0,q1) -> q1
  f(q1,q0) -> q1
  f(q1,q1) -> q0
";

    #[test]
    fn the_running_example_parses_to_the_parity_automaton() {
        assert_eq!(parse_dfta(A0_TEXT).unwrap(), a0());
    }

    #[test]
    fn dfta_rendering_is_canonical_and_round_trips() {
        let a = a0();
        let rendered = render_dfta(&a);
        assert_eq!(
            rendered,
            "\
dfta
sig: f/2 g/1
frontier: x y
outputs: 0 1
states: q0 q1
init: x -> q0 ; y -> q1
out: q0 -> 0 ; q1 -> 1
trans:
  f(q0,q0) -> q0
  f(q0,q1) -> q1
  f(q1,q0) -> q1
  f(q1,q1) -> q0
  g(q0) -> q0
  g(q1) -> q1
"
        );
        assert_eq!(parse_dfta(&rendered).unwrap(), a);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let commented = format!(
            "# parity of y-leaves\n\n{}\n# trailing note\n",
            A0_TEXT.replace("out: q0 -> 0 ; q1 -> 1", "out: q0 -> 0 ; q1 -> 1 # outputs")
        );
        assert_eq!(parse_dfta(&commented).unwrap(), a0());
    }

    #[test]
    fn a_missing_transition_is_a_totality_error() {
        let partial = A0_TEXT.replace("  f(q1,q0) -> q1\n", "");
        match parse_dfta(&partial) {
            Err(Error::Invalid(msg)) => assert!(msg.contains("missing f(q1,q0)"), "{msg}"),
            other => panic!("expected a totality error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_malformed_lines_report_their_positions() {
        let doubled = format!("{A0_TEXT}  g(q0) -> q1\n");
        match parse_dfta(&doubled) {
            Err(Error::Invalid(msg)) => assert!(msg.contains("line 15"), "{msg}"),
            other => panic!("expected a duplicate error, got {other:?}"),
        }
        let broken = A0_TEXT.replace("  g(q1) -> q1", "  g(q1) q1");
        match parse_dfta(&broken) {
            Err(Error::File { line: 10, .. }) => {}
            other => panic!("expected a file error on line 10, got {other:?}"),
        }
        let unknown = A0_TEXT.replace("  g(q1) -> q1", "  g(q7) -> q1");
        match parse_dfta(&unknown) {
            Err(Error::Invalid(msg)) => assert!(msg.contains("q7"), "{msg}"),
            other => panic!("expected an unknown-state error, got {other:?}"),
        }
    }

    #[test]
    fn nfta_files_default_missing_tuples_to_the_empty_set() {
        let text = "\
nfta
sig: f/2
frontier: x
states: q0 q1
init: x -> {q0,q1}
final: q1
trans:
  f(q0,q0) -> {q0}
  f(q1,q1) -> {q1}
  f(q0,q1) -> {}
";
        let a = parse_nfta(text).unwrap();
        assert_eq!(a.trans_of(0, &[0, 0]), [0].into());
        assert_eq!(a.trans_of(0, &[0, 1]), [].into());
        assert_eq!(a.trans_of(0, &[1, 0]), [].into());
        // the explicit empty image normalises away entirely
        assert_eq!(a.trans_map(0).len(), 2);
        let rendered = render_nfta(&a);
        assert_eq!(parse_nfta(&rendered).unwrap(), a);
        assert!(!rendered.contains("{}"));
    }

    #[test]
    fn nfta_final_line_is_optional() {
        let text = "\
nfta
sig: g/1
frontier: x
states: q0
init: x -> {q0}
trans:
  g(q0) -> {q0}
";
        let a = parse_nfta(text).unwrap();
        assert!(a.final_states().is_empty());
        assert_eq!(parse_nfta(&render_nfta(&a)).unwrap(), a);
    }

    #[test]
    fn wfta_rational_round_trips_with_sparse_rows() {
        let text = "\
wfta rational
sig: f/2
frontier: x
states: q0 q1
init: x -> 1 q0 + 0 q1
out: 0 q0 + 1 q1
trans:
  f(q0,q0) -> 1 q1
  f(q1,q1) -> 1 q0
";
        let Automaton::WftaRational(w) = parse_automaton(text).unwrap() else {
            panic!("expected a rational wfta");
        };
        assert_eq!(w.trans_weight(0, &[0, 0], 1), &Rational::integer(1));
        assert_eq!(w.trans_weight(0, &[0, 1], 0), &Rational::integer(0));
        let rendered = render_wfta(&w);
        assert_eq!(
            rendered,
            "\
wfta rational
sig: f/2
frontier: x
states: q0 q1
init: x -> 1 q0 + 0 q1
out: 0 q0 + 1 q1
trans:
  f(q0,q0) -> 1 q1
  f(q1,q1) -> 1 q0
"
        );
        let Automaton::WftaRational(again) = parse_automaton(&rendered).unwrap() else {
            panic!("expected a rational wfta");
        };
        assert_eq!(again, w);
    }

    #[test]
    fn negative_and_fractional_literals_parse_in_files() {
        let text = "\
wfta rational
sig: g/1
frontier: x
states: q0
init: x -> -1/2 q0
out: 2 q0
trans:
  g(q0) -> 1/3 q0
";
        let Automaton::WftaRational(w) = parse_automaton(text).unwrap() else {
            panic!("expected a rational wfta");
        };
        assert_eq!(w.init_of(0).0[0], Rational::new(-1, 2).unwrap());
        assert_eq!(w.trans_weight(0, &[0], 0), &Rational::new(1, 3).unwrap());
        assert_eq!(
            parse_automaton(&render_wfta(&w)).unwrap(),
            Automaton::WftaRational(w)
        );
    }

    #[test]
    fn an_absent_out_line_is_the_zero_vector() {
        let text = "\
wfta bool
sig: g/1
frontier: x
states: q0
init: x -> 1 q0
trans:
  g(q0) -> 1 q0
";
        let Automaton::WftaBool(w) = parse_automaton(text).unwrap() else {
            panic!("expected a boolean wfta");
        };
        assert_eq!(w.out_vector(), &WeightVector(vec![Bool(false)]));
        let rendered = render_wfta(&w);
        assert!(!rendered.contains("out:"));
        assert_eq!(parse_automaton(&rendered).unwrap(), Automaton::WftaBool(w));
    }

    #[test]
    fn table_files_carry_entries_and_defaults() {
        let text = "\
table
sig: g/1
frontier: x
outputs: 0 1
default: 0
map:
  g(g(x)) -> 1
  g(g(g(x))) -> 1
";
        let t = parse_table(text).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.default_value(), Some("0"));
        let rendered = render_table(&t);
        let again = parse_table(&rendered).unwrap();
        assert_eq!(again.default_value(), t.default_value());
        assert_eq!(
            again.entries().collect::<Vec<_>>(),
            t.entries().collect::<Vec<_>>()
        );

        let bad_value = text.replace("g(g(x)) -> 1", "g(g(x)) -> 2");
        match parse_table(&bad_value) {
            Err(Error::Invalid(msg)) => assert!(msg.contains("declared outputs"), "{msg}"),
            other => panic!("expected an outputs error, got {other:?}"),
        }
        let bad_tree = text.replace("g(g(x)) -> 1", "g(g(x)} -> 1");
        match parse_table(&bad_tree) {
            Err(Error::File { line: 7, .. }) => {}
            other => panic!("expected a file error on line 7, got {other:?}"),
        }
    }

    #[test]
    fn headers_dispatch_and_mismatches_are_rejected() {
        assert_eq!(parse_automaton(A0_TEXT).unwrap().kind(), "dfta");
        match parse_automaton("table\nsig: g/1\nfrontier: x\n") {
            Err(Error::File { .. }) => {}
            other => panic!("expected a header error, got {other:?}"),
        }
        match parse_nfta(A0_TEXT) {
            Err(Error::File { line: 1, .. }) => {}
            other => panic!("expected a header mismatch, got {other:?}"),
        }
        let ParsedFile::Table(_) =
            parse_file("table\nsig: g/1\nfrontier: x\ndefault: 0\n").unwrap()
        else {
            panic!("expected a table");
        };
    }
}
