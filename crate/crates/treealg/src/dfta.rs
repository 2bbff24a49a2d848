//! Deterministic bottom-up tree automata.
//!
//! A [`Dfta`] assigns one state to every tree: leaves through the initial
//! assignment, inner nodes through a total per-symbol transition table, read
//! bottom-up. The observable output of a tree is the output value attached to
//! its state. Tables are stored densely; the row for arguments `(q_1,..,q_k)`
//! lives at the mixed-radix rank with the leftmost argument most significant.
//!
//! Besides evaluation the module provides reachability ([`Dfta::trim_reachable`]),
//! output restriction, language equivalence with minimal counterexamples
//! ([`equiv`]) and isomorphism ([`isomorphic`]). State identity is positional;
//! names are carried alongside for parsing and printing.

use crate::error::{Error, Result};
use crate::term::{check_disjoint, valid_token, Frontier, OutputSet, Signature, Tree};
use crate::util::{tuple_rank, tuples};

use std::collections::BTreeMap;

/// A deterministic bottom-up tree automaton with output values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfta {
    sig: Signature,
    frontier: Frontier,
    outputs: OutputSet,
    states: Vec<String>,
    init: Vec<usize>,       // leaf index -> state
    trans: Vec<Vec<usize>>, // symbol index -> dense table over state tuples
    out: Vec<usize>,        // state -> output index
}

impl Dfta {
    /// Builds and validates an automaton. The transition table for a symbol of
    /// arity `k` must have exactly `states^k` entries in tuple-rank order.
    pub fn new(
        sig: Signature,
        frontier: Frontier,
        outputs: OutputSet,
        states: Vec<String>,
        init: Vec<usize>,
        trans: Vec<Vec<usize>>,
        out: Vec<usize>,
    ) -> Result<Self> {
        check_disjoint(&sig, &frontier)?;
        if states.is_empty() {
            return Err(Error::invalid("an automaton needs at least one state"));
        }
        for name in &states {
            if !valid_token(name) {
                return Err(Error::invalid(format!("invalid state name {name:?}")));
            }
        }
        for (i, name) in states.iter().enumerate() {
            if states[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate state name {name:?}")));
            }
        }
        let n = states.len();
        if init.len() != frontier.len() {
            return Err(Error::invalid(format!(
                "initial assignment covers {} leaves, frontier has {}",
                init.len(),
                frontier.len()
            )));
        }
        if let Some(q) = init.iter().find(|&&q| q >= n) {
            return Err(Error::invalid(format!(
                "initial state index {q} out of range"
            )));
        }
        if trans.len() != sig.len() {
            return Err(Error::invalid(format!(
                "transition tables cover {} symbols, signature has {}",
                trans.len(),
                sig.len()
            )));
        }
        for (sym, table) in trans.iter().enumerate() {
            let rows = n.pow(sig.arity(sym) as u32);
            if table.len() != rows {
                return Err(Error::invalid(format!(
                    "transition table for {} has {} rows, needs {} (one per argument tuple)",
                    sig.name(sym),
                    table.len(),
                    rows
                )));
            }
            if let Some(q) = table.iter().find(|&&q| q >= n) {
                return Err(Error::invalid(format!(
                    "transition target index {q} out of range for {}",
                    sig.name(sym)
                )));
            }
        }
        if out.len() != n {
            return Err(Error::invalid(format!(
                "output assignment covers {} states, automaton has {n}",
                out.len()
            )));
        }
        if let Some(v) = out.iter().find(|&&v| v >= outputs.len()) {
            return Err(Error::invalid(format!("output index {v} out of range")));
        }
        Ok(Dfta {
            sig,
            frontier,
            outputs,
            states,
            init,
            trans,
            out,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
    }

    pub fn outputs(&self) -> &OutputSet {
        &self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn index_of_state(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// State assigned to a leaf.
    pub fn init_of(&self, leaf: usize) -> usize {
        self.init[leaf]
    }

    /// Transition target for `sym` applied to argument states `args`.
    pub fn trans_of(&self, sym: usize, args: &[usize]) -> usize {
        self.trans[sym][tuple_rank(args, self.states.len())]
    }

    /// Dense transition table for one symbol, in tuple-rank order.
    pub fn trans_table(&self, sym: usize) -> &[usize] {
        &self.trans[sym]
    }

    /// Output index attached to a state.
    pub fn out_of(&self, q: usize) -> usize {
        self.out[q]
    }

    /// Output value attached to a state.
    pub fn out_value(&self, q: usize) -> &str {
        self.outputs.value(self.out[q])
    }

    /// Runs the automaton bottom-up and returns the state of the root.
    pub fn eval(&self, tree: &Tree) -> Result<usize> {
        match tree {
            Tree::Leaf(l) => {
                if *l >= self.frontier.len() {
                    return Err(Error::invalid(format!("leaf index {l} out of range")));
                }
                Ok(self.init[*l])
            }
            Tree::Node(sym, children) => {
                if *sym >= self.sig.len() {
                    return Err(Error::invalid(format!("symbol index {sym} out of range")));
                }
                if children.len() != self.sig.arity(*sym) {
                    return Err(Error::invalid(format!(
                        "symbol {} expects {} argument(s), found {}",
                        self.sig.name(*sym),
                        self.sig.arity(*sym),
                        children.len()
                    )));
                }
                let args: Vec<usize> = children
                    .iter()
                    .map(|c| self.eval(c))
                    .collect::<Result<_>>()?;
                Ok(self.trans_of(*sym, &args))
            }
        }
    }

    /// Output value of a tree: the value attached to its state.
    pub fn output_of(&self, tree: &Tree) -> Result<&str> {
        Ok(self.out_value(self.eval(tree)?))
    }

    /// States reachable by some tree, in discovery order: first the initial
    /// states in frontier order, then round by round the images of argument
    /// tuples over already-discovered states (symbols in signature order,
    /// tuples in rank order over discovery positions).
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.states.len()];
        for &q in &self.init {
            if !seen[q] {
                seen[q] = true;
                order.push(q);
            }
        }
        loop {
            let snapshot = order.len();
            for sym in 0..self.sig.len() {
                for digits in tuples(snapshot, self.sig.arity(sym)) {
                    let args: Vec<usize> = digits.iter().map(|&d| order[d]).collect();
                    let q = self.trans_of(sym, &args);
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                    }
                }
            }
            if order.len() == snapshot {
                return order;
            }
        }
    }

    /// True iff every state is reachable.
    pub fn is_reachable(&self) -> bool {
        self.reachable_states().len() == self.states.len()
    }

    /// True iff every output value is attached to some state.
    pub fn out_surjective(&self) -> bool {
        (0..self.outputs.len()).all(|v| self.out.contains(&v))
    }

    /// Restriction to the reachable states, reordered into discovery order.
    /// Evaluates every tree to the same output as the original automaton.
    pub fn trim_reachable(&self) -> Dfta {
        let order = self.reachable_states();
        let mut pos = vec![usize::MAX; self.states.len()];
        for (i, &q) in order.iter().enumerate() {
            pos[q] = i;
        }
        let states: Vec<String> = order.iter().map(|&q| self.states[q].clone()).collect();
        let init: Vec<usize> = self.init.iter().map(|&q| pos[q]).collect();
        let out: Vec<usize> = order.iter().map(|&q| self.out[q]).collect();
        let mut trans = Vec::with_capacity(self.sig.len());
        for sym in 0..self.sig.len() {
            let mut table = Vec::with_capacity(order.len().pow(self.sig.arity(sym) as u32));
            for digits in tuples(order.len(), self.sig.arity(sym)) {
                let args: Vec<usize> = digits.iter().map(|&d| order[d]).collect();
                // images of reachable tuples are reachable, so `pos` is defined
                table.push(pos[self.trans_of(sym, &args)]);
            }
            trans.push(table);
        }
        Dfta::new(
            self.sig.clone(),
            self.frontier.clone(),
            self.outputs.clone(),
            states,
            init,
            trans,
            out,
        )
        .expect("trimming preserves validity")
    }

    /// Drops output values outside the image of the output assignment,
    /// keeping the declared order of the remaining values.
    pub fn restrict_outputs(&self) -> Dfta {
        let used: Vec<usize> = (0..self.outputs.len())
            .filter(|v| self.out.contains(v))
            .collect();
        let mut new_idx = vec![usize::MAX; self.outputs.len()];
        for (i, &v) in used.iter().enumerate() {
            new_idx[v] = i;
        }
        let outputs = OutputSet::new(used.iter().map(|&v| self.outputs.value(v)))
            .expect("a nonempty subset of a valid output set is valid");
        let out: Vec<usize> = self.out.iter().map(|&v| new_idx[v]).collect();
        Dfta::new(
            self.sig.clone(),
            self.frontier.clone(),
            outputs,
            self.states.clone(),
            self.init.clone(),
            self.trans.clone(),
            out,
        )
        .expect("output restriction preserves validity")
    }
}

/// Index translation between two automata sharing alphabets by name.
pub(crate) struct Translation {
    pub sym: Vec<usize>,  // a's symbol index -> b's
    pub leaf: Vec<usize>, // a's leaf index -> b's
}

/// Matches two signature/frontier pairs up to reordering; errors if the
/// name/arity sets differ.
pub(crate) fn translate_alphabets(
    sig_a: &Signature,
    fr_a: &Frontier,
    sig_b: &Signature,
    fr_b: &Frontier,
) -> Result<Translation> {
    if sig_a.len() != sig_b.len() || fr_a.len() != fr_b.len() {
        return Err(Error::invalid("automata use different alphabets"));
    }
    let mut sym = Vec::with_capacity(sig_a.len());
    for (name, arity) in sig_a.iter() {
        match sig_b.index_of(name) {
            Some(s) if sig_b.arity(s) == arity => sym.push(s),
            _ => {
                return Err(Error::invalid(format!(
                    "automata use different alphabets: symbol {name}/{arity} missing on one side"
                )))
            }
        }
    }
    let mut leaf = Vec::with_capacity(fr_a.len());
    for name in fr_a.iter() {
        match fr_b.index_of(name) {
            Some(l) => leaf.push(l),
            None => {
                return Err(Error::invalid(format!(
                    "automata use different alphabets: leaf {name} missing on one side"
                )))
            }
        }
    }
    Ok(Translation { sym, leaf })
}

/// A tree on which two automata disagree, with both output values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub tree: Tree, // indices in the left automaton's alphabet
    pub left: String,
    pub right: String,
}

/// Decides language equivalence. Returns `None` when both automata give every
/// tree the same output, otherwise a counterexample of minimal height (ties
/// broken by rendered text).
///
/// The automata must share alphabets and output sets; states may differ.
pub fn equiv(a: &Dfta, b: &Dfta) -> Result<Option<Counterexample>> {
    let tr = translate_alphabets(a.sig(), a.frontier(), b.sig(), b.frontier())?;
    if !a.outputs().same_values(b.outputs()) {
        return Err(Error::invalid(
            "automata use different output sets; equivalence compares output values",
        ));
    }

    // Synchronized exploration of the product. A state pair discovered in
    // round r has a minimal witness tree of height exactly r, so checking
    // pairs round by round finds a minimal-height counterexample first.
    let mut witness: BTreeMap<(usize, usize), Tree> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let mut round: BTreeMap<(usize, usize), (String, Tree)> = BTreeMap::new();
    // the height-0 round covers leaves and nullary symbols alike
    let mut atoms: Vec<(usize, usize, Tree)> = Vec::new();
    for (l, _) in a.frontier().iter().enumerate() {
        atoms.push((a.init_of(l), b.init_of(tr.leaf[l]), Tree::Leaf(l)));
    }
    for sym in 0..a.sig().len() {
        if a.sig().arity(sym) == 0 {
            let pair = (a.trans_of(sym, &[]), b.trans_of(tr.sym[sym], &[]));
            atoms.push((pair.0, pair.1, Tree::Node(sym, Vec::new())));
        }
    }
    for (qa, qb, tree) in atoms {
        let pair = (qa, qb);
        if witness.contains_key(&pair) {
            continue;
        }
        let text = tree.render(a.sig(), a.frontier());
        match round.get(&pair) {
            Some((best, _)) if *best <= text => {}
            _ => {
                round.insert(pair, (text, tree));
            }
        }
    }

    loop {
        // check this round's fresh pairs for disagreement
        let mut bad: Option<(String, Tree, usize, usize)> = None;
        for (&(qa, qb), (text, tree)) in &round {
            if a.out_value(qa) != b.out_value(qb) {
                match &bad {
                    Some((best, ..)) if best <= text => {}
                    _ => bad = Some((text.clone(), tree.clone(), qa, qb)),
                }
            }
        }
        if let Some((_, tree, qa, qb)) = bad {
            return Ok(Some(Counterexample {
                tree,
                left: a.out_value(qa).to_string(),
                right: b.out_value(qb).to_string(),
            }));
        }
        for (pair, (_, tree)) in std::mem::take(&mut round) {
            witness.insert(pair, tree);
            pairs.push(pair);
        }

        let snapshot = pairs.len();
        for sym in 0..a.sig().len() {
            for digits in tuples(snapshot, a.sig().arity(sym)) {
                let (args_a, args_b): (Vec<usize>, Vec<usize>) =
                    digits.iter().map(|&d| pairs[d]).unzip();
                let pair = (a.trans_of(sym, &args_a), b.trans_of(tr.sym[sym], &args_b));
                if witness.contains_key(&pair) {
                    continue;
                }
                let children: Vec<Tree> = args_a
                    .iter()
                    .zip(&args_b)
                    .map(|(&qa, &qb)| witness[&(qa, qb)].clone())
                    .collect();
                let tree = Tree::Node(sym, children);
                let text = tree.render(a.sig(), a.frontier());
                match round.get(&pair) {
                    Some((best, _)) if *best <= text => {}
                    _ => {
                        round.insert(pair, (text, tree));
                    }
                }
            }
        }
        if round.is_empty() {
            return Ok(None);
        }
    }
}

/// Decides isomorphism of two reachable automata: a bijection on states that
/// matches initial assignments, transitions and output values. Returns the
/// state mapping (left index -> right index) if one exists.
pub fn isomorphic(a: &Dfta, b: &Dfta) -> Result<Option<Vec<usize>>> {
    if !a.is_reachable() || !b.is_reachable() {
        return Err(Error::invalid(
            "isomorphism is only defined for reachable automata; trim first",
        ));
    }
    let tr = translate_alphabets(a.sig(), a.frontier(), b.sig(), b.frontier())?;
    if !a.outputs().same_values(b.outputs()) {
        return Err(Error::invalid(
            "automata use different output sets; isomorphism compares output values",
        ));
    }
    if a.num_states() != b.num_states() {
        return Ok(None);
    }
    let n = a.num_states();

    // In a deterministic reachable automaton the only candidate bijection is
    // forced by synchronized exploration from the leaves.
    let mut map = vec![usize::MAX; n];
    let mut discovered: Vec<usize> = Vec::new();
    let bind = |map: &mut Vec<usize>, discovered: &mut Vec<usize>, qa: usize, qb: usize| {
        if map[qa] == usize::MAX {
            map[qa] = qb;
            discovered.push(qa);
            true
        } else {
            map[qa] == qb
        }
    };
    for (l, _) in a.frontier().iter().enumerate() {
        if !bind(
            &mut map,
            &mut discovered,
            a.init_of(l),
            b.init_of(tr.leaf[l]),
        ) {
            return Ok(None);
        }
    }
    loop {
        let snapshot = discovered.len();
        for sym in 0..a.sig().len() {
            for digits in tuples(snapshot, a.sig().arity(sym)) {
                let args_a: Vec<usize> = digits.iter().map(|&d| discovered[d]).collect();
                let args_b: Vec<usize> = args_a.iter().map(|&q| map[q]).collect();
                let qa = a.trans_of(sym, &args_a);
                let qb = b.trans_of(tr.sym[sym], &args_b);
                if !bind(&mut map, &mut discovered, qa, qb) {
                    return Ok(None);
                }
            }
        }
        if discovered.len() == snapshot {
            break;
        }
    }
    // `a` is reachable, so the map is total; verify it is a bijection and a
    // homomorphism on every tuple, not only the discovered ones.
    let mut hit = vec![false; n];
    for &qb in &map {
        if qb == usize::MAX || hit[qb] {
            return Ok(None);
        }
        hit[qb] = true;
    }
    for (qa, &qb) in map.iter().enumerate() {
        if a.out_value(qa) != b.out_value(qb) {
            return Ok(None);
        }
    }
    for sym in 0..a.sig().len() {
        for args_a in tuples(n, a.sig().arity(sym)) {
            let args_b: Vec<usize> = args_a.iter().map(|&q| map[q]).collect();
            if map[a.trans_of(sym, &args_a)] != b.trans_of(tr.sym[sym], &args_b) {
                return Ok(None);
            }
        }
    }
    Ok(Some(map))
}
