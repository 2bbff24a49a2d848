//! Minimal automaton synthesis from a language oracle, via the Nerode
//! congruence on trees.
//!
//! Two trees are Nerode-equivalent for a tree language `L` when no context
//! tells them apart: `L(c[t]) = L(c[u])` for every context `c`. The classes of
//! that relation — when finitely many — carry an automaton structure, and it
//! is the minimal one recognising `L`. This module computes a *bounded*
//! approximation: [`nerode_classes`] enumerates all trees up to one height and
//! all contexts up to another, and splits the trees by the value matrix. The
//! bare hole `_` is itself a context of height zero, so every class is
//! constant on the language by construction.
//!
//! [`minimal_from_oracle`] then attempts to read an automaton off the table.
//! The attempt can fail in two honest ways, both reported as
//! [`Error::InsufficientHeights`]: a composite of class representatives may
//! fall outside the enumerated trees (the tree height was too small), or the
//! bounded relation may fail to be a congruence — some tabled tree changes
//! class when its subtrees are swapped for their representatives (the context
//! height was too small, and the offending context is reported). When both
//! heights reach the state count of the minimal automaton, neither failure
//! can occur and the synthesised automaton is exactly the minimal one.
//!
//! [`syntactic_equiv`] is the same congruence one monad over: words instead of
//! trees, two-sided word contexts instead of tree contexts.

use std::collections::BTreeMap;

use crate::dfta::Dfta;
use crate::error::{Error, Result};
use crate::quotient::Partition;
use crate::term::{
    enumerate_contexts_capped, enumerate_trees_capped, plug, valid_token, Context, Frontier,
    OutputSet, Signature, Tree, DEFAULT_ENUM_CAP,
};
use crate::util::tuples;

/// Anything that can answer membership-style queries: the output value of the
/// language on a given tree.
pub trait LanguageOracle {
    fn output(&self, tree: &Tree) -> Result<String>;
}

impl LanguageOracle for Dfta {
    fn output(&self, tree: &Tree) -> Result<String> {
        Ok(self.output_of(tree)?.to_string())
    }
}

/// A finite table of tree-to-value entries, optionally backed by a default
/// value for trees outside the table.
#[derive(Debug, Clone)]
pub struct TableOracle {
    sig: Signature,
    frontier: Frontier,
    entries: BTreeMap<String, String>,
    default: Option<String>,
}

impl TableOracle {
    pub fn new(
        sig: Signature,
        frontier: Frontier,
        entries: impl IntoIterator<Item = (Tree, String)>,
        default: Option<String>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (tree, value) in entries {
            tree.well_formed(&sig, &frontier)?;
            if !valid_token(&value) {
                return Err(Error::invalid(format!("invalid output value {value:?}")));
            }
            let key = tree.render(&sig, &frontier);
            if table.insert(key.clone(), value).is_some() {
                return Err(Error::invalid(format!("duplicate table entry for {key}")));
            }
        }
        if let Some(d) = &default {
            if !valid_token(d) {
                return Err(Error::invalid(format!("invalid default value {d:?}")));
            }
        }
        Ok(TableOracle {
            sig,
            frontier,
            entries: table,
            default,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn default_value(&self) -> Option<&str> {
        self.default.as_deref()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl LanguageOracle for TableOracle {
    fn output(&self, tree: &Tree) -> Result<String> {
        tree.well_formed(&self.sig, &self.frontier)?;
        let key = tree.render(&self.sig, &self.frontier);
        match self
            .entries
            .get(&key)
            .map(String::as_str)
            .or(self.default.as_deref())
        {
            Some(v) => Ok(v.to_string()),
            None => Err(Error::invalid(format!(
                "the oracle table has no entry for {key} and no default value"
            ))),
        }
    }
}

/// Which enumerated contexts take part in the separation.
///
/// Multi-hole contexts plug the *same* tree into every hole; in the limit the
/// two modes induce the same relation, but at bounded heights the single-hole
/// restriction can be coarser (and is cheaper).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextMode {
    MultiHole,
    SingleHole,
}

/// The outcome of a bounded Nerode refinement: the enumerated trees, their
/// class assignment, and the contexts that produced it.
#[derive(Debug, Clone)]
pub struct NerodeTable {
    trees: Vec<Tree>,
    class_of: Vec<usize>,
    num_classes: usize,
    /// One tree index per class: the enumeration-first member, which is also
    /// one of minimal height.
    representatives: Vec<usize>,
    /// The oracle's value on each class (the bare-hole column of the matrix).
    class_values: Vec<String>,
    contexts_used: Vec<Context>,
    /// Canonical render of every tabled tree, for composite lookups.
    index: BTreeMap<String, usize>,
}

impl NerodeTable {
    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Class of the `i`-th enumerated tree.
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn representative(&self, class: usize) -> &Tree {
        &self.trees[self.representatives[class]]
    }

    pub fn class_value(&self, class: usize) -> &str {
        &self.class_values[class]
    }

    pub fn contexts_used(&self) -> &[Context] {
        &self.contexts_used
    }

    /// Looks a tree up by its canonical render.
    pub fn lookup(&self, rendered: &str) -> Option<usize> {
        self.index.get(rendered).copied()
    }

    /// Always true: the table only certifies behaviour up to the heights it
    /// was built with. Equality of classes is evidence of equivalence, not
    /// proof, unless the heights reach the minimal automaton's state count.
    pub fn is_bounded(&self) -> bool {
        true
    }
}

/// Bounded Nerode refinement with the default enumeration budget.
pub fn nerode_classes<O: LanguageOracle + ?Sized>(
    oracle: &O,
    sig: &Signature,
    frontier: &Frontier,
    tree_height: usize,
    ctx_height: usize,
    mode: ContextMode,
) -> Result<NerodeTable> {
    nerode_classes_capped(
        oracle,
        sig,
        frontier,
        tree_height,
        ctx_height,
        mode,
        DEFAULT_ENUM_CAP,
    )
}

/// Enumerates all trees of height at most `tree_height` and all contexts of
/// height at most `ctx_height` (restricted by `mode`), queries the oracle on
/// every plugging, and groups the trees by their context-value rows.
///
/// `cap` bounds both enumerations by node count.
pub fn nerode_classes_capped<O: LanguageOracle + ?Sized>(
    oracle: &O,
    sig: &Signature,
    frontier: &Frontier,
    tree_height: usize,
    ctx_height: usize,
    mode: ContextMode,
    cap: usize,
) -> Result<NerodeTable> {
    let trees = enumerate_trees_capped(sig, frontier, tree_height, cap)?;
    let mut contexts = enumerate_contexts_capped(sig, frontier, ctx_height, cap)?;
    if mode == ContextMode::SingleHole {
        contexts.retain(|c| c.hole_count() == 1);
    }

    let mut rows: Vec<Vec<String>> = Vec::with_capacity(trees.len());
    for tree in &trees {
        let mut row = Vec::with_capacity(contexts.len());
        for context in &contexts {
            row.push(oracle.output(&plug(context, tree))?);
        }
        rows.push(row);
    }
    let partition = Partition::kernel(&rows)?;

    let num_classes = partition.num_blocks();
    let mut representatives = vec![usize::MAX; num_classes];
    let mut class_values = vec![String::new(); num_classes];
    let mut index = BTreeMap::new();
    for (i, tree) in trees.iter().enumerate() {
        let class = partition.block_of(i);
        if representatives[class] == usize::MAX {
            representatives[class] = i;
            // the bare hole is always the first context, so rows[i][0] is the
            // oracle's value on the tree itself
            class_values[class] = rows[i][0].clone();
        }
        index.insert(tree.render(sig, frontier), i);
    }

    let class_of = (0..trees.len()).map(|i| partition.block_of(i)).collect();
    Ok(NerodeTable {
        trees,
        class_of,
        num_classes,
        representatives,
        class_values,
        contexts_used: contexts,
        index,
    })
}

/// [`minimal_from_oracle_capped`] with the default enumeration budget.
pub fn minimal_from_oracle<O: LanguageOracle + ?Sized>(
    oracle: &O,
    sig: &Signature,
    frontier: &Frontier,
    tree_height: usize,
    ctx_height: usize,
    mode: ContextMode,
) -> Result<(Dfta, NerodeTable)> {
    minimal_from_oracle_capped(
        oracle,
        sig,
        frontier,
        tree_height,
        ctx_height,
        mode,
        DEFAULT_ENUM_CAP,
    )
}

/// Synthesises an automaton whose states are the bounded Nerode classes.
///
/// The table must be *closed* — every symbol applied to class representatives
/// must land inside the enumerated trees — and the class assignment must be a
/// *congruence* on the table: replacing the children of a tabled tree by
/// their class representatives must not change the tree's class. Violations
/// of the first report the escaping composite, violations of the second the
/// offending tree together with a context separating it from its rebuilt
/// form; both mean the heights were too small, not that no automaton exists.
///
/// On success the automaton's language agrees with the oracle on every
/// enumerated tree; if both heights reach the minimal automaton's state
/// count, it *is* the minimal automaton.
pub fn minimal_from_oracle_capped<O: LanguageOracle + ?Sized>(
    oracle: &O,
    sig: &Signature,
    frontier: &Frontier,
    tree_height: usize,
    ctx_height: usize,
    mode: ContextMode,
    cap: usize,
) -> Result<(Dfta, NerodeTable)> {
    let table = nerode_classes_capped(oracle, sig, frontier, tree_height, ctx_height, mode, cap)?;
    let m = table.num_classes();

    // closure: every composite of representatives must itself be tabled
    let class_of_composite = |composite: &Tree| -> Result<usize> {
        let rendered = composite.render(sig, frontier);
        match table.lookup(&rendered) {
            Some(i) => Ok(table.class_of(i)),
            None => Err(Error::InsufficientHeights {
                tree: rendered,
                context: None,
                detail: format!(
                    "the composite escapes the enumerated trees; \
                     raise the tree height above {tree_height}"
                ),
            }),
        }
    };
    let mut init = Vec::with_capacity(frontier.len());
    for leaf in 0..frontier.len() {
        init.push(class_of_composite(&Tree::Leaf(leaf))?);
    }
    let mut trans = Vec::with_capacity(sig.len());
    for sym in 0..sig.len() {
        let mut row = Vec::new();
        for classes in tuples(m, sig.arity(sym)) {
            let composite = Tree::Node(
                sym,
                classes
                    .iter()
                    .map(|&c| table.representative(c).clone())
                    .collect(),
            );
            row.push(class_of_composite(&composite)?);
        }
        trans.push(row);
    }

    // congruence: a tabled tree and its representative rebuild must agree
    for (i, tree) in table.trees().iter().enumerate() {
        let Tree::Node(sym, children) = tree else {
            continue;
        };
        let reps: Vec<Tree> = children
            .iter()
            .map(|child| {
                let idx = table
                    .lookup(&child.render(sig, frontier))
                    .expect("subtrees of enumerated trees are enumerated");
                table.representative(table.class_of(idx)).clone()
            })
            .collect();
        let rebuilt = Tree::Node(*sym, reps);
        let rebuilt_class = class_of_composite(&rebuilt)?;
        if rebuilt_class != table.class_of(i) {
            // some tabled context must separate the two; find one to report
            let witness = table
                .contexts_used()
                .iter()
                .find(|c| {
                    let a = oracle.output(&plug(c, tree));
                    let b = oracle.output(&plug(c, &rebuilt));
                    !matches!((a, b), (Ok(a), Ok(b)) if a == b)
                })
                .expect("trees in distinct classes are separated by a tabled context");
            return Err(Error::InsufficientHeights {
                tree: tree.render(sig, frontier),
                context: Some(witness.render(sig, frontier)),
                detail: format!(
                    "replacing subtrees by their class representatives changes the class; \
                     raise the context height above {ctx_height}"
                ),
            });
        }
    }

    // consistency: the stored class values must still match the oracle
    // (guards against oracles that answer the same query differently)
    for class in 0..m {
        let fresh = oracle.output(table.representative(class))?;
        if fresh != table.class_value(class) {
            return Err(Error::invalid(format!(
                "oracle answered {fresh:?} then {:?} for {}",
                table.class_value(class),
                table.representative(class).render(sig, frontier)
            )));
        }
    }

    let states: Vec<String> = (0..m).map(|c| format!("c{c}")).collect();
    let mut outputs: Vec<&str> = Vec::new();
    for class in 0..m {
        if !outputs.contains(&table.class_value(class)) {
            outputs.push(table.class_value(class));
        }
    }
    let out: Vec<usize> = (0..m)
        .map(|c| {
            outputs
                .iter()
                .position(|v| *v == table.class_value(c))
                .unwrap()
        })
        .collect();
    let automaton = Dfta::new(
        sig.clone(),
        frontier.clone(),
        OutputSet::new(outputs)?,
        states,
        init,
        trans,
        out,
    )?;

    // the synthesised automaton must reproduce the oracle on the whole table
    for (i, tree) in table.trees().iter().enumerate() {
        let got = automaton.output_of(tree)?;
        if got != table.class_value(table.class_of(i)) {
            return Err(Error::invalid(format!(
                "synthesised automaton answers {got:?} on {}, oracle answered {:?}",
                tree.render(sig, frontier),
                table.class_value(table.class_of(i))
            )));
        }
    }
    Ok((automaton, table))
}

/// The syntactic congruence on words, bounded: `u` and `v` are equivalent
/// when `oracle(w ++ u ++ x) = oracle(w ++ v ++ x)` for all words `w`, `x`
/// over the alphabet of length at most `max_len`.
///
/// This is the word-monad analogue of the bounded Nerode refinement: words
/// are trees over a unary signature, and two-sided word contexts play the
/// role of tree contexts.
pub fn syntactic_equiv<A, O, F>(
    oracle: F,
    alphabet: &[A],
    u: &[A],
    v: &[A],
    max_len: usize,
) -> Result<bool>
where
    A: Clone + PartialEq,
    O: PartialEq,
    F: Fn(&[A]) -> O,
{
    for letter in u.iter().chain(v) {
        if !alphabet.contains(letter) {
            return Err(Error::invalid("word uses a letter outside the alphabet"));
        }
    }
    // all words of length <= max_len, shortest first
    let mut words: Vec<Vec<A>> = vec![Vec::new()];
    let mut last: Vec<Vec<A>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(last.len() * alphabet.len());
        for word in &last {
            for letter in alphabet {
                let mut longer = word.clone();
                longer.push(letter.clone());
                next.push(longer);
            }
        }
        words.extend(next.iter().cloned());
        last = next;
    }
    for w in &words {
        for x in &words {
            let mut left: Vec<A> = w.clone();
            left.extend(u.iter().cloned());
            left.extend(x.iter().cloned());
            let mut right: Vec<A> = w.clone();
            right.extend(v.iter().cloned());
            right.extend(x.iter().cloned());
            if oracle(&left) != oracle(&right) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
