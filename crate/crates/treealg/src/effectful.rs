//! Tree automata with side-effects: nondeterministic and weighted variants.
//!
//! An [`Nfta`] maps every tree to the *set* of states it can reach; a tree is
//! accepted when that set meets the final states. The step combining child
//! state sets into argument tuples is exposed as [`cartesian_tuples`] — the
//! action of the canonical distributive law of the term functor over the
//! powerset monad. [`determinise`] materialises the subset construction,
//! restricted to the subsets actually reachable from the initial images, and
//! yields an equivalent [`Dfta`] with outputs `0`/`1`.
//!
//! A [`Wfta`] maps every tree to a weight *vector* over a [`Semiring`]: leaf
//! vectors come from the initial assignment, and an inner node combines child
//! vectors with the left-folded Kronecker product ([`kron`]) and multiplies by
//! the symbol's transition matrix. The weight of a tree is the dot product of
//! its vector with the output vector. The determinised weighted automaton is
//! never materialised (its carrier would be the whole vector space); weighted
//! evaluation *is* the on-the-fly run of that automaton, and
//! [`Wfta::run_oracle`] cross-checks it against a brute-force sum over all
//! state labelings.

use std::collections::{BTreeMap, BTreeSet};

use crate::dfta::Dfta;
use crate::error::{Error, Result};
use crate::semiring::{Bool, Semiring};
use crate::term::{check_disjoint, valid_token, Frontier, OutputSet, Signature, Tree};
use crate::util::{tuple_rank, tuples};

/// Default bound on the number of subset states the subset construction may
/// discover before giving up.
pub const DEFAULT_SUBSET_CAP: usize = 1 << 16;

/// Default bound on the number of labelings [`Wfta::run_oracle`] will sum.
pub const DEFAULT_RUN_CAP: usize = 1_000_000;

fn check_states(states: &[String]) -> Result<()> {
    if states.is_empty() {
        return Err(Error::invalid("an automaton needs at least one state"));
    }
    for name in states {
        if !valid_token(name) {
            return Err(Error::invalid(format!("invalid state name {name:?}")));
        }
    }
    for (i, name) in states.iter().enumerate() {
        if states[..i].contains(name) {
            return Err(Error::invalid(format!("duplicate state name {name:?}")));
        }
    }
    Ok(())
}

/// A nondeterministic bottom-up tree automaton with final states.
/// Transitions are stored sparsely; a missing argument tuple means the empty
/// set of successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfta {
    sig: Signature,
    frontier: Frontier,
    states: Vec<String>,
    init: Vec<BTreeSet<usize>>,
    trans: Vec<BTreeMap<Vec<usize>, BTreeSet<usize>>>,
    final_states: BTreeSet<usize>,
}

impl Nfta {
    pub fn new(
        sig: Signature,
        frontier: Frontier,
        states: Vec<String>,
        init: Vec<BTreeSet<usize>>,
        trans: Vec<BTreeMap<Vec<usize>, BTreeSet<usize>>>,
        final_states: BTreeSet<usize>,
    ) -> Result<Self> {
        check_disjoint(&sig, &frontier)?;
        check_states(&states)?;
        let n = states.len();
        if init.len() != frontier.len() {
            return Err(Error::invalid(format!(
                "initial assignment covers {} leaves, frontier has {}",
                init.len(),
                frontier.len()
            )));
        }
        if init.iter().flatten().any(|&q| q >= n) {
            return Err(Error::invalid("initial state index out of range"));
        }
        if trans.len() != sig.len() {
            return Err(Error::invalid(format!(
                "transition maps cover {} symbols, signature has {}",
                trans.len(),
                sig.len()
            )));
        }
        for (sym, map) in trans.iter().enumerate() {
            for (args, succ) in map {
                if args.len() != sig.arity(sym) {
                    return Err(Error::invalid(format!(
                        "transition for {} lists {} argument(s), arity is {}",
                        sig.name(sym),
                        args.len(),
                        sig.arity(sym)
                    )));
                }
                if args.iter().any(|&q| q >= n) || succ.iter().any(|&q| q >= n) {
                    return Err(Error::invalid(format!(
                        "transition for {} mentions a state index out of range",
                        sig.name(sym)
                    )));
                }
            }
        }
        if final_states.iter().any(|&q| q >= n) {
            return Err(Error::invalid("final state index out of range"));
        }
        Ok(Nfta {
            sig,
            frontier,
            states,
            init,
            trans,
            final_states,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
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

    pub fn init_of(&self, leaf: usize) -> &BTreeSet<usize> {
        &self.init[leaf]
    }

    pub fn final_states(&self) -> &BTreeSet<usize> {
        &self.final_states
    }

    /// Successor set for one argument tuple (empty if unlisted).
    pub fn trans_of(&self, sym: usize, args: &[usize]) -> BTreeSet<usize> {
        self.trans[sym].get(args).cloned().unwrap_or_default()
    }

    /// The sparse transition map of one symbol, for serialisation.
    pub fn trans_map(&self, sym: usize) -> &BTreeMap<Vec<usize>, BTreeSet<usize>> {
        &self.trans[sym]
    }

    /// The set of states the automaton can assign to `tree`: initial sets at
    /// the leaves, and at an inner node the union of successor sets over every
    /// tuple of child states.
    pub fn eval(&self, tree: &Tree) -> Result<BTreeSet<usize>> {
        match tree {
            Tree::Leaf(l) => {
                if *l >= self.frontier.len() {
                    return Err(Error::invalid(format!("leaf index {l} out of range")));
                }
                Ok(self.init[*l].clone())
            }
            Tree::Node(sym, children) => {
                if *sym >= self.sig.len() || children.len() != self.sig.arity(*sym) {
                    return Err(Error::invalid(
                        "tree does not match the automaton's alphabet",
                    ));
                }
                let child_sets: Vec<BTreeSet<usize>> = children
                    .iter()
                    .map(|c| self.eval(c))
                    .collect::<Result<_>>()?;
                let mut result = BTreeSet::new();
                for args in cartesian_tuples(&self.sig, *sym, &child_sets)? {
                    if let Some(succ) = self.trans[*sym].get(&args) {
                        result.extend(succ.iter().copied());
                    }
                }
                Ok(result)
            }
        }
    }

    /// True iff some run of `tree` ends in a final state.
    pub fn accepts(&self, tree: &Tree) -> Result<bool> {
        Ok(self
            .eval(tree)?
            .iter()
            .any(|q| self.final_states.contains(q)))
    }
}

/// All ways of choosing one state per argument from the given child state
/// sets, in lexicographic order: the distributive-law action of the term
/// functor over the powerset monad, specialised to one symbol.
///
/// Errors when the number of sets does not match the symbol's arity.
pub fn cartesian_tuples(
    sig: &Signature,
    sym: usize,
    args: &[BTreeSet<usize>],
) -> Result<Vec<Vec<usize>>> {
    if sym >= sig.len() || args.len() != sig.arity(sym) {
        return Err(Error::invalid(format!(
            "cartesian_tuples: {} set(s) supplied for a symbol of arity {}",
            args.len(),
            sig.arity(sym.min(sig.len().saturating_sub(1)))
        )));
    }
    let pools: Vec<Vec<usize>> = args.iter().map(|s| s.iter().copied().collect()).collect();
    if pools.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut result = Vec::new();
    let mut digits = vec![0usize; pools.len()];
    loop {
        result.push(
            digits
                .iter()
                .zip(&pools)
                .map(|(&d, pool)| pool[d])
                .collect(),
        );
        let mut carry = true;
        for (d, pool) in digits.iter_mut().zip(&pools).rev() {
            *d += 1;
            if *d < pool.len() {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            return Ok(result);
        }
    }
}

/// Subset construction with the default cap; see [`determinise_capped`].
pub fn determinise(a: &Nfta) -> Result<Dfta> {
    determinise_capped(a, DEFAULT_SUBSET_CAP)
}

/// Determinises `a` into a [`Dfta`] with outputs `0`/`1` whose states are the
/// subsets reachable from the initial images, discovered leaf-first in the
/// same order reachability uses. A subset's output is `1` iff it meets the
/// final states.
///
/// Subset states are named by joining member names with `.` (the empty subset
/// becomes `empty`); if those names collide the construction falls back to
/// `s0, s1, ..` throughout. Errors when more than `max_subsets` subsets turn
/// up.
pub fn determinise_capped(a: &Nfta, max_subsets: usize) -> Result<Dfta> {
    let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    let discover = |set: BTreeSet<usize>,
                    ids: &mut BTreeMap<BTreeSet<usize>, usize>,
                    subsets: &mut Vec<BTreeSet<usize>>|
     -> Result<usize> {
        if let Some(&id) = ids.get(&set) {
            return Ok(id);
        }
        let id = subsets.len();
        if id >= max_subsets {
            return Err(Error::ResourceLimit(format!(
                "subset construction exceeds {max_subsets} subset states"
            )));
        }
        ids.insert(set.clone(), id);
        subsets.push(set);
        Ok(id)
    };

    let mut init = Vec::with_capacity(a.frontier.len());
    for l in 0..a.frontier.len() {
        init.push(discover(a.init[l].clone(), &mut ids, &mut subsets)?);
    }
    // saturate: apply every symbol to every tuple of known subsets until no
    // new subset appears
    let mut done = 0;
    while done < subsets.len() {
        done = subsets.len();
        for sym in 0..a.sig.len() {
            for digits in tuples(done, a.sig.arity(sym)) {
                let child_sets: Vec<BTreeSet<usize>> =
                    digits.iter().map(|&d| subsets[d].clone()).collect();
                let mut image = BTreeSet::new();
                for args in cartesian_tuples(&a.sig, sym, &child_sets)? {
                    if let Some(succ) = a.trans[sym].get(&args) {
                        image.extend(succ.iter().copied());
                    }
                }
                discover(image, &mut ids, &mut subsets)?;
            }
        }
    }

    let m = subsets.len();
    let mut trans = Vec::with_capacity(a.sig.len());
    for sym in 0..a.sig.len() {
        let mut table = Vec::with_capacity(m.pow(a.sig.arity(sym) as u32));
        for digits in tuples(m, a.sig.arity(sym)) {
            let child_sets: Vec<BTreeSet<usize>> =
                digits.iter().map(|&d| subsets[d].clone()).collect();
            let mut image = BTreeSet::new();
            for args in cartesian_tuples(&a.sig, sym, &child_sets)? {
                if let Some(succ) = a.trans[sym].get(&args) {
                    image.extend(succ.iter().copied());
                }
            }
            table.push(ids[&image]);
        }
        trans.push(table);
    }

    let mut names: Vec<String> = subsets
        .iter()
        .map(|set| {
            if set.is_empty() {
                "empty".to_string()
            } else {
                set.iter()
                    .map(|&q| a.states[q].as_str())
                    .collect::<Vec<_>>()
                    .join(".")
            }
        })
        .collect();
    let collision = names
        .iter()
        .enumerate()
        .any(|(i, n)| names[..i].contains(n));
    if collision {
        names = (0..m).map(|i| format!("s{i}")).collect();
    }

    let out: Vec<usize> = subsets
        .iter()
        .map(|set| usize::from(set.iter().any(|q| a.final_states.contains(q))))
        .collect();
    Dfta::new(
        a.sig.clone(),
        a.frontier.clone(),
        OutputSet::new(["0", "1"]).expect("static output set"),
        names,
        init,
        trans,
        out,
    )
}

/// A weight vector indexed by an automaton's states (or by tuples of states
/// after Kronecker products).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector<S>(pub Vec<S>);

impl<S: Semiring> WeightVector<S> {
    pub fn zeros(dim: usize) -> Self {
        WeightVector(vec![S::zero(); dim])
    }

    /// The one-dimensional unit vector: the empty Kronecker product.
    pub fn unit() -> Self {
        WeightVector(vec![S::one()])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Dot product; the two vectors must have equal dimension.
    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.0
            .iter()
            .zip(&other.0)
            .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Renders as `1 q0 + 0 q1` against a state name table.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(
            self.dim(),
            names.len(),
            "vector does not match the name table"
        );
        let mut out = String::new();
        for (i, (w, name)) in self.0.iter().zip(names).enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("{w} {name}"));
        }
        out
    }
}

/// Kronecker product: entry `(i, j)` of the result is `v[i] * w[j]`, with `j`
/// varying fastest. Folding from the left over child vectors produces tuple
/// indices in the same rank order the transition matrices use.
pub fn kron<S: Semiring>(v: &WeightVector<S>, w: &WeightVector<S>) -> WeightVector<S> {
    let mut out = Vec::with_capacity(v.dim() * w.dim());
    for a in &v.0 {
        for b in &w.0 {
            out.push(a.mul(b));
        }
    }
    WeightVector(out)
}

/// A weighted bottom-up tree automaton over a semiring `S`.
///
/// The transition matrix of a symbol with arity `k` has one row per argument
/// tuple (in rank order) and one column per state, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wfta<S: Semiring> {
    sig: Signature,
    frontier: Frontier,
    states: Vec<String>,
    init: Vec<WeightVector<S>>,
    trans: Vec<Vec<S>>,
    out: WeightVector<S>,
}

impl<S: Semiring> Wfta<S> {
    pub fn new(
        sig: Signature,
        frontier: Frontier,
        states: Vec<String>,
        init: Vec<WeightVector<S>>,
        trans: Vec<Vec<S>>,
        out: WeightVector<S>,
    ) -> Result<Self> {
        check_disjoint(&sig, &frontier)?;
        check_states(&states)?;
        let n = states.len();
        if init.len() != frontier.len() {
            return Err(Error::invalid(format!(
                "initial assignment covers {} leaves, frontier has {}",
                init.len(),
                frontier.len()
            )));
        }
        if let Some(v) = init.iter().find(|v| v.dim() != n) {
            return Err(Error::invalid(format!(
                "initial vector has dimension {}, automaton has {n} states",
                v.dim()
            )));
        }
        if trans.len() != sig.len() {
            return Err(Error::invalid(format!(
                "transition matrices cover {} symbols, signature has {}",
                trans.len(),
                sig.len()
            )));
        }
        for (sym, matrix) in trans.iter().enumerate() {
            let want = n.pow(sig.arity(sym) as u32) * n;
            if matrix.len() != want {
                return Err(Error::invalid(format!(
                    "transition matrix for {} has {} entries, needs {}",
                    sig.name(sym),
                    matrix.len(),
                    want
                )));
            }
        }
        if out.dim() != n {
            return Err(Error::invalid(format!(
                "output vector has dimension {}, automaton has {n} states",
                out.dim()
            )));
        }
        Ok(Wfta {
            sig,
            frontier,
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

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn init_of(&self, leaf: usize) -> &WeightVector<S> {
        &self.init[leaf]
    }

    pub fn out_vector(&self) -> &WeightVector<S> {
        &self.out
    }

    /// Matrix entry: weight of `sym` sending argument tuple `args` to `q`.
    pub fn trans_weight(&self, sym: usize, args: &[usize], q: usize) -> &S {
        let n = self.states.len();
        &self.trans[sym][tuple_rank(args, n) * n + q]
    }

    /// The state-indexed weight vector of a tree: initial vectors at the
    /// leaves; at an inner node the left-folded Kronecker product of the child
    /// vectors multiplied by the symbol's transition matrix.
    pub fn eval(&self, tree: &Tree) -> Result<WeightVector<S>> {
        let n = self.states.len();
        match tree {
            Tree::Leaf(l) => {
                if *l >= self.frontier.len() {
                    return Err(Error::invalid(format!("leaf index {l} out of range")));
                }
                Ok(self.init[*l].clone())
            }
            Tree::Node(sym, children) => {
                if *sym >= self.sig.len() || children.len() != self.sig.arity(*sym) {
                    return Err(Error::invalid(
                        "tree does not match the automaton's alphabet",
                    ));
                }
                let mut folded = WeightVector::unit();
                for child in children {
                    folded = kron(&folded, &self.eval(child)?);
                }
                // vector-matrix product: result[q] = sum_row folded[row] * M[row][q]
                let matrix = &self.trans[*sym];
                let mut result = WeightVector::<S>::zeros(n);
                for (row, coeff) in folded.0.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        let term = coeff.mul(&matrix[row * n + q]);
                        result.0[q] = result.0[q].add(&term);
                    }
                }
                Ok(result)
            }
        }
    }

    /// The weight of a tree: its vector dotted with the output vector.
    pub fn weight(&self, tree: &Tree) -> Result<S> {
        Ok(self.eval(tree)?.dot(&self.out))
    }

    /// Brute-force weight with the default labeling cap; see
    /// [`Wfta::run_oracle_capped`].
    pub fn run_oracle(&self, tree: &Tree) -> Result<S> {
        self.run_oracle_capped(tree, DEFAULT_RUN_CAP)
    }

    /// Independent weight computation: sums, over every assignment of states
    /// to the tree's nodes, the product of the local weights (initial entry at
    /// each leaf, matrix entry at each inner node, output entry at the root).
    /// Errors when more than `max_runs` assignments would be needed.
    pub fn run_oracle_capped(&self, tree: &Tree, max_runs: usize) -> Result<S> {
        tree.well_formed(&self.sig, &self.frontier)?;
        // flatten post-order so children precede their parents
        enum Flat {
            Leaf(usize),
            Node(usize, Vec<usize>), // symbol, child positions
        }
        fn flatten(t: &Tree, out: &mut Vec<Flat>) -> usize {
            match t {
                Tree::Leaf(l) => {
                    out.push(Flat::Leaf(*l));
                }
                Tree::Node(sym, children) => {
                    let kids: Vec<usize> = children.iter().map(|c| flatten(c, out)).collect();
                    out.push(Flat::Node(*sym, kids));
                }
            }
            out.len() - 1
        }
        let mut nodes = Vec::new();
        flatten(tree, &mut nodes);

        let n = self.states.len();
        let runs = n.checked_pow(nodes.len() as u32).filter(|&r| r <= max_runs);
        if runs.is_none() {
            return Err(Error::ResourceLimit(format!(
                "run summation needs {n}^{} labelings, cap is {max_runs}",
                nodes.len()
            )));
        }
        let mut total = S::zero();
        let mut labels = vec![0usize; nodes.len()];
        loop {
            let mut product = S::one();
            for (pos, node) in nodes.iter().enumerate() {
                let local = match node {
                    Flat::Leaf(l) => self.init[*l].0[labels[pos]].clone(),
                    Flat::Node(sym, kids) => {
                        let args: Vec<usize> = kids.iter().map(|&k| labels[k]).collect();
                        self.trans_weight(*sym, &args, labels[pos]).clone()
                    }
                };
                product = product.mul(&local);
            }
            let root = labels.len() - 1;
            total = total.add(&product.mul(&self.out.0[labels[root]]));

            let mut carry = true;
            for d in labels.iter_mut() {
                *d += 1;
                if *d < n {
                    carry = false;
                    break;
                }
                *d = 0;
            }
            if carry {
                return Ok(total);
            }
        }
    }
}

/// Reads an [`Nfta`] as a weighted automaton over the boolean semiring:
/// weight 1 exactly where a set membership held. Weighted evaluation then
/// computes acceptance.
pub fn nfta_as_weighted(a: &Nfta) -> Wfta<Bool> {
    let n = a.num_states();
    let init: Vec<WeightVector<Bool>> = (0..a.frontier.len())
        .map(|l| WeightVector((0..n).map(|q| Bool(a.init[l].contains(&q))).collect()))
        .collect();
    let mut trans = Vec::with_capacity(a.sig.len());
    for sym in 0..a.sig.len() {
        let k = a.sig.arity(sym);
        let mut matrix = vec![Bool(false); n.pow(k as u32) * n];
        for (args, succ) in &a.trans[sym] {
            let row = tuple_rank(args, n);
            for &q in succ {
                matrix[row * n + q] = Bool(true);
            }
        }
        trans.push(matrix);
    }
    let out = WeightVector((0..n).map(|q| Bool(a.final_states.contains(&q))).collect());
    Wfta::new(
        a.sig.clone(),
        a.frontier.clone(),
        a.states.clone(),
        init,
        trans,
        out,
    )
    .expect("the boolean reading of a valid Nfta is valid")
}
