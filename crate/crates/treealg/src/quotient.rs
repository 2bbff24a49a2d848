//! State partitions, forward bisimulations, and quotient minimisation.
//!
//! Partitions of the state set form a lattice: `p` is below `q` when `p`
//! refines `q` (states equal under `p` are equal under `q`), the top element
//! lumps everything together, and [`Partition::meet`] intersects two
//! partitions. [`refine_by_transitions`] maps a partition `p` to the coarsest
//! partition whose blocks cannot be told apart by a single transition step:
//! two states stay together iff for every symbol, argument position and choice
//! of the remaining arguments, swapping one state for the other yields
//! `p`-equivalent transition targets.
//!
//! [`minimise`] iterates that refinement intersected with the output kernel,
//! starting from the top partition. The limit is the coarsest partition that
//! is stable under both, i.e. the coarsest forward bisimulation, and the
//! quotient by it is the minimal automaton for the language. A reachable,
//! output-restricted automaton is *simple* when that partition is discrete.

use crate::dfta::Dfta;
use crate::error::{Error, Result};
use crate::util::tuples;

use std::collections::HashMap;
use std::hash::Hash;

/// A partition of `{0, .., n-1}` in canonical form: blocks are numbered by
/// first occurrence, so equal partitions compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl Partition {
    fn canonical(raw: &[usize]) -> Partition {
        let mut rename: HashMap<usize, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(raw.len());
        for &b in raw {
            let next = rename.len();
            block_of.push(*rename.entry(b).or_insert(next));
        }
        Partition {
            num_blocks: rename.len(),
            block_of,
        }
    }

    /// The coarsest partition: one block holding every state.
    pub fn top(n: usize) -> Result<Partition> {
        if n == 0 {
            return Err(Error::invalid(
                "partitions of an empty state set are not defined",
            ));
        }
        Ok(Partition {
            block_of: vec![0; n],
            num_blocks: 1,
        })
    }

    /// The finest partition: every state in its own block.
    pub fn discrete(n: usize) -> Result<Partition> {
        if n == 0 {
            return Err(Error::invalid(
                "partitions of an empty state set are not defined",
            ));
        }
        Ok(Partition {
            block_of: (0..n).collect(),
            num_blocks: n,
        })
    }

    /// Groups positions carrying equal values.
    pub fn kernel<T: Eq + Hash>(values: &[T]) -> Result<Partition> {
        if values.is_empty() {
            return Err(Error::invalid(
                "partitions of an empty state set are not defined",
            ));
        }
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let mut raw = Vec::with_capacity(values.len());
        for v in values {
            let next = ids.len();
            raw.push(*ids.entry(v).or_insert(next));
        }
        Ok(Partition::canonical(&raw))
    }

    /// Intersection: states share a block iff they do in both inputs.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "cannot meet partitions of {} and {} states",
                self.len(),
                other.len()
            )));
        }
        let pairs: Vec<(usize, usize)> = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .map(|(&a, &b)| (a, b))
            .collect();
        Partition::kernel(&pairs)
    }

    /// Refinement order: `self <= other` iff every block of `self` sits inside
    /// a block of `other`. Requires matching state counts.
    pub fn le(&self, other: &Partition) -> bool {
        assert_eq!(
            self.len(),
            other.len(),
            "cannot compare partitions of different state sets"
        );
        let mut image = vec![usize::MAX; self.num_blocks];
        for (s, &b) in self.block_of.iter().enumerate() {
            if image[b] == usize::MAX {
                image[b] = other.block_of[s];
            } else if image[b] != other.block_of[s] {
                return false;
            }
        }
        true
    }

    /// Number of states partitioned.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructors reject empty state sets
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks == self.len()
    }

    pub fn is_top(&self) -> bool {
        self.num_blocks == 1
    }

    /// Blocks in canonical order, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks];
        for (s, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(s);
        }
        blocks
    }

    /// Renders as `{q0,q2} {q1}` using the given state names.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(
            names.len(),
            self.len(),
            "name table does not match the partition"
        );
        let mut out = String::new();
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push('{');
            for (j, &s) in block.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&names[s]);
            }
            out.push('}');
        }
        out
    }
}

/// The coarsest partition below `p`-distinguishability by one transition step:
/// states `s`, `t` stay together iff for every symbol, argument position and
/// tuple of remaining arguments, the transition targets with `s` and with `t`
/// in that position share a `p`-block.
///
/// Monotone in `p`; nullary symbols impose no constraint.
pub fn refine_by_transitions(a: &Dfta, p: &Partition) -> Partition {
    assert_eq!(
        p.len(),
        a.num_states(),
        "partition and automaton disagree on the state count"
    );
    let n = a.num_states();
    // fingerprint per state: the p-block of every one-step image, in a fixed
    // order of (symbol, position, remaining arguments); equal fingerprints
    // are exactly the states no single step distinguishes
    let mut prints: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut args = Vec::new();
    for sym in 0..a.sig().len() {
        let k = a.sig().arity(sym);
        for pos in 0..k {
            for others in tuples(n, k - 1) {
                for (s, print) in prints.iter_mut().enumerate() {
                    args.clear();
                    args.extend_from_slice(&others[..pos]);
                    args.push(s);
                    args.extend_from_slice(&others[pos..]);
                    print.push(p.block_of(a.trans_of(sym, &args)));
                }
            }
        }
    }
    Partition::kernel(&prints).expect("automata have at least one state")
}

/// Output kernel: states share a block iff they carry the same output.
fn output_kernel(a: &Dfta) -> Partition {
    let outs: Vec<usize> = (0..a.num_states()).map(|q| a.out_of(q)).collect();
    Partition::kernel(&outs).expect("automata have at least one state")
}

/// The greatest fixpoint of `p -> refine_by_transitions(a, p) /\ output
/// kernel`, reached from the top partition in at most `|Q|` rounds.
fn coarsest_stable(a: &Dfta) -> Partition {
    let ker = output_kernel(a);
    let mut p = Partition::top(a.num_states()).expect("automata have at least one state");
    loop {
        let next = refine_by_transitions(a, &p)
            .meet(&ker)
            .expect("partitions over the same automaton");
        if next == p {
            return p;
        }
        p = next;
    }
}

/// Checks the two forward-bisimulation conditions for `p` directly: states in
/// a block carry equal outputs, and replacing one block member by another in
/// any single argument position leads into the same block.
///
/// Returns a description of the first violation, if any.
fn forward_violation(a: &Dfta, p: &Partition) -> Option<String> {
    assert_eq!(
        p.len(),
        a.num_states(),
        "partition and automaton disagree on the state count"
    );
    let n = a.num_states();
    let blocks = p.blocks();
    for block in &blocks {
        let rep = block[0];
        for &s in &block[1..] {
            if a.out_of(s) != a.out_of(rep) {
                return Some(format!(
                    "states {} and {} share a block but output {} vs {}",
                    a.state_name(rep),
                    a.state_name(s),
                    a.out_value(rep),
                    a.out_value(s)
                ));
            }
        }
    }
    let mut args = Vec::new();
    for sym in 0..a.sig().len() {
        let k = a.sig().arity(sym);
        for pos in 0..k {
            for others in tuples(n, k - 1) {
                for block in &blocks {
                    let rep = block[0];
                    let image_at = |s: usize, args: &mut Vec<usize>| {
                        args.clear();
                        args.extend_from_slice(&others[..pos]);
                        args.push(s);
                        args.extend_from_slice(&others[pos..]);
                        a.trans_of(sym, args)
                    };
                    let rep_img = image_at(rep, &mut args);
                    for &s in &block[1..] {
                        let img = image_at(s, &mut args);
                        if p.block_of(img) != p.block_of(rep_img) {
                            return Some(format!(
                                "states {} and {} share a block but {} in position {} leads to {} vs {}",
                                a.state_name(rep),
                                a.state_name(s),
                                a.sig().name(sym),
                                pos,
                                a.state_name(rep_img),
                                a.state_name(img)
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

/// True iff `p` is a forward bisimulation on `a`: blocks agree on outputs and
/// are stable under single-argument replacement.
pub fn is_forward_bisimulation(a: &Dfta, p: &Partition) -> bool {
    forward_violation(a, p).is_none()
}

/// Quotient of `a` by a forward bisimulation `p`: one state per block, named
/// and represented by the block's first member. Errors with the violating
/// instance if `p` is not a forward bisimulation.
pub fn quotient_automaton(a: &Dfta, p: &Partition) -> Result<Dfta> {
    if let Some(violation) = forward_violation(a, p) {
        return Err(Error::invalid(format!(
            "partition is not a forward bisimulation: {violation}"
        )));
    }
    let blocks = p.blocks();
    let reps: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let states: Vec<String> = reps.iter().map(|&r| a.state_name(r).to_string()).collect();
    let init: Vec<usize> = (0..a.frontier().len())
        .map(|l| p.block_of(a.init_of(l)))
        .collect();
    let out: Vec<usize> = reps.iter().map(|&r| a.out_of(r)).collect();
    let mut trans = Vec::with_capacity(a.sig().len());
    for sym in 0..a.sig().len() {
        let k = a.sig().arity(sym);
        let mut table = Vec::with_capacity(blocks.len().pow(k as u32));
        for digits in tuples(blocks.len(), k) {
            let args: Vec<usize> = digits.iter().map(|&b| reps[b]).collect();
            table.push(p.block_of(a.trans_of(sym, &args)));
        }
        trans.push(table);
    }
    Dfta::new(
        a.sig().clone(),
        a.frontier().clone(),
        a.outputs().clone(),
        states,
        init,
        trans,
        out,
    )
}

/// Minimises a reachable, output-restricted automaton: quotients by the
/// coarsest forward bisimulation. Returns the quotient and the partition.
/// The result evaluates every tree to the same output as the input.
pub fn minimise(a: &Dfta) -> Result<(Dfta, Partition)> {
    if !a.is_reachable() {
        return Err(Error::invalid(
            "minimisation needs a reachable automaton; apply trim first",
        ));
    }
    if !a.out_surjective() {
        return Err(Error::invalid(
            "minimisation needs every output value attached to some state; restrict outputs first",
        ));
    }
    let p = coarsest_stable(a);
    let q =
        quotient_automaton(a, &p).expect("the coarsest stable partition is a forward bisimulation");
    Ok((q, p))
}

/// True iff the coarsest forward bisimulation is discrete, i.e. no two states
/// can be merged. Requires an output-restricted automaton.
pub fn is_simple(a: &Dfta) -> Result<bool> {
    if !a.out_surjective() {
        return Err(Error::invalid(
            "simplicity is defined for output-restricted automata; restrict outputs first",
        ));
    }
    Ok(coarsest_stable(a).is_discrete())
}

/// True iff `a` is reachable and simple: no junk states and no mergeable
/// states, which characterises the minimal automaton for its language.
pub fn is_minimal(a: &Dfta) -> Result<bool> {
    if !a.out_surjective() {
        return Err(Error::invalid(
            "minimality is defined for output-restricted automata; restrict outputs first",
        ));
    }
    Ok(a.is_reachable() && coarsest_stable(a).is_discrete())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfta::{equiv, isomorphic};
    use crate::term::{Frontier, OutputSet, Signature};
    use crate::testutil::a0;

    /// All partitions of `n` elements via restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Partition> {
        fn rec(prefix: &mut Vec<usize>, used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for b in 0..=used {
                prefix.push(b);
                rec(prefix, used.max(b + 1), n, out);
                prefix.pop();
            }
        }
        let mut raw = Vec::new();
        rec(&mut Vec::new(), 0, n, &mut raw);
        raw.iter().map(|r| Partition::kernel(r).unwrap()).collect()
    }

    /// a0 with q1 split into two interchangeable copies s1, s2.
    fn a0_duplicated() -> Dfta {
        Dfta::new(
            Signature::new([("f", 2), ("g", 1)]).unwrap(),
            Frontier::new(["x", "y"]).unwrap(),
            OutputSet::new(["0", "1"]).unwrap(),
            vec!["s0".into(), "s1".into(), "s2".into()],
            vec![0, 1],
            vec![vec![0, 1, 2, 2, 0, 0, 1, 0, 0], vec![0, 2, 1]],
            vec![0, 1, 1],
        )
        .unwrap()
    }

    /// Four-state unary chain q0 -> q1 -> q2 -> q3 (self-loop), outputs 0 0 1 1.
    fn chain4() -> Dfta {
        Dfta::new(
            Signature::new([("g", 1)]).unwrap(),
            Frontier::new(["x"]).unwrap(),
            OutputSet::new(["0", "1"]).unwrap(),
            (0..4).map(|i| format!("q{i}")).collect(),
            vec![0],
            vec![vec![1, 2, 3, 3]],
            vec![0, 0, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn partition_constructors_and_accessors() {
        let top = Partition::top(3).unwrap();
        let discrete = Partition::discrete(3).unwrap();
        assert!(top.is_top() && !top.is_discrete());
        assert!(discrete.is_discrete() && !discrete.is_top());
        assert!(Partition::top(0).is_err());
        let k = Partition::kernel(&["b", "a", "b"]).unwrap();
        assert_eq!((k.block_of(0), k.block_of(1), k.block_of(2)), (0, 1, 0));
        assert_eq!(k.blocks(), [vec![0, 2], vec![1]]);
        let names: Vec<String> = ["q0", "q1", "q2"].map(String::from).to_vec();
        assert_eq!(k.render(&names), "{q0,q2} {q1}");
        assert_eq!(top.render(&names), "{q0,q1,q2}");
    }

    #[test]
    fn meet_intersects_blocks() {
        let p = Partition::kernel(&[0, 0, 1]).unwrap();
        let q = Partition::kernel(&[0, 1, 1]).unwrap();
        let m = p.meet(&q).unwrap();
        assert!(m.is_discrete());
        assert!(p.meet(&Partition::top(2).unwrap()).is_err());
    }

    #[test]
    fn meet_is_the_lattice_meet_on_all_partitions_of_four() {
        let all = all_partitions(4);
        assert_eq!(all.len(), 15); // Bell(4)
        for p in &all {
            assert!(Partition::discrete(4).unwrap().le(p));
            assert!(p.le(&Partition::top(4).unwrap()));
            for q in &all {
                let m = p.meet(q).unwrap();
                assert!(m.le(p) && m.le(q));
                for r in &all {
                    assert_eq!(r.le(p) && r.le(q), r.le(&m), "glb failure");
                }
            }
        }
    }

    #[test]
    fn refinement_on_the_parity_automaton() {
        let a = a0();
        let top = Partition::top(2).unwrap();
        let discrete = Partition::discrete(2).unwrap();
        assert_eq!(refine_by_transitions(&a, &top), top);
        assert_eq!(refine_by_transitions(&a, &discrete), discrete);
    }

    /// Direct statement of the refinement property, quantifying over stable
    /// partitions instead of fingerprints.
    fn stable_under(a: &Dfta, q: &Partition, p: &Partition) -> bool {
        let n = a.num_states();
        for sym in 0..a.sig().len() {
            let k = a.sig().arity(sym);
            for pos in 0..k {
                for others in crate::util::tuples(n, k - 1) {
                    for s in 0..n {
                        for t in 0..n {
                            if q.block_of(s) != q.block_of(t) {
                                continue;
                            }
                            let with = |v: usize| {
                                let mut args = others.clone();
                                args.insert(pos, v);
                                a.trans_of(sym, &args)
                            };
                            if p.block_of(with(s)) != p.block_of(with(t)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn refinement_is_the_coarsest_stable_partition() {
        for a in [a0(), a0_duplicated(), chain4()] {
            for p in all_partitions(a.num_states()) {
                let refined = refine_by_transitions(&a, &p);
                assert!(stable_under(&a, &refined, &p));
                for q in all_partitions(a.num_states()) {
                    assert_eq!(q.le(&refined), stable_under(&a, &q, &p));
                }
            }
        }
    }

    #[test]
    fn refinement_is_monotone() {
        for a in [a0_duplicated(), chain4()] {
            let all = all_partitions(a.num_states());
            for p in &all {
                for q in &all {
                    if p.le(q) {
                        assert!(refine_by_transitions(&a, p).le(&refine_by_transitions(&a, q)));
                    }
                }
            }
        }
    }

    #[test]
    fn minimising_the_parity_automaton_is_the_identity() {
        let a = a0();
        let (min, p) = minimise(&a).unwrap();
        assert!(p.is_discrete());
        assert_eq!(min, a);
        assert!(is_simple(&a).unwrap());
        assert!(is_minimal(&a).unwrap());
    }

    #[test]
    fn minimising_merges_duplicated_states() {
        let b = a0_duplicated();
        assert!(!is_simple(&b).unwrap());
        assert!(!is_minimal(&b).unwrap());
        let (min, p) = minimise(&b).unwrap();
        assert_eq!(p.blocks(), [vec![0], vec![1, 2]]);
        assert_eq!(p.render(b.state_names()), "{s0} {s1,s2}");
        assert_eq!(min.num_states(), 2);
        assert_eq!(equiv(&min, &b).unwrap(), None);
        assert!(isomorphic(&min, &a0()).unwrap().is_some());
        assert!(is_minimal(&min).unwrap());
    }

    #[test]
    fn minimising_collapses_the_chain_tail() {
        let c = chain4();
        let (min, p) = minimise(&c).unwrap();
        assert_eq!(p.blocks(), [vec![0], vec![1], vec![2, 3]]);
        assert_eq!(min.num_states(), 3);
        assert_eq!(equiv(&min, &c).unwrap(), None);
        assert!(is_simple(&min).unwrap());
    }

    #[test]
    fn forward_bisimulation_examples() {
        let a = a0();
        assert!(is_forward_bisimulation(
            &a,
            &Partition::discrete(2).unwrap()
        ));
        assert!(!is_forward_bisimulation(&a, &Partition::top(2).unwrap()));
        let b = a0_duplicated();
        let merge = Partition::kernel(&[0, 1, 1]).unwrap();
        assert!(is_forward_bisimulation(&b, &merge));
        // the fingerprint route agrees with the direct two-condition check
        for p in all_partitions(3) {
            let fingerprint_route = p.le(&refine_by_transitions(&b, &p))
                && p.le(&Partition::kernel(&[0, 1, 1]).unwrap());
            assert_eq!(is_forward_bisimulation(&b, &p), fingerprint_route);
        }
    }

    #[test]
    fn quotients_require_forward_bisimulations() {
        let b = a0_duplicated();
        let merge = Partition::kernel(&[0, 1, 1]).unwrap();
        let q = quotient_automaton(&b, &merge).unwrap();
        assert_eq!(q, minimise(&b).unwrap().0);
        assert_eq!(
            quotient_automaton(&b, &Partition::discrete(3).unwrap()).unwrap(),
            b
        );
        let err = quotient_automaton(&b, &Partition::top(3).unwrap()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not a forward bisimulation"), "{msg}");
        assert!(msg.contains("output"), "{msg}");
    }

    #[test]
    fn minimise_checks_its_preconditions() {
        let junk = Dfta::new(
            Signature::new([("g", 1)]).unwrap(),
            Frontier::new(["x"]).unwrap(),
            OutputSet::new(["0", "1"]).unwrap(),
            vec!["q0".into(), "q1".into()],
            vec![0],
            vec![vec![0, 1]],
            vec![0, 1],
        )
        .unwrap();
        assert!(minimise(&junk).is_err()); // q1 unreachable
        let unrestricted = Dfta::new(
            Signature::new([("g", 1)]).unwrap(),
            Frontier::new(["x"]).unwrap(),
            OutputSet::new(["0", "1"]).unwrap(),
            vec!["q0".into()],
            vec![0],
            vec![vec![0]],
            vec![0],
        )
        .unwrap();
        assert!(minimise(&unrestricted).is_err()); // output 1 unused
        assert!(minimise(&unrestricted.restrict_outputs()).is_ok());
    }
}
