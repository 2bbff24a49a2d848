//! Shared fixtures and seeded random corpus generators for the integration
//! suites. Everything that touches randomness takes a caller-seeded ChaCha
//! generator so failures reproduce exactly.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treealg::dfta::Dfta;
use treealg::effectful::{Nfta, WeightVector, Wfta};
use treealg::quotient::Partition;
use treealg::semiring::{Bool, Rational, Semiring};
use treealg::term::{Context, Frontier, OutputSet, Signature};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// All tuples over `0..base` of the given length, rank order.
pub fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
        return out;
    }
    if base == 0 {
        return out;
    }
    let mut digits = vec![0usize; len];
    loop {
        out.push(digits.clone());
        let mut carry = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            return out;
        }
    }
}

/// A random alphabet: 1..=`max_symbols` symbols drawn from f/g/h with arities
/// up to `max_arity` (at least one symbol of positive arity so trees can
/// grow), and 1..=`max_leaves` leaves from x/y.
pub fn random_alphabet(
    rng: &mut ChaCha8Rng,
    max_symbols: usize,
    max_arity: usize,
    max_leaves: usize,
) -> (Signature, Frontier) {
    let names = ["f", "g", "h"];
    loop {
        let num_symbols = rng.gen_range(1..=max_symbols);
        let symbols: Vec<(&str, usize)> = names[..num_symbols]
            .iter()
            .map(|&n| (n, rng.gen_range(0..=max_arity)))
            .collect();
        if symbols.iter().all(|&(_, k)| k == 0) {
            continue;
        }
        let num_leaves = rng.gen_range(1..=max_leaves);
        let leaves = ["x", "y"][..num_leaves].to_vec();
        return (
            Signature::new(symbols).unwrap(),
            Frontier::new(leaves).unwrap(),
        );
    }
}

/// A random total deterministic automaton over the given alphabet with
/// 1..=`max_states` states and 1..=`max_outputs` output values.
pub fn random_dfta(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_states: usize,
    max_outputs: usize,
) -> Dfta {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
    let num_outputs = rng.gen_range(1..=max_outputs);
    let outputs = OutputSet::new((0..num_outputs).map(|v| v.to_string())).unwrap();
    let init: Vec<usize> = (0..frontier.len()).map(|_| rng.gen_range(0..n)).collect();
    let trans: Vec<Vec<usize>> = (0..sig.len())
        .map(|sym| {
            (0..n.pow(sig.arity(sym) as u32))
                .map(|_| rng.gen_range(0..n))
                .collect()
        })
        .collect();
    let out: Vec<usize> = (0..n).map(|_| rng.gen_range(0..num_outputs)).collect();
    Dfta::new(
        sig.clone(),
        frontier.clone(),
        outputs,
        states,
        init,
        trans,
        out,
    )
    .unwrap()
}

/// Trim to the reachable part and drop unused output values: the
/// normalisation minimisation expects.
pub fn cleaned(a: &Dfta) -> Dfta {
    a.trim_reachable().restrict_outputs()
}

/// A language-equal enlargement of `a`: every state may be duplicated, extra
/// junk states are added that nothing reachable ever enters, and the whole
/// state set is randomly permuted. Built so that the map "copy to original"
/// is a functional bisimulation on the non-junk part.
pub fn duplicated_with_junk(rng: &mut ChaCha8Rng, a: &Dfta) -> Dfta {
    let n = a.num_states();
    let dup_extra = rng.gen_range(1..=2);
    let junk_extra = rng.gen_range(1..=2);
    let total = n + dup_extra + junk_extra;

    // old index -> original state (None marks junk)
    let mut origin: Vec<Option<usize>> = (0..n).map(Some).collect();
    for _ in 0..dup_extra {
        origin.push(Some(rng.gen_range(0..n)));
    }
    for _ in 0..junk_extra {
        origin.push(None);
    }
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (old, o) in origin.iter().enumerate() {
        if let Some(q) = o {
            preimages[*q].push(old);
        }
    }

    // new index -> old index, then the inverse for rewriting targets
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    let mut pos = vec![0usize; total];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let pick = |q: usize, rng: &mut ChaCha8Rng| pos[*preimages[q].choose(rng).unwrap()];

    let states: Vec<String> = (0..total).map(|q| format!("d{q}")).collect();
    let init: Vec<usize> = (0..a.frontier().len())
        .map(|l| pick(a.init_of(l), rng))
        .collect();
    let out: Vec<usize> = order
        .iter()
        .map(|&old| match origin[old] {
            Some(q) => a.out_of(q),
            None => rng.gen_range(0..a.outputs().len()),
        })
        .collect();
    let trans: Vec<Vec<usize>> = (0..a.sig().len())
        .map(|sym| {
            tuples(total, a.sig().arity(sym))
                .into_iter()
                .map(|args| {
                    let originals: Option<Vec<usize>> =
                        args.iter().map(|&new| origin[order[new]]).collect();
                    match originals {
                        // tuples that only mention non-junk states must step
                        // like the original automaton
                        Some(qs) => pick(a.trans_of(sym, &qs), rng),
                        // tuples touching junk are unreachable; anything goes
                        None => rng.gen_range(0..total),
                    }
                })
                .collect()
        })
        .collect();
    Dfta::new(
        a.sig().clone(),
        a.frontier().clone(),
        a.outputs().clone(),
        states,
        init,
        trans,
        out,
    )
    .unwrap()
}

/// A random nondeterministic automaton with 1..=`max_states` states; initial
/// sets, images and final states are all sparse random subsets.
pub fn random_nfta(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_states: usize,
) -> Nfta {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
    let subset = |rng: &mut ChaCha8Rng, p: f64| -> BTreeSet<usize> {
        (0..n).filter(|_| rng.gen_bool(p)).collect()
    };
    let init: Vec<BTreeSet<usize>> = (0..frontier.len()).map(|_| subset(rng, 0.6)).collect();
    let trans: Vec<BTreeMap<Vec<usize>, BTreeSet<usize>>> = (0..sig.len())
        .map(|sym| {
            let mut map = BTreeMap::new();
            for args in tuples(n, sig.arity(sym)) {
                if rng.gen_bool(0.7) {
                    let image = subset(rng, 0.5);
                    if !image.is_empty() {
                        map.insert(args, image);
                    }
                }
            }
            map
        })
        .collect();
    let final_states = subset(rng, 0.5);
    Nfta::new(
        sig.clone(),
        frontier.clone(),
        states,
        init,
        trans,
        final_states,
    )
    .unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.5) {
        Rational::zero()
    } else {
        let numer = rng.gen_range(-2..=2i64);
        let denom = rng.gen_range(1..=2i64);
        Rational::new(numer, denom).unwrap()
    }
}

fn random_bool_weight(rng: &mut ChaCha8Rng) -> Bool {
    Bool(rng.gen_bool(0.5))
}

fn random_wfta<S: Semiring>(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_states: usize,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> S,
) -> Wfta<S> {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
    let vector = |rng: &mut ChaCha8Rng,
                  weight: &mut dyn FnMut(&mut ChaCha8Rng) -> S|
     -> WeightVector<S> { WeightVector((0..n).map(|_| weight(rng)).collect()) };
    let init: Vec<WeightVector<S>> = (0..frontier.len())
        .map(|_| vector(rng, &mut weight))
        .collect();
    let trans: Vec<Vec<S>> = (0..sig.len())
        .map(|sym| {
            (0..n.pow(sig.arity(sym) as u32) * n)
                .map(|_| weight(rng))
                .collect()
        })
        .collect();
    let out = vector(rng, &mut weight);
    Wfta::new(sig.clone(), frontier.clone(), states, init, trans, out).unwrap()
}

pub fn random_wfta_rational(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_states: usize,
) -> Wfta<Rational> {
    random_wfta(rng, sig, frontier, max_states, random_rational)
}

pub fn random_wfta_bool(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_states: usize,
) -> Wfta<Bool> {
    random_wfta(rng, sig, frontier, max_states, random_bool_weight)
}

/// Every partition of `0..n`, via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn extend(rgs: &mut Vec<usize>, blocks: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if rgs.len() == n {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=blocks {
            rgs.push(b);
            extend(rgs, blocks.max(b + 1), n, out);
            rgs.pop();
        }
    }
    let mut raw = Vec::new();
    extend(&mut Vec::new(), 0, n, &mut raw);
    raw.iter().map(|v| Partition::kernel(v).unwrap()).collect()
}

/// The kernel of the output map, as a partition of the states.
pub fn output_kernel_of(a: &Dfta) -> Partition {
    let values: Vec<usize> = (0..a.num_states()).map(|q| a.out_of(q)).collect();
    Partition::kernel(&values).unwrap()
}

/// A random context of height <= `max_height` with at least one hole.
pub fn random_context(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
) -> Context {
    fn grow(
        rng: &mut ChaCha8Rng,
        sig: &Signature,
        frontier: &Frontier,
        inner: &[usize],
        height_left: usize,
    ) -> Context {
        if height_left == 0 || inner.is_empty() || rng.gen_bool(0.4) {
            if rng.gen_bool(0.5) {
                Context::Hole
            } else {
                Context::Leaf(rng.gen_range(0..frontier.len()))
            }
        } else {
            let sym = *inner.choose(rng).unwrap();
            let children = (0..sig.arity(sym))
                .map(|_| grow(rng, sig, frontier, inner, height_left - 1))
                .collect();
            Context::Node(sym, children)
        }
    }
    let inner: Vec<usize> = (0..sig.len()).filter(|&s| sig.arity(s) > 0).collect();
    loop {
        let c = grow(rng, sig, frontier, &inner, max_height);
        if c.hole_count() > 0 && c.height() <= max_height {
            return c;
        }
    }
}
