//! Ranked alphabets, trees, contexts, and bounded enumeration.
//!
//! A [`Signature`] lists operation symbols with fixed arities; a [`Frontier`]
//! lists the leaf names trees may end in. Both draw from the same token
//! grammar and must not overlap. Trees are written `f(g(x),y)` with nullary
//! symbols bare; a [`Context`] is a tree that may additionally contain the
//! hole `_`, and [`plug`] substitutes the *same* tree into every hole.
//!
//! [`enumerate_trees`] and [`enumerate_contexts`] list all trees/contexts up
//! to a height bound, ordered by height and then lexicographically by rendered
//! text. Enumeration is budgeted by total node count (default
//! [`DEFAULT_ENUM_CAP`]) so runaway signatures fail fast instead of thrashing.

use crate::error::{Error, Result};

/// Characters that can never appear inside a name: the tree grammar claims
/// `( ) , _` and the automaton file format claims `{ } + / : ; # - >`.
pub const RESERVED: &[char] = &[
    '(', ')', ',', '_', '{', '}', '+', '/', ':', ';', '#', '-', '>',
];

/// Default budget for enumeration: total nodes across all produced terms.
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

/// True iff `s` may serve as a symbol, leaf, state or output name.
pub fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && !RESERVED.contains(&c))
}

fn check_token(s: &str, role: &str) -> Result<()> {
    if valid_token(s) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "invalid {role} name {s:?}: names are nonempty and contain no whitespace or reserved characters"
        )))
    }
}

fn check_distinct(names: &[&str], role: &str) -> Result<()> {
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(Error::invalid(format!("duplicate {role} name {a:?}")));
        }
    }
    Ok(())
}

/// A ranked alphabet: operation symbols with fixed arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<(String, usize)>, // name, arity
}

impl Signature {
    /// Builds a signature, rejecting empty lists, bad tokens and duplicates.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let symbols: Vec<(String, usize)> =
            symbols.into_iter().map(|(s, k)| (s.into(), k)).collect();
        if symbols.is_empty() {
            return Err(Error::invalid("a signature needs at least one symbol"));
        }
        for (name, _) in &symbols {
            check_token(name, "symbol")?;
        }
        let names: Vec<&str> = symbols.iter().map(|(n, _)| n.as_str()).collect();
        check_distinct(&names, "symbol")?;
        Ok(Signature { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // `new` rejects empty symbol lists
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].0
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    /// Symbols in declaration order as `(name, arity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, k)| (n.as_str(), *k))
    }
}

/// The leaf alphabet trees are built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    leaves: Vec<String>,
}

impl Frontier {
    /// Builds a frontier, rejecting empty lists, bad tokens and duplicates.
    pub fn new<I, S>(leaves: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let leaves: Vec<String> = leaves.into_iter().map(Into::into).collect();
        if leaves.is_empty() {
            return Err(Error::invalid("a frontier needs at least one leaf"));
        }
        for name in &leaves {
            check_token(name, "leaf")?;
        }
        let names: Vec<&str> = leaves.iter().map(String::as_str).collect();
        check_distinct(&names, "leaf")?;
        Ok(Frontier { leaves })
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        false // `new` rejects empty leaf lists
    }

    pub fn name(&self, leaf: usize) -> &str {
        &self.leaves[leaf]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.leaves.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.leaves.iter().map(String::as_str)
    }
}

/// The finite set of output values an automaton may emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSet {
    values: Vec<String>,
}

impl OutputSet {
    /// Builds an output set, rejecting empty lists, bad tokens and duplicates.
    pub fn new<I, S>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::invalid("an output set needs at least one value"));
        }
        for v in &values {
            check_token(v, "output")?;
        }
        let names: Vec<&str> = values.iter().map(String::as_str).collect();
        check_distinct(&names, "output")?;
        Ok(OutputSet { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // `new` rejects empty value lists
    }

    pub fn value(&self, idx: usize) -> &str {
        &self.values[idx]
    }

    pub fn index_of(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(String::as_str)
    }

    /// True iff both sets contain the same values, ignoring order.
    pub fn same_values(&self, other: &OutputSet) -> bool {
        self.len() == other.len() && self.iter().all(|v| other.index_of(v).is_some())
    }
}

/// Ensures symbol and leaf names do not overlap, so bare names parse uniquely.
pub(crate) fn check_disjoint(sig: &Signature, frontier: &Frontier) -> Result<()> {
    for name in frontier.iter() {
        if sig.index_of(name).is_some() {
            return Err(Error::invalid(format!(
                "name {name:?} is declared both as a symbol and as a leaf"
            )));
        }
    }
    Ok(())
}

/// A finite tree over a signature and frontier, stored with index references.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf(usize),
    Node(usize, Vec<Tree>),
}

impl Tree {
    /// Height: leaves and nullary nodes are 0, otherwise 1 + max child height.
    pub fn height(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, children) => children.iter().map(Tree::height).max().map_or(0, |h| h + 1),
        }
    }

    /// Total number of nodes, counting leaves.
    pub fn node_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, children) => 1 + children.iter().map(Tree::node_count).sum::<usize>(),
        }
    }

    /// Checks that every index is in range and every node matches its arity.
    pub fn well_formed(&self, sig: &Signature, frontier: &Frontier) -> Result<()> {
        match self {
            Tree::Leaf(l) if *l < frontier.len() => Ok(()),
            Tree::Leaf(l) => Err(Error::invalid(format!(
                "tree does not match the alphabet: leaf index {l} out of range"
            ))),
            Tree::Node(sym, children) => {
                if *sym >= sig.len() {
                    return Err(Error::invalid(format!(
                        "tree does not match the alphabet: symbol index {sym} out of range"
                    )));
                }
                if sig.arity(*sym) != children.len() {
                    return Err(Error::invalid(format!(
                        "tree does not match the alphabet: symbol {} expects {} argument(s), found {}",
                        sig.name(*sym),
                        sig.arity(*sym),
                        children.len()
                    )));
                }
                children
                    .iter()
                    .try_for_each(|c| c.well_formed(sig, frontier))
            }
        }
    }

    /// Renders the tree back into the `f(g(x),y)` grammar.
    pub fn render(&self, sig: &Signature, frontier: &Frontier) -> String {
        let mut out = String::new();
        self.render_into(&mut out, sig, frontier);
        out
    }

    fn render_into(&self, out: &mut String, sig: &Signature, frontier: &Frontier) {
        match self {
            Tree::Leaf(l) => out.push_str(frontier.name(*l)),
            Tree::Node(sym, children) => {
                out.push_str(sig.name(*sym));
                if !children.is_empty() {
                    out.push('(');
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        c.render_into(out, sig, frontier);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// A tree that may contain holes `_`; plugging fills every hole with the same
/// tree. A context with no holes is permitted and plugs to itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Context {
    Hole,
    Leaf(usize),
    Node(usize, Vec<Context>),
}

impl Context {
    pub fn height(&self) -> usize {
        match self {
            Context::Hole | Context::Leaf(_) => 0,
            Context::Node(_, children) => children
                .iter()
                .map(Context::height)
                .max()
                .map_or(0, |h| h + 1),
        }
    }

    /// Total number of nodes, counting leaves and holes.
    pub fn node_count(&self) -> usize {
        match self {
            Context::Hole | Context::Leaf(_) => 1,
            Context::Node(_, children) => {
                1 + children.iter().map(Context::node_count).sum::<usize>()
            }
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Context::Hole => 1,
            Context::Leaf(_) => 0,
            Context::Node(_, children) => children.iter().map(Context::hole_count).sum(),
        }
    }

    /// The underlying tree, if the context contains no hole.
    pub fn to_tree(&self) -> Option<Tree> {
        match self {
            Context::Hole => None,
            Context::Leaf(l) => Some(Tree::Leaf(*l)),
            Context::Node(sym, children) => {
                let children: Option<Vec<Tree>> = children.iter().map(Context::to_tree).collect();
                Some(Tree::Node(*sym, children?))
            }
        }
    }

    /// Nests `inner` into every hole of `self`, so that
    /// `plug(&c1.compose(&c2), t) == plug(&c1, &plug(&c2, t))`.
    pub fn compose(&self, inner: &Context) -> Context {
        match self {
            Context::Hole => inner.clone(),
            Context::Leaf(l) => Context::Leaf(*l),
            Context::Node(sym, children) => {
                Context::Node(*sym, children.iter().map(|c| c.compose(inner)).collect())
            }
        }
    }

    pub fn render(&self, sig: &Signature, frontier: &Frontier) -> String {
        let mut out = String::new();
        self.render_into(&mut out, sig, frontier);
        out
    }

    fn render_into(&self, out: &mut String, sig: &Signature, frontier: &Frontier) {
        match self {
            Context::Hole => out.push('_'),
            Context::Leaf(l) => out.push_str(frontier.name(*l)),
            Context::Node(sym, children) => {
                out.push_str(sig.name(*sym));
                if !children.is_empty() {
                    out.push('(');
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        c.render_into(out, sig, frontier);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// Fills every hole of `context` with (a copy of) the same `tree`.
pub fn plug(context: &Context, tree: &Tree) -> Tree {
    match context {
        Context::Hole => tree.clone(),
        Context::Leaf(l) => Tree::Leaf(*l),
        Context::Node(sym, children) => {
            Tree::Node(*sym, children.iter().map(|c| plug(c, tree)).collect())
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Reads a maximal run of token characters; errors on an empty run.
    fn name(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !c.is_whitespace() && !RESERVED.contains(&c)) {
            self.bump();
        }
        if self.pos == start {
            return Err(Error::syntax(start, "expected a name"));
        }
        Ok((start, &self.src[start..self.pos]))
    }
}

fn parse_term(
    cur: &mut Cursor,
    sig: &Signature,
    frontier: &Frontier,
    allow_hole: bool,
) -> Result<Context> {
    cur.skip_ws();
    match cur.peek() {
        None => Err(Error::syntax(cur.pos, "expected a tree")),
        Some('_') => {
            if allow_hole {
                cur.bump();
                Ok(Context::Hole)
            } else {
                Err(Error::syntax(cur.pos, "hole `_` is not allowed in a tree"))
            }
        }
        Some(_) => {
            let (start, name) = cur.name()?;
            cur.skip_ws();
            if cur.eat('(') {
                let mut args = Vec::new();
                cur.skip_ws();
                if !cur.eat(')') {
                    loop {
                        args.push(parse_term(cur, sig, frontier, allow_hole)?);
                        cur.skip_ws();
                        if cur.eat(')') {
                            break;
                        }
                        if !cur.eat(',') {
                            return Err(Error::syntax(cur.pos, "expected `,` or `)`"));
                        }
                    }
                }
                match sig.index_of(name) {
                    Some(sym) if sig.arity(sym) == args.len() => Ok(Context::Node(sym, args)),
                    Some(sym) => Err(Error::syntax(
                        start,
                        format!(
                            "symbol {name} expects {} argument(s), found {}",
                            sig.arity(sym),
                            args.len()
                        ),
                    )),
                    None if frontier.index_of(name).is_some() => Err(Error::syntax(
                        start,
                        format!("leaf {name} cannot take arguments"),
                    )),
                    None => Err(Error::syntax(start, format!("unknown symbol {name}"))),
                }
            } else if let Some(leaf) = frontier.index_of(name) {
                Ok(Context::Leaf(leaf))
            } else {
                match sig.index_of(name) {
                    Some(sym) if sig.arity(sym) == 0 => Ok(Context::Node(sym, Vec::new())),
                    Some(sym) => Err(Error::syntax(
                        start,
                        format!(
                            "symbol {name} expects {} argument(s), found none",
                            sig.arity(sym)
                        ),
                    )),
                    None => Err(Error::syntax(start, format!("unknown name {name}"))),
                }
            }
        }
    }
}

fn parse_entry(
    text: &str,
    sig: &Signature,
    frontier: &Frontier,
    allow_hole: bool,
) -> Result<Context> {
    check_disjoint(sig, frontier)?;
    let mut cur = Cursor::new(text);
    let term = parse_term(&mut cur, sig, frontier, allow_hole)?;
    cur.skip_ws();
    if cur.pos < text.len() {
        return Err(Error::syntax(cur.pos, "unexpected trailing input"));
    }
    Ok(term)
}

/// Parses a tree literal like `f(g(x),y)`; errors carry a byte offset.
pub fn parse_tree(text: &str, sig: &Signature, frontier: &Frontier) -> Result<Tree> {
    let term = parse_entry(text, sig, frontier, false)?;
    Ok(term.to_tree().expect("holes are rejected during parsing"))
}

/// Parses a context literal like `f(_,g(_))`; errors carry a byte offset.
pub fn parse_context(text: &str, sig: &Signature, frontier: &Frontier) -> Result<Context> {
    parse_entry(text, sig, frontier, true)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Node budget shared by one enumeration run.
struct Budget {
    left: usize,
    cap: usize,
}

impl Budget {
    fn charge(&mut self, nodes: usize) -> Result<()> {
        if nodes > self.left {
            return Err(Error::ResourceLimit(format!(
                "enumeration exceeds the cap of {} nodes; raise the cap or lower the height",
                self.cap
            )));
        }
        self.left -= nodes;
        Ok(())
    }
}

/// Generates all terms of height <= `max_height`, optionally over the frontier
/// extended with the hole. Within each height class terms are sorted by
/// rendered text; classes are concatenated in height order.
fn generate(
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
    cap: usize,
    with_hole: bool,
) -> Result<Vec<(Context, String)>> {
    check_disjoint(sig, frontier)?;
    let mut budget = Budget { left: cap, cap };

    let mut atoms: Vec<(Context, String)> = Vec::new();
    if with_hole {
        atoms.push((Context::Hole, "_".to_string()));
    }
    for (leaf, name) in frontier.iter().enumerate() {
        atoms.push((Context::Leaf(leaf), name.to_string()));
    }
    for (sym, (name, arity)) in sig.iter().enumerate() {
        if arity == 0 {
            atoms.push((Context::Node(sym, Vec::new()), name.to_string()));
        }
    }
    budget.charge(atoms.len())?;
    atoms.sort_by(|a, b| a.1.cmp(&b.1));

    // `cum` holds all terms of height <= h, grouped by ascending height class;
    // a term has height exactly h iff its index is >= the previous cumulative
    // length, which is what the "at least one child of maximal height" filter
    // below relies on.
    let mut cum = atoms;
    let mut prev_len = 0;
    for _ in 1..=max_height {
        let base = cum.len();
        let mut class: Vec<(Context, String)> = Vec::new();
        for (sym, (name, arity)) in sig.iter().enumerate() {
            if arity == 0 {
                continue;
            }
            let mut digits = vec![0usize; arity];
            loop {
                if digits.iter().any(|&d| d >= prev_len) {
                    let children: Vec<Context> = digits.iter().map(|&d| cum[d].0.clone()).collect();
                    let node = Context::Node(sym, children);
                    budget.charge(node.node_count())?;
                    let mut text = String::from(name);
                    text.push('(');
                    for (i, &d) in digits.iter().enumerate() {
                        if i > 0 {
                            text.push(',');
                        }
                        text.push_str(&cum[d].1);
                    }
                    text.push(')');
                    class.push((node, text));
                }
                // mixed-radix increment, rightmost digit fastest
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
                    break;
                }
            }
        }
        if class.is_empty() {
            break; // no taller terms exist (e.g. unary-free signatures)
        }
        class.sort_by(|a, b| a.1.cmp(&b.1));
        prev_len = base;
        cum.extend(class);
    }
    Ok(cum)
}

/// All trees of height <= `max_height`, ordered by height then rendered text,
/// with the default node budget.
pub fn enumerate_trees(
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
) -> Result<Vec<Tree>> {
    enumerate_trees_capped(sig, frontier, max_height, DEFAULT_ENUM_CAP)
}

/// [`enumerate_trees`] with an explicit node budget.
pub fn enumerate_trees_capped(
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
    cap: usize,
) -> Result<Vec<Tree>> {
    let terms = generate(sig, frontier, max_height, cap, false)?;
    Ok(terms
        .into_iter()
        .map(|(c, _)| c.to_tree().expect("generated without holes"))
        .collect())
}

/// All contexts of height <= `max_height` containing at least one hole,
/// ordered by height then rendered text, with the default node budget.
///
/// The budget counts every generated candidate, including the hole-free ones
/// that are filtered out at the end.
pub fn enumerate_contexts(
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
) -> Result<Vec<Context>> {
    enumerate_contexts_capped(sig, frontier, max_height, DEFAULT_ENUM_CAP)
}

/// [`enumerate_contexts`] with an explicit node budget.
pub fn enumerate_contexts_capped(
    sig: &Signature,
    frontier: &Frontier,
    max_height: usize,
    cap: usize,
) -> Result<Vec<Context>> {
    let terms = generate(sig, frontier, max_height, cap, true)?;
    Ok(terms
        .into_iter()
        .filter(|(c, _)| c.hole_count() > 0)
        .map(|(c, _)| c)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig_fg() -> Signature {
        Signature::new([("f", 2), ("g", 1)]).unwrap()
    }

    fn fr_xy() -> Frontier {
        Frontier::new(["x", "y"]).unwrap()
    }

    fn renders(trees: &[Tree], sig: &Signature, fr: &Frontier) -> Vec<String> {
        trees.iter().map(|t| t.render(sig, fr)).collect()
    }

    #[test]
    fn token_validation() {
        assert!(valid_token("q0"));
        assert!(valid_token("f"));
        assert!(!valid_token(""));
        assert!(!valid_token("a b"));
        assert!(!valid_token("bad-name"));
        assert!(!valid_token("f/2"));
        assert!(!valid_token("q{0}"));
        assert!(!valid_token("_"));
    }

    #[test]
    fn alphabet_construction_rejects_bad_input() {
        assert!(Signature::new(Vec::<(String, usize)>::new()).is_err());
        assert!(Signature::new([("f", 2), ("f", 1)]).is_err());
        assert!(Signature::new([("f(", 2)]).is_err());
        assert!(Frontier::new(Vec::<String>::new()).is_err());
        assert!(Frontier::new(["x", "x"]).is_err());
        assert!(OutputSet::new(["0", "0"]).is_err());
        // overlapping symbol/leaf names are caught when the pair is used
        let sig = Signature::new([("x", 1)]).unwrap();
        let fr = Frontier::new(["x"]).unwrap();
        assert!(parse_tree("x", &sig, &fr).is_err());
    }

    #[test]
    fn parse_and_render_round_trip() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let t = parse_tree("f(g(x),y)", &sig, &fr).unwrap();
        assert_eq!(t.render(&sig, &fr), "f(g(x),y)");
        assert_eq!(t.height(), 2);
        assert_eq!(t.node_count(), 4);
        // whitespace is insignificant
        let spaced = parse_tree(" f( g( x ) , y ) ", &sig, &fr).unwrap();
        assert_eq!(spaced, t);
    }

    #[test]
    fn nullary_symbols_parse_bare_or_with_parens() {
        let sig = Signature::new([("f", 2), ("c", 0)]).unwrap();
        let fr = Frontier::new(["x"]).unwrap();
        let bare = parse_tree("c", &sig, &fr).unwrap();
        let parens = parse_tree("c()", &sig, &fr).unwrap();
        assert_eq!(bare, parens);
        assert_eq!(bare.render(&sig, &fr), "c");
        assert_eq!(bare.height(), 0);
        assert_eq!(
            parse_tree("f(c,x)", &sig, &fr).unwrap().render(&sig, &fr),
            "f(c,x)"
        );
    }

    #[test]
    fn parse_errors_carry_byte_offsets() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let offset = |r: Result<Tree>| match r {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("expected a syntax error, got {other:?}"),
        };
        assert_eq!(offset(parse_tree("f(x,", &sig, &fr)), 4);
        assert_eq!(offset(parse_tree("f(x)", &sig, &fr)), 0);
        assert_eq!(offset(parse_tree("h(x)", &sig, &fr)), 0);
        assert_eq!(offset(parse_tree("x(y)", &sig, &fr)), 0);
        assert_eq!(offset(parse_tree("f(x,y)z", &sig, &fr)), 6);
        assert_eq!(offset(parse_tree("", &sig, &fr)), 0);
        assert_eq!(offset(parse_tree("f(x,_)", &sig, &fr)), 4);
        assert_eq!(offset(parse_tree("g", &sig, &fr)), 0);
    }

    #[test]
    fn contexts_parse_holes_and_count_them() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let c = parse_context("f(_,g(_))", &sig, &fr).unwrap();
        assert_eq!(c.hole_count(), 2);
        assert_eq!(c.render(&sig, &fr), "f(_,g(_))");
        assert_eq!(parse_context("_", &sig, &fr).unwrap(), Context::Hole);
        // a hole-free context is allowed and converts to a tree
        let plain = parse_context("f(x,y)", &sig, &fr).unwrap();
        assert_eq!(plain.hole_count(), 0);
        assert!(plain.to_tree().is_some());
        assert!(c.to_tree().is_none());
    }

    #[test]
    fn plug_fills_every_hole_with_the_same_tree() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let t = parse_tree("g(y)", &sig, &fr).unwrap();
        let c = parse_context("f(_,x)", &sig, &fr).unwrap();
        assert_eq!(plug(&c, &t).render(&sig, &fr), "f(g(y),x)");
        let c2 = parse_context("f(_,_)", &sig, &fr).unwrap();
        let x = parse_tree("x", &sig, &fr).unwrap();
        assert_eq!(plug(&c2, &x).render(&sig, &fr), "f(x,x)");
        // no holes: plugging returns the underlying tree
        let c3 = parse_context("g(x)", &sig, &fr).unwrap();
        assert_eq!(plug(&c3, &t).render(&sig, &fr), "g(x)");
    }

    #[test]
    fn compose_nests_and_distributes_over_plug() {
        let sig = Signature::new([("f", 2)]).unwrap();
        let fr = Frontier::new(["x"]).unwrap();
        let contexts = enumerate_contexts(&sig, &fr, 2).unwrap();
        let trees = enumerate_trees(&sig, &fr, 1).unwrap();
        for c1 in &contexts {
            for c2 in &contexts {
                let nested = c1.compose(c2);
                assert_eq!(nested.hole_count(), c1.hole_count() * c2.hole_count());
                for t in &trees {
                    assert_eq!(plug(&nested, t), plug(c1, &plug(c2, t)));
                }
            }
        }
    }

    #[test]
    fn enumerates_all_trees_up_to_height_one() {
        let sig = Signature::new([("f", 2)]).unwrap();
        let trees = enumerate_trees(&sig, &fr_xy(), 1).unwrap();
        assert_eq!(
            renders(&trees, &sig, &fr_xy()),
            ["x", "y", "f(x,x)", "f(x,y)", "f(y,x)", "f(y,y)"]
        );
    }

    #[test]
    fn enumerates_all_contexts_up_to_height_one() {
        let sig = Signature::new([("f", 2)]).unwrap();
        let fr = Frontier::new(["x"]).unwrap();
        let contexts = enumerate_contexts(&sig, &fr, 1).unwrap();
        let texts: Vec<String> = contexts.iter().map(|c| c.render(&sig, &fr)).collect();
        assert_eq!(texts, ["_", "f(_,_)", "f(_,x)", "f(x,_)"]);
    }

    /// Counting oracle: |T(<=0)| = leaves + nullaries and
    /// |T(<=h)| = leaves + nullaries + sum over symbols of |T(<=h-1)|^arity.
    fn count_oracle(sig: &Signature, leaves: usize, max_height: usize) -> usize {
        let mut count = leaves + sig.iter().filter(|(_, k)| *k == 0).count();
        for _ in 0..max_height {
            count = leaves
                + sig
                    .iter()
                    .map(|(_, k)| if k == 0 { 1 } else { count.pow(k as u32) })
                    .sum::<usize>();
        }
        count
    }

    #[test]
    fn enumeration_counts_match_the_recurrence() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let expected = [2, 8, 74, 5552];
        for (h, want) in expected.iter().enumerate() {
            let got = enumerate_trees_capped(&sig, &fr, h, 10_000_000)
                .unwrap()
                .len();
            assert_eq!(got, *want);
            assert_eq!(count_oracle(&sig, fr.len(), h), *want);
        }
        // contexts = terms over the frontier extended with the hole, minus
        // the hole-free ones
        let ctx_expected = [1, 7, 169];
        for (h, want) in ctx_expected.iter().enumerate() {
            let got = enumerate_contexts(&sig, &fr, h).unwrap().len();
            assert_eq!(got, *want);
            assert_eq!(
                count_oracle(&sig, fr.len() + 1, h) - count_oracle(&sig, fr.len(), h),
                *want
            );
        }
    }

    #[test]
    fn enumeration_order_is_height_then_text_and_extends_by_height() {
        let (sig, fr) = (sig_fg(), fr_xy());
        let upto2 = enumerate_trees(&sig, &fr, 2).unwrap();
        let upto3 = enumerate_trees_capped(&sig, &fr, 3, 10_000_000).unwrap();
        assert_eq!(&upto3[..upto2.len()], &upto2[..]);
        let mut prev: Option<(usize, String)> = None;
        for t in &upto2 {
            let key = (t.height(), t.render(&sig, &fr));
            if let Some(p) = &prev {
                assert!(*p < key, "{p:?} !< {key:?}");
            }
            prev = Some(key);
        }
        // declaration order of leaves does not leak into the ordering
        let reversed = Frontier::new(["y", "x"]).unwrap();
        let leaves = enumerate_trees(&sig, &reversed, 0).unwrap();
        assert_eq!(renders(&leaves, &sig, &reversed), ["x", "y"]);
    }

    #[test]
    fn enumeration_respects_the_node_budget() {
        let (sig, fr) = (sig_fg(), fr_xy());
        match enumerate_trees_capped(&sig, &fr, 3, 1000) {
            Err(Error::ResourceLimit(_)) => {}
            other => panic!("expected a resource limit, got {other:?}"),
        }
    }
}
