//! Shared fixtures for the unit tests.

use crate::dfta::Dfta;
use crate::term::{Frontier, OutputSet, Signature};

/// Two-state parity automaton over `f/2, g/1` and leaves `x, y`: the output
/// is the number of `y` leaves modulo 2 (`f` adds, `g` forwards).
pub(crate) fn a0() -> Dfta {
    Dfta::new(
        Signature::new([("f", 2), ("g", 1)]).unwrap(),
        Frontier::new(["x", "y"]).unwrap(),
        OutputSet::new(["0", "1"]).unwrap(),
        vec!["q0".into(), "q1".into()],
        vec![0, 1],
        vec![vec![0, 1, 1, 0], vec![0, 1]],
        vec![0, 1],
    )
    .unwrap()
}
