//! Exhaustive generators for small populations of terms.

use crate::term::{Atom, Term};

/// All basic forms over `atoms` of depth at most `max_depth`, constants first.
pub fn basic_forms(atoms: &[Atom], max_depth: usize) -> Vec<Term> {
    let mut level = vec![Term::T, Term::F];
    for _ in 0..max_depth {
        let mut next = vec![Term::T, Term::F];
        for a in atoms {
            for x in &level {
                for z in &level {
                    next.push(Term::cond(x.clone(), Term::atom(a), z.clone()));
                }
            }
        }
        level = next;
    }
    level
}

/// All terms built from `leaves` by conditional composition with nesting
/// height at most `height`.
pub fn terms_of_height(leaves: &[Term], height: usize) -> Vec<Term> {
    let mut level = leaves.to_vec();
    for _ in 0..height {
        let mut next = leaves.to_vec();
        for y in &level {
            for x in &level {
                for z in &level {
                    next.push(Term::cond(x.clone(), y.clone(), z.clone()));
                }
            }
        }
        level = next;
    }
    level
}

/// `T`, `F` and the given atoms.
pub fn leaves(atoms: &[Atom]) -> Vec<Term> {
    let mut v = vec![Term::T, Term::F];
    v.extend(atoms.iter().map(Term::atom));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{atom, depth, is_basic};

    #[test]
    fn counts() {
        let ab = [atom("a"), atom("b")];
        assert_eq!(basic_forms(&ab, 0).len(), 2);
        assert_eq!(basic_forms(&ab, 1).len(), 10);
        assert_eq!(basic_forms(&ab, 2).len(), 202);
        let b2 = basic_forms(&ab, 2);
        assert!(b2.iter().all(|t| is_basic(t) && depth(t) <= 2));
        assert_eq!(terms_of_height(&leaves(&ab), 1).len(), 4 + 64);
    }
}
