//! The term language: constants, atoms and conditional composition.
//!
//! `Term::cond(x, y, z)` is read "if `y` then `x` else `z`". Terms are
//! immutable values with shared subterms, so cloning is cheap.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Words of the concrete syntax that can never name an atom.
pub const RESERVED: [&str; 12] =
    ["T", "F", "not", "land", "rand", "lor", "ror", "limp", "rimp", "liff", "riff", "then"];

/// An atomic proposition, compared and ordered by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Atom> {
        if is_atom_name(name) && !RESERVED.contains(&name) {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(Error::InvalidAtom(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Lowercase letter followed by lowercase letters, digits or underscores.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Shorthand for building atoms from literals known to be valid.
///
/// Panics on an invalid name.
pub fn atom(name: &str) -> Atom {
    Atom::new(name).unwrap_or_else(|e| panic!("{e}"))
}

/// A propositional statement.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    T,
    F,
    Atom(Atom),
    Cond(Arc<Term>, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn cond(x: Term, y: Term, z: Term) -> Term {
        Term::Cond(Arc::new(x), Arc::new(y), Arc::new(z))
    }

    pub fn atom(a: &Atom) -> Term {
        Term::Atom(a.clone())
    }

    /// `T <| a |> F`, the basic form of an atom.
    pub fn basic_atom(a: &Atom) -> Term {
        Term::cond(Term::T, Term::atom(a), Term::F)
    }

    pub fn constant(value: bool) -> Term {
        if value {
            Term::T
        } else {
            Term::F
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::T | Term::F)
    }

    /// The atom in central position of `x <| a |> y`, if any.
    pub fn central_atom(&self) -> Option<&Atom> {
        match self {
            Term::Cond(_, c, _) => match c.as_ref() {
                Term::Atom(a) => Some(a),
                _ => None,
            },
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Cond(x, y, z) => 1 + x.size() + y.size() + z.size(),
            _ => 1,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

/// Valuation congruences and the memorizing side branches used by `sat`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Variety {
    Fr,
    Rp,
    Cr,
    Wm,
    Mem,
    St,
    Pmem,
    Nmem,
    CrPmem,
    WmPmem,
    CrNmem,
    WmNmem,
}

impl Variety {
    /// The six congruences, finest first.
    pub const CHAIN: [Variety; 6] = [Variety::Fr, Variety::Rp, Variety::Cr, Variety::Wm, Variety::Mem, Variety::St];

    pub const ALL: [Variety; 12] = [
        Variety::Fr,
        Variety::Rp,
        Variety::Cr,
        Variety::Wm,
        Variety::Mem,
        Variety::St,
        Variety::Pmem,
        Variety::Nmem,
        Variety::CrPmem,
        Variety::WmPmem,
        Variety::CrNmem,
        Variety::WmNmem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variety::Fr => "fr",
            Variety::Rp => "rp",
            Variety::Cr => "cr",
            Variety::Wm => "wm",
            Variety::Mem => "mem",
            Variety::St => "st",
            Variety::Pmem => "Pmem",
            Variety::Nmem => "Nmem",
            Variety::CrPmem => "crPmem",
            Variety::WmPmem => "wmPmem",
            Variety::CrNmem => "crNmem",
            Variety::WmNmem => "wmNmem",
        }
    }

    /// Position in the fr..st chain, `None` for the Pmem/Nmem branches.
    pub fn chain_index(self) -> Option<usize> {
        Variety::CHAIN.iter().position(|&k| k == self)
    }

    pub fn in_chain(self) -> bool {
        self.chain_index().is_some()
    }

    /// True when every `self`-congruence is also an `other`-congruence.
    pub fn finer_or_equal(self, other: Variety) -> bool {
        match (self.chain_index(), other.chain_index()) {
            (Some(i), Some(j)) => i <= j,
            _ => self == other,
        }
    }

    pub(crate) fn require_chain(self) -> Result<()> {
        if self.in_chain() {
            Ok(())
        } else {
            Err(Error::UnsupportedVariety(self.name().to_string()))
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variety {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variety> {
        Variety::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variety `{s}`")))
    }
}

/// Longest query path: constants 0, atoms 1, `depth(y) + max(depth x, depth z)`.
pub fn depth(t: &Term) -> usize {
    match t {
        Term::T | Term::F => 0,
        Term::Atom(_) => 1,
        Term::Cond(x, y, z) => depth(y) + depth(x).max(depth(z)),
    }
}

pub fn atoms(t: &Term) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    collect_atoms(t, &mut out);
    out
}

pub(crate) fn collect_atoms(t: &Term, out: &mut BTreeSet<Atom>) {
    match t {
        Term::T | Term::F => {}
        Term::Atom(a) => {
            out.insert(a.clone());
        }
        Term::Cond(x, y, z) => {
            collect_atoms(x, out);
            collect_atoms(y, out);
            collect_atoms(z, out);
        }
    }
}

/// `[r/a]t`: replace every occurrence of atom `a` by `r`.
pub fn subst_atom(t: &Term, a: &Atom, r: &Term) -> Term {
    match t {
        Term::Atom(b) if b == a => r.clone(),
        Term::Cond(x, y, z) => Term::cond(subst_atom(x, a, r), subst_atom(y, a, r), subst_atom(z, a, r)),
        _ => t.clone(),
    }
}

/// Atoms at positive positions: the central atoms along the leftmost spine.
pub fn pos(p: &Term) -> BTreeSet<Atom> {
    spine(p, true)
}

/// Atoms at negative positions: the central atoms along the rightmost spine.
pub fn neg(p: &Term) -> BTreeSet<Atom> {
    spine(p, false)
}

fn spine(p: &Term, left: bool) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    let mut cur = p;
    while let Term::Cond(x, c, z) = cur {
        if let Term::Atom(a) = c.as_ref() {
            out.insert(a.clone());
        }
        cur = if left { x } else { z };
    }
    out
}

/// Leaves are constants and every central condition is an atom.
pub fn is_basic(t: &Term) -> bool {
    match t {
        Term::T | Term::F => true,
        Term::Atom(_) => false,
        Term::Cond(x, y, z) => matches!(y.as_ref(), Term::Atom(_)) && is_basic(x) && is_basic(z),
    }
}

/// Membership in the k-basic forms. Branch varieties use plain basic forms.
pub fn is_k_basic(t: &Term, k: Variety) -> bool {
    if !is_basic(t) {
        return false;
    }
    match k {
        Variety::Rp => is_rp_basic(t),
        Variety::Cr => is_cr_basic(t),
        Variety::Wm => is_wm_basic(t),
        Variety::Mem => is_mem_basic(t, &mut Vec::new()),
        Variety::St => {
            let order: Vec<Atom> = atoms(t).into_iter().collect();
            is_full_tree(t, &order)
        }
        _ => true,
    }
}

fn is_rp_basic(t: &Term) -> bool {
    match t {
        Term::Cond(x, c, z) => {
            let a = central(c);
            let child_ok = |p: &Term| match p {
                Term::Cond(l, c2, r) if central(c2) == a => l == r,
                _ => true,
            };
            is_rp_basic(x) && is_rp_basic(z) && child_ok(x) && child_ok(z)
        }
        _ => true,
    }
}

fn is_cr_basic(t: &Term) -> bool {
    match t {
        Term::Cond(x, c, z) => {
            let a = central(c);
            x.central_atom() != Some(a) && z.central_atom() != Some(a) && is_cr_basic(x) && is_cr_basic(z)
        }
        _ => true,
    }
}

fn is_wm_basic(t: &Term) -> bool {
    match t {
        Term::Cond(x, c, z) => {
            let a = central(c);
            !pos(x).contains(a) && !neg(z).contains(a) && is_wm_basic(x) && is_wm_basic(z)
        }
        _ => true,
    }
}

fn is_mem_basic(t: &Term, seen: &mut Vec<Atom>) -> bool {
    match t {
        Term::Cond(x, c, z) => {
            let a = central(c);
            if seen.contains(a) {
                return false;
            }
            seen.push(a.clone());
            let ok = is_mem_basic(x, seen) && is_mem_basic(z, seen);
            seen.pop();
            ok
        }
        _ => true,
    }
}

fn is_full_tree(t: &Term, order: &[Atom]) -> bool {
    match (t, order.split_first()) {
        (Term::T | Term::F, None) => true,
        (Term::Cond(x, c, z), Some((a, rest))) => central(c) == a && is_full_tree(x, rest) && is_full_tree(z, rest),
        _ => false,
    }
}

fn central(c: &Term) -> &Atom {
    match c {
        Term::Atom(a) => a,
        _ => unreachable!("basic forms have atomic conditions"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::atom(&atom("a"))
    }
    fn b() -> Term {
        Term::atom(&atom("b"))
    }
    fn c(x: Term, y: Term, z: Term) -> Term {
        Term::cond(x, y, z)
    }
    fn set(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|n| atom(n)).collect()
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("a1_x").is_ok());
        assert!(Atom::new("T").is_err());
        assert!(Atom::new("land").is_err());
        assert!(Atom::new("Ab").is_err());
        assert!(Atom::new("").is_err());
        assert!(Atom::new("1a").is_err());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&Term::T), 0);
        assert_eq!(depth(&c(Term::T, a(), Term::F)), 1);
        assert_eq!(depth(&c(c(Term::T, b(), Term::F), a(), Term::F)), 2);
        // depth of the condition adds to the branches
        assert_eq!(depth(&c(a(), c(a(), b(), Term::T), Term::F)), 3);
    }

    #[test]
    fn atoms_examples() {
        assert!(atoms(&Term::T).is_empty());
        assert_eq!(atoms(&c(a(), b(), a())), set(&["a", "b"]));
        assert_eq!(atoms(&c(c(Term::T, b(), Term::F), a(), Term::F)), set(&["a", "b"]));
    }

    #[test]
    fn subst_examples() {
        let x = atom("a");
        assert_eq!(subst_atom(&c(Term::T, a(), Term::F), &x, &Term::T), c(Term::T, Term::T, Term::F));
        assert_eq!(subst_atom(&c(b(), a(), b()), &atom("b"), &Term::F), c(Term::F, a(), Term::F));
        assert_eq!(
            subst_atom(&c(Term::T, b(), c(Term::F, a(), Term::T)), &x, &Term::T),
            c(Term::T, b(), c(Term::F, Term::T, Term::T))
        );
    }

    #[test]
    fn pos_neg_examples() {
        let p = c(Term::T, a(), c(Term::T, b(), Term::F));
        assert_eq!(pos(&p), set(&["a"]));
        assert_eq!(neg(&p), set(&["a", "b"]));
        assert!(pos(&Term::T).is_empty());
    }

    #[test]
    fn k_basic_examples() {
        let ta = c(Term::T, a(), Term::F);
        assert!(!is_k_basic(&c(ta.clone(), a(), Term::F), Variety::Cr));
        assert!(is_k_basic(&c(c(Term::T, b(), Term::F), a(), Term::F), Variety::Wm));
        assert!(!is_k_basic(&c(Term::T, a(), c(Term::T, b(), ta.clone())), Variety::Wm));
        // the alternating example is wm-basic
        let inner = c(c(Term::F, b(), ta.clone()), a(), Term::T);
        assert!(is_k_basic(&c(c(Term::T, b(), inner), a(), Term::F), Variety::Wm));
        assert!(is_k_basic(&c(c(Term::T, a(), Term::T), a(), Term::F), Variety::Rp));
        assert!(!is_k_basic(&c(ta.clone(), a(), Term::F), Variety::Rp));
        assert!(!is_k_basic(&a(), Variety::Fr));
        let full = c(c(Term::T, b(), Term::F), a(), c(Term::F, b(), Term::F));
        assert!(is_k_basic(&full, Variety::St));
        assert!(!is_k_basic(&c(Term::T, a(), c(Term::F, b(), Term::F)), Variety::St));
        assert!(is_k_basic(&full, Variety::Mem));
        assert!(is_k_basic(&c(ta.clone(), b(), Term::F), Variety::Mem));
        assert!(!is_k_basic(&c(ta, a(), Term::F), Variety::Mem));
    }

    #[test]
    fn variety_order() {
        assert!(Variety::Fr.finer_or_equal(Variety::St));
        assert!(!Variety::Mem.finer_or_equal(Variety::Cr));
        assert_eq!("crPmem".parse::<Variety>().unwrap(), Variety::CrPmem);
        for k in Variety::ALL {
            assert_eq!(k.name().parse::<Variety>().unwrap(), k);
        }
    }
}
