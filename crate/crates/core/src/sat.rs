//! Satisfiability and falsifiability per variety, the memorizing reduction
//! identities, and accessibility of atoms in sequential formulas.

use std::collections::BTreeSet;

use crate::congruence::{normalize, static_form};
use crate::error::{Error, Result};
use crate::syntax::{connective, negate, Connective, SugaredTerm};
use crate::term::{atoms, depth, Atom, Term, Variety};
use crate::valuation::model::{compare_over, search_table};
use crate::valuation::{ValuationTable, DEFAULT_BUDGET};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SatVerdict {
    pub satisfiable: bool,
    pub falsifiable: bool,
    /// A table of the queried variety under which the term yields T.
    pub sat_witness: Option<ValuationTable>,
    /// A table of the queried variety under which the term yields F.
    pub fal_witness: Option<ValuationTable>,
}

/// The linear mutual induction for free valuations.
pub fn sat_fr_inductive(p: &Term) -> SatVerdict {
    let (satisfiable, falsifiable) = sat_fal(p);
    SatVerdict { satisfiable, falsifiable, sat_witness: None, fal_witness: None }
}

fn sat_fal(p: &Term) -> (bool, bool) {
    match p {
        Term::T => (true, false),
        Term::F => (false, true),
        Term::Atom(_) => (true, true),
        Term::Cond(x, y, z) => {
            let (sx, fx) = sat_fal(x);
            let (sy, fy) = sat_fal(y);
            let (sz, fz) = sat_fal(z);
            ((sy && sx) || (fy && sz), (sy && fx) || (fy && fz))
        }
    }
}

fn leaves(p: &Term) -> (bool, bool) {
    match p {
        Term::T => (true, false),
        Term::F => (false, true),
        Term::Atom(_) => unreachable!("basic forms have constant leaves"),
        Term::Cond(x, _, z) => {
            let (tx, fx) = leaves(x);
            let (tz, fz) = leaves(z);
            (tx || tz, fx || fz)
        }
    }
}

/// T and F leaves of a basic form.
pub fn leaf_check(p: &Term) -> (bool, bool) {
    leaves(p)
}

/// Decides SAT and FAL for `p` under `k`. Chain varieties are decided on
/// their canonical forms and carry no witnesses; the Pmem/Nmem family is
/// searched exhaustively and carries witnesses.
pub fn sat(p: &Term, k: Variety) -> Result<SatVerdict> {
    match k {
        Variety::St => {
            let order: Vec<Atom> = atoms(p).into_iter().collect();
            let (satisfiable, falsifiable) = leaves(&static_form(p, &order));
            Ok(SatVerdict { satisfiable, falsifiable, sat_witness: None, fal_witness: None })
        }
        _ if k.in_chain() => {
            let (satisfiable, falsifiable) = leaves(&normalize(p, k));
            Ok(SatVerdict { satisfiable, falsifiable, sat_witness: None, fal_witness: None })
        }
        _ => sat_witnessed(p, k),
    }
}

/// Like [`sat`] but always searches for witness tables.
pub fn sat_witnessed(p: &Term, k: Variety) -> Result<SatVerdict> {
    let alphabet = witness_alphabet(p);
    let d = depth(p).max(1);
    let sat_witness = search_table(p, k, &alphabet, d, true, DEFAULT_BUDGET)?;
    let fal_witness = search_table(p, k, &alphabet, d, false, DEFAULT_BUDGET)?;
    Ok(SatVerdict { satisfiable: sat_witness.is_some(), falsifiable: fal_witness.is_some(), sat_witness, fal_witness })
}

fn witness_alphabet(p: &Term) -> Vec<Atom> {
    let set = atoms(p);
    if set.is_empty() {
        vec![Atom::new("a").unwrap()]
    } else {
        set.into_iter().collect()
    }
}

/// Left-sequential conjunction of `copies` copies of `p`.
pub fn repeated_conjunction(p: &Term, copies: usize) -> Term {
    let mut acc = p.clone();
    for _ in 1..copies {
        acc = connective(Connective::LeftAnd, acc, p.clone());
    }
    acc
}

/// Checks `SAT_st(p) = SAT_mem(p) = SAT_Pmem(p land ... land p)` with one
/// more copy than `p` has atoms.
pub fn pmem_reduction_holds(p: &Term) -> Result<bool> {
    let n = atoms(p).len();
    let st = sat(p, Variety::St)?.satisfiable;
    let mem = sat(p, Variety::Mem)?.satisfiable;
    let conj = repeated_conjunction(p, n + 1);
    let alphabet = witness_alphabet(p);
    let pmem = search_table(&conj, Variety::Pmem, &alphabet, depth(&conj).max(1), true, DEFAULT_BUDGET)?.is_some();
    Ok(st == mem && mem == pmem)
}

/// `(a land x) lor (not a land y)`.
pub fn positive_translation(a: &Atom, x: &Term, y: &Term) -> Term {
    let a = Term::atom(a);
    connective(
        Connective::LeftOr,
        connective(Connective::LeftAnd, a.clone(), x.clone()),
        connective(Connective::LeftAnd, negate(a), y.clone()),
    )
}

/// `(not a land y) lor (a land x)`.
pub fn negative_translation(a: &Atom, x: &Term, y: &Term) -> Term {
    let a = Term::atom(a);
    connective(
        Connective::LeftOr,
        connective(Connective::LeftAnd, negate(a.clone()), y.clone()),
        connective(Connective::LeftAnd, a, x.clone()),
    )
}

/// Value equality of `x <| a |> y` and `translation` over every `k`-valuation.
pub fn translation_holds_under(a: &Atom, x: &Term, y: &Term, translation: &Term, k: Variety) -> Result<bool> {
    let lhs = Term::cond(x.clone(), Term::atom(a), y.clone());
    let mut alphabet: BTreeSet<Atom> = atoms(&lhs);
    alphabet.extend(atoms(translation));
    let alphabet: Vec<Atom> = alphabet.into_iter().collect();
    let d = depth(&lhs) + depth(translation) + 2;
    compare_over(&lhs, translation, k, &alphabet, d, false, DEFAULT_BUDGET)
}

/// The positive translation under crPmem and its mirror under crNmem.
pub fn crpmem_translation_holds(a: &Atom, x: &Term, y: &Term) -> Result<bool> {
    Ok(translation_holds_under(a, x, y, &positive_translation(a, x, y), Variety::CrPmem)?
        && translation_holds_under(a, x, y, &negative_translation(a, x, y), Variety::CrNmem)?)
}

/// Atoms that some free evaluation of `s` can reach.
pub fn acc(s: &SugaredTerm) -> Result<BTreeSet<Atom>> {
    Ok(match s {
        SugaredTerm::T | SugaredTerm::F => BTreeSet::new(),
        SugaredTerm::Atom(a) => BTreeSet::from([a.clone()]),
        SugaredTerm::Not(x) => acc(x)?,
        SugaredTerm::Binary(Connective::LeftAnd, x, y) => {
            let mut out = acc(x)?;
            if sat_fal(&crate::syntax::desugar(x)).0 {
                out.extend(acc(y)?);
            }
            out
        }
        SugaredTerm::Binary(Connective::LeftOr, x, y) => {
            let mut out = acc(x)?;
            if sat_fal(&crate::syntax::desugar(x)).1 {
                out.extend(acc(y)?);
            }
            out
        }
        SugaredTerm::Binary(op, _, _) => return Err(Error::UnsupportedConnective(op.keyword().to_string())),
        SugaredTerm::AndThen(..) => return Err(Error::UnsupportedConnective("then".into())),
        SugaredTerm::Cond(..) => return Err(Error::UnsupportedConnective("<| |>".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, parse_term};
    use crate::term::atom;
    use crate::valuation::{evaluate, in_variety};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn inductive_examples() {
        let v = sat_fr_inductive(&t("a"));
        assert!(v.satisfiable && v.falsifiable);
        let v = sat_fr_inductive(&t("F <| a |> F"));
        assert!(!v.satisfiable && v.falsifiable);
        assert!(sat_fr_inductive(&t("a land not a")).satisfiable);
    }

    #[test]
    fn sat_examples() {
        assert!(!sat(&t("a land not a"), Variety::St).unwrap().satisfiable);
        let v = sat_witnessed(&t("a land not a"), Variety::Fr).unwrap();
        assert!(v.satisfiable);
        let h = v.sat_witness.unwrap();
        assert!(h.reply(&[atom("a")]).unwrap());
        assert!(!h.reply(&[atom("a"), atom("a")]).unwrap());
        for k in Variety::ALL {
            let v = sat(&t("T <| a |> T"), k).unwrap();
            assert!(v.satisfiable && !v.falsifiable, "{k}");
        }
    }

    #[test]
    fn witnesses_replay() {
        for s in ["a land not a", "(a lor b) land not a", "a land b land not a", "not (a limp a)"] {
            let p = t(s);
            for k in Variety::ALL {
                let v = sat_witnessed(&p, k).unwrap();
                assert_eq!(v.satisfiable, sat(&p, k).unwrap().satisfiable, "{s} {k}");
                if let Some(h) = &v.sat_witness {
                    assert!(evaluate(&p, h).unwrap().value);
                    assert!(in_variety(h, k));
                }
                if let Some(h) = &v.fal_witness {
                    assert!(!evaluate(&p, h).unwrap().value);
                    assert!(in_variety(h, k));
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        assert!(pmem_reduction_holds(&t("a")).unwrap());
        assert!(pmem_reduction_holds(&t("a land not a")).unwrap());
        assert!(pmem_reduction_holds(&t("a lor b")).unwrap());
        let p = t("not a land a");
        assert!(!sat(&p, Variety::Mem).unwrap().satisfiable);
        assert!(sat(&p, Variety::Pmem).unwrap().satisfiable);
        assert!(!sat(&repeated_conjunction(&p, 2), Variety::Pmem).unwrap().satisfiable);
        assert!(pmem_reduction_holds(&p).unwrap());
    }

    #[test]
    fn translation_examples() {
        let a = atom("a");
        assert!(crpmem_translation_holds(&a, &Term::T, &Term::F).unwrap());
        let (b, c) = (t("b"), t("c"));
        assert!(crpmem_translation_holds(&a, &b, &c).unwrap());
        assert!(!translation_holds_under(&a, &b, &c, &positive_translation(&a, &b, &c), Variety::Fr).unwrap());
    }

    #[test]
    fn acc_examples() {
        let acc_of = |s: &str| acc(&parse(s).unwrap()).unwrap();
        assert!(acc_of("F land a").is_empty());
        assert_eq!(acc_of("a"), BTreeSet::from([atom("a")]));
        assert_eq!(acc_of("a land b"), BTreeSet::from([atom("a"), atom("b")]));
        assert_eq!(acc_of("T lor b"), BTreeSet::new());
        assert!(matches!(acc(&parse("a rand b").unwrap()), Err(Error::UnsupportedConnective(_))));
    }
}
