//! Canonical forms for the six valuation congruences and the equality
//! procedures they induce.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::term::{atoms, collect_atoms, Atom, Term, Variety};

/// Outcome of a normalization run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalizationReport {
    pub input: Term,
    pub variety: Variety,
    pub output: Term,
    pub rewrite_steps: usize,
}

/// Rewrites `t` into a basic form by distributing compound conditions.
pub fn basic_form(t: &Term) -> Term {
    basic_form_counted(t, &mut 0)
}

fn basic_form_counted(t: &Term, steps: &mut usize) -> Term {
    match t {
        Term::T | Term::F => t.clone(),
        Term::Atom(a) => {
            *steps += 1;
            Term::basic_atom(a)
        }
        Term::Cond(x, y, z) => {
            let p = basic_form_counted(x, steps);
            let q = basic_form_counted(y, steps);
            let r = basic_form_counted(z, steps);
            distribute(&p, &q, &r, steps)
        }
    }
}

/// `p <| q |> r` for basic forms `p`, `q`, `r`.
pub(crate) fn distribute(p: &Term, q: &Term, r: &Term, steps: &mut usize) -> Term {
    *steps += 1;
    match q {
        Term::T => p.clone(),
        Term::F => r.clone(),
        Term::Cond(q1, a, q2) => {
            Term::Cond(distribute(p, q1, r, steps).into(), a.clone(), distribute(p, q2, r, steps).into())
        }
        Term::Atom(_) => unreachable!("condition is a basic form"),
    }
}

/// The k-basic form of `t`.
///
/// Panics for the Pmem/Nmem side branches, which have no canonical forms;
/// use [`try_normalize`] when the variety comes from user input.
pub fn normalize(t: &Term, k: Variety) -> Term {
    normalize_report(t, k).output
}

pub fn try_normalize(t: &Term, k: Variety) -> Result<Term> {
    k.require_chain()?;
    Ok(normalize(t, k))
}

pub fn normalize_report(t: &Term, k: Variety) -> NormalizationReport {
    let mut steps = 0;
    let output = match k {
        Variety::St => {
            let order: Vec<Atom> = atoms(t).into_iter().collect();
            static_form(t, &order)
        }
        _ => {
            let bf = basic_form_counted(t, &mut steps);
            match k {
                Variety::Fr => bf,
                Variety::Rp => rp_form(&bf, &mut steps),
                Variety::Cr => cr_form(&bf, &mut steps),
                Variety::Wm => wm_form(&cr_form(&bf, &mut steps), &mut steps),
                Variety::Mem => mem_form(&bf, &mut steps),
                other => panic!("variety {other} has no canonical form"),
            }
        }
    };
    NormalizationReport { input: t.clone(), variety: k, output, rewrite_steps: steps }
}

/// Canonical form of a term that is already a basic form. `St` is excluded
/// because its canonical form depends on the chosen atom order.
pub(crate) fn canonical_from_basic(bf: &Term, k: Variety) -> Term {
    let mut steps = 0;
    match k {
        Variety::Fr => bf.clone(),
        Variety::Rp => rp_form(bf, &mut steps),
        Variety::Cr => cr_form(bf, &mut steps),
        Variety::Wm => wm_form(&cr_form(bf, &mut steps), &mut steps),
        Variety::Mem => mem_form(bf, &mut steps),
        other => panic!("variety {other} has no atom-order-free canonical form"),
    }
}

fn rp_form(p: &Term, steps: &mut usize) -> Term {
    let Term::Cond(x, a, z) = p else { return p.clone() };
    let mut l = rp_form(x, steps);
    let mut r = rp_form(z, steps);
    if let Term::Cond(x1, c, y1) = &l {
        if c == a && x1 != y1 {
            *steps += 1;
            l = Term::Cond(x1.clone(), c.clone(), x1.clone());
        }
    }
    if let Term::Cond(x1, c, y1) = &r {
        if c == a && x1 != y1 {
            *steps += 1;
            r = Term::Cond(y1.clone(), c.clone(), y1.clone());
        }
    }
    Term::Cond(l.into(), a.clone(), r.into())
}

fn cr_form(p: &Term, steps: &mut usize) -> Term {
    let Term::Cond(x, a, z) = p else { return p.clone() };
    let mut l = cr_form(x, steps);
    let mut r = cr_form(z, steps);
    // children are cr-basic, so at most one contraction per side
    if let Term::Cond(x1, c, _) = &l {
        if c == a {
            *steps += 1;
            l = x1.as_ref().clone();
        }
    }
    if let Term::Cond(_, c, y1) = &r {
        if c == a {
            *steps += 1;
            r = y1.as_ref().clone();
        }
    }
    Term::Cond(l.into(), a.clone(), r.into())
}

/// Expects a cr-basic form.
fn wm_form(p: &Term, steps: &mut usize) -> Term {
    let Term::Cond(x, a, z) = p else { return p.clone() };
    let l = wm_form(x, steps);
    let r = wm_form(z, steps);
    let Term::Atom(name) = a.as_ref() else { unreachable!() };
    Term::Cond(strip_spine(&l, name, true, steps).into(), a.clone(), strip_spine(&r, name, false, steps).into())
}

/// Removes `a` from the left (positive) or right (negative) spine of `p`,
/// keeping the branch that the known reply selects.
fn strip_spine(p: &Term, a: &Atom, left: bool, steps: &mut usize) -> Term {
    let Term::Cond(x, c, z) = p else { return p.clone() };
    let is_a = matches!(c.as_ref(), Term::Atom(b) if b == a);
    match (is_a, left) {
        (true, true) => {
            *steps += 1;
            strip_spine(x, a, left, steps)
        }
        (true, false) => {
            *steps += 1;
            strip_spine(z, a, left, steps)
        }
        (false, true) => Term::Cond(strip_spine(x, a, left, steps).into(), c.clone(), z.clone()),
        (false, false) => Term::Cond(x.clone(), c.clone(), strip_spine(z, a, left, steps).into()),
    }
}

fn mem_form(p: &Term, steps: &mut usize) -> Term {
    let Term::Cond(x, a, z) = p else { return p.clone() };
    let Term::Atom(name) = a.as_ref() else { unreachable!() };
    let l = restrict(x, name, true, steps);
    let r = restrict(z, name, false, steps);
    Term::Cond(mem_form(&l, steps).into(), a.clone(), mem_form(&r, steps).into())
}

/// `basic_form([v/a]p)` for a basic form `p`.
pub fn restrict(p: &Term, a: &Atom, v: bool, steps: &mut usize) -> Term {
    let Term::Cond(x, c, z) = p else { return p.clone() };
    match c.as_ref() {
        Term::Atom(b) if b == a => {
            *steps += 1;
            restrict(if v { x } else { z }, a, v, steps)
        }
        _ => Term::Cond(restrict(x, a, v, steps).into(), c.clone(), restrict(z, a, v, steps).into()),
    }
}

/// Classical truth value under `assignment` (atoms not listed count as F).
pub fn classical_value(t: &Term, assignment: &dyn Fn(&Atom) -> bool) -> bool {
    match t {
        Term::T => true,
        Term::F => false,
        Term::Atom(a) => assignment(a),
        Term::Cond(x, y, z) => {
            if classical_value(y, assignment) {
                classical_value(x, assignment)
            } else {
                classical_value(z, assignment)
            }
        }
    }
}

/// The full binary tree over `order` with classical values at the leaves.
pub fn static_form(t: &Term, order: &[Atom]) -> Term {
    fn build(t: &Term, order: &[Atom], chosen: &mut Vec<(Atom, bool)>) -> Term {
        match order.split_first() {
            None => Term::constant(classical_value(t, &|a| {
                chosen.iter().find(|(b, _)| b == a).map(|(_, v)| *v).unwrap_or(false)
            })),
            Some((a, rest)) => {
                chosen.push((a.clone(), true));
                let l = build(t, rest, chosen);
                chosen.last_mut().unwrap().1 = false;
                let r = build(t, rest, chosen);
                chosen.pop();
                Term::cond(l, Term::atom(a), r)
            }
        }
    }
    build(t, order, &mut Vec::new())
}

/// Decides `p =_k q` by comparing canonical forms.
pub fn equal(p: &Term, q: &Term, k: Variety) -> bool {
    match k {
        Variety::St => {
            let mut all = BTreeSet::new();
            collect_atoms(p, &mut all);
            collect_atoms(q, &mut all);
            let order: Vec<Atom> = all.into_iter().collect();
            static_form(p, &order) == static_form(q, &order)
        }
        _ => normalize(p, k) == normalize(q, k),
    }
}

pub fn try_equal(p: &Term, q: &Term, k: Variety) -> Result<bool> {
    k.require_chain()?;
    Ok(equal(p, q, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::is_k_basic;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn basic_form_examples() {
        assert_eq!(basic_form(&t("a")), t("T <| a |> F"));
        assert_eq!(basic_form(&t("b <| a |> F")), t("(T <| b |> F) <| a |> F"));
        assert_eq!(
            basic_form(&t("a <| (b <| c |> d) |> e")),
            t("((T <| a |> F) <| b |> (T <| e |> F)) <| c |> ((T <| a |> F) <| d |> (T <| e |> F))")
        );
        let p = t("(T <| b |> F) <| a |> F");
        assert_eq!(basic_form(&p), p);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&t("(T <| a |> F) <| a |> F"), Variety::Rp), t("(T <| a |> T) <| a |> F"));
        assert_eq!(
            normalize(&t("(((T <| a |> F) <| b |> F) <| c |> F) <| a |> F"), Variety::Wm),
            t("((T <| b |> F) <| c |> F) <| a |> F")
        );
        assert_eq!(normalize(&t("(T <| b |> (F <| a |> T)) <| a |> F"), Variety::Mem), t("(T <| b |> F) <| a |> F"));
        assert_eq!(normalize(&t("(T <| a |> F) <| a |> F"), Variety::Cr), t("T <| a |> F"));
        assert_eq!(normalize(&t("a <| b |> a"), Variety::St), t("(T <| b |> T) <| a |> (F <| b |> F)"));
    }

    #[test]
    fn report_counts_steps() {
        let r = normalize_report(&t("(T <| a |> F) <| a |> F"), Variety::Cr);
        assert!(r.rewrite_steps > 0);
        assert!(is_k_basic(&r.output, Variety::Cr));
        let r = normalize_report(&t("T"), Variety::Fr);
        assert_eq!(r.rewrite_steps, 0);
    }

    #[test]
    fn equal_examples() {
        assert!(equal(&t("b <| a |> F"), &t("b <| (a <| a |> F) |> F"), Variety::Cr));
        assert!(!equal(&t("a"), &t("a <| a |> F"), Variety::Rp));
        assert!(equal(&t("a"), &t("a <| b |> a"), Variety::St));
        assert!(!equal(&t("a"), &t("a <| b |> a"), Variety::Mem));
        assert!(equal(&t("a land b"), &t("b land a"), Variety::St));
        assert!(!equal(&t("a land b"), &t("b land a"), Variety::Mem));
    }

    #[test]
    fn side_branches_have_no_canonical_form() {
        assert!(try_normalize(&t("a"), Variety::Pmem).is_err());
        assert!(try_equal(&t("a"), &t("a"), Variety::CrNmem).is_err());
    }
}
