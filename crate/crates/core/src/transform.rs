//! Program transformations on basic forms: caching into monotest form and
//! restart-on-contradiction re-evaluation compiled to linear specifications.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::congruence::basic_form;
use crate::error::{Error, Result};
use crate::projective::{LinearSpec, Rhs};
use crate::term::{atoms, subst_atom, Atom, Term};

/// `caching(P <| a |> Q) = caching([T/a]P) <| a |> caching([F/a]Q)`, with
/// basic forms restored after each substitution.
pub fn caching(p: &Term) -> Term {
    match p {
        Term::Cond(x, c, z) => {
            let Term::Atom(a) = c.as_ref() else { return caching(&basic_form(p)) };
            let l = caching(&basic_form(&subst_atom(x, a, &Term::T)));
            let r = caching(&basic_form(&subst_atom(z, a, &Term::F)));
            Term::cond(l, Term::atom(a), r)
        }
        Term::Atom(_) => caching(&basic_form(p)),
        _ => p.clone(),
    }
}

/// No path of the basic form queries an atom twice.
pub fn is_monotest(p: &Term) -> bool {
    fn walk(p: &Term, seen: &mut Vec<Atom>) -> bool {
        match p {
            Term::Cond(x, c, z) => {
                let Term::Atom(a) = c.as_ref() else { return false };
                if seen.contains(a) {
                    return false;
                }
                seen.push(a.clone());
                let ok = walk(x, seen) && walk(z, seen);
                seen.pop();
                ok
            }
            Term::Atom(_) => false,
            _ => true,
        }
    }
    walk(p, &mut Vec::new())
}

/// `[T/V, F/W]t`.
pub fn subst_sets(t: &Term, v: &BTreeSet<Atom>, w: &BTreeSet<Atom>) -> Result<Term> {
    if let Some(a) = v.intersection(w).next() {
        return Err(Error::OverlappingSets(a.name().to_string()));
    }
    fn go(t: &Term, v: &BTreeSet<Atom>, w: &BTreeSet<Atom>) -> Term {
        match t {
            Term::Atom(a) if v.contains(a) => Term::T,
            Term::Atom(a) if w.contains(a) => Term::F,
            Term::Cond(x, y, z) => Term::cond(go(x, v, w), go(y, v, w), go(z, v, w)),
            _ => t.clone(),
        }
    }
    Ok(go(t, v, w))
}

/// How a contradicted repeated query continues.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Restart the whole evaluation.
    Plain,
    /// Restart only if the `dlni` test says so, otherwise continue.
    Dlni,
    /// As `Dlni`, continuing with known replies substituted.
    DlniSubst,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "plain" => Ok(Variant::Plain),
            "dlni" => Ok(Variant::Dlni),
            "dlni-subst" | "dlni_subst" => Ok(Variant::DlniSubst),
            _ => Err(Error::InvalidArgument(format!("unknown re-eval variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Dlni => "dlni",
            Variant::DlniSubst => "dlni-subst",
        })
    }
}

/// Name of the deadline test used by the dlni variants.
pub const DLNI: &str = "dlni";

/// Evaluation of `focus` knowing the atoms in `v` replied T and those in
/// `w` replied F.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReEvalState {
    pub v: BTreeSet<Atom>,
    pub w: BTreeSet<Atom>,
    pub focus: Term,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    State(ReEvalState),
    /// Ordinary evaluation of a basic form, no memory.
    Plain(Term),
    /// `restart <| dlni |> continuation`.
    Guard(Box<Node>),
}

/// Compiles `re-eval(p)` into a linear specification whose first variable
/// `X0` is the start state.
pub fn re_eval(p: &Term, variant: Variant) -> Result<LinearSpec> {
    if !crate::term::is_basic(p) {
        return Err(Error::InvalidArgument("re-eval expects a basic form".into()));
    }
    let dlni = Atom::new(DLNI).unwrap();
    if variant != Variant::Plain && atoms(p).contains(&dlni) {
        return Err(Error::InvalidArgument(format!("`{DLNI}` is reserved by the {variant} variant")));
    }
    let budget = crate::valuation::DEFAULT_BUDGET as usize;
    let root = Node::State(ReEvalState { v: BTreeSet::new(), w: BTreeSet::new(), focus: p.clone() });
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut order: Vec<Node> = Vec::new();
    let mut queue = VecDeque::new();
    let intern = |n: Node,
                  ids: &mut HashMap<Node, usize>,
                  order: &mut Vec<Node>,
                  queue: &mut VecDeque<usize>|
     -> Result<usize> {
        if let Some(&i) = ids.get(&n) {
            return Ok(i);
        }
        if order.len() >= budget {
            return Err(Error::BudgetExceeded {
                limit: budget as u64,
                what: "building the re-eval state space".into(),
            });
        }
        let i = order.len();
        ids.insert(n.clone(), i);
        order.push(n);
        queue.push_back(i);
        Ok(i)
    };
    let start = intern(root, &mut ids, &mut order, &mut queue)?;
    let mut rhs: HashMap<usize, Rhs> = HashMap::new();

    while let Some(i) = queue.pop_front() {
        let node = order[i].clone();
        let r = match node {
            Node::Plain(t) => match &t {
                Term::T => Rhs::T,
                Term::F => Rhs::F,
                Term::Cond(x, c, z) => {
                    let Term::Atom(a) = c.as_ref() else { unreachable!() };
                    let l = intern(Node::Plain(x.as_ref().clone()), &mut ids, &mut order, &mut queue)?;
                    let r = intern(Node::Plain(z.as_ref().clone()), &mut ids, &mut order, &mut queue)?;
                    Rhs::Cond(l, a.clone(), r)
                }
                Term::Atom(_) => unreachable!(),
            },
            Node::Guard(cont) => {
                let c = intern(*cont, &mut ids, &mut order, &mut queue)?;
                Rhs::Cond(start, dlni.clone(), c)
            }
            Node::State(ReEvalState { v, w, focus }) => match &focus {
                Term::T => Rhs::T,
                Term::F => Rhs::F,
                Term::Cond(x, c, z) => {
                    let Term::Atom(a) = c.as_ref() else { unreachable!() };
                    let state = |v: &BTreeSet<Atom>, w: &BTreeSet<Atom>, f: &Term| {
                        Node::State(ReEvalState { v: v.clone(), w: w.clone(), focus: f.clone() })
                    };
                    // continuation after a contradicted reply, given the branch it selects
                    let on_conflict = |branch: &Term| -> Result<Option<Node>> {
                        Ok(match variant {
                            Variant::Plain => None,
                            Variant::Dlni => Some(Node::Guard(Box::new(Node::Plain(branch.clone())))),
                            Variant::DlniSubst => {
                                Some(Node::Guard(Box::new(Node::Plain(basic_form(&subst_sets(branch, &v, &w)?)))))
                            }
                        })
                    };
                    let (l, r) = if v.contains(a) {
                        let l = intern(state(&v, &w, x), &mut ids, &mut order, &mut queue)?;
                        let r = match on_conflict(z)? {
                            None => start,
                            Some(n) => intern(n, &mut ids, &mut order, &mut queue)?,
                        };
                        (l, r)
                    } else if w.contains(a) {
                        let l = match on_conflict(x)? {
                            None => start,
                            Some(n) => intern(n, &mut ids, &mut order, &mut queue)?,
                        };
                        let r = intern(state(&v, &w, z), &mut ids, &mut order, &mut queue)?;
                        (l, r)
                    } else {
                        let mut v2 = v.clone();
                        v2.insert(a.clone());
                        let mut w2 = w.clone();
                        w2.insert(a.clone());
                        let l = intern(state(&v2, &w, x), &mut ids, &mut order, &mut queue)?;
                        let r = intern(state(&v, &w2, z), &mut ids, &mut order, &mut queue)?;
                        (l, r)
                    };
                    Rhs::Cond(l, a.clone(), r)
                }
                Term::Atom(_) => unreachable!(),
            },
        };
        rhs.insert(i, r);
    }
    LinearSpec::new((0..order.len()).map(|i| (format!("X{i}"), rhs.remove(&i).unwrap())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::equal;
    use crate::projective::{eval_spec, is_projective, project, unfold_levels, unfold_projection, SpecValue};
    use crate::syntax::parse_term;
    use crate::term::{atom, depth, Variety};
    use crate::valuation::ValuationTable;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|n| atom(n)).collect()
    }

    #[test]
    fn caching_examples() {
        assert_eq!(caching(&Term::T), Term::T);
        assert_eq!(caching(&t("(T <| a |> F) <| a |> F")), t("T <| a |> F"));
        let p = t("(T <| b |> F) <| a |> (T <| b |> F)");
        assert_eq!(caching(&p), p);
        let q = t("(T <| b |> (F <| a |> T)) <| a |> (a <| b |> F)");
        let c = caching(&basic_form(&q));
        assert!(is_monotest(&c));
        assert!(equal(&q, &c, Variety::St));
    }

    #[test]
    fn monotest_examples() {
        assert!(!is_monotest(&t("(T <| a |> F) <| a |> F")));
        assert!(is_monotest(&t("(T <| a |> F) <| b |> (T <| a |> F)")));
        assert!(is_monotest(&Term::T));
    }

    #[test]
    fn subst_sets_examples() {
        assert_eq!(subst_sets(&t("b <| a |> c"), &set(&["a"]), &set(&["c"])).unwrap(), t("b <| T |> F"));
        let p = t("(T <| a |> F) <| b |> F");
        assert_eq!(subst_sets(&p, &set(&[]), &set(&[])).unwrap(), p);
        assert_eq!(subst_sets(&p, &set(&["a"]), &set(&[])).unwrap(), t("(T <| T |> F) <| b |> F"));
        assert!(matches!(subst_sets(&p, &set(&["a"]), &set(&["a"])), Err(Error::OverlappingSets(_))));
    }

    #[test]
    fn re_eval_restart_example() {
        let p = t("T <| a |> (F <| a |> T)");
        let spec = re_eval(&p, Variant::Plain).unwrap();
        assert_eq!(spec.to_file_string(), "X0 = X1 <| a |> X2\nX1 = T\nX2 = X0 <| a |> X3\nX3 = T\n");
        assert_eq!(unfold_projection(&spec, "X0", 1).unwrap(), t("T <| a |> F"));
        assert_eq!(unfold_projection(&spec, "X0", 2).unwrap(), basic_form(&t("T <| a |> a")));
        assert!(is_projective(&unfold_levels(&spec, "X0", 5).unwrap()));
    }

    #[test]
    fn re_eval_dlni_variants() {
        let p = t("T <| a |> (F <| a |> T)");
        let spec = re_eval(&p, Variant::Dlni).unwrap();
        assert!(spec.to_file_string().contains("<| dlni |>"));
        assert!(is_projective(&unfold_levels(&spec, "X0", 5).unwrap()));
        let subst = re_eval(&p, Variant::DlniSubst).unwrap();
        assert!(is_projective(&unfold_levels(&subst, "X0", 5).unwrap()));
        assert!(re_eval(&t("T <| dlni |> F"), Variant::Dlni).is_err());
    }

    #[test]
    fn re_eval_monotest_and_single_query() {
        let p = t("(T <| b |> F) <| a |> (T <| b |> F)");
        let spec = re_eval(&p, Variant::Plain).unwrap();
        for n in 1..=4 {
            assert_eq!(unfold_projection(&spec, "X0", n).unwrap(), project(n, &p));
        }
        let q = t("T <| a |> F");
        for variant in [Variant::Plain, Variant::Dlni, Variant::DlniSubst] {
            let spec = re_eval(&q, variant).unwrap();
            for n in 1..=3 {
                assert_eq!(unfold_projection(&spec, "X0", n).unwrap(), q);
            }
        }
    }

    #[test]
    fn re_eval_static_runs_are_classical() {
        let p = basic_form(&t("(a land b) lor (not a land b)"));
        let spec = re_eval(&p, Variant::Plain).unwrap();
        let ab = [atom("a"), atom("b")];
        for (va, vb) in [(true, true), (true, false), (false, true), (false, false)] {
            let h = ValuationTable::static_table(&ab, depth(&p), &|x| if x.name() == "a" { va } else { vb }).unwrap();
            let (v, _) = eval_spec(&spec, "X0", &h, depth(&p)).unwrap();
            let want = (va && vb) || (!va && vb);
            assert_eq!(v, if want { SpecValue::T } else { SpecValue::F });
        }
    }
}
