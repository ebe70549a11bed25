//! Definability from unary and binary operators: the `T_a`/`F_a`
//! simplifiers, the `phi_abc` property, enumeration of compositions and
//! bounded searches for terms equal to a target.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::congruence::{basic_form, canonical_from_basic, distribute, equal, normalize, static_form};
use crate::enumerate::basic_forms;
use crate::error::{Error, Result};
use crate::syntax::{connective, negate, parse_term, print, Connective};
use crate::term::{atom, atoms, depth, Atom, Term, Variety};

/// Placeholder names used in operator bodies.
pub const PLACEHOLDERS: [&str; 2] = ["x", "y"];

fn placeholder(i: usize) -> Atom {
    atom(PLACEHOLDERS[i])
}

/// `T_a`: simplifies `p` knowing the last reply to `a` was T.
pub fn t_simplify(p: &Term, a: &Atom) -> Term {
    strip(p, a, true)
}

/// `F_a`: simplifies `p` knowing the last reply to `a` was F.
pub fn f_simplify(p: &Term, a: &Atom) -> Term {
    strip(p, a, false)
}

fn strip(p: &Term, a: &Atom, reply: bool) -> Term {
    match p {
        Term::Cond(x, y, z) if matches!(y.as_ref(), Term::Atom(b) if b == a) => {
            strip(if reply { x } else { z }, a, reply)
        }
        _ => p.clone(),
    }
}

/// The property that separates `a <| b |> c` from every composition of
/// unary and binary operators modulo cr.
pub fn phi_abc(p: &Term, a: &Atom, b: &Atom, c: &Atom) -> bool {
    let q = normalize(p, Variety::Cr);
    branch_decides(&t_simplify(&q, b), a) && branch_decides(&f_simplify(&q, b), c)
}

/// `r` has central atom `a` and both of its `a`-branches are distinct constants mod cr.
fn branch_decides(r: &Term, a: &Atom) -> bool {
    if r.central_atom() != Some(a) {
        return false;
    }
    let pos = normalize(&t_simplify(r, a), Variety::Cr);
    let neg = normalize(&f_simplify(r, a), Variety::Cr);
    pos.is_constant() && neg.is_constant() && pos != neg
}

/// A named operator; the body ranges over `x` (and `y` for binary operators).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Operator {
    pub name: String,
    pub body: Term,
}

impl Operator {
    pub fn new(name: impl Into<String>, body: Term) -> Operator {
        Operator { name: name.into(), body }
    }
}

/// Operators available to compositions. `T`, `F` and the atoms are always available.
#[derive(Clone, Debug)]
pub struct OperatorCatalog {
    pub unary_ops: Vec<Operator>,
    pub binary_ops: Vec<Operator>,
    pub body_depth_bound: usize,
}

impl OperatorCatalog {
    /// Builds a catalog, dropping bodies that are fr-equal to an earlier one.
    pub fn new(unary_ops: Vec<Operator>, binary_ops: Vec<Operator>) -> Result<OperatorCatalog> {
        let x = placeholder(0);
        let y = placeholder(1);
        for op in &unary_ops {
            if atoms(&op.body).iter().any(|a| *a != x) {
                return Err(Error::InvalidArgument(format!("unary body {} may only use x", print(&op.body))));
            }
        }
        for op in &binary_ops {
            if atoms(&op.body).iter().any(|a| *a != x && *a != y) {
                return Err(Error::InvalidArgument(format!("binary body {} may only use x and y", print(&op.body))));
            }
        }
        let dedup = |ops: Vec<Operator>| {
            let mut seen = BTreeSet::new();
            ops.into_iter().filter(|op| seen.insert(basic_form(&op.body))).collect::<Vec<_>>()
        };
        let unary_ops = dedup(unary_ops);
        let binary_ops = dedup(binary_ops);
        let body_depth_bound = unary_ops.iter().chain(&binary_ops).map(|op| depth(&op.body)).max().unwrap_or(0);
        Ok(OperatorCatalog { unary_ops, binary_ops, body_depth_bound })
    }

    /// Every term over `x`, `y` whose basic form has depth at most `max_depth`,
    /// up to fr. Constants and the identities are left out; bodies over `y`
    /// alone are renamings of unary bodies and are left out too.
    pub fn from_bodies(max_depth: usize) -> OperatorCatalog {
        let x = placeholder(0);
        let y = placeholder(1);
        let mut unary_ops = Vec::new();
        let mut binary_ops = Vec::new();
        for bf in basic_forms(&[x.clone(), y.clone()], max_depth) {
            let used = atoms(&bf);
            if used.is_empty() || bf == Term::basic_atom(&x) || bf == Term::basic_atom(&y) {
                continue;
            }
            let body = compact(&bf);
            let op = Operator::new(format!("[{}]", print(&body)), body);
            match (used.contains(&x), used.contains(&y)) {
                (true, false) => unary_ops.push(op),
                (true, true) => binary_ops.push(op),
                _ => {}
            }
        }
        OperatorCatalog { unary_ops, binary_ops, body_depth_bound: max_depth }
    }

    /// `T`, negation and left-sequential disjunction.
    pub fn tnd() -> OperatorCatalog {
        let (x, y) = (Term::atom(&placeholder(0)), Term::atom(&placeholder(1)));
        OperatorCatalog {
            unary_ops: vec![Operator::new("not", negate(x.clone()))],
            binary_ops: vec![Operator::new("lor", connective(Connective::LeftOr, x, y))],
            body_depth_bound: 2,
        }
    }

    /// Negation and the eight sequential binary connectives.
    pub fn connectives() -> OperatorCatalog {
        let (x, y) = (Term::atom(&placeholder(0)), Term::atom(&placeholder(1)));
        let binary_ops = Connective::ALL
            .iter()
            .map(|&op| Operator::new(op.keyword(), connective(op, x.clone(), y.clone())))
            .collect();
        OperatorCatalog { unary_ops: vec![Operator::new("not", negate(x.clone()))], binary_ops, body_depth_bound: 3 }
    }
}

/// Replaces `T <| v |> F` by `v` for display.
fn compact(t: &Term) -> Term {
    match t {
        Term::Cond(x, y, z) => match (x.as_ref(), z.as_ref()) {
            (Term::T, Term::F) => y.as_ref().clone(),
            _ => Term::cond(compact(x), compact(y), compact(z)),
        },
        _ => t.clone(),
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Const(bool),
    Atom(Atom),
    Unary(usize, Rc<Expr>),
    Binary(usize, Rc<Expr>, Rc<Expr>),
}

impl Expr {
    fn render(&self, catalog: &OperatorCatalog, out: &mut String) {
        match self {
            Expr::Const(v) => out.push(if *v { 'T' } else { 'F' }),
            Expr::Atom(a) => out.push_str(a.name()),
            Expr::Unary(i, e) => {
                out.push_str(&catalog.unary_ops[*i].name);
                out.push('(');
                e.render(catalog, out);
                out.push(')');
            }
            Expr::Binary(i, l, r) => {
                out.push_str(&catalog.binary_ops[*i].name);
                out.push('(');
                l.render(catalog, out);
                out.push_str(", ");
                r.render(catalog, out);
                out.push(')');
            }
        }
    }

    fn term(&self, catalog: &OperatorCatalog) -> Term {
        match self {
            Expr::Const(v) => Term::constant(*v),
            Expr::Atom(a) => Term::atom(a),
            Expr::Unary(i, e) => instantiate(&catalog.unary_ops[*i].body, &[e.term(catalog)]),
            Expr::Binary(i, l, r) => instantiate(&catalog.binary_ops[*i].body, &[l.term(catalog), r.term(catalog)]),
        }
    }
}

/// Simultaneous substitution of `args` for the placeholders.
fn instantiate(body: &Term, args: &[Term]) -> Term {
    match body {
        Term::T | Term::F => body.clone(),
        Term::Atom(a) => match PLACEHOLDERS.iter().position(|p| *p == a.name()) {
            Some(i) if i < args.len() => args[i].clone(),
            _ => body.clone(),
        },
        Term::Cond(x, y, z) => Term::cond(instantiate(x, args), instantiate(y, args), instantiate(z, args)),
    }
}

/// `basic_form(body[args/placeholders])` for basic forms `body` and `args`.
fn plug(body: &Term, args: &[&Term]) -> Term {
    match body {
        Term::Cond(l, y, r) => {
            let Term::Atom(v) = y.as_ref() else { unreachable!("body is a basic form") };
            let i = PLACEHOLDERS.iter().position(|p| *p == v.name()).expect("placeholder");
            distribute(&plug(l, args), args[i], &plug(r, args), &mut 0)
        }
        _ => body.clone(),
    }
}

/// Like [`plug`], giving up as soon as the result would be deeper than `cap`.
fn plug_capped(body: &Term, args: &[&Term], cap: usize) -> Option<(Term, usize)> {
    match body {
        Term::Cond(l, y, r) => {
            let Term::Atom(v) = y.as_ref() else { unreachable!("body is a basic form") };
            let i = PLACEHOLDERS.iter().position(|p| *p == v.name()).expect("placeholder");
            let l = plug_capped(l, args, cap)?;
            let r = plug_capped(r, args, cap)?;
            distribute_capped(&l, args[i], &r, cap)
        }
        _ => Some((body.clone(), 0)),
    }
}

fn distribute_capped(p: &(Term, usize), q: &Term, r: &(Term, usize), cap: usize) -> Option<(Term, usize)> {
    match q {
        Term::T => (p.1 <= cap).then(|| p.clone()),
        Term::F => (r.1 <= cap).then(|| r.clone()),
        Term::Cond(q1, a, q2) => {
            let cap = cap.checked_sub(1)?;
            let (x, dx) = distribute_capped(p, q1, r, cap)?;
            let (z, dz) = distribute_capped(p, q2, r, cap)?;
            Some((Term::Cond(x.into(), a.clone(), z.into()), 1 + dx.max(dz)))
        }
        Term::Atom(_) => unreachable!("argument is a basic form"),
    }
}

/// A closed composition of catalog operators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompositionTerm {
    /// The term obtained by substituting arguments into operator bodies.
    pub term: Term,
    pub two_place_count: usize,
    /// The composition written with operator names.
    pub expr: String,
}

impl fmt::Display for CompositionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expr)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchBounds {
    pub max_2p: usize,
    /// Compositions whose canonical form is deeper than this are discarded.
    pub max_depth: usize,
    /// Upper limit on generated candidates.
    pub budget: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_2p: 3, max_depth: 4, budget: 1 << 26 }
    }
}

/// Result of [`search_equivalent`], with the bounds it ran under.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub witness: Option<CompositionTerm>,
    pub bounds: SearchBounds,
    pub body_depth: usize,
    /// Depth limit actually applied; for fr it is tightened to the target's depth.
    pub effective_depth: usize,
    /// Distinct classes generated.
    pub classes: usize,
    /// Candidates generated before deduplication.
    pub candidates: usize,
    /// Whether the depth limit discarded anything. When it did not, the
    /// search covered every composition within `max_2p`.
    pub depth_pruned: bool,
}

impl SearchOutcome {
    pub fn bounds_line(&self) -> String {
        format!(
            "max_2p={} body_depth={} max_depth={} classes={} candidates={} depth_pruned={}",
            self.bounds.max_2p, self.body_depth, self.effective_depth, self.classes, self.candidates, self.depth_pruned
        )
    }
}

struct Entry {
    form: Term,
    expr: Rc<Expr>,
    two_p: usize,
}

/// Level-by-level generation of compositions, deduplicated modulo `k`.
struct Enumerator<'c> {
    catalog: &'c OperatorCatalog,
    unary: Vec<Term>,
    binary: Vec<Term>,
    k: Variety,
    order: Vec<Atom>,
    cap: usize,
    budget: usize,
    entries: Vec<Entry>,
    seen: HashMap<Term, usize>,
    levels: Vec<Vec<usize>>,
    candidates: usize,
    pruned: bool,
    target: Option<Term>,
    hit: Option<usize>,
}

impl<'c> Enumerator<'c> {
    fn new(catalog: &'c OperatorCatalog, k: Variety, order: Vec<Atom>, cap: usize, budget: usize) -> Self {
        Enumerator {
            catalog,
            unary: catalog.unary_ops.iter().map(|op| basic_form(&op.body)).collect(),
            binary: catalog.binary_ops.iter().map(|op| basic_form(&op.body)).collect(),
            k,
            order,
            cap,
            budget,
            entries: Vec::new(),
            seen: HashMap::new(),
            levels: Vec::new(),
            candidates: 0,
            pruned: false,
            target: None,
            hit: None,
        }
    }

    /// Representative used for plugging, and the dedup key.
    fn classify(&self, bf: &Term) -> (Term, Term) {
        if self.k == Variety::St {
            (canonical_from_basic(bf, Variety::Mem), static_form(bf, &self.order))
        } else {
            let c = canonical_from_basic(bf, self.k);
            (c.clone(), c)
        }
    }

    /// Basic form of `body` applied to the entries `args`. Under fr the
    /// canonical form is the basic form, so deep results are cut off early.
    fn apply(&mut self, body: &Term, args: &[usize]) -> Option<Term> {
        let forms: Vec<&Term> = args.iter().map(|&i| &self.entries[i].form).collect();
        if self.k == Variety::Fr {
            let out = plug_capped(body, &forms, self.cap).map(|(t, _)| t);
            if out.is_none() {
                self.pruned = true;
            }
            out
        } else {
            Some(plug(body, &forms))
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.candidates += 1;
        if self.candidates > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget as u64, what: "compositions".into() });
        }
        Ok(())
    }

    fn add(&mut self, bf: Term, expr: Expr, two_p: usize, level: &mut Vec<usize>) -> Result<()> {
        let (form, key) = self.classify(&bf);
        if depth(&form) > self.cap {
            self.pruned = true;
            return Ok(());
        }
        if self.seen.contains_key(&key) {
            return Ok(());
        }
        let idx = self.entries.len();
        if self.hit.is_none() && self.target.as_ref() == Some(&key) {
            self.hit = Some(idx);
        }
        self.seen.insert(key, idx);
        self.entries.push(Entry { form, expr: Rc::new(expr), two_p });
        level.push(idx);
        Ok(())
    }

    fn unary_closure(&mut self, level: &mut Vec<usize>) -> Result<()> {
        let mut i = 0;
        while i < level.len() && self.hit.is_none() {
            let e = level[i];
            for op in 0..self.unary.len() {
                self.tick()?;
                let body = self.unary[op].clone();
                if let Some(bf) = self.apply(&body, &[e]) {
                    let expr = Expr::Unary(op, self.entries[e].expr.clone());
                    self.add(bf, expr, self.entries[e].two_p, level)?;
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn run(&mut self, atoms: &[Atom], max_2p: usize) -> Result<()> {
        let mut level = Vec::new();
        for v in [true, false] {
            self.tick()?;
            self.add(Term::constant(v), Expr::Const(v), 0, &mut level)?;
        }
        for a in atoms {
            self.tick()?;
            self.add(Term::basic_atom(a), Expr::Atom(a.clone()), 0, &mut level)?;
        }
        self.unary_closure(&mut level)?;
        self.levels.push(level);
        for m in 1..=max_2p {
            if self.hit.is_some() {
                break;
            }
            let mut level = Vec::new();
            'pairs: for op in 0..self.binary.len() {
                for i in 0..m {
                    let j = m - 1 - i;
                    for si in 0..self.levels[i].len() {
                        for sj in 0..self.levels[j].len() {
                            let (l, r) = (self.levels[i][si], self.levels[j][sj]);
                            self.tick()?;
                            let body = self.binary[op].clone();
                            let Some(bf) = self.apply(&body, &[l, r]) else { continue };
                            let expr = Expr::Binary(op, self.entries[l].expr.clone(), self.entries[r].expr.clone());
                            self.add(bf, expr, m, &mut level)?;
                            if self.hit.is_some() {
                                break 'pairs;
                            }
                        }
                    }
                }
            }
            self.unary_closure(&mut level)?;
            self.levels.push(level);
        }
        Ok(())
    }

    fn composition(&self, idx: usize) -> CompositionTerm {
        let e = &self.entries[idx];
        let mut expr = String::new();
        e.expr.render(self.catalog, &mut expr);
        CompositionTerm { term: e.expr.term(self.catalog), two_place_count: e.two_p, expr }
    }
}

/// All compositions over `atoms` with at most `bounds.max_2p` binary
/// applications and canonical depth at most `bounds.max_depth`, one per
/// fr-class, in generation order.
pub fn enumerate_tc12(
    atoms: &[Atom],
    catalog: &OperatorCatalog,
    bounds: &SearchBounds,
) -> Result<Vec<CompositionTerm>> {
    let mut en = Enumerator::new(catalog, Variety::Fr, Vec::new(), bounds.max_depth, bounds.budget);
    en.run(atoms, bounds.max_2p)?;
    Ok((0..en.entries.len()).map(|i| en.composition(i)).collect())
}

/// Searches for a composition `k`-equal to `target`.
///
/// Classes are merged modulo `k`, which loses nothing because `k` is a
/// congruence. Under fr the canonical depth of a composition is at least
/// that of each argument, so the depth limit is lowered to the depth of the
/// target's basic form without losing candidates.
pub fn search_equivalent(
    target: &Term,
    k: Variety,
    atoms_in: &[Atom],
    catalog: &OperatorCatalog,
    bounds: &SearchBounds,
) -> Result<SearchOutcome> {
    k.require_chain()?;
    let mut alphabet: BTreeSet<Atom> = atoms_in.iter().cloned().collect();
    alphabet.extend(atoms(target));
    let order: Vec<Atom> = alphabet.into_iter().collect();
    let mut atoms_sorted: Vec<Atom> = atoms_in.to_vec();
    atoms_sorted.sort();
    atoms_sorted.dedup();

    let target_bf = basic_form(target);
    let cap = if k == Variety::Fr { bounds.max_depth.min(depth(&target_bf)) } else { bounds.max_depth };
    let mut en = Enumerator::new(catalog, k, order, cap, bounds.budget);
    en.target = Some(en.classify(&target_bf).1);
    en.run(&atoms_sorted, bounds.max_2p)?;
    let witness = en.hit.map(|i| en.composition(i));
    if let Some(w) = &witness {
        debug_assert!(equal(&w.term, target, k));
    }
    Ok(SearchOutcome {
        witness,
        bounds: *bounds,
        body_depth: catalog.body_depth_bound,
        effective_depth: cap,
        classes: en.entries.len(),
        candidates: en.candidates,
        depth_pruned: en.pruned,
    })
}

/// `(y land x) lor (not y land z)` and `x <| y |> z` over three distinct atoms.
pub fn mem_definability_pair() -> (Term, Term) {
    let lhs = parse_term("(b land a) lor (not b land c)").expect("fixed term");
    let rhs = parse_term("a <| b |> c").expect("fixed term");
    (lhs, rhs)
}

/// Whether the pair from [`mem_definability_pair`] is `k`-equal.
pub fn definability_holds(k: Variety) -> Result<bool> {
    let (lhs, rhs) = mem_definability_pair();
    crate::congruence::try_equal(&lhs, &rhs, k)
}

/// The conditional is definable from conjunction and negation under mem,
/// but the same definition fails under wm and fr.
pub fn mem_definability_check() -> bool {
    let (lhs, rhs) = mem_definability_pair();
    equal(&lhs, &rhs, Variety::Mem) && !equal(&lhs, &rhs, Variety::Wm) && !equal(&lhs, &rhs, Variety::Fr)
}

/// `(not b lor a) land (b lor c)`, wm-equal to `a <| b |> c`.
pub fn wm_conditional() -> Term {
    parse_term("(not b lor a) land (b lor c)").expect("fixed term")
}
