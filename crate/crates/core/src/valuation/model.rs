//! Free valuations of each variety as lazily explored reply assignments.
//!
//! A free K-valuation is described by a canonical state (the reduced query
//! history) and, for every state and atom whose reply is not forced by the
//! variety, an independent reply bit. Terms only consult finitely many such
//! bits, so quantifying over all valuations reduces to a depth-first search
//! over the bits actually consulted. Tables materialized from the model are
//! members of the literal string-level classes (checked in tests).

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::term::{atoms, collect_atoms, depth, Atom, Term, Variety};
use crate::valuation::{strings, ValuationTable, DEFAULT_BUDGET};

/// Reduced query history; each entry packs `atom << 1 | reply`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct State(Vec<u8>);

impl State {
    fn last(&self) -> Option<(u8, bool)> {
        self.0.last().map(|&e| unpack(e))
    }

    fn pushed(&self, x: u8, r: bool) -> State {
        let mut v = self.0.clone();
        v.push(x << 1 | r as u8);
        State(v)
    }

    fn contains(&self, x: u8, r: bool) -> bool {
        self.0.contains(&(x << 1 | r as u8))
    }

    fn reply_of(&self, x: u8) -> Option<bool> {
        self.0.iter().map(|&e| unpack(e)).find(|&(a, _)| a == x).map(|(_, r)| r)
    }

    /// Reply shared by the maximal suffix of equal replies, if `x` is in it.
    fn run_reply(&self, x: u8) -> Option<bool> {
        let (_, r) = self.last()?;
        self.0.iter().rev().map(|&e| unpack(e)).take_while(|&(_, s)| s == r).any(|(a, _)| a == x).then_some(r)
    }
}

fn unpack(e: u8) -> (u8, bool) {
    (e >> 1, e & 1 == 1)
}

/// An unforced reply: the atom queried in a given state.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Key {
    state: State,
    atom: u8,
}

impl Key {
    /// Deterministic pseudo-random reply for seeded sampling.
    pub fn hashed_reply(&self, seed: u64) -> bool {
        let mut h = splitmix(seed ^ 0x5151_5151);
        for &b in &self.state.0 {
            h = splitmix(h ^ b as u64);
        }
        splitmix(h ^ (0x100 | self.atom as u64)) & 1 == 1
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) trait Assign {
    fn get(&self, key: &Key) -> Option<bool>;
}

impl Assign for HashMap<Key, bool> {
    fn get(&self, key: &Key) -> Option<bool> {
        HashMap::get(self, key).copied()
    }
}

struct Total<F: Fn(&Key) -> bool>(F);

impl<F: Fn(&Key) -> bool> Assign for Total<F> {
    fn get(&self, key: &Key) -> Option<bool> {
        Some((self.0)(key))
    }
}

enum Probe {
    Known(bool, State),
    Unknown(Key),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Model(pub Variety);

impl Model {
    fn forced(&self, s: &State, x: u8) -> Option<(bool, State)> {
        use Variety::*;
        let k = self.0;
        let base = match k {
            Rp => s.last().filter(|&(a, _)| a == x).map(|(_, r)| (r, s.pushed(x, r))),
            Cr | CrPmem | CrNmem => s.last().filter(|&(a, _)| a == x).map(|(_, r)| (r, s.clone())),
            Wm | WmPmem | WmNmem => s.run_reply(x).map(|r| (r, s.clone())),
            Mem => s.reply_of(x).map(|r| (r, s.clone())),
            _ => None,
        };
        if base.is_some() {
            return base;
        }
        let keep = match k {
            Pmem | CrPmem | WmPmem => true,
            Nmem | CrNmem | WmNmem => false,
            _ => return None,
        };
        s.contains(x, keep).then(|| (keep, s.pushed(x, keep)))
    }

    fn advance(&self, s: &State, x: u8, r: bool) -> State {
        if self.0 == Variety::St {
            State::default()
        } else {
            s.pushed(x, r)
        }
    }

    fn probe(&self, s: &State, x: u8, assign: &dyn Assign) -> Probe {
        if let Some((r, next)) = self.forced(s, x) {
            return Probe::Known(r, next);
        }
        let key = Key { state: if self.0 == Variety::St { State::default() } else { s.clone() }, atom: x };
        match assign.get(&key) {
            Some(r) => Probe::Known(r, self.advance(s, x, r)),
            None => Probe::Unknown(key),
        }
    }

    fn query(&self, s: &mut State, x: u8, assign: &dyn Assign) -> std::result::Result<bool, Key> {
        match self.probe(s, x, assign) {
            Probe::Known(r, next) => {
                *s = next;
                Ok(r)
            }
            Probe::Unknown(key) => Err(key),
        }
    }

    /// Evaluates from `s`, counting queries in `len`.
    fn eval(&self, p: &Node, s: &mut State, len: &mut usize, assign: &dyn Assign) -> std::result::Result<bool, Key> {
        match p {
            Node::T => Ok(true),
            Node::F => Ok(false),
            Node::A(x) => {
                *len += 1;
                self.query(s, *x, assign)
            }
            Node::C(x, y, z) => {
                if self.eval(y, s, len, assign)? {
                    self.eval(x, s, len, assign)
                } else {
                    self.eval(z, s, len, assign)
                }
            }
        }
    }

    /// Whether the residuals of `s1` and `s2` agree on all strings up to
    /// length `rem`, given the assignment. An unassigned reply in a pair of
    /// distinct states can always be chosen to disagree.
    fn residual_eq(&self, s1: &State, s2: &State, rem: usize, n: u8, assign: &dyn Assign) -> bool {
        if rem == 0 || s1 == s2 {
            return true;
        }
        (0..n).all(|x| match (self.probe(s1, x, assign), self.probe(s2, x, assign)) {
            (Probe::Known(r1, t1), Probe::Known(r2, t2)) => r1 == r2 && self.residual_eq(&t1, &t2, rem - 1, n, assign),
            (Probe::Unknown(k1), Probe::Unknown(k2)) => k1 == k2,
            _ => false,
        })
    }
}

/// A term with atoms replaced by alphabet indices.
pub(crate) enum Node {
    T,
    F,
    A(u8),
    C(Box<Node>, Box<Node>, Box<Node>),
}

fn compile(t: &Term, alphabet: &[Atom]) -> Result<Node> {
    Ok(match t {
        Term::T => Node::T,
        Term::F => Node::F,
        Term::Atom(a) => {
            Node::A(alphabet.binary_search(a).map_err(|_| Error::AlphabetViolation(a.name().to_string()))? as u8)
        }
        Term::Cond(x, y, z) => {
            Node::C(Box::new(compile(x, alphabet)?), Box::new(compile(y, alphabet)?), Box::new(compile(z, alphabet)?))
        }
    })
}

fn sorted_alphabet(alphabet: &[Atom]) -> Result<Vec<Atom>> {
    let v: Vec<Atom> = alphabet.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if v.is_empty() || v.len() > 100 {
        return Err(Error::InvalidArgument("alphabet must have between 1 and 100 atoms".into()));
    }
    Ok(v)
}

/// Depth-first search over the reply bits consulted by `leaf`.
struct Explorer {
    assign: HashMap<Key, bool>,
    leaves: u64,
    budget: u64,
}

impl Explorer {
    fn new(budget: u64) -> Explorer {
        Explorer { assign: HashMap::new(), leaves: 0, budget }
    }

    /// True iff `leaf` holds under every total assignment. On `false` the
    /// assignment is left at the counterexample.
    fn for_all(&mut self, leaf: &dyn Fn(&dyn Assign) -> std::result::Result<bool, Key>) -> Result<bool> {
        match leaf(&self.assign) {
            Ok(ok) => {
                self.leaves += 1;
                if self.leaves > self.budget {
                    return Err(Error::BudgetExceeded { limit: self.budget, what: "exploring valuations".into() });
                }
                Ok(ok)
            }
            Err(key) => {
                for v in [true, false] {
                    self.assign.insert(key.clone(), v);
                    if !self.for_all(leaf)? {
                        return Ok(false);
                    }
                }
                self.assign.remove(&key);
                Ok(true)
            }
        }
    }
}

/// The atoms of both terms plus one atom occurring in neither.
pub fn oracle_alphabet(p: &Term, q: &Term) -> Vec<Atom> {
    let mut set = BTreeSet::new();
    collect_atoms(p, &mut set);
    collect_atoms(q, &mut set);
    let fresh = (0..).map(|i| Atom::new(&format!("fresh{i}")).unwrap()).find(|a| !set.contains(a)).unwrap();
    set.insert(fresh);
    set.into_iter().collect()
}

fn check_depths(terms: &[&Term], obs_depth: usize) -> Result<()> {
    for t in terms {
        let d = depth(t);
        if d > obs_depth {
            return Err(Error::DepthExhausted { needed: d, available: obs_depth });
        }
    }
    Ok(())
}

/// How two terms compare over all valuations of a variety.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleVerdict {
    Congruent,
    DistinguishedByValue,
    DistinguishedByDerivative,
}

/// Agreement of values, and optionally of residuals after evaluation, over
/// every `k`-valuation on `alphabet` observable to `obs_depth`.
pub fn compare_over(
    p: &Term,
    q: &Term,
    k: Variety,
    alphabet: &[Atom],
    obs_depth: usize,
    with_residual: bool,
    budget: u64,
) -> Result<bool> {
    let alphabet = sorted_alphabet(alphabet)?;
    check_depths(&[p, q], obs_depth)?;
    let (np, nq) = (compile(p, &alphabet)?, compile(q, &alphabet)?);
    let model = Model(k);
    let n = alphabet.len() as u8;
    let leaf = |assign: &dyn Assign| {
        let (mut sp, mut lp) = (State::default(), 0);
        let vp = model.eval(&np, &mut sp, &mut lp, assign)?;
        let (mut sq, mut lq) = (State::default(), 0);
        let vq = model.eval(&nq, &mut sq, &mut lq, assign)?;
        Ok(vp == vq && (!with_residual || model.residual_eq(&sp, &sq, obs_depth - lp.max(lq), n, assign)))
    };
    Explorer::new(budget).for_all(&leaf)
}

fn oracle_depth(p: &Term, q: &Term) -> usize {
    depth(p) + depth(q) + 2
}

/// `p` and `q` take the same value under every `k`-valuation.
pub fn equiv_oracle(p: &Term, q: &Term, k: Variety) -> Result<bool> {
    compare_over(p, q, k, &oracle_alphabet(p, q), oracle_depth(p, q), false, DEFAULT_BUDGET)
}

/// Equal values and equal valuations after evaluation, which implies `p =_k q`.
pub fn congruent_oracle(p: &Term, q: &Term, k: Variety) -> Result<bool> {
    compare_over(p, q, k, &oracle_alphabet(p, q), oracle_depth(p, q), true, DEFAULT_BUDGET)
}

pub fn oracle_verdict(p: &Term, q: &Term, k: Variety) -> Result<OracleVerdict> {
    Ok(if !equiv_oracle(p, q, k)? {
        OracleVerdict::DistinguishedByValue
    } else if congruent_oracle(p, q, k)? {
        OracleVerdict::Congruent
    } else {
        OracleVerdict::DistinguishedByDerivative
    })
}

/// Soundness check of an equation over all `k`-valuations of the given
/// alphabet and observable depth.
pub fn laws_hold(lhs: &Term, rhs: &Term, k: Variety, alphabet: &[Atom], obs_depth: usize) -> Result<bool> {
    compare_over(lhs, rhs, k, alphabet, obs_depth, true, DEFAULT_BUDGET)
}

/// A `k`-table under which `p` evaluates to `want`, if one exists. Replies
/// never consulted default to F.
pub fn search_table(
    p: &Term,
    k: Variety,
    alphabet: &[Atom],
    obs_depth: usize,
    want: bool,
    budget: u64,
) -> Result<Option<ValuationTable>> {
    let alphabet = sorted_alphabet(alphabet)?;
    check_depths(&[p], obs_depth)?;
    let np = compile(p, &alphabet)?;
    let model = Model(k);
    let leaf = |assign: &dyn Assign| {
        let mut s = State::default();
        Ok(model.eval(&np, &mut s, &mut 0, assign)? != want)
    };
    let mut ex = Explorer::new(budget);
    if ex.for_all(&leaf)? {
        return Ok(None);
    }
    let assign = ex.assign;
    Ok(Some(materialize(k, &alphabet, obs_depth, &|key| assign.get(key).copied().unwrap_or(false))?))
}

/// The table of the `k`-valuation whose unforced replies are given by `f`.
pub fn materialize(
    k: Variety,
    alphabet: &[Atom],
    obs_depth: usize,
    f: &dyn Fn(&Key) -> bool,
) -> Result<ValuationTable> {
    let alphabet = sorted_alphabet(alphabet)?;
    let model = Model(k);
    let total = Total(f);
    ValuationTable::from_fn(&alphabet, obs_depth, |sigma| {
        let mut s = State::default();
        let mut r = false;
        for &x in sigma {
            r = model.query(&mut s, x as u8, &total).expect("total assignment");
        }
        r
    })
}

/// Whether `h` is the table of some valuation in the model of `k`.
pub fn model_consistent(h: &ValuationTable, k: Variety) -> bool {
    let model = Model(k);
    let mut assign: HashMap<Key, bool> = HashMap::new();
    for sigma in strings(h.alphabet().len(), h.obs_depth()) {
        let mut s = State::default();
        for i in 0..sigma.len() {
            let want = h.reply_idx(&sigma[..=i]);
            match model.probe(&s, sigma[i] as u8, &assign) {
                Probe::Known(r, next) => {
                    if r != want {
                        return false;
                    }
                    s = next;
                }
                Probe::Unknown(key) => {
                    assign.insert(key, want);
                    s = model.advance(&s, sigma[i] as u8, want);
                }
            }
        }
    }
    true
}

/// Values of `p` and of every query sequence of length up to `probe_len`
/// after it, under `seeds` pseudo-random `k`-valuations. Since each entry is
/// the value of `p` in some fixed context, differing fingerprints certify
/// that two terms are not `k`-congruent.
pub fn fingerprint(p: &Term, k: Variety, alphabet: &[Atom], seeds: u64, probe_len: usize) -> Result<Vec<u64>> {
    let alphabet = sorted_alphabet(alphabet)?;
    let np = compile(p, &alphabet)?;
    let model = Model(k);
    let probes = strings(alphabet.len(), probe_len);
    let mut bits = Vec::new();
    for seed in 0..seeds {
        let total = Total(move |key: &Key| key.hashed_reply(seed));
        let mut s = State::default();
        bits.push(model.eval(&np, &mut s, &mut 0, &total).expect("total assignment"));
        for probe in &probes {
            let mut t = s.clone();
            let mut r = false;
            for &x in probe {
                r = model.query(&mut t, x as u8, &total).expect("total assignment");
            }
            bits.push(r);
        }
    }
    Ok(bits.chunks(64).map(|c| c.iter().fold(0u64, |acc, &b| acc << 1 | b as u64)).collect())
}

/// A pseudo-random `k`-table drawn from the model.
pub fn sampled_table(k: Variety, alphabet: &[Atom], obs_depth: usize, seed: u64) -> Result<ValuationTable> {
    materialize(k, alphabet, obs_depth, &|key| key.hashed_reply(seed))
}

/// Atoms of a term plus the given extras, sorted.
pub fn alphabet_with(t: &Term, extra: &[Atom]) -> Vec<Atom> {
    let mut set = atoms(t);
    set.extend(extra.iter().cloned());
    set.into_iter().collect()
}
