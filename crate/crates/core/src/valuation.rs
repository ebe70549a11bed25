//! Depth-bounded valuation tables: the string function of a reactive
//! valuation, mapping every non-empty query sequence up to the observable
//! depth to the reply its last query receives.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{atoms, depth, Atom, Term, Variety};

pub mod model;

/// Default cap on the number of candidate tables or explored assignments.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValuationTable {
    alphabet: Vec<Atom>,
    obs_depth: usize,
    replies: Vec<bool>,
}

/// Value of an evaluation together with the queries it made.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalResult {
    pub value: bool,
    pub trace: Vec<Atom>,
}

impl EvalResult {
    /// The trace as dot-separated atom names.
    pub fn trace_string(&self) -> String {
        join_dotted(&self.trace)
    }
}

pub(crate) fn join_dotted(atoms: &[Atom]) -> String {
    atoms.iter().map(|a| a.name()).collect::<Vec<_>>().join(".")
}

/// Number of strings of length 1..=d over n letters, or `None` on overflow.
fn string_count(n: usize, d: usize) -> Option<usize> {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..d {
        layer = layer.checked_mul(n)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// All strings of length 1..=d over `0..n`, shortest first, then lexicographic.
pub(crate) fn strings(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(layer.len() * n);
        for s in &layer {
            for a in 0..n {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl ValuationTable {
    /// Builds a table from its reply function on index strings.
    pub fn from_fn(alphabet: &[Atom], obs_depth: usize, mut f: impl FnMut(&[usize]) -> bool) -> Result<ValuationTable> {
        let alphabet = normalize_alphabet(alphabet)?;
        if obs_depth == 0 {
            return Err(Error::InvalidArgument("observable depth must be at least 1".into()));
        }
        let n = string_count(alphabet.len(), obs_depth)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| Error::BudgetExceeded { limit: 1 << 26, what: "allocating a valuation table".into() })?;
        let mut replies = Vec::with_capacity(n);
        for s in strings(alphabet.len(), obs_depth) {
            replies.push(f(&s));
        }
        Ok(ValuationTable { alphabet, obs_depth, replies })
    }

    /// Every query answered with `value`.
    pub fn constant(alphabet: &[Atom], obs_depth: usize, value: bool) -> Result<ValuationTable> {
        ValuationTable::from_fn(alphabet, obs_depth, |_| value)
    }

    /// Replies depend only on the queried atom.
    pub fn static_table(
        alphabet: &[Atom],
        obs_depth: usize,
        assignment: &dyn Fn(&Atom) -> bool,
    ) -> Result<ValuationTable> {
        let alphabet = normalize_alphabet(alphabet)?;
        let values: Vec<bool> = alphabet.iter().map(assignment).collect();
        ValuationTable::from_fn(&alphabet, obs_depth, |s| values[*s.last().unwrap()])
    }

    pub fn alphabet(&self) -> &[Atom] {
        &self.alphabet
    }

    pub fn obs_depth(&self) -> usize {
        self.obs_depth
    }

    fn index(&self, s: &[usize]) -> usize {
        let n = self.alphabet.len();
        let mut offset = 0;
        let mut layer = 1;
        for _ in 1..s.len() {
            layer *= n;
            offset += layer;
        }
        s.iter().fold(0, |acc, &c| acc * n + c) + offset
    }

    /// Reply to the last query of a non-empty index string within depth.
    pub(crate) fn reply_idx(&self, s: &[usize]) -> bool {
        self.replies[self.index(s)]
    }

    pub(crate) fn set_idx(&mut self, s: &[usize], value: bool) {
        let i = self.index(s);
        self.replies[i] = value;
    }

    pub(crate) fn atom_index(&self, a: &Atom) -> Result<usize> {
        self.alphabet.binary_search(a).map_err(|_| Error::AlphabetViolation(a.name().to_string()))
    }

    /// `H_f(sigma)`.
    pub fn reply(&self, sigma: &[Atom]) -> Result<bool> {
        if sigma.is_empty() {
            return Err(Error::InvalidArgument("reply of the empty string".into()));
        }
        if sigma.len() > self.obs_depth {
            return Err(Error::DepthExhausted { needed: sigma.len(), available: self.obs_depth });
        }
        let idx = sigma.iter().map(|a| self.atom_index(a)).collect::<Result<Vec<_>>>()?;
        Ok(self.reply_idx(&idx))
    }

    /// Overrides the reply to the last query of `sigma`.
    pub fn set_reply(&mut self, sigma: &[Atom], value: bool) -> Result<()> {
        self.reply(sigma)?;
        let idx = sigma.iter().map(|a| self.atom_index(a)).collect::<Result<Vec<_>>>()?;
        self.set_idx(&idx, value);
        Ok(())
    }

    /// The valuation reached after answering `sigma`.
    pub fn residual(&self, sigma: &[Atom]) -> Result<ValuationTable> {
        if sigma.is_empty() {
            return Ok(self.clone());
        }
        if sigma.len() >= self.obs_depth {
            return Err(Error::DepthExhausted { needed: sigma.len() + 1, available: self.obs_depth });
        }
        let prefix = sigma.iter().map(|a| self.atom_index(a)).collect::<Result<Vec<_>>>()?;
        let mut buf = prefix.clone();
        ValuationTable::from_fn(&self.alphabet, self.obs_depth - sigma.len(), |s| {
            buf.truncate(prefix.len());
            buf.extend_from_slice(s);
            self.reply_idx(&buf)
        })
    }

    /// Replies as (string, reply) pairs in table order.
    pub fn entries(&self) -> Vec<(Vec<Atom>, bool)> {
        strings(self.alphabet.len(), self.obs_depth)
            .into_iter()
            .map(|s| {
                let v = self.reply_idx(&s);
                (s.into_iter().map(|i| self.alphabet[i].clone()).collect(), v)
            })
            .collect()
    }

    /// Renders the table in the valuation file format, listing every string.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "atoms {}\ndepth {}\ndefault F\n",
            self.alphabet.iter().map(|a| a.name()).collect::<Vec<_>>().join(" "),
            self.obs_depth
        );
        for (s, v) in self.entries() {
            out.push_str(&format!("{} -> {}\n", join_dotted(&s), if v { 'T' } else { 'F' }));
        }
        out
    }

    /// Parses the valuation file format.
    pub fn parse_file(text: &str) -> Result<ValuationTable> {
        let err = |line: usize, message: &str| Error::ValuationFormat { line, message: message.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());

        let (n, first) = lines.next().ok_or_else(|| err(1, "missing `atoms` line"))?;
        let names =
            first.strip_prefix("atoms").filter(|r| r.starts_with(' ')).ok_or_else(|| err(n, "expected `atoms ...`"))?;
        let alphabet = names
            .split_whitespace()
            .map(|w| Atom::new(w).map_err(|_| err(n, &format!("invalid atom `{w}`"))))
            .collect::<Result<Vec<_>>>()?;
        if alphabet.is_empty() {
            return Err(err(n, "empty alphabet"));
        }
        if alphabet.iter().collect::<BTreeSet<_>>().len() != alphabet.len() {
            return Err(err(n, "duplicate atom"));
        }

        let (n, second) = lines.next().ok_or_else(|| err(n + 1, "missing `depth` line"))?;
        let d: usize = second
            .strip_prefix("depth ")
            .and_then(|r| r.trim().parse().ok())
            .filter(|&d| d >= 1)
            .ok_or_else(|| err(n, "expected `depth N` with N >= 1"))?;

        let (n, third) = lines.next().ok_or_else(|| err(n + 1, "missing `default` or `static` line"))?;
        let mut table = if let Some(v) = third.strip_prefix("default ") {
            let v = parse_reply(v.trim()).ok_or_else(|| err(n, "default must be T or F"))?;
            ValuationTable::constant(&alphabet, d, v)?
        } else if let Some(rest) = third.strip_prefix("static ") {
            let mut assignment = Vec::new();
            for item in rest.split_whitespace() {
                let (name, v) = item.split_once('=').ok_or_else(|| err(n, "expected `atom=T|F`"))?;
                let a = Atom::new(name).map_err(|_| err(n, &format!("invalid atom `{name}`")))?;
                if !alphabet.contains(&a) {
                    return Err(err(n, &format!("atom `{name}` not declared")));
                }
                if assignment.iter().any(|(b, _)| b == &a) {
                    return Err(err(n, &format!("duplicate atom `{name}`")));
                }
                let v = parse_reply(v).ok_or_else(|| err(n, "reply must be T or F"))?;
                assignment.push((a, v));
            }
            if assignment.len() != alphabet.len() {
                return Err(err(n, "static assignment must cover every atom"));
            }
            ValuationTable::static_table(&alphabet, d, &|a| assignment.iter().find(|(b, _)| b == a).unwrap().1)?
        } else {
            return Err(err(n, "expected `default T|F` or `static a=T ...`"));
        };

        let mut seen = BTreeSet::new();
        for (n, line) in lines {
            let (key, v) = line.split_once("->").ok_or_else(|| err(n, "expected `s1.s2 -> T|F`"))?;
            let v = parse_reply(v.trim()).ok_or_else(|| err(n, "reply must be T or F"))?;
            let key = key.trim();
            let idx = key
                .split('.')
                .map(|name| {
                    let a = Atom::new(name).map_err(|_| err(n, &format!("invalid atom `{name}`")))?;
                    table.atom_index(&a).map_err(|_| err(n, &format!("atom `{name}` not declared")))
                })
                .collect::<Result<Vec<_>>>()?;
            if idx.len() > d {
                return Err(err(n, "string longer than the declared depth"));
            }
            if !seen.insert(idx.clone()) {
                return Err(err(n, &format!("duplicate key `{key}`")));
            }
            table.set_idx(&idx, v);
        }
        Ok(table)
    }
}

fn parse_reply(s: &str) -> Option<bool> {
    match s {
        "T" => Some(true),
        "F" => Some(false),
        _ => None,
    }
}

fn normalize_alphabet(alphabet: &[Atom]) -> Result<Vec<Atom>> {
    let set: BTreeSet<Atom> = alphabet.iter().cloned().collect();
    if set.is_empty() {
        return Err(Error::InvalidArgument("alphabet must be non-empty".into()));
    }
    Ok(set.into_iter().collect())
}

impl fmt::Debug for ValuationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

/// `P/H` with the trace of queries made.
pub fn evaluate(p: &Term, h: &ValuationTable) -> Result<EvalResult> {
    for a in atoms(p) {
        h.atom_index(&a)?;
    }
    let d = depth(p);
    if d > h.obs_depth {
        return Err(Error::DepthExhausted { needed: d, available: h.obs_depth });
    }
    let mut trace = Vec::new();
    let value = eval_from(p, h, &mut trace)?;
    Ok(EvalResult { value, trace: trace.into_iter().map(|i| h.alphabet[i].clone()).collect() })
}

/// Evaluates from the state reached by `trace`, extending it.
pub(crate) fn eval_from(p: &Term, h: &ValuationTable, trace: &mut Vec<usize>) -> Result<bool> {
    match p {
        Term::T => Ok(true),
        Term::F => Ok(false),
        Term::Atom(a) => {
            let i = h.atom_index(a)?;
            if trace.len() >= h.obs_depth {
                return Err(Error::DepthExhausted { needed: trace.len() + 1, available: h.obs_depth });
            }
            trace.push(i);
            Ok(h.reply_idx(trace))
        }
        Term::Cond(x, y, z) => {
            if eval_from(y, h, trace)? {
                eval_from(x, h, trace)
            } else {
                eval_from(z, h, trace)
            }
        }
    }
}

/// String-level membership test for `k`, imposed at every prefix.
pub fn in_variety(h: &ValuationTable, k: Variety) -> bool {
    let n = h.alphabet.len();
    let d = h.obs_depth;
    let r = |s: &[usize]| h.reply_idx(s);
    let mut prefixes = vec![Vec::new()];
    prefixes.extend(strings(n, d));
    let suffixes = {
        let mut v = vec![Vec::new()];
        v.extend(strings(n, d));
        v
    };
    let cat = |parts: &[&[usize]]| parts.concat();

    let rp = || {
        prefixes
            .iter()
            .filter(|s| s.len() + 2 <= d)
            .all(|s| (0..n).all(|a| r(&cat(&[s, &[a, a]])) == r(&cat(&[s, &[a]]))))
    };
    let cr = || {
        rp() && prefixes.iter().all(|s| {
            (0..n).all(|a| {
                suffixes
                    .iter()
                    .filter(|t| !t.is_empty() && s.len() + 2 + t.len() <= d)
                    .all(|t| r(&cat(&[s, &[a, a], t])) == r(&cat(&[s, &[a], t])))
            })
        })
    };
    let memo = |conditional: bool| {
        prefixes.iter().filter(|s| s.len() + 3 <= d).all(|s| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    if conditional && r(&cat(&[s, &[a, b]])) != r(&cat(&[s, &[a]])) {
                        return true;
                    }
                    r(&cat(&[s, &[a, b, a]])) == r(&cat(&[s, &[a]]))
                        && suffixes
                            .iter()
                            .filter(|t| !t.is_empty() && s.len() + 3 + t.len() <= d)
                            .all(|t| r(&cat(&[s, &[a, b, a], t])) == r(&cat(&[s, &[a, b], t])))
                })
            })
        })
    };
    let preserving = |keep: bool| {
        prefixes.iter().all(|s| {
            (0..n).all(|a| {
                let sa = cat(&[s, &[a]]);
                if sa.len() > d || r(&sa) != keep {
                    return true;
                }
                suffixes.iter().filter(|t| sa.len() + t.len() < d).all(|t| r(&cat(&[&sa, t, &[a]])) == keep)
            })
        })
    };
    match k {
        Variety::Fr => true,
        Variety::Rp => rp(),
        Variety::Cr => cr(),
        Variety::Wm => cr() && memo(true),
        Variety::Mem => cr() && memo(false),
        Variety::St => prefixes.iter().all(|s| (0..n).all(|a| s.len() + 1 > d || r(&cat(&[s, &[a]])) == r(&[a]))),
        Variety::Pmem => preserving(true),
        Variety::Nmem => preserving(false),
        Variety::CrPmem => cr() && preserving(true),
        Variety::WmPmem => cr() && memo(true) && preserving(true),
        Variety::CrNmem => cr() && preserving(false),
        Variety::WmNmem => cr() && memo(true) && preserving(false),
    }
}

/// All tables of `k` over the alphabet and depth, T before F per string.
pub fn enumerate_tables(alphabet: &[Atom], obs_depth: usize, k: Variety, budget: u64) -> Result<Vec<ValuationTable>> {
    let alphabet = normalize_alphabet(alphabet)?;
    let over = || Error::BudgetExceeded { limit: budget, what: "enumerating valuation tables".into() };
    let count = string_count(alphabet.len(), obs_depth).filter(|&c| c < 63).ok_or_else(over)?;
    if (1u64 << count) > budget {
        return Err(over());
    }
    let strs = strings(alphabet.len(), obs_depth);
    let mut out = Vec::new();
    let mut table = ValuationTable::constant(&alphabet, obs_depth.max(1), true)?;
    for bits in 0u64..(1u64 << count) {
        // the first string is the most significant position; a set bit means F
        for (i, s) in strs.iter().enumerate() {
            table.set_idx(s, bits >> (count - 1 - i) & 1 == 0);
        }
        if in_variety(&table, k) {
            out.push(table.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::atom;

    fn ab() -> Vec<Atom> {
        vec![atom("a"), atom("b")]
    }

    fn table(alphabet: &[Atom], d: usize, entries: &[(&str, bool)], default: bool) -> ValuationTable {
        let mut h = ValuationTable::constant(alphabet, d, default).unwrap();
        for (s, v) in entries {
            let idx: Vec<usize> = s.split('.').map(|n| h.atom_index(&atom(n)).unwrap()).collect();
            h.set_idx(&idx, *v);
        }
        h
    }

    #[test]
    fn evaluate_examples() {
        let a = vec![atom("a")];
        let h = table(&a, 2, &[("a", true), ("a.a", false)], true);
        let r = evaluate(&parse_term("a").unwrap(), &h).unwrap();
        assert_eq!((r.value, r.trace_string()), (true, "a".to_string()));
        let r = evaluate(&parse_term("a <| a |> F").unwrap(), &h).unwrap();
        assert_eq!((r.value, r.trace_string()), (false, "a.a".to_string()));

        let h = table(&ab(), 2, &[("b.a", false)], true);
        let r = evaluate(&parse_term("a <| b |> a").unwrap(), &h).unwrap();
        assert_eq!((r.value, r.trace_string()), (false, "b.a".to_string()));
    }

    #[test]
    fn evaluate_errors() {
        let h = ValuationTable::constant(&[atom("a")], 1, true).unwrap();
        assert!(matches!(evaluate(&parse_term("b").unwrap(), &h), Err(Error::AlphabetViolation(_))));
        assert!(matches!(evaluate(&parse_term("a land a").unwrap(), &h), Err(Error::DepthExhausted { .. })));
    }

    #[test]
    fn residual_examples() {
        let h = table(&ab(), 3, &[("a.b", false)], true);
        assert_eq!(h.residual(&[]).unwrap(), h);
        let r = h.residual(&[atom("a")]).unwrap();
        assert_eq!(r.obs_depth(), 2);
        assert!(!r.reply(&[atom("b")]).unwrap());
        assert!(r.reply(&[atom("a")]).unwrap());
        let all_t = ValuationTable::constant(&ab(), 3, true).unwrap();
        assert_eq!(all_t.residual(&[atom("a")]).unwrap(), ValuationTable::constant(&ab(), 2, true).unwrap());
        assert!(h.residual(&[atom("a"), atom("a"), atom("a")]).is_err());
    }

    #[test]
    fn in_variety_examples() {
        let all_t = ValuationTable::constant(&ab(), 3, true).unwrap();
        for k in Variety::ALL {
            assert!(in_variety(&all_t, k), "{k}");
        }
        let h = table(&[atom("a")], 2, &[("a.a", false)], true);
        assert!(in_variety(&h, Variety::Fr));
        assert!(!in_variety(&h, Variety::Rp));
        let st = ValuationTable::static_table(&ab(), 3, &|a| a.name() == "a").unwrap();
        assert!(in_variety(&st, Variety::St));
        assert!(in_variety(&st, Variety::Mem));
    }

    #[test]
    fn enumerate_examples() {
        let a = vec![atom("a")];
        for k in Variety::ALL {
            assert_eq!(enumerate_tables(&a, 1, k, DEFAULT_BUDGET).unwrap().len(), 2);
        }
        assert_eq!(enumerate_tables(&a, 2, Variety::Fr, DEFAULT_BUDGET).unwrap().len(), 4);
        assert_eq!(enumerate_tables(&a, 2, Variety::Rp, DEFAULT_BUDGET).unwrap().len(), 2);
        let all = enumerate_tables(&a, 2, Variety::Fr, DEFAULT_BUDGET).unwrap();
        assert_eq!(all[0], ValuationTable::constant(&a, 2, true).unwrap());
        assert!(enumerate_tables(&ab(), 5, Variety::Fr, DEFAULT_BUDGET).unwrap_err().is_budget());
    }

    #[test]
    fn varieties_nest() {
        let tables = enumerate_tables(&ab(), 3, Variety::Fr, DEFAULT_BUDGET).unwrap();
        for h in &tables {
            for w in Variety::CHAIN.windows(2) {
                if in_variety(h, w[1]) {
                    assert!(in_variety(h, w[0]), "{} table not {}", w[1], w[0]);
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let h = table(&ab(), 2, &[("a", true), ("a.a", false)], false);
        let text = h.to_file_string();
        assert!(text.contains("a -> T\n") && text.contains("a.a -> F\n"));
        assert_eq!(ValuationTable::parse_file(&text).unwrap(), h);
    }

    #[test]
    fn file_formats() {
        let h = ValuationTable::parse_file("atoms a b\ndepth 2\nstatic a=T b=F\n").unwrap();
        assert_eq!(h, ValuationTable::static_table(&ab(), 2, &|x| x.name() == "a").unwrap());
        let h = ValuationTable::parse_file("# comment\natoms a\ndepth 2\ndefault T\na.a -> F\n").unwrap();
        assert!(!h.reply(&[atom("a"), atom("a")]).unwrap());
        for bad in [
            "atoms a\ndepth 2\ndefault T\na -> F\na -> T\n",
            "atoms a\ndepth 1\ndefault T\na.a -> F\n",
            "atoms a\ndepth 1\ndefault X\n",
            "atoms a\ndepth 0\ndefault T\n",
            "atoms a\ndepth 1\ndefault T\nb -> F\n",
            "atoms a b\ndepth 1\nstatic a=T\n",
            "depth 1\n",
        ] {
            assert!(matches!(ValuationTable::parse_file(bad), Err(Error::ValuationFormat { .. })), "{bad}");
        }
    }

    #[test]
    fn static_evaluation_is_classical() {
        let p = parse_term("(a lor b) land not a").unwrap();
        for (va, vb) in [(true, true), (true, false), (false, true), (false, false)] {
            let h = ValuationTable::static_table(&ab(), depth(&p), &|x| if x.name() == "a" { va } else { vb }).unwrap();
            assert_eq!(evaluate(&p, &h).unwrap().value, (va || vb) && !va);
        }
    }
}
