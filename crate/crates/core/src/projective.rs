//! Projections of statements to finite depth, projective sequences, and
//! linear recursive specifications through their finite approximants.

use std::collections::HashMap;
use std::fmt;

use crate::congruence::basic_form;
use crate::error::{Error, Result};
use crate::term::{Atom, Term};
use crate::valuation::ValuationTable;

/// `π_n(t)`, computed on the basic form of `t`.
pub fn project(n: usize, t: &Term) -> Term {
    assert!(n >= 1, "projection index starts at 1");
    pr(n, &basic_form(t))
}

fn pr(n: usize, p: &Term) -> Term {
    match p {
        Term::Cond(x, a, z) => {
            if n == 1 {
                Term::Cond(Term::T.into(), a.clone(), Term::F.into())
            } else {
                Term::Cond(pr(n - 1, x).into(), a.clone(), pr(n - 1, z).into())
            }
        }
        _ => p.clone(),
    }
}

/// `project(m, levels[m]) == levels[m - 1]` for every adjacent pair.
pub fn is_projective(levels: &[Term]) -> bool {
    levels.windows(2).enumerate().all(|(i, w)| project(i + 1, &w[1]) == w[0])
}

/// Componentwise `π_n(P_n <| Q_n |> R_n)`.
pub fn seq_cond(p: &[Term], q: &[Term], r: &[Term]) -> Result<Vec<Term>> {
    if p.len() != q.len() || q.len() != r.len() {
        return Err(Error::LengthMismatch(format!("{}, {}, {}", p.len(), q.len(), r.len())));
    }
    Ok((0..p.len()).map(|i| project(i + 1, &Term::cond(p[i].clone(), q[i].clone(), r[i].clone()))).collect())
}

/// Right-hand side of a linear equation, variables by index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rhs {
    T,
    F,
    Cond(usize, Atom, usize),
}

/// A finite system `X_i = T | F | X_j <| a |> X_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSpec {
    names: Vec<String>,
    equations: Vec<Rhs>,
}

/// A system of equations whose variables are addressed by index.
pub trait Equations {
    fn lookup(&self, name: &str) -> Result<usize>;
    fn rhs(&self, var: usize) -> Result<Rhs>;
}

pub fn is_var_name(name: &str) -> bool {
    let mut c = name.chars();
    c.next() == Some('X') && name.len() > 1 && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl LinearSpec {
    pub fn new(equations: Vec<(String, Rhs)>) -> Result<LinearSpec> {
        if equations.is_empty() {
            return Err(Error::SpecFormat { line: 0, message: "no equations".into() });
        }
        let names: Vec<String> = equations.iter().map(|(n, _)| n.clone()).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_var_name(n) {
                return Err(Error::SpecFormat { line: i + 1, message: format!("invalid variable name `{n}`") });
            }
            if names[..i].contains(n) {
                return Err(Error::SpecFormat { line: i + 1, message: format!("second equation for `{n}`") });
            }
        }
        let equations: Vec<Rhs> = equations.into_iter().map(|(_, r)| r).collect();
        for r in &equations {
            if let Rhs::Cond(j, _, k) = r {
                if *j >= names.len() || *k >= names.len() {
                    return Err(Error::UndeclaredVariable(format!("#{}", j.max(k))));
                }
            }
        }
        Ok(LinearSpec { names, equations })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn equations(&self) -> &[Rhs] {
        &self.equations
    }

    /// Parses the spec file format.
    pub fn parse(text: &str) -> Result<LinearSpec> {
        let err = |line: usize, message: String| Error::SpecFormat { line, message };
        let mut raw: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| err(n, "expected `X = ...`".into()))?;
            let lhs = lhs.trim();
            if !is_var_name(lhs) {
                return Err(err(n, format!("invalid variable name `{lhs}`")));
            }
            if raw.iter().any(|(_, name, _)| name == lhs) {
                return Err(err(n, format!("second equation for `{lhs}`")));
            }
            raw.push((n, lhs.to_string(), spaced(rhs)));
        }
        if raw.is_empty() {
            return Err(err(1, "no equations".into()));
        }
        let index = |n: usize, name: &str| -> Result<usize> {
            if !is_var_name(name) {
                return Err(err(n, format!("expected a variable, found `{name}`")));
            }
            raw.iter().position(|(_, v, _)| v == name).ok_or_else(|| err(n, format!("undeclared variable `{name}`")))
        };
        let atom = |n: usize, name: &str| Atom::new(name).map_err(|_| err(n, format!("invalid atom `{name}`")));
        let mut equations = Vec::new();
        for (n, name, toks) in &raw {
            let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
            let rhs = match toks.as_slice() {
                ["T"] => Rhs::T,
                ["F"] => Rhs::F,
                [x, "<|", a, "|>", y] => Rhs::Cond(index(*n, x)?, atom(*n, a)?, index(*n, y)?),
                [a, "then", x] => {
                    let j = index(*n, x)?;
                    Rhs::Cond(j, atom(*n, a)?, j)
                }
                _ => return Err(err(*n, "expected `T`, `F`, `Xj <| a |> Xk` or `a then Xj`".into())),
            };
            equations.push((name.clone(), rhs));
        }
        LinearSpec::new(equations)
    }

    /// Renders the spec in the file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (name, rhs) in self.names.iter().zip(&self.equations) {
            let body = match rhs {
                Rhs::T => "T".to_string(),
                Rhs::F => "F".to_string(),
                Rhs::Cond(j, a, k) => format!("{} <| {} |> {}", self.names[*j], a, self.names[*k]),
            };
            out.push_str(&format!("{name} = {body}\n"));
        }
        out
    }
}

fn spaced(s: &str) -> Vec<String> {
    s.replace("<|", " <| ").replace("|>", " |> ").split_whitespace().map(String::from).collect()
}

impl fmt::Display for LinearSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

impl Equations for LinearSpec {
    fn lookup(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
    }

    fn rhs(&self, var: usize) -> Result<Rhs> {
        self.equations.get(var).cloned().ok_or_else(|| Error::UndeclaredVariable(format!("#{var}")))
    }
}

/// Infinitely many equations `X_i = rule(i)` for `i >= 1`.
pub struct IndexedSpec {
    rule: Box<dyn Fn(usize) -> Rhs + Send + Sync>,
}

impl IndexedSpec {
    pub fn new(rule: impl Fn(usize) -> Rhs + Send + Sync + 'static) -> IndexedSpec {
        IndexedSpec { rule: Box::new(rule) }
    }

    /// `X_i = X_{i+1} <| a |> X_{i+1}` when `i` is prime, with `b` otherwise.
    pub fn primes() -> IndexedSpec {
        let (a, b) = (Atom::new("a").unwrap(), Atom::new("b").unwrap());
        IndexedSpec::new(move |i| Rhs::Cond(i + 1, if is_prime(i) { a.clone() } else { b.clone() }, i + 1))
    }
}

/// Name of the built-in prime specification.
pub const PRIMES: &str = "@primes";

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Equations for IndexedSpec {
    fn lookup(&self, name: &str) -> Result<usize> {
        name.strip_prefix('X')
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
    }

    fn rhs(&self, var: usize) -> Result<Rhs> {
        if var == 0 {
            return Err(Error::UndeclaredVariable("X0".into()));
        }
        Ok((self.rule)(var))
    }
}

/// Cap on distinct (level, variable) pairs visited while unfolding.
pub const UNFOLD_BUDGET: usize = 1 << 20;

/// `π_n(<var | spec>)`.
pub fn unfold_projection(spec: &dyn Equations, var: &str, n: usize) -> Result<Term> {
    if n == 0 {
        return Err(Error::InvalidArgument("projection index starts at 1".into()));
    }
    let start = spec.lookup(var)?;
    let mut memo = HashMap::new();
    let level = unfold(spec, start, n, &mut memo)?;
    let next = unfold(spec, start, n + 1, &mut memo)?;
    // guarded equations stabilize after n rounds
    assert_eq!(project(n, &next), level, "unfolding of {var} is not projective at level {n}");
    Ok(level)
}

/// `π_1 .. π_n` of `<var | spec>`.
pub fn unfold_levels(spec: &dyn Equations, var: &str, n: usize) -> Result<Vec<Term>> {
    (1..=n).map(|m| unfold_projection(spec, var, m)).collect()
}

fn unfold(spec: &dyn Equations, var: usize, n: usize, memo: &mut HashMap<(usize, usize), Term>) -> Result<Term> {
    if let Some(t) = memo.get(&(n, var)) {
        return Ok(t.clone());
    }
    if memo.len() >= UNFOLD_BUDGET {
        return Err(Error::BudgetExceeded { limit: UNFOLD_BUDGET as u64, what: "unfolding a specification".into() });
    }
    let t = match spec.rhs(var)? {
        Rhs::T => Term::T,
        Rhs::F => Term::F,
        Rhs::Cond(j, a, k) => {
            if n == 1 {
                Term::basic_atom(&a)
            } else {
                let l = unfold(spec, j, n - 1, memo)?;
                let r = if j == k { l.clone() } else { unfold(spec, k, n - 1, memo)? };
                Term::cond(l, Term::atom(&a), r)
            }
        }
    };
    memo.insert((n, var), t.clone());
    Ok(t)
}

/// Outcome of running a recursive statement against a valuation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecValue {
    T,
    F,
    Diverged,
}

impl fmt::Display for SpecValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecValue::T => "T",
            SpecValue::F => "F",
            SpecValue::Diverged => "diverged",
        })
    }
}

/// Follows the equations from `var`, spending one query of `h` per
/// conditional and at most `fuel` queries.
pub fn eval_spec(spec: &dyn Equations, var: &str, h: &ValuationTable, fuel: usize) -> Result<(SpecValue, Vec<Atom>)> {
    let mut cur = spec.lookup(var)?;
    let mut trace = Vec::new();
    let mut idx = Vec::new();
    loop {
        match spec.rhs(cur)? {
            Rhs::T => return Ok((SpecValue::T, trace)),
            Rhs::F => return Ok((SpecValue::F, trace)),
            Rhs::Cond(j, a, k) => {
                if trace.len() == fuel {
                    return Ok((SpecValue::Diverged, trace));
                }
                if idx.len() >= h.obs_depth() {
                    return Err(Error::DepthExhausted { needed: idx.len() + 1, available: h.obs_depth() });
                }
                idx.push(h.atom_index(&a)?);
                trace.push(a);
                cur = if h.reply_idx(&idx) { j } else { k };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::atom;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn bf(s: &str) -> Term {
        basic_form(&t(s))
    }

    const LOOP: &str = "X1 = X3 <| a |> X2\nX2 = b then X1\nX3 = T\n";

    #[test]
    fn project_examples() {
        assert_eq!(project(1, &t("b <| a |> c")), t("T <| a |> F"));
        for n in 1..5 {
            assert_eq!(project(n, &t("a")), t("T <| a |> F"));
            assert_eq!(project(n, &Term::T), Term::T);
        }
        assert_eq!(project(3, &t("T <| a |> (a <| b |> a)")), t("T <| a |> ((T <| a |> F) <| b |> (T <| a |> F))"));
    }

    #[test]
    fn unfold_loop_example() {
        let spec = LinearSpec::parse(LOOP).unwrap();
        let levels = unfold_levels(&spec, "X1", 4).unwrap();
        assert_eq!(
            levels,
            vec![bf("a"), bf("T <| a |> b"), bf("T <| a |> (b then a)"), bf("T <| a |> (b then (T <| a |> b))")]
        );
        assert!(is_projective(&levels));
        let eight = unfold_levels(&spec, "X1", 8).unwrap();
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(eight[i], eight[j]);
            }
        }
    }

    #[test]
    fn unfold_primes() {
        let levels = unfold_levels(&IndexedSpec::primes(), "X1", 5).unwrap();
        let want = ["b", "b then a", "b then a then a", "b then a then a then b", "b then a then a then b then a"];
        assert_eq!(levels, want.iter().map(|s| bf(s)).collect::<Vec<_>>());
        assert!(is_projective(&levels));
    }

    #[test]
    fn constant_spec() {
        let spec = LinearSpec::parse("X1 = T\nX2 = F").unwrap();
        for n in 1..4 {
            assert_eq!(unfold_projection(&spec, "X1", n).unwrap(), Term::T);
        }
        assert!(matches!(unfold_projection(&spec, "X9", 1), Err(Error::UndeclaredVariable(_))));
    }

    #[test]
    fn projective_checks() {
        assert!(!is_projective(&[bf("a"), bf("T <| b |> F")]));
        assert!(is_projective(&[Term::T]));
        let a = vec![bf("a"); 3];
        let tt = vec![Term::T; 3];
        let ff = vec![Term::F; 3];
        assert_eq!(seq_cond(&tt, &a, &ff).unwrap(), a);
        assert_eq!(seq_cond(&a, &tt, &ff).unwrap(), a);
        assert_eq!(seq_cond(&tt, &ff, &a).unwrap(), a);
        assert!(matches!(seq_cond(&a, &tt[..2], &ff), Err(Error::LengthMismatch(_))));
    }

    #[test]
    fn spec_files() {
        let spec = LinearSpec::parse("# loop\nX1 = X3<|a|>X2\nX2 = b then X1\nX3 = T # done\n").unwrap();
        assert_eq!(LinearSpec::parse(&spec.to_file_string()).unwrap(), spec);
        for bad in ["X1 = X2 <| a |> X1", "X1 = T\nX1 = F", "Y = T", "X1 = a", "X1 = T <| a |> F", ""] {
            assert!(matches!(LinearSpec::parse(bad), Err(Error::SpecFormat { .. })), "{bad}");
        }
    }

    #[test]
    fn eval_spec_examples() {
        let spec = LinearSpec::parse(LOOP).unwrap();
        let ab = [atom("a"), atom("b")];
        let mut h = ValuationTable::constant(&ab, 4, false).unwrap();
        h.set_idx(&[0, 1, 0], true);
        let (v, trace) = eval_spec(&spec, "X1", &h, 3).unwrap();
        assert_eq!(v, SpecValue::T);
        assert_eq!(trace, vec![atom("a"), atom("b"), atom("a")]);
        assert_eq!(eval_spec(&spec, "X1", &h, 2).unwrap().0, SpecValue::Diverged);

        let never = ValuationTable::static_table(&ab, 10, &|_| false).unwrap();
        assert_eq!(eval_spec(&spec, "X1", &never, 10).unwrap().0, SpecValue::Diverged);
        let f = LinearSpec::parse("X1 = F").unwrap();
        assert_eq!(eval_spec(&f, "X1", &never, 0).unwrap().0, SpecValue::F);
    }
}
