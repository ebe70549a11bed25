//! Concrete syntax: a precedence-climbing parser, a minimal-parenthesis
//! printer, and desugaring of the sequential connectives into core terms.
//!
//! Precedence from strongest to weakest: `not`, `then`, `land`/`rand`,
//! `lor`/`ror`, `limp`/`rimp`, `liff`/`riff`, and the ternary `P <| Q |> R`.
//! Implications and the ternary do not chain without parentheses; the other
//! binary connectives associate to the left.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{is_atom_name, Atom, Term, RESERVED};

/// The eight sequential binary connectives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Connective {
    LeftAnd,
    RightAnd,
    LeftOr,
    RightOr,
    LeftImp,
    RightImp,
    LeftBiimp,
    RightBiimp,
}

impl Connective {
    pub const ALL: [Connective; 8] = [
        Connective::LeftAnd,
        Connective::RightAnd,
        Connective::LeftOr,
        Connective::RightOr,
        Connective::LeftImp,
        Connective::RightImp,
        Connective::LeftBiimp,
        Connective::RightBiimp,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Connective::LeftAnd => "land",
            Connective::RightAnd => "rand",
            Connective::LeftOr => "lor",
            Connective::RightOr => "ror",
            Connective::LeftImp => "limp",
            Connective::RightImp => "rimp",
            Connective::LeftBiimp => "liff",
            Connective::RightBiimp => "riff",
        }
    }

    fn from_keyword(word: &str) -> Option<Connective> {
        Connective::ALL.iter().copied().find(|c| c.keyword() == word)
    }

    fn level(self) -> u8 {
        match self {
            Connective::LeftBiimp | Connective::RightBiimp => BIIMP,
            Connective::LeftImp | Connective::RightImp => IMP,
            Connective::LeftOr | Connective::RightOr => OR,
            Connective::LeftAnd | Connective::RightAnd => AND,
        }
    }
}

const COND: u8 = 0;
const BIIMP: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const SEQ: u8 = 5;
const UNARY: u8 = 6;
const ATOMIC: u8 = 7;

/// Statements with the derived connectives kept as written.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SugaredTerm {
    T,
    F,
    Atom(Atom),
    Cond(Box<SugaredTerm>, Box<SugaredTerm>, Box<SugaredTerm>),
    Not(Box<SugaredTerm>),
    AndThen(Box<SugaredTerm>, Box<SugaredTerm>),
    Binary(Connective, Box<SugaredTerm>, Box<SugaredTerm>),
}

impl SugaredTerm {
    pub fn atom(a: &Atom) -> SugaredTerm {
        SugaredTerm::Atom(a.clone())
    }

    pub fn cond(x: SugaredTerm, y: SugaredTerm, z: SugaredTerm) -> SugaredTerm {
        SugaredTerm::Cond(Box::new(x), Box::new(y), Box::new(z))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(x: SugaredTerm) -> SugaredTerm {
        SugaredTerm::Not(Box::new(x))
    }

    pub fn and_then(x: SugaredTerm, y: SugaredTerm) -> SugaredTerm {
        SugaredTerm::AndThen(Box::new(x), Box::new(y))
    }

    pub fn binary(op: Connective, x: SugaredTerm, y: SugaredTerm) -> SugaredTerm {
        SugaredTerm::Binary(op, Box::new(x), Box::new(y))
    }

    /// Embeds a core term without any sugar.
    pub fn from_term(t: &Term) -> SugaredTerm {
        match t {
            Term::T => SugaredTerm::T,
            Term::F => SugaredTerm::F,
            Term::Atom(a) => SugaredTerm::Atom(a.clone()),
            Term::Cond(x, y, z) => {
                SugaredTerm::cond(SugaredTerm::from_term(x), SugaredTerm::from_term(y), SugaredTerm::from_term(z))
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            SugaredTerm::T | SugaredTerm::F => {}
            SugaredTerm::Atom(a) => {
                out.insert(a.clone());
            }
            SugaredTerm::Not(x) => x.collect_atoms(out),
            SugaredTerm::AndThen(x, y) | SugaredTerm::Binary(_, x, y) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
            }
            SugaredTerm::Cond(x, y, z) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
                z.collect_atoms(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SugaredTerm::T | SugaredTerm::F | SugaredTerm::Atom(_) => 1,
            SugaredTerm::Not(x) => 1 + x.size(),
            SugaredTerm::AndThen(x, y) | SugaredTerm::Binary(_, x, y) => 1 + x.size() + y.size(),
            SugaredTerm::Cond(x, y, z) => 1 + x.size() + y.size() + z.size(),
        }
    }
}

impl fmt::Display for SugaredTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sugared(self))
    }
}

/// `not x` as a core term: `F <| x |> T`.
pub fn negate(x: Term) -> Term {
    Term::cond(Term::F, x, Term::T)
}

/// Applies the defining equations of the derived connectives.
pub fn desugar(s: &SugaredTerm) -> Term {
    match s {
        SugaredTerm::T => Term::T,
        SugaredTerm::F => Term::F,
        SugaredTerm::Atom(a) => Term::Atom(a.clone()),
        SugaredTerm::Cond(x, y, z) => Term::cond(desugar(x), desugar(y), desugar(z)),
        SugaredTerm::Not(x) => negate(desugar(x)),
        SugaredTerm::AndThen(x, y) => {
            let y = desugar(y);
            Term::cond(y.clone(), desugar(x), y)
        }
        SugaredTerm::Binary(op, x, y) => connective(*op, desugar(x), desugar(y)),
    }
}

/// The core term `x op y`.
pub fn connective(op: Connective, x: Term, y: Term) -> Term {
    match op {
        Connective::LeftAnd => Term::cond(y, x, Term::F),
        Connective::RightAnd => Term::cond(x, y, Term::F),
        Connective::LeftOr => Term::cond(Term::T, x, y),
        Connective::RightOr => Term::cond(Term::T, y, x),
        Connective::LeftImp => Term::cond(y, x, Term::T),
        Connective::RightImp => Term::cond(Term::T, y, negate(x)),
        Connective::LeftBiimp => {
            let ny = negate(y.clone());
            Term::cond(y, x, ny)
        }
        Connective::RightBiimp => {
            let nx = negate(x.clone());
            Term::cond(x, y, nx)
        }
    }
}

/// Parses and desugars in one step.
pub fn parse_term(text: &str) -> Result<Term> {
    parse(text).map(|s| desugar(&s))
}

pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, COND, &mut out);
    out
}

fn write_term(t: &Term, min: u8, out: &mut String) {
    match t {
        Term::T => out.push('T'),
        Term::F => out.push('F'),
        Term::Atom(a) => out.push_str(a.name()),
        Term::Cond(x, y, z) => {
            let wrap = min > COND;
            if wrap {
                out.push('(');
            }
            write_term(x, BIIMP, out);
            out.push_str(" <| ");
            write_term(y, BIIMP, out);
            out.push_str(" |> ");
            write_term(z, BIIMP, out);
            if wrap {
                out.push(')');
            }
        }
    }
}

pub fn print_sugared(s: &SugaredTerm) -> String {
    let mut out = String::new();
    write_sugared(s, COND, &mut out);
    out
}

type Writer<'a> = Box<dyn Fn(&mut String) + 'a>;

fn write_sugared(s: &SugaredTerm, min: u8, out: &mut String) {
    let (level, body): (u8, Writer<'_>) = match s {
        SugaredTerm::T => (ATOMIC, Box::new(|o: &mut String| o.push('T'))),
        SugaredTerm::F => (ATOMIC, Box::new(|o: &mut String| o.push('F'))),
        SugaredTerm::Atom(a) => (ATOMIC, Box::new(move |o: &mut String| o.push_str(a.name()))),
        SugaredTerm::Not(x) => (
            UNARY,
            Box::new(move |o: &mut String| {
                o.push_str("not ");
                write_sugared(x, UNARY, o);
            }),
        ),
        SugaredTerm::AndThen(x, y) => (
            SEQ,
            Box::new(move |o: &mut String| {
                write_sugared(x, SEQ, o);
                o.push_str(" then ");
                write_sugared(y, UNARY, o);
            }),
        ),
        SugaredTerm::Binary(op, x, y) => {
            let level = op.level();
            // implications do not chain, so both sides need a stronger operator
            let left = if level == IMP { IMP + 1 } else { level };
            (
                level,
                Box::new(move |o: &mut String| {
                    write_sugared(x, left, o);
                    o.push(' ');
                    o.push_str(op.keyword());
                    o.push(' ');
                    write_sugared(y, level + 1, o);
                }),
            )
        }
        SugaredTerm::Cond(x, y, z) => (
            COND,
            Box::new(move |o: &mut String| {
                write_sugared(x, BIIMP, o);
                o.push_str(" <| ");
                write_sugared(y, BIIMP, o);
                o.push_str(" |> ");
                write_sugared(z, BIIMP, o);
            }),
        ),
    };
    if level < min {
        out.push('(');
        body(out);
        out.push(')');
    } else {
        body(out);
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    LeftBar,
    RightBar,
    Bad(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::LeftBar => "`<|`".into(),
            Tok::RightBar => "`|>`".into(),
            Tok::Bad(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = (line, column);
        let (tok, len) = if c == '(' {
            (Tok::Open, 1)
        } else if c == ')' {
            (Tok::Close, 1)
        } else if c == '<' && chars.get(i + 1) == Some(&'|') {
            (Tok::LeftBar, 2)
        } else if c == '|' && chars.get(i + 1) == Some(&'>') {
            (Tok::RightBar, 2)
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Word(chars[i..j].iter().collect()), j - i)
        } else {
            (Tok::Bad(c.to_string()), 1)
        };
        out.push(Token { tok, line: start.0, column: start.1 });
        i += len;
        column += len;
    }
    out.push(Token { tok: Tok::End, line, column });
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    expected: BTreeSet<String>,
}

/// Parses a statement of the concrete syntax.
pub fn parse(text: &str) -> Result<SugaredTerm> {
    let mut p = Parser { toks: lex(text), pos: 0, expected: BTreeSet::new() };
    let s = p.cond()?;
    if p.check(&Tok::End, "end of input") {
        Ok(s)
    } else {
        Err(p.error())
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) {
        self.pos += 1;
        self.expected.clear();
    }

    fn check(&mut self, tok: &Tok, label: &str) -> bool {
        self.expected.insert(label.to_string());
        self.peek() == tok
    }

    fn check_word(&mut self, words: &[&str]) -> Option<String> {
        for w in words {
            self.expected.insert(format!("`{w}`"));
        }
        match self.peek() {
            Tok::Word(w) if words.contains(&w.as_str()) => Some(w.clone()),
            _ => None,
        }
    }

    fn error(&self) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            expected: self.expected.iter().cloned().collect(),
            found: t.tok.describe(),
        }
    }

    fn cond(&mut self) -> Result<SugaredTerm> {
        let x = self.biimp()?;
        if self.check(&Tok::LeftBar, "`<|`") {
            self.bump();
            let y = self.biimp()?;
            if !self.check(&Tok::RightBar, "`|>`") {
                return Err(self.error());
            }
            self.bump();
            let z = self.biimp()?;
            return Ok(SugaredTerm::cond(x, y, z));
        }
        Ok(x)
    }

    fn biimp(&mut self) -> Result<SugaredTerm> {
        let mut x = self.imp()?;
        while let Some(w) = self.check_word(&["liff", "riff"]) {
            self.bump();
            let y = self.imp()?;
            x = SugaredTerm::binary(Connective::from_keyword(&w).unwrap(), x, y);
        }
        Ok(x)
    }

    fn imp(&mut self) -> Result<SugaredTerm> {
        let x = self.or()?;
        if let Some(w) = self.check_word(&["limp", "rimp"]) {
            self.bump();
            let y = self.or()?;
            return Ok(SugaredTerm::binary(Connective::from_keyword(&w).unwrap(), x, y));
        }
        Ok(x)
    }

    fn or(&mut self) -> Result<SugaredTerm> {
        let mut x = self.and()?;
        while let Some(w) = self.check_word(&["lor", "ror"]) {
            self.bump();
            let y = self.and()?;
            x = SugaredTerm::binary(Connective::from_keyword(&w).unwrap(), x, y);
        }
        Ok(x)
    }

    fn and(&mut self) -> Result<SugaredTerm> {
        let mut x = self.seq()?;
        while let Some(w) = self.check_word(&["land", "rand"]) {
            self.bump();
            let y = self.seq()?;
            x = SugaredTerm::binary(Connective::from_keyword(&w).unwrap(), x, y);
        }
        Ok(x)
    }

    fn seq(&mut self) -> Result<SugaredTerm> {
        let mut x = self.unary()?;
        while self.check_word(&["then"]).is_some() {
            self.bump();
            let y = self.unary()?;
            x = SugaredTerm::and_then(x, y);
        }
        Ok(x)
    }

    fn unary(&mut self) -> Result<SugaredTerm> {
        for label in ["`not`", "`T`", "`F`", "atom", "`(`"] {
            self.expected.insert(label.to_string());
        }
        let t = &self.toks[self.pos];
        match t.tok.clone() {
            Tok::Open => {
                self.bump();
                let s = self.cond()?;
                if !self.check(&Tok::Close, "`)`") {
                    return Err(self.error());
                }
                self.bump();
                Ok(s)
            }
            Tok::Word(w) => match w.as_str() {
                "not" => {
                    self.bump();
                    Ok(SugaredTerm::not(self.unary()?))
                }
                "T" => {
                    self.bump();
                    Ok(SugaredTerm::T)
                }
                "F" => {
                    self.bump();
                    Ok(SugaredTerm::F)
                }
                _ if RESERVED.contains(&w.as_str()) => {
                    Err(Error::ReservedAtom { line: t.line, column: t.column, word: w })
                }
                _ if is_atom_name(&w) => {
                    self.bump();
                    Ok(SugaredTerm::Atom(Atom::new(&w)?))
                }
                _ => Err(self.error()),
            },
            _ => Err(self.error()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::atom;

    fn at(n: &str) -> SugaredTerm {
        SugaredTerm::atom(&atom(n))
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("T <| a |> F").unwrap(), SugaredTerm::cond(SugaredTerm::T, at("a"), SugaredTerm::F));
        assert_eq!(parse("a land b").unwrap(), SugaredTerm::binary(Connective::LeftAnd, at("a"), at("b")));
        assert_eq!(
            parse("not a lor b land c").unwrap(),
            SugaredTerm::binary(
                Connective::LeftOr,
                SugaredTerm::not(at("a")),
                SugaredTerm::binary(Connective::LeftAnd, at("b"), at("c"))
            )
        );
    }

    #[test]
    fn associativity() {
        let s = parse("a land b rand c").unwrap();
        assert_eq!(
            s,
            SugaredTerm::binary(
                Connective::RightAnd,
                SugaredTerm::binary(Connective::LeftAnd, at("a"), at("b")),
                at("c")
            )
        );
        assert_eq!(
            parse("a then b then c").unwrap(),
            SugaredTerm::and_then(SugaredTerm::and_then(at("a"), at("b")), at("c"))
        );
        assert!(parse("a limp b limp c").is_err());
        assert!(parse("a <| b |> c <| d |> e").is_err());
        assert!(parse("(a <| b |> c) <| d |> e").is_ok());
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        match parse("a land\n  (b lor").unwrap_err() {
            Error::Syntax { line, column, expected, found } => {
                assert_eq!((line, column), (2, 9));
                assert_eq!(found, "end of input");
                assert!(expected.contains(&"atom".to_string()));
                assert!(!expected.contains(&"`)`".to_string()));
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse("(b lor c").unwrap_err() {
            Error::Syntax { expected, .. } => {
                assert!(expected.contains(&"`)`".to_string()));
                assert!(expected.contains(&"`land`".to_string()));
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse("a land then").unwrap_err(),
            Error::ReservedAtom { word, column: 8, .. } if word == "then"
        ));
        assert!(matches!(parse("a <| b c").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse("Ab").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse("a & b").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse("").unwrap_err(), Error::Syntax { .. }));
    }

    #[test]
    fn desugar_examples() {
        let a = Term::atom(&atom("a"));
        let b = Term::atom(&atom("b"));
        assert_eq!(desugar(&parse("a land b").unwrap()), Term::cond(b.clone(), a.clone(), Term::F));
        assert_eq!(desugar(&parse("not a").unwrap()), Term::cond(Term::F, a.clone(), Term::T));
        assert_eq!(desugar(&parse("a then T").unwrap()), Term::cond(Term::T, a.clone(), Term::T));
        assert_eq!(desugar(&parse("a rimp b").unwrap()), Term::cond(Term::T, b.clone(), negate(a.clone())));
        assert_eq!(desugar(&parse("a riff b").unwrap()), Term::cond(a.clone(), b.clone(), negate(a)));
    }

    #[test]
    fn print_examples() {
        let t = Term::cond(Term::T, Term::atom(&atom("a")), Term::F);
        assert_eq!(print(&t), "T <| a |> F");
        assert_eq!(print(&Term::F), "F");
        let s = SugaredTerm::binary(
            Connective::LeftAnd,
            at("a"),
            SugaredTerm::binary(Connective::LeftOr, at("b"), at("c")),
        );
        assert_eq!(print_sugared(&s), "a land (b lor c)");
        let nested = Term::cond(t.clone(), t.clone(), Term::F);
        assert_eq!(print(&nested), "(T <| a |> F) <| (T <| a |> F) |> F");
        assert_eq!(print_sugared(&parse("not (a land b)").unwrap()), "not (a land b)");
        assert_eq!(print_sugared(&parse("(a limp b) limp c").unwrap()), "(a limp b) limp c");
        assert_eq!(print_sugared(&parse("a lor (b lor c)").unwrap()), "a lor (b lor c)");
    }
}
