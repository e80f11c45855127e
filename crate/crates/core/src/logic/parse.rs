//! Concrete syntax:
//!
//! ```text
//! formula := unary ('&' unary)*
//! unary   := '~' unary | 'exists' VAR formula | '(' formula ')' | atom
//! atom    := 'hyp(' VAR ')' | VAR '<=' VAR | '|' VAR '|' '=' NUM 'mod' NUM
//! ```
//!
//! `exists` takes everything to its right. `#` starts a comment.

use std::collections::BTreeSet;

use super::{Formula, Var};
use crate::{Error, Limits, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Not,
    And,
    LParen,
    RParen,
    Bar,
    Eq,
    Le,
    Exists,
    Hyp,
    Mod,
    Var(u32),
    Num(u32),
    End,
}

type Pos = (usize, usize);

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line: pos.0, col: pos.1, msg: msg.into() })
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap();
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = (ln + 1, i + 1);
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '~' => Some(Tok::Not),
                '&' => Some(Tok::And),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '|' => Some(Tok::Bar),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(t) = single {
                out.push((t, pos));
                i += 1;
            } else if c == '<' && chars.get(i + 1) == Some(&'=') {
                out.push((Tok::Le, pos));
                i += 2;
            } else if c.is_ascii_alphanumeric() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "exists" => Tok::Exists,
                    "hyp" => Tok::Hyp,
                    "mod" => Tok::Mod,
                    w if w.starts_with('Z') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                        match w[1..].parse::<u32>() {
                            Ok(k) if (1..=64).contains(&k) => Tok::Var(k),
                            _ => return err(pos, format!("variable `{w}` outside Z1..Z64")),
                        }
                    }
                    w if w.bytes().all(|b| b.is_ascii_digit()) => match w.parse() {
                        Ok(n) => Tok::Num(n),
                        Err(_) => return err(pos, format!("number `{w}` too large")),
                    },
                    w => return err(pos, format!("unexpected word `{w}`")),
                };
                out.push((tok, pos));
            } else {
                return err(pos, format!("unexpected character `{c}`"));
            }
        }
    }
    let end = (text.lines().count().max(1), text.lines().last().map_or(0, |l| l.chars().count()) + 1);
    out.push((Tok::End, end));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Raw {
    Subset(u32, u32),
    Hyp(u32),
    Count(u32, u32, u32),
    Not(Box<(Raw, Pos)>),
    And(Box<(Raw, Pos)>, Box<(Raw, Pos)>),
    Exists(u32, Box<(Raw, Pos)>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos> {
        let (t, pos) = self.next();
        if t == want {
            Ok(pos)
        } else {
            err(pos, format!("expected {what}, found {}", describe(&t)))
        }
    }

    fn var(&mut self) -> Result<u32> {
        match self.next() {
            (Tok::Var(k), _) => Ok(k),
            (t, pos) => err(pos, format!("expected a variable, found {}", describe(&t))),
        }
    }

    fn num(&mut self) -> Result<(u32, Pos)> {
        match self.next() {
            (Tok::Num(n), pos) => Ok((n, pos)),
            (t, pos) => err(pos, format!("expected a number, found {}", describe(&t))),
        }
    }

    fn formula(&mut self) -> Result<(Raw, Pos)> {
        let mut left = self.unary()?;
        while self.peek().0 == Tok::And {
            let (_, pos) = self.next();
            let right = self.unary()?;
            left = (Raw::And(Box::new(left), Box::new(right)), pos);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<(Raw, Pos)> {
        let (t, pos) = self.next();
        let raw = match t {
            Tok::Not => Raw::Not(Box::new(self.unary()?)),
            Tok::Exists => {
                let v = self.var()?;
                Raw::Exists(v, Box::new(self.formula()?))
            }
            Tok::LParen => {
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(inner);
            }
            Tok::Hyp => {
                self.expect(Tok::LParen, "`(` after hyp")?;
                let v = self.var()?;
                self.expect(Tok::RParen, "`)`")?;
                Raw::Hyp(v)
            }
            Tok::Var(i) => {
                self.expect(Tok::Le, "`<=`")?;
                Raw::Subset(i, self.var()?)
            }
            Tok::Bar => {
                let v = self.var()?;
                self.expect(Tok::Bar, "`|`")?;
                self.expect(Tok::Eq, "`=`")?;
                let (p, _) = self.num()?;
                self.expect(Tok::Mod, "`mod`")?;
                let (q, qpos) = self.num()?;
                if q <= 1 || p >= q {
                    return err(qpos, format!("count atom needs q > 1 and 0 <= p < q, got p={p}, q={q}"));
                }
                Raw::Count(v, p, q)
            }
            t => return err(pos, format!("expected a formula, found {}", describe(&t))),
        };
        Ok((raw, pos))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Le => "`<=`".into(),
        Tok::Exists => "`exists`".into(),
        Tok::Hyp => "`hyp`".into(),
        Tok::Mod => "`mod`".into(),
        Tok::Var(k) => format!("`Z{k}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::End => "end of input".into(),
    }
}

fn parse_raw(text: &str) -> Result<(Raw, Pos)> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let raw = p.formula()?;
    match p.next() {
        (Tok::End, _) => Ok(raw),
        (t, pos) => err(pos, format!("unexpected {} after the formula", describe(&t))),
    }
}

fn v(k: u32) -> Var {
    Var::new(k).expect("lexer bounds variables")
}

fn build((raw, pos): &(Raw, Pos)) -> Result<Formula> {
    let at = |e: Error| match e {
        Error::Invalid(msg) => Error::Parse { line: pos.0, col: pos.1, msg },
        e => e,
    };
    match raw {
        Raw::Subset(i, j) => Ok(Formula::subset(v(*i), v(*j))),
        Raw::Hyp(i) => Ok(Formula::hyp(v(*i))),
        Raw::Count(i, p, q) => Formula::count(v(*i), *p, *q).map_err(at),
        Raw::Not(c) => Ok(Formula::not(build(c)?)),
        Raw::And(a, b) => Formula::and(build(a)?, build(b)?).map_err(at),
        Raw::Exists(s, c) => Formula::exists(v(*s), build(c)?).map_err(at),
    }
}

/// Parses and checks the construction rules; no variable is renamed.
pub fn parse_formula(text: &str) -> Result<Formula> {
    parse_formula_with(text, &Limits::default())
}

pub fn parse_formula_with(text: &str, limits: &Limits) -> Result<Formula> {
    let raw = parse_raw(text)?;
    let f = build(&raw)?;
    if f.size() > limits.max_formula_nodes {
        return Err(Error::Budget { what: "formula nodes", cap: limits.max_formula_nodes as u64 });
    }
    Ok(f)
}

/// For text rejected only because a variable is reused across a conjunction,
/// returns the formula with every quantifier given its own variable.
/// `Ok(None)` means the text is already well formed.
pub fn suggest_renaming(text: &str) -> Result<Option<Formula>> {
    let raw = parse_raw(text)?;
    let original = match build(&raw) {
        Ok(_) => return Ok(None),
        Err(e) => e,
    };
    let mut used = BTreeSet::new();
    collect_free(&raw, &mut Vec::new(), &mut used);
    let renamed = rename(&raw, &mut Vec::new(), &mut used)?;
    match build(&renamed) {
        Ok(f) => Ok(Some(f)),
        Err(_) => Err(original),
    }
}

fn collect_free((raw, _): &(Raw, Pos), scope: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
    let mut mark = |k: u32, scope: &Vec<u32>| {
        if !scope.contains(&k) {
            out.insert(k);
        }
    };
    match raw {
        Raw::Subset(i, j) => {
            mark(*i, scope);
            mark(*j, scope);
        }
        Raw::Hyp(i) | Raw::Count(i, _, _) => mark(*i, scope),
        Raw::Not(c) => collect_free(c, scope, out),
        Raw::And(a, b) => {
            collect_free(a, scope, out);
            collect_free(b, scope, out);
        }
        Raw::Exists(s, c) => {
            scope.push(*s);
            collect_free(c, scope, out);
            scope.pop();
        }
    }
}

fn rename((raw, pos): &(Raw, Pos), scope: &mut Vec<(u32, u32)>, used: &mut BTreeSet<u32>) -> Result<(Raw, Pos)> {
    let map =
        |k: u32, scope: &Vec<(u32, u32)>| scope.iter().rev().find(|&&(from, _)| from == k).map_or(k, |&(_, to)| to);
    let out = match raw {
        Raw::Subset(i, j) => Raw::Subset(map(*i, scope), map(*j, scope)),
        Raw::Hyp(i) => Raw::Hyp(map(*i, scope)),
        Raw::Count(i, p, q) => Raw::Count(map(*i, scope), *p, *q),
        Raw::Not(c) => Raw::Not(Box::new(rename(c, scope, used)?)),
        Raw::And(a, b) => Raw::And(Box::new(rename(a, scope, used)?), Box::new(rename(b, scope, used)?)),
        Raw::Exists(s, c) => {
            let fresh = if used.contains(s) {
                match (1..=64).find(|k| !used.contains(k)) {
                    Some(k) => k,
                    None => return err(*pos, "no unused variable left for renaming"),
                }
            } else {
                *s
            };
            used.insert(fresh);
            scope.push((*s, fresh));
            let body = rename(c, scope, used)?;
            scope.pop();
            Raw::Exists(fresh, Box::new(body))
        }
    };
    Ok((out, *pos))
}
