//! Recursive-descent parser for the measurement-sequence grammar:
//!
//! ```text
//! expr   := term { ("|" | "v") term }
//! term   := factor { "." factor }
//! factor := atom | "(" expr ")"
//! atom   := "[" item { "," item } "]"
//! item   := IDENT | "(" IDENT { "," IDENT } ")"
//! ```
//!
//! A parenthesised item is a coarse-grained outcome; the atom expands into
//! the parallel combination of every fine-grained atom it contains.

use super::{SeqError, SeqExpr};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Dot,
    Bar,
    Ident(String),
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SeqError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '|' => Tok::Bar,
            c if is_ident_char(c) => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    ident.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Ident(ident)));
                continue;
            }
            other => {
                return Err(SeqError::Syntax { position: pos, message: format!("unexpected character `{other}`") })
            }
        };
        chars.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, SeqError> {
        Err(SeqError::Syntax { position: self.pos(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SeqError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn parallel_op(&self) -> bool {
        matches!(self.peek(), Some(Tok::Bar)) || matches!(self.peek(), Some(Tok::Ident(s)) if s == "v")
    }

    fn expr(&mut self) -> Result<SeqExpr, SeqError> {
        let mut left = self.term()?;
        while self.parallel_op() {
            self.at += 1;
            let right = self.term()?;
            left = SeqExpr::parallel(left, right);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<SeqExpr, SeqError> {
        let mut left = self.factor()?;
        while self.peek() == Some(&Tok::Dot) {
            self.at += 1;
            let right = self.factor()?;
            left = SeqExpr::series(left, right);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<SeqExpr, SeqError> {
        match self.peek() {
            Some(Tok::LBracket) => self.atom(),
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.fail("expected `[` or `(`"),
        }
    }

    fn ident(&mut self) -> Result<String, SeqError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail("expected an outcome name"),
        }
    }

    fn atom(&mut self) -> Result<SeqExpr, SeqError> {
        let start = self.pos();
        self.expect(Tok::LBracket, "`[`")?;
        if self.peek() == Some(&Tok::RBracket) {
            return Err(SeqError::EmptyAtom { position: start });
        }
        let mut items: Vec<Vec<String>> = Vec::new();
        loop {
            items.push(self.item()?);
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RBracket) => {
                    self.at += 1;
                    break;
                }
                _ => return self.fail("expected `,` or `]`"),
            }
        }
        Ok(expand(&items))
    }

    fn item(&mut self) -> Result<Vec<String>, SeqError> {
        if self.peek() != Some(&Tok::LParen) {
            return Ok(vec![self.ident()?]);
        }
        self.at += 1;
        let mut group = vec![self.ident()?];
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            group.push(self.ident()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(group)
    }
}

/// Every fine-grained atom of a coarse-grained one, in lexicographic order of
/// the choices, combined left-associatively in parallel.
fn expand(items: &[Vec<String>]) -> SeqExpr {
    let mut atoms: Vec<Vec<String>> = vec![Vec::new()];
    for choices in items {
        atoms = atoms
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    let mut it = atoms.into_iter().map(SeqExpr::Atom);
    let first = it.next().expect("items are nonempty");
    it.fold(first, SeqExpr::parallel)
}

pub fn parse(text: &str) -> Result<SeqExpr, SeqError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let expr = p.expr()?;
    if p.at != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(expr)
}
