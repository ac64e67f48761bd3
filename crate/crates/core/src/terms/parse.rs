use std::collections::HashSet;

use crate::error::ParseError;
use crate::signature::{FeatureId, Signature, SortId};

use super::{Clause, Constraint, Subterm, Tag, TagGen, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Upper(String),
    Lower(String),
    Colon,
    LParen,
    RParen,
    Comma,
    Arrow,
    Amp,
    Dot,
    Eq,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Upper(s) | Tok::Lower(s) => format!("`{s}`"),
        Tok::Colon => "`:`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eq => "`=`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        let single = match c {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            ':' => Some(Tok::Colon),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '&' | '∧' => Some(Tok::Amp),
            '.' => Some(Tok::Dot),
            '=' | '≐' => Some(Tok::Eq),
            '→' => Some(Tok::Arrow),
            '⊤' => Some(Tok::Lower("top".into())),
            '⊥' => Some(Tok::Lower("bot".into())),
            _ => None,
        };
        if let Some(tok) = single {
            it.next();
            out.push((pos, tok));
            continue;
        }
        if c == '-' {
            it.next();
            if matches!(it.peek(), Some(&(_, '>'))) {
                it.next();
                out.push((pos, Tok::Arrow));
                continue;
            }
            return Err(syntax(pos, "expected `->`"));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            let tok = if c.is_ascii_lowercase() {
                Tok::Lower(word)
            } else if super::is_tag_name(&word) {
                Tok::Upper(word)
            } else {
                return Err(syntax(pos, &format!("invalid tag `{word}`")));
            };
            out.push((pos, tok));
            continue;
        }
        return Err(syntax(pos, &format!("unexpected character `{c}`")));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn syntax(pos: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.to_string(),
    }
}

/// A parsed node before layout: tag if written, sort, and arguments.
type RawNode = (Option<Tag>, SortId, Vec<(FeatureId, usize)>);

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&describe(&want)))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        syntax(
            self.pos(),
            &format!("expected {wanted}, found {}", describe(self.peek())),
        )
    }

    fn lower(&mut self, wanted: &str) -> Result<(usize, String), ParseError> {
        match self.peek().clone() {
            Tok::Lower(name) => {
                let pos = self.pos();
                self.bump();
                Ok((pos, name))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn sort(&mut self) -> Result<SortId, ParseError> {
        let (pos, name) = self.lower("a sort")?;
        self.sig.sort(&name).ok_or(ParseError::UnknownSort { name, pos })
    }

    fn feature(&mut self) -> Result<FeatureId, ParseError> {
        let (pos, name) = self.lower("a feature")?;
        self.sig.feature(&name).ok_or(ParseError::UnknownFeature { name, pos })
    }

    fn tag(&mut self) -> Result<Tag, ParseError> {
        match self.peek().clone() {
            Tok::Upper(name) => {
                self.bump();
                Ok(Tag::new(name))
            }
            _ => Err(self.unexpected("a tag")),
        }
    }

    /// `tag ':' sort | sort | tag`; the flag says whether arguments may follow.
    fn head(&mut self) -> Result<(Option<Tag>, SortId, bool), ParseError> {
        match self.peek().clone() {
            Tok::Upper(name) => {
                self.bump();
                if *self.peek() == Tok::Colon {
                    self.bump();
                    Ok((Some(Tag::new(name)), self.sort()?, true))
                } else {
                    Ok((Some(Tag::new(name)), SortId::TOP, false))
                }
            }
            Tok::Lower(_) => Ok((None, self.sort()?, true)),
            _ => Err(self.unexpected("a term")),
        }
    }

    fn feature_arrow(&mut self) -> Result<FeatureId, ParseError> {
        let f = self.feature()?;
        self.expect(Tok::Arrow)?;
        Ok(f)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut raw: Vec<RawNode> = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        let mut pending: Option<FeatureId> = None;
        'outer: loop {
            let (tag, sort, may_have_args) = self.head()?;
            let idx = raw.len();
            raw.push((tag, sort, Vec::new()));
            if let Some(&parent) = open.last() {
                let f = pending.take().expect("feature before child");
                raw[parent].2.push((f, idx));
            }
            if may_have_args && *self.peek() == Tok::LParen {
                self.bump();
                open.push(idx);
                pending = Some(self.feature_arrow()?);
                continue;
            }
            while !open.is_empty() {
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                        pending = Some(self.feature_arrow()?);
                        continue 'outer;
                    }
                    Tok::RParen => {
                        self.bump();
                        open.pop();
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
            break;
        }
        let used: HashSet<Tag> = raw.iter().filter_map(|r| r.0.clone()).collect();
        let mut fresh = TagGen::avoiding(used);
        let nodes = raw
            .into_iter()
            .map(|(tag, sort, args)| Subterm {
                tag: tag.unwrap_or_else(|| fresh.fresh()),
                sort,
                args,
            })
            .collect();
        Ok(Term { nodes })
    }

    fn constraint(&mut self) -> Result<Constraint, ParseError> {
        let x = self.tag()?;
        match self.peek() {
            Tok::Colon => {
                self.bump();
                Ok(Constraint::Sort(x, self.sort()?))
            }
            Tok::Eq => {
                self.bump();
                Ok(Constraint::Eq(x, self.tag()?))
            }
            Tok::Dot => {
                self.bump();
                let f = self.feature()?;
                self.expect(Tok::Eq)?;
                Ok(Constraint::Feature(x, f, self.tag()?))
            }
            _ => Err(self.unexpected("`:`, `.` or `=`")),
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let mut constraints = Vec::new();
        if *self.peek() != Tok::End {
            constraints.push(self.constraint()?);
            while *self.peek() == Tok::Amp {
                self.bump();
                constraints.push(self.constraint()?);
            }
        }
        Ok(Clause::new(constraints))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parse `tag : sort(feature -> term, ...)`. Omitted tags become fresh
/// `_Z<n>` tags; a bare tag stands for `tag : top`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse `X : s & X.f = Y & X = Z` (`≐` and `∧` are accepted too). The
/// result has no root.
pub fn parse_clause(text: &str, sig: &Signature) -> Result<Clause, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let c = p.clause()?;
    p.finish()?;
    Ok(c)
}
