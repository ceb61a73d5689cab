//! Concrete syntax: single-letter symbols, juxtaposition, `|`, postfix `*`,
//! parentheses, and the keywords `eps` and `empty`.
//!
//! A maximal run of letters spelling a keyword is that keyword; any other run
//! is a sequence of one-letter symbols, so `rw` is `r` followed by `w`.

use super::Regex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct RegexParseError {
    pub offset: usize,
    pub message: String,
}

const KEYWORDS: [&str; 2] = ["eps", "empty"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Sym(char),
    Eps,
    Empty,
    Bar,
    Star,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, RegexParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphabetic() {
                i += 1;
            }
            let run: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            match run.as_str() {
                "eps" => out.push((off, Tok::Eps)),
                "empty" => out.push((off, Tok::Empty)),
                _ => out.extend(chars[start..i].iter().map(|&(o, c)| (o, Tok::Sym(c)))),
            }
            continue;
        }
        let tok = match c {
            '|' => Tok::Bar,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(RegexParseError {
                    offset: off,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((off, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn error(&self, message: &str) -> RegexParseError {
        RegexParseError {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn alt(&mut self) -> Result<Regex, RegexParseError> {
        let mut items = vec![self.cat()?];
        while self.peek() == Some(Tok::Bar) {
            self.pos += 1;
            items.push(self.cat()?);
        }
        Ok(Regex::alt_all(items))
    }

    fn cat(&mut self) -> Result<Regex, RegexParseError> {
        let mut items = Vec::new();
        while matches!(
            self.peek(),
            Some(Tok::Sym(_) | Tok::Eps | Tok::Empty | Tok::LParen)
        ) {
            items.push(self.postfix()?);
        }
        if items.is_empty() {
            return Err(self.error("expected a symbol, `eps`, `empty` or `(`"));
        }
        Ok(Regex::concat_all(items))
    }

    fn postfix(&mut self) -> Result<Regex, RegexParseError> {
        let mut r = self.atom()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            r = Regex::star(&r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, RegexParseError> {
        let tok = self.peek();
        self.pos += 1;
        match tok {
            Some(Tok::Sym(c)) => Ok(Regex::sym(c)),
            Some(Tok::Eps) => Ok(Regex::eps()),
            Some(Tok::Empty) => Ok(Regex::empty()),
            Some(Tok::LParen) => {
                let r = self.alt()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(r)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a symbol, `eps`, `empty` or `(`"))
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Regex, RegexParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    let r = p.alt()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(r)
}
