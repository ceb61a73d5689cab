use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    /// Contents of `{...}`.
    Braced(String),
    Let,
    In,
    New,
    Split,
    Drop,
    UnitVal,
    UnitTy,
    Ox,
    DotO,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Eq,
    Backslash,
    Dot,
    Bang,
    ArrowOpen,
    ArrowClose,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Braced(s) => format!("`{{{s}}}`"),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::Let => "let",
            Tok::In => "in",
            Tok::New => "new",
            Tok::Split => "split",
            Tok::Drop => "drop",
            Tok::UnitVal => "unit",
            Tok::UnitTy => "Unit",
            Tok::Ox => "ox",
            Tok::DotO => ".o",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Backslash => "\\",
            Tok::Dot => ".",
            Tok::Bang => "!",
            Tok::ArrowOpen => "-[",
            Tok::ArrowClose => "]->",
            Tok::Ident(_) | Tok::Num(_) | Tok::Braced(_) => "",
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| src[i..].chars().next();
    while let Some(c) = at(i) {
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("--") {
            i = src[i..].find('\n').map_or(src.len(), |n| i + n);
            continue;
        }
        let simple = |tok: Tok, len: usize| (tok, len);
        let (tok, len) = if is_ident_start(c) {
            let len = src[i..].find(|c: char| !is_ident_char(c)).unwrap_or(src.len() - i);
            let word = &src[i..i + len];
            let tok = match word {
                "let" => Tok::Let,
                "in" => Tok::In,
                "new" => Tok::New,
                "split" => Tok::Split,
                "drop" => Tok::Drop,
                "unit" => Tok::UnitVal,
                "Unit" => Tok::UnitTy,
                "ox" => Tok::Ox,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else if c.is_ascii_digit() {
            let len = src[i..].find(|c: char| !c.is_ascii_digit()).unwrap_or(src.len() - i);
            let n = src[i..i + len].parse().map_err(|_| ParseError::new(
                Span::new(i, i + len),
                "number too large",
                vec![],
            ))?;
            (Tok::Num(n), len)
        } else if c == '{' {
            let Some(close) = src[i + 1..].find(['}', '{']) else {
                return Err(ParseError::new(Span::new(i, src.len()), "unterminated `{`", vec!["`}`".into()]));
            };
            if bytes[i + 1 + close] == b'{' {
                return Err(ParseError::new(
                    Span::new(i + 1 + close, i + 2 + close),
                    "nested `{` inside an index",
                    vec!["`}`".into()],
                ));
            }
            (Tok::Braced(src[i + 1..i + 1 + close].to_string()), close + 2)
        } else if src[i..].starts_with(".o") && !src[i + 2..].starts_with(is_ident_char) {
            simple(Tok::DotO, 2)
        } else if src[i..].starts_with("-[") {
            simple(Tok::ArrowOpen, 2)
        } else if src[i..].starts_with("]->") {
            simple(Tok::ArrowClose, 3)
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                '\\' => Tok::Backslash,
                '.' => Tok::Dot,
                '!' => Tok::Bang,
                _ => {
                    return Err(ParseError::new(
                        Span::new(i, i + c.len_utf8()),
                        &format!("unexpected character {c:?}"),
                        vec![],
                    ))
                }
            };
            (tok, 1)
        };
        i += len;
        out.push((tok, Span::new(start, i)));
    }
    Ok(out)
}
