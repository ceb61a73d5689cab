//! Recursive-descent parser.
//!
//! ```text
//! program := expr? EOF
//! expr    := seq (':' type)?
//! seq     := term (';' seq)?
//! term    := let-form | '\' binder '.' expr | app
//! app     := prefix prefix*
//! prefix  := '!' {m} prefix | 'split' {m} prefix | 'drop' prefix | 'new' {m} | atom
//! atom    := ident | 'unit' | '(' expr ')' | '(' expr ',' expr ')'
//! type    := prod ('-[' mode eff ']->' type)?
//! prod    := tatom (('ox' | '.o') tatom)*
//! tatom   := 'Unit' | {m} | '(' type ')'
//! ```

use super::ast::{Binder, Expr, ExprKind, IndexText, Param, SType, Span};
use super::lexer::{lex, Tok};
use super::ParseError;
use crate::term::{Effect, Mode, Name, PairKind};

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    eof: Span,
}

fn boxed(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.eof, |(_, s)| *s)
    }

    fn prev_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .and_then(|p| self.toks.get(p))
            .map_or(0, |(_, s)| s.end)
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().map_or("end of input".to_string(), Tok::describe);
        ParseError::new(
            self.span(),
            &format!("unexpected {found}"),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[&format!("`{}`", tok.text())]))
        }
    }

    fn close_paren(&mut self, open: Span) -> Result<Span, ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            return Ok(self.bump().1);
        }
        if self.peek().is_none() {
            return Err(ParseError::new(
                open,
                "unbalanced parenthesis",
                vec!["`)`".into()],
            ));
        }
        Err(self.unexpected(&["`)`"]))
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let (Tok::Ident(s), span) = self.bump() else { unreachable!() };
                Ok((s, span))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn binder(&mut self) -> Result<Binder, ParseError> {
        let (s, span) = self.ident()?;
        Ok(Binder {
            name: Name::new(&s),
            span,
        })
    }

    fn braced(&mut self) -> Result<IndexText, ParseError> {
        match self.peek() {
            Some(Tok::Braced(_)) => {
                let (Tok::Braced(text), span) = self.bump() else { unreachable!() };
                Ok(IndexText { text, span })
            }
            _ => Err(self.unexpected(&["`{...}`"])),
        }
    }

    fn program(&mut self) -> Result<Expr, ParseError> {
        if self.peek().is_none() {
            return Ok(Expr::new(ExprKind::Unit, Span::new(0, 0)));
        }
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.unexpected(&["end of input"]));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.seq()?;
        if self.peek() == Some(&Tok::Colon) {
            self.bump();
            let ty = self.ty()?;
            let span = Span::new(e.span.start, self.prev_end());
            return Ok(Expr::new(ExprKind::Ann(boxed(e), ty), span));
        }
        Ok(e)
    }

    fn seq(&mut self) -> Result<Expr, ParseError> {
        let first = self.term()?;
        if self.peek() == Some(&Tok::Semi) {
            self.bump();
            let rest = self.seq()?;
            let span = first.span.to(rest.span);
            return Ok(Expr::new(ExprKind::Seq(boxed(first), boxed(rest)), span));
        }
        Ok(first)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Let) => self.let_form(),
            Some(Tok::Backslash) => {
                let start = self.bump().1;
                let x = self.binder()?;
                self.expect(Tok::Dot)?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr::new(ExprKind::Lam(x, boxed(body)), span))
            }
            _ => self.app(),
        }
    }

    fn let_form(&mut self) -> Result<Expr, ParseError> {
        let start = self.expect(Tok::Let)?;
        let x = self.binder()?;
        match self.peek() {
            Some(Tok::Comma) => {
                self.bump();
                let y = self.binder()?;
                if x.name == y.name && !x.is_wildcard() {
                    return Err(ParseError::new(y.span, "duplicate binder in pattern", vec![]));
                }
                self.expect(Tok::Eq)?;
                let bound = self.expr()?;
                self.expect(Tok::In)?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr::new(ExprKind::LetPair(x, y, boxed(bound), boxed(body)), span))
            }
            Some(Tok::Colon) => {
                self.bump();
                let ty = self.ty()?;
                let (again, again_span) = self.ident()?;
                if again != x.name.as_str() {
                    return Err(ParseError::new(
                        again_span,
                        &format!("definition of `{again}` follows the signature of `{}`", x.name),
                        vec![format!("`{}`", x.name)],
                    ));
                }
                let mut params = Vec::new();
                while self.peek() != Some(&Tok::Eq) {
                    params.push(self.param()?);
                }
                self.bump();
                let def = self.expr()?;
                self.expect(Tok::In)?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr::new(
                    ExprKind::Def {
                        name: x,
                        ty,
                        params,
                        def: boxed(def),
                        body: boxed(body),
                    },
                    span,
                ))
            }
            _ => {
                self.expect(Tok::Eq)?;
                let bound = self.expr()?;
                self.expect(Tok::In)?;
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(Expr::new(ExprKind::Let(x, boxed(bound), boxed(body)), span))
            }
        }
    }

    fn param(&mut self) -> Result<Param, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Param::Var(self.binder()?)),
            Some(Tok::LParen) => {
                let open = self.bump().1;
                let a = self.binder()?;
                self.expect(Tok::Comma)?;
                let b = self.binder()?;
                if a.name == b.name && !a.is_wildcard() {
                    return Err(ParseError::new(b.span, "duplicate binder in pattern", vec![]));
                }
                self.close_paren(open)?;
                Ok(Param::Pair(a, b))
            }
            _ => Err(self.unexpected(&["parameter", "`=`"])),
        }
    }

    fn starts_prefix(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Bang
                    | Tok::Split
                    | Tok::Drop
                    | Tok::New
                    | Tok::Ident(_)
                    | Tok::UnitVal
                    | Tok::LParen
            )
        )
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut f = self.prefix()?;
        while self.starts_prefix() {
            let a = self.prefix()?;
            let span = f.span.to(a.span);
            f = Expr::new(ExprKind::App(boxed(f), boxed(a)), span);
        }
        Ok(f)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let start = self.span();
        let kind = match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                let m = self.braced()?;
                ExprKind::Op(m, boxed(self.prefix()?))
            }
            Some(Tok::Split) => {
                self.bump();
                let m = self.braced()?;
                ExprKind::Split(m, boxed(self.prefix()?))
            }
            Some(Tok::Drop) => {
                self.bump();
                ExprKind::Drop(boxed(self.prefix()?))
            }
            Some(Tok::New) => {
                self.bump();
                ExprKind::New(self.braced()?)
            }
            _ => return self.atom(),
        };
        Ok(Expr::new(kind, Span::new(start.start, self.prev_end())))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) if s == "_" => Err(ParseError::new(
                span,
                "`_` is a binder and cannot be used as an expression",
                vec!["expression".into()],
            )),
            Some(Tok::Ident(_)) => {
                let (s, span) = self.ident()?;
                Ok(Expr::new(ExprKind::Var(Name::new(&s)), span))
            }
            Some(Tok::UnitVal) => {
                self.bump();
                Ok(Expr::new(ExprKind::Unit, span))
            }
            Some(Tok::LParen) => {
                let open = self.bump().1;
                let a = self.expr()?;
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    let b = self.expr()?;
                    let close = self.close_paren(open)?;
                    return Ok(Expr::new(ExprKind::Pair(boxed(a), boxed(b)), open.to(close)));
                }
                let close = self.close_paren(open)?;
                // parentheses only widen the span
                Ok(Expr::new(a.kind, open.to(close)))
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn ty(&mut self) -> Result<SType, ParseError> {
        let dom = self.prod_ty()?;
        if self.peek() == Some(&Tok::ArrowOpen) {
            self.bump();
            let (m, mspan) = self.ident()?;
            let mode = match m.as_str() {
                "u" => Mode::Plain,
                "o" => Mode::Unordered,
                "r" => Mode::Right,
                "l" => Mode::Left,
                _ => {
                    return Err(ParseError::new(
                        mspan,
                        &format!("unknown arrow mode `{m}`"),
                        vec!["`u`".into(), "`o`".into(), "`r`".into(), "`l`".into()],
                    ))
                }
            };
            let eff = match self.peek() {
                Some(Tok::Num(0)) => Effect::Pure,
                Some(Tok::Num(1)) => Effect::Impure,
                _ => return Err(self.unexpected(&["`0`", "`1`"])),
            };
            self.bump();
            self.expect(Tok::ArrowClose)?;
            let cod = self.ty()?;
            return Ok(SType::Arrow(mode, eff, Box::new(dom), Box::new(cod)));
        }
        Ok(dom)
    }

    fn prod_ty(&mut self) -> Result<SType, ParseError> {
        let mut t = self.atom_ty()?;
        loop {
            let kind = match self.peek() {
                Some(Tok::Ox) => PairKind::Unordered,
                Some(Tok::DotO) => PairKind::Ordered,
                _ => return Ok(t),
            };
            self.bump();
            let rhs = self.atom_ty()?;
            t = SType::Prod(kind, Box::new(t), Box::new(rhs));
        }
    }

    fn atom_ty(&mut self) -> Result<SType, ParseError> {
        match self.peek() {
            Some(Tok::UnitTy) => {
                self.bump();
                Ok(SType::Unit)
            }
            Some(Tok::Braced(_)) => Ok(SType::Res(self.braced()?)),
            Some(Tok::LParen) => {
                let open = self.bump().1;
                let t = self.ty()?;
                self.close_paren(open)?;
                Ok(t)
            }
            _ => Err(self.unexpected(&["`Unit`", "`{...}`", "`(`"])),
        }
    }
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(src)?,
        pos: 0,
        eof: Span::new(src.len(), src.len()),
    })
}

/// Parses a whole program. An empty program is `unit`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parser(src)?.program()
}

/// Parses a standalone type.
pub fn parse_type(src: &str) -> Result<SType, ParseError> {
    let mut p = parser(src)?;
    let t = p.ty()?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(t)
}
