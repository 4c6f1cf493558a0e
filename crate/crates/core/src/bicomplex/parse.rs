//! Form DSL: the expression grammar with wedge and covectors.
//!
//! ```text
//! form   := term (("+" | "-") term)*
//! term   := unary (("*" | "&" | "∧" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" exponent)?
//! atom   := number | name | fn "(" form ")" | "th" "(" contact ")" | "(" form ")"
//! ```
//!
//! A name is a coordinate or jet variable, `d<coord>` for `dx^μ`, or
//! `d<jet variable>` such as `du_x`, which expands to
//! `θ^u_x + u_{x+μ} dx^μ`. `d(f)` is the total differential of a function.
//! Contact forms are written `th(u)`, `th(u,x)`, `th(u,xt)`, `th(u,x,t)` or
//! `th(u_x)`. `/`, `^` and function arguments take scalars only.

use super::{FormError, LocalForm};
use crate::expr::parse::{Parser, Tok};
use crate::expr::{Expr, Func};
use crate::jet::{JetContext, JetVar, MultiIndex};

pub(super) fn parse_form(ctx: &JetContext, text: &str) -> Result<LocalForm, FormError> {
    let mut p = FormParser { ctx, p: Parser::new(text)? };
    let f = p.form()?;
    p.p.expect_end()?;
    Ok(f)
}

struct FormParser<'a> {
    ctx: &'a JetContext,
    p: Parser,
}

impl FormParser<'_> {
    fn scalar(&self, f: LocalForm) -> Result<Expr, FormError> {
        if f.is_scalar() {
            Ok(f.scalar())
        } else {
            Err(FormError::NotScalar(f.to_string()))
        }
    }

    fn form(&mut self) -> Result<LocalForm, FormError> {
        let mut acc = self.term()?;
        loop {
            if self.p.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.p.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LocalForm, FormError> {
        let mut acc = self.unary()?;
        loop {
            if self.p.eat('*') || self.p.eat('&') {
                acc = acc.wedge(&self.unary()?)?;
            } else if self.p.eat('/') {
                let d = self.unary()?;
                acc = acc.scale(&self.scalar(d)?.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LocalForm, FormError> {
        if self.p.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<LocalForm, FormError> {
        let base = self.atom()?;
        if self.p.eat('^') {
            let e = self.p.exponent()?;
            let b = self.scalar(base)?;
            Ok(LocalForm::function(self.ctx, Expr::pow(b, e)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<LocalForm, FormError> {
        let ctx = self.ctx;
        let offset = self.p.offset();
        match self.p.peek().clone() {
            Tok::Ident(name) if *self.p.peek_at(1) == Tok::Sym('(') => {
                self.p.bump();
                self.p.bump();
                let out = match name.as_str() {
                    "th" => LocalForm::theta(ctx, self.contact()?),
                    "d" => {
                        let f = self.form()?;
                        LocalForm::function(ctx, self.scalar(f)?).d()
                    }
                    _ => {
                        let func = Func::from_name(&name)
                            .ok_or(crate::expr::ParseError::UnknownFunction { name, offset })?;
                        let arg = self.form()?;
                        LocalForm::function(ctx, Expr::apply(func, self.scalar(arg)?))
                    }
                };
                self.p.expect(')')?;
                Ok(out)
            }
            Tok::Ident(name) => {
                self.p.bump();
                Ok(self.name(&name))
            }
            Tok::Num(_) => Ok(LocalForm::function(ctx, self.p.atom()?)),
            Tok::Sym('(') => {
                self.p.bump();
                let f = self.form()?;
                self.p.expect(')')?;
                Ok(f)
            }
            _ => Err(self.p.error(&["number", "identifier", "covector", "`(`", "`-`"]).into()),
        }
    }

    fn name(&self, name: &str) -> LocalForm {
        let ctx = self.ctx;
        if ctx.coord_index(name).is_some() || ctx.parse_var(name).is_some() {
            return LocalForm::function(ctx, Expr::var(name));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(mu) = ctx.coord_index(rest) {
                return LocalForm::dx(ctx, mu);
            }
            if let Some(v) = ctx.parse_var(rest) {
                return LocalForm::function(ctx, ctx.var_expr(&v)).d();
            }
        }
        LocalForm::function(ctx, Expr::var(name))
    }

    /// Arguments of `th(...)`, after the opening parenthesis.
    fn contact(&mut self) -> Result<JetVar, FormError> {
        let ctx = self.ctx;
        let first = match self.p.bump() {
            Tok::Ident(s) => s,
            _ => return Err(self.p.error(&["field name"]).into()),
        };
        let base = ctx.parse_var(&first).ok_or_else(|| FormError::UnknownContact(first.clone()))?;
        let mut index = base.index.as_slice().to_vec();
        while self.p.eat(',') {
            let letters = match self.p.bump() {
                Tok::Ident(s) => s,
                _ => return Err(self.p.error(&["coordinate letters"]).into()),
            };
            for ch in letters.chars() {
                let mu = ctx
                    .coord_index(&ch.to_string())
                    .ok_or_else(|| FormError::UnknownContact(format!("{first},{letters}")))?;
                index.push(mu);
            }
        }
        Ok(JetVar::new(base.field, MultiIndex::new(index)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covectors_and_contact_forms() {
        let c = JetContext::new(["t", "x"], ["u"]).unwrap();
        let f = parse_form(&c, "dx & dt").unwrap();
        assert_eq!(f.to_string(), "-dt & dx");
        for s in ["th(u,xt)", "th(u,x,t)", "th(u_tx)", "th(u_t, x)"] {
            assert_eq!(parse_form(&c, s).unwrap().to_string(), "th(u,tx)", "{s}");
        }
        let g = parse_form(&c, "(u + 1)/2 * th(u) ∧ dx").unwrap();
        assert_eq!(g.to_string(), "(-1/2 - 1/2*u)*dx & th(u)");
    }

    #[test]
    fn rejects_forms_where_scalars_are_required() {
        let c = JetContext::new(["x"], ["u"]).unwrap();
        assert!(matches!(parse_form(&c, "sin(dx)"), Err(FormError::NotScalar(_))));
        assert!(matches!(parse_form(&c, "u/dx"), Err(FormError::NotScalar(_))));
        assert!(matches!(parse_form(&c, "dx^2"), Err(FormError::NotScalar(_))));
        assert!(matches!(parse_form(&c, "th(w)"), Err(FormError::UnknownContact(_))));
        assert!(matches!(parse_form(&c, "u +"), Err(FormError::Parse(_))));
    }
}
