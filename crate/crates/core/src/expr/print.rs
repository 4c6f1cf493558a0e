use super::{Expr, Node, Number};

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Ctx {
    Sum,
    Product,
    PowerBase,
}

pub(super) fn to_string(e: &Expr) -> String {
    let mut out = String::new();
    write(e, Ctx::Sum, &mut out);
    out
}

fn write_number(n: &Number, ctx: Ctx, out: &mut String) {
    let s = n.to_string();
    let simple = !n.is_negative() && !s.contains('/') && !s.contains('e');
    if ctx == Ctx::PowerBase && !simple || ctx == Ctx::Product && n.is_negative() {
        out.push('(');
        out.push_str(&s);
        out.push(')');
    } else {
        out.push_str(&s);
    }
}

/// Writes a product term with an explicit coefficient.
fn write_mul(c: &Number, fs: &[Expr], out: &mut String) {
    if c.is_one() {
    } else if c.neg().is_one() {
        out.push('-');
    } else {
        out.push_str(&c.to_string());
        out.push('*');
    }
    for (i, f) in fs.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write(f, Ctx::Product, out);
    }
}

fn write(e: &Expr, ctx: Ctx, out: &mut String) {
    match e.node() {
        Node::Num(n) => write_number(n, ctx, out),
        Node::Var(v) => out.push_str(v),
        Node::Add(ts) if ts.is_empty() => out.push('0'),
        Node::Add(ts) => {
            let wrap = ctx > Ctx::Sum;
            if wrap {
                out.push('(');
            }
            for (i, t) in ts.iter().enumerate() {
                let (c, rest) = t.split_coefficient();
                let negative = c.is_negative();
                if i > 0 {
                    out.push_str(if negative { " - " } else { " + " });
                } else if negative {
                    out.push('-');
                }
                let c = if negative { c.neg() } else { c };
                match rest {
                    None => out.push_str(&c.to_string()),
                    Some(r) => match r.node() {
                        Node::Mul(_, fs) => write_mul(&c, fs, out),
                        _ => write_mul(&c, std::slice::from_ref(&r), out),
                    },
                }
            }
            if wrap {
                out.push(')');
            }
        }
        Node::Mul(c, fs) => {
            let wrap = ctx == Ctx::PowerBase || (ctx == Ctx::Product && c.is_negative());
            if wrap {
                out.push('(');
            }
            write_mul(c, fs, out);
            if wrap {
                out.push(')');
            }
        }
        Node::Pow(b, k) => {
            write(b, Ctx::PowerBase, out);
            out.push('^');
            if k.is_integer() {
                out.push_str(&k.numer().to_string());
            } else {
                out.push_str(&format!("({}/{})", k.numer(), k.denom()));
            }
        }
        Node::Apply(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, Ctx::Sum, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn round(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn prints_signs_naturally() {
        assert_eq!(round("-u_tt + u_xx"), "-u_tt + u_xx");
        assert_eq!(round("-u_xx - exp(u)"), "-u_xx - exp(u)");
        assert_eq!(round("1 - h^2/2 + h^4/24"), "1 - 1/2*h^2 + 1/24*h^4");
    }

    #[test]
    fn parenthesizes_compound_bases() {
        assert_eq!(round("(x+1)^-1"), "(1 + x)^-1");
        assert_eq!(round("(2*x)^(1/2)"), "(2*x)^(1/2)");
        assert_eq!(round("(1/2)^(1/3)"), "(1/2)^(1/3)");
    }

    #[test]
    fn zero_prints_as_digit() {
        assert_eq!(round("x - x"), "0");
    }
}
