use num_traits::ToPrimitive;

use super::ast::{FileAst, Image, QuadRule, RingExpr, Span, Stmt, VarRule};
use crate::expr::{SyntaxError, Tok, TokenStream};

fn span(ts: &TokenStream) -> Span {
    Span(ts.pos())
}

fn small(ts: &mut TokenStream) -> Result<u64, SyntaxError> {
    let pos = ts.pos();
    let (n, _) = ts.expect_int()?;
    n.to_u64().ok_or(SyntaxError {
        pos,
        message: format!("integer `{n}` too large"),
    })
}

fn ring_expr(ts: &mut TokenStream) -> Result<RingExpr, SyntaxError> {
    let (word, _) = ts.expect_ident()?;
    let call = ts.is_sym("(");
    let open = |ts: &mut TokenStream| ts.expect_sym("(").map(|_| ());
    Ok(match word.as_str() {
        "Int" if !call => RingExpr::Int,
        "Zmod" => {
            open(ts)?;
            let n = small(ts)?;
            ts.expect_sym(")")?;
            RingExpr::Zmod(n)
        }
        "GF" => {
            open(ts)?;
            let q = small(ts)?;
            let modulus = if ts.eat_sym(",") { Some(ts.parse_expr()?) } else { None };
            ts.expect_sym(")")?;
            RingExpr::Gf(q, modulus)
        }
        "quotient" => {
            open(ts)?;
            let base = ring_expr(ts)?;
            ts.expect_sym(",")?;
            let (var, _) = ts.expect_ident()?;
            ts.expect_sym(",")?;
            let m = ts.parse_expr()?;
            ts.expect_sym(")")?;
            RingExpr::Quotient(Box::new(base), var, m)
        }
        "triangular" | "matrices" => {
            open(ts)?;
            let base = ring_expr(ts)?;
            ts.expect_sym(",")?;
            let n = small(ts)? as usize;
            ts.expect_sym(")")?;
            if word == "triangular" {
                RingExpr::Triangular(Box::new(base), n)
            } else {
                RingExpr::Matrices(Box::new(base), n)
            }
        }
        "trivial" => {
            open(ts)?;
            let base = ring_expr(ts)?;
            ts.expect_sym(")")?;
            RingExpr::Trivial(Box::new(base))
        }
        "product" => {
            open(ts)?;
            let mut parts = vec![ring_expr(ts)?];
            while ts.eat_sym(",") {
                parts.push(ring_expr(ts)?);
            }
            ts.expect_sym(")")?;
            RingExpr::Product(parts)
        }
        "polyring" => {
            open(ts)?;
            let base = ring_expr(ts)?;
            ts.expect_sym(",")?;
            let (var, _) = ts.expect_ident()?;
            ts.expect_sym(")")?;
            RingExpr::Polyring(Box::new(base), var)
        }
        _ if call => return ts.error(format!("unknown ring constructor `{word}`")),
        _ => RingExpr::Ref(word),
    })
}

fn images(ts: &mut TokenStream) -> Result<Vec<Image>, SyntaxError> {
    ts.expect_sym("{")?;
    let mut out = Vec::new();
    while !ts.is_sym("}") {
        let (generator, _) = ts.expect_ident()?;
        ts.expect_sym("->")?;
        let value = ts.parse_expr()?;
        out.push(Image { generator, value });
        if !ts.eat_sym(",") {
            break;
        }
    }
    ts.expect_sym("}")?;
    Ok(out)
}

fn preset_name(ts: &mut TokenStream) -> Result<String, SyntaxError> {
    let (mut name, _) = ts.expect_ident()?;
    while ts.eat_sym("-") {
        match ts.next() {
            (Tok::Ident(s), _) => name.push_str(&format!("-{s}")),
            (Tok::Int(n), _) => name.push_str(&format!("-{n}")),
            (other, pos) => {
                return Err(SyntaxError {
                    pos,
                    message: format!("expected preset name part, found {other}"),
                })
            }
        }
    }
    Ok(name)
}

fn extension(ts: &mut TokenStream, name: String, sp: Span) -> Result<Stmt, SyntaxError> {
    ts.expect_word("over")?;
    let (ring, _) = ts.expect_ident()?;
    ts.expect_sym("{")?;
    ts.expect_word("vars")?;
    let mut vars = vec![ts.expect_ident()?.0];
    while ts.eat_sym(",") {
        vars.push(ts.expect_ident()?.0);
    }
    ts.expect_sym(";")?;
    let mut rules = Vec::new();
    let mut quads = Vec::new();
    while !ts.is_sym("}") {
        let here = span(ts);
        let (first, _) = ts.expect_ident()?;
        if ts.eat_sym(":") {
            ts.expect_word("sigma")?;
            let (sigma, _) = ts.expect_ident()?;
            let delta = if ts.eat_sym(",") {
                ts.expect_word("delta")?;
                Some(ts.expect_ident()?.0)
            } else {
                None
            };
            ts.expect_sym(";")?;
            rules.push(VarRule {
                var: first,
                sigma,
                delta,
                span: here,
            });
        } else if ts.eat_sym("*") {
            let (right, _) = ts.expect_ident()?;
            ts.expect_sym("=")?;
            let rhs = ts.parse_expr()?;
            ts.expect_sym(";")?;
            quads.push(QuadRule {
                left: first,
                right,
                rhs,
                span: here,
            });
        } else {
            return ts.error(format!("expected `:` or `*` after `{first}`, found {}", ts.peek()));
        }
    }
    ts.expect_sym("}")?;
    Ok(Stmt::Extension {
        name,
        ring,
        vars,
        rules,
        quads,
        span: sp,
    })
}

fn stmt(ts: &mut TokenStream) -> Result<Stmt, SyntaxError> {
    let sp = span(ts);
    let (kw, _) = ts.expect_ident()?;
    let s = match kw.as_str() {
        "ring" => {
            let (name, _) = ts.expect_ident()?;
            ts.expect_sym("=")?;
            Stmt::Ring {
                name,
                value: ring_expr(ts)?,
                span: sp,
            }
        }
        "endo" => {
            let (name, _) = ts.expect_ident()?;
            ts.expect_word("on")?;
            let (ring, _) = ts.expect_ident()?;
            Stmt::Endo {
                name,
                ring,
                images: images(ts)?,
                span: sp,
            }
        }
        "deriv" => {
            let (name, _) = ts.expect_ident()?;
            ts.expect_word("on")?;
            let (ring, _) = ts.expect_ident()?;
            ts.expect_word("sigma")?;
            let (sigma, _) = ts.expect_ident()?;
            Stmt::Deriv {
                name,
                ring,
                sigma,
                images: images(ts)?,
                span: sp,
            }
        }
        "extension" => {
            let (name, _) = ts.expect_ident()?;
            extension(ts, name, sp)?
        }
        "use" => Stmt::Use {
            preset: preset_name(ts)?,
            span: sp,
        },
        "active" => Stmt::Active {
            name: ts.expect_ident()?.0,
            span: sp,
        },
        other => {
            return Err(SyntaxError {
                pos: sp.0,
                message: format!("expected a declaration (ring, endo, deriv, extension, use, active), found `{other}`"),
            })
        }
    };
    ts.eat_sym(";");
    Ok(s)
}

/// Parse a presentation file into its syntax tree (no name resolution).
pub fn parse_ast(text: &str) -> Result<FileAst, SyntaxError> {
    let mut ts = TokenStream::new(text)?;
    let mut stmts = Vec::new();
    while !ts.at_eof() {
        stmts.push(stmt(&mut ts)?);
    }
    Ok(FileAst { stmts })
}
