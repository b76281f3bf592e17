//! Parser for the s-expression formula syntax printed by `Formula`'s
//! `Display` impl. A symbol bound by an enclosing quantifier is a variable;
//! any other symbol is a name.

use super::formula::{Formula, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Sym(&'a str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            b if b.is_ascii_whitespace() => i += 1,
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                out.push((start, Tok::Sym(&text[start..i])));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
    scope: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        let offset = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Error::Parse { offset, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn symbol(&mut self, what: &str) -> Result<&'a str> {
        match self.peek() {
            Some(Tok::Sym(s)) => {
                let s = *s;
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn close(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected ')'")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let s = self.symbol("term")?;
        Ok(if self.scope.iter().any(|v| v == s) { Term::Var(s.to_string()) } else { Term::Name(s.to_string()) })
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.next() {
            Some(Tok::Sym("true")) => return Ok(Formula::True),
            Some(Tok::Sym("false")) => return Ok(Formula::False),
            Some(Tok::Open) => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err("expected formula"));
            }
        }
        let head = self.symbol("operator")?;
        let f = match head {
            "and" | "or" => {
                let mut parts = Vec::new();
                while !matches!(self.peek(), Some(Tok::Close) | None) {
                    parts.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            "not" => Formula::negate(self.formula()?),
            "rel" => {
                let name = self.symbol("relation name")?.to_string();
                let mut args = Vec::new();
                while matches!(self.peek(), Some(Tok::Sym(_))) {
                    args.push(self.term()?);
                }
                Formula::Rel(name, args)
            }
            "=" | "!=" => {
                let a = self.term()?;
                let b = self.term()?;
                if head == "=" {
                    Formula::Eq(a, b)
                } else {
                    Formula::neq(a, b)
                }
            }
            "forall" | "exists" => {
                let var = self.symbol("variable")?.to_string();
                self.scope.push(var.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                if head == "forall" {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                }
            }
            other => {
                self.pos -= 1;
                return Err(self.err(format!("unknown operator '{other}'")));
            }
        };
        self.close()?;
        Ok(f)
    }
}

/// Parses one formula; trailing input is an error.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), scope: Vec::new() };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{state_description, structure_description, FiniteModel};
    use proptest::prelude::*;

    #[test]
    fn parses_spec_form() {
        let f = parse_formula("(and (rel R a1 a2) (not (rel R a2 a1)))").unwrap();
        let n = |s: &str| Term::Name(s.into());
        assert_eq!(
            f,
            Formula::And(vec![
                Formula::Rel("R".into(), vec![n("a1"), n("a2")]),
                Formula::negate(Formula::Rel("R".into(), vec![n("a2"), n("a1")])),
            ])
        );
    }

    #[test]
    fn quantifier_binds_symbols() {
        let f = parse_formula("(forall x (or (= x a1) (!= x x)))").unwrap();
        let Formula::Forall(_, body) = f else { panic!() };
        let Formula::Or(parts) = *body else { panic!() };
        assert_eq!(parts[0], Formula::Eq(Term::Var("x".into()), Term::Name("a1".into())));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_formula("(and (rel R a1) (bogus))") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_formula("(and"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_formula("true false"), Err(Error::Parse { offset: 5, .. })));
        assert!(matches!(parse_formula(")"), Err(Error::Parse { offset: 0, .. })));
    }

    fn arb_model() -> impl Strategy<Value = FiniteModel> {
        (1usize..=3, proptest::collection::vec(any::<bool>(), 27)).prop_map(|(n, bits)| {
            let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
            let tuples: Vec<Vec<usize>> =
                crate::models::all_tuples(n, 2).into_iter().zip(bits).filter_map(|(t, b)| b.then_some(t)).collect();
            let rels = [("R".to_string(), crate::models::Relation::new(2, tuples))].into_iter().collect();
            FiniteModel::new(names, rels).unwrap()
        })
    }

    proptest! {
        #[test]
        fn descriptions_round_trip_through_text(m in arb_model()) {
            for f in [state_description(&m), structure_description(&m)] {
                prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
            }
        }
    }
}
