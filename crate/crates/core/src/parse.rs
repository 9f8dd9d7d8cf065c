//! Parser for the textual expression grammar.
//!
//! ```text
//! expr  := "0" | term ( "+" term )*
//! term  := [ int "*" ] atom [ "(" signed-int ")" ]
//! atom  := "O" | "Omega^" int | "wT^" int | "Sigma" | "psi_" int | "psidual_" int
//! ```
//!
//! Whitespace is allowed between tokens; an omitted twist means `(0)`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::Error;
use crate::sheaf::{Atom, SheafExpr, MAX_TWIST};
use crate::variety::Variety;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }

    fn expect(&mut self, lit: &str) -> Result<(), Error> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", lit)))
        }
    }

    /// Unsigned decimal directly at the cursor (no whitespace skipping).
    fn digits(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<u64>()
            .map_err(|_| Error::Overflow(format!("number {} at position {}", text, start)))
    }

    fn signed(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        self.skip_ws();
        let start = self.pos;
        let v = self.digits()?;
        if v > MAX_TWIST as u64 {
            return Err(Error::Overflow(format!("twist at position {}", start)));
        }
        Ok(if neg { -(v as i64) } else { v as i64 })
    }

    fn index(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let start = self.pos;
        let v = self.digits()?;
        u32::try_from(v)
            .ok()
            .filter(|&x| x <= 1024)
            .ok_or(Error::Overflow(format!("index at position {}", start)))
    }
}

/// Parse an expression on the given variety into canonical form.
pub fn parse_sheaf_expr(text: &str, variety: Variety) -> Result<SheafExpr, Error> {
    let mut c = Cursor { src: text.as_bytes(), pos: 0 };
    if c.peek() == Some(b'0') {
        let save = c.pos;
        c.pos += 1;
        if c.peek().is_none() {
            return Ok(SheafExpr::zero(variety));
        }
        c.pos = save;
    }
    let mut terms: Vec<(Atom, i64, u64)> = Vec::new();
    loop {
        let mut mult = 1u64;
        if matches!(c.peek(), Some(b) if b.is_ascii_digit()) {
            mult = c.digits()?;
            c.expect("*")?;
        }
        let atom_pos = {
            c.skip_ws();
            c.pos
        };
        let atom = if c.eat("Omega^") {
            Atom::Cotangent(c.index()?)
        } else if c.eat("wT^") {
            Atom::Tangent(c.index()?)
        } else if c.eat("Sigma") {
            Atom::Spinor
        } else if c.eat("psidual_") {
            Atom::PsiDual(c.index()?)
        } else if c.eat("psi_") {
            Atom::Psi(c.index()?)
        } else if c.eat("O") {
            Atom::Structure
        } else {
            return Err(c.err("expected an atom (O, Omega^p, wT^p, Sigma, psi_j, psidual_j)"));
        };
        let twist = if c.eat("(") {
            let t = c.signed()?;
            c.expect(")")?;
            t
        } else {
            0
        };
        // Validate catalog membership eagerly so errors point at the atom.
        SheafExpr::atom(variety, atom, twist).map_err(|e| match e {
            Error::NotInCatalog(s) => Error::NotInCatalog(format!("{} (position {})", s, atom_pos)),
            other => other,
        })?;
        terms.push((atom, twist, mult));
        match c.peek() {
            None => break,
            Some(b'+') => {
                c.pos += 1;
            }
            Some(_) => return Err(c.err("expected '+' or end of input")),
        }
    }
    SheafExpr::from_terms(variety, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::Term;

    fn q(n: u32) -> Variety {
        Variety::quadric(n).unwrap()
    }

    #[test]
    fn literal_examples() {
        let p4 = Variety::projective(4).unwrap();
        let e = parse_sheaf_expr("O(3)", p4).unwrap();
        assert_eq!(e.terms(), &[Term { atom: Atom::Structure, twist: 3, mult: 1 }]);

        let e = parse_sheaf_expr("Sigma(2) + 2*psi_1(3)", q(5)).unwrap();
        assert_eq!(e.terms().len(), 2);
        let mults: Vec<u64> = e.terms().iter().map(|t| t.mult).collect();
        assert!(mults.contains(&1) && mults.contains(&2));

        assert_eq!(parse_sheaf_expr("psi_0(4)", q(3)).unwrap().to_string(), "O(4)");
    }

    #[test]
    fn omitted_twist_and_whitespace() {
        let e = parse_sheaf_expr("  Sigma ", q(3)).unwrap();
        assert_eq!(e.to_string(), "Sigma(0)");
        let e = parse_sheaf_expr("3 * O ( -2 ) + O(-2)", q(3)).unwrap();
        assert_eq!(e.to_string(), "4*O(-2)");
    }

    #[test]
    fn errors_carry_positions() {
        let p3 = Variety::projective(3).unwrap();
        match parse_sheaf_expr("O(1) + Foo", p3) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(parse_sheaf_expr("Sigma(1)", p3), Err(Error::NotInCatalog(_))));
        assert!(matches!(parse_sheaf_expr("O(99999999999)", p3), Err(Error::Overflow(_))));
        assert!(matches!(parse_sheaf_expr("O(1", p3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_sheaf_expr("", p3), Err(Error::Syntax { .. })));
    }

    #[test]
    fn zero_sheaf() {
        let p3 = Variety::projective(3).unwrap();
        assert!(parse_sheaf_expr("0", p3).unwrap().is_zero());
        assert_eq!(parse_sheaf_expr(&SheafExpr::zero(p3).to_string(), p3).unwrap(), SheafExpr::zero(p3));
    }
}
