//! Text syntax for elements of `A # U(L)`: `(3/2)*x⊗[d1^2 d2] + 1⊗[]`.
//!
//! A term is an optional coefficient followed by `*`, a basis name of `A`,
//! `⊗`, and a bracketed PBW monomial listing basis names of `L` in weakly
//! increasing basis order, each with an optional `^k`. Coefficients are
//! integers or parenthesized rationals; unit coefficients are omitted and
//! terms are joined by ` + ` or ` - `. `0` is the empty sum. Names are matched
//! longest first, so they may contain spaces or operators.

use lr_core::exactla::Scalar;
use lr_core::pbw::{Monomial, SmashElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line 1, column {column}: {message}")]
pub struct ElementError {
    pub column: usize,
    pub message: String,
}

/// Canonical text for `s`; terms appear in key order.
pub fn format_smash(s: &SmashElement, base_names: &[String], lie_names: &[String]) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, ((a, m), c)) in s.iter().enumerate() {
        let magnitude = if c.is_negative() { -c.clone() } else { c.clone() };
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !magnitude.is_one() {
            if magnitude.is_integer() {
                out.push_str(&format!("{magnitude}*"));
            } else {
                out.push_str(&format!("({magnitude})*"));
            }
        }
        out.push_str(&base_names[*a]);
        out.push('⊗');
        out.push_str(&format_monomial(m, lie_names));
    }
    out
}

pub fn format_monomial(m: &Monomial, lie_names: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                lie_names[i].clone()
            } else {
                format!("{}^{e}", lie_names[i])
            }
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    base: &'a [String],
    lie: &'a [String],
}

impl Scanner<'_> {
    fn err(&self, message: impl Into<String>) -> ElementError {
        ElementError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        let n = s.chars().count();
        self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
    }

    /// Longest name at the cursor whose match is followed by an acceptable
    /// character, looking past spaces when `skip_spaces` is set.
    fn name(
        &self,
        names: &[String],
        skip_spaces: bool,
        follow: impl Fn(Option<char>) -> bool,
    ) -> Option<(usize, usize)> {
        names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && self.starts_with(n))
            .map(|(i, n)| (i, n.chars().count()))
            .filter(|&(_, len)| {
                let mut p = self.pos + len;
                while skip_spaces && p < self.chars.len() && self.chars[p] == ' ' {
                    p += 1;
                }
                follow(self.chars.get(p).copied())
            })
            .max_by_key(|&(_, len)| len)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// `k*`, `(p/q)*` or nothing.
    fn coefficient(&mut self) -> Result<Scalar, ElementError> {
        let save = self.pos;
        if self.eat('(') {
            let start = self.pos;
            while self.peek().is_some_and(|c| c != ')') {
                self.pos += 1;
            }
            let inner: String = self.chars[start..self.pos].iter().collect();
            if self.eat(')') {
                self.skip_ws();
                if self.eat('*') {
                    return inner.parse().map_err(|_| ElementError {
                        column: start + 1,
                        message: format!("malformed rational {inner:?}"),
                    });
                }
            }
            self.pos = save;
            return Ok(Scalar::one());
        }
        let d = self.digits();
        if !d.is_empty() {
            self.skip_ws();
            if self.eat('*') {
                return Ok(d.parse().expect("digits"));
            }
        }
        self.pos = save;
        Ok(Scalar::one())
    }

    fn monomial(&mut self) -> Result<Monomial, ElementError> {
        if !self.eat('[') {
            return Err(self.err("expected '['"));
        }
        let mut exps = vec![0u32; self.lie.len()];
        let mut last: Option<usize> = None;
        loop {
            self.skip_ws();
            if self.eat(']') {
                return Ok(Monomial::from_exponents(exps));
            }
            let (i, len) = self
                .name(self.lie, false, |c| matches!(c, Some(' ' | ']' | '^')))
                .ok_or_else(|| self.err("expected a Lie basis name or ']'"))?;
            if last.is_some_and(|l| l >= i) {
                return Err(self.err("generators must appear once each, in increasing basis order"));
            }
            self.pos += len;
            let mut e = 1u32;
            if self.eat('^') {
                let d = self.digits();
                e = d
                    .parse()
                    .ok()
                    .filter(|&e| e > 0)
                    .ok_or_else(|| self.err("expected a positive exponent"))?;
            }
            exps[i] = e;
            last = Some(i);
        }
    }
}

/// Parses the syntax produced by [`format_smash`].
pub fn parse_smash(text: &str, base_names: &[String], lie_names: &[String]) -> Result<SmashElement, ElementError> {
    let mut s = Scanner {
        chars: text.chars().collect(),
        pos: 0,
        base: base_names,
        lie: lie_names,
    };
    let mut out = SmashElement::zero();
    s.skip_ws();
    if s.eat('0') {
        s.skip_ws();
        if s.peek().is_none() {
            return Ok(out);
        }
        s.pos = 0;
    }
    let mut first = true;
    loop {
        s.skip_ws();
        if s.peek().is_none() {
            if first {
                return Err(s.err("empty element"));
            }
            return Ok(out);
        }
        let negative = if s.eat('-') {
            true
        } else if s.eat('+') {
            if first {
                return Err(s.err("unexpected '+'"));
            }
            false
        } else if first {
            false
        } else {
            return Err(s.err("expected '+' or '-'"));
        };
        first = false;
        s.skip_ws();
        let mut c = s.coefficient()?;
        if negative {
            c = -c;
        }
        s.skip_ws();
        let (a, len) = s
            .name(s.base, true, |c| c == Some('⊗'))
            .ok_or_else(|| s.err("expected a base basis name followed by '⊗'"))?;
        s.pos += len;
        s.skip_ws();
        s.eat('⊗');
        s.skip_ws();
        let m = s.monomial()?;
        out.add_term((a, m), c);
    }
}
