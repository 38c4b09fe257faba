//! Textual formats: field coefficients, series, and germ specs.
//!
//! Coefficients are `a/b` (rational), `(a/b, c/d)` meaning `a/b + (c/d)*i`,
//! `zeta(N)^k`, or a parenthesized sum of `q*zeta(N)^k` terms. Series are
//! sums of `coef*z^k` (univariate) or `coef*x^a*y^b` (bivariate) monomials,
//! e.g. `z + (0,1)*z^2`. Whitespace-insensitive; duplicate monomials are
//! rejected. Printing is canonical and round-trips through the parser.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::CycloNumber;
use crate::series1::Series1;
use crate::series2::Series2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

type Result<T> = std::result::Result<T, ParseError>;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut v: BigInt = digits.parse().unwrap();
        if neg {
            v = -v;
        }
        Ok(v)
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// `zeta(N)` or `zeta(N)^k`.
    fn zeta(&mut self) -> Result<CycloNumber> {
        self.expect(b'(')?;
        let n = self.integer()?;
        self.expect(b')')?;
        let n: u32 = match n.try_into() {
            Ok(v) if v >= 1 => v,
            _ => return self.err("zeta level must be a positive integer"),
        };
        let mut k: i64 = 1;
        if self.eat(b'^') {
            let e = self.integer()?;
            k = match (&e).try_into() {
                Ok(v) => v,
                Err(_) => return self.err("zeta exponent out of range"),
            };
        }
        let level = lcm_u32(4, n);
        match CycloNumber::root_of_unity(k, n, level) {
            Ok(v) => Ok(v),
            Err(e) => self.err(e.to_string()),
        }
    }

    /// A coefficient term inside a parenthesized sum: rational, zeta power,
    /// or rational * zeta power.
    fn coef_atom(&mut self) -> Result<CycloNumber> {
        if self.eat_keyword("zeta") {
            return self.zeta();
        }
        let r = self.rational()?;
        if self.eat(b'*') {
            if !self.eat_keyword("zeta") {
                return self.err("expected zeta after '*' in coefficient");
            }
            let z = self.zeta()?;
            Ok(z.mul_rational(&r))
        } else {
            Ok(CycloNumber::from_rational(r, 4).expect("level 4"))
        }
    }

    fn coef_sum(&mut self) -> Result<CycloNumber> {
        let mut acc = self.coef_atom()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.coef_atom()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.coef_atom()?);
            } else {
                return Ok(acc);
            }
        }
    }

    /// One multiplicative factor of a monomial term. Returns either a
    /// coefficient or a variable power.
    fn factor(&mut self, vars: &[u8]) -> Result<Factor> {
        self.skip_ws();
        let c = match self.peek() {
            Some(c) => c,
            None => return self.err("unexpected end of input"),
        };
        // "zeta" must win over the variable 'z'
        if self.eat_keyword("zeta") {
            return Ok(Factor::Coef(self.zeta()?));
        }
        if vars.contains(&c) {
            self.pos += 1;
            let mut e = 1usize;
            if self.eat(b'^') {
                let v = self.integer()?;
                e = match (&v).try_into() {
                    Ok(v) => v,
                    Err(_) => return self.err("negative variable exponent"),
                };
            }
            return Ok(Factor::Var(c, e));
        }
        if c == b'(' {
            self.pos += 1;
            let first = self.coef_sum()?;
            if self.eat(b',') {
                // Gaussian pair (a, b): first must be a plain rational
                let re = match first.as_rational() {
                    Some(r) => r,
                    None => return self.err("gaussian pair needs rational entries"),
                };
                let im_c = self.coef_sum()?;
                let im = match im_c.as_rational() {
                    Some(r) => r,
                    None => return self.err("gaussian pair needs rational entries"),
                };
                self.expect(b')')?;
                return Ok(Factor::Coef(
                    CycloNumber::make_gaussian(re, im, 4).expect("level 4"),
                ));
            }
            self.expect(b')')?;
            return Ok(Factor::Coef(first));
        }
        if c.is_ascii_digit() || c == b'-' {
            return Ok(Factor::Coef(
                CycloNumber::from_rational(self.rational()?, 4).expect("level 4"),
            ));
        }
        self.err(format!("unexpected character '{}'", c as char))
    }

    /// One monomial term: product of factors. Returns (coefficient, exps).
    fn term(&mut self, vars: &[u8]) -> Result<(CycloNumber, Vec<usize>)> {
        let mut coef = CycloNumber::one(4).expect("level 4");
        let mut exps = vec![0usize; vars.len()];
        loop {
            match self.factor(vars)? {
                Factor::Coef(c) => coef = coef.mul(&c),
                Factor::Var(v, e) => {
                    let idx = vars.iter().position(|&x| x == v).unwrap();
                    exps[idx] += e;
                }
            }
            if !self.eat(b'*') {
                return Ok((coef, exps));
            }
        }
    }

    fn term_list(&mut self, vars: &[u8], stop: &[u8]) -> Result<Vec<(CycloNumber, Vec<usize>)>> {
        let mut out = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            let _ = self.eat(b'+');
        }
        loop {
            let (c, exps) = self.term(vars)?;
            if !seen.insert(exps.clone()) {
                return self.err("duplicate monomial");
            }
            out.push((if negate { c.neg() } else { c }, exps));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(c) if stop.contains(&c) => return Ok(out),
                None => return Ok(out),
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
    }
}

enum Factor {
    Coef(CycloNumber),
    Var(u8, usize),
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

// ---------------------------------------------------------------------------
// public parse entry points
// ---------------------------------------------------------------------------

pub fn parse_series1(src: &str, trunc: usize) -> Result<Series1> {
    let mut cur = Cursor::new(src);
    let s = parse_series1_at(&mut cur, trunc, &[])?;
    if !cur.at_end() {
        return cur.err("trailing input after series");
    }
    Ok(s)
}

fn parse_series1_at(cur: &mut Cursor, trunc: usize, stop: &[u8]) -> Result<Series1> {
    let terms = cur.term_list(&[b'z'], stop)?;
    let mut level = 4u32;
    for (c, _) in &terms {
        level = lcm_u32(level, c.level());
    }
    let list: Vec<(usize, CycloNumber)> = terms
        .into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| (e[0], c))
        .collect();
    Ok(Series1::from_terms(level, trunc, &list, true))
}

pub fn parse_series2(src: &str, trunc: usize) -> Result<Series2> {
    let mut cur = Cursor::new(src);
    let s = parse_series2_at(&mut cur, trunc, &[])?;
    if !cur.at_end() {
        return cur.err("trailing input after series");
    }
    Ok(s)
}

fn parse_series2_at(cur: &mut Cursor, trunc: usize, stop: &[u8]) -> Result<Series2> {
    let terms = cur.term_list(&[b'x', b'y'], stop)?;
    let mut level = 4u32;
    for (c, _) in &terms {
        level = lcm_u32(level, c.level());
    }
    let list: Vec<(usize, usize, CycloNumber)> = terms
        .into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, e)| (e[0], e[1], c))
        .collect();
    Ok(Series2::from_terms(level, trunc, &list, true))
}

// ---------------------------------------------------------------------------
// germ specs
// ---------------------------------------------------------------------------

/// A parsed germ spec: `p = ...; q = ...`, the `pm:` shorthand for
/// `p(z)^m - conj(z)^m`, or an analytic `f1 = ...; f2 = ...; at = x0,y0`.
#[derive(Debug, Clone)]
pub enum GermSpec {
    Harmonic { p: Series1, q: Series1 },
    PmFamily { p: Series1, m: u32 },
    Analytic { f1: Series2, f2: Series2 },
}

pub fn parse_germ_spec(src: &str, trunc: usize) -> Result<GermSpec> {
    let mut cur = Cursor::new(src);
    let pm_prefix = cur.eat_keyword("pm:");
    let mut p: Option<Series1> = None;
    let mut q: Option<Series1> = None;
    let mut m: Option<u32> = None;
    let mut f1: Option<Series2> = None;
    let mut f2: Option<Series2> = None;
    let mut at: Option<(BigRational, BigRational)> = None;
    loop {
        if cur.at_end() {
            break;
        }
        let key = if cur.eat_keyword("f1") {
            "f1"
        } else if cur.eat_keyword("f2") {
            "f2"
        } else if cur.eat_keyword("at") {
            "at"
        } else if cur.eat_keyword("p") {
            "p"
        } else if cur.eat_keyword("q") {
            "q"
        } else if cur.eat_keyword("m") {
            "m"
        } else {
            return cur.err("expected one of p, q, m, f1, f2, at");
        };
        cur.expect(b'=')?;
        match key {
            "p" => p = Some(parse_series1_at(&mut cur, trunc, &[b';'])?),
            "q" => q = Some(parse_series1_at(&mut cur, trunc, &[b';'])?),
            "m" => {
                let v = cur.integer()?;
                let v: u32 = match (&v).try_into() {
                    Ok(v) if v >= 1 => v,
                    _ => return cur.err("m must be a positive integer"),
                };
                m = Some(v);
            }
            "f1" => f1 = Some(parse_series2_at(&mut cur, trunc, &[b';'])?),
            "f2" => f2 = Some(parse_series2_at(&mut cur, trunc, &[b';'])?),
            "at" => {
                let x0 = cur.rational()?;
                cur.expect(b',')?;
                let y0 = cur.rational()?;
                at = Some((x0, y0));
            }
            _ => unreachable!(),
        }
        if !cur.eat(b';') && !cur.at_end() {
            return cur.err("expected ';' between statements");
        }
    }
    match (pm_prefix, p, q, m, f1, f2) {
        (true, Some(p), None, Some(m), None, None) => Ok(GermSpec::PmFamily { p, m }),
        (false, Some(p), Some(q), None, None, None) => Ok(GermSpec::Harmonic { p, q }),
        (false, None, None, None, Some(f1), Some(f2)) => {
            let (mut f1, mut f2) = (f1, f2);
            if let Some((x0, y0)) = at {
                let level = lcm_u32(f1.level(), f2.level());
                let cx = CycloNumber::from_rational(x0, level).expect("level");
                let cy = CycloNumber::from_rational(y0, level).expect("level");
                f1 = f1.recenter(&cx, &cy);
                f2 = f2.recenter(&cx, &cy);
                // recentered germ must vanish at its base point
                let c1 = f1.constant_term();
                let c2 = f2.constant_term();
                f1 = f1.sub(&Series2::from_terms(level, f1.trunc(), &[(0, 0, c1)], true));
                f2 = f2.sub(&Series2::from_terms(level, f2.trunc(), &[(0, 0, c2)], true));
            }
            Ok(GermSpec::Analytic { f1, f2 })
        }
        _ => {
            let mut cur = Cursor::new(src);
            cur.pos = src.len();
            cur.err("incomplete germ spec: need (p, q), pm:(p, m), or (f1, f2)")
        }
    }
}

// ---------------------------------------------------------------------------
// printers
// ---------------------------------------------------------------------------

fn coef_prefix(c: &CycloNumber, first: bool) -> (String, bool) {
    // Returns (formatted coefficient or empty for 1, negated flag)
    let printed = c.to_string();
    if let Some(r) = c.as_rational() {
        if r.is_one() {
            return (String::new(), false);
        }
        if (-r.clone()).is_one() {
            return (String::new(), true);
        }
        if r.is_negative() && !first {
            let pos = c.neg();
            return (pos.to_string(), true);
        }
    }
    (printed, false)
}

fn push_term(out: &mut String, body: String, negated: bool) {
    if out.is_empty() {
        if negated {
            out.push('-');
        }
        out.push_str(&body);
    } else {
        out.push_str(if negated { " - " } else { " + " });
        out.push_str(&body);
    }
}

pub fn print_series1(s: &Series1) -> String {
    let mut out = String::new();
    for k in 0..=s.trunc() {
        let c = s.coeff(k);
        if c.is_zero() {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{}", k),
        };
        let (coef, negated) = if k == 0 {
            (c.to_string(), false)
        } else {
            coef_prefix(&c, out.is_empty())
        };
        let body = match (coef.is_empty(), var.is_empty()) {
            (true, false) => var,
            (false, true) => coef,
            (false, false) => format!("{}*{}", coef, var),
            (true, true) => unreachable!(),
        };
        push_term(&mut out, body, negated);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_series2(s: &Series2) -> String {
    let mut items: Vec<(usize, usize)> = s.terms().map(|(a, b, _)| (a, b)).collect();
    items.sort_by_key(|&(a, b)| (a + b, b));
    let mut out = String::new();
    for (a, b) in items {
        let c = s.coeff(a, b);
        let mut var = String::new();
        if a > 0 {
            var.push('x');
            if a > 1 {
                var.push_str(&format!("^{}", a));
            }
        }
        if b > 0 {
            if !var.is_empty() {
                var.push('*');
            }
            var.push('y');
            if b > 1 {
                var.push_str(&format!("^{}", b));
            }
        }
        let (coef, negated) = if var.is_empty() {
            (c.to_string(), false)
        } else {
            coef_prefix(&c, out.is_empty())
        };
        let body = match (coef.is_empty(), var.is_empty()) {
            (true, false) => var,
            (false, true) => coef,
            (false, false) => format!("{}*{}", coef, var),
            (true, true) => unreachable!(),
        };
        push_term(&mut out, body, negated);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_germ_spec(spec: &GermSpec) -> String {
    match spec {
        GermSpec::Harmonic { p, q } => {
            format!("p = {}; q = {}", print_series1(p), print_series1(q))
        }
        GermSpec::PmFamily { p, m } => format!("pm: p = {}; m = {}", print_series1(p), m),
        GermSpec::Analytic { f1, f2 } => {
            format!("f1 = {}; f2 = {}", print_series2(f1), print_series2(f2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_series() {
        let s = parse_series1("z + (0,1)*z^2", 8).unwrap();
        assert_eq!(s.coeff(1), CycloNumber::one(4).unwrap());
        assert_eq!(s.coeff(2), CycloNumber::i(4).unwrap());
        assert!(s.is_exact());
    }

    #[test]
    fn parse_rational_and_zeta() {
        let s = parse_series1("2/3*z - zeta(8)^3*z^2", 8).unwrap();
        assert_eq!(
            s.coeff(1),
            CycloNumber::from_rational(BigRational::new(2.into(), 3.into()), 8).unwrap()
        );
        assert_eq!(s.coeff(2), CycloNumber::root_of_unity(3, 8, 8).unwrap().neg());
    }

    #[test]
    fn rejects_duplicate_monomials() {
        let e = parse_series1("z + z", 8).unwrap_err();
        assert!(e.msg.contains("duplicate"));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_series1("z+(0,1)*z^2", 8).unwrap();
        let b = parse_series1(" z  +  ( 0 , 1 ) * z ^ 2 ", 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn print_parse_round_trip() {
        let inputs = [
            "z + (0, 1)*z^2",
            "z - z^3 + 2/3*z^5",
            "zeta(8)*z + z^2",
            "(1 + zeta(8))*z",
            "(-1/2, 3)*z^4",
        ];
        for src in inputs {
            let s = parse_series1(src, 16).unwrap();
            let printed = print_series1(&s);
            let reparsed = parse_series1(&printed, 16).unwrap();
            assert_eq!(print_series1(&reparsed), printed, "for input {src}");
            assert_eq!(reparsed, s, "semantic round trip for {src}");
        }
    }

    #[test]
    fn bivariate_round_trip() {
        let src = "x^2 + y^2 - 3*x*y^3";
        let s = parse_series2(src, 16).unwrap();
        let printed = print_series2(&s);
        assert_eq!(parse_series2(&printed, 16).unwrap(), s);
    }

    #[test]
    fn germ_spec_forms() {
        match parse_germ_spec("p = z + z^2; q = z", 8).unwrap() {
            GermSpec::Harmonic { p, q } => {
                assert_eq!(p.coeff(2), CycloNumber::one(4).unwrap());
                assert_eq!(q.coeff(1), CycloNumber::one(4).unwrap());
            }
            other => panic!("wrong kind: {other:?}"),
        }
        match parse_germ_spec("pm: p = z + (0,1)*z^2; m = 2", 8).unwrap() {
            GermSpec::PmFamily { m, .. } => assert_eq!(m, 2),
            other => panic!("wrong kind: {other:?}"),
        }
        match parse_germ_spec("f1 = x; f2 = x*y + y^3", 8).unwrap() {
            GermSpec::Analytic { f1, f2 } => {
                assert_eq!(f1.coeff(1, 0), CycloNumber::one(4).unwrap());
                assert_eq!(f2.coeff(1, 1), CycloNumber::one(4).unwrap());
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn germ_spec_recenters_analytic_base_point() {
        // f1 = x^2 at base point (1, 0): shifted to (x+1)^2 - 1 = x^2 + 2x
        let spec = parse_germ_spec("f1 = x^2; f2 = y; at = 1,0", 8).unwrap();
        match spec {
            GermSpec::Analytic { f1, .. } => {
                assert!(f1.constant_term().is_zero());
                assert_eq!(f1.coeff(1, 0), CycloNumber::from_int(2, 4).unwrap());
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_position() {
        let e = parse_series1("z + $", 8).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.col >= 4);
    }
}
