//! Univariate polynomials and rational functions over Q, enough to describe
//! genus-zero spectral curves in a global coordinate.

use super::{ri, Rat, TruncSeries};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn var() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).cloned().unwrap_or_default() + o.0.get(i).cloned().unwrap_or_default())
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * ri(i as i64)).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] / &lead;
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Rational roots with multiplicity; the bool says whether they exhaust
    /// the degree.
    pub fn rational_roots(&self) -> Result<(Vec<(Rat, usize)>, bool)> {
        let deg = self.degree().ok_or(Error::Invalid("roots of zero polynomial".into()))?;
        let mut p = self.clone();
        let mut roots = Vec::new();
        // zero roots first
        let mut m0 = 0;
        while p.0.first().is_some_and(|c| c.is_zero()) {
            p = Poly::new(p.0[1..].to_vec());
            m0 += 1;
        }
        if m0 > 0 {
            roots.push((Rat::zero(), m0));
        }
        if p.degree().unwrap_or(0) > 0 {
            let ints = p.integer_coeffs();
            let a0 = ints[0].abs();
            let an = ints[ints.len() - 1].abs();
            let num_div = divisors(&a0)?;
            let den_div = divisors(&an)?;
            let mut cands: Vec<Rat> = Vec::new();
            for a in &num_div {
                for b in &den_div {
                    for s in [1i64, -1] {
                        let c = Rat::new(a * BigInt::from(s), b.clone());
                        if !cands.contains(&c) {
                            cands.push(c);
                        }
                    }
                }
            }
            for c in cands {
                let mut m = 0;
                let lin = Poly::new(vec![-c.clone(), Rat::one()]);
                while p.degree().unwrap_or(0) > 0 && p.eval(&c).is_zero() {
                    p = p.divrem(&lin).0;
                    m += 1;
                }
                if m > 0 {
                    roots.push((c, m));
                }
            }
        }
        let found: usize = roots.iter().map(|r| r.1).sum();
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((roots, found == deg))
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.0.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect()
    }

    /// Taylor coefficients of `p(a + w)` in `w`.
    pub fn shift_to(&self, a: &Rat) -> Poly {
        let mut out = Poly::new(vec![]);
        let lin = Poly::new(vec![a.clone(), Rat::one()]);
        for c in self.0.iter().rev() {
            out = out.mul(&lin).add(&Poly::constant(c.clone()));
        }
        out
    }

    pub fn to_series(&self, order: i64) -> TruncSeries {
        TruncSeries::new(0, self.0.clone(), order)
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n
        .to_u64()
        .filter(|&v| v <= 10_000_000)
        .ok_or(Error::Invalid("coefficients too large for rational root search".into()))?;
    let mut d = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            d.push(BigInt::from(k));
            if k * k != n {
                d.push(BigInt::from(n / k));
            }
        }
        k += 1;
    }
    Ok(d)
}

/// `num / den` in lowest terms up to a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::constant(Rat::one()),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalFn {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.scale(&-Rat::one()),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFn {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::Invalid("division by zero in rational function".into()));
        }
        Ok(RationalFn {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }

    pub fn derivative(&self) -> Self {
        RationalFn {
            num: self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            den: self.den.mul(&self.den),
        }
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Laurent expansion of `f(a + w)` in `w`, known through `order`.
    pub fn expand_at(&self, a: &Rat, order: i64) -> Result<TruncSeries> {
        let n = self.num.shift_to(a);
        let d = self.den.shift_to(a);
        let dv = d.0.iter().take_while(|c| c.is_zero()).count() as i64;
        let ds = d.to_series(order + 2 * dv);
        n.to_series(order + dv).div(&ds).map(|s| s.truncate(order))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let r = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Invalid(format!("trailing input in '{s}'")));
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let v: String = chars[st..i].iter().collect();
            out.push(Tok::Num(Rat::from_integer(v.parse().unwrap())));
        } else if c == 'z' || c == 'x' {
            out.push(Tok::Var);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Invalid(format!("unexpected '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                // implicit product: "3z", "2(z+1)"
                Some(Tok::Var) | Some(Tok::Op('(')) | Some(Tok::Num(_)) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = matches!(self.peek(), Some(Tok::Op('-')));
            if neg {
                self.pos += 1;
            }
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => n.to_integer().to_i64().unwrap_or(0),
                _ => return Err(Error::Invalid("exponent must be an integer".into())),
            };
            self.pos += 1;
            let mut r = RationalFn::poly(Poly::constant(Rat::one()));
            for _ in 0..e {
                r = r.mul(&base);
            }
            if neg {
                r = RationalFn::poly(Poly::constant(Rat::one())).div(&r)?;
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFn> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFn::poly(Poly::constant(n)))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RationalFn::poly(Poly::var()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Invalid("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            t => Err(Error::Invalid(format!("unexpected token {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn parse_and_eval() {
        let f = RationalFn::parse("z^2 - 2z").unwrap();
        assert_eq!(f.eval(&rat(3, 1)), Some(rat(3, 1)));
        let g = RationalFn::parse("z + 1/z").unwrap();
        assert_eq!(g.eval(&rat(2, 1)), Some(rat(5, 2)));
        assert_eq!(g.eval(&rat(0, 1)), None);
        let h = RationalFn::parse("(z-1)^2/(3z)").unwrap();
        assert_eq!(h.eval(&rat(2, 1)), Some(rat(1, 6)));
    }

    #[test]
    fn roots() {
        let p = RationalFn::parse("(2z-1)(z+3)^2(z^2+1)").unwrap().num;
        let (r, complete) = p.rational_roots().unwrap();
        assert!(!complete);
        assert_eq!(r, vec![(rat(-3, 1), 2), (rat(1, 2), 1)]);
    }

    #[test]
    fn laurent_expansion() {
        let g = RationalFn::parse("1/(z^2 - z)").unwrap();
        // at z = 1: 1/(w (1 + w)) = w^{-1} - 1 + w - ...
        let s = g.expand_at(&rat(1, 1), 3).unwrap();
        assert_eq!(s.coeff(-1), Some(rat(1, 1)));
        assert_eq!(s.coeff(0), Some(rat(-1, 1)));
        assert_eq!(s.coeff(3), Some(rat(1, 1)));
    }
}
