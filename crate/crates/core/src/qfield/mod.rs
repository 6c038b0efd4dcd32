//! Exact arithmetic in Q(u1,...,um): sparse multivariate polynomials over
//! arbitrary-precision rationals, and quotients of such polynomials.
//!
//! Invariants kept by every constructor and operation:
//! - `Rat` is always reduced with positive denominator (the backing rational
//!   type normalizes on construction).
//! - `Poly` never stores a zero coefficient; keys are ordered graded-lex with
//!   u1 > u2 > ..., so the maximal key is the leading term.
//! - `RatFunc` denominators are nonzero, primitive (coefficient content 1,
//!   positive leading coefficient) and share no monomial factor with the
//!   numerator; a zero numerator forces denominator 1.
//! - Equality of `RatFunc` is decided by cross multiplication. There is no
//!   multivariate gcd anywhere in this module; the only cancellation ever
//!   attempted is exact division by syntactically known factors.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

mod factored;
mod parse;

pub use factored::{Factored, FactoredSum};
pub use parse::{parse_rat, parse_ratfunc, ParseError};

pub type Rat = BigRational;

/// n/d as a `Rat`. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Fractional part in [0,1).
pub fn frac(x: &Rat) -> Rat {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum QfieldError {
    #[error("division by zero {0}")]
    DivisionByZero(String),
    #[error("pole at evaluation point: {0}")]
    Pole(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
}

/// Exponent vector of a monomial in u1..um.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The single variable u_{i+1}.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_deg(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// o / self, assuming `self.divides(o)`.
    pub fn quot(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_deg().cmp(&other.total_deg()) {
            Ordering::Equal => {
                // Lex with u1 > u2 > ...: a higher exponent on an earlier
                // variable wins.
                self.0.cmp(&other.0)
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in Q[u1..um].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    pub nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// u_{i+1} as a polynomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Poly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rat::one());
        p
    }

    /// Degree-1 polynomial c1*u1 + ... + cm*um.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let nvars = coeffs.len();
        let mut p = Poly::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(nvars, i), c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            *v = v.clone() * c;
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        let mut r = Poly::zero(self.nvars);
        if c.is_zero() {
            return r;
        }
        for (m1, c1) in &self.terms {
            r.terms.insert(m1.mul(m), c1.clone() * c);
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, pt: &[Rat]) -> Rat {
        assert_eq!(pt.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= pt[i].clone();
                }
            }
            acc += t;
        }
        acc
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_deg(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_deg()).max()
    }

    /// Some(d) when all terms have the same total degree d.
    pub fn homogeneous_deg(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.total_deg());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rat::zero()
        } else {
            Rat::new(num, den)
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut mc: Option<Vec<u32>> = None;
        for m in self.terms.keys() {
            match &mut mc {
                None => mc = Some(m.0.clone()),
                Some(v) => {
                    for (a, b) in v.iter_mut().zip(&m.0) {
                        *a = (*a).min(*b);
                    }
                }
            }
        }
        Monomial(mc.unwrap_or_else(|| vec![0; self.nvars]))
    }

    /// Divide every term's monomial by `m` (which must divide them all).
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            assert!(m.divides(m1));
            r.terms.insert(m.quot(m1), c1.clone());
        }
        r
    }

    /// Exact division: Some(q) with self = q * d, or None when d does not
    /// divide self. Single-divisor monomial division; exactness is decided
    /// correctly because the leading term of a product is the product of
    /// leading terms.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let tm = dm.quot(rm);
            let tc = rc.clone() / dc.clone();
            rem = rem.sub(&d.mul_monomial(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }
}

fn fmt_terms(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (k, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "{}", a)?;
        } else {
            if !a.is_one() {
                write!(f, "{}*", a)?;
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "u{}", i + 1)?;
                } else {
                    write!(f, "u{}^{}", i + 1, e)?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(self, f)
    }
}

/// Quotient of two polynomials. See the module invariants for the stored
/// normal form; values compare equal via cross multiplication.
#[derive(Debug, Clone)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, QfieldError> {
        if den.is_zero() {
            return Err(QfieldError::DivisionByZero(format!("({})/0", num)));
        }
        if num.nvars != den.nvars {
            return Err(QfieldError::VarMismatch(num.nvars, den.nvars));
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.nvars);
            return;
        }
        // Cancel the common monomial factor.
        let mn = self.num.monomial_content();
        let md = self.den.monomial_content();
        let joint = Monomial(mn.0.iter().zip(&md.0).map(|(a, b)| *a.min(b)).collect());
        if !joint.is_one() {
            self.num = self.num.div_monomial(&joint);
            self.den = self.den.div_monomial(&joint);
        }
        // Make the denominator primitive with positive leading coefficient.
        let mut c = self.den.content();
        if self.den.leading().unwrap().1.is_negative() {
            c = -c;
        }
        let inv = c.recip();
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    pub fn zero(nvars: usize) -> Self {
        RatFunc { num: Poly::zero(nvars), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc { num: Poly::one(nvars), den: Poly::one(nvars) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.nvars);
        RatFunc { num: p, den }
    }

    pub fn from_rat(nvars: usize, c: Rat) -> Self {
        RatFunc { num: Poly::constant(nvars, c), den: Poly::one(nvars) }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatFunc::new(num, den).expect("nonzero denominator product")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        let num = self.num.mul(&o.num);
        let den = self.den.mul(&o.den);
        RatFunc::new(num, den).expect("nonzero denominator product")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, QfieldError> {
        if o.is_zero() {
            return Err(QfieldError::DivisionByZero(format!("{}", o)));
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> Result<RatFunc, QfieldError> {
        RatFunc::one(self.nvars()).div(self)
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, QfieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut r = RatFunc::one(self.nvars());
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base);
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("denominator unchanged")
    }

    /// Value at a point; a vanishing denominator is reported as a pole.
    pub fn eval(&self, pt: &[Rat]) -> Result<Rat, QfieldError> {
        let d = self.den.eval(pt);
        if d.is_zero() {
            return Err(QfieldError::Pole(format!("{}", self.den)));
        }
        Ok(self.num.eval(pt) / d)
    }

    /// Some(c) when the function is the constant c, decided symbolically:
    /// num == c * den as polynomials.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.num.is_zero() {
            return Some(Rat::zero());
        }
        let (nm, nc) = self.num.leading()?;
        let (dm, dc) = self.den.leading()?;
        if nm != dm {
            return None;
        }
        let c = nc.clone() / dc.clone();
        self.num.sub(&self.den.scale(&c)).is_zero().then_some(c)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map_or(false, |c| c.is_one()) {
            return fmt_terms(&self.num, f);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests;
