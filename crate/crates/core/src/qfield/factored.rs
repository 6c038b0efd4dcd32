//! Product-form rational functions: a scalar times a product of polynomial
//! factors with integer exponents. Localization contributions are built as
//! long products of linear forms, so keeping the factorization explicit makes
//! multiplication O(1) per factor and lets sums over many contributions share
//! one small common denominator instead of expanding pairwise.
//!
//! Factor polynomials are stored in a canonical shape: nonconstant, content 1,
//! positive leading coefficient. The scalar absorbs everything else.

use super::{Poly, QfieldError, Rat, RatFunc};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factored {
    pub nvars: usize,
    pub scalar: Rat,
    factors: BTreeMap<Poly, i64>,
}

impl Factored {
    pub fn one(nvars: usize) -> Self {
        Factored { nvars, scalar: Rat::one(), factors: BTreeMap::new() }
    }

    pub fn from_rat(nvars: usize, c: Rat) -> Self {
        Factored { nvars, scalar: c, factors: BTreeMap::new() }
    }

    pub fn from_poly(p: &Poly) -> Self {
        let mut f = Factored::one(p.nvars);
        f.mul_poly(p, 1);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Poly, i64)> {
        self.factors.iter().map(|(p, &e)| (p, e))
    }

    /// Multiply by p^e, folding content and sign into the scalar. A zero p
    /// with e > 0 annihilates the product; e < 0 on a zero p panics.
    pub fn mul_poly(&mut self, p: &Poly, e: i64) {
        assert_eq!(p.nvars, self.nvars);
        if e == 0 || self.scalar.is_zero() {
            return;
        }
        if p.is_zero() {
            assert!(e > 0, "division by the zero polynomial");
            self.scalar = Rat::zero();
            self.factors.clear();
            return;
        }
        let mut c = p.content();
        if p.leading().unwrap().1.is_negative() {
            c = -c;
        }
        let prim = p.scale(&c.recip());
        self.mul_rat_pow(&c, e);
        if prim.as_constant().is_some() {
            return;
        }
        let cur = self.factors.entry(prim).or_insert(0);
        *cur += e;
        if *cur == 0 {
            self.factors.retain(|_, &mut v| v != 0);
        }
    }

    pub fn mul_rat(&mut self, c: &Rat) {
        self.scalar *= c;
        if self.scalar.is_zero() {
            self.factors.clear();
        }
    }

    fn mul_rat_pow(&mut self, c: &Rat, e: i64) {
        let mut acc = Rat::one();
        let base = if e < 0 { c.recip() } else { c.clone() };
        for _ in 0..e.unsigned_abs() {
            acc *= base.clone();
        }
        self.mul_rat(&acc);
    }

    pub fn mul(&mut self, o: &Factored) {
        assert_eq!(self.nvars, o.nvars);
        if self.scalar.is_zero() {
            return;
        }
        if o.scalar.is_zero() {
            self.scalar = Rat::zero();
            self.factors.clear();
            return;
        }
        self.scalar *= o.scalar.clone();
        for (p, &e) in &o.factors {
            let cur = self.factors.entry(p.clone()).or_insert(0);
            *cur += e;
        }
        self.factors.retain(|_, &mut v| v != 0);
    }

    pub fn invert(&self) -> Result<Factored, QfieldError> {
        if self.scalar.is_zero() {
            return Err(QfieldError::DivisionByZero("factored zero".into()));
        }
        Ok(Factored {
            nvars: self.nvars,
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(p, &e)| (p.clone(), -e)).collect(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Factored, QfieldError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut r = Factored::one(self.nvars);
        for _ in 0..e.unsigned_abs() {
            r.mul(&base);
        }
        Ok(r)
    }

    /// Value at a point. Any denominator factor vanishing there is a pole,
    /// reported even when a numerator factor also vanishes.
    pub fn eval(&self, pt: &[Rat]) -> Result<Rat, QfieldError> {
        let mut acc = self.scalar.clone();
        let mut zero_num = false;
        for (p, &e) in &self.factors {
            let v = p.eval(pt);
            if v.is_zero() {
                if e < 0 {
                    return Err(QfieldError::Pole(format!("{}", p)));
                }
                zero_num = true;
                continue;
            }
            let base = if e < 0 { v.recip() } else { v };
            for _ in 0..e.unsigned_abs() {
                acc *= base.clone();
            }
        }
        Ok(if zero_num { Rat::zero() } else { acc })
    }

    pub fn expand(&self) -> RatFunc {
        let mut num = Poly::constant(self.nvars, self.scalar.clone());
        let mut den = Poly::one(self.nvars);
        for (p, &e) in &self.factors {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num = num.mul(p);
                } else {
                    den = den.mul(p);
                }
            }
        }
        RatFunc::new(num, den).expect("denominator factors are nonzero")
    }
}

/// Accumulates factored terms and produces their sum over one shared
/// denominator, reduced by trial division against the known factors.
#[derive(Debug, Clone)]
pub struct FactoredSum {
    nvars: usize,
    terms: Vec<Factored>,
}

impl FactoredSum {
    pub fn new(nvars: usize) -> Self {
        FactoredSum { nvars, terms: Vec::new() }
    }

    pub fn push(&mut self, t: Factored) {
        assert_eq!(t.nvars, self.nvars);
        if !t.is_zero() {
            self.terms.push(t);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, pt: &[Rat]) -> Result<Rat, QfieldError> {
        let mut acc = Rat::zero();
        for t in &self.terms {
            acc += t.eval(pt)?;
        }
        Ok(acc)
    }

    pub fn total(&self) -> RatFunc {
        if self.terms.is_empty() {
            return RatFunc::zero(self.nvars);
        }
        // Index the distinct factors across all terms.
        let mut index: BTreeMap<&Poly, usize> = BTreeMap::new();
        for t in &self.terms {
            for (p, _) in t.factors() {
                let next = index.len();
                index.entry(p).or_insert(next);
            }
        }
        let factors: Vec<Poly> = {
            let mut v = vec![Poly::zero(self.nvars); index.len()];
            for (p, &i) in &index {
                v[i] = (*p).clone();
            }
            v
        };
        // Shared denominator: each factor at its deepest exponent.
        let mut need = vec![0i64; factors.len()];
        for t in &self.terms {
            for (p, e) in t.factors() {
                if e < 0 {
                    let i = index[p];
                    need[i] = need[i].max(-e);
                }
            }
        }
        // Cache of factor powers, extended on demand.
        let mut powers: Vec<Vec<Poly>> =
            factors.iter().map(|_| vec![Poly::one(self.nvars)]).collect();
        let mut pow_of = |i: usize, e: i64| -> Poly {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&factors[i]);
                powers[i].push(next);
            }
            powers[i][e as usize].clone()
        };
        let mut num = Poly::zero(self.nvars);
        for t in &self.terms {
            let mut exp = need.clone();
            for (p, e) in t.factors() {
                exp[index[p]] += e;
            }
            let mut part = Poly::constant(self.nvars, t.scalar.clone());
            for (i, &e) in exp.iter().enumerate() {
                debug_assert!(e >= 0);
                if e > 0 {
                    part = part.mul(&pow_of(i, e));
                }
            }
            num = num.add(&part);
        }
        // Reduce: peel denominator factors that exactly divide the numerator.
        let mut den = Poly::one(self.nvars);
        for (i, &m) in need.iter().enumerate() {
            let mut left = m;
            while left > 0 && !num.is_zero() {
                match num.exact_div(&factors[i]) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            for _ in 0..left {
                den = den.mul(&factors[i]);
            }
        }
        RatFunc::new(num, den).expect("denominator factors are nonzero")
    }
}
