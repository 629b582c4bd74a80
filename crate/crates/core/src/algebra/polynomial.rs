use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::registry::{self, Registry};
use crate::error::{Error, Result};

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector, so two polynomials with
/// the same registry compare equal exactly when they are the same element.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    reg: Arc<Registry>,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(reg: &Arc<Registry>) -> Self {
        Polynomial {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<Registry>, c: BigRational) -> Self {
        Self::term(reg, Monomial::one(reg.len()), c)
    }

    pub fn one(reg: &Arc<Registry>) -> Self {
        Self::constant(reg, BigRational::one())
    }

    pub fn term(reg: &Arc<Registry>, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.nvars(), reg.len(), "monomial width differs from registry");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn monomial(reg: &Arc<Registry>, m: Monomial) -> Self {
        Self::term(reg, m, BigRational::one())
    }

    pub fn var(reg: &Arc<Registry>, name: &str) -> Result<Self> {
        let v = reg.var(name)?;
        Ok(Self::monomial(reg, Monomial::var(reg.len(), v)))
    }

    pub fn from_terms<I>(reg: &Arc<Registry>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(reg);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn nvars(&self) -> usize {
        self.reg.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in display order (lex, registry order, descending).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The single term of a one-term polynomial.
    pub fn as_term(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_polynomial())
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if registry::same(&self.reg, &other.reg) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut r = Polynomial::zero(&self.reg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.reg);
        }
        Polynomial {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut r = Polynomial::one(&self.reg);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Multiplicative inverse, available only for single-term polynomials.
    pub fn invert_term(&self) -> Option<Polynomial> {
        let (m, c) = self.as_term()?;
        Some(Self::term(&self.reg, m.inv(), c.recip()))
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn max_degree(&self, v: usize) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self, v: usize) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut r = Polynomial::zero(&self.reg);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e != 0 {
                let mut d = m.clone();
                d.set_exp(v, e - 1);
                r.add_term(d, c * BigRational::from_integer(e.into()));
            }
        }
        r
    }

    /// Indices of variables that occur with nonzero exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| self.involves(v)).collect()
    }

    /// Replaces variable `v` by `value`. Negative powers of `v` require
    /// `value` to be a single term.
    pub fn substitute(&self, v: usize, value: &Polynomial) -> Result<Polynomial> {
        self.check(value)?;
        let inverse = value.invert_term();
        let mut cache: BTreeMap<i32, Polynomial> = BTreeMap::new();
        let mut r = Polynomial::zero(&self.reg);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let power = match cache.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = if e >= 0 {
                        value.pow(e as u32)
                    } else {
                        inverse
                            .as_ref()
                            .ok_or_else(|| Error::NotPolynomial(self.reg.name(v).to_string()))?
                            .pow((-e) as u32)
                    };
                    cache.insert(e, p.clone());
                    p
                }
            };
            let mut rest = m.clone();
            rest.set_exp(v, 0);
            r = &r + &power.mul_monomial(&rest).scale(c);
        }
        Ok(r)
    }

    /// Applies `var -> sign * monomial` for each entry of `map` (entries may
    /// refer to the same registry only). Returns the cleared result together
    /// with the monomial the substituted expression was multiplied by.
    pub fn substitute_monomial_map(
        &self,
        map: &[(usize, i32, Monomial)],
    ) -> (Polynomial, Monomial) {
        let mut r = Polynomial::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut out = m.clone();
            let mut sign = 1;
            for (v, s, img) in map {
                let e = m.exp(*v);
                if e == 0 {
                    continue;
                }
                out.set_exp(*v, out.exp(*v) - e);
                out = out.mul(&img.pow(e));
                if *s < 0 && e % 2 != 0 {
                    sign = -sign;
                }
            }
            r.add_term(out, if sign < 0 { -c.clone() } else { c.clone() });
        }
        let (cleared, shift) = r.clear_denominators();
        log::debug!(
            "monomial substitution cleared by {}",
            shift.render(self.reg.names())
        );
        (cleared, shift)
    }

    /// Multiplies by the smallest monomial that makes every exponent
    /// non-negative. Returns the product and the multiplier.
    pub fn clear_denominators(&self) -> (Polynomial, Monomial) {
        let n = self.nvars();
        let mut shift = Monomial::one(n);
        for v in 0..n {
            let lo = self.min_degree(v);
            if lo < 0 {
                shift.set_exp(v, -lo);
            }
        }
        (self.mul_monomial(&shift), shift)
    }

    /// Divides out the largest monomial factor (exponent-wise minimum).
    pub fn strip_monomial_factor(&self) -> (Polynomial, Monomial) {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return (self.clone(), Monomial::one(self.nvars()));
        };
        let g = it.fold(first.clone(), |g, m| g.gcd(m));
        (self.mul_monomial(&g.inv()), g)
    }

    /// Rescales to coprime integer coefficients with a positive coefficient
    /// on the `order`-leading term.
    pub fn primitive(&self, order: &MonomialOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        let lead_negative = self.leading(order).map(|(_, c)| c.is_negative()).unwrap();
        if lead_negative {
            num = -num;
        }
        self.scale(&BigRational::new(den, num))
    }

    /// Primitive, positive-leading form with respect to lex in registry order.
    pub fn normalized(&self) -> Polynomial {
        self.primitive(&MonomialOrder::lex(&self.reg))
    }

    /// Equal up to a nonzero rational factor.
    pub fn associate(&self, other: &Polynomial) -> bool {
        registry::same(&self.reg, &other.reg) && self.normalized() == other.normalized()
    }

    /// Re-expresses over `target`, matching variables by name.
    pub fn rebase(&self, target: &Arc<Registry>) -> Result<Polynomial> {
        let map = (0..self.nvars())
            .map(|v| {
                if self.involves(v) {
                    target.var(self.reg.name(v)).map(Some)
                } else {
                    Ok(target.index(self.reg.name(v)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut r = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut out = Monomial::one(target.len());
            for (v, t) in map.iter().enumerate() {
                if let Some(t) = t {
                    out.set_exp(*t, m.exp(v));
                }
            }
            r.add_term(out, c.clone());
        }
        Ok(r)
    }

    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    t *= values[v].powi(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of absolute values of the evaluated terms, a scale for residuals.
    pub fn eval_magnitude(&self, values: &[Complex64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN).abs();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    t *= values[v].norm().powi(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn parse(text: &str, reg: &Arc<Registry>) -> Result<Polynomial> {
        super::parse::parse(text, reg)
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(&a))?;
            } else if a.is_one() {
                write!(f, "{}", m.render(self.reg.names()))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&a), m.render(self.reg.names()))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operator forms panic on registry mismatch; use the `checked_*` methods
// when the registries are not known to agree.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("registry mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("registry mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("registry mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&rat(-1))
    }
}
