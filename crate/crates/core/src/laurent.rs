//! Exact multivariate Laurent polynomials over a [`BaseField`] and square
//! classes in the iterated Laurent field `F_n = k((t_1))…((t_n))`.
//!
//! The tower is read with `t_n` outermost: the valuation of `f` is first its
//! lowest `t_n`-degree, then the lowest `t_{n-1}`-degree of that
//! coefficient, and so on. Monomials are ordered to match, comparing
//! exponent vectors lexicographically from the last variable down, so the
//! smallest stored term of a polynomial is always its leading term in the
//! tower.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::basefield::{BaseField, FieldElem, SquareClass};
use crate::error::{Error, Result};

/// Largest supported number of Laurent variables.
pub const MAX_VARS: usize = 16;

pub(crate) fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables {
            got: n,
            max: MAX_VARS,
        });
    }
    Ok(())
}

/// Exponent vector of a Laurent monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: BaseField,
    n: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl LaurentPoly {
    pub fn zero(field: BaseField, n: usize) -> Self {
        LaurentPoly {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: BaseField, n: usize, c: FieldElem) -> Self {
        Self::monomial(field, n, Monomial::one(n), c)
    }

    pub fn one(field: BaseField, n: usize) -> Self {
        Self::constant(field, n, field.one())
    }

    pub fn monomial(field: BaseField, n: usize, m: Monomial, c: FieldElem) -> Self {
        assert_eq!(m.0.len(), n, "monomial arity");
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        LaurentPoly { field, n, terms }
    }

    /// The variable `t_i`, `1 ≤ i ≤ n`.
    pub fn var(field: BaseField, n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "variable index out of range");
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::monomial(field, n, Monomial(e), field.one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        field: BaseField,
        n: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, FieldElem)>,
    ) -> Self {
        let mut out = Self::zero(field, n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "monomial arity");
            out.add_term(Monomial(e), c);
        }
        out
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && self.field.is_one(c))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order (leading term first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    /// The constant coefficient when `self` has no variable dependence.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.field.add(existing, &c);
                if self.field.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &LaurentPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field, self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> LaurentPoly {
        let mut out = Self::zero(self.field, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.field.mul(a, c));
        }
        out
    }

    /// Multiplies by the monomial `t^e`.
    pub fn shift(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        if self.is_monomial() {
            let (m, c) = self.terms.iter().next().expect("one term");
            let exps = m.0.iter().map(|x| x * e as i64).collect();
            let c = self.field.pow(c, e as i64).expect("nonzero coefficient");
            return Self::monomial(self.field, self.n, Monomial(exps), c);
        }
        let mut acc = Self::one(self.field, self.n);
        let mut sq = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq).expect("same ring");
            }
        }
        acc
    }

    /// Inverse of a monomial; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        if !self.is_monomial() {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let inv = self.field.inv(c)?;
        Some(Self::monomial(self.field, self.n, m.inv(), inv))
    }

    fn degree_bounds(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.0[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Exact quotient `self / divisor`; fails unless the division is exact.
    ///
    /// Candidate quotient terms must lie in the box cut out by the
    /// per-variable degree ranges of dividend and divisor, which bounds the
    /// loop when the divisor does not divide.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(inv) = divisor.monomial_inverse() {
            return self.mul(&inv);
        }
        let bounds: Vec<(i64, i64)> = (0..self.n)
            .map(|i| {
                let (flo, fhi) = self.degree_bounds(i).expect("nonzero");
                let (dlo, dhi) = divisor.degree_bounds(i).expect("nonzero");
                (flo - dlo, fhi - dhi)
            })
            .collect();
        let (lead_m, lead_c) = divisor.terms.iter().next().expect("nonzero");
        let lead_inv = self.field.inv(lead_c).expect("nonzero coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field, self.n);
        while let Some((rm, rc)) = rem.terms.iter().next() {
            let qm = rm.div(lead_m);
            if qm.0.iter().zip(&bounds).any(|(e, (lo, hi))| e < lo || e > hi) {
                return Err(Error::NotDivisible);
            }
            let qc = self.field.mul(rc, &lead_inv);
            let step = Self::monomial(self.field, self.n, qm, qc);
            rem = rem.sub(&divisor.mul(&step)?)?;
            quot = quot.add(&step)?;
        }
        Ok(quot)
    }

    /// Iterated leading term: valuations `(e_1, …, e_n)` and the unit in `k`.
    pub fn leading_data(&self) -> Result<(Vec<i64>, FieldElem)> {
        let (m, c) = self.terms.iter().next().ok_or(Error::ZeroPolynomial)?;
        Ok((m.0.clone(), c.clone()))
    }

    /// Square class in `F_n^× / (F_n^×)^2`.
    ///
    /// `f = u t^e (1 + ε)` with `ε` of positive valuation, and `1 + ε` is a
    /// square in odd characteristic, so only `u` and `e mod 2` matter.
    pub fn sq_class_fn(&self) -> Result<SqClassFn> {
        check_vars(self.n)?;
        let (vals, unit) = self.leading_data()?;
        let parity = vals
            .iter()
            .enumerate()
            .filter(|(_, e)| e.rem_euclid(2) == 1)
            .fold(0u32, |acc, (i, _)| acc | (1 << i));
        Ok(SqClassFn {
            n: self.n,
            parity,
            base: self.field.sq_class(&unit)?,
        })
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    field: BaseField,
    m: &Monomial,
    c: &FieldElem,
    first: bool,
) -> fmt::Result {
    let negative = matches!(c, FieldElem::Rat(r) if r.is_negative());
    let mag = if negative { field.neg(c) } else { c.clone() };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    let mut parts = Vec::new();
    if m.is_one() || !field.is_one(&mag) {
        parts.push(field.render(&mag));
    }
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("t{}", i + 1)),
            _ => parts.push(format!("t{}^{}", i + 1, e)),
        }
    }
    f.write_str(&parts.join("*"))
}

/// Canonical text: terms from the highest monomial down, e.g. `3*t1^-1*t2 + 1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, self.field, m, c, i == 0)?;
        }
        Ok(())
    }
}

/// Square class in `F_n`: parity of each valuation plus a class of `k`.
///
/// Bit `i` of `parity` is the parity of the exponent of `t_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SqClassFn {
    n: usize,
    parity: u32,
    base: SquareClass,
}

impl SqClassFn {
    pub fn new(n: usize, parity: u32, base: SquareClass) -> Result<Self> {
        check_vars(n)?;
        if n < 32 && parity >> n != 0 {
            return Err(Error::BadExponent(format!(
                "parity mask {parity:#b} exceeds {n} variables"
            )));
        }
        Ok(SqClassFn { n, parity, base })
    }

    /// A constant class (all parities even).
    pub fn constant(n: usize, base: SquareClass) -> Self {
        SqClassFn { n, parity: 0, base }
    }

    pub fn identity(field: BaseField, n: usize) -> Self {
        Self::constant(n, SquareClass::identity(field))
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> u32 {
        self.parity
    }

    pub fn parities(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.parity >> i & 1 == 1).collect()
    }

    pub fn base(&self) -> SquareClass {
        self.base
    }

    pub fn field(&self) -> BaseField {
        self.base.field()
    }

    pub fn is_identity(&self) -> bool {
        self.parity == 0 && self.base.is_identity()
    }

    pub fn mul(self, other: SqClassFn) -> SqClassFn {
        debug_assert_eq!(self.n, other.n);
        SqClassFn {
            n: self.n,
            parity: self.parity ^ other.parity,
            base: self.base.mul(other.base),
        }
    }

    pub fn neg(self) -> SqClassFn {
        SqClassFn {
            base: self.base.neg(),
            ..self
        }
    }

    /// Canonical monomial representative `u · t^parity`.
    pub fn lift(&self) -> LaurentPoly {
        let e = (0..self.n).map(|i| (self.parity >> i & 1) as i64).collect();
        LaurentPoly::monomial(self.field(), self.n, Monomial(e), self.base.rep())
    }
}

impl fmt::Display for SqClassFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lift().fmt(f)
    }
}

/// A quotient of Laurent polynomials. Monomial denominators are absorbed
/// into the numerator, so a Laurent polynomial always has denominator `1`.
#[derive(Debug, Clone)]
pub struct Frac {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Frac {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        num.check_compatible(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Frac { num, den }.normalized())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.field, p.n);
        Frac { num: p, den }
    }

    pub fn zero(field: BaseField, n: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(field, n))
    }

    pub fn one(field: BaseField, n: usize) -> Self {
        Self::from_poly(LaurentPoly::one(field, n))
    }

    fn normalized(self) -> Self {
        if self.num.is_zero() {
            return Frac::zero(self.num.field, self.num.n);
        }
        match self.den.monomial_inverse() {
            Some(inv) if !self.den.is_one() => Frac {
                num: self.num.mul(&inv).expect("same ring"),
                den: LaurentPoly::one(self.num.field, self.num.n),
            },
            Some(_) => self,
            None => match self.num.exact_div(&self.den) {
                Ok(q) => Frac::from_poly(q),
                Err(_) => self,
            },
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn field(&self) -> BaseField {
        self.num.field
    }

    pub fn vars(&self) -> usize {
        self.num.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, other: &Frac) -> Result<Frac> {
        if self.den == other.den {
            return Ok(Frac {
                num: self.num.add(&other.num)?,
                den: self.den.clone(),
            }
            .normalized());
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        Ok(Frac {
            num,
            den: self.den.mul(&other.den)?,
        }
        .normalized())
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Frac) -> Result<Frac> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Frac) -> Result<Frac> {
        let den = if self.den.is_one() {
            other.den.clone()
        } else if other.den.is_one() {
            self.den.clone()
        } else {
            self.den.mul(&other.den)?
        };
        Ok(Frac {
            num: self.num.mul(&other.num)?,
            den,
        }
        .normalized())
    }

    pub fn inv(&self) -> Result<Frac> {
        if self.num.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Frac {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized())
    }

    pub fn pow(&self, e: i64) -> Result<Frac> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::BadExponent(format!("exponent {e} too large")))?;
        Ok(Frac {
            num: base.num.pow(k),
            den: base.den.pow(k),
        }
        .normalized())
    }

    pub fn sq_class_fn(&self) -> Result<SqClassFn> {
        Ok(self.num.sq_class_fn()?.mul(self.den.sq_class_fn()?))
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Frac) -> bool {
        if self.num.field != other.num.field || self.num.n != other.num.n {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let lhs = self.num.mul(&other.den).expect("same ring");
        let rhs = other.num.mul(&self.den).expect("same ring");
        lhs == rhs
    }
}

impl Eq for Frac {}

impl From<LaurentPoly> for Frac {
    fn from(p: LaurentPoly) -> Self {
        Frac::from_poly(p)
    }
}

/// `num` alone, or `(num)*(den)^-1`.
impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt(f);
        }
        if self.num.len() == 1 {
            let (m, c) = self.num.terms.iter().next().expect("one term");
            if m.is_one() && self.field().is_one(c) {
                return write!(f, "({})^-1", self.den);
            }
            write!(f, "{}*({})^-1", self.num, self.den)
        } else {
            write!(f, "({})*({})^-1", self.num, self.den)
        }
    }
}
