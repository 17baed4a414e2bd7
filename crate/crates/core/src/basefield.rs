//! Base fields, square classes and Witt reduction of forms over them.
//!
//! Two kinds of residue field are supported: prime fields `F_p` with `p`
//! odd, and the reals. Real numbers are carried as exact rationals; only
//! their signs ever matter for quadratic forms, so nothing is lost.
//!
//! Both `F_p^× / (F_p^×)^2` and `R^× / (R^×)^2` have order two, so a
//! [`SquareClass`] is a single bit plus the field it lives over.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;
const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    /// `F_p`; `nonresidue` caches the least quadratic nonresidue.
    Prime { p: u64, nonresidue: u64 },
    Reals,
}

/// An element of a [`BaseField`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    /// Residue in `[0, p)`.
    Mod(u64),
    /// Reduced fraction with positive denominator.
    Rat(BigRational),
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Euler criterion for nonzero `a` modulo odd prime `p`.
fn euler_is_square(a: u64, p: u64) -> bool {
    mod_pow(a, (p - 1) / 2, p) == 1
}

/// Tonelli–Shanks square root of a nonzero quadratic residue.
fn sqrt_mod(a: u64, p: u64, nonresidue: u64) -> u64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = mod_pow(nonresidue, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = b * b % p;
        }
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    r
}

impl BaseField {
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let nonresidue = (2..p)
            .find(|&a| !euler_is_square(a, p))
            .expect("every odd prime has a nonresidue");
        Ok(BaseField::Prime { p, nonresidue })
    }

    pub fn reals() -> Self {
        BaseField::Reals
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Prime { p, .. } => *p,
            BaseField::Reals => 0,
        }
    }

    /// Least quadratic nonresidue `s(p)`, or `-1` over the reals.
    pub fn nonresidue(&self) -> FieldElem {
        match self {
            BaseField::Prime { nonresidue, .. } => FieldElem::Mod(*nonresidue),
            BaseField::Reals => FieldElem::Rat(-BigRational::one()),
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, a: i64) -> FieldElem {
        match self {
            BaseField::Prime { p, .. } => FieldElem::Mod(a.rem_euclid(*p as i64) as u64),
            BaseField::Reals => FieldElem::Rat(BigRational::from_integer(a.into())),
        }
    }

    pub fn from_bigint(&self, a: &BigInt) -> FieldElem {
        match self {
            BaseField::Prime { p, .. } => {
                let r = a.mod_floor(&BigInt::from(*p));
                FieldElem::Mod(r.to_u64().expect("residue below p"))
            }
            BaseField::Reals => FieldElem::Rat(BigRational::from_integer(a.clone())),
        }
    }

    /// `num / den`, or `None` when `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<FieldElem> {
        let d = self.from_bigint(den);
        let inv = self.inv(&d)?;
        Some(self.mul(&self.from_bigint(num), &inv))
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Mod(x) => *x == 0,
            FieldElem::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Mod(x) => *x == 1,
            FieldElem::Rat(x) => x.is_one(),
        }
    }

    /// Whether `a` is a canonical element of this field.
    pub fn contains(&self, a: &FieldElem) -> bool {
        match (self, a) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x)) => x < p,
            (BaseField::Reals, FieldElem::Rat(_)) => true,
            _ => false,
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x), FieldElem::Mod(y)) => {
                FieldElem::Mod((x + y) % p)
            }
            (BaseField::Reals, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (self, a) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x)) => FieldElem::Mod((p - x) % p),
            (BaseField::Reals, FieldElem::Rat(x)) => FieldElem::Rat(-x),
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x), FieldElem::Mod(y)) => {
                FieldElem::Mod(x * y % p)
            }
            (BaseField::Reals, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x)) => FieldElem::Mod(mod_pow(*x, p - 2, *p)),
            (BaseField::Reals, FieldElem::Rat(x)) => FieldElem::Rat(x.recip()),
            _ => panic!("field element does not belong to {self:?}"),
        })
    }

    pub fn pow(&self, a: &FieldElem, e: i64) -> Option<FieldElem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut exp = e.unsigned_abs();
        Some(match (self, &base) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x)) => FieldElem::Mod(mod_pow(*x, exp, *p)),
            _ => {
                let mut acc = self.one();
                let mut sq = base;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = self.mul(&acc, &sq);
                    }
                    exp >>= 1;
                    if exp > 0 {
                        sq = self.mul(&sq, &sq);
                    }
                }
                acc
            }
        })
    }

    /// Square class of a nonzero element.
    pub fn sq_class(&self, a: &FieldElem) -> Result<SquareClass> {
        Ok(SquareClass {
            field: *self,
            nonsquare: !self.is_square(a)?,
        })
    }

    pub fn is_square(&self, a: &FieldElem) -> Result<bool> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        Ok(match (self, a) {
            (BaseField::Prime { p, .. }, FieldElem::Mod(x)) => euler_is_square(*x, *p),
            (BaseField::Reals, FieldElem::Rat(x)) => x.is_positive(),
            _ => panic!("field element does not belong to {self:?}"),
        })
    }

    /// Canonical text of an element: residue in `[0, p)` or a reduced fraction.
    pub fn render(&self, a: &FieldElem) -> String {
        match a {
            FieldElem::Mod(x) => x.to_string(),
            FieldElem::Rat(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
        }
    }

    /// Value of the diagonal form with coefficients `coeffs` at `v`, over `F_p`.
    fn eval_diag_mod(p: u64, coeffs: &[u64], v: &[u64]) -> u64 {
        coeffs
            .iter()
            .zip(v)
            .fold(0, |acc, (a, x)| (acc + a * (x * x % p)) % p)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Prime { p, .. } => write!(f, "Fp:{p}"),
            BaseField::Reals => write!(f, "R"),
        }
    }
}

/// An element of `k^× / (k^×)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    field: BaseField,
    nonsquare: bool,
}

impl SquareClass {
    pub fn identity(field: BaseField) -> Self {
        SquareClass {
            field,
            nonsquare: false,
        }
    }

    pub fn nontrivial(field: BaseField) -> Self {
        SquareClass {
            field,
            nonsquare: true,
        }
    }

    /// Class of `-1`.
    pub fn minus_one(field: BaseField) -> Self {
        field
            .sq_class(&field.from_i64(-1))
            .expect("-1 is nonzero in odd characteristic")
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_identity(&self) -> bool {
        !self.nonsquare
    }

    pub fn mul(self, other: SquareClass) -> SquareClass {
        debug_assert_eq!(self.field, other.field);
        SquareClass {
            field: self.field,
            nonsquare: self.nonsquare ^ other.nonsquare,
        }
    }

    pub fn neg(self) -> SquareClass {
        self.mul(SquareClass::minus_one(self.field))
    }

    /// Canonical representative: `1` or `s(p)` over `F_p`, `±1` over the reals.
    pub fn rep(&self) -> FieldElem {
        if self.nonsquare {
            self.field.nonresidue()
        } else {
            self.field.one()
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.render(&self.rep()))
    }
}

/// A regular diagonal form over the base field, entries sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseForm {
    field: BaseField,
    entries: Vec<SquareClass>,
}

impl BaseForm {
    pub fn new(field: BaseField, mut entries: Vec<SquareClass>) -> Result<Self> {
        if entries.iter().any(|c| c.field != field) {
            return Err(Error::FieldMismatch);
        }
        entries.sort();
        Ok(BaseForm { field, entries })
    }

    pub fn zero(field: BaseField) -> Self {
        BaseForm {
            field,
            entries: Vec::new(),
        }
    }

    /// Form with the given (nonzero) diagonal coefficients.
    pub fn from_elems(field: BaseField, elems: &[FieldElem]) -> Result<Self> {
        let entries = elems
            .iter()
            .map(|a| field.sq_class(a))
            .collect::<Result<Vec<_>>>()?;
        BaseForm::new(field, entries)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn entries(&self) -> &[SquareClass] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn orth_sum(&self, other: &BaseForm) -> Result<BaseForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        BaseForm::new(self.field, entries)
    }

    /// Product of the entries (the determinant's square class).
    pub fn determinant(&self) -> SquareClass {
        self.entries
            .iter()
            .fold(SquareClass::identity(self.field), |acc, c| acc.mul(*c))
    }

    pub fn witt_reduce(&self) -> BaseForm {
        base_witt_reduce(self)
    }

    pub fn is_isotropic(&self) -> bool {
        base_is_isotropic(self)
    }
}

impl fmt::Display for BaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("diag(")?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn cancel_hyperbolic_pair(entries: &mut Vec<SquareClass>) -> bool {
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            if entries[i].mul(entries[j]).neg().is_identity() {
                entries.remove(j);
                entries.remove(i);
                return true;
            }
        }
    }
    false
}

/// Locates a nonzero zero of `a x^2 + b y^2 + c z^2` over `F_p`.
///
/// Scans `x ∈ {0, 1}` and every `y`, solving for `z` with a square root.
fn find_isotropic_ternary(field: BaseField, coeffs: [u64; 3]) -> Option<[u64; 3]> {
    let BaseField::Prime { p, nonresidue } = field else {
        return None;
    };
    let [a, b, c] = coeffs;
    let c_inv = mod_pow(c, p - 2, p);
    for x in 0..2u64 {
        let ys: Box<dyn Iterator<Item = u64>> = if x == 0 {
            Box::new(std::iter::once(1))
        } else {
            Box::new(0..p)
        };
        for y in ys {
            let partial = (a * x * x + b * (y * y % p)) % p;
            let rhs = (p - partial) % p * c_inv % p;
            if rhs == 0 || euler_is_square(rhs, p) {
                let z = sqrt_mod(rhs, p, nonresidue);
                let v = [x, y, z];
                debug_assert_eq!(BaseField::eval_diag_mod(p, &coeffs, &v), 0);
                return Some(v);
            }
        }
    }
    None
}

/// Anisotropic kernel of `q` in canonical form.
///
/// Hyperbolic pairs `⟨a, b⟩` with `-ab` a square are cancelled; over `F_p`
/// any ternary subform is isotropic and is replaced by `⟨-abc⟩` once a zero
/// has been located. A surviving binary form over `F_p` is rewritten as
/// `⟨1, det⟩`, since binary forms over a finite field are determined by
/// their determinant.
pub fn base_witt_reduce(q: &BaseForm) -> BaseForm {
    let field = q.field;
    let mut entries = q.entries.clone();
    loop {
        if cancel_hyperbolic_pair(&mut entries) {
            continue;
        }
        if matches!(field, BaseField::Prime { .. }) && entries.len() >= 3 {
            let coeffs = [0, 1, 2].map(|i| match entries[i].rep() {
                FieldElem::Mod(x) => x,
                FieldElem::Rat(_) => unreachable!("prime field element"),
            });
            if find_isotropic_ternary(field, coeffs).is_some() {
                let det = entries[0].mul(entries[1]).mul(entries[2]);
                entries.drain(0..3);
                entries.push(det.neg());
                continue;
            }
        }
        break;
    }
    if matches!(field, BaseField::Prime { .. }) && entries.len() == 2 {
        let det = entries[0].mul(entries[1]);
        entries = vec![SquareClass::identity(field), det];
    }
    entries.sort();
    BaseForm { field, entries }
}

pub fn base_is_isotropic(q: &BaseForm) -> bool {
    base_witt_reduce(q).dim() < q.dim()
}

/// Exhaustive search for a nonzero isotropic vector over `F_p^dim`.
///
/// Vectors are enumerated lexicographically with the first coordinate most
/// significant; the first zero found is returned.
pub fn brute_force_isotropic(q: &BaseForm) -> Result<Option<Vec<u64>>> {
    let BaseField::Prime { p, .. } = q.field else {
        return Err(Error::FieldMismatch);
    };
    let dim = q.dim();
    let space = (p as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if space > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpaceTooLarge(space));
    }
    let coeffs: Vec<u64> = q
        .entries
        .iter()
        .map(|c| match c.rep() {
            FieldElem::Mod(x) => x,
            FieldElem::Rat(_) => unreachable!("prime field element"),
        })
        .collect();
    let mut v = vec![0u64; dim];
    // Skip the zero vector by advancing before testing.
    loop {
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
        }
        if BaseField::eval_diag_mod(p, &coeffs, &v) == 0 {
            return Ok(Some(v));
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElem::Mod(a), FieldElem::Mod(b)) => a.cmp(b),
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a.cmp(b),
            (FieldElem::Mod(_), FieldElem::Rat(_)) => Ordering::Less,
            (FieldElem::Rat(_), FieldElem::Mod(_)) => Ordering::Greater,
        }
    }
}
