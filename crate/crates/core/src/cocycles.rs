//! Loop cocycles on the Galois groups of basic tame covers.
//!
//! Adjoining `m`-th roots of `t_1, …, t_r` (and possibly a quadratic
//! extension `l/k`) gives the finite group `(Z/m)^r ⋊ Z/e`, the arithmetic
//! generator acting on each `Z/m` by negation (its action on `μ_m`). A loop
//! cocycle with values in an abelian group splits into an arithmetic part
//! (the restriction to `Z/e`) and a geometric part (the restriction to
//! `(Z/m)^r`), and the pair determines the cocycle. For the diagonal
//! subgroup `μ_2^N` of `O(N)` a purely geometric cocycle is the same thing
//! as a diagonal loop form `⟨u_j t^{E_j}⟩`.
//!
//! Group elements are indexed with `a_1` varying fastest and the arithmetic
//! component slowest: `index = a_1 + m a_2 + … + m^r s`.

use std::fmt;

use num_integer::Integer;

use crate::basefield::{BaseField, SquareClass};
use crate::error::{Error, Result};
use crate::laurent::SqClassFn;
use crate::loopforms::{classify, Verdict};
use crate::wittcore::{is_anisotropic, DiagForm};

/// Cap on group and target orders; validation is quadratic in the group order.
pub const MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TameGaloisGroup {
    m: u32,
    r: usize,
    e: u32,
}

/// `(Z/m)^r ⋊ Z/e`, checked against the base field when one is given.
///
/// Over `F_p` the cover must be tame (`p ∤ m`); with `e = 1` the roots of
/// unity must already lie in `F_p` (`m | p - 1`), with `e = 2` Frobenius must
/// act on them by inversion (`m | p + 1`). Over the reals `e = 1` forces
/// `m ≤ 2`.
pub fn make_group(m: u32, r: usize, e: u32, field: Option<BaseField>) -> Result<TameGaloisGroup> {
    if m == 0 {
        return Err(Error::BadExponent("m must be at least 1".into()));
    }
    if r == 0 {
        return Err(Error::BadExponent("r must be at least 1".into()));
    }
    if e != 1 && e != 2 {
        return Err(Error::BadExponent(format!("e must be 1 or 2, got {e}")));
    }
    let order = (m as usize)
        .checked_pow(r as u32)
        .and_then(|x| x.checked_mul(e as usize))
        .filter(|&o| o <= MAX_ORDER)
        .ok_or_else(|| Error::BadExponent(format!("group order exceeds {MAX_ORDER}")))?;
    debug_assert!(order >= 1);
    match field {
        Some(BaseField::Prime { p, .. }) => {
            if (m as u64).gcd(&p) != 1 {
                return Err(Error::BadExponent(format!("m = {m} is not prime to p = {p}")));
            }
            if e == 1 && (p - 1) % m as u64 != 0 {
                return Err(Error::NonSplitData(format!("{m} does not divide p - 1 = {}", p - 1)));
            }
            if e == 2 && (p + 1) % m as u64 != 0 {
                return Err(Error::NonSplitData(format!(
                    "Frobenius does not invert mu_{m}: {m} does not divide p + 1 = {}",
                    p + 1
                )));
            }
        }
        Some(BaseField::Reals) if e == 1 && m > 2 => {
            return Err(Error::NonSplitData(format!("mu_{m} is not contained in R")));
        }
        _ => {}
    }
    Ok(TameGaloisGroup { m, r, e })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub geometric: Vec<u32>,
    pub arithmetic: u32,
}

impl TameGaloisGroup {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn geometric_order(&self) -> usize {
        (self.m as usize).pow(self.r as u32)
    }

    pub fn order(&self) -> usize {
        self.geometric_order() * self.e as usize
    }

    pub fn element(&self, index: usize) -> GroupElem {
        let geo = self.geometric_order();
        let mut rest = index % geo;
        let geometric = (0..self.r)
            .map(|_| {
                let a = (rest % self.m as usize) as u32;
                rest /= self.m as usize;
                a
            })
            .collect();
        GroupElem {
            geometric,
            arithmetic: (index / geo) as u32,
        }
    }

    pub fn index(&self, g: &GroupElem) -> usize {
        let geo = g
            .geometric
            .iter()
            .rev()
            .fold(0usize, |acc, &a| acc * self.m as usize + a as usize);
        geo + g.arithmetic as usize * self.geometric_order()
    }

    /// `(a, s)·(b, t) = (a + (-1)^s b, s + t)`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.element(x), self.element(y));
        let m = self.m;
        let geometric = a
            .geometric
            .iter()
            .zip(&b.geometric)
            .map(|(&u, &v)| {
                let v = if a.arithmetic % 2 == 1 { (m - v) % m } else { v };
                (u + v) % m
            })
            .collect();
        self.index(&GroupElem {
            geometric,
            arithmetic: (a.arithmetic + b.arithmetic) % self.e,
        })
    }

    fn arithmetic_of(&self, x: usize) -> u32 {
        (x / self.geometric_order()) as u32
    }
}

impl fmt::Display for TameGaloisGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}, r={}, e={}", self.m, self.r, self.e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Trivial,
    /// The arithmetic generator acts by `x ↦ -x`.
    Inversion,
}

/// A finite abelian group `Z/n_1 × … × Z/n_k`, written additively, with
/// the group acting through its arithmetic quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetGroup {
    moduli: Vec<u32>,
    action: Action,
}

impl TargetGroup {
    pub fn new(moduli: Vec<u32>, action: Action) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::BadExponent("target moduli must be positive".into()));
        }
        let order = moduli
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= MAX_ORDER);
        if order.is_none() {
            return Err(Error::BadExponent(format!("target order exceeds {MAX_ORDER}")));
        }
        Ok(TargetGroup { moduli, action })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn action(&self) -> Action {
        self.action
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&n| n as usize).product()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.moduli.len()]
    }

    pub fn element(&self, mut index: usize) -> Vec<u32> {
        self.moduli
            .iter()
            .map(|&n| {
                let x = (index % n as usize) as u32;
                index /= n as usize;
                x
            })
            .collect()
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        x.len() == self.moduli.len() && x.iter().zip(&self.moduli).all(|(a, n)| a < n)
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn neg(&self, x: &[u32]) -> Vec<u32> {
        x.iter().zip(&self.moduli).map(|(a, n)| (n - a) % n).collect()
    }

    /// Action of an element with arithmetic component `s`.
    pub fn act(&self, s: u32, x: &[u32]) -> Vec<u32> {
        match self.action {
            Action::Inversion if s % 2 == 1 => self.neg(x),
            _ => x.to_vec(),
        }
    }
}

/// A map from a tame Galois group to a target group, indexed by group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopCocycle {
    group: TameGaloisGroup,
    target: TargetGroup,
    values: Vec<Vec<u32>>,
}

impl LoopCocycle {
    /// A total map; the cocycle identity is not checked here.
    pub fn new(group: TameGaloisGroup, target: TargetGroup, values: Vec<Vec<u32>>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::BadExponent(format!(
                "expected {} values, got {}",
                group.order(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !target.contains(v)) {
            return Err(Error::BadExponent(format!("value {bad:?} is not in the target")));
        }
        Ok(LoopCocycle {
            group,
            target,
            values,
        })
    }

    pub fn group(&self) -> &TameGaloisGroup {
        &self.group
    }

    pub fn target(&self) -> &TargetGroup {
        &self.target
    }

    pub fn values(&self) -> &[Vec<u32>] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &[u32] {
        &self.values[index]
    }

    /// Replaces one value; used to build non-cocycles for testing.
    pub fn with_value(&self, index: usize, value: Vec<u32>) -> Result<Self> {
        let mut values = self.values.clone();
        *values
            .get_mut(index)
            .ok_or_else(|| Error::BadExponent(format!("no group element {index}")))? = value;
        LoopCocycle::new(self.group, self.target.clone(), values)
    }
}

/// The trivial cocycle.
pub fn trivial_cocycle(group: TameGaloisGroup, target: TargetGroup) -> LoopCocycle {
    let values = vec![target.zero(); group.order()];
    LoopCocycle {
        group,
        target,
        values,
    }
}

/// `σ ↦ -g + σ(g)`.
pub fn coboundary(group: TameGaloisGroup, target: TargetGroup, g: &[u32]) -> Result<LoopCocycle> {
    if !target.contains(g) {
        return Err(Error::BadExponent(format!("{g:?} is not in the target")));
    }
    let values = (0..group.order())
        .map(|x| target.add(&target.neg(g), &target.act(group.arithmetic_of(x), g)))
        .collect();
    LoopCocycle::new(group, target, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Valid,
    /// First pair (by index) with `φ(στ) ≠ φ(σ) + σ·φ(τ)`.
    Invalid { sigma: usize, tau: usize },
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// Exhaustive check of the cocycle identity.
pub fn validate_cocycle(phi: &LoopCocycle) -> Validation {
    let g = &phi.group;
    let t = &phi.target;
    for sigma in 0..g.order() {
        let s = g.arithmetic_of(sigma);
        for tau in 0..g.order() {
            let lhs = &phi.values[g.mul(sigma, tau)];
            let rhs = t.add(&phi.values[sigma], &t.act(s, &phi.values[tau]));
            if *lhs != rhs {
                return Validation::Invalid { sigma, tau };
            }
        }
    }
    Validation::Valid
}

/// Arithmetic and geometric restrictions of a loop cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleSplit {
    pub group: TameGaloisGroup,
    pub target: TargetGroup,
    /// Values on `(0, s)`, `s ∈ Z/e`.
    pub arithmetic: Vec<Vec<u32>>,
    /// Values on `(a, 0)`, `a ∈ (Z/m)^r`, in index order.
    pub geometric: Vec<Vec<u32>>,
}

pub fn split_cocycle(phi: &LoopCocycle) -> Result<CocycleSplit> {
    if let Validation::Invalid { sigma, tau } = validate_cocycle(phi) {
        return Err(Error::NotACocycle(format!(
            "identity fails at sigma = {sigma}, tau = {tau}"
        )));
    }
    let g = &phi.group;
    let geo = g.geometric_order();
    let split = CocycleSplit {
        group: *g,
        target: phi.target.clone(),
        arithmetic: (0..g.e as usize).map(|s| phi.values[s * geo].clone()).collect(),
        geometric: phi.values[..geo].to_vec(),
    };
    check_pair(&split)?;
    Ok(split)
}

/// Conditions on `(z, η)` for the pair to come from a cocycle: `z` is a
/// cocycle on `Z/e`, `η` is a homomorphism, and `η(s·a) = s·η(a)`.
fn check_pair(split: &CocycleSplit) -> Result<()> {
    let g = &split.group;
    let t = &split.target;
    let geo = g.geometric_order();
    if split.arithmetic.len() != g.e as usize || split.geometric.len() != geo {
        return Err(Error::NotACocycle("split has the wrong shape".into()));
    }
    if split
        .arithmetic
        .iter()
        .chain(&split.geometric)
        .any(|v| !t.contains(v))
    {
        return Err(Error::NotACocycle("split value outside the target".into()));
    }
    if split.arithmetic[0] != t.zero() || split.geometric[0] != t.zero() {
        return Err(Error::NotACocycle("nonzero value at the identity".into()));
    }
    if g.e == 2 {
        let z = &split.arithmetic[1];
        if t.add(z, &t.act(1, z)) != t.zero() {
            return Err(Error::NotACocycle("arithmetic part is not a cocycle".into()));
        }
    }
    for a in 0..geo {
        for b in 0..geo {
            let ab = g.mul(a, b);
            if split.geometric[ab] != t.add(&split.geometric[a], &split.geometric[b]) {
                return Err(Error::NotACocycle(format!(
                    "geometric part is not a homomorphism at ({a}, {b})"
                )));
            }
        }
        if g.e == 2 {
            let mut elem = g.element(a);
            elem.geometric = elem.geometric.iter().map(|&x| (g.m - x) % g.m).collect();
            let conj = g.index(&elem);
            if split.geometric[conj] != t.act(1, &split.geometric[a]) {
                return Err(Error::NotACocycle(format!(
                    "geometric part is not equivariant at {a}"
                )));
            }
        }
    }
    Ok(())
}

/// Inverse of [`split_cocycle`]: `φ(a, s) = η(a) + z(s)`.
pub fn recombine(split: &CocycleSplit) -> Result<LoopCocycle> {
    check_pair(split)?;
    let g = &split.group;
    let t = &split.target;
    let geo = g.geometric_order();
    let values = (0..g.order())
        .map(|x| t.add(&split.geometric[x % geo], &split.arithmetic[x / geo]))
        .collect();
    LoopCocycle::new(*g, t.clone(), values)
}

/// Purely geometric cocycle into the diagonal subgroup `μ_m^N`, together
/// with base-field unit classes: entry `j` is `⟨u_j t^{E_j}⟩` when `m = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalCocycle {
    group: TameGaloisGroup,
    field: BaseField,
    units: Vec<SquareClass>,
    exponents: Vec<Vec<u32>>,
}

impl DiagonalCocycle {
    pub fn new(
        group: TameGaloisGroup,
        field: BaseField,
        units: Vec<SquareClass>,
        exponents: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if units.len() != exponents.len() {
            return Err(Error::BadExponent(format!(
                "{} units but {} exponent rows",
                units.len(),
                exponents.len()
            )));
        }
        if units.iter().any(|u| u.field() != field) {
            return Err(Error::FieldMismatch);
        }
        for row in &exponents {
            if row.len() != group.r {
                return Err(Error::BadExponent(format!(
                    "exponent row {row:?} should have length {}",
                    group.r
                )));
            }
            if row.iter().any(|&x| x >= group.m) {
                return Err(Error::BadExponent(format!(
                    "exponent row {row:?} not reduced mod {}",
                    group.m
                )));
            }
        }
        Ok(DiagonalCocycle {
            group,
            field,
            units,
            exponents,
        })
    }

    pub fn group(&self) -> &TameGaloisGroup {
        &self.group
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn units(&self) -> &[SquareClass] {
        &self.units
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }

    /// The geometric homomorphism `a ↦ E·a` into `(Z/m)^N`, as a cocycle.
    pub fn to_loop_cocycle(&self) -> Result<LoopCocycle> {
        let g = self.group;
        let target = TargetGroup::new(vec![g.m; self.rank()], Action::Inversion)?;
        let values = (0..g.order())
            .map(|x| {
                let a = g.element(x).geometric;
                self.exponents
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&a)
                            .fold(0u64, |acc, (&e, &ai)| (acc + e as u64 * ai as u64) % g.m as u64)
                            as u32
                    })
                    .collect()
            })
            .collect();
        LoopCocycle::new(g, target, values)
    }
}

pub fn cocycle_to_diag_form(phi: &DiagonalCocycle) -> Result<DiagForm> {
    if phi.group.m != 2 {
        return Err(Error::BadExponent(format!(
            "diagonal forms need m = 2, got m = {}",
            phi.group.m
        )));
    }
    let n = phi.group.r;
    let entries = phi
        .units
        .iter()
        .zip(&phi.exponents)
        .map(|(u, row)| {
            let parity = row
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &x)| acc | (x << i));
            SqClassFn::new(n, parity, *u)
        })
        .collect::<Result<Vec<_>>>()?;
    DiagForm::new(phi.field, n, entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugacy {
    /// Both forms anisotropic and isometric.
    Conjugate,
    /// Both forms anisotropic, not isometric.
    NotConjugate(Verdict),
    /// Some form is isotropic, so only equality of classes is decided.
    ClassEqualityOnly(Verdict),
}

impl fmt::Display for Conjugacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjugacy::Conjugate => f.write_str("Conjugate"),
            Conjugacy::NotConjugate(v) => write!(f, "NotConjugate({v})"),
            Conjugacy::ClassEqualityOnly(v) => write!(f, "ClassEqualityOnly({v})"),
        }
    }
}

/// Conjugacy of the geometric parts of two diagonal `μ_2^N` cocycles,
/// decided through the isometry class of the associated forms. The
/// equivalence is only asserted when both forms are anisotropic; data that
/// agree up to a permutation of entries are conjugate by that permutation
/// in any case.
pub fn conjugacy_test(phi: &DiagonalCocycle, psi: &DiagonalCocycle) -> Result<Conjugacy> {
    let q = cocycle_to_diag_form(phi)?;
    let q2 = cocycle_to_diag_form(psi)?;
    let verdict = classify(&q, &q2)?;
    if phi.group == psi.group && phi.field == psi.field && sorted_data(phi) == sorted_data(psi) {
        return Ok(Conjugacy::Conjugate);
    }
    Ok(if is_anisotropic(&q) && is_anisotropic(&q2) {
        if verdict.is_isometric() {
            Conjugacy::Conjugate
        } else {
            Conjugacy::NotConjugate(verdict)
        }
    } else {
        Conjugacy::ClassEqualityOnly(verdict)
    })
}

fn sorted_data(phi: &DiagonalCocycle) -> Vec<(SquareClass, &[u32])> {
    let mut v: Vec<_> = phi
        .units
        .iter()
        .copied()
        .zip(phi.exponents.iter().map(Vec::as_slice))
        .collect();
    v.sort();
    v
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    write!(f, "({})", parts.join(", "))
}

/// `cocycle(m=2, r=1, e=1; target=(2), action=trivial, values=[(0), (1)])`
impl fmt::Display for LoopCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cocycle({}; target=", self.group)?;
        write_tuple(f, &self.target.moduli)?;
        let action = match self.target.action {
            Action::Trivial => "trivial",
            Action::Inversion => "inverse",
        };
        write!(f, ", action={action}, values=[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_tuple(f, v)?;
        }
        f.write_str("])")
    }
}

/// `cocycle(m=2, r=2, e=1; units=(1, 3), exps=[[0, 1], [1, 1]])`
impl fmt::Display for DiagonalCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cocycle({}; units=(", self.group)?;
        for (i, u) in self.units.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("), exps=[")?;
        for (i, row) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))?;
        }
        f.write_str("])")
    }
}
