//! Diagonalization and Witt invariants of quadratic forms over `F_n`.
//!
//! A regular diagonal form over `F_n = k((t_1))…((t_n))` is determined up to
//! isometry by the square classes of its entries. Splitting the entries by
//! the parity of their `t_n`-exponent gives the two projections of Springer's
//! isomorphism `W(F_n) ≅ W(F_{n-1}) ⊕ W(F_{n-1})` (specialization and
//! residue); iterating down the tower assigns to every subset
//! `I ⊆ {1, …, n}` an anisotropic form over `k`. Those `2^n` base forms
//! together with the rank decide isometry.

use std::fmt;

use crate::basefield::{base_witt_reduce, BaseField, BaseForm, SquareClass};
use crate::error::{Error, Result};
use crate::laurent::{check_vars, Frac, LaurentPoly, SqClassFn};

/// A symmetric matrix with entries in the fraction field of `R_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    field: BaseField,
    n: usize,
    size: usize,
    entries: Vec<Frac>,
}

impl SymMatrix {
    pub fn new(field: BaseField, n: usize, rows: Vec<Vec<Frac>>) -> Result<Self> {
        check_vars(n)?;
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::NotSquare);
        }
        let entries: Vec<Frac> = rows.into_iter().flatten().collect();
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch);
            }
            if e.vars() != n {
                return Err(Error::ArityMismatch(n, e.vars()));
            }
        }
        let m = SymMatrix {
            field,
            n,
            size,
            entries,
        };
        for i in 0..size {
            for j in (i + 1)..size {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(m)
    }

    pub fn from_polys(field: BaseField, n: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Frac::from_poly).collect())
            .collect();
        Self::new(field, n, rows)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: BaseField, n: usize, diag: Vec<Frac>) -> Result<Self> {
        let size = diag.len();
        let mut rows = vec![vec![Frac::zero(field, n); size]; size];
        for (i, d) in diag.into_iter().enumerate() {
            rows[i][i] = d;
        }
        Self::new(field, n, rows)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Frac {
        &self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Frac]> {
        self.entries.chunks(self.size.max(1)).take(self.size)
    }

    /// `Pᵀ · self · P` for a square `P` of matching size.
    pub fn congruent(&self, p: &[Vec<Frac>]) -> Result<SymMatrix> {
        if p.len() != self.size || p.iter().any(|r| r.len() != self.size) {
            return Err(Error::NotSquare);
        }
        let n = self.size;
        let zero = Frac::zero(self.field, self.n);
        // AP first, then Pᵀ(AP).
        let mut ap = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    if !self.get(i, k).is_zero() && !p[k][j].is_zero() {
                        acc = acc.add(&self.get(i, k).mul(&p[k][j])?)?;
                    }
                }
                ap[i][j] = acc;
            }
        }
        let mut out = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    if !p[k][i].is_zero() && !ap[k][j].is_zero() {
                        acc = acc.add(&p[k][i].mul(&ap[k][j])?)?;
                    }
                }
                out[i][j] = acc;
            }
        }
        SymMatrix::new(self.field, self.n, out)
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// A regular diagonal form over `F_n`, one square class per entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagForm {
    field: BaseField,
    n: usize,
    entries: Vec<SqClassFn>,
}

impl DiagForm {
    pub fn new(field: BaseField, n: usize, entries: Vec<SqClassFn>) -> Result<Self> {
        check_vars(n)?;
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch);
            }
            if e.vars() != n {
                return Err(Error::AmbientMismatch);
            }
        }
        Ok(DiagForm { field, n, entries })
    }

    pub fn empty(field: BaseField, n: usize) -> Self {
        DiagForm {
            field,
            n,
            entries: Vec::new(),
        }
    }

    /// `⟨f_1, …, f_N⟩` for nonzero quotients `f_i`.
    pub fn from_fracs(field: BaseField, n: usize, entries: &[Frac]) -> Result<Self> {
        let classes = entries
            .iter()
            .map(|f| {
                if f.is_zero() {
                    Err(Error::DegenerateForm)
                } else {
                    f.sq_class_fn()
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, n, classes)
    }

    /// Constant form `⟨q⟩` lifted from the base field.
    pub fn from_base(n: usize, q: &BaseForm) -> Self {
        DiagForm {
            field: q.field(),
            n,
            entries: q
                .entries()
                .iter()
                .map(|c| SqClassFn::constant(n, *c))
                .collect(),
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[SqClassFn] {
        &self.entries
    }

    /// Product of all entries (the discriminant's square class, unsigned).
    pub fn determinant(&self) -> SqClassFn {
        self.entries
            .iter()
            .fold(SqClassFn::identity(self.field, self.n), |acc, e| acc.mul(*e))
    }

    /// Diagonal Gram matrix of the monomial lift of each entry.
    pub fn to_matrix(&self) -> SymMatrix {
        let diag = self.entries.iter().map(|e| Frac::from_poly(e.lift())).collect();
        SymMatrix::diagonal(self.field, self.n, diag).expect("diagonal is symmetric")
    }

    fn same_ambient(&self, other: &DiagForm) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("diag(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Witt class of a form over `F_n`: one anisotropic base form per subset.
///
/// Component `I` (a bitmask, bit `i` for `t_{i+1}`) collects the entries
/// whose valuation parity is `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittClass {
    field: BaseField,
    n: usize,
    components: Vec<BaseForm>,
}

impl WittClass {
    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn component(&self, subset: u32) -> &BaseForm {
        &self.components[subset as usize]
    }

    /// `(subset, component)` pairs in ascending bitmask order.
    pub fn components(&self) -> impl Iterator<Item = (u32, &BaseForm)> {
        self.components.iter().enumerate().map(|(i, c)| (i as u32, c))
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(BaseForm::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(BaseForm::is_empty)
    }

    /// The canonical anisotropic diagonal form in this class:
    /// `⊥_I ⟨t_I⟩ ⊗ q_I`, subsets ascending, entries in class order.
    pub fn to_form(&self) -> DiagForm {
        let entries = self
            .components()
            .flat_map(|(mask, q)| {
                q.entries()
                    .iter()
                    .map(move |c| SqClassFn::new(self.n, mask, *c).expect("mask in range"))
            })
            .collect();
        DiagForm {
            field: self.field,
            n: self.n,
            entries,
        }
    }

    pub(crate) fn from_components(field: BaseField, n: usize, components: Vec<BaseForm>) -> Self {
        debug_assert_eq!(components.len(), 1 << n);
        WittClass {
            field,
            n,
            components,
        }
    }
}

/// Subset bitmask as a sorted list of 1-based variable indices.
pub fn subset_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn fmt_subset(f: &mut fmt::Formatter<'_>, mask: u32) -> fmt::Result {
    let idx: Vec<String> = subset_indices(mask).iter().map(|i| i.to_string()).collect();
    write!(f, "{{{}}}", idx.join(","))
}

/// Every component, e.g. `{{}: diag(3), {1}: diag()}`.
impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (mask, q)) in self.components().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            fmt_subset(f, mask)?;
            write!(f, ": {q}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn write_components(
    f: &mut fmt::Formatter<'_>,
    comps: impl Iterator<Item = (u32, BaseForm)>,
) -> fmt::Result {
    f.write_str("{")?;
    for (i, (mask, q)) in comps.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        fmt_subset(f, mask)?;
        write!(f, ": {q}")?;
    }
    f.write_str("}")
}

/// Congruence certificate: `P` together with an exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeOfBasis {
    size: usize,
    matrix: Vec<Vec<Frac>>,
    inverse: Vec<Vec<Frac>>,
}

impl ChangeOfBasis {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self) -> &[Vec<Frac>] {
        &self.matrix
    }

    pub fn inverse(&self) -> &[Vec<Frac>] {
        &self.inverse
    }

    /// Checks `P⁻¹ · P = I` exactly.
    pub fn verify(&self) -> Result<bool> {
        for i in 0..self.size {
            for j in 0..self.size {
                let mut acc: Option<Frac> = None;
                for k in 0..self.size {
                    let term = self.inverse[i][k].mul(&self.matrix[k][j])?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                let acc = acc.expect("nonempty");
                let ok = if i == j {
                    acc.sub(&Frac::one(acc.field(), acc.vars()))?.is_zero()
                } else {
                    acc.is_zero()
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Result of [`diagonalize`]: `Pᵀ A P = diag(diagonal)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub form: DiagForm,
    pub diagonal: Vec<Frac>,
    pub basis: ChangeOfBasis,
}

/// Fraction-free determinant (Bareiss) with exact Laurent division.
pub fn determinant(field: BaseField, n: usize, mut m: Vec<Vec<LaurentPoly>>) -> Result<LaurentPoly> {
    let k = m.len();
    if k == 0 {
        return Ok(LaurentPoly::one(field, n));
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one(field, n);
    for i in 0..k - 1 {
        if m[i][i].is_zero() {
            match (i + 1..k).find(|&r| !m[r][i].is_zero()) {
                Some(r) => {
                    m.swap(i, r);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero(field, n)),
            }
        }
        for r in i + 1..k {
            for c in i + 1..k {
                let num = m[i][i].mul(&m[r][c])?.sub(&m[r][i].mul(&m[i][c])?)?;
                m[r][c] = num.exact_div(&prev)?;
            }
        }
        prev = m[i][i].clone();
    }
    let d = m[k - 1][k - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

struct Gram<'a> {
    field: BaseField,
    n: usize,
    g: &'a [Vec<LaurentPoly>],
}

impl Gram<'_> {
    fn pair(&self, u: &[i64], v: &[i64]) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.field, self.n);
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0 {
                continue;
            }
            for (b, &vb) in v.iter().enumerate() {
                if vb == 0 || self.g[a][b].is_zero() {
                    continue;
                }
                let c = self.field.from_i64(ua * vb);
                acc = acc.add(&self.g[a][b].scale(&c))?;
            }
        }
        Ok(acc)
    }

    /// `det` of the Gram matrix with rows `chosen ∪ {u}` and columns `chosen ∪ {v}`.
    fn bordered(&self, chosen: &[Vec<i64>], u: &[i64], v: &[i64]) -> Result<LaurentPoly> {
        let rows: Vec<&[i64]> = chosen.iter().map(Vec::as_slice).chain([u]).collect();
        let cols: Vec<&[i64]> = chosen.iter().map(Vec::as_slice).chain([v]).collect();
        let m = rows
            .iter()
            .map(|r| cols.iter().map(|c| self.pair(r, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        determinant(self.field, self.n, m)
    }
}

/// Congruence diagonalization with an exact certificate.
///
/// Denominators are cleared by a scalar congruence `c·I`, leaving a Gram
/// matrix `G = c²A` over `R_n`. Basis vectors are then chosen greedily so
/// that every leading principal minor `M_k` of the reordered Gram matrix is
/// nonzero: the next vector is the first remaining one whose Schur
/// complement diagonal entry is nonzero; when all of those vanish, the
/// least pair `(i, j)` with nonzero Schur entry is merged via
/// `x_i → x_i + x_j`. With `H` the reordered Gram matrix, column `k` of `V`
/// is `adj(H_k) e_k`, so `VᵀHV = diag(M_{k-1} M_k)` and every entry of
/// `P = c·W·V` stays a Laurent polynomial.
pub fn diagonalize(a: &SymMatrix) -> Result<Diagonalization> {
    let field = a.field;
    let n = a.n;
    let size = a.size;
    if let Some(d) = diagonal_shortcut(a)? {
        return Ok(d);
    }

    let mut dens: Vec<LaurentPoly> = Vec::new();
    for e in &a.entries {
        if !e.den().is_one() && !dens.contains(e.den()) {
            dens.push(e.den().clone());
        }
    }
    let mut clear = LaurentPoly::one(field, n);
    for d in &dens {
        clear = clear.mul(d)?;
    }
    let mut g = vec![vec![LaurentPoly::zero(field, n); size]; size];
    for i in 0..size {
        for j in 0..size {
            let e = a.get(i, j);
            let mut v = e.num().mul(&clear)?;
            for d in &dens {
                if d != e.den() {
                    v = v.mul(d)?;
                }
            }
            g[i][j] = v;
        }
    }
    let gram = Gram { field, n, g: &g };

    let unit = |i: usize| -> Vec<i64> { (0..size).map(|j| i64::from(i == j)).collect() };
    let mut remaining: Vec<Vec<i64>> = (0..size).map(unit).collect();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    let mut minors = vec![LaurentPoly::one(field, n)];
    while !remaining.is_empty() {
        let mut pick = None;
        for (i, u) in remaining.iter().enumerate() {
            let m = gram.bordered(&chosen, u, u)?;
            if !m.is_zero() {
                pick = Some((i, m));
                break;
            }
        }
        if pick.is_none() {
            'pairs: for i in 0..remaining.len() {
                for j in i + 1..remaining.len() {
                    if !gram.bordered(&chosen, &remaining[i], &remaining[j])?.is_zero() {
                        let merged: Vec<i64> = remaining[i]
                            .iter()
                            .zip(&remaining[j])
                            .map(|(x, y)| x + y)
                            .collect();
                        remaining[i] = merged;
                        let m = gram.bordered(&chosen, &remaining[i], &remaining[i])?;
                        debug_assert!(!m.is_zero(), "2·s_ij is nonzero in odd characteristic");
                        pick = Some((i, m));
                        break 'pairs;
                    }
                }
            }
        }
        let (i, m) = pick.ok_or(Error::DegenerateForm)?;
        chosen.push(remaining.remove(i));
        minors.push(m);
    }

    // Reordered Gram matrix H = WᵀGW.
    let h = chosen
        .iter()
        .map(|u| chosen.iter().map(|v| gram.pair(u, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    // V[l][k] = (-1)^{k+l} det(H_k without row k, column l), l ≤ k.
    let mut v = vec![vec![LaurentPoly::zero(field, n); size]; size];
    for k in 0..size {
        for l in 0..=k {
            let sub: Vec<Vec<LaurentPoly>> = (0..=k)
                .filter(|&r| r != k)
                .map(|r| {
                    (0..=k)
                        .filter(|&c| c != l)
                        .map(|c| h[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = determinant(field, n, sub)?;
            v[l][k] = if (k + l) % 2 == 1 { cof.neg() } else { cof };
        }
    }

    // WV[a][k] = Σ_l chosen[l][a] · V[l][k]
    let mut wv = vec![vec![LaurentPoly::zero(field, n); size]; size];
    for (row, out) in wv.iter_mut().enumerate() {
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = LaurentPoly::zero(field, n);
            for (l, w) in chosen.iter().enumerate() {
                if w[row] != 0 {
                    acc = acc.add(&v[l][k].scale(&field.from_i64(w[row])))?;
                }
            }
            *slot = acc;
        }
    }

    let diagonal: Vec<LaurentPoly> = (0..size)
        .map(|k| minors[k].mul(&minors[k + 1]))
        .collect::<Result<_>>()?;
    let classes = (0..size)
        .map(|k| Ok(minors[k].sq_class_fn()?.mul(minors[k + 1].sq_class_fn()?)))
        .collect::<Result<Vec<_>>>()?;

    let matrix: Vec<Vec<Frac>> = wv
        .iter()
        .map(|row| row.iter().map(|x| Frac::from_poly(x.mul(&clear).expect("same ring"))).collect())
        .collect();

    // P⁻¹ = D⁻¹ (WV)ᵀ G / c.
    let mut inverse = vec![vec![Frac::zero(field, n); size]; size];
    for k in 0..size {
        let den = clear.mul(&diagonal[k])?;
        for j in 0..size {
            let mut acc = LaurentPoly::zero(field, n);
            for row in 0..size {
                if !wv[row][k].is_zero() && !g[row][j].is_zero() {
                    acc = acc.add(&wv[row][k].mul(&g[row][j])?)?;
                }
            }
            inverse[k][j] = Frac::new(acc, den.clone())?;
        }
    }

    Ok(Diagonalization {
        form: DiagForm::new(field, n, classes)?,
        diagonal: diagonal.into_iter().map(Frac::from_poly).collect(),
        basis: ChangeOfBasis {
            size,
            matrix,
            inverse,
        },
    })
}

/// Already-diagonal input: `P = I`.
fn diagonal_shortcut(a: &SymMatrix) -> Result<Option<Diagonalization>> {
    let size = a.size;
    let off_diagonal_zero = (0..size).all(|i| (0..size).all(|j| i == j || a.get(i, j).is_zero()));
    if !off_diagonal_zero {
        return Ok(None);
    }
    let diagonal: Vec<Frac> = (0..size).map(|i| a.get(i, i).clone()).collect();
    let form = DiagForm::from_fracs(a.field, a.n, &diagonal)?;
    let identity: Vec<Vec<Frac>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { Frac::one(a.field, a.n) } else { Frac::zero(a.field, a.n) })
                .collect()
        })
        .collect();
    Ok(Some(Diagonalization {
        form,
        diagonal,
        basis: ChangeOfBasis {
            size,
            matrix: identity.clone(),
            inverse: identity,
        },
    }))
}

/// Specialization and residue along `t_n`.
///
/// Entries with even `t_n`-parity go to the specialization, odd ones (divided
/// by `t_n`) to the residue; both are forms over `F_{n-1}`. Only the
/// outermost level `level == n` is accepted.
pub fn residue_pair(q: &DiagForm, level: usize) -> Result<(DiagForm, DiagForm)> {
    let n = q.n;
    if n == 0 || level != n {
        return Err(Error::LevelOutOfRange { level, vars: n });
    }
    let bit = 1u32 << (n - 1);
    let mut even = Vec::new();
    let mut res = Vec::new();
    for e in &q.entries {
        let stripped = SqClassFn::new(n - 1, e.parity() & !bit, e.base())?;
        if e.parity() & bit == 0 {
            even.push(stripped);
        } else {
            res.push(stripped);
        }
    }
    Ok((
        DiagForm::new(q.field, n - 1, even)?,
        DiagForm::new(q.field, n - 1, res)?,
    ))
}

fn components(q: &DiagForm) -> Vec<BaseForm> {
    if q.n == 0 {
        let base = BaseForm::new(q.field, q.entries.iter().map(|e| e.base()).collect())
            .expect("entries share the field");
        return vec![base_witt_reduce(&base)];
    }
    let (even, res) = residue_pair(q, q.n).expect("outermost level");
    let mut out = components(&even);
    out.extend(components(&res));
    out
}

pub fn witt_class(q: &DiagForm) -> WittClass {
    WittClass::from_components(q.field, q.n, components(q))
}

pub fn witt_index(q: &DiagForm) -> usize {
    (q.dim() - witt_class(q).total_dim()) / 2
}

pub fn is_anisotropic(q: &DiagForm) -> bool {
    witt_index(q) == 0
}

pub fn is_isometric(q: &DiagForm, other: &DiagForm) -> Result<bool> {
    q.same_ambient(other)?;
    Ok(q.dim() == other.dim() && witt_class(q) == witt_class(other))
}

/// `q ≅ q0 ⊥ H^c` with `q0` the canonical anisotropic representative.
pub fn witt_decompose(q: &DiagForm) -> (DiagForm, usize) {
    let class = witt_class(q);
    let c = (q.dim() - class.total_dim()) / 2;
    (class.to_form(), c)
}

pub fn orth_sum(q: &DiagForm, other: &DiagForm) -> Result<DiagForm> {
    q.same_ambient(other)?;
    let mut entries = q.entries.clone();
    entries.extend_from_slice(&other.entries);
    Ok(DiagForm {
        field: q.field,
        n: q.n,
        entries,
    })
}

pub fn scale(a: SqClassFn, q: &DiagForm) -> Result<DiagForm> {
    if a.field() != q.field || a.vars() != q.n {
        return Err(Error::AmbientMismatch);
    }
    Ok(DiagForm {
        field: q.field,
        n: q.n,
        entries: q.entries.iter().map(|e| a.mul(*e)).collect(),
    })
}

/// `H^c`: `c` copies of `⟨1, -1⟩`.
pub fn hyperbolic(field: BaseField, n: usize, c: usize) -> DiagForm {
    let one = SqClassFn::constant(n, SquareClass::identity(field));
    let minus = SqClassFn::constant(n, SquareClass::minus_one(field));
    DiagForm {
        field,
        n,
        entries: (0..c).flat_map(|_| [one, minus]).collect(),
    }
}
