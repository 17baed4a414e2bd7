//! Tame loop quadratic forms: construction from base-field components,
//! component recovery, and classification.
//!
//! In the Laurent model the loop forms of rank `N` are exactly the diagonal
//! forms `⊥_I ⟨t_I⟩ ⊗ q_I` with `q_I` forms over `k` and `t_I = ∏_{i∈I} t_i`.
//! Two of them are isometric iff they have the same rank and the same Witt
//! class; the classification below relies on that injectivity statement
//! rather than searching for explicit isometries.

use std::fmt;

use crate::basefield::{base_is_isotropic, base_witt_reduce, BaseField, BaseForm};
use crate::error::{Error, Result};
use crate::laurent::{check_vars, SqClassFn};
use crate::wittcore::{
    diagonalize, hyperbolic, orth_sum, witt_class, write_components, DiagForm, SymMatrix,
    WittClass,
};

/// One base form per subset `I ⊆ {1, …, n}`, not necessarily anisotropic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopComponents {
    field: BaseField,
    n: usize,
    components: Vec<BaseForm>,
}

impl LoopComponents {
    /// All components empty.
    pub fn empty(field: BaseField, n: usize) -> Result<Self> {
        check_vars(n)?;
        Ok(LoopComponents {
            field,
            n,
            components: vec![BaseForm::zero(field); 1 << n],
        })
    }

    /// Components from `(subset bitmask, form)` pairs; unlisted subsets are
    /// empty and a repeated subset keeps its last form.
    pub fn new(
        field: BaseField,
        n: usize,
        parts: impl IntoIterator<Item = (u32, BaseForm)>,
    ) -> Result<Self> {
        let mut out = Self::empty(field, n)?;
        for (mask, q) in parts {
            out.set(mask, q)?;
        }
        Ok(out)
    }

    pub fn set(&mut self, mask: u32, q: BaseForm) -> Result<()> {
        if q.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let slot = self
            .components
            .get_mut(mask as usize)
            .ok_or_else(|| Error::BadExponent(format!("subset {mask:#b} exceeds {} variables", self.n)))?;
        *slot = q;
        Ok(())
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn component(&self, mask: u32) -> &BaseForm {
        &self.components[mask as usize]
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &BaseForm)> {
        self.components.iter().enumerate().map(|(i, c)| (i as u32, c))
    }

    /// Componentwise Witt reduction; for anisotropic data this is the
    /// canonical form of each component.
    pub fn reduced(&self) -> WittClass {
        WittClass::from_components(
            self.field,
            self.n,
            self.components.iter().map(base_witt_reduce).collect(),
        )
    }
}

impl fmt::Display for LoopComponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_components(f, self.components().map(|(m, q)| (m, q.clone())))
    }
}

impl From<&WittClass> for LoopComponents {
    fn from(w: &WittClass) -> Self {
        LoopComponents {
            field: w.field(),
            n: w.vars(),
            components: w.components().map(|(_, q)| q.clone()).collect(),
        }
    }
}

/// `⊥_I ⟨t_I⟩ ⊗ q_I`, subsets in ascending bitmask order.
pub fn build_loop_form(cs: &LoopComponents) -> DiagForm {
    let entries = cs
        .components()
        .flat_map(|(mask, q)| {
            q.entries()
                .iter()
                .map(move |c| SqClassFn::new(cs.n, mask, *c).expect("mask in range"))
        })
        .collect();
    DiagForm::new(cs.field, cs.n, entries).expect("entries share the ambient")
}

/// The anisotropic components `(q_I)` of a form; inverse to
/// [`build_loop_form`] on anisotropic data.
pub fn components_of(q: &DiagForm) -> WittClass {
    witt_class(q)
}

/// A loop form is anisotropic over `F_n` iff every `q_I` is anisotropic over `k`.
pub fn loop_is_anisotropic(cs: &LoopComponents) -> bool {
    cs.components.iter().all(|q| !base_is_isotropic(q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Isometric,
    DistinctRank { left: usize, right: usize },
    /// Every subset whose Witt components differ, ascending.
    DistinctWittClass { witnesses: Vec<u32> },
}

impl Verdict {
    pub fn is_isometric(&self) -> bool {
        matches!(self, Verdict::Isometric)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Isometric => f.write_str("Isometric"),
            Verdict::DistinctRank { left, right } => write!(f, "DistinctRank({left}, {right})"),
            Verdict::DistinctWittClass { witnesses } => {
                let ws: Vec<String> = witnesses
                    .iter()
                    .map(|&m| {
                        let idx: Vec<String> = crate::wittcore::subset_indices(m)
                            .iter()
                            .map(|i| i.to_string())
                            .collect();
                        format!("{{{}}}", idx.join(","))
                    })
                    .collect();
                write!(f, "DistinctWittClass({})", ws.join(", "))
            }
        }
    }
}

pub fn classify(q: &DiagForm, other: &DiagForm) -> Result<Verdict> {
    if q.field() != other.field() || q.vars() != other.vars() {
        return Err(Error::AmbientMismatch);
    }
    if q.dim() != other.dim() {
        return Ok(Verdict::DistinctRank {
            left: q.dim(),
            right: other.dim(),
        });
    }
    let (a, b) = (witt_class(q), witt_class(other));
    let witnesses: Vec<u32> = a
        .components()
        .zip(b.components())
        .filter(|((_, x), (_, y))| x != y)
        .map(|((m, _), _)| m)
        .collect();
    Ok(if witnesses.is_empty() {
        Verdict::Isometric
    } else {
        Verdict::DistinctWittClass { witnesses }
    })
}

/// Canonical rank-`N` representative of a nondegenerate symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Anisotropic part followed by `H^index`.
    pub form: DiagForm,
    pub class: WittClass,
    pub index: usize,
}

pub fn normal_form(a: &SymMatrix) -> Result<NormalForm> {
    let d = diagonalize(a)?;
    Ok(normal_form_of(&d.form))
}

pub fn normal_form_of(q: &DiagForm) -> NormalForm {
    let class = witt_class(q);
    let index = (q.dim() - class.total_dim()) / 2;
    let form = orth_sum(&class.to_form(), &hyperbolic(q.field(), q.vars(), index))
        .expect("same ambient");
    NormalForm { form, class, index }
}
