//! Random generators and small independent oracles shared by the
//! integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use tamewitt::basefield::{base_witt_reduce, BaseField, BaseForm, FieldElem, SquareClass};
use tamewitt::laurent::{Frac, LaurentPoly, SqClassFn};
use tamewitt::loopforms::LoopComponents;
use tamewitt::wittcore::{DiagForm, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fp(p: u64) -> BaseField {
    BaseField::prime(p).unwrap()
}

pub fn small_prime(rng: &mut impl Rng) -> BaseField {
    fp(*[3u64, 5, 7].choose(rng).unwrap())
}

pub fn nonzero_elem(rng: &mut impl Rng, field: BaseField) -> FieldElem {
    match field {
        BaseField::Prime { p, .. } => FieldElem::Mod(rng.gen_range(1..p)),
        BaseField::Reals => loop {
            let x = field
                .from_ratio(&rng.gen_range(-9i64..=9).into(), &rng.gen_range(1i64..=5).into())
                .unwrap();
            if !field.is_zero(&x) {
                return x;
            }
        },
    }
}

pub fn elem(rng: &mut impl Rng, field: BaseField) -> FieldElem {
    if rng.gen_bool(0.2) {
        field.zero()
    } else {
        nonzero_elem(rng, field)
    }
}

pub fn unit_class(rng: &mut impl Rng, field: BaseField) -> SquareClass {
    if rng.gen_bool(0.5) {
        SquareClass::identity(field)
    } else {
        SquareClass::nontrivial(field)
    }
}

pub fn sq_class_fn(rng: &mut impl Rng, field: BaseField, n: usize) -> SqClassFn {
    let parity = rng.gen_range(0..1u32 << n);
    SqClassFn::new(n, parity, unit_class(rng, field)).unwrap()
}

/// A Laurent polynomial with up to `max_terms` terms and exponents in
/// `[lo, hi]`; may be zero.
pub fn poly(
    rng: &mut impl Rng,
    field: BaseField,
    n: usize,
    max_terms: usize,
    lo: i64,
    hi: i64,
) -> LaurentPoly {
    let k = rng.gen_range(0..=max_terms);
    LaurentPoly::from_terms(
        field,
        n,
        (0..k).map(|_| {
            let e = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
            (e, nonzero_elem(rng, field))
        }),
    )
}

pub fn nonzero_poly(rng: &mut impl Rng, field: BaseField, n: usize, max_terms: usize) -> LaurentPoly {
    loop {
        let p = poly(rng, field, n, max_terms.max(1), -1, 2);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn frac(rng: &mut impl Rng, field: BaseField, n: usize) -> Frac {
    let num = poly(rng, field, n, 3, -2, 2);
    if rng.gen_bool(0.3) {
        let den = nonzero_poly(rng, field, n, 2);
        Frac::new(num, den).unwrap()
    } else {
        Frac::from_poly(num)
    }
}

/// Random symmetric matrix with polynomial entries (possibly singular).
pub fn sym_matrix(rng: &mut impl Rng, field: BaseField, n: usize, size: usize) -> SymMatrix {
    let mut rows = vec![vec![LaurentPoly::zero(field, n); size]; size];
    for i in 0..size {
        for j in i..size {
            let density = if i == j { 0.9 } else { 0.5 };
            let e = if rng.gen_bool(density) {
                poly(rng, field, n, 2, -1, 1)
            } else {
                LaurentPoly::zero(field, n)
            };
            rows[i][j] = e.clone();
            rows[j][i] = e;
        }
    }
    SymMatrix::from_polys(field, n, rows).unwrap()
}

pub fn diag_form(rng: &mut impl Rng, field: BaseField, n: usize, dim: usize) -> DiagForm {
    DiagForm::new(field, n, (0..dim).map(|_| sq_class_fn(rng, field, n)).collect()).unwrap()
}

pub fn base_form(rng: &mut impl Rng, field: BaseField, dim: usize) -> BaseForm {
    BaseForm::new(field, (0..dim).map(|_| unit_class(rng, field)).collect()).unwrap()
}

/// Anisotropic base form of a random dimension, not in canonical shape.
pub fn aniso_base_form(rng: &mut impl Rng, field: BaseField) -> BaseForm {
    loop {
        let dim = rng.gen_range(0..=2);
        let q = base_form(rng, field, dim);
        if base_witt_reduce(&q).dim() == q.dim() {
            return q;
        }
    }
}

pub fn aniso_components(rng: &mut impl Rng, field: BaseField, n: usize) -> LoopComponents {
    LoopComponents::new(
        field,
        n,
        (0..1u32 << n).map(|m| (m, aniso_base_form(rng, field))),
    )
    .unwrap()
}

/// Integer residue of an `F_p` element.
pub fn residue(x: &FieldElem) -> u64 {
    match x {
        FieldElem::Mod(v) => *v,
        FieldElem::Rat(_) => panic!("not a residue"),
    }
}

pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if (1..p).any(|x| x * x % p == a) {
        1
    } else {
        -1
    }
}

/// Isometry invariant of a base form over `F_p`: dimension and the
/// Legendre symbol of the determinant. These classify forms over `F_p`.
pub fn fp_invariant(q: &BaseForm) -> (usize, i8) {
    let BaseField::Prime { p, .. } = q.field() else {
        panic!("finite field expected")
    };
    let det = q
        .entries()
        .iter()
        .fold(1u64, |acc, c| acc * residue(&c.rep()) % p);
    (q.dim(), legendre(det, p))
}

/// Product of two matrices of quotients.
pub fn mat_mul(a: &[Vec<Frac>], b: &[Vec<Frac>]) -> Vec<Vec<Frac>> {
    let n = a.len();
    let m = b[0].len();
    let zero = Frac::zero(a[0][0].field(), a[0][0].vars());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(zero.clone(), |acc, k| {
                        acc.add(&a[i][k].mul(&b[k][j]).unwrap()).unwrap()
                    })
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Frac>]) -> Vec<Vec<Frac>> {
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn matrix_rows(a: &SymMatrix) -> Vec<Vec<Frac>> {
    a.rows().map(|r| r.to_vec()).collect()
}

/// Leibniz expansion, independent of the library's elimination.
pub fn leibniz_det(a: &[Vec<Frac>]) -> Frac {
    let n = a.len();
    let field = a[0][0].field();
    let vars = a[0][0].vars();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Frac::zero(field, vars);
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term = Frac::one(field, vars);
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&a[i][j]).unwrap();
            if term.is_zero() {
                return;
            }
        }
        total = if inversions % 2 == 0 {
            total.add(&term).unwrap()
        } else {
            total.sub(&term).unwrap()
        };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Random invertible change of basis: a product of up to `ops` elementary
/// operations `x_i += c t^e x_j`, swaps and monomial unit scalings.
pub fn random_congruence(
    rng: &mut impl Rng,
    field: BaseField,
    n: usize,
    size: usize,
    ops: usize,
) -> Vec<Vec<Frac>> {
    let one = Frac::one(field, n);
    let zero = Frac::zero(field, n);
    let mut p: Vec<Vec<Frac>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
        .collect();
    fn monomial(rng: &mut impl Rng, field: BaseField, n: usize) -> Frac {
        let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        Frac::from_poly(LaurentPoly::from_terms(field, n, [(e, nonzero_elem(rng, field))]))
    }
    for _ in 0..rng.gen_range(0..=ops) {
        let mut op: Vec<Vec<Frac>> = (0..size)
            .map(|i| (0..size).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect();
        let i = rng.gen_range(0..size);
        match rng.gen_range(0..3) {
            0 if size > 1 => {
                let mut j = rng.gen_range(0..size - 1);
                if j >= i {
                    j += 1;
                }
                op[j][i] = monomial(rng, field, n);
            }
            1 if size > 1 => {
                let j = (i + 1) % size;
                op[i][i] = zero.clone();
                op[j][j] = zero.clone();
                op[i][j] = one.clone();
                op[j][i] = one.clone();
            }
            _ => op[i][i] = monomial(rng, field, n),
        }
        p = mat_mul(&p, &op);
    }
    p
}
