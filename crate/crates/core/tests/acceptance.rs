//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use common::*;
use tamewitt::basefield::{base_is_isotropic, brute_force_isotropic, BaseField, BaseForm, FieldElem, SquareClass};
use tamewitt::cocycles::{
    coboundary, make_group, recombine, split_cocycle, validate_cocycle, Action, CocycleSplit,
    DiagonalCocycle, LoopCocycle, TargetGroup, TameGaloisGroup, Validation,
};
use tamewitt::error::Error;
use tamewitt::formlang::{parse_bytes, parse_value, render, ParseContext, Value};
use tamewitt::laurent::{Frac, SqClassFn};
use tamewitt::loopforms::{build_loop_form, classify, components_of, LoopComponents, Verdict};
use tamewitt::wittcore::{
    diagonalize, hyperbolic, is_anisotropic, is_isometric, orth_sum, witt_class, witt_decompose,
    witt_index, DiagForm, SymMatrix,
};

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("C1 base-field isotropy vs exhaustive search", c1_base_field),
        ("C2 Springer criterion vs Hensel search (n=1)", c2_springer),
        ("C3 component round trip", c3_round_trip),
        ("C4 diagonalization certificates", c4_certificates),
        ("C5 classification soundness", c5_classification),
        ("C6 Witt decomposition", c6_decomposition),
        ("C7 fixed values", c7_fixed_values),
        ("C8 cocycle suite", c8_cocycles),
        ("C9 parser fuzz and rendering round trip", c9_parser),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a, p) == -1).unwrap()
}

/// Exhaustive search for a nonzero zero of `Σ a_i x_i²` over `F_p`.
fn fp_isotropic(coeffs: &[u64], p: u64) -> bool {
    let n = coeffs.len();
    let total = p.pow(n as u32);
    (1..total).any(|mut v| {
        let mut acc = 0;
        for a in coeffs {
            let x = v % p;
            v /= p;
            acc = (acc + a * x * x) % p;
        }
        acc == 0
    })
}

fn c1_base_field() -> Outcome {
    let start = Instant::now();
    let mut forms = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let field = fp(p);
        let s = least_nonresidue(p);
        let units = [1, s, p - 1, p - s];
        for dim in 1..=4u32 {
            for code in 0..4usize.pow(dim) {
                let coeffs: Vec<u64> = (0..dim as usize)
                    .map(|i| units[code / 4usize.pow(i as u32) % 4])
                    .collect();
                let elems: Vec<FieldElem> = coeffs.iter().map(|&c| FieldElem::Mod(c)).collect();
                let q = BaseForm::from_elems(field, &elems).map_err(|e| e.to_string())?;
                let fast = base_is_isotropic(&q);
                let oracle = fp_isotropic(&coeffs, p);
                let witness = brute_force_isotropic(&q).map_err(|e| e.to_string())?;
                ensure(fast == oracle && witness.is_some() == oracle, || {
                    format!("p={p} coeffs={coeffs:?}: fast={fast} oracle={oracle} witness={witness:?}")
                })?;
                if let Some(w) = witness {
                    let reps: Vec<u64> = q.entries().iter().map(|c| residue(&c.rep())).collect();
                    let value = reps.iter().zip(&w).fold(0, |acc, (a, x)| (acc + a * x * x) % p);
                    ensure(value == 0 && w.iter().any(|&x| x != 0), || {
                        format!("p={p} coeffs={coeffs:?}: {w:?} is not a zero")
                    })?;
                }
                forms += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{forms} forms agree"))
}

/// Entry `u t^e` of a diagonal form over `F_p((t))`.
#[derive(Clone, Copy, Debug)]
struct Entry {
    u: u64,
    e: usize,
}

/// Search for a primitive `x ∈ (F_p[t])^N` of degree ≤ 2 with
/// `q(x) ≡ 0 mod t^5` and some `∂q/∂x_i = 2 u_i t^{e_i} x_i` of valuation
/// at most 1. Such an `x` lifts to a zero by Hensel's lemma. Coefficient
/// `k` of `q(x)` depends only on the layers `x_{·,0..k}`, which prunes the
/// search layer by layer.
fn hensel_witness(entries: &[Entry], p: u64) -> Option<Vec<[u64; 3]>> {
    let n = entries.len();
    let mut x = vec![[0u64; 3]; n];
    search_layer(entries, p, &mut x, 0).then_some(x)
}

fn q_coeff(entries: &[Entry], p: u64, x: &[[u64; 3]], k: usize) -> u64 {
    let mut acc = 0;
    for (ent, xi) in entries.iter().zip(x) {
        if k < ent.e {
            continue;
        }
        let d = k - ent.e;
        // Coefficient of t^d in xi²; layers beyond 2 are zero.
        let mut sq = 0;
        for a in 0..=d.min(2) {
            let b = d - a;
            if b <= 2 {
                sq = (sq + xi[a] * xi[b]) % p;
            }
        }
        acc = (acc + ent.u * sq) % p;
    }
    acc
}

fn search_layer(entries: &[Entry], p: u64, x: &mut [[u64; 3]], layer: usize) -> bool {
    let n = entries.len();
    if layer == 3 {
        let vanishes = (3..5).all(|k| q_coeff(entries, p, x, k) == 0);
        let gradient = entries.iter().zip(x.iter()).any(|(ent, xi)| {
            let v = xi.iter().position(|&c| c != 0).unwrap_or(usize::MAX);
            v != usize::MAX && ent.e + v <= 1
        });
        return vanishes && gradient;
    }
    for code in 0..p.pow(n as u32) {
        let mut c = code;
        for xi in x.iter_mut() {
            xi[layer] = c % p;
            c /= p;
        }
        if layer == 0 && code == 0 {
            continue;
        }
        if q_coeff(entries, p, x, layer) == 0 && search_layer(entries, p, x, layer + 1) {
            return true;
        }
    }
    for xi in x.iter_mut() {
        xi[layer] = 0;
    }
    false
}

fn entries_form(field: BaseField, entries: &[Entry]) -> DiagForm {
    let classes = entries
        .iter()
        .map(|ent| {
            let c = field.sq_class(&FieldElem::Mod(ent.u)).unwrap();
            SqClassFn::new(1, ent.e as u32, c).unwrap()
        })
        .collect();
    DiagForm::new(field, 1, classes).unwrap()
}

fn c2_springer() -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for p in [3u64, 5, 7] {
        let s = least_nonresidue(p);
        let choices: Vec<Entry> = [1, s, p - 1, p - s]
            .iter()
            .flat_map(|&u| [Entry { u, e: 0 }, Entry { u, e: 1 }])
            .collect();
        for dim in 1..=3u32 {
            for code in 0..8usize.pow(dim) {
                let entries: Vec<Entry> = (0..dim as usize)
                    .map(|i| choices[code / 8usize.pow(i as u32) % 8])
                    .collect();
                cases.push((p, entries));
            }
        }
    }
    let results: Vec<Result<bool, String>> = cases
        .par_iter()
        .map(|(p, entries)| {
            let p = *p;
            let field = fp(p);
            let q = entries_form(field, entries);
            let aniso = is_anisotropic(&q);
            let witness = hensel_witness(entries, p);
            // Residue criterion, checked on each graded part by exhaustive search.
            let part = |e| -> Vec<u64> { entries.iter().filter(|x| x.e == e).map(|x| x.u).collect() };
            let residue_aniso = !fp_isotropic(&part(0), p) && !fp_isotropic(&part(1), p);
            if aniso != witness.is_none() || aniso != residue_aniso {
                return Err(format!(
                    "p={p} entries={entries:?}: library anisotropic={aniso}, hensel witness={witness:?}, residue criterion={residue_aniso}"
                ));
            }
            Ok(aniso)
        })
        .collect();
    let mut anisotropic = 0;
    for r in &results {
        if r.clone()? {
            anisotropic += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{} forms agree ({anisotropic} anisotropic)", results.len()))
}

fn c3_round_trip() -> Outcome {
    let mut rng = rng(3);
    for case in 0..1000 {
        let field = small_prime(&mut rng);
        let n = rng.gen_range(0..=3);
        let cs = aniso_components(&mut rng, field, n);
        let q = build_loop_form(&cs);
        let back = components_of(&q);
        for (mask, comp) in cs.components() {
            ensure(fp_invariant(comp) == fp_invariant(back.component(mask)), || {
                format!("case {case}: {cs} gave {back} at subset {mask}")
            })?;
        }
    }
    Ok("1000 component tables recovered".into())
}

fn frac_eq(a: &Frac, b: &Frac) -> bool {
    a.sub(b).unwrap().is_zero()
}

fn c4_certificates() -> Outcome {
    let results: Vec<Result<bool, String>> = (0..1000u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = rng(4_000_000 + case);
            loop {
                let field = small_prime(&mut rng);
                let n = rng.gen_range(0..=2);
                let size = rng.gen_range(1..=5);
                let a = sym_matrix(&mut rng, field, n, size);
                let rows = matrix_rows(&a);
                let det = leibniz_det(&rows);
                if det.is_zero() {
                    if !matches!(diagonalize(&a), Err(Error::DegenerateForm)) {
                        return Err(format!("case {case}: singular {a} not rejected"));
                    }
                    continue;
                }
                let d = diagonalize(&a).map_err(|e| format!("case {case}: {a}: {e}"))?;
                let p = d.basis.matrix().to_vec();
                let b = mat_mul(&transpose(&p), &mat_mul(&rows, &p));
                for i in 0..size {
                    for j in 0..size {
                        let ok = if i == j {
                            frac_eq(&b[i][i], &d.diagonal[i])
                        } else {
                            b[i][j].is_zero()
                        };
                        if !ok {
                            return Err(format!("case {case}: PᵀAP differs at ({i},{j}) for {a}"));
                        }
                    }
                }
                let inv = mat_mul(d.basis.inverse(), &p);
                for (i, row) in inv.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        let want = if i == j { Frac::one(field, n) } else { Frac::zero(field, n) };
                        if !frac_eq(x, &want) {
                            return Err(format!("case {case}: P⁻¹P ≠ I for {a}"));
                        }
                    }
                }
                let disc = d
                    .diagonal
                    .iter()
                    .fold(SqClassFn::identity(field, n), |acc, x| acc.mul(x.sq_class_fn().unwrap()));
                if det.sq_class_fn().unwrap() != disc || d.form.determinant() != disc {
                    return Err(format!("case {case}: discriminant mismatch for {a}"));
                }
                return Ok(size > 1);
            }
        })
        .collect();
    let mut nondiag = 0;
    for r in results {
        if r? {
            nondiag += 1;
        }
    }
    Ok(format!("1000 certificates verified ({nondiag} of size > 1)"))
}

fn nondegenerate_matrix(rng: &mut impl Rng, field: BaseField, n: usize, size: usize) -> SymMatrix {
    loop {
        let a = sym_matrix(rng, field, n, size);
        if !leibniz_det(&matrix_rows(&a)).is_zero() {
            return a;
        }
    }
}

fn scramble(rng: &mut impl Rng, q: &DiagForm) -> DiagForm {
    if q.dim() == 0 {
        return q.clone();
    }
    let p = random_congruence(rng, q.field(), q.vars(), q.dim(), 10);
    let b = q.to_matrix().congruent(&p).unwrap();
    diagonalize(&b).unwrap().form
}

fn c5_classification() -> Outcome {
    let same: Vec<Result<(), String>> = (0..500u64)
        .into_par_iter()
        .map(|case| {
            let mut rng = rng(5_000_000 + case);
            let field = small_prime(&mut rng);
            let n = rng.gen_range(0..=2);
            let size = rng.gen_range(1..=4);
            let a = nondegenerate_matrix(&mut rng, field, n, size);
            let p = random_congruence(&mut rng, field, n, size, 10);
            let b = SymMatrix::new(field, n, mat_mul(&transpose(&p), &mat_mul(&matrix_rows(&a), &p)))
                .map_err(|e| e.to_string())?;
            let qa = diagonalize(&a).map_err(|e| e.to_string())?.form;
            let qb = diagonalize(&b).map_err(|e| e.to_string())?.form;
            let v = classify(&qa, &qb).map_err(|e| e.to_string())?;
            ensure(v == Verdict::Isometric, || format!("case {case}: {a} vs {b}: {v}"))
        })
        .collect();
    for r in same {
        r?;
    }
    let mut rng = rng(5);
    let mut distinct = 0;
    while distinct < 500 {
        let field = small_prime(&mut rng);
        let n = rng.gen_range(0..=2);
        let c1 = aniso_components(&mut rng, field, n);
        let c2 = aniso_components(&mut rng, field, n);
        let differing: Vec<u32> = (0..1u32 << n)
            .filter(|&m| fp_invariant(c1.component(m)) != fp_invariant(c2.component(m)))
            .collect();
        let (q1, q2) = (build_loop_form(&c1), build_loop_form(&c2));
        if differing.is_empty() || q1.dim() % 2 != q2.dim() % 2 {
            continue;
        }
        let rank = q1.dim().max(q2.dim());
        let pad = |q: &DiagForm| orth_sum(q, &hyperbolic(field, n, (rank - q.dim()) / 2)).unwrap();
        let q1 = scramble(&mut rng, &pad(&q1));
        let q2 = scramble(&mut rng, &pad(&q2));
        let v = classify(&q1, &q2).map_err(|e| e.to_string())?;
        match &v {
            Verdict::DistinctWittClass { witnesses } if *witnesses == differing => {}
            _ => return Err(format!("{c1} vs {c2}: {v}, expected witnesses {differing:?}")),
        }
        distinct += 1;
    }
    Ok("500 congruent pairs isometric, 500 distinct pairs separated".into())
}

fn c6_decomposition() -> Outcome {
    let mut rng = rng(6);
    let mut checked_by_search = 0;
    for case in 0..500 {
        let field = if rng.gen_bool(0.2) { BaseField::reals() } else { small_prime(&mut rng) };
        let n = rng.gen_range(0..=3);
        let dim = rng.gen_range(0..=8);
        let q = diag_form(&mut rng, field, n, dim);
        let (q0, c) = witt_decompose(&q);
        ensure(is_anisotropic(&q0), || format!("case {case}: {q0} is isotropic"))?;
        ensure(q0.dim() + 2 * c == q.dim(), || format!("case {case}: dimensions of {q}"))?;
        let sum = orth_sum(&q0, &hyperbolic(field, n, c)).unwrap();
        ensure(is_isometric(&q, &sum).unwrap(), || format!("case {case}: {q} vs {sum}"))?;
        // Independent anisotropy check where a search is affordable.
        if let BaseField::Prime { p, .. } = field {
            let entries: Vec<Entry> = q0
                .entries()
                .iter()
                .map(|e| Entry { u: residue(&e.base().rep()), e: e.parity() as usize })
                .collect();
            if n == 0 && q0.dim() <= 4 {
                let coeffs: Vec<u64> = entries.iter().map(|e| e.u).collect();
                ensure(!fp_isotropic(&coeffs, p), || format!("case {case}: search finds a zero of {q0}"))?;
                checked_by_search += 1;
            } else if n == 1 && q0.dim() <= 3 {
                ensure(hensel_witness(&entries, p).is_none(), || {
                    format!("case {case}: Hensel search finds a zero of {q0}")
                })?;
                checked_by_search += 1;
            }
        }
    }
    Ok(format!("500 decompositions verified ({checked_by_search} cross-checked by search)"))
}

fn c7_fixed_values() -> Outcome {
    let f7 = fp(7);
    let e = |u: u64| FieldElem::Mod(u);
    let q = DiagForm::from_base(0, &BaseForm::from_elems(f7, &[e(1), e(1), e(1)]).unwrap());
    let w = witt_class(&q);
    let minus_one = BaseForm::from_elems(f7, &[e(6)]).unwrap();
    ensure(*w.component(0) == minus_one, || format!("W(<1,1,1>) = {w}"))?;
    ensure(witt_index(&q) == 1, || format!("index of <1,1,1> is {}", witt_index(&q)))?;
    ensure(fp_isotropic(&[1, 1, 1], 7), || "search finds no zero of <1,1,1>".into())?;

    let one_t = entries_form(f7, &[Entry { u: 1, e: 0 }, Entry { u: 1, e: 1 }]);
    ensure(is_anisotropic(&one_t), || "<1, t1> reported isotropic".into())?;
    ensure(
        hensel_witness(&[Entry { u: 1, e: 0 }, Entry { u: 1, e: 1 }], 7).is_none(),
        || "Hensel search finds a zero of <1, t1>".into(),
    )?;

    for n in [0, 1] {
        let h = DiagForm::new(
            f7,
            n,
            vec![
                SqClassFn::constant(n, SquareClass::identity(f7)),
                SqClassFn::constant(n, SquareClass::minus_one(f7)),
            ],
        )
        .unwrap();
        ensure(witt_index(&h) == 1, || format!("index of <1,-1> over n={n} is {}", witt_index(&h)))?;
    }
    Ok("W(<1,1,1>) = {{}: <-1>}, index 1; <1,t1> anisotropic; <1,-1> index 1".into())
}

/// The semidirect product law written out independently: index
/// `a_1 + m a_2 + … + m^r s`, `(a, s)(b, t) = (a + (-1)^s b, s + t)`.
struct Law {
    m: usize,
    r: usize,
    e: usize,
}

impl Law {
    fn decode(&self, x: usize) -> (Vec<usize>, usize) {
        let a = (0..self.r).map(|i| x / self.m.pow(i as u32) % self.m).collect();
        (a, x / self.m.pow(self.r as u32))
    }

    fn encode(&self, a: &[usize], s: usize) -> usize {
        a.iter().enumerate().map(|(i, x)| x * self.m.pow(i as u32)).sum::<usize>()
            + s * self.m.pow(self.r as u32)
    }

    fn order(&self) -> usize {
        self.m.pow(self.r as u32) * self.e
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        let ((a, s), (b, t)) = (self.decode(x), self.decode(y));
        let c: Vec<usize> = a
            .iter()
            .zip(&b)
            .map(|(u, v)| if s == 1 { (u + self.m - v) % self.m } else { (u + v) % self.m })
            .collect();
        self.encode(&c, (s + t) % self.e)
    }
}

fn act(moduli: &[u32], inversion: bool, s: usize, x: &[u32]) -> Vec<u32> {
    if inversion && s == 1 {
        x.iter().zip(moduli).map(|(a, n)| (n - a) % n).collect()
    } else {
        x.to_vec()
    }
}

fn add(moduli: &[u32], x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().zip(y).zip(moduli).map(|((a, b), n)| (a + b) % n).collect()
}

/// First `(σ, τ)` violating `φ(στ) = φ(σ) + σ·φ(τ)`.
fn identity_failure(law: &Law, moduli: &[u32], inversion: bool, phi: &[Vec<u32>]) -> Option<(usize, usize)> {
    for x in 0..law.order() {
        let s = law.decode(x).1;
        for y in 0..law.order() {
            let rhs = add(moduli, &phi[x], &act(moduli, inversion, s, &phi[y]));
            if phi[law.mul(x, y)] != rhs {
                return Some((x, y));
            }
        }
    }
    None
}

fn c8_cocycles() -> Outcome {
    let mut rng = rng(8);
    let mut valid_pool: Vec<LoopCocycle> = Vec::new();
    let (mut groups, mut coboundaries, mut cocycles, mut rejected) = (0, 0, 0, 0);
    for m in [2u32, 3, 4] {
        for r in [1usize, 2] {
            for e in [1u32, 2] {
                let group = make_group(m, r, e, None).map_err(|x| x.to_string())?;
                if group.order() > 64 {
                    continue;
                }
                groups += 1;
                let law = Law { m: m as usize, r, e: e as usize };
                for x in 0..law.order() {
                    for y in 0..law.order() {
                        ensure(group.mul(x, y) == law.mul(x, y), || {
                            format!("group law differs at ({x},{y}) for (m,r,e)=({m},{r},{e})")
                        })?;
                    }
                }
                let targets = [
                    (vec![m], Action::Inversion),
                    (vec![m], Action::Trivial),
                    (vec![2], Action::Trivial),
                    (vec![m, m], Action::Inversion),
                ];
                for (moduli, action) in targets {
                    let target = TargetGroup::new(moduli.clone(), action).map_err(|x| x.to_string())?;
                    let inversion = action == Action::Inversion;
                    for g in 0..target.order() {
                        let b = coboundary(group, target.clone(), &target.element(g)).map_err(|x| x.to_string())?;
                        ensure(
                            validate_cocycle(&b).is_valid()
                                && identity_failure(&law, &moduli, inversion, b.values()).is_none(),
                            || format!("coboundary of {g} fails for ({m},{r},{e})"),
                        )?;
                        coboundaries += 1;
                    }
                    // Every cocycle is η(a) + z(s) with η fixed by the images of
                    // the r generators; enumerate all such pairs.
                    let t_order = target.order();
                    let z_choices = if e == 2 { t_order } else { 1 };
                    for code in 0..t_order.pow(r as u32) * z_choices {
                        let gens: Vec<Vec<u32>> = (0..r)
                            .map(|i| target.element(code / t_order.pow(i as u32) % t_order))
                            .collect();
                        let z1 = target.element(code / t_order.pow(r as u32));
                        let geo_order = (m as usize).pow(r as u32);
                        let geometric: Vec<Vec<u32>> = (0..geo_order)
                            .map(|x| {
                                let (a, _) = law.decode(x);
                                a.iter().zip(&gens).fold(target.zero(), |acc, (&k, g)| {
                                    (0..k).fold(acc, |acc, _| add(&moduli, &acc, g))
                                })
                            })
                            .collect();
                        let arithmetic = if e == 2 { vec![target.zero(), z1] } else { vec![target.zero()] };
                        let phi: Vec<Vec<u32>> = (0..law.order())
                            .map(|x| add(&moduli, &geometric[x % geo_order], &arithmetic[x / geo_order]))
                            .collect();
                        let is_cocycle = identity_failure(&law, &moduli, inversion, &phi).is_none();
                        let split = CocycleSplit {
                            group,
                            target: target.clone(),
                            arithmetic,
                            geometric,
                        };
                        match recombine(&split) {
                            Ok(c) => {
                                ensure(is_cocycle && c.values() == phi.as_slice(), || {
                                    format!("recombine accepted a non-cocycle for ({m},{r},{e}) code {code}")
                                })?;
                                ensure(validate_cocycle(&c).is_valid(), || "valid cocycle rejected".into())?;
                                let back = split_cocycle(&c).map_err(|x| x.to_string())?;
                                ensure(back == split, || format!("split round trip fails for {c}"))?;
                                cocycles += 1;
                                valid_pool.push(c);
                            }
                            Err(Error::NotACocycle(_)) => {
                                ensure(!is_cocycle, || {
                                    format!("recombine rejected a cocycle for ({m},{r},{e}) code {code}")
                                })?;
                                let c = LoopCocycle::new(group, target.clone(), phi.clone()).unwrap();
                                ensure(!validate_cocycle(&c).is_valid(), || "validation accepted a non-cocycle".into())?;
                                rejected += 1;
                            }
                            Err(x) => return Err(x.to_string()),
                        }
                    }
                }
            }
        }
    }
    for k in 0..100 {
        let c = valid_pool.choose(&mut rng).unwrap();
        let g: &TameGaloisGroup = c.group();
        let law = Law { m: g.m() as usize, r: g.r(), e: g.e() as usize };
        let idx = if g.order() >= 3 { rng.gen_range(0..g.order()) } else { 0 };
        let t = c.target();
        let old = c.value(idx).to_vec();
        let new = loop {
            let v = t.element(rng.gen_range(0..t.order()));
            if v != old {
                break v;
            }
        };
        let mutated = c.with_value(idx, new).map_err(|x| x.to_string())?;
        let inversion = t.action() == Action::Inversion;
        match validate_cocycle(&mutated) {
            Validation::Invalid { sigma, tau } => {
                let phi = mutated.values();
                let rhs = add(t.moduli(), &phi[sigma], &act(t.moduli(), inversion, law.decode(sigma).1, &phi[tau]));
                ensure(phi[law.mul(sigma, tau)] != rhs, || {
                    format!("mutation {k}: reported witness ({sigma},{tau}) does not fail")
                })?;
            }
            Validation::Valid => return Err(format!("mutation {k} of {c} at {idx} validated")),
        }
    }
    Ok(format!(
        "{groups} groups: {coboundaries} coboundaries, {cocycles} cocycles round-tripped, {rejected} non-cocycles rejected, 100 mutations caught"
    ))
}

const TOKENS: &[&str] = &[
    "diag", "(", ")", "[", "]", "{", "}", ",", "+", "-", "*", "^", "/", ":", ";", "=", "t1", "t2",
    "t3", "t0", "0", "1", "2", "3", "7", "12", "-1", " ", "\n", "cocycle", "m", "r", "e", "units",
    "exps", "target", "action", "values", "trivial", "inverse", "999999999999", "x",
];

fn c9_parser() -> Outcome {
    let mut rng = rng(9);
    let contexts = [
        ParseContext::new(fp(7), 0).unwrap(),
        ParseContext::new(fp(7), 2).unwrap(),
        ParseContext::new(fp(3), 1).unwrap(),
        ParseContext::new(BaseField::reals(), 2).unwrap(),
    ];
    let (mut ok, mut syntax, mut semantic) = (0, 0, 0);
    for case in 0..100_000 {
        let bytes: Vec<u8> = if case % 2 == 0 {
            let len = rng.gen_range(0..48);
            (0..len).map(|_| rng.gen()).collect()
        } else {
            let len = rng.gen_range(0..24);
            (0..len).flat_map(|_| TOKENS.choose(&mut rng).unwrap().bytes()).collect()
        };
        let ctx = contexts.choose(&mut rng).unwrap();
        let result = catch_unwind(AssertUnwindSafe(|| parse_bytes(&bytes, ctx)))
            .map_err(|_| format!("panic on {:?}", String::from_utf8_lossy(&bytes)))?;
        match result {
            Ok(v) => {
                let again = parse_value(&render(&v), ctx).map_err(|e| e.to_string())?;
                ensure(again == v, || format!("round trip of {v} fails"))?;
                ok += 1;
            }
            Err(Error::Parse(e)) => {
                let lines = bytes.iter().filter(|&&b| b == b'\n').count() + 1;
                ensure(e.line >= 1 && e.line <= lines && e.col >= 1 && e.col <= bytes.len() + 1, || {
                    format!("bad position {}:{} for {:?}", e.line, e.col, String::from_utf8_lossy(&bytes))
                })?;
                syntax += 1;
            }
            // Well-formed text naming an invalid object.
            Err(
                Error::DegenerateForm
                | Error::NotSymmetric(..)
                | Error::NotSquare
                | Error::ZeroElement
                | Error::BadExponent(_)
                | Error::NonSplitData(_),
            ) => semantic += 1,
            Err(other) => {
                return Err(format!("unexpected {other:?} for {:?}", String::from_utf8_lossy(&bytes)))
            }
        }
    }
    for case in 0..1000 {
        let (v, ctx) = if case % 4 == 3 {
            random_cocycle_value(&mut rng)
        } else {
            let v = random_value(&mut rng);
            let ctx = value_context(&v);
            (v, ctx)
        };
        let text = render(&v);
        let back = parse_value(&text, &ctx).map_err(|e| format!("case {case}: {text}: {e}"))?;
        ensure(back == v, || format!("case {case}: {text} parsed to {back}"))?;
        ensure(render(&back) == text, || format!("case {case}: rendering not stable for {text}"))?;
    }
    Ok(format!(
        "100000 inputs: {ok} values, {syntax} positioned errors, {semantic} invalid objects; 1000 round trips"
    ))
}

fn value_context(v: &Value) -> ParseContext {
    let (field, vars) = match v {
        Value::Poly(x) => (x.field(), x.vars()),
        Value::Diag(x) => (x.field(), x.vars()),
        Value::Matrix(x) => (x.field(), x.vars()),
        Value::Components(x) => (x.field(), x.vars()),
        Value::Cocycle(_) | Value::DiagCocycle(_) => unreachable!("cocycles carry their own context"),
    };
    ParseContext::new(field, vars).unwrap()
}

fn random_value(rng: &mut impl Rng) -> Value {
    let field = if rng.gen_bool(0.25) { BaseField::reals() } else { small_prime(rng) };
    let n = rng.gen_range(0..=3);
    match rng.gen_range(0..4) {
        0 => Value::Poly(frac(rng, field, n)),
        1 => {
            let dim = rng.gen_range(0..=5);
            Value::Diag(diag_form(rng, field, n, dim))
        }
        2 => {
            let size = rng.gen_range(1..=3);
            let mut rows = vec![vec![Frac::zero(field, n); size]; size];
            for i in 0..size {
                for j in i..size {
                    let x = frac(rng, field, n);
                    rows[i][j] = x.clone();
                    rows[j][i] = x;
                }
            }
            Value::Matrix(SymMatrix::new(field, n, rows).unwrap())
        }
        _ => {
            let cs = LoopComponents::new(
                field,
                n,
                (0..1u32 << n).map(|m| {
                    let dim = rng.gen_range(0..=3);
                    (m, base_form(rng, field, dim))
                }),
            )
            .unwrap();
            Value::Components(cs)
        }
    }
}

/// Cocycle text needs a field compatible with the group.
fn random_cocycle_value(rng: &mut impl Rng) -> (Value, ParseContext) {
    loop {
        let p = *[3u64, 5, 7, 11, 13].choose(rng).unwrap();
        let field = fp(p);
        let (m, r, e) = (rng.gen_range(2..=4), rng.gen_range(1..=2), rng.gen_range(1..=2));
        let Ok(group) = make_group(m, r, e, Some(field)) else { continue };
        let ctx = ParseContext::new(field, 0).unwrap();
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..=3);
            let units = (0..k).map(|_| unit_class(rng, field)).collect();
            let exps = (0..k).map(|_| (0..r).map(|_| rng.gen_range(0..m)).collect()).collect();
            let d = DiagonalCocycle::new(group, field, units, exps).unwrap();
            return (Value::DiagCocycle(d), ctx);
        }
        let moduli: Vec<u32> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..=4)).collect();
        let action = if rng.gen_bool(0.5) { Action::Trivial } else { Action::Inversion };
        let target = TargetGroup::new(moduli, action).unwrap();
        let values = (0..group.order())
            .map(|_| target.element(rng.gen_range(0..target.order())))
            .collect();
        return (Value::Cocycle(LoopCocycle::new(group, target, values).unwrap()), ctx);
    }
}
