//! The invariant 3-form, the Wronskian table, standard bases and G2-isotropic flags.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{in_span, span_basis, Mat, Solution};
use crate::par::Exec;
use crate::poly::QPoly;
use crate::polyspace::{combinations, witt_gram_entry, PolySpace, WittBasis};
use crate::scalar::{Field, Rational};
use crate::spin;

/// Antisymmetric trilinear form on `Q^7`, stored by its 35 values on `i<j<k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm {
    values: Vec<Rational>,
}

/// 0-based triples `i<j<k` in lexicographic order.
pub fn triples() -> Vec<[usize; 3]> {
    combinations(7, 3).into_iter().map(|c| [c[0], c[1], c[2]]).collect()
}

fn triple_index(t: [usize; 3]) -> usize {
    triples().iter().position(|x| *x == t).expect("sorted triple")
}

fn perm_sign3(t: [usize; 3]) -> Option<([usize; 3], bool)> {
    let [a, b, c] = t;
    if a == b || b == c || a == c {
        return None;
    }
    let mut s = t;
    let mut neg = false;
    for i in 0..3 {
        for j in 0..2 - i {
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                neg = !neg;
            }
        }
    }
    Some((s, neg))
}

impl ThreeForm {
    pub fn from_values(values: Vec<Rational>) -> Self {
        assert_eq!(values.len(), 35);
        ThreeForm { values }
    }

    pub fn zero() -> Self {
        ThreeForm { values: vec![Rational::zero(); 35] }
    }

    /// Value on basis vectors, 0-based, any order.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        match perm_sign3([i, j, k]) {
            None => Rational::zero(),
            Some((s, neg)) => {
                let v = self.values[triple_index(s)].clone();
                if neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `w(a, b, c)` by multilinearity.
    pub fn eval(&self, a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
        triples().iter().zip(&self.values).fold(Rational::zero(), |acc, (t, w)| {
            if w.is_zero() {
                acc
            } else {
                acc + w.clone() * minor3(a, b, c, *t)
            }
        })
    }

    /// The 2-form `w(v, ., .)` as a 7x7 matrix.
    pub fn contract(&self, v: &[Rational]) -> Mat<Rational> {
        Mat::from_fn(7, 7, |j, k| {
            (0..7).fold(Rational::zero(), |acc, i| {
                if v[i].is_zero() {
                    acc
                } else {
                    acc + v[i].clone() * self.get(i, j, k)
                }
            })
        })
    }

    /// `{"ijk": "p/q"}` with 1-based indices, nonzero values only.
    pub fn to_map(&self) -> BTreeMap<String, Rational> {
        triples()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| (format!("{}{}{}", t[0] + 1, t[1] + 1, t[2] + 1), v.clone()))
            .collect()
    }

    pub fn from_map(m: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut w = ThreeForm::zero();
        for (k, v) in m {
            let d: Vec<usize> = k
                .chars()
                .map(|c| c.to_digit(10).map(|x| x as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad triple key {k:?}")))?;
            if d.len() != 3 || d.iter().any(|&x| !(1..=7).contains(&x)) {
                return Err(Error::Parse(format!("bad triple key {k:?}")));
            }
            let (s, neg) = perm_sign3([d[0] - 1, d[1] - 1, d[2] - 1])
                .ok_or_else(|| Error::Parse(format!("repeated index in {k:?}")))?;
            w.values[triple_index(s)] = if neg { -v.clone() } else { v.clone() };
        }
        Ok(w)
    }
}

impl Serialize for ThreeForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThreeForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, Rational>::deserialize(d)?;
        ThreeForm::from_map(&m).map_err(serde::de::Error::custom)
    }
}

/// `det` of rows `a, b, c` restricted to columns `t`.
fn minor3(a: &[Rational], b: &[Rational], c: &[Rational], t: [usize; 3]) -> Rational {
    let [i, j, k] = t;
    let m = |x: &[Rational], y: &[Rational], p: usize, q: usize| x[p].clone() * &y[q] - x[q].clone() * &y[p];
    a[i].clone() * m(b, c, j, k) - a[j].clone() * m(b, c, i, k) + a[k].clone() * m(b, c, i, j)
}

/// The 3-form `-(1/2) B̂(abc·p, p)` of the spinor model.
pub fn spin_three_form() -> Result<ThreeForm> {
    let values = triples()
        .iter()
        .map(|t| {
            let v = spin::three_form_value(
                &spin::basis_vec(t[0] + 1),
                &spin::basis_vec(t[1] + 1),
                &spin::basis_vec(t[2] + 1),
            );
            v.to_rational().ok_or_else(|| Error::NotRational(format!("w{t:?} = {v}")))
        })
        .collect::<Result<_>>()?;
    Ok(ThreeForm { values })
}

/// Nonzero values of the standard 3-form: `w(v_i, v_j, v_k)` for 1-based `i<j<k`.
pub const STANDARD_THREE_FORM: [(usize, usize, usize, i64, i64); 5] = [
    (1, 4, 7, 1, 4),
    (1, 5, 6, -1, 4),
    (2, 3, 7, -1, 2),
    (2, 4, 6, 1, 4),
    (3, 4, 5, -1, 4),
];

/// The standard 3-form from its literal values.
pub fn standard_three_form() -> ThreeForm {
    let mut w = ThreeForm::zero();
    for (i, j, k, n, d) in STANDARD_THREE_FORM {
        w.values[triple_index([i - 1, j - 1, k - 1])] = Rational::new(n, d);
    }
    w
}

/// Element of `Sym²V` as a symmetric matrix `N`, read as `Σ N_ab v_a v_b`.
pub type Sym2 = Mat<Rational>;

type Term = (i64, i64, usize, usize);

/// Divided Wronskians of triples of a standard basis, as quadratic expressions
/// `Σ c v_a v_b` (1-based). Triples are listed in lexicographic order.
#[allow(clippy::type_complexity)]
pub const TABLE1: [((usize, usize, usize), &[Term]); 35] = [
    ((1, 2, 3), &[(1, 1, 1, 1)]),
    ((1, 2, 4), &[(1, 1, 1, 2)]),
    ((1, 2, 5), &[(1, 2, 2, 2)]),
    ((1, 2, 6), &[(-1, 2, 1, 4), (1, 2, 2, 3)]),
    ((1, 2, 7), &[(-1, 1, 1, 5), (1, 2, 2, 4)]),
    ((1, 3, 4), &[(1, 1, 1, 3)]),
    ((1, 3, 5), &[(1, 2, 1, 4), (1, 2, 2, 3)]),
    ((1, 3, 6), &[(1, 2, 3, 3)]),
    ((1, 3, 7), &[(-1, 1, 1, 6), (1, 2, 3, 4)]),
    ((1, 4, 5), &[(1, 2, 2, 4)]),
    ((1, 4, 6), &[(1, 2, 3, 4)]),
    ((1, 4, 7), &[(-1, 2, 1, 7), (-1, 2, 2, 6), (1, 2, 3, 5), (1, 4, 4, 4)]),
    ((1, 5, 6), &[(1, 4, 4, 4)]),
    ((1, 5, 7), &[(-1, 2, 2, 7), (1, 2, 4, 5)]),
    ((1, 6, 7), &[(-1, 2, 3, 7), (1, 2, 4, 6)]),
    ((2, 3, 4), &[(1, 1, 1, 4)]),
    ((2, 3, 5), &[(1, 1, 1, 5), (1, 2, 2, 4)]),
    ((2, 3, 6), &[(1, 1, 1, 6), (1, 2, 3, 4)]),
    ((2, 3, 7), &[(1, 2, 4, 4)]),
    ((2, 4, 5), &[(1, 1, 2, 5)]),
    ((2, 4, 6), &[(1, 2, 1, 7), (1, 2, 2, 6), (1, 2, 3, 5), (1, 4, 4, 4)]),
    ((2, 4, 7), &[(1, 1, 4, 5)]),
    ((2, 5, 6), &[(1, 2, 2, 7), (1, 2, 4, 5)]),
    ((2, 5, 7), &[(1, 1, 5, 5)]),
    ((2, 6, 7), &[(-1, 2, 4, 7), (1, 1, 5, 6)]),
    ((3, 4, 5), &[(-1, 2, 1, 7), (1, 2, 2, 6), (1, 2, 3, 5), (-1, 4, 4, 4)]),
    ((3, 4, 6), &[(1, 1, 3, 6)]),
    ((3, 4, 7), &[(1, 1, 4, 6)]),
    ((3, 5, 6), &[(1, 2, 3, 7), (1, 2, 4, 6)]),
    ((3, 5, 7), &[(1, 2, 4, 7), (1, 1, 5, 6)]),
    ((3, 6, 7), &[(1, 1, 6, 6)]),
    ((4, 5, 6), &[(1, 2, 4, 7)]),
    ((4, 5, 7), &[(1, 1, 5, 7)]),
    ((4, 6, 7), &[(1, 1, 6, 7)]),
    ((5, 6, 7), &[(1, 2, 7, 7)]),
];

/// Table entry for the `idx`-th triple as a symmetric matrix.
pub fn table1_sym2(idx: usize) -> Sym2 {
    let mut n: Sym2 = Mat::zeros(7, 7);
    for &(num, den, a, b) in TABLE1[idx].1 {
        let c = Rational::new(num, den);
        let (a, b) = (a - 1, b - 1);
        if a == b {
            n[(a, a)] = n[(a, a)].clone() + c;
        } else {
            let h = c * Rational::new(1, 2);
            n[(a, b)] = n[(a, b)].clone() + &h;
            n[(b, a)] = n[(b, a)].clone() + h;
        }
    }
    n
}

/// `m: Sym²V -> Q[x]`, `Σ N_ab v_a v_b` evaluated on a basis.
pub fn sym2_to_poly(n: &Sym2, basis: &[QPoly]) -> QPoly {
    let mut acc = QPoly::zero();
    for a in 0..7 {
        for b in 0..7 {
            if !n[(a, b)].is_zero() {
                acc = &acc + &(&basis[a] * &basis[b]).scale(&n[(a, b)]);
            }
        }
    }
    acc
}

/// `B` applied to an element of `Sym²V` in a Witt basis.
pub fn sym2_pairing(n: &Sym2) -> Rational {
    let mut acc = Rational::zero();
    for a in 0..7 {
        let g = witt_gram_entry(a, 6 - a);
        acc = acc + n[(a, 6 - a)].clone() * g;
    }
    acc
}

/// `φ(a∧b∧c)` from the spinor model; fails if it is not rational.
pub fn phi_rational(a: &[Rational], b: &[Rational], c: &[Rational]) -> Result<Sym2> {
    let n = spin::phi(&spin::lift(a), &spin::lift(b), &spin::lift(c));
    let rows: Vec<Vec<Rational>> = n
        .rows_vec()
        .iter()
        .map(|r| spin::lower(r).ok_or_else(|| Error::NotRational("phi entry".into())))
        .collect::<Result<_>>()?;
    Mat::from_rows(rows, 7)
}

/// Which triples a standard-basis check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// `123, 124, 125, 156, 237` plus the Witt pairing.
    Fast,
    /// All 35 entries plus the Witt pairing.
    Full,
}

/// First violated condition of a standard-basis check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    NotABasis,
    Witt { i: usize, j: usize, found: Rational },
    /// 1-based triple whose divided Wronskian differs from the table.
    Table { triple: (usize, usize, usize) },
    Form(String),
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyFailure::NotABasis => write!(f, "not a basis of the space"),
            VerifyFailure::Witt { i, j, found } => {
                write!(f, "B(v{}, v{}) = {found} breaks the Witt pairing", i + 1, j + 1)
            }
            VerifyFailure::Table { triple: (i, j, k) } => {
                write!(f, "divided Wronskian of (v{i}, v{j}, v{k}) differs from the table")
            }
            VerifyFailure::Form(s) => write!(f, "{s}"),
        }
    }
}

const FAST_TRIPLES: [usize; 5] = [0, 1, 2, 12, 18];

/// Divided Wronskian of one table triple next to the table's prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub triple: (usize, usize, usize),
    pub computed: QPoly,
    pub expected: QPoly,
}

/// All 35 table triples evaluated on `basis`.
pub fn table1_entries(space: &PolySpace, basis: &[QPoly], exec: Exec) -> Result<Vec<TableEntry>> {
    let idx: Vec<usize> = (0..35).collect();
    exec.map(&idx, |&t| {
        let ((i, j, k), _) = TABLE1[t];
        let computed = space.divided_wronskian(&[basis[i - 1].clone(), basis[j - 1].clone(), basis[k - 1].clone()])?;
        Ok(TableEntry { triple: (i, j, k), computed, expected: sym2_to_poly(&table1_sym2(t), basis) })
    })
    .into_iter()
    .collect()
}

/// Checks that `basis` is a standard basis of `space`.
pub fn verify_standard_basis(
    space: &PolySpace,
    basis: &[QPoly],
    mode: VerifyMode,
    exec: Exec,
) -> std::result::Result<(), VerifyFailure> {
    if basis.len() != 7 || PolySpace::canonicalize(basis) != *space {
        return Err(VerifyFailure::NotABasis);
    }
    let g = space.gram_in(basis).map_err(|e| VerifyFailure::Form(e.to_string()))?;
    for i in 0..7 {
        for j in 0..7 {
            if g[(i, j)] != witt_gram_entry(i, j) {
                return Err(VerifyFailure::Witt { i, j, found: g[(i, j)].clone() });
            }
        }
    }
    let idx: Vec<usize> = match mode {
        VerifyMode::Fast => FAST_TRIPLES.to_vec(),
        VerifyMode::Full => (0..35).collect(),
    };
    let ok = exec.map(&idx, |&t| {
        let ((i, j, k), _) = TABLE1[t];
        let w = space.divided_wronskian(&[basis[i - 1].clone(), basis[j - 1].clone(), basis[k - 1].clone()]);
        w.map(|w| w == sym2_to_poly(&table1_sym2(t), basis)).unwrap_or(false)
    });
    match idx.iter().zip(&ok).find(|(_, ok)| !**ok) {
        Some((&t, _)) => Err(VerifyFailure::Table { triple: TABLE1[t].0 }),
        None => Ok(()),
    }
}

/// Kernel of `w(v, ., .)`.
pub fn kernel_2form(w: &ThreeForm, v: &[Rational]) -> Vec<Vec<Rational>> {
    span_basis(&w.contract(v).kernel(), 7)
}

/// `B` in Witt coordinates.
pub fn witt_b(a: &[Rational], b: &[Rational]) -> Rational {
    spin::b_v(a, b)
}

/// Cross product `a × b` with `B(a × b, c) = w(a, b, c)` in Witt coordinates.
pub fn cross(w: &ThreeForm, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); 7];
    for (k, o) in (0..7).zip(out.iter_mut().rev()) {
        // the k-th coordinate functional is B-dual to (-1)^k e_(6-k)
        let mut e = vec![Rational::zero(); 7];
        e[k] = Rational::one();
        let v = w.eval(a, b, &e);
        *o = if k % 2 == 0 { v } else { -v };
    }
    out
}

/// Signs of permutations and the wedge `α∧β∧γ(e_1..e_7)` for 2-, 2-, 3-forms.
fn wedge_223(alpha: &Mat<Rational>, beta: &Mat<Rational>, gamma: &ThreeForm) -> Rational {
    let mut acc = Rational::zero();
    for a in combinations(7, 2) {
        let rest: Vec<usize> = (0..7).filter(|x| !a.contains(x)).collect();
        for bi in combinations(5, 2) {
            let b: Vec<usize> = bi.iter().map(|&i| rest[i]).collect();
            let c: Vec<usize> = rest.iter().copied().filter(|x| !b.contains(x)).collect();
            let perm: Vec<usize> = a.iter().chain(&b).chain(&c).copied().collect();
            let t = alpha[(a[0], a[1])].clone() * &beta[(b[0], b[1])] * gamma.get(c[0], c[1], c[2]);
            if t.is_zero() {
                continue;
            }
            acc = if perm_parity(&perm) { acc - t } else { acc + t };
        }
    }
    acc
}

/// `true` for odd permutations.
pub fn perm_parity(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// `b(x, y) = w(x,.,.) ∧ w(y,.,.) ∧ w` on `e_1 ∧ ... ∧ e_7`, as a Gram matrix.
pub fn associated_two_form(w: &ThreeForm, exec: Exec) -> Mat<Rational> {
    let unit = |i: usize| -> Vec<Rational> {
        (0..7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    };
    let contractions: Vec<Mat<Rational>> = (0..7).map(|i| w.contract(&unit(i))).collect();
    let pairs: Vec<(usize, usize)> = (0..7).flat_map(|i| (i..7).map(move |j| (i, j))).collect();
    let vals = exec.map(&pairs, |&(i, j)| wedge_223(&contractions[i], &contractions[j], w));
    let mut m = Mat::zeros(7, 7);
    for ((i, j), v) in pairs.into_iter().zip(vals) {
        m[(i, j)] = v.clone();
        m[(j, i)] = v;
    }
    m
}

/// `λ` with `m = λ J` for the Witt Gram matrix `J`, if any.
pub fn witt_proportionality(m: &Mat<Rational>) -> Option<Rational> {
    let lambda = m[(0, 6)].clone();
    let ok = (0..7).all(|i| (0..7).all(|j| m[(i, j)] == lambda.clone() * witt_gram_entry(i, j)));
    ok.then_some(lambda)
}

/// Isotropic 3-space in Witt coordinates transversal to `span(e_4..e_7)`.
///
/// Rows are `e_k + s_k e_4 + Σ_l a_kl f_l` with `B(e_k, f_l) = δ_kl` and
/// `a_kl + a_lk = s_k s_l`.
pub fn isotropic_chart(s: &[Rational; 3], r: &[Rational; 3]) -> Vec<Vec<Rational>> {
    let half = Rational::new(1, 2);
    let anti = |k: usize, l: usize| -> Rational {
        match (k, l) {
            (0, 1) => r[0].clone(),
            (1, 0) => -r[0].clone(),
            (0, 2) => r[1].clone(),
            (2, 0) => -r[1].clone(),
            (1, 2) => r[2].clone(),
            (2, 1) => -r[2].clone(),
            _ => Rational::zero(),
        }
    };
    // f_0 = e_6, f_1 = -e_5, f_2 = e_4 (0-based)
    let f_pos = [6usize, 5, 4];
    let f_sign = [1i64, -1, 1];
    (0..3)
        .map(|k| {
            let mut u = vec![Rational::zero(); 7];
            u[k] = Rational::one();
            u[3] = s[k].clone();
            for l in 0..3 {
                let a = s[k].clone() * &s[l] * &half + anti(k, l);
                u[f_pos[l]] = u[f_pos[l]].clone() + a * Rational::integer(f_sign[l]);
            }
            u
        })
        .collect()
}

/// Outcome of recovering the 3-form from Wronskians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WronskianForm {
    Form(ThreeForm),
    /// An isotropic triple whose divided Wronskian is not `c f²` with `f` in the space.
    NotSquare { triple: Vec<Vec<Rational>> },
    /// The values are not those of any 3-form.
    Inconsistent,
}

fn poly_of(basis: &[QPoly], c: &[Rational]) -> QPoly {
    basis.iter().zip(c).fold(QPoly::zero(), |acc, (b, x)| &acc + &b.scale(x))
}

/// `w(a,b,c) = c B(f, f)` where `W†(a,b,c) = c f²`, sampled on isotropic triples of a
/// Witt basis and solved for the 35 components. Deterministic for a given seed.
pub fn three_form_from_wronskians(
    space: &PolySpace,
    witt: &WittBasis,
    seed: u64,
    exec: Exec,
) -> Result<WronskianForm> {
    let basis = &witt.vectors;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for _round in 0..6 {
        let charts: Vec<Vec<Vec<Rational>>> = (0..12)
            .map(|_| {
                let mut g = || Rational::integer(rng.gen_range(-3..=3));
                let s = [g(), g(), g()];
                let r = [g(), g(), g()];
                isotropic_chart(&s, &r)
            })
            .collect();
        let results = exec.map(&charts, |u| -> Result<Option<Rational>> {
            let fs: Vec<QPoly> = u.iter().map(|c| poly_of(basis, c)).collect();
            let w = space.divided_wronskian(&fs)?;
            let lc = w.leading().cloned().ok_or_else(|| Error::Form("vanishing Wronskian".into()))?;
            let h = match w.scale(&lc.inv().expect("nonzero")).perfect_square_root() {
                Ok(h) => h,
                Err(_) => return Ok(None),
            };
            let Some(hc) = witt_coords(space, basis, &h) else {
                return Ok(None);
            };
            Ok(Some(lc * witt_b(&hc, &hc)))
        });
        for (u, res) in charts.iter().zip(results) {
            let Some(val) = res? else {
                return Ok(WronskianForm::NotSquare { triple: u.clone() });
            };
            rows.push(triples().iter().map(|t| minor3(&u[0], &u[1], &u[2], *t)).collect());
            rhs.push(val);
        }
        let m = Mat::from_rows(rows.clone(), 35)?;
        if m.rank() == 35 {
            return Ok(match m.solve(&rhs)? {
                Solution::Solved { particular, .. } => WronskianForm::Form(ThreeForm { values: particular }),
                Solution::Inconsistent => WronskianForm::Inconsistent,
            });
        }
    }
    Err(Error::Form("isotropic triples did not span the third exterior power".into()))
}

/// Coordinates of `f` in `basis` (a basis of `space`).
pub fn witt_coords(space: &PolySpace, basis: &[QPoly], f: &QPoly) -> Option<Vec<Rational>> {
    let x = space.coords(f)?;
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| space.coords(b)).collect::<Option<_>>()?;
    let m = Mat::from_cols(&cols, space.dim()).ok()?;
    m.solve(&x).ok()?.particular().cloned()
}

/// Standard basis `v_1..v_7` of a self-self-dual space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardBasis {
    pub vectors: Vec<QPoly>,
}

/// Necessary condition that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Dimension,
    BasePoint,
    SelfDual,
    Ramification,
    DegreePattern,
    LowestTriple,
    SquareRoots,
    ThreeForm,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Dimension => "dimension 7",
            Stage::BasePoint => "no base point",
            Stage::SelfDual => "self-duality",
            Stage::Ramification => "T_1 = T_3",
            Stage::DegreePattern => "degree pattern",
            Stage::LowestTriple => "lowest triple is a square",
            Stage::SquareRoots => "isotropic Wronskians are squares",
            Stage::ThreeForm => "Wronskian values form a 3-form",
        };
        write!(f, "{s}")
    }
}

/// Result of [`check_ssd`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsdVerdict {
    Certified(StandardBasis),
    NotSsd { stage: Stage, detail: String },
    Undecided { reason: String },
}

const FORM_SEED: u64 = 0x5eed_0007;

/// Constructs a standard basis adapted to the degree filtration.
///
/// From a dominant Witt basis `e`: `v_1 = e_1`, `v_7 = e_7`, `v_4 = 4 v_1 × v_7`; `v_5, v_6`
/// come from the `-1/4` eigenspace of `v_4 × .`, made orthogonal to `v_7`;
/// `v_2 = 4 v_1 × v_5`, `v_3 = 4 v_1 × v_6`. The result is always verified in full.
pub fn find_standard_basis(space: &PolySpace, exec: Exec) -> Result<SsdVerdict> {
    let witt = match space.witt_basis() {
        Ok(w) => w,
        Err(e) => return Ok(SsdVerdict::Undecided { reason: e.to_string() }),
    };
    if !witt.dominant_leading {
        return Ok(SsdVerdict::Undecided { reason: "Witt basis leading coefficients are not dominant".into() });
    }
    let w = match three_form_from_wronskians(space, &witt, FORM_SEED, exec)? {
        WronskianForm::Form(w) => w,
        WronskianForm::NotSquare { triple } => {
            let detail = format!("isotropic triple {triple:?} in Witt coordinates");
            return Ok(SsdVerdict::NotSsd { stage: Stage::SquareRoots, detail });
        }
        WronskianForm::Inconsistent => {
            return Ok(SsdVerdict::NotSsd { stage: Stage::ThreeForm, detail: "inconsistent system".into() })
        }
    };
    let unit = |i: usize| -> Vec<Rational> {
        (0..7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    };
    let four = Rational::integer(4);
    let scale = |v: Vec<Rational>, c: &Rational| -> Vec<Rational> { v.into_iter().map(|x| x * c).collect() };
    let v1 = unit(0);
    let v7 = unit(6);
    let v4 = scale(cross(&w, &v1, &v7), &four);
    let l = Mat::from_cols(&(0..7).map(|i| cross(&w, &v4, &unit(i))).collect::<Vec<_>>(), 7)?;
    let quarter = Rational::new(1, 4);
    let eig = |lam: &Rational| l.add(&Mat::identity(7).scale(&-lam.clone())).kernel();
    let u1 = eig(&-quarter.clone());
    if u1.len() != 3 {
        return Ok(SsdVerdict::Undecided { reason: "eigenspace of v4 x . is not 3-dimensional".into() });
    }
    // echelon by highest index: reverse columns, rref, reverse back
    let rev: Vec<Vec<Rational>> = u1.iter().map(|v| v.iter().rev().cloned().collect()).collect();
    let (r, piv) = Mat::from_rows(rev, 7)?.rref();
    let lead: Vec<usize> = piv.iter().map(|&c| 6 - c).collect();
    if lead != vec![5, 4, 0] {
        return Ok(SsdVerdict::Undecided { reason: format!("eigenspace leading indices {lead:?}") });
    }
    let row = |i: usize| -> Vec<Rational> { r.row(i).iter().rev().cloned().collect() };
    let orth = |u: Vec<Rational>| -> Vec<Rational> {
        let t = witt_b(&u, &v7);
        u.iter().zip(&v1).map(|(a, b)| a.clone() - t.clone() * b).collect()
    };
    let v6 = orth(row(0));
    let v5 = orth(row(1));
    let v2 = scale(cross(&w, &v1, &v5), &four);
    let v3 = scale(cross(&w, &v1, &v6), &four);
    let coords = [v1, v2, v3, v4, v5, v6, v7];
    let vectors: Vec<QPoly> = coords.iter().map(|c| poly_of(&witt.vectors, c)).collect();
    match verify_standard_basis(space, &vectors, VerifyMode::Full, exec) {
        Ok(()) => Ok(SsdVerdict::Certified(StandardBasis { vectors })),
        Err(f) => Ok(SsdVerdict::Undecided { reason: format!("constructed basis failed verification: {f}") }),
    }
}

/// Decides whether a space is self-self-dual, with a certificate either way when possible.
pub fn check_ssd(space: &PolySpace, exec: Exec) -> Result<SsdVerdict> {
    let not = |stage: Stage, detail: &str| Ok(SsdVerdict::NotSsd { stage, detail: detail.to_string() });
    if space.dim() != 7 {
        return not(Stage::Dimension, &format!("dimension {}", space.dim()));
    }
    let ram = match space.ramification() {
        Ok(r) => r.clone(),
        Err(Error::BasePoint) => return not(Stage::BasePoint, "all elements share a root"),
        Err(e) => return Err(e),
    };
    if !space.check_self_dual()? {
        return not(Stage::SelfDual, "complementary 6-Wronskians span a different space");
    }
    if ram.t[0] != ram.t[2] {
        return not(Stage::Ramification, &format!("T_1 = {} but T_3 = {}", ram.t[0], ram.t[2]));
    }
    if crate::polyspace::g2_degree_pattern(space.degrees()).is_none() {
        return not(Stage::DegreePattern, &format!("degrees {:?}", space.degrees()));
    }
    let witt = match space.witt_basis() {
        Ok(w) => w,
        Err(e) => return Ok(SsdVerdict::Undecided { reason: e.to_string() }),
    };
    let low = space.divided_wronskian(&witt.vectors[..3])?;
    let e1 = witt.vectors[0].monic();
    let lc = low.leading().cloned().unwrap_or_else(Rational::zero);
    if lc.is_zero() || low.scale(&lc.inv().expect("nonzero")) != &e1 * &e1 {
        return not(Stage::LowestTriple, "W(u1, u2, u3) is not proportional to u1^2");
    }
    find_standard_basis(space, exec)
}

/// Flag `F_1 ⊂ ... ⊂ F_6` of subspaces of a 7-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Flag {
    pub spaces: Vec<PolySpace>,
}

/// `F_i = span(v_1..v_i)`.
pub fn basis_to_flag(basis: &[QPoly]) -> G2Flag {
    G2Flag { spaces: (1..7).map(|i| PolySpace::canonicalize(&basis[..i])).collect() }
}

/// Whether the flag satisfies `B(F_i, F_(7-i)) = 0` and `F_3 = ker w(F_1, ., .)`,
/// with `w` the standard form in the coordinates of `standard`.
pub fn g2_isotropic_check(space: &PolySpace, standard: &StandardBasis, flag: &G2Flag) -> Result<bool> {
    if flag.spaces.len() != 6 || flag.spaces.iter().enumerate().any(|(i, s)| s.dim() != i + 1) {
        return Ok(false);
    }
    let to_coords = |s: &PolySpace| -> Result<Vec<Vec<Rational>>> {
        s.basis()
            .iter()
            .map(|f| witt_coords(space, &standard.vectors, f).ok_or(Error::NotInSpace))
            .collect()
    };
    let f: Vec<Vec<Vec<Rational>>> = flag.spaces.iter().map(to_coords).collect::<Result<_>>()?;
    for i in 0..5 {
        if !f[i].iter().all(|v| in_span(v, &f[i + 1], 7)) {
            return Ok(false);
        }
    }
    // F_(i+1) against F_(6-i), 0-based
    for i in 0..6 {
        for a in &f[i] {
            for b in &f[5 - i] {
                if !witt_b(a, b).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    let k = kernel_2form(&standard_three_form(), &f[0][0]);
    Ok(span_basis(&k, 7) == span_basis(&f[2], 7))
}

/// `(y_1, y_2)`: the generator of `F_1` and the monic divided Wronskian of `F_2`.
pub fn flag_to_pair(space: &PolySpace, flag: &G2Flag) -> Result<(QPoly, QPoly)> {
    let y1 = flag.spaces[0].basis()[0].clone();
    let y2 = space.divided_wronskian(flag.spaces[1].basis())?.monic();
    Ok((y1, y2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn spin_form_matches_literal() {
        assert_eq!(spin_three_form().unwrap(), standard_three_form());
    }

    #[test]
    fn three_form_antisymmetry() {
        let w = standard_three_form();
        assert_eq!(w.get(0, 3, 6), q(1, 4));
        assert_eq!(w.get(3, 0, 6), q(-1, 4));
        assert_eq!(w.get(6, 3, 0), q(-1, 4));
        assert_eq!(w.get(0, 0, 6), q(0, 1));
    }

    #[test]
    fn three_form_json_round_trip() {
        let w = standard_three_form();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"147":"1/4","156":"-1/4","237":"-1/2","246":"1/4","345":"-1/4"}"#);
        assert_eq!(serde_json::from_str::<ThreeForm>(&s).unwrap(), w);
    }

    #[test]
    fn table_matches_phi_everywhere() {
        for (idx, t) in triples().iter().enumerate() {
            let e = |i: usize| -> Vec<Rational> {
                (0..7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
            };
            let n = phi_rational(&e(t[0]), &e(t[1]), &e(t[2])).unwrap();
            assert_eq!(n, table1_sym2(idx), "triple {t:?}");
        }
    }

    #[test]
    fn pairing_of_table_is_the_form() {
        let w = standard_three_form();
        for (idx, t) in triples().iter().enumerate() {
            assert_eq!(sym2_pairing(&table1_sym2(idx)), w.get(t[0], t[1], t[2]));
        }
    }

    #[test]
    fn kernels_of_basis_vectors() {
        let w = standard_three_form();
        let e = |i: usize| -> Vec<Rational> {
            (0..7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
        };
        assert_eq!(kernel_2form(&w, &e(0)), span_basis(&[e(0), e(1), e(2)], 7));
        assert_eq!(kernel_2form(&w, &e(6)), span_basis(&[e(4), e(5), e(6)], 7));
        assert_eq!(kernel_2form(&w, &e(3)), vec![e(3)]);
    }

    #[test]
    fn chart_is_isotropic() {
        let u = isotropic_chart(&[q(1, 1), q(-2, 1), q(3, 1)], &[q(2, 1), q(0, 1), q(-1, 1)]);
        for a in &u {
            for b in &u {
                assert!(witt_b(a, b).is_zero());
            }
        }
    }

    #[test]
    fn cross_products() {
        let w = standard_three_form();
        let e = |i: usize| -> Vec<Rational> {
            (0..7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
        };
        let s = |v: Vec<Rational>, c: Rational| -> Vec<Rational> { v.into_iter().map(|x| x * &c).collect() };
        assert_eq!(cross(&w, &e(0), &e(6)), s(e(3), q(1, 4)));
        assert_eq!(cross(&w, &e(0), &e(4)), s(e(1), q(1, 4)));
        assert_eq!(cross(&w, &e(0), &e(5)), s(e(2), q(1, 4)));
    }

    fn certified(space: &PolySpace) -> StandardBasis {
        match check_ssd(space, Exec::default()).unwrap() {
            SsdVerdict::Certified(b) => b,
            other => panic!("not certified: {other:?}"),
        }
    }

    #[test]
    fn full_space_standard_basis_is_divided_powers() {
        let v = PolySpace::polys_up_to(6);
        let b = certified(&v);
        let fact = |k: i64| (1..=k).product::<i64>();
        let want: Vec<QPoly> = (0..7).map(|k| QPoly::monomial(q(1, fact(k as i64)), k)).collect();
        assert_eq!(b.vectors, want);
    }

    #[test]
    fn monomial_space_gets_scaled_monomials() {
        let v = PolySpace::g2_monomial(1, 3);
        let b = certified(&v);
        let lcs = crate::polyspace::g2_leading_coefficients(1, 3);
        for (p, l) in b.vectors.iter().zip(lcs.iter()) {
            assert_eq!(p.coeffs().iter().filter(|c| !c.is_zero()).count(), 1);
            assert_eq!(p.leading(), Some(l));
        }
    }

    #[test]
    fn non_self_dual_space_is_rejected() {
        let v = PolySpace::monomials(&[0, 1, 2, 3, 4, 5, 7]);
        match check_ssd(&v, Exec::default()).unwrap() {
            SsdVerdict::NotSsd { stage, .. } => assert_eq!(stage, Stage::SelfDual),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flag_of_standard_basis() {
        let v = PolySpace::polys_up_to(6);
        let b = certified(&v);
        let f = basis_to_flag(&b.vectors);
        assert!(g2_isotropic_check(&v, &b, &f).unwrap());
        assert_eq!(flag_to_pair(&v, &f).unwrap(), (QPoly::one(), QPoly::one()));
        let mut bad = f.clone();
        bad.spaces[2] = PolySpace::canonicalize(&[b.vectors[0].clone(), b.vectors[1].clone(), b.vectors[3].clone()]);
        assert!(!g2_isotropic_check(&v, &b, &bad).unwrap());
    }

    #[test]
    fn associated_form_is_proportional_to_witt() {
        let m = associated_two_form(&standard_three_form(), Exec::default());
        let lambda = witt_proportionality(&m).expect("proportional");
        assert!(!lambda.is_zero());
    }

    #[test]
    fn parity() {
        assert!(!perm_parity(&[0, 1, 2]));
        assert!(perm_parity(&[1, 0, 2]));
        assert!(!perm_parity(&[1, 2, 0]));
    }
}
