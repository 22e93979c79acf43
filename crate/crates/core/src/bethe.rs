//! Bethe tuples, the reproduction procedure, populations, the differential operator
//! annihilating the population space, and weight bookkeeping.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::par::Exec;
use crate::poly::{apply_log_factor, wronskian, QPoly, RatFun};
use crate::polyspace::PolySpace;
use crate::scalar::{Field, Rational};

/// Root system of a Bethe system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    G2,
    C3,
    A6,
}

impl Kind {
    pub fn rank(self) -> usize {
        match self {
            Kind::G2 => 2,
            Kind::C3 => 3,
            Kind::A6 => 6,
        }
    }

    /// `C[i][j] = <α_j, α_i^∨>`. For G2, `α_1` is the long root.
    pub fn cartan(self) -> Vec<Vec<i64>> {
        match self {
            Kind::G2 => vec![vec![2, -1], vec![-3, 2]],
            Kind::C3 => vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]],
            Kind::A6 => (0..6)
                .map(|i: usize| {
                    (0..6)
                        .map(|j| match i.abs_diff(j) {
                            0 => 2,
                            1 => -1,
                            _ => 0,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// A Bethe system: root data and the fixed polynomials `T_1..T_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub kind: Kind,
    pub t: Vec<QPoly>,
}

impl System {
    pub fn new(kind: Kind, t: Vec<QPoly>) -> Result<Self> {
        if t.len() != kind.rank() || t.iter().any(|p| p.is_zero()) {
            return Err(Error::Input(format!("{kind:?} needs {} nonzero T polynomials", kind.rank())));
        }
        Ok(System { kind, t })
    }

    /// All `T_i = 1`.
    pub fn trivial(kind: Kind) -> Self {
        System { kind, t: vec![QPoly::one(); kind.rank()] }
    }

    /// Right-hand side of `W(y_i, ỹ_i) = T_i Π_(j≠i) y_j^(-C[i][j])`.
    pub fn rhs(&self, y: &[QPoly], i: usize) -> QPoly {
        let c = self.kind.cartan();
        let mut r = self.t[i].clone();
        for (j, yj) in y.iter().enumerate() {
            if j != i && c[i][j] < 0 {
                r = &r * &yj.pow((-c[i][j]) as u32);
            }
        }
        r
    }

    /// Pairs of coordinates that must have no common root.
    pub fn linked_pairs(&self) -> Vec<(usize, usize)> {
        let c = self.kind.cartan();
        let r = self.kind.rank();
        (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| c[i][j] != 0).collect()
    }
}

/// Solutions of `W(y, ỹ) = rhs`: `base + c·y`, with `base` free of the `x^deg(y)` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fertility {
    Fertile { base: QPoly },
    Infertile,
}

/// Solves `W(y, ỹ) = rhs` for `ỹ`.
///
/// `W(y, x^k)` has leading term `(k - d) lc(y) x^(k+d-1)`, so the system is triangular:
/// coefficients are fixed from the top down, skipping `k = d`.
pub fn fertility_solve(y: &QPoly, rhs: &QPoly) -> Result<Fertility> {
    let d = y.degree().ok_or_else(|| Error::Input("y must be nonzero".into()))?;
    let Some(r) = rhs.degree() else {
        return Ok(Fertility::Fertile { base: QPoly::zero() });
    };
    let top = (r + 1).saturating_sub(d).max(d);
    let lc = y.leading().expect("nonzero").clone();
    let yc = y.coeffs();
    let dy = y.derivative();
    let dyc = dy.coeffs();
    let mut res: Vec<Rational> = (0..=top + d).map(|i| rhs.coeff(i)).collect();
    if r >= res.len() {
        return Ok(Fertility::Infertile);
    }
    let mut sol = vec![Rational::zero(); top + 1];
    for k in (0..=top).rev() {
        if k == d {
            continue;
        }
        let j = k + d - 1;
        let pivot = lc.clone() * Rational::integer(k as i64 - d as i64);
        let c = res[j].try_div(&pivot)?;
        if c.is_zero() {
            continue;
        }
        // res -= c (k y x^(k-1) - y' x^k)
        if k > 0 {
            let kc = c.clone() * Rational::integer(k as i64);
            for (i, a) in yc.iter().enumerate() {
                res[i + k - 1] = res[i + k - 1].clone() - kc.clone() * a;
            }
        }
        for (i, a) in dyc.iter().enumerate() {
            res[i + k] = res[i + k].clone() + c.clone() * a;
        }
        sol[k] = c;
    }
    if res.iter().any(|x| !x.is_zero()) {
        return Ok(Fertility::Infertile);
    }
    let base = QPoly::new(sol);
    debug_assert_eq!(wronskian(&[y.clone(), base.clone()]), *rhs);
    Ok(Fertility::Fertile { base })
}

/// Scalar-normalised tuple: every coordinate monic.
pub fn normalize_tuple(y: &[QPoly]) -> Vec<QPoly> {
    y.iter().map(QPoly::monic).collect()
}

/// Why a tuple is not generic, if it is not.
pub fn genericity_defect(sys: &System, y: &[QPoly]) -> Option<String> {
    let trivial = |g: Result<QPoly>| g.map(|g| g.degree() == Some(0)).unwrap_or(false);
    for (i, p) in y.iter().enumerate() {
        if p.is_zero() {
            return Some(format!("y{} is zero", i + 1));
        }
        if p.degree() != Some(0) && !trivial(p.gcd(&p.derivative())) {
            return Some(format!("y{} has multiple roots", i + 1));
        }
    }
    sys.linked_pairs()
        .into_iter()
        .find(|&(i, j)| !trivial(y[i].gcd(&y[j])))
        .map(|(i, j)| format!("y{} and y{} have a common root", i + 1, j + 1))
}

/// No multiple roots in any coordinate and no common roots along linked pairs.
pub fn is_generic(sys: &System, y: &[QPoly]) -> bool {
    genericity_defect(sys, y).is_none()
}

/// Sample parameters `c` for descendants `base + c·y_i`.
pub const SAMPLES: [i64; 4] = [0, 1, -1, 2];

/// Sampled generic descendants of a generic `y` in direction `i` (0-based), normalised and
/// deduplicated. Only the replaced coordinate is re-checked for genericity.
pub fn descendants(sys: &System, y: &[QPoly], i: usize) -> Result<Vec<Vec<QPoly>>> {
    let base = match fertility_solve(&y[i], &sys.rhs(y, i))? {
        Fertility::Infertile => return Ok(Vec::new()),
        Fertility::Fertile { base } => base,
    };
    let y = normalize_tuple(y);
    let linked: Vec<usize> = sys
        .linked_pairs()
        .into_iter()
        .filter_map(|(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
        .collect();
    let coprime = |a: &QPoly, b: &QPoly| a.gcd(b).map(|g| g.degree() == Some(0)).unwrap_or(false);
    let mut out: Vec<Vec<QPoly>> = Vec::new();
    for c in SAMPLES {
        let yi = (&base + &y[i].scale(&Rational::integer(c))).monic();
        if yi.is_zero() || yi == y[i] || out.iter().any(|t| t[i] == yi) {
            continue;
        }
        let generic = (yi.degree() == Some(0) || coprime(&yi, &yi.derivative()))
            && linked.iter().all(|&j| coprime(&yi, &y[j]));
        if generic {
            let mut t = y.clone();
            t[i] = yi;
            out.push(t);
        }
    }
    Ok(out)
}

/// Applies the canonical representative `base` in each listed direction (0-based).
pub fn reproduction_chain(sys: &System, seed: &[QPoly], dirs: &[usize]) -> Result<Vec<Vec<QPoly>>> {
    let mut cur = seed.to_vec();
    let mut out = Vec::new();
    for &i in dirs {
        match fertility_solve(&cur[i], &sys.rhs(&cur, i))? {
            Fertility::Infertile => return Err(Error::Input(format!("infertile in direction {}", i + 1))),
            Fertility::Fertile { base } => cur[i] = base.monic(),
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// One explored population member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Member {
    pub tuple: Vec<QPoly>,
    /// 1-based direction of the reproduction that produced it.
    pub direction: Option<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
}

/// Breadth-first sample of a population.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Population {
    pub members: Vec<Member>,
    /// Canonical reproductions in directions `1, 2, 1, 2, ...` from the seed, as far as fertile.
    pub chain: Vec<Vec<QPoly>>,
}

fn tuple_key(t: &[QPoly]) -> String {
    serde_json::to_string(t).expect("serialisable")
}

/// Explores reproductions from `seed` up to `depth` steps.
///
/// A member is not re-expanded in the direction it came from: those descendants lie on the
/// same line `span(y_i, ỹ_i)` already sampled from its parent.
pub fn population_bfs(sys: &System, seed: &[QPoly], depth: usize, exec: Exec) -> Result<Population> {
    let seed = normalize_tuple(seed);
    if seed.len() != sys.kind.rank() {
        return Err(Error::Input("tuple length does not match the rank".into()));
    }
    if let Some(why) = genericity_defect(sys, &seed) {
        return Err(Error::Input(format!("seed is not generic: {why}")));
    }
    for i in 0..sys.kind.rank() {
        if fertility_solve(&seed[i], &sys.rhs(&seed, i))? == Fertility::Infertile {
            return Err(Error::Input(format!("seed is infertile in direction {}", i + 1)));
        }
    }
    let mut members = vec![Member { tuple: seed.clone(), direction: None, parent: None, depth: 0 }];
    let mut seen: HashSet<Vec<QPoly>> = HashSet::from([seed]);
    let mut frontier: Vec<usize> = vec![0];
    for level in 1..=depth {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&m| {
                let from = members[m].direction;
                (0..sys.kind.rank()).filter(move |&i| Some(i + 1) != from).map(move |i| (m, i))
            })
            .collect();
        let results = exec.map(&jobs, |&(m, i)| descendants(sys, &members[m].tuple, i));
        let mut fresh: Vec<(String, Member)> = Vec::new();
        for (&(m, i), res) in jobs.iter().zip(results) {
            for t in res? {
                if seen.insert(t.clone()) {
                    fresh.push((
                        tuple_key(&t),
                        Member { tuple: t, direction: Some(i + 1), parent: Some(m), depth: level },
                    ));
                }
            }
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        frontier = Vec::with_capacity(fresh.len());
        for (_, mem) in fresh {
            frontier.push(members.len());
            members.push(mem);
        }
    }
    let mut chain = Vec::new();
    let mut cur = members[0].tuple.clone();
    for step in 0..depth.min(3 * sys.kind.rank()) {
        match reproduction_chain(sys, &cur, &[step % sys.kind.rank()]) {
            Ok(mut t) => cur = t.pop().expect("one step"),
            Err(_) => break,
        }
        chain.push(cur.clone());
    }
    Ok(Population { members, chain })
}

/// Span of the first coordinates of a G2 population, certified against the operator `D`
/// of the seed.
pub fn space_from_population(sys: &System, pop: &Population) -> Result<PolySpace> {
    if sys.kind != Kind::G2 {
        return Err(Error::Input("spanned spaces are defined for G2 populations".into()));
    }
    let firsts: Vec<QPoly> = pop.members.iter().map(|m| m.tuple[0].clone()).collect();
    let v = PolySpace::canonicalize(&firsts);
    if v.dim() != 7 {
        return Err(Error::Dimension(format!("first coordinates span {} dimensions, explore deeper", v.dim())));
    }
    let (ya, t) = g2_to_a6(sys, &pop.members[0].tuple);
    for b in v.basis() {
        if !apply_d(&ya, &t, b)?.is_zero() {
            return Err(Error::Form(format!("{b} is not annihilated by D")));
        }
    }
    Ok(v)
}

/// `ỹ_1, ỹ_2, ỹ_3` with `W(y_1, ỹ_1) = T_1 y_2`, `W(y_2, ỹ_2) = T_2 ỹ_1 y_1²`,
/// `W(ỹ_3, y_1) = T_1 ỹ_2`: the C3 reproductions of `(y_1, y_2, y_1)` in directions 1, 2, 3.
pub fn c3_chain(sys: &System, y: &[QPoly]) -> Result<[QPoly; 3]> {
    if sys.kind != Kind::G2 {
        return Err(Error::Input("the chain starts from a G2 pair".into()));
    }
    let (t1, t2) = (&sys.t[0], &sys.t[1]);
    let (y1, y2) = (&y[0], &y[1]);
    let solve = |y: &QPoly, rhs: QPoly, dir: usize| -> Result<QPoly> {
        match fertility_solve(y, &rhs)? {
            Fertility::Fertile { base } => Ok(base.monic()),
            Fertility::Infertile => Err(Error::Input(format!("infertile in C3 direction {dir}"))),
        }
    };
    let a = solve(y1, t1 * y2, 1)?;
    let b = solve(y2, &(t2 * &a) * &(y1 * y1), 2)?;
    let c = solve(y1, -(t1 * &b), 3)?;
    Ok([a, b, c])
}

/// An isotropic 3-space `U ⊂ V` with `W†(U) = ỹ_3²` and `ỹ_3 ⊥ U`, built as
/// `ũ_1 = ỹ_1`, `W(ũ_1, ũ_2) ∝ T_1 ỹ_2`, `W(ũ_1, ũ_2, ũ_3) ∝ ỹ_3² T_1² T_2`.
pub fn c3_certificate(space: &PolySpace, sys: &System, chain: &[QPoly; 3]) -> Result<Vec<QPoly>> {
    let (t1, t2) = (&sys.t[0], &sys.t[1]);
    let u1 = chain[0].clone();
    let u2 = solve_wronskian_in(space, std::slice::from_ref(&u1), &(t1 * &chain[1]))?;
    let target = &(&chain[2] * &chain[2]) * &(&(t1 * t1) * t2);
    let u3 = solve_wronskian_in(space, &[u1.clone(), u2.clone()], &target)?;
    let u = vec![u1, u2, u3];
    if space.divided_wronskian(&u)?.monic() != (&chain[2] * &chain[2]).monic() {
        return Err(Error::Form("divided Wronskian of U is not the square".into()));
    }
    if !space.isotropy(&u)? {
        return Err(Error::Form("U is not isotropic".into()));
    }
    for f in &u {
        if !space.bilinear_form(&chain[2], f)?.is_zero() {
            return Err(Error::Form("the square root is not orthogonal to U".into()));
        }
    }
    Ok(u)
}

/// Some `f ∈ V` with `W(fs, f) = λ·target` for `λ ≠ 0`.
fn solve_wronskian_in(space: &PolySpace, fs: &[QPoly], target: &QPoly) -> Result<QPoly> {
    let cols: Vec<QPoly> = space
        .basis()
        .iter()
        .map(|b| {
            let mut all = fs.to_vec();
            all.push(b.clone());
            wronskian(&all)
        })
        .chain(std::iter::once(-target.clone()))
        .collect();
    let rows = cols.iter().filter_map(|p| p.degree()).max().unwrap_or(0) + 1;
    let m = Mat::from_cols(&cols.iter().map(|p| (0..rows).map(|i| p.coeff(i)).collect()).collect::<Vec<_>>(), rows)?;
    let n = space.dim();
    let k = m
        .kernel()
        .into_iter()
        .find(|v| !v[n].is_zero())
        .ok_or_else(|| Error::Form("no element with the prescribed Wronskian".into()))?;
    let lam = k[n].clone();
    let c: Vec<Rational> = k[..n].iter().map(|x| x.try_div(&lam)).collect::<Result<_>>()?;
    Ok(space.from_coords(&c))
}

/// `(y_1, y_2, y_1², y_1², y_2, y_1)` and `(T_1, T_2, T_1, T_1, T_2, T_1)` of a G2 pair.
pub fn g2_to_a6(sys: &System, y: &[QPoly]) -> (Vec<QPoly>, Vec<QPoly>) {
    let y1sq = &y[0] * &y[0];
    let ya = vec![y[0].clone(), y[1].clone(), y1sq.clone(), y1sq, y[1].clone(), y[0].clone()];
    let (t1, t2) = (sys.t[0].clone(), sys.t[1].clone());
    (ya, vec![t1.clone(), t2.clone(), t1.clone(), t1.clone(), t2, t1])
}

/// `D f` for `D = Π_(i=0..6) (∂ - ln'(y_(7-i) Π_(s≤6-i) T_s / y_(6-i)))`, `y_0 = y_7 = 1`,
/// with the `i = 6` factor applied first.
pub fn apply_d(ya: &[QPoly], t: &[QPoly], f: &QPoly) -> Result<RatFun<Rational>> {
    if ya.len() != 6 || t.len() != 6 {
        return Err(Error::Input("operator needs six y and six T".into()));
    }
    let y = |k: usize| -> QPoly {
        if k == 0 || k == 7 {
            QPoly::one()
        } else {
            ya[k - 1].clone()
        }
    };
    let mut g = RatFun::from_poly(f.clone());
    let mut tprod = QPoly::one();
    for k in 1..=7 {
        let u = RatFun::new(&y(k) * &tprod, y(k - 1))?;
        g = apply_log_factor(&g, &u)?;
        if k <= 6 {
            tprod = &tprod * &t[k - 1];
        }
    }
    Ok(g)
}

/// Weight in fundamental-weight coordinates.
pub type Weight = Vec<i64>;

/// `α_j` in fundamental-weight coordinates: column `j` of the Cartan matrix.
pub fn simple_root(kind: Kind, j: usize) -> Weight {
    kind.cartan().iter().map(|row| row[j]).collect()
}

/// `Σ Λ_s` read off the multiplicities of the `T_i`: `(deg T_1, ..., deg T_r)`.
pub fn lambda_sum(sys: &System) -> Weight {
    sys.t.iter().map(|p| p.degree().unwrap_or(0) as i64).collect()
}

/// `Λ_∞ = Σ Λ_s - Σ deg(y_i) α_i`.
pub fn weight_at_infinity(sys: &System, y: &[QPoly], lambda_s: &Weight) -> Weight {
    let c = sys.kind.cartan();
    (0..sys.kind.rank())
        .map(|i: usize| {
            lambda_s[i]
                - y.iter().enumerate().map(|(j, yj)| yj.degree().unwrap_or(0) as i64 * c[i][j]).sum::<i64>()
        })
        .collect()
}

/// `s_i·λ = λ - (λ_i + 1) α_i`, `i` 0-based.
pub fn shifted_reflect(kind: Kind, lambda: &Weight, i: usize) -> Weight {
    let a = simple_root(kind, i);
    lambda.iter().zip(&a).map(|(l, ai)| l - (lambda[i] + 1) * ai).collect()
}

/// Orbit of the shifted action, by closure under simple reflections.
pub fn shifted_orbit(kind: Kind, lambda: &Weight) -> BTreeSet<Weight> {
    let mut orbit = BTreeSet::from([lambda.clone()]);
    let mut stack = vec![lambda.clone()];
    while let Some(l) = stack.pop() {
        for i in 0..kind.rank() {
            let r = shifted_reflect(kind, &l, i);
            if orbit.insert(r.clone()) {
                stack.push(r);
            }
        }
    }
    orbit
}

/// The dominant element of the shifted orbit, if any.
pub fn dominant_representative(kind: Kind, lambda: &Weight) -> Option<Weight> {
    let mut l = lambda.clone();
    loop {
        match (0..kind.rank()).find(|&i| l[i] < 0) {
            None => return Some(l),
            Some(i) if l[i] == -1 => return None,
            Some(i) => l = shifted_reflect(kind, &l, i),
        }
    }
}

/// Dimension of the irreducible G2 module with highest weight `(m, n)`.
pub fn weyl_dim_g2(m: u64, n: u64) -> u64 {
    (m + 1) * (n + 1) * (m + n + 2) * (m + 2 * n + 3) * (m + 3 * n + 4) * (2 * m + 3 * n + 5) / 120
}
