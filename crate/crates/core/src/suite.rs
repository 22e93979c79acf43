//! The acceptance checks, runnable from the library and the command line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bethe::{
    apply_d, g2_to_a6, lambda_sum, population_bfs, shifted_orbit, space_from_population,
    weight_at_infinity, weyl_dim_g2, Kind, Population, System,
};
use crate::g2::{
    associated_two_form, check_ssd, kernel_2form, phi_rational, spin_three_form, standard_three_form,
    sym2_to_poly, table1_entries, three_form_from_wronskians, verify_standard_basis, witt_b,
    witt_proportionality, SsdVerdict, VerifyMode, WronskianForm,
};
use crate::linalg::{same_span, span_basis, Mat};
use crate::par::Exec;
use crate::poly::{wronskian, Poly, QPoly};
use crate::polyspace::PolySpace;
use crate::scalar::{Field, QExt, Rational};
use crate::spin::{self, Preimages, Spinor, VVec};

/// Id, name and time budget of each criterion.
pub const CRITERIA: [(usize, &str, u64); 12] = [
    (1, "Table 1 reproduction", 5),
    (2, "3-form reproduction", 5),
    (3, "monomial family", 30),
    (4, "population round trip", 60),
    (5, "spin identities", 30),
    (6, "spinor embedding", 15),
    (7, "two preimages", 5),
    (8, "phi/Wronskian bridge", 30),
    (9, "associated form", 10),
    (10, "reproduction bases", 20),
    (11, "weight bookkeeping", 5),
    (12, "Wronskian identity", 10),
];

/// Result of one criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} AC{:<2} {:<24} {:>8.2?} (limit {:?})  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.limit,
            self.detail
        )
    }
}

/// State shared between criteria: the (1,1) population is explored once.
#[derive(Default)]
pub struct Context {
    pub exec: Exec,
    pub population: Option<Population>,
}

type Check = std::result::Result<String, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs one criterion, timing it against its budget.
pub fn run(id: usize, ctx: &mut Context) -> Outcome {
    let (_, name, secs) = CRITERIA[id - 1];
    let limit = Duration::from_secs(secs);
    let start = Instant::now();
    let res = match id {
        1 => table1(ctx.exec),
        2 => threeform(ctx.exec),
        3 => monomials(ctx.exec),
        4 => population(ctx),
        5 => spin_identities(),
        6 => embedding(),
        7 => two_preimages(),
        8 => bridge(ctx.exec),
        9 => associated(ctx.exec),
        10 => reproduction_bases_check(ctx.exec),
        11 => weights(ctx),
        12 => wronskian_identity(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let pass = ok && elapsed <= limit;
    let detail = if ok && !pass { format!("{detail}; over the time budget") } else { detail };
    Outcome { id, name, pass, detail, elapsed, limit }
}

/// Runs all criteria in order.
pub fn run_all(exec: Exec) -> Vec<Outcome> {
    let mut ctx = Context { exec, population: None };
    (1..=12).map(|id| run(id, &mut ctx)).collect()
}

/// `x^k / k!`, `k = 0..6`.
pub fn deg6_standard_basis() -> Vec<QPoly> {
    let mut fact = Rational::one();
    (0..7)
        .map(|k| {
            if k > 0 {
                fact = fact.clone() * Rational::integer(k as i64);
            }
            QPoly::monomial(fact.inv().expect("nonzero"), k)
        })
        .collect()
}

fn standard_basis_of(space: &PolySpace, exec: Exec) -> std::result::Result<Vec<QPoly>, String> {
    match check_ssd(space, exec).map_err(fail)? {
        SsdVerdict::Certified(b) => Ok(b.vectors),
        other => Err(format!("not certified: {other:?}")),
    }
}

fn rand_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rand_rational(rng)).collect()
}

fn rand_ext(rng: &mut ChaCha8Rng, n: usize) -> Vec<QExt> {
    (0..n).map(|_| QExt::new(rand_rational(rng), rand_rational(rng))).collect()
}

/// Random nonzero isotropic vector in Witt coordinates.
pub fn rand_isotropic(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut v = rand_vec(rng, 7);
    while v[0].is_zero() {
        v[0] = rand_rational(rng);
    }
    // B(v, v) = 2(v0 v6 - v1 v5 + v2 v4) - v3²
    let two = Rational::integer(2);
    let rest = v[3].clone() * &v[3] + two.clone() * &v[1] * &v[5] - two.clone() * &v[2] * &v[4];
    v[6] = rest.try_div(&(two * &v[0])).expect("v0 != 0");
    v
}

fn table1(exec: Exec) -> Check {
    let v = PolySpace::polys_up_to(6);
    let entries = table1_entries(&v, &deg6_standard_basis(), exec).map_err(fail)?;
    let bad: Vec<_> = entries.iter().filter(|e| e.computed != e.expected).map(|e| e.triple).collect();
    if bad.is_empty() {
        Ok(format!("{}/35 divided Wronskians match", entries.len()))
    } else {
        Err(format!("mismatch at {bad:?}"))
    }
}

fn threeform(exec: Exec) -> Check {
    let spin = spin_three_form().map_err(fail)?;
    let lit = standard_three_form();
    if spin != lit {
        return Err("spinor-route form differs from the stated values".into());
    }
    if spin.get(0, 3, 6) != Rational::new(1, 4) || spin.get(1, 2, 6) != Rational::new(-1, 2) {
        return Err("w(v1,v4,v7) or w(v2,v3,v7) is off".into());
    }
    let v = PolySpace::polys_up_to(6);
    let witt = v.witt_basis().map_err(fail)?;
    if witt.vectors != deg6_standard_basis() {
        return Err("Witt basis is not x^k/k!".into());
    }
    match three_form_from_wronskians(&v, &witt, 0x5eed_0007, exec).map_err(fail)? {
        WronskianForm::Form(w) if w == spin => Ok("35/35 values agree on both routes".into()),
        other => Err(format!("Wronskian route gives {other:?}")),
    }
}

fn monomials(exec: Exec) -> Check {
    for (m, n) in [(1usize, 2usize), (1, 3), (2, 3), (1, 4)] {
        let v = PolySpace::g2_monomial(m, n);
        standard_basis_of(&v, exec).map_err(|e| format!("({m},{n}): {e}"))?;
        let (a, b) = (QPoly::x_pow(m - 1), QPoly::x_pow(n - m - 1));
        let want = vec![a.clone(), b.clone(), a.clone(), a.clone(), b, a];
        let t = &v.ramification().map_err(fail)?.t;
        if *t != want {
            return Err(format!("({m},{n}): T = {t:?}"));
        }
    }
    Ok("4/4 certified with the expected ramification".into())
}

fn population(ctx: &mut Context) -> Check {
    let sys = System::trivial(Kind::G2);
    let seed = [QPoly::one(), QPoly::one()];
    let pop = population_bfs(&sys, &seed, 6, ctx.exec).map_err(fail)?;
    let v = space_from_population(&sys, &pop).map_err(fail)?;
    if v != PolySpace::polys_up_to(6) || v.degrees() != [0, 1, 2, 3, 4, 5, 6] {
        return Err(format!("spanned degrees {:?}", v.degrees()));
    }
    let (ya, t) = g2_to_a6(&sys, &seed);
    let members: Vec<&[QPoly]> = pop.members.iter().map(|m| m.tuple.as_slice()).collect();
    let seed_d = ctx.exec.map(&members, |y| apply_d(&ya, &t, &y[0]).map(|r| r.is_zero()).unwrap_or(false));
    if let Some(i) = seed_d.iter().position(|ok| !ok) {
        return Err(format!("member {i} not annihilated by D"));
    }
    // D built from another member must be the same operator
    let shallow: Vec<&[QPoly]> = pop.members.iter().filter(|m| m.depth <= 2).map(|m| m.tuple.as_slice()).collect();
    let own = ctx.exec.map(&shallow, |y| {
        let (ya, t) = g2_to_a6(&sys, y);
        v.basis().iter().all(|b| apply_d(&ya, &t, b).map(|r| r.is_zero()).unwrap_or(false))
    });
    if !own.iter().all(|&ok| ok) {
        return Err("a member's operator does not kill the space".into());
    }
    let detail = format!("{} members, {} own-operator checks", pop.members.len(), shallow.len());
    ctx.population = Some(pop);
    Ok(detail)
}

fn spin_identities() -> Check {
    if !spin::clifford_relations_hold() {
        return Err("Clifford relations on generators".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let id = Mat::<QExt>::identity(8);
    for k in 0..100 {
        let (u, v) = (spin::lift(&rand_vec(&mut rng, 7)), spin::lift(&rand_vec(&mut rng, 7)));
        let (au, av) = (spin::action(&u), spin::action(&v));
        let anti = au.mul(&av).map_err(fail)?.add(&av.mul(&au).map_err(fail)?);
        let b = spin::b_v(&u, &v);
        if anti != id.scale(&-b.clone()) {
            return Err(format!("instance {k}: uv + vu != -B(u,v)"));
        }
        let (p, q): (Spinor, Spinor) = (rand_ext(&mut rng, 8), rand_ext(&mut rng, 8));
        if spin::b_hat(&spin::act(&v, &p), &q) != -spin::b_hat(&p, &spin::act(&v, &q)) {
            return Err(format!("instance {k}: B̂(v·p, q) != -B̂(p, v·q)"));
        }
        if spin::b_hat(&spin::act(&u, &p), &spin::act(&v, &p)) != b * spin::q_hat(&p) {
            return Err(format!("instance {k}: B̂(u·p, v·p) != B(u,v) Q̂(p)"));
        }
        let w = spin::lift(&rand_isotropic(&mut rng));
        let m = spin::action(&w);
        let ker = m.kernel();
        let im: Vec<Vec<QExt>> = (0..8).map(|j| m.col(j)).collect();
        if ker.len() != 4 || !same_span(&ker, &im, 8) {
            return Err(format!("instance {k}: Ker(u) != Im(u) for isotropic u"));
        }
    }
    Ok("100 instances of each identity".into())
}

fn embedding() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let w = standard_three_form();
    for k in 0..20 {
        let v = rand_isotropic(&mut rng);
        let u = span_basis(&kernel_2form(&w, &v), 7);
        let iso = u.iter().all(|a| u.iter().all(|b| witt_b(a, b).is_zero()));
        if u.len() != 3 || !iso {
            return Err(format!("instance {k}: kernel is not an isotropic 3-space"));
        }
        let lifted: Vec<VVec> = u.iter().map(|r| spin::lift(r)).collect();
        let s = spin::spinor_embed(&lifted).map_err(fail)?;
        if !spin::q_hat(&s).is_zero() {
            return Err(format!("instance {k}: spinor off the conic"));
        }
        if !same_span(&spin::annihilator(&s), &lifted, 7) {
            return Err(format!("instance {k}: annihilator does not return the space"));
        }
    }
    Ok("20 isotropic 3-spaces".into())
}

fn span_of(ids: &[usize]) -> Vec<VVec> {
    ids.iter().map(|&i| spin::basis_vec(i)).collect()
}

fn two_preimages() -> Check {
    let (a, b) = match spin::preimages(&spin::basis_vec(4)).map_err(fail)? {
        Preimages::Pair(a, b) => (a, b),
        other => return Err(format!("preimages(v4) = {other:?}")),
    };
    let (x, y) = (span_of(&[1, 5, 6]), span_of(&[2, 3, 7]));
    let matched = (same_span(&a, &x, 7) && same_span(&b, &y, 7)) || (same_span(&a, &y, 7) && same_span(&b, &x, 7));
    if !matched {
        return Err("preimages(v4) are not span(v1,v5,v6) and span(v2,v3,v7)".into());
    }
    let sum: Vec<VVec> = a.iter().chain(&b).cloned().collect();
    if span_basis(&sum, 7).len() != 6 || !same_span(&sum, &span_of(&[1, 2, 3, 5, 6, 7]), 7) {
        return Err("U+ ⊕ U- is not v4^⊥".into());
    }
    match spin::preimages(&spin::basis_vec(1)).map_err(fail)? {
        Preimages::Unique(u) if crate::linalg::in_span(&spin::basis_vec(1), &u, 7) => {
            Ok("v4 has two preimages, v1 one".into())
        }
        other => Err(format!("preimages(v1) = {other:?}")),
    }
}

fn bridge(exec: Exec) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spaces = [("deg6", PolySpace::polys_up_to(6)), ("mono-1-3", PolySpace::g2_monomial(1, 3))];
    for (name, v) in &spaces {
        let basis = standard_basis_of(v, exec)?;
        let triples: Vec<[Vec<Rational>; 3]> =
            (0..50).map(|_| [rand_vec(&mut rng, 7), rand_vec(&mut rng, 7), rand_vec(&mut rng, 7)]).collect();
        let comb = |c: &[Rational]| basis.iter().zip(c).fold(QPoly::zero(), |acc, (b, x)| &acc + &b.scale(x));
        let ok = exec.map(&triples, |[a, b, c]| {
            let n = match phi_rational(a, b, c) {
                Ok(n) => n,
                Err(_) => return false,
            };
            let w = v.divided_wronskian(&[comb(a), comb(b), comb(c)]);
            w.map(|w| w == sym2_to_poly(&n, &basis)).unwrap_or(false)
        });
        if let Some(i) = ok.iter().position(|x| !x) {
            return Err(format!("{name}: triple {i} differs"));
        }
    }
    Ok("50 triples on deg6 and on mono-1-3".into())
}

fn associated(exec: Exec) -> Check {
    let m = associated_two_form(&standard_three_form(), exec);
    match witt_proportionality(&m) {
        Some(c) if !c.is_zero() => Ok(format!("b = {c} B on all 28 entries")),
        _ => Err("associated form is not a nonzero multiple of B".into()),
    }
}

/// The two bases of the final reproduction step, in standard coordinates.
pub fn reproduction_bases(c: &Rational) -> [Vec<Vec<Rational>>; 2] {
    let e = |i: usize| -> Vec<Rational> {
        (1..=7).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    };
    let lin = |terms: &[(Rational, usize)]| -> Vec<Rational> {
        terms.iter().fold(vec![Rational::zero(); 7], |acc, (a, i)| {
            acc.iter().zip(e(*i)).map(|(x, y)| x.clone() + a.clone() * y).collect()
        })
    };
    let one = Rational::one();
    let two_c = Rational::integer(2) * c;
    let two_c2 = two_c.clone() * c;
    let first = vec![
        lin(&[(one.clone(), 1), (c.clone(), 2)]),
        e(2),
        lin(&[(one.clone(), 3), (two_c.clone(), 4), (two_c2, 5)]),
        lin(&[(one.clone(), 4), (two_c, 5)]),
        e(5),
        lin(&[(one.clone(), 6), (c.clone(), 7)]),
        e(7),
    ];
    let second = vec![
        e(1),
        lin(&[(one.clone(), 2), (c.clone(), 3)]),
        e(3),
        e(4),
        lin(&[(one, 5), (c.clone(), 6)]),
        e(6),
        e(7),
    ];
    [first, second]
}

fn reproduction_basis_check(exec: Exec) -> std::result::Result<usize, String> {
    let spaces = [("deg6", PolySpace::polys_up_to(6)), ("mono-2-3", PolySpace::g2_monomial(2, 3))];
    let mut count = 0;
    for (name, v) in &spaces {
        let basis = standard_basis_of(v, exec)?;
        for c in [Rational::integer(1), Rational::integer(-1), Rational::integer(2), Rational::new(1, 2)] {
            for (k, coords) in reproduction_bases(&c).iter().enumerate() {
                let polys: Vec<QPoly> = coords
                    .iter()
                    .map(|x| basis.iter().zip(x).fold(QPoly::zero(), |acc, (b, a)| &acc + &b.scale(a)))
                    .collect();
                verify_standard_basis(v, &polys, VerifyMode::Full, exec)
                    .map_err(|f| format!("{name}, c = {c}, basis {}: {f}", k + 1))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn reproduction_bases_check(exec: Exec) -> Check {
    reproduction_basis_check(exec).map(|n| format!("{n} transformed bases certified"))
}

fn weights(ctx: &mut Context) -> Check {
    let sys = System::trivial(Kind::G2);
    let pop = match ctx.population.take() {
        Some(p) => p,
        None => population_bfs(&sys, &[QPoly::one(), QPoly::one()], 6, ctx.exec).map_err(fail)?,
    };
    let ls = lambda_sum(&sys);
    let seen: BTreeSet<Vec<i64>> = pop.members.iter().map(|m| weight_at_infinity(&sys, &m.tuple, &ls)).collect();
    let orbit = shifted_orbit(Kind::G2, &vec![0, 0]);
    ctx.population = Some(pop);
    if orbit.len() != 12 || seen != orbit {
        return Err(format!("{} weights seen, orbit has {}", seen.len(), orbit.len()));
    }
    let dims: Vec<u64> = [(0, 0), (1, 0), (0, 1), (2, 0)].iter().map(|&(m, n)| weyl_dim_g2(m, n)).collect();
    if dims != [1, 7, 14, 27] {
        return Err(format!("Weyl dimensions {dims:?}"));
    }
    Ok("12 weights, one shifted orbit; dims 1, 7, 14, 27".into())
}

fn wronskian_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let rand_poly = |rng: &mut ChaCha8Rng| -> QPoly {
        let d = rng.gen_range(0..=8);
        Poly::new(rand_vec(rng, d + 1))
    };
    for k in 0..100 {
        let (u1, u2, u3) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
        let lhs = wronskian(&[wronskian(&[u1.clone(), u2.clone()]), wronskian(&[u1.clone(), u3.clone()])]);
        let rhs = &wronskian(&[u1.clone(), u2, u3]) * &u1;
        if lhs != rhs {
            return Err(format!("triple {k}"));
        }
    }
    Ok("100 triples".into())
}
