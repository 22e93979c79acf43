use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use g2ssd::bethe::{
    descendants, dominant_representative, fertility_solve, genericity_defect, lambda_sum, population_bfs,
    shifted_orbit, space_from_population, weight_at_infinity, Fertility, Kind,
};
use g2ssd::g2::{
    basis_to_flag, check_ssd, flag_to_pair, g2_isotropic_check, kernel_2form, spin_three_form,
    standard_three_form, table1_entries, three_form_from_wronskians, triples, SsdVerdict, StandardBasis,
    ThreeForm, WronskianForm,
};
use g2ssd::io::{
    from_json, seed_fixture, space_fixture, vector_in, ScalarIn, SeedDoc, SeedFile, SpaceFile, VerdictReport,
};
use g2ssd::linalg::span_basis;
use g2ssd::polyspace::{PolySpace, WittBasis};
use g2ssd::spin::{self, Preimages, VVec};
use g2ssd::{suite, wronskian, Error, Exec, Field, QExt, QPoly, Rational};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{SeedInput, SpaceInput};

const FORM_SEED: u64 = 0x5eed_0007;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

pub enum Failure {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Math(String),
}

type Out = Result<Report, Failure>;

fn math(e: Error) -> Failure {
    Failure::Math(e.to_string())
}

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_space(i: &SpaceInput) -> Result<PolySpace, Failure> {
    match (&i.file, &i.fixture) {
        (Some(p), None) => {
            let f: SpaceFile = parse(p)?;
            if f.basis.iter().all(|b| b.is_zero()) {
                return Err(Failure::Input("empty basis".into()));
            }
            Ok(f.to_space())
        }
        (None, Some(name)) => space_fixture(name).map_err(input),
        (None, None) => Err(Failure::Input("give a space file or --fixture".into())),
        (Some(_), Some(_)) => Err(Failure::Input("give either a file or --fixture, not both".into())),
    }
}

fn load_seed(i: &SeedInput) -> Result<SeedFile, Failure> {
    match (&i.file, &i.fixture) {
        (Some(p), None) => Ok(parse::<SeedDoc>(p)?.into_seed()),
        (None, Some(name)) => seed_fixture(name).map_err(input),
        (None, None) => Err(Failure::Input("give a seed file or --fixture".into())),
        (Some(_), Some(_)) => Err(Failure::Input("give either a file or --fixture, not both".into())),
    }
}

fn polys_text(ps: &[QPoly]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn verdict_text(v: &SsdVerdict) -> String {
    match v {
        SsdVerdict::Certified(_) => "certified self-self-dual".into(),
        SsdVerdict::NotSsd { stage, detail } => format!("not self-self-dual (fails {stage}): {detail}"),
        SsdVerdict::Undecided { reason } => format!("undecided: {reason}"),
    }
}

fn standard_basis(space: &PolySpace, exec: Exec) -> Result<StandardBasis, Failure> {
    match check_ssd(space, exec).map_err(math)? {
        SsdVerdict::Certified(b) => Ok(b),
        other => Err(Failure::Math(verdict_text(&other))),
    }
}

pub fn space_analyze(i: &SpaceInput, exec: Exec) -> Out {
    let space = load_space(i)?;
    let ram = space.ramification().ok().cloned();
    let self_dual = ram.is_some() && space.dim() == 7 && space.check_self_dual().unwrap_or(false);
    let gram = if self_dual { space.gram().ok().map(|g| g.rows_vec()) } else { None };
    let verdict = check_ssd(&space, exec).map_err(math)?;
    let mut text = String::new();
    writeln!(text, "dimension {}", space.dim()).unwrap();
    writeln!(text, "degrees {:?}", space.degrees()).unwrap();
    match &ram {
        Some(r) => {
            for (k, t) in r.t.iter().enumerate() {
                writeln!(text, "T_{} = {t}", k + 1).unwrap();
            }
        }
        None => writeln!(text, "ramification: base point").unwrap(),
    }
    writeln!(text, "self-dual: {}", if self_dual { "yes" } else { "no" }).unwrap();
    writeln!(text, "verdict: {}", verdict_text(&verdict)).unwrap();
    let json = json!({
        "basis": space.basis(),
        "degrees": space.degrees(),
        "u": ram.as_ref().map(|r| &r.u),
        "t": ram.as_ref().map(|r| &r.t),
        "self_dual": self_dual,
        "gram": gram,
        "verdict": VerdictReport::from(&verdict),
    });
    Ok(Report { json, text, ok: matches!(verdict, SsdVerdict::Certified(_)) })
}

pub fn space_witt(i: &SpaceInput) -> Out {
    let space = load_space(i)?;
    let WittBasis { vectors, pattern, dominant_leading } = space.witt_basis().map_err(math)?;
    let mut text = String::new();
    for (k, v) in vectors.iter().enumerate() {
        writeln!(text, "u{} = {v}", k + 1).unwrap();
    }
    writeln!(text, "dominant leading coefficients: {}", if dominant_leading { "yes" } else { "no" }).unwrap();
    let json = json!({ "basis": vectors, "pattern": pattern, "dominant_leading": dominant_leading });
    Ok(Report { json, text, ok: true })
}

pub fn space_standard_basis(i: &SpaceInput, exec: Exec) -> Out {
    let space = load_space(i)?;
    let verdict = check_ssd(&space, exec).map_err(math)?;
    match &verdict {
        SsdVerdict::Certified(b) => {
            let mut text = String::new();
            for (k, v) in b.vectors.iter().enumerate() {
                writeln!(text, "v{} = {v}", k + 1).unwrap();
            }
            Ok(Report { json: json!({ "basis": b.vectors }), text, ok: true })
        }
        other => Ok(Report {
            json: json!({ "verdict": VerdictReport::from(other) }),
            text: format!("{}\n", verdict_text(other)),
            ok: false,
        }),
    }
}

pub fn space_check_ssd(i: &SpaceInput, exec: Exec) -> Out {
    let space = load_space(i)?;
    let verdict = check_ssd(&space, exec).map_err(math)?;
    Ok(Report {
        json: json!({ "verdict": VerdictReport::from(&verdict) }),
        text: format!("{}\n", verdict_text(&verdict)),
        ok: matches!(verdict, SsdVerdict::Certified(_)),
    })
}

#[derive(Deserialize)]
struct PolysFile {
    polys: Vec<QPoly>,
}

pub fn poly_wronskian(file: &Path, space: &SpaceInput) -> Out {
    let f: PolysFile = parse(file)?;
    if f.polys.is_empty() {
        return Err(Failure::Input("no polynomials".into()));
    }
    let w = wronskian(&f.polys);
    let mut text = format!("W = {w}\n");
    let divided = if space.file.is_some() || space.fixture.is_some() {
        let v = load_space(space)?;
        let d = v.divided_wronskian(&f.polys).map_err(math)?;
        writeln!(text, "divided W = {d}").unwrap();
        Some(d)
    } else {
        None
    };
    Ok(Report { json: json!({ "wronskian": w, "divided": divided }), text, ok: true })
}

#[derive(Deserialize)]
struct VectorsFile {
    vectors: Vec<Vec<ScalarIn>>,
}

#[derive(Deserialize)]
struct VectorFile {
    vector: Vec<ScalarIn>,
}

fn qext_text(v: &[QExt]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn spin_embed(file: &Path) -> Out {
    let f: VectorsFile = parse(file)?;
    let u: Vec<VVec> = f.vectors.into_iter().map(|v| vector_in(v, 7)).collect::<Result<_, _>>().map_err(input)?;
    let s = spin::spinor_embed(&u).map_err(math)?;
    let on_conic = spin::q_hat(&s).is_zero();
    let text = format!("spinor [{}]\non the conic: {}\n", qext_text(&s), if on_conic { "yes" } else { "no" });
    let json = json!({ "spinor": s, "on_conic": on_conic, "annihilator": spin::annihilator(&s) });
    Ok(Report { json, text, ok: on_conic })
}

pub fn spin_preimages(file: &Path) -> Out {
    let f: VectorFile = parse(file)?;
    let v = vector_in(f.vector, 7).map_err(input)?;
    let space_text = |u: &[VVec]| u.iter().map(|r| format!("[{}]", qext_text(r))).collect::<Vec<_>>().join(" ");
    let (json, text, ok) = match spin::preimages(&v).map_err(math)? {
        Preimages::Unique(u) => {
            (json!({ "kind": "unique", "spaces": [u] }), format!("unique: {}\n", space_text(&u)), true)
        }
        Preimages::Pair(a, b) => (
            json!({ "kind": "pair", "spaces": [a, b] }),
            format!("first: {}\nsecond: {}\n", space_text(&a), space_text(&b)),
            true,
        ),
        Preimages::IrrationalBranch => (
            json!({ "kind": "irrational-branch", "spaces": [] }),
            "the preimages are not defined over Q(sqrt 2)\n".to_string(),
            false,
        ),
    };
    Ok(Report { json, text, ok })
}

fn form_text(w: &ThreeForm) -> String {
    let mut text = String::new();
    for t in triples() {
        let v = w.get(t[0], t[1], t[2]);
        if !v.is_zero() {
            writeln!(text, "w({}{}{}) = {v}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
        }
    }
    text
}

pub fn g2_threeform(i: &SpaceInput, exec: Exec) -> Out {
    if i.file.is_none() && i.fixture.is_none() {
        let w = spin_three_form().map_err(math)?;
        return Ok(Report { json: json!({ "form": w }), text: form_text(&w), ok: true });
    }
    let space = load_space(i)?;
    let b = standard_basis(&space, exec)?;
    let witt = WittBasis { vectors: b.vectors.clone(), pattern: None, dominant_leading: false };
    match three_form_from_wronskians(&space, &witt, FORM_SEED, exec).map_err(math)? {
        WronskianForm::Form(w) => {
            let ok = w == standard_three_form();
            let mut text = form_text(&w);
            writeln!(text, "matches the standard form: {}", if ok { "yes" } else { "no" }).unwrap();
            Ok(Report { json: json!({ "form": w, "basis": b.vectors, "matches_standard": ok }), text, ok })
        }
        other => Err(Failure::Math(format!("no 3-form from Wronskians: {other:?}"))),
    }
}

pub fn g2_kernel(file: &Path) -> Out {
    let f: VectorFile = parse(file)?;
    let v = vector_in(f.vector, 7).map_err(input)?;
    let v = spin::lower(&v).ok_or_else(|| Failure::Input("the vector must be rational".into()))?;
    if v.iter().all(|x| x.is_zero()) {
        return Err(Failure::Input("zero vector".into()));
    }
    let k = span_basis(&kernel_2form(&standard_three_form(), &v), 7);
    let isotropic = k.iter().all(|a| k.iter().all(|b| g2ssd::g2::witt_b(a, b).is_zero()));
    let mut text = String::new();
    for r in &k {
        writeln!(text, "[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).unwrap();
    }
    writeln!(text, "dimension {}, isotropic: {}", k.len(), if isotropic { "yes" } else { "no" }).unwrap();
    Ok(Report { json: json!({ "kernel": k, "isotropic": isotropic }), text, ok: true })
}

pub fn g2_flags(i: &SpaceInput, exec: Exec) -> Out {
    let space = load_space(i)?;
    let b = standard_basis(&space, exec)?;
    let flag = basis_to_flag(&b.vectors);
    let ok = g2_isotropic_check(&space, &b, &flag).map_err(math)?;
    let (y1, y2) = flag_to_pair(&space, &flag).map_err(math)?;
    let mut text = String::new();
    for (k, f) in flag.spaces.iter().enumerate() {
        writeln!(text, "F_{} = span({})", k + 1, polys_text(f.basis())).unwrap();
    }
    writeln!(text, "G2-isotropic: {}", if ok { "yes" } else { "no" }).unwrap();
    writeln!(text, "pair y1 = {y1}, y2 = {y2}").unwrap();
    let flags: Vec<&[QPoly]> = flag.spaces.iter().map(|f| f.basis()).collect();
    let json = json!({ "basis": b.vectors, "flag": flags, "g2_isotropic": ok, "pair": [y1, y2] });
    Ok(Report { json, text, ok })
}

pub fn bethe_reproduce(i: &SeedInput, direction: usize) -> Out {
    let seed = load_seed(i)?;
    let sys = seed.system().map_err(input)?;
    if seed.y.len() != sys.kind.rank() {
        return Err(Failure::Input(format!("{:?} needs {} polynomials", sys.kind, sys.kind.rank())));
    }
    if direction == 0 || direction > sys.kind.rank() {
        return Err(Failure::Input(format!("direction must be in 1..={}", sys.kind.rank())));
    }
    let y = g2ssd::bethe::normalize_tuple(&seed.y);
    if let Some(why) = genericity_defect(&sys, &y) {
        return Err(Failure::Math(format!("seed is not generic: {why}")));
    }
    let k = direction - 1;
    let base = match fertility_solve(&y[k], &sys.rhs(&y, k)).map_err(math)? {
        Fertility::Fertile { base } => base,
        Fertility::Infertile => return Err(Failure::Math(format!("infertile in direction {direction}"))),
    };
    let mut canonical = y.clone();
    canonical[k] = base.monic();
    let samples = descendants(&sys, &y, k).map_err(math)?;
    let mut text = format!("canonical: ({})\n", polys_text(&canonical));
    for s in &samples {
        writeln!(text, "sample: ({})", polys_text(s)).unwrap();
    }
    let json = json!({
        "seed": SeedFile::of(&sys, &canonical),
        "parent": SeedFile::of(&sys, &y),
        "direction": direction,
        "samples": samples,
    });
    Ok(Report { json, text, ok: true })
}

pub fn bethe_population(i: &SeedInput, depth: usize, exec: Exec) -> Out {
    let seed = load_seed(i)?;
    let sys = seed.system().map_err(input)?;
    if seed.y.len() != sys.kind.rank() {
        return Err(Failure::Input(format!("{:?} needs {} polynomials", sys.kind, sys.kind.rank())));
    }
    let pop = population_bfs(&sys, &seed.y, depth, exec).map_err(math)?;
    let ls = lambda_sum(&sys);
    let weights: BTreeSet<Vec<i64>> = pop.members.iter().map(|m| weight_at_infinity(&sys, &m.tuple, &ls)).collect();
    let seed_weight = weight_at_infinity(&sys, &pop.members[0].tuple, &ls);
    // the full orbit of A6 is large but still finite
    let orbit = shifted_orbit(sys.kind, &seed_weight);
    let single_orbit = weights.is_subset(&orbit);
    let dominant = dominant_representative(sys.kind, &seed_weight);
    let space = if sys.kind == Kind::G2 { Some(space_from_population(&sys, &pop)) } else { None };

    let mut text = String::new();
    for d in 0..=depth {
        let n = pop.members.iter().filter(|m| m.depth == d).count();
        writeln!(text, "depth {d}: {n} members").unwrap();
    }
    writeln!(text, "weights: {} distinct, orbit size {}, one orbit: {}", weights.len(), orbit.len(), single_orbit)
        .unwrap();
    match &dominant {
        Some(w) => writeln!(text, "dominant weight {w:?}").unwrap(),
        None => writeln!(text, "no dominant weight in the orbit").unwrap(),
    }
    let mut ok = single_orbit;
    let space_json = match &space {
        Some(Ok(v)) => {
            writeln!(text, "spanned space degrees {:?}", v.degrees()).unwrap();
            writeln!(text, "basis: {}", polys_text(v.basis())).unwrap();
            json!({ "basis": v.basis() })
        }
        Some(Err(e)) => {
            writeln!(text, "spanned space: {e}").unwrap();
            ok = false;
            json!({ "error": e.to_string() })
        }
        None => Value::Null,
    };
    let json = json!({
        "seed": SeedFile::of(&sys, &pop.members[0].tuple),
        "depth": depth,
        "members": pop.members,
        "chain": pop.chain,
        "space": space_json,
        "weights": {
            "distinct": weights,
            "orbit_size": orbit.len(),
            "single_orbit": single_orbit,
            "dominant": dominant,
        },
    });
    Ok(Report { json, text, ok })
}

pub fn verify_all(exec: Exec) -> Out {
    let outcomes = suite::run_all(exec);
    let mut text = String::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        writeln!(text, "{} AC{:<2} {:<24} {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail).unwrap();
        rows.push(json!({ "id": o.id, "name": o.name, "pass": o.pass, "detail": o.detail }));
    }
    let ok = outcomes.iter().all(|o| o.pass);
    Ok(Report { json: json!({ "criteria": rows, "pass": ok }), text, ok })
}

/// `"127"` as a 1-based triple.
fn parse_triple(s: &str) -> Result<(usize, usize, usize), Failure> {
    let d: Vec<usize> = s.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
    match d.as_slice() {
        &[i, j, k] if s.len() == 3 && 1 <= i && i < j && j < k && k <= 7 => Ok((i, j, k)),
        _ => Err(Failure::Input(format!("{s:?} is not a triple ijk with 1 <= i < j < k <= 7"))),
    }
}

pub fn verify_table1(i: &SpaceInput, corrupt: Option<&str>, exec: Exec) -> Out {
    let space = if i.file.is_none() && i.fixture.is_none() { PolySpace::polys_up_to(6) } else { load_space(i)? };
    let corrupt = corrupt.map(parse_triple).transpose()?;
    let b = standard_basis(&space, exec)?;
    let mut entries = table1_entries(&space, &b.vectors, exec).map_err(math)?;
    for e in entries.iter_mut().filter(|e| Some(e.triple) == corrupt) {
        e.expected = &e.expected + &QPoly::one();
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in &entries {
        let (a, b, c) = e.triple;
        let ok = e.computed == e.expected;
        if ok {
            writeln!(text, "ok       {a}{b}{c}").unwrap();
        } else {
            writeln!(text, "MISMATCH {a}{b}{c}: computed {}, table {}", e.computed, e.expected).unwrap();
        }
        rows.push(json!({ "triple": format!("{a}{b}{c}"), "computed": e.computed, "expected": e.expected, "ok": ok }));
    }
    let matched = entries.iter().filter(|e| e.computed == e.expected).count();
    writeln!(text, "{matched}/35 divided Wronskians match").unwrap();
    let json = json!({ "basis": b.vectors, "entries": rows, "matched": matched });
    Ok(Report { json, text, ok: matched == 35 })
}

pub fn verify_threeform(corrupt: Option<&str>, exec: Exec) -> Out {
    let corrupt = corrupt.map(parse_triple).transpose()?;
    let spin_form = spin_three_form().map_err(math)?;
    let space = PolySpace::polys_up_to(6);
    let witt = space.witt_basis().map_err(math)?;
    let wr_form = match three_form_from_wronskians(&space, &witt, FORM_SEED, exec).map_err(math)? {
        WronskianForm::Form(w) => w,
        other => return Err(Failure::Math(format!("no 3-form from Wronskians: {other:?}"))),
    };
    let stated = standard_three_form();
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut matched = 0;
    for t in triples() {
        let key = (t[0] + 1, t[1] + 1, t[2] + 1);
        let mut expected = stated.get(t[0], t[1], t[2]);
        if Some(key) == corrupt {
            expected = expected + Rational::integer(1);
        }
        let (s, w) = (spin_form.get(t[0], t[1], t[2]), wr_form.get(t[0], t[1], t[2]));
        let ok = s == expected && w == expected;
        matched += ok as usize;
        let name = format!("{}{}{}", key.0, key.1, key.2);
        if ok {
            writeln!(text, "ok       {name} = {expected}").unwrap();
        } else {
            writeln!(text, "MISMATCH {name}: spinor {s}, Wronskian {w}, stated {expected}").unwrap();
        }
        rows.push(json!({ "triple": name, "spinor": s, "wronskian": w, "expected": expected, "ok": ok }));
    }
    writeln!(text, "{matched}/35 form values match").unwrap();
    Ok(Report { json: json!({ "entries": rows, "matched": matched }), text, ok: matched == 35 })
}
