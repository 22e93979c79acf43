//! JSON file formats and named fixtures.
//!
//! Rationals are always strings `"p/q"`; polynomials are arrays of coefficients in
//! ascending degree.

use serde::{Deserialize, Serialize};

use crate::bethe::{Kind, System};
use crate::error::{Error, Result};
use crate::g2::{SsdVerdict, Stage};
use crate::poly::QPoly;
use crate::polyspace::PolySpace;
use crate::scalar::{QExt, Rational};

/// `{"basis": [[...], ...]}`. Extra fields are ignored, so reports carrying a basis
/// can be fed back in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub basis: Vec<QPoly>,
}

impl SpaceFile {
    pub fn of(space: &PolySpace) -> Self {
        SpaceFile { basis: space.basis().to_vec() }
    }

    pub fn to_space(&self) -> PolySpace {
        PolySpace::canonicalize(&self.basis)
    }
}

/// A scalar given either as `"p/q"` or as `{"a": "p/q", "b": "r/s"}` for `a + b√2`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ScalarIn {
    Rational(Rational),
    Ext(QExt),
}

impl From<ScalarIn> for QExt {
    fn from(s: ScalarIn) -> QExt {
        match s {
            ScalarIn::Rational(r) => QExt::rational(r),
            ScalarIn::Ext(e) => e,
        }
    }
}

/// Reads a vector of a fixed length.
pub fn vector_in(v: Vec<ScalarIn>, len: usize) -> Result<Vec<QExt>> {
    if v.len() != len {
        return Err(Error::Input(format!("expected {len} entries, got {}", v.len())));
    }
    Ok(v.into_iter().map(QExt::from).collect())
}

/// Seed of a Bethe system: `{"kind": "G2", "y": [...], "t": [...]}`; `t` defaults to all ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    #[serde(default = "default_kind")]
    pub kind: Kind,
    pub y: Vec<QPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<QPoly>>,
}

fn default_kind() -> Kind {
    Kind::G2
}

impl SeedFile {
    pub fn system(&self) -> Result<System> {
        let t = self.t.clone().unwrap_or_else(|| vec![QPoly::one(); self.kind.rank()]);
        System::new(self.kind, t)
    }

    pub fn of(sys: &System, y: &[QPoly]) -> Self {
        SeedFile { kind: sys.kind, y: y.to_vec(), t: Some(sys.t.clone()) }
    }
}

/// A seed file itself, or any document that embeds one under `"seed"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SeedDoc {
    Nested { seed: SeedFile },
    Plain(SeedFile),
}

impl SeedDoc {
    pub fn into_seed(self) -> SeedFile {
        match self {
            SeedDoc::Nested { seed } | SeedDoc::Plain(seed) => seed,
        }
    }
}

/// `"mono-M-N"` as `(M, N)`.
fn parse_mono(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("mono-")?;
    let (m, n) = rest.split_once('-')?;
    let (m, n) = (m.parse().ok()?, n.parse().ok()?);
    (1 <= m && m < n).then_some((m, n))
}

/// Names accepted by [`space_fixture`].
pub const SPACE_FIXTURES: &str = "deg6, mono-M-N (1 <= M < N), not-self-dual";

/// Built-in spaces.
pub fn space_fixture(name: &str) -> Result<PolySpace> {
    match name {
        "deg6" => Ok(PolySpace::polys_up_to(6)),
        "not-self-dual" => Ok(PolySpace::monomials(&[0, 1, 2, 3, 4, 5, 7])),
        _ => match parse_mono(name) {
            Some((m, n)) => Ok(PolySpace::g2_monomial(m, n)),
            None => Err(Error::Input(format!("unknown fixture {name:?}; known: {SPACE_FIXTURES}"))),
        },
    }
}

/// Built-in Bethe seeds: `deg6` is `(1, 1)` with trivial `T`, `mono-M-N` is `(1, 1)` with
/// `T = (x^(M-1), x^(N-M-1))`.
pub fn seed_fixture(name: &str) -> Result<SeedFile> {
    let (t1, t2) = match name {
        "deg6" => (0, 0),
        _ => match parse_mono(name) {
            Some((m, n)) if n > m => (m - 1, n - m - 1),
            _ => return Err(Error::Input(format!("unknown seed fixture {name:?}; known: deg6, mono-M-N"))),
        },
    };
    Ok(SeedFile {
        kind: Kind::G2,
        y: vec![QPoly::one(), QPoly::one()],
        t: Some(vec![QPoly::x_pow(t1), QPoly::x_pow(t2)]),
    })
}

/// Serialisable form of [`SsdVerdict`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum VerdictReport {
    Certified { standard_basis: Vec<QPoly> },
    NotSsd { stage: Stage, detail: String },
    Undecided { reason: String },
}

impl From<&SsdVerdict> for VerdictReport {
    fn from(v: &SsdVerdict) -> Self {
        match v {
            SsdVerdict::Certified(b) => VerdictReport::Certified { standard_basis: b.vectors.clone() },
            SsdVerdict::NotSsd { stage, detail } => {
                VerdictReport::NotSsd { stage: *stage, detail: detail.clone() }
            }
            SsdVerdict::Undecided { reason } => VerdictReport::Undecided { reason: reason.clone() },
        }
    }
}

/// Parses JSON, mapping failures to input errors.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn space_round_trip() {
        let v = space_fixture("mono-2-3").unwrap();
        let text = to_json(&SpaceFile::of(&v));
        let back: SpaceFile = from_json(&text).unwrap();
        assert_eq!(back.to_space(), v);
        let extra: SpaceFile = from_json(r#"{"basis": [["1/1"], ["0", "1"]], "note": 3}"#).unwrap();
        assert_eq!(extra.basis[1], Poly::from_i64s(&[0, 1]));
    }

    #[test]
    fn scalars_in_both_shapes() {
        let v: Vec<ScalarIn> = from_json(r#"["1/2", {"a": "0", "b": "1"}]"#).unwrap();
        let v = vector_in(v, 2).unwrap();
        assert_eq!(v[0], QExt::rational(Rational::new(1, 2)));
        assert_eq!(v[1], QExt::sqrt2());
    }

    #[test]
    fn seeds() {
        let s = seed_fixture("mono-2-3").unwrap();
        let text = to_json(&s);
        let plain: SeedDoc = from_json(&text).unwrap();
        assert_eq!(plain.into_seed(), s);
        let nested: SeedDoc = from_json(&format!("{{\"seed\": {text}, \"members\": []}}")).unwrap();
        assert_eq!(nested.into_seed(), s);
        let bare: SeedFile = from_json(r#"{"y": [["1"], ["1"]]}"#).unwrap();
        assert_eq!(bare.system().unwrap(), System::trivial(Kind::G2));
    }

    #[test]
    fn fixture_names() {
        assert_eq!(space_fixture("deg6").unwrap().dim(), 7);
        assert!(space_fixture("mono-3-2").is_err());
        assert!(space_fixture("nope").is_err());
    }
}
