//! The 8-dimensional spinor model of the 7-dimensional orthogonal space.
//!
//! `V` has a Witt basis `v_1..v_7` with `B(v_i, v_j) = (-1)^(i+1) δ_(i+j,8)`. Spinors live in
//! the exterior algebra on `v̂_5, v̂_6, v̂_7`, with coordinates ordered
//! `(1, v̂5, v̂6, v̂7, v̂5v̂6, v̂6v̂7, v̂5v̂7, v̂5v̂6v̂7)`.
//!
//! `v_5, v_6, v_7` act by left multiplication, `v_1, v_2, v_3` by `-∂_7, ∂_6, -∂_5`,
//! and `v_4` by `(1/√2)(-1)^deg`, so that `uv + vu = -B(u, v)`.

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::linalg::{span_basis, Mat};
use crate::scalar::{Field, QExt, Rational};

pub type VVec = Vec<QExt>;
pub type Spinor = Vec<QExt>;

/// Bitmask (bit 0 = v̂5, bit 1 = v̂6, bit 2 = v̂7) of each spinor coordinate.
const MONOMIALS: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b110, 0b101, 0b111];

fn index_of(mask: u8) -> usize {
    MONOMIALS.iter().position(|&m| m == mask).expect("valid mask")
}

fn sign_below(mask: u8, bit: u8) -> i64 {
    if (mask & ((1 << bit) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn action_matrix(i: usize) -> Mat<QExt> {
    let mut m = Mat::zeros(8, 8);
    for (col, &mask) in MONOMIALS.iter().enumerate() {
        let (target, coeff) = match i {
            // left multiplication by v̂_(i)
            5..=7 => {
                let bit = (i - 5) as u8;
                if mask & (1 << bit) != 0 {
                    continue;
                }
                (mask | (1 << bit), QExt::from_i64(sign_below(mask, bit)))
            }
            1..=3 => {
                let bit = (3 - i) as u8; // v1 -> v̂7, v2 -> v̂6, v3 -> v̂5
                if mask & (1 << bit) == 0 {
                    continue;
                }
                let outer = if i == 2 { 1 } else { -1 };
                (mask & !(1 << bit), QExt::from_i64(outer * sign_below(mask, bit)))
            }
            4 => {
                let s = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                (mask, QExt::inv_sqrt2() * QExt::from_i64(s))
            }
            _ => unreachable!("generator index 1..=7"),
        };
        m[(index_of(target), col)] = coeff;
    }
    m
}

static ACTIONS: LazyLock<Vec<Mat<QExt>>> = LazyLock::new(|| (1..=7).map(action_matrix).collect());

/// Matrix of `v_i` (1-based) on spinors.
pub fn generator(i: usize) -> &'static Mat<QExt> {
    &ACTIONS[i - 1]
}

/// Matrix of `v = Σ β_i v_i`.
pub fn action(v: &[QExt]) -> Mat<QExt> {
    assert_eq!(v.len(), 7, "vector length");
    let mut m = Mat::zeros(8, 8);
    for (i, b) in v.iter().enumerate() {
        if !b.is_zero() {
            m = m.add(&generator(i + 1).scale(b));
        }
    }
    m
}

/// `v · s`.
pub fn act(v: &[QExt], s: &[QExt]) -> Spinor {
    let mut out = vec![QExt::zero(); 8];
    for (i, b) in v.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let g = generator(i + 1);
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in s.iter().enumerate() {
                if !g[(r, c)].is_zero() && !x.is_zero() {
                    *o = o.clone() + b.clone() * &g[(r, c)] * x;
                }
            }
        }
    }
    out
}

/// `a(b(c·s))`.
pub fn act3(a: &[QExt], b: &[QExt], c: &[QExt], s: &[QExt]) -> Spinor {
    act(a, &act(b, &act(c, s)))
}

/// `Q̂(s) = α∅α567 + α6α57 - α7α56 - α67α5`.
pub fn q_hat(s: &[QExt]) -> QExt {
    s[0].clone() * &s[7] + s[2].clone() * &s[6] - s[3].clone() * &s[4] - s[5].clone() * &s[1]
}

/// Polarisation `B̂(s, t) = Q̂(s+t) - Q̂(s) - Q̂(t)`.
pub fn b_hat(s: &[QExt], t: &[QExt]) -> QExt {
    let st: Spinor = s.iter().zip(t).map(|(x, y)| x.clone() + y).collect();
    q_hat(&st) - q_hat(s) - q_hat(t)
}

/// `B(u, v)` in the Witt basis.
pub fn b_v<F: Field>(u: &[F], v: &[F]) -> F {
    (0..7).fold(F::zero(), |acc, i| {
        let t = u[i].clone() * &v[6 - i];
        if i % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}

/// `Q(v) = B(v, v)/2`.
pub fn q_v(v: &[QExt]) -> QExt {
    b_v(v, v) * QExt::from_rational(&Rational::new(1, 2))
}

/// The non-isotropic spinor `v̂5v̂6 + (1/√2) v̂7`.
pub fn p_spinor() -> Spinor {
    let mut p = vec![QExt::zero(); 8];
    p[4] = QExt::one();
    p[3] = QExt::inv_sqrt2();
    p
}

/// Basis spinor with the given coordinate index.
pub fn basis_spinor(k: usize) -> Spinor {
    let mut s = vec![QExt::zero(); 8];
    s[k] = QExt::one();
    s
}

/// Basis vector `v_i`, 1-based.
pub fn basis_vec(i: usize) -> VVec {
    let mut v = vec![QExt::zero(); 7];
    v[i - 1] = QExt::one();
    v
}

/// Scales so that the first nonzero coordinate is 1.
pub fn normalize(s: &[QExt]) -> Vec<QExt> {
    match s.iter().find(|x| !x.is_zero()) {
        None => s.to_vec(),
        Some(l) => {
            let inv = l.inv().expect("nonzero");
            s.iter().map(|x| x.clone() * &inv).collect()
        }
    }
}

/// Pure spinor line of an isotropic 3-space: the common kernel of its vectors.
pub fn spinor_embed(u: &[VVec]) -> Result<Spinor> {
    let mut stacked = Mat::zeros(0, 8);
    for v in u {
        stacked = stacked.vstack(&action(v))?;
    }
    let k = stacked.kernel();
    if k.len() != 1 {
        return Err(Error::Spin(format!("common kernel has dimension {}", k.len())));
    }
    Ok(normalize(&k[0]))
}

/// `{v : v·s = 0}` as a row-reduced basis.
pub fn annihilator(s: &[QExt]) -> Vec<VVec> {
    let cols: Vec<Vec<QExt>> = (1..=7).map(|i| act(&basis_vec(i), s)).collect();
    let m = Mat::from_cols(&cols, 8).expect("lengths");
    span_basis(&m.kernel(), 7)
}

/// The `V`-component of `s` in the decomposition `V̂ = C p ⊕ V·p`.
pub fn invariant_surjection(s: &[QExt]) -> Result<VVec> {
    let p = p_spinor();
    let mut cols = vec![p.clone()];
    cols.extend((1..=7).map(|i| act(&basis_vec(i), &p)));
    let m = Mat::from_cols(&cols, 8)?;
    let sol = m.solve(s)?;
    let x = sol.particular().ok_or_else(|| Error::Spin("p is isotropic".into()))?;
    Ok(x[1..].to_vec())
}

/// Isotropic 3-spaces over a line `Cv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimages {
    /// Isotropic `v`: the unique space whose spinor is `v·p`.
    Unique(Vec<VVec>),
    /// Non-isotropic `v`: the two spaces, with `U_+ ⊕ U_- = v^⊥`.
    Pair(Vec<VVec>, Vec<VVec>),
    /// The roots of `α² + Q(v) β² = 0` leave `Q(√2)`.
    IrrationalBranch,
}

/// Solves `Q̂(α p + β v·p) = Q̂(p)(α² + Q(v) β²) = 0` and returns the annihilators.
pub fn preimages(v: &[QExt]) -> Result<Preimages> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::Input("zero vector".into()));
    }
    let p = p_spinor();
    let vp = act(v, &p);
    let q = q_v(v);
    if q.is_zero() {
        let u = annihilator(&vp);
        if u.len() != 3 {
            return Err(Error::Spin("annihilator is not 3-dimensional".into()));
        }
        return Ok(Preimages::Unique(u));
    }
    let Some(r) = (-q).sqrt() else {
        return Ok(Preimages::IrrationalBranch);
    };
    let mk = |alpha: QExt| -> Result<Vec<VVec>> {
        let s: Spinor = p.iter().zip(&vp).map(|(a, b)| alpha.clone() * a + b).collect();
        let u = annihilator(&s);
        if u.len() != 3 {
            return Err(Error::Spin("annihilator is not 3-dimensional".into()));
        }
        Ok(u)
    };
    Ok(Preimages::Pair(mk(r.clone())?, mk(-r)?))
}

/// `-(1/2) B̂(abc·p, p)`.
pub fn three_form_value(a: &[QExt], b: &[QExt], c: &[QExt]) -> QExt {
    let p = p_spinor();
    -(b_hat(&act3(a, b, c, &p), &p) * QExt::from_rational(&Rational::new(1, 2)))
}

/// `φ(a∧b∧c) ∈ Sym²V` as a symmetric matrix `N` meaning `Σ N_ij v_i ⊗ v_j`.
///
/// Polarises `q(v) = B̂(abc·(v·p), v·p)` on `V*` and transports by `B`-duality.
pub fn phi(a: &[QExt], b: &[QExt], c: &[QExt]) -> Mat<QExt> {
    let p = p_spinor();
    let vp: Vec<Spinor> = (1..=7).map(|i| act(&basis_vec(i), &p)).collect();
    let abc: Vec<Spinor> = vp.iter().map(|s| act3(a, b, c, s)).collect();
    let half = QExt::from_rational(&Rational::new(1, 2));
    let s = Mat::from_fn(7, 7, |i, j| (b_hat(&abc[i], &vp[j]) + b_hat(&abc[j], &vp[i])) * &half);
    // the i-th coordinate functional is B-dual to (-1)^i v_(6-i) (0-based)
    Mat::from_fn(7, 7, |i, j| {
        let (ii, jj) = (6 - i, 6 - j);
        let v = s[(ii, jj)].clone();
        if (ii + jj) % 2 == 0 {
            v
        } else {
            -v
        }
    })
}

/// Checks the Clifford relation `v_i v_j + v_j v_i = (-1)^i δ_(i+j,8)` for all pairs.
pub fn clifford_relations_hold() -> bool {
    for i in 1..=7 {
        for j in 1..=7 {
            let a = generator(i).mul(generator(j)).unwrap();
            let b = generator(j).mul(generator(i)).unwrap();
            let want = if i + j == 8 {
                Mat::identity(8).scale(&QExt::from_i64(if i % 2 == 0 { 1 } else { -1 }))
            } else {
                Mat::zeros(8, 8)
            };
            if a.add(&b) != want {
                return false;
            }
        }
    }
    true
}

/// Rational vector to `QExt` coordinates.
pub fn lift(v: &[Rational]) -> VVec {
    v.iter().map(QExt::from_rational).collect()
}

/// Rational coordinates if every entry is rational.
pub fn lower(v: &[QExt]) -> Option<Vec<Rational>> {
    v.iter().map(|x| x.to_rational()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::same_span;

    fn span(ids: &[usize]) -> Vec<VVec> {
        ids.iter().map(|&i| basis_vec(i)).collect()
    }

    #[test]
    fn clifford_relations() {
        assert!(clifford_relations_hold());
    }

    #[test]
    fn action_examples() {
        assert_eq!(act(&basis_vec(7), &basis_spinor(0)), basis_spinor(3));
        let s = act(&basis_vec(4), &basis_spinor(1));
        assert_eq!(s[1], -QExt::inv_sqrt2());
        let sp: Spinor = (0..8).map(|k| QExt::from_i64(k as i64 + 1)).collect();
        let lhs: Spinor = act(&basis_vec(1), &act(&basis_vec(7), &sp))
            .into_iter()
            .zip(act(&basis_vec(7), &act(&basis_vec(1), &sp)))
            .map(|(a, b)| a + b)
            .collect();
        let neg: Spinor = sp.iter().map(|x| -x.clone()).collect();
        assert_eq!(lhs, neg);
    }

    #[test]
    fn spinor_pairings() {
        let bh = |i, j| b_hat(&basis_spinor(i), &basis_spinor(j));
        assert_eq!(bh(0, 7), QExt::one());
        assert_eq!(bh(2, 6), QExt::one());
        assert_eq!(bh(3, 4), -QExt::one());
        assert_eq!(bh(5, 1), -QExt::one());
        assert_eq!(q_hat(&p_spinor()), -QExt::inv_sqrt2());
    }

    #[test]
    fn embeddings_of_coordinate_spaces() {
        assert_eq!(spinor_embed(&span(&[1, 2, 3])).unwrap(), basis_spinor(0));
        assert_eq!(spinor_embed(&span(&[5, 6, 7])).unwrap(), basis_spinor(7));
        assert_eq!(spinor_embed(&span(&[1, 5, 6])).unwrap(), basis_spinor(4));
        assert_eq!(spinor_embed(&span(&[2, 3, 7])).unwrap(), basis_spinor(3));
    }

    #[test]
    fn annihilators() {
        assert!(same_span(&annihilator(&basis_spinor(0)), &span(&[1, 2, 3]), 7));
        assert!(annihilator(&p_spinor()).is_empty());
    }

    #[test]
    fn surjection_on_known_space() {
        let s = spinor_embed(&span(&[1, 5, 6])).unwrap();
        let v = invariant_surjection(&s).unwrap();
        assert!(v.iter().enumerate().all(|(i, x)| (i == 3) != x.is_zero()));
    }

    #[test]
    fn preimages_of_v4_and_v1() {
        match preimages(&basis_vec(4)).unwrap() {
            Preimages::Pair(a, b) => {
                let (x, y) = (span(&[1, 5, 6]), span(&[2, 3, 7]));
                assert!(
                    (same_span(&a, &x, 7) && same_span(&b, &y, 7))
                        || (same_span(&a, &y, 7) && same_span(&b, &x, 7))
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        match preimages(&basis_vec(1)).unwrap() {
            Preimages::Unique(u) => assert!(crate::linalg::in_span(&basis_vec(1), &u, 7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn irrational_branch() {
        // Q(v1 + 3/2 v7) = 3/2 and sqrt(-3/2) is not in Q(sqrt 2)
        let mut v = basis_vec(1);
        v[6] = QExt::from_rational(&Rational::new(3, 2));
        assert_eq!(preimages(&v).unwrap(), Preimages::IrrationalBranch);
    }

    #[test]
    fn three_form_spot_values() {
        let w = |a, b, c| three_form_value(&basis_vec(a), &basis_vec(b), &basis_vec(c));
        assert_eq!(w(1, 4, 7), QExt::from_rational(&Rational::new(1, 4)));
        assert_eq!(w(2, 3, 7), QExt::from_rational(&Rational::new(-1, 2)));
        assert_eq!(w(1, 2, 3), QExt::zero());
    }

    #[test]
    fn phi_examples() {
        let n = phi(&basis_vec(1), &basis_vec(2), &basis_vec(3));
        assert_eq!(n[(0, 0)], QExt::one());
        let n = phi(&basis_vec(1), &basis_vec(4), &basis_vec(7));
        let q = |a, b| QExt::from_rational(&Rational::new(a, b));
        assert_eq!(n[(0, 6)].clone() + &n[(6, 0)], q(-1, 2));
        assert_eq!(n[(1, 5)].clone() + &n[(5, 1)], q(-1, 2));
        assert_eq!(n[(2, 4)].clone() + &n[(4, 2)], q(1, 2));
        assert_eq!(n[(3, 3)], q(1, 4));
    }
}
