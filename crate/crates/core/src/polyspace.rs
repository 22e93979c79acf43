//! Finite-dimensional spaces of rational polynomials: canonical bases, ramification,
//! divided Wronskians, self-duality and the induced bilinear form.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{same_span, Mat};
use crate::par::Exec;
use crate::poly::{wronskian, Poly, QPoly};
use crate::scalar::{Field, Rational};

/// Subspace of `Q[x]` stored by its degree-echelon basis.
///
/// Basis elements have pairwise distinct degrees, leading coefficient 1, and a zero
/// coefficient at the leading degree of every other basis element. Sorted by degree.
#[derive(Debug)]
pub struct PolySpace {
    basis: Vec<QPoly>,
    degrees: Vec<usize>,
    ramification: OnceLock<Result<Ramification>>,
}

impl Clone for PolySpace {
    fn clone(&self) -> Self {
        PolySpace {
            basis: self.basis.clone(),
            degrees: self.degrees.clone(),
            ramification: self.ramification.clone(),
        }
    }
}

impl PartialEq for PolySpace {
    fn eq(&self, o: &Self) -> bool {
        self.basis == o.basis
    }
}

impl Eq for PolySpace {}

/// `U_i` (gcd of all `i`-Wronskians, `U_0 = 1`) and the factors `T_1..T_(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ramification {
    pub u: Vec<QPoly>,
    pub t: Vec<QPoly>,
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl PolySpace {
    /// Span of `generators`, reduced to the degree-echelon basis.
    pub fn canonicalize(generators: &[QPoly]) -> Self {
        let top = generators.iter().filter_map(|g| g.degree()).max();
        let Some(top) = top else {
            return PolySpace::from_echelon(Vec::new());
        };
        // column c holds degree top - c, so pivots land on leading terms
        let rows: Vec<Vec<Rational>> = generators
            .iter()
            .map(|g| (0..=top).map(|c| g.coeff(top - c)).collect())
            .collect();
        let m = Mat::from_rows(rows, top + 1).expect("uniform rows");
        let (r, pivots) = m.rref();
        let mut basis: Vec<QPoly> = (0..pivots.len())
            .map(|i| Poly::new((0..=top).map(|d| r[(i, top - d)].clone()).collect()))
            .collect();
        basis.sort_by_key(|p| p.degree());
        PolySpace::from_echelon(basis)
    }

    fn from_echelon(basis: Vec<QPoly>) -> Self {
        let degrees = basis.iter().map(|b| b.degree().expect("nonzero")).collect();
        PolySpace { basis, degrees, ramification: OnceLock::new() }
    }

    /// `span{1, x, ..., x^n}`.
    pub fn polys_up_to(n: usize) -> Self {
        PolySpace::from_echelon((0..=n).map(QPoly::x_pow).collect())
    }

    /// `span{x^k}` over the given exponents.
    pub fn monomials(exps: &[usize]) -> Self {
        PolySpace::canonicalize(&exps.iter().map(|&k| QPoly::x_pow(k)).collect::<Vec<_>>())
    }

    /// `span{1, x^m, x^n, x^(m+n), x^(2m+n), x^(m+2n), x^(2m+2n)}`.
    pub fn g2_monomial(m: usize, n: usize) -> Self {
        PolySpace::monomials(&[0, m, n, m + n, 2 * m + n, m + 2 * n, 2 * m + 2 * n])
    }

    pub fn basis(&self) -> &[QPoly] {
        &self.basis
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates in the canonical basis, `None` if `f` is outside the space.
    pub fn coords(&self, f: &QPoly) -> Option<Vec<Rational>> {
        let c: Vec<Rational> = self.degrees.iter().map(|&d| f.coeff(d)).collect();
        (self.from_coords(&c) == *f).then_some(c)
    }

    pub fn contains(&self, f: &QPoly) -> bool {
        self.coords(f).is_some()
    }

    pub fn from_coords(&self, c: &[Rational]) -> QPoly {
        assert_eq!(c.len(), self.dim(), "coordinate length");
        self.basis
            .iter()
            .zip(c)
            .fold(QPoly::zero(), |acc, (b, x)| &acc + &b.scale(x))
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains_space(&self, other: &PolySpace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// `U_i`, `T_i`; fails on a base point.
    pub fn ramification(&self) -> Result<&Ramification> {
        self.ramification
            .get_or_init(|| compute_ramification(&self.basis, Exec::default()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Same as [`ramification`](Self::ramification) with an explicit backend, uncached.
    pub fn ramification_with(&self, exec: Exec) -> Result<Ramification> {
        compute_ramification(&self.basis, exec)
    }

    /// `W(fs) / U_k` for elements of the space.
    pub fn divided_wronskian(&self, fs: &[QPoly]) -> Result<QPoly> {
        if fs.len() > self.dim() {
            return Err(Error::Dimension("more elements than the dimension".into()));
        }
        if !fs.iter().all(|f| self.contains(f)) {
            return Err(Error::NotInSpace);
        }
        let r = self.ramification()?;
        wronskian(fs).exact_div(&r.u[fs.len()])
    }

    /// Divided `(dim-1)`-Wronskians of the basis with the `i`-th element removed.
    fn complement_wronskians(&self, basis: &[QPoly]) -> Result<Vec<QPoly>> {
        (0..basis.len())
            .map(|i| {
                let rest: Vec<QPoly> =
                    basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b.clone()).collect();
                self.divided_wronskian(&rest)
            })
            .collect()
    }

    /// Whether the divided `(dim-1)`-Wronskians span the space again.
    pub fn check_self_dual(&self) -> Result<bool> {
        let r = self.ramification()?;
        let d = self.complement_wronskians(&self.basis)?;
        let dual = PolySpace::canonicalize(&d);
        let sd = dual == *self;
        if sd {
            let n = r.t.len();
            for i in 0..n {
                if r.t[i] != r.t[n - 1 - i] {
                    return Err(Error::Form("self-dual space with asymmetric ramification".into()));
                }
            }
        }
        Ok(sd)
    }

    /// Gram matrix of the bilinear form in the given basis of the space.
    ///
    /// `B(u, W†(b without b_i)) = W†(u, b without b_i)`.
    pub fn gram_in(&self, basis: &[QPoly]) -> Result<Mat<Rational>> {
        let n = self.dim();
        if basis.len() != n || !same_span(&self.coord_rows(basis)?, &identity_rows(n), n) {
            return Err(Error::Dimension("not a basis of the space".into()));
        }
        let c = self.divided_wronskian(basis)?;
        if c.degree() != Some(0) {
            return Err(Error::Form("top divided Wronskian is not constant".into()));
        }
        let c = c.coeff(0);
        let d = self.complement_wronskians(basis)?;
        let mut rows = Vec::with_capacity(n);
        for di in &d {
            let Some(x) = self.coords(di) else {
                return Err(Error::Form("space is not self-dual".into()));
            };
            rows.push(coords_in(&self.coord_rows(basis)?, &x)?);
        }
        let m = Mat::from_rows(rows, n)?;
        let e = Mat::from_fn(n, n, |k, i| {
            if k != i {
                Rational::zero()
            } else if i % 2 == 0 {
                c.clone()
            } else {
                -c.clone()
            }
        });
        let g = e.mul(&m.transpose().inverse().map_err(|_| Error::Form("space is not self-dual".into()))?)?;
        if !g.is_symmetric() {
            return Err(Error::Form("bilinear form is not symmetric".into()));
        }
        if g.det().is_zero() {
            return Err(Error::Form("bilinear form is degenerate".into()));
        }
        Ok(g)
    }

    /// Gram matrix in the canonical basis.
    pub fn gram(&self) -> Result<Mat<Rational>> {
        self.gram_in(&self.basis)
    }

    /// `B(u, v)`.
    pub fn bilinear_form(&self, u: &QPoly, v: &QPoly) -> Result<Rational> {
        let g = self.gram()?;
        let a = self.coords(u).ok_or(Error::NotInSpace)?;
        let b = self.coords(v).ok_or(Error::NotInSpace)?;
        Ok(bilinear(&g, &a, &b))
    }

    /// Whether `B` vanishes on all pairs from `u`.
    pub fn isotropy(&self, u: &[QPoly]) -> Result<bool> {
        let g = self.gram()?;
        let cs: Vec<Vec<Rational>> =
            u.iter().map(|f| self.coords(f).ok_or(Error::NotInSpace)).collect::<Result<_>>()?;
        Ok(cs.iter().all(|a| cs.iter().all(|b| bilinear(&g, a, b).is_zero())))
    }

    fn coord_rows(&self, fs: &[QPoly]) -> Result<Vec<Vec<Rational>>> {
        fs.iter().map(|f| self.coords(f).ok_or(Error::NotInSpace)).collect()
    }

    /// Witt basis adapted to the degree filtration.
    pub fn witt_basis(&self) -> Result<WittBasis> {
        witt_basis(self)
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Coordinates of `x` with respect to the rows `basis`.
fn coords_in(basis: &[Vec<Rational>], x: &[Rational]) -> Result<Vec<Rational>> {
    let m = Mat::from_cols(basis, x.len())?;
    m.solve(x)?.particular().cloned().ok_or(Error::NotInSpace)
}

/// `a^T G b`.
pub fn bilinear<F: Field>(g: &Mat<F>, a: &[F], b: &[F]) -> F {
    let gb = g.mul_vec(b).expect("dimensions");
    a.iter().zip(&gb).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y)
}

fn compute_ramification(basis: &[QPoly], exec: Exec) -> Result<Ramification> {
    let n = basis.len();
    let mut u = vec![QPoly::one()];
    for i in 1..=n {
        let subsets = combinations(n, i);
        let ws = exec.map(&subsets, |s| {
            let fs: Vec<QPoly> = s.iter().map(|&k| basis[k].clone()).collect();
            wronskian(&fs)
        });
        let g = Poly::gcd_all(ws.iter())?;
        if i == 1 && g.degree() != Some(0) {
            return Err(Error::BasePoint);
        }
        u.push(g);
    }
    let mut t = Vec::new();
    for i in 1..n {
        let num = &u[i + 1] * &u[i - 1];
        let den = &u[i] * &u[i];
        t.push(num.exact_div(&den)?);
    }
    Ok(Ramification { u, t })
}

/// `(a, m, n)` when the degrees read `a, a+m, a+n, a+m+n, a+2m+n, a+m+2n, a+2m+2n` with `0 < m < n`.
pub fn g2_degree_pattern(d: &[usize]) -> Option<(usize, usize, usize)> {
    if d.len() != 7 {
        return None;
    }
    let a = d[0];
    let m = d[1].checked_sub(a)?;
    let n = d[2].checked_sub(a)?;
    let want = [a, a + m, a + n, a + m + n, a + 2 * m + n, a + m + 2 * n, a + 2 * m + 2 * n];
    (m > 0 && n > m && d == want).then_some((a, m, n))
}

/// Leading coefficients of the dominant Witt basis for degree gaps `(m, n)`.
pub fn g2_leading_coefficients(m: usize, n: usize) -> [Rational; 7] {
    let (m, n) = (m as i64, n as i64);
    let inv = |x: i64| Rational::new(1, x);
    [
        Rational::one(),
        inv(m),
        inv(n * (n - m)),
        inv((m + n) * n * m),
        inv((2 * m + n) * (m + n) * (2 * m) * m),
        inv((m + 2 * n) * (2 * n) * (m + n) * n * (n - m)),
        inv((2 * m + 2 * n) * (m + 2 * n) * (2 * m + n) * (m + n) * m * n),
    ]
}

/// Basis with `B(v_i, v_j) = (-1)^(i+1) δ_(i+j,8)` (1-based), `deg v_i` increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittBasis {
    pub vectors: Vec<QPoly>,
    /// `(a, m, n)` when the degrees follow the G2 pattern.
    pub pattern: Option<(usize, usize, usize)>,
    /// Whether all leading coefficients equal [`g2_leading_coefficients`].
    pub dominant_leading: bool,
}

/// Expected Witt Gram entry, 0-based indices.
pub fn witt_gram_entry(i: usize, j: usize) -> Rational {
    if i + j != 6 {
        Rational::zero()
    } else if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn witt_basis(space: &PolySpace) -> Result<WittBasis> {
    if space.dim() != 7 {
        return Err(Error::Witt("dimension must be 7".into()));
    }
    if !space.check_self_dual()? {
        return Err(Error::Witt("space is not self-dual".into()));
    }
    let g = space.gram()?;
    for i in 0..7 {
        for j in 0..7 {
            let z = g[(i, j)].is_zero();
            if (i + j < 6 && !z) || (i + j == 6 && z) {
                return Err(Error::Witt("degree filtration is not isotropic".into()));
            }
        }
    }
    let b = |x: &[Rational], y: &[Rational]| bilinear(&g, x, y);
    let axpy = |x: &[Rational], t: &Rational, y: &[Rational]| -> Vec<Rational> {
        x.iter().zip(y).map(|(a, c)| a.clone() + t.clone() * c).collect()
    };
    let mut v: Vec<Vec<Rational>> = Vec::with_capacity(7);
    for j in 0..7 {
        let mut x = identity_rows(7)[j].clone();
        for k in (7 - j)..j {
            let p = 6 - k;
            let t = -(b(&x, &v[k]).try_div(&b(&v[p], &v[k]))?);
            x = axpy(&x, &t, &v[p]);
        }
        if j > 3 {
            let p = 6 - j;
            let t = -(b(&x, &x).try_div(&(Rational::integer(2) * b(&x, &v[p])))?);
            x = axpy(&x, &t, &v[p]);
        }
        v.push(x);
    }
    // canonical basis is monic, so v_j has leading coefficient 1 at position j
    let pattern = g2_degree_pattern(space.degrees());
    let target = pattern.map(|(_, m, n)| g2_leading_coefficients(m, n));
    for j in 0..3 {
        let s = target.as_ref().map_or_else(Rational::one, |t| t[j].clone());
        v[j] = v[j].iter().map(|c| c.clone() * &s).collect();
    }
    for j in 0..3 {
        let p = 6 - j;
        let want = witt_gram_entry(j, p);
        let s = want.try_div(&b(&v[j], &v[p]))?;
        v[p] = v[p].iter().map(|c| c.clone() * &s).collect();
    }
    let b33 = b(&v[3], &v[3]);
    let s = (-Rational::one())
        .try_div(&b33)?
        .sqrt()
        .ok_or_else(|| Error::Witt(format!("B(v4, v4) = {b33} cannot be normalised to -1 over Q")))?;
    v[3] = v[3].iter().map(|c| c.clone() * &s).collect();
    for i in 0..7 {
        for j in 0..7 {
            debug_assert_eq!(b(&v[i], &v[j]), witt_gram_entry(i, j));
        }
    }
    let vectors: Vec<QPoly> = v.iter().map(|c| space.from_coords(c)).collect();
    let dominant_leading = target.is_some_and(|t| {
        vectors.iter().zip(t.iter()).all(|(p, l)| p.leading() == Some(l))
    });
    Ok(WittBasis { vectors, pattern, dominant_leading })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> QPoly {
        Poly::from_i64s(cs)
    }

    fn x(k: usize) -> QPoly {
        QPoly::x_pow(k)
    }

    fn factorial(k: usize) -> i64 {
        (1..=k as i64).product()
    }

    #[test]
    fn canonicalize_examples() {
        let s = PolySpace::canonicalize(&[p(&[1]), p(&[0, 1]), p(&[1, 1])]);
        assert_eq!(s.basis(), &[p(&[1]), p(&[0, 1])]);
        assert_eq!(PolySpace::canonicalize(&[p(&[0, 0, 2])]).basis(), &[x(2)]);
        let s = PolySpace::canonicalize(&[p(&[0, 1]), p(&[0, 1, 1])]);
        assert_eq!(s.basis(), &[x(1), x(2)]);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(7, 3).len(), 35);
        assert_eq!(combinations(7, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(4, 2)[0], vec![0, 1]);
    }

    #[test]
    fn ramification_of_full_space_is_trivial() {
        let v = PolySpace::polys_up_to(6);
        let r = v.ramification().unwrap();
        assert!(r.t.iter().all(|t| *t == QPoly::one()));
    }

    #[test]
    fn ramification_of_monomial_space() {
        let v = PolySpace::g2_monomial(2, 3);
        let r = v.ramification().unwrap();
        assert_eq!(r.t, vec![x(1), x(0), x(1), x(1), x(0), x(1)]);
    }

    #[test]
    fn base_point_is_reported() {
        let v = PolySpace::canonicalize(&[x(1), x(2)]);
        assert_eq!(v.ramification().unwrap_err(), Error::BasePoint);
    }

    #[test]
    fn self_duality_examples() {
        assert!(PolySpace::polys_up_to(6).check_self_dual().unwrap());
        assert!(!PolySpace::monomials(&[0, 1, 2, 3, 4, 5, 7]).check_self_dual().unwrap());
    }

    #[test]
    fn witt_basis_of_full_space_is_divided_powers() {
        let w = PolySpace::polys_up_to(6).witt_basis().unwrap();
        let want: Vec<QPoly> = (0..7).map(|k| Poly::monomial(Rational::new(1, factorial(k)), k)).collect();
        assert_eq!(w.vectors, want);
        assert!(w.dominant_leading);
        assert_eq!(w.pattern, Some((0, 1, 2)));
    }

    #[test]
    fn witt_gram_on_divided_powers() {
        let v = PolySpace::polys_up_to(6);
        let w = v.witt_basis().unwrap();
        let g = v.gram_in(&w.vectors).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(g[(i, j)], witt_gram_entry(i, j), "({i}, {j})");
            }
        }
        assert_eq!(v.bilinear_form(&w.vectors[0], &w.vectors[6]).unwrap(), Rational::one());
        assert_eq!(v.bilinear_form(&w.vectors[3], &w.vectors[3]).unwrap(), -Rational::one());
    }

    #[test]
    fn isotropic_triple() {
        let v = PolySpace::polys_up_to(6);
        assert!(v.isotropy(&[x(0), x(1), x(2)]).unwrap());
        assert!(!v.isotropy(&[x(0), x(6)]).unwrap());
    }

    #[test]
    fn divided_wronskian_rejects_outsiders() {
        let v = PolySpace::polys_up_to(3);
        assert_eq!(v.divided_wronskian(&[x(7)]), Err(Error::NotInSpace));
    }

    fn random_elements(v: &PolySpace, seeds: &[i64]) -> Vec<QPoly> {
        seeds
            .chunks(v.dim())
            .map(|c| v.from_coords(&c.iter().map(|&s| Rational::integer(s)).collect::<Vec<_>>()))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn u_i_divides_every_wronskian(seeds in prop::collection::vec(-4i64..5, 21), mn in 0usize..3) {
            let (m, n) = [(1, 2), (1, 3), (2, 3)][mn];
            let v = PolySpace::g2_monomial(m, n);
            let fs = random_elements(&v, &seeds);
            let w = wronskian(&fs);
            let u3 = &v.ramification().unwrap().u[3];
            prop_assert!(u3.divides(&w));
        }

        #[test]
        fn canonicalize_is_idempotent(seeds in prop::collection::vec(-4i64..5, 12)) {
            let gens: Vec<QPoly> = seeds.chunks(4).map(p).collect();
            let s = PolySpace::canonicalize(&gens);
            prop_assert_eq!(PolySpace::canonicalize(s.basis()), s.clone());
            for g in &gens {
                prop_assert!(s.contains(g));
            }
        }

        #[test]
        fn t_symmetry_for_self_dual(mn in 0usize..4) {
            let (m, n) = [(1, 2), (1, 3), (2, 3), (1, 4)][mn];
            let v = PolySpace::g2_monomial(m, n);
            prop_assert!(v.check_self_dual().unwrap());
            let t = &v.ramification().unwrap().t;
            for i in 0..6 {
                prop_assert_eq!(&t[i], &t[5 - i]);
            }
        }
    }
}
