//! Dense univariate polynomials and rational functions over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

pub type QPoly = Poly<Rational>;

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `x^k`.
    pub fn x_pow(k: usize) -> Self {
        Poly::monomial(F::one(), k)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Divides through by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    /// `n`-th derivative.
    pub fn derivative_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division `(q, r)` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.leading().ok_or(Error::DivisionByZero)?;
        let dinv = dl.inv().ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * &dinv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Quotient of an exact division; fails on a nonzero remainder.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; fails when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Monic gcd of a family; fails when all members are zero.
    pub fn gcd_all<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Result<Self> {
        let mut acc = Poly::zero();
        for p in items {
            if p.is_zero() {
                continue;
            }
            acc = if acc.is_zero() { p.monic() } else { acc.gcd(p)? };
            if acc.degree() == Some(0) {
                break;
            }
        }
        if acc.is_zero() {
            return Err(Error::ZeroGcd);
        }
        Ok(acc)
    }

    /// `g` with `g^2 = self`, leading coefficient the canonical root of `lc(self)`.
    pub fn perfect_square_root(&self) -> Result<Self> {
        let Some(n) = self.degree() else {
            return Ok(Poly::zero());
        };
        if n % 2 == 1 {
            return Err(Error::NotSquare("odd degree".into()));
        }
        let lc = self.leading().expect("nonzero");
        let r = lc
            .sqrt()
            .ok_or_else(|| Error::NotSquare(format!("leading coefficient {lc} has no root")))?;
        let m = n / 2;
        let two_r_inv = (r.clone() + &r).inv().expect("nonzero root");
        // top-down: coefficient of x^(m+k) in g^2 fixes g_(m-k)
        let mut g = vec![F::zero(); m + 1];
        g[m] = r;
        for k in 1..=m {
            let idx = n - k;
            let mut s = F::zero();
            for i in (m - k + 1)..=m {
                let j = idx - i;
                if j > m - k && j <= m {
                    s = s + g[i].clone() * &g[j];
                }
            }
            g[m - k] = (self.coeff(idx) - s) * &two_r_inv;
        }
        let root = Poly::new(g);
        if &(&root * &root) != self {
            return Err(Error::NotSquare("nonzero remainder".into()));
        }
        Ok(root)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Rational> {
    pub fn from_ratios(cs: &[(i64, i64)]) -> Self {
        Poly::new(cs.iter().map(|&(n, d)| Rational::new(n, d)).collect())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "{c:?}*x")?,
                _ => write!(f, "{c:?}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<F: Field + Serialize> Serialize for Poly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for Poly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<F>::deserialize(d)?))
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &'a Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &'a Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &'a Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        Poly::new(out)
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// Determinant of a square matrix over `F[x]` by fraction-free elimination.
pub fn poly_det<F: Field>(mut m: Vec<Vec<Poly<F>>>) -> Poly<F> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign_neg = false;
    let mut prev = Poly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign_neg = !sign_neg;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss step divides exactly");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        -det
    } else {
        det
    }
}

/// `det(u_i^(j-1))`; the empty Wronskian is 1.
pub fn wronskian<F: Field>(fs: &[Poly<F>]) -> Poly<F> {
    let k = fs.len();
    let mut rows: Vec<Vec<Poly<F>>> = Vec::with_capacity(k);
    let mut cur: Vec<Poly<F>> = fs.to_vec();
    for _ in 0..k {
        rows.push(cur.clone());
        cur = cur.iter().map(|p| p.derivative()).collect();
    }
    poly_det(rows)
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        let lc = den.leading().ok_or(Error::DivisionByZero)?.clone();
        if num.is_zero() {
            return Ok(RatFun { num, den: Poly::one() });
        }
        let g = num.gcd(&den)?;
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let inv = lc.inv().expect("nonzero");
        let dl = den.leading().expect("nonzero").clone();
        // lc(den) after dividing by the monic gcd is still lc
        debug_assert_eq!(dl, lc);
        Ok(RatFun { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly<F>> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFun::new(n, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = &(&self.num * &o.den) - &(&o.num * &self.den);
        RatFun::new(n, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFun::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(&self.num * &o.den, &self.den * &o.num)
    }

    /// Logarithmic derivative `u'/u`.
    pub fn log_derivative(&self) -> Result<Self> {
        self.derivative().div(self)
    }
}

/// `g' - (u'/u) g`.
pub fn apply_log_factor<F: Field>(g: &RatFun<F>, u: &RatFun<F>) -> Result<RatFun<F>> {
    Ok(g.derivative().sub(&u.log_derivative()?.mul(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QExt;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> QPoly {
        Poly::from_i64s(cs)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        assert_eq!(p(&[1, 0, 0]).coeffs().len(), 1);
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn small_wronskians() {
        assert_eq!(wronskian(&[p(&[1]), p(&[0, 1])]), p(&[1]));
        assert_eq!(wronskian(&[p(&[0, 1]), p(&[0, 0, 0, 1])]), p(&[0, 0, 0, 2]));
        let x6 = Poly::monomial(q(1, 720), 6);
        assert_eq!(wronskian(&[p(&[1]), p(&[0, 1]), x6]), Poly::monomial(q(1, 24), 4));
        assert_eq!(wronskian::<Rational>(&[]), p(&[1]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[-2, 0, 2]); // 2(x-1)(x+1)
        let b = p(&[-3, 3]); // 3(x-1)
        assert_eq!(a.gcd(&b).unwrap(), p(&[-1, 1]));
        assert_eq!(QPoly::zero().gcd(&QPoly::zero()), Err(Error::ZeroGcd));
        assert_eq!(QPoly::zero().gcd(&p(&[0, 5])).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn exact_division_fails_on_remainder() {
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), Err(Error::InexactDivision));
    }

    #[test]
    fn square_roots() {
        assert_eq!(p(&[1, 2, 1]).perfect_square_root().unwrap(), p(&[1, 1]));
        assert!(p(&[1, 0, 1]).perfect_square_root().is_err());
        assert_eq!(p(&[0, 0, 0, 0, 4]).perfect_square_root().unwrap(), p(&[0, 0, 2]));
        assert!(p(&[0, 0, 2]).perfect_square_root().is_err());
        assert!(p(&[0, 1]).perfect_square_root().is_err());
        let half = Poly::<QExt>::constant(QExt::from_rational(&q(1, 2)));
        assert_eq!(half.perfect_square_root().unwrap(), Poly::constant(QExt::inv_sqrt2()));
    }

    #[test]
    fn log_factor_examples() {
        let r = |cs: &[i64]| RatFun::from_poly(p(cs));
        assert_eq!(apply_log_factor(&r(&[0, 1]), &r(&[1])).unwrap(), r(&[1]));
        assert_eq!(apply_log_factor(&r(&[0, 0, 1]), &r(&[0, 1])).unwrap(), r(&[0, 1]));
        let u = r(&[3, 1, 4]);
        assert!(apply_log_factor(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn ratfun_is_reduced() {
        let f = RatFun::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(f.num(), &Poly::from_ratios(&[(-1, 2), (1, 2)]));
        assert_eq!(f.den(), &p(&[1]));
        assert!(RatFun::new(p(&[1]), QPoly::zero()).is_err());
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-6i64..7, 1i64..4), 0..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    /// Cofactor expansion; independent of the elimination route.
    fn det_laplace(m: &[Vec<QPoly>]) -> QPoly {
        if m.is_empty() {
            return Poly::one();
        }
        let mut acc = QPoly::zero();
        for c in 0..m.len() {
            let minor: Vec<Vec<QPoly>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][c] * &det_laplace(&minor);
            acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn wronskian_matches_cofactor_oracle(fs in prop::collection::vec(small_poly(5), 1..5)) {
            let k = fs.len();
            let rows: Vec<Vec<QPoly>> = (0..k).map(|j| fs.iter().map(|f| f.derivative_n(j)).collect()).collect();
            prop_assert_eq!(wronskian(&fs), det_laplace(&rows));
        }

        #[test]
        fn wronskian_identity(a in small_poly(8), b in small_poly(8), c in small_poly(8)) {
            let lhs = wronskian(&[wronskian(&[a.clone(), b.clone()]), wronskian(&[a.clone(), c.clone()])]);
            prop_assert_eq!(lhs, &wronskian(&[a.clone(), b, c]) * &a);
        }

        #[test]
        fn divrem_reconstructs(a in small_poly(7), d in small_poly(4)) {
            prop_assume!(!d.is_zero());
            let (qq, r) = a.divrem(&d).unwrap();
            prop_assert_eq!(&(&qq * &d) + &r, a);
            prop_assert!(r.degree().is_none_or(|rd| rd < d.degree().unwrap()));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(5), b in small_poly(5), c in small_poly(3)) {
            let (a, b) = (&a * &c, &b * &c);
            prop_assume!(!a.is_zero() || !b.is_zero());
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.divides(&a) && g.divides(&b));
            if !c.is_zero() {
                prop_assert!(c.divides(&g));
            }
        }

        #[test]
        fn square_root_of_square(g in small_poly(5)) {
            prop_assume!(!g.is_zero());
            let r = (&g * &g).perfect_square_root().unwrap();
            prop_assert!(r == g || r == -g.clone());
        }
    }
}
