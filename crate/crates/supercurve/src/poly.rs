//! Dense univariate polynomials over Q with an integer core.
//!
//! A [`IntPoly`] stores a primitive integer coefficient vector (gcd 1,
//! leading entry nonzero) together with a single positive rational content
//! factor, so the represented value is `content * sum(coeffs[i] * x^i)`.
//! Keeping the rational part in one place makes gcd, squarefree splitting
//! and resultant work on plain `BigInt` vectors.
//!
//! Resultants use the subresultant remainder sequence, which keeps the
//! intermediate integers polynomial-size instead of exponential.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial over Q, stored as a positive rational content times a
/// primitive integer polynomial. The zero polynomial has an empty
/// coefficient vector and content 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    /// Primitive part: gcd of entries is 1, last entry nonzero (value order,
    /// index = exponent). Empty exactly for the zero polynomial.
    coeffs: Vec<BigInt>,
    /// Positive scale factor; the sign of the value lives in `coeffs`.
    content: BigRational,
}

/// One factor of a squarefree decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactor {
    pub factor: IntPoly,
    pub multiplicity: u32,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly {
            coeffs: Vec::new(),
            content: BigRational::one(),
        }
    }

    pub fn one() -> Self {
        IntPoly::constant(&BigRational::one())
    }

    /// The monomial x.
    pub fn x() -> Self {
        IntPoly::from_int_coeffs(&[0, 1])
    }

    pub fn constant(c: &BigRational) -> Self {
        IntPoly::from_rational_coeffs(vec![c.clone()])
    }

    pub fn monomial(c: &BigRational, degree: usize) -> Self {
        let mut v = vec![BigRational::zero(); degree + 1];
        v[degree] = c.clone();
        IntPoly::from_rational_coeffs(v)
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_bigint_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_bigint_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self::normalize_int(coeffs, BigRational::one())
    }

    pub fn from_rational_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut den = BigInt::one();
        for c in &coeffs {
            den = den.lcm(c.denom());
        }
        let ints = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::normalize_int(ints, BigRational::new(BigInt::one(), den))
    }

    /// Restore the invariants from a raw integer vector and a scale factor.
    fn normalize_int(mut coeffs: Vec<BigInt>, scale: BigRational) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return IntPoly::zero();
        }
        let mut g = BigInt::zero();
        for c in &coeffs {
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut coeffs {
                *c /= &g;
            }
        }
        let content = scale.abs() * BigRational::from_integer(g);
        if scale.is_negative() {
            for c in &mut coeffs {
                *c = -std::mem::take(c);
            }
        }
        IntPoly { coeffs, content }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree of a polynomial known to be nonzero.
    pub(crate) fn deg(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    pub fn content_factor(&self) -> &BigRational {
        &self.content
    }

    /// Primitive integer coefficients, index = exponent.
    pub fn prim_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^i of the represented value.
    pub fn coeff(&self, i: usize) -> BigRational {
        match self.coeffs.get(i) {
            Some(c) => &self.content * BigRational::from_integer(c.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn rational_coeffs(&self) -> Vec<BigRational> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading_coeff(&self) -> BigRational {
        match self.coeffs.last() {
            Some(c) => &self.content * BigRational::from_integer(c.clone()),
            None => BigRational::zero(),
        }
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Split into a signed rational content and a primitive part with
    /// positive leading coefficient, so `content * primitive == self`.
    pub fn content_primitive(&self) -> Result<(BigRational, IntPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("content"));
        }
        let negative = self.coeffs.last().unwrap().is_negative();
        let prim = if negative {
            -self.primitive_raw()
        } else {
            self.primitive_raw()
        };
        let content = if negative {
            -self.content.clone()
        } else {
            self.content.clone()
        };
        Ok((content, prim))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let p = self.primitive_raw();
        if p.coeffs.last().unwrap().is_negative() {
            -p
        } else {
            p
        }
    }

    fn primitive_raw(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.clone(),
            content: BigRational::one(),
        }
    }

    pub fn neg(&self) -> IntPoly {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        IntPoly {
            coeffs,
            content: self.content.clone(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // content_i = a_i / b_i; combine over the lcm of the denominators.
        let l = self.content.denom().lcm(other.content.denom());
        let m1 = self.content.numer() * (&l / self.content.denom());
        let m2 = other.content.numer() * (&l / other.content.denom());
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c * &m1;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            v[i] += c * &m2;
        }
        Self::normalize_int(v, BigRational::new(BigInt::one(), l))
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        // Product of primitive polynomials is primitive (Gauss), so no
        // re-normalization pass is needed.
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly {
            coeffs: v,
            content: &self.content * &other.content,
        }
    }

    pub fn mul_scalar(&self, s: &BigRational) -> IntPoly {
        if s.is_zero() || self.is_zero() {
            return IntPoly::zero();
        }
        let mut r = self.clone();
        r.content *= s.abs();
        if s.is_negative() {
            r = r.neg();
        }
        r
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let v: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::normalize_int(v, self.content.clone())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc * &self.content
    }

    /// f(u x): substitute a rational multiple of x.
    pub fn scale_x(&self, u: &BigRational) -> IntPoly {
        let v: Vec<BigRational> = self
            .rational_coeffs()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut p = BigRational::one();
                for _ in 0..i {
                    p *= u;
                }
                c * p
            })
            .collect();
        IntPoly::from_rational_coeffs(v)
    }

    /// f(x + t).
    pub fn translate_x(&self, t: &BigRational) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        mobius_transform(self, &MobiusMap::translation(t), self.deg())
            .expect("translation is never degenerate")
    }

    /// Exact quotient, or `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < other.deg() {
            return None;
        }
        let mut rem = self.rational_coeffs();
        let div = other.rational_coeffs();
        let dq = rem.len() - div.len();
        let mut q = vec![BigRational::zero(); dq + 1];
        let lead = div.last().unwrap().clone();
        for k in (0..=dq).rev() {
            let c = &rem[k + div.len() - 1] / &lead;
            if !c.is_zero() {
                for (j, d) in div.iter().enumerate() {
                    let t = &c * d;
                    rem[k + j] -= t;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_rational_coeffs(q))
    }

    /// Gcd of the primitive parts, primitive with positive leading
    /// coefficient. Uses a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = prem(&a.coeffs, &b.coeffs);
            if r.iter().all(|c| c.is_zero()) {
                return b;
            }
            let r = IntPoly::from_bigint_coeffs(r).primitive_part();
            if r.deg() == 0 {
                return IntPoly::one();
            }
            a = b;
            b = r;
        }
    }

    /// True when the primitive part has no repeated roots.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => self.gcd(&self.derivative()).deg() == 0,
        }
    }

    /// Yun's algorithm. Returns `(unit, parts)` with the multiplicities
    /// strictly ascending, the factors primitive with positive leading
    /// coefficient, and `unit * prod(factor^multiplicity) == self`.
    pub fn squarefree_decomposition(&self) -> Result<(BigRational, Vec<SquarefreeFactor>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("squarefree decomposition"));
        }
        let (unit, f) = self.content_primitive()?;
        if f.deg() == 0 {
            return Ok((unit, Vec::new()));
        }
        let fp = f.derivative();
        let g = f.gcd(&fp);
        if g.deg() == 0 {
            return Ok((
                unit,
                vec![SquarefreeFactor {
                    factor: f,
                    multiplicity: 1,
                }],
            ));
        }
        let mut parts = Vec::new();
        let mut c = f.div_exact(&g).expect("gcd divides f");
        let mut d = fp
            .div_exact(&g)
            .expect("gcd divides f'")
            .sub(&c.derivative());
        let mut i = 1u32;
        while c.deg() > 0 {
            let p = c.gcd(&d);
            if p.deg() > 0 {
                parts.push(SquarefreeFactor {
                    factor: p.clone(),
                    multiplicity: i,
                });
            }
            c = c.div_exact(&p).expect("factor divides c");
            d = d
                .div_exact(&p)
                .expect("factor divides d")
                .sub(&c.derivative());
            i += 1;
        }
        Ok((unit, parts))
    }

    /// Product of the distinct irreducible factors (primitive, positive lead).
    pub fn squarefree_part(&self) -> Result<IntPoly> {
        let (_, parts) = self.squarefree_decomposition()?;
        let mut acc = IntPoly::one();
        for p in &parts {
            acc = acc.mul(&p.factor);
        }
        Ok(acc)
    }

    /// Resultant of the represented values.
    pub fn resultant(&self, other: &IntPoly) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let da = self.deg();
        let db = other.deg();
        let core = resultant_prim(&self.coeffs, &other.coeffs);
        let scale =
            rational_pow(&self.content, db as i64) * rational_pow(&other.content, da as i64);
        BigRational::from_integer(core) * scale
    }

    /// Discriminant `(-1)^(d(d-1)/2) * Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigRational> {
        let d = self.degree().ok_or(Error::ZeroPolynomial("discriminant"))?;
        if d < 1 {
            return Err(Error::DegreeTooSmall { min: 1, got: d });
        }
        if d == 1 {
            return Ok(BigRational::one());
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
        Ok(res / self.leading_coeff() * BigRational::from_integer(BigInt::from(sign)))
    }

    /// Parse the plain text format, e.g. `x^10 - 1` or `3*x^2 - 6x + 9`.
    pub fn parse(text: &str) -> Result<IntPoly> {
        parse_with_params(text, &BTreeMap::new())
    }
}

impl std::ops::Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::neg(&self)
    }
}

pub(crate) fn rational_pow(base: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Pseudo-remainder: returns r with lc(b)^(deg a - deg b + 1) * a = q*b + r.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r: Vec<BigInt> = a.to_vec();
    let mut e = (a.len() - 1 - db + 1) as i64;
    loop {
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() || r.len() - 1 < db {
            break;
        }
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let mut nr = vec![BigInt::zero(); dr];
        for (i, c) in r[..dr].iter().enumerate() {
            nr[i] = c * lb;
        }
        for (j, c) in b[..db].iter().enumerate() {
            nr[dr - db + j] -= c * &lr;
        }
        r = nr;
        e -= 1;
    }
    if e > 0 {
        let f = num_traits::pow::pow(lb.clone(), e as usize);
        for c in &mut r {
            *c *= &f;
        }
    }
    r
}

/// Resultant of two nonzero integer polynomials via the subresultant
/// remainder sequence (Collins/Brown; see Cohen, Algorithm 3.3.7).
fn resultant_prim(a0: &[BigInt], b0: &[BigInt]) -> BigInt {
    let mut sign = 1i32;
    let (mut a, mut b): (Vec<BigInt>, Vec<BigInt>) = if a0.len() < b0.len() {
        if (a0.len() - 1) % 2 == 1 && (b0.len() - 1) % 2 == 1 {
            sign = -sign;
        }
        (b0.to_vec(), a0.to_vec())
    } else {
        (a0.to_vec(), b0.to_vec())
    };
    if b.len() == 1 {
        return flip(num_traits::pow::pow(b[0].clone(), a.len() - 1), sign);
    }
    // Contents split off so the core runs on primitive vectors.
    let ca = vec_content(&a);
    let cb = vec_content(&b);
    let mult = num_traits::pow::pow(ca.clone(), b.len() - 1)
        * num_traits::pow::pow(cb.clone(), a.len() - 1);
    vec_div_scalar(&mut a, &ca);
    vec_div_scalar(&mut b, &cb);

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let mut r = prem(&a, &b);
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        a = b;
        if r.is_empty() {
            return BigInt::zero();
        }
        let den = &g * num_traits::pow::pow(h.clone(), delta);
        for c in &mut r {
            let (q, rem) = c.div_rem(&den);
            debug_assert!(rem.is_zero(), "subresultant division must be exact");
            *c = q;
        }
        b = r;
        g = a.last().unwrap().clone();
        if delta > 0 {
            // h = g^delta / h^(delta-1), exact in the subresultant sequence.
            let num = num_traits::pow::pow(g.clone(), delta);
            let den = num_traits::pow::pow(h.clone(), delta - 1);
            let (q, rem) = num.div_rem(&den);
            debug_assert!(rem.is_zero());
            h = q;
        }
        if b.len() == 1 {
            let da = a.len() - 1;
            // res = lc(b)^da / h^(da-1)
            let num = num_traits::pow::pow(b[0].clone(), da);
            let den = num_traits::pow::pow(h.clone(), da.saturating_sub(1));
            let (q, rem) = num.div_rem(&den);
            debug_assert!(rem.is_zero());
            return flip(q * mult, sign);
        }
    }
}

fn flip(v: BigInt, sign: i32) -> BigInt {
    if sign < 0 {
        -v
    } else {
        v
    }
}

fn vec_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    g
}

fn vec_div_scalar(v: &mut [BigInt], s: &BigInt) {
    if s.is_one() {
        return;
    }
    for c in v.iter_mut() {
        *c /= s;
    }
}

/// Exact k-th root of a rational, when it exists (for even k the input must
/// be nonnegative and the positive root is returned).
pub fn rational_nth_root(x: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    let n = bigint_nth_root(x.numer(), k)?;
    let d = bigint_nth_root(x.denom(), k)?;
    Some(BigRational::new(n, d))
}

fn bigint_nth_root(v: &BigInt, k: u32) -> Option<BigInt> {
    if v.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let r = v.nth_root(k);
    let mut p = BigInt::one();
    for _ in 0..k {
        p *= &r;
    }
    if &p == v {
        Some(r)
    } else {
        None
    }
}

/// A 2x2 integer matrix acting on the x-line by `x -> (a x + b) / (c x + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MobiusMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        MobiusMap {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        MobiusMap::new(1, 0, 0, 1)
    }

    /// x -> x + t for rational t = p/q, encoded as [[q, p], [0, q]].
    pub fn translation(t: &BigRational) -> Self {
        MobiusMap {
            a: t.denom().clone(),
            b: t.numer().clone(),
            c: BigInt::zero(),
            d: t.denom().clone(),
        }
    }

    /// x -> u x for rational u = p/q, encoded as [[p, 0], [0, q]].
    pub fn scaling(u: &BigRational) -> Self {
        MobiusMap {
            a: u.numer().clone(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: u.denom().clone(),
        }
    }

    /// x -> s x + t for rationals s, t.
    pub fn affine(scale: &BigRational, offset: &BigRational) -> Self {
        MobiusMap {
            a: scale.numer() * offset.denom(),
            b: offset.numer() * scale.denom(),
            c: BigInt::zero(),
            d: scale.denom() * offset.denom(),
        }
    }

    /// x -> 1/x.
    pub fn inversion() -> Self {
        MobiusMap::new(0, 1, 1, 0)
    }

    /// x -> -x.
    pub fn negation() -> Self {
        MobiusMap::new(-1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_singular(&self) -> bool {
        self.det().is_zero()
    }

    /// Matrix product `self * rhs`; substitution with the product equals
    /// substituting `self` first, then `rhs`.
    pub fn compose(&self, rhs: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Inverse up to the determinant scalar, which a Mobius action ignores.
    pub fn adjugate(&self) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }
}

/// `(c x + d)^weight * f((a x + b) / (c x + d))` with denominators cleared.
/// Needs `weight >= deg f`; the result has degree at most `weight`.
pub fn mobius_transform(f: &IntPoly, m: &MobiusMap, weight: usize) -> Result<IntPoly> {
    if m.is_singular() {
        return Err(Error::DegenerateTransformation);
    }
    if f.is_zero() {
        return Ok(IntPoly::zero());
    }
    let deg = f.deg();
    if weight < deg {
        return Err(Error::WeightTooSmall {
            weight,
            degree: deg,
        });
    }
    let num = IntPoly::from_bigint_coeffs(vec![m.b.clone(), m.a.clone()]);
    let den = IntPoly::from_bigint_coeffs(vec![m.d.clone(), m.c.clone()]);
    // Horner in (a x + b), with matching powers of (c x + d).
    let mut acc = IntPoly::constant(&f.coeff(deg));
    for i in (0..deg).rev() {
        acc = acc.mul(&num);
        let ci = f.coeff(i);
        if !ci.is_zero() {
            acc = acc.add(&den.pow((deg - i) as u32).mul_scalar(&ci));
        }
    }
    Ok(acc.mul(&den.pow((weight - deg) as u32)))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(out, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let unit = mag.is_one();
            if !unit || i == 0 {
                if mag.is_integer() {
                    write!(out, "{}", mag.numer())?;
                } else {
                    write!(out, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            if i > 0 {
                if !unit {
                    write!(out, "*")?;
                }
                if i == 1 {
                    write!(out, "x")?;
                } else {
                    write!(out, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "IntPoly({})", self)
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    X,
    Param(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            'x' | 'X' => {
                toks.push(Tok::X);
                i += 1;
            }
            '$' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && (bytes[j].is_alphanumeric() || bytes[j] == '_') {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse("empty parameter name after `$`".into()));
                }
                toks.push(Tok::Param(bytes[start..j].iter().collect()));
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = bytes[i..j].iter().collect();
                let v = s
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer `{s}`: {e}")))?;
                toks.push(Tok::Int(v));
                i = j;
            }
            other => {
                return Err(Error::Parse(format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    params: &'a BTreeMap<String, BigRational>,
    seen: BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut neg = false;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                }
                Tok::Minus => {
                    neg = !neg;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    match rhs.degree() {
                        Some(0) => {
                            acc = acc.mul_scalar(&rhs.coeff(0).recip());
                        }
                        _ => {
                            return Err(Error::Parse(
                                "division is only allowed by a nonzero constant".into(),
                            ))
                        }
                    }
                }
                // Implicit multiplication: `3x`, `x(x-1)`, `2$a`.
                Some(Tok::Int(_)) | Some(Tok::X) | Some(Tok::Param(_)) | Some(Tok::LParen) => {
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntPoly> {
        let base = match self.next().cloned() {
            Some(Tok::Int(v)) => IntPoly::constant(&BigRational::from_integer(v)),
            Some(Tok::X) => IntPoly::x(),
            Some(Tok::Param(name)) => {
                self.seen.insert(name.clone());
                match self.params.get(&name) {
                    Some(v) => IntPoly::constant(v),
                    None => return Err(Error::MissingParameter(name)),
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => inner,
                    _ => return Err(Error::Parse("unbalanced parenthesis".into())),
                }
            }
            Some(Tok::Minus) => self.factor()?.neg(),
            other => return Err(Error::Parse(format!("expected a value, found {:?}", other))),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next().cloned() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| Error::Parse("exponent out of range".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse(
                    "expected an integer exponent after `^`".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }
}

/// Parse a polynomial expression, substituting `$name` parameters.
pub fn parse_with_params(text: &str, params: &BTreeMap<String, BigRational>) -> Result<IntPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        params,
        seen: BTreeSet::new(),
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {} of {}",
            p.pos + 1,
            toks.len()
        )));
    }
    Ok(v)
}

/// The set of `$name` parameters appearing in a template.
pub fn template_params(text: &str) -> Result<BTreeSet<String>> {
    let toks = lex(text)?;
    Ok(toks
        .into_iter()
        .filter_map(|t| match t {
            Tok::Param(name) => Some(name),
            _ => None,
        })
        .collect())
}
