//! Superelliptic curve models `y^n = f(x)` over Q.
//!
//! A model is stored in a canonical form so that two models differing by an
//! n-th power rescaling of `f` (which is an isomorphism via `y -> c y`)
//! compare equal: the content of `f` is reduced to a positive n-th-power-free
//! integer, and for odd `n` the sign of `f` is normalized away (since `-1`
//! is then an n-th power).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{mobius_transform, IntPoly, MobiusMap};

/// A geometrically irreducible superelliptic model `y^n = f(x)`, `n >= 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperellipticCurve {
    n: u64,
    f: IntPoly,
}

impl SuperellipticCurve {
    /// Validate and canonicalize a model. Fails when `n < 2`, `f` is zero,
    /// or the affine equation is geometrically reducible (`f` is an e-th
    /// power up to scalar for some `e > 1` dividing `n`).
    pub fn new(n: u64, f: IntPoly) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCurve(format!(
                "exponent n must be at least 2, got {n}"
            )));
        }
        if f.is_zero() {
            return Err(Error::InvalidCurve("f must be nonzero".into()));
        }
        // Geometric irreducibility: gcd(n, all root multiplicities) == 1.
        // A constant f has no roots (the gcd is then n itself).
        let witness = match f.degree() {
            Some(0) | None => n,
            Some(_) => {
                let (_, parts) = f.squarefree_decomposition()?;
                let mut g = n;
                for p in &parts {
                    g = g.gcd(&u64::from(p.multiplicity));
                }
                g
            }
        };
        if witness != 1 {
            return Err(Error::ReducibleModel { n, witness });
        }
        let (content, prim) = f.content_primitive()?;
        let mut scale = BigRational::from_integer(nth_power_free(&content.abs(), n));
        if content.is_negative() && n.is_multiple_of(2) {
            scale = -scale;
        }
        Ok(SuperellipticCurve {
            n,
            f: prim.mul_scalar(&scale),
        })
    }

    /// Parse `y^n = f(x)` text, e.g. `y^3 = x^4 - 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let (lhs, rhs) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse("expected `y^n = f(x)`".into()))?;
        let lhs = lhs.trim();
        let n: u64 = match lhs.strip_prefix('y') {
            Some("") => 1,
            Some(rest) => {
                let rest = rest.trim_start();
                let exp = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad left-hand side `{lhs}`")))?
                    .trim();
                exp.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent `{exp}`")))?
            }
            None => return Err(Error::Parse(format!("bad left-hand side `{lhs}`"))),
        };
        SuperellipticCurve::new(n, IntPoly::parse(rhs)?)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("curve polynomial is nonzero")
    }

    /// Multiplicities of all geometric branch points of the degree-n cover
    /// of the x-line: one entry per distinct root of `f`, plus a final entry
    /// of `deg f` for the place at infinity when `n` does not divide `deg f`.
    pub fn branch_multiplicities(&self) -> Vec<u64> {
        let (_, parts) = self
            .f
            .squarefree_decomposition()
            .expect("curve polynomial is nonzero");
        let mut out = Vec::new();
        for p in &parts {
            let roots = p.factor.degree().unwrap_or(0);
            out.extend(std::iter::repeat_n(u64::from(p.multiplicity), roots));
        }
        let d = self.degree() as u64;
        if !d.is_multiple_of(self.n) {
            out.push(d);
        }
        out
    }

    /// Genus of the smooth projective model, by Riemann-Hurwitz for the
    /// cyclic degree-n cover of the line: each branch point of multiplicity
    /// m contributes `n - gcd(n, m)` to the ramification total.
    pub fn genus(&self) -> u64 {
        let n = self.n;
        let total: u64 = self
            .branch_multiplicities()
            .iter()
            .map(|&m| n - n.gcd(&m))
            .sum();
        assert!(total.is_multiple_of(2), "ramification total must be even");
        let g = 1 + total as i64 / 2 - n as i64;
        assert!(g >= 0, "genus of an irreducible curve is nonnegative");
        g as u64
    }

    /// Change coordinates by a Mobius map. The polynomial is transformed
    /// with weight `n * ceil(d / n)`, the smallest multiple of `n` that can
    /// hold the degree; this keeps the result a model of the same curve up
    /// to an n-th power rescaling, so the genus is unchanged.
    pub fn apply_transform(&self, m: &MobiusMap) -> Result<SuperellipticCurve> {
        let d = self.degree();
        let w = self.n as usize * d.div_ceil(self.n as usize);
        let g = mobius_transform(&self.f, m, w)?;
        let out = SuperellipticCurve::new(self.n, g)?;
        if out.genus() != self.genus() {
            return Err(Error::InvariantViolation(format!(
                "coordinate change moved the genus from {} to {}",
                self.genus(),
                out.genus()
            )));
        }
        Ok(out)
    }

    /// [`Self::apply_transform`] without the genus cross-check.  For inner
    /// loops over moves already known to preserve the genus (translations,
    /// negation, inversion), where recomputing two ramification profiles
    /// per candidate would dominate the cost.
    pub(crate) fn apply_transform_unchecked(&self, m: &MobiusMap) -> Result<SuperellipticCurve> {
        let d = self.degree();
        let w = self.n as usize * d.div_ceil(self.n as usize);
        let g = mobius_transform(&self.f, m, w)?;
        SuperellipticCurve::new(self.n, g)
    }
}

impl fmt::Display for SuperellipticCurve {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "y^{} = {}", self.n, self.f)
    }
}

impl fmt::Debug for SuperellipticCurve {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "SuperellipticCurve({})", self)
    }
}

/// Genus of `y^n = f(x)` for squarefree `f` of degree `d`, in closed form:
/// `1 + (n(d-1) - d - gcd(n, d)) / 2`.
pub fn genus_closed_form(n: u64, d: u64) -> u64 {
    assert!(n >= 2 && d >= 1);
    let num = n as i64 * (d as i64 - 1) - d as i64 - n.gcd(&d) as i64;
    assert!(num % 2 == 0, "closed-form numerator must be even");
    (1 + num / 2) as u64
}

/// Reduce a positive rational to the positive n-th-power-free integer
/// representing the same class modulo n-th powers of rationals.
fn nth_power_free(c: &BigRational, n: u64) -> BigInt {
    debug_assert!(c.is_positive());
    // c = a/b is equivalent to a * b^(n-1) modulo n-th powers.
    let mut m = c.numer().clone();
    let mut bpow = BigInt::one();
    for _ in 0..n - 1 {
        bpow *= c.denom();
    }
    m *= bpow;
    let mut out = BigInt::one();
    for (p, e) in factor_positive(m) {
        let r = e % n;
        for _ in 0..r {
            out *= &p;
        }
    }
    out
}

/// Trial-division factorization of a positive integer. Contents in this
/// domain are small; pathological inputs stay correct, just slow.
pub(crate) fn factor_positive(mut v: BigInt) -> Vec<(BigInt, u64)> {
    debug_assert!(v.is_positive());
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= v {
        if (&v % &p).is_zero() {
            let mut e = 0u64;
            while (&v % &p).is_zero() {
                v /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) {
            BigInt::one()
        } else {
            BigInt::from(2)
        };
    }
    if v > BigInt::one() {
        out.push((v, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(text: &str) -> SuperellipticCurve {
        SuperellipticCurve::parse(text).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(curve("y^4 = x^2 (x^3 - 1)").genus(), 4);
        assert_eq!(curve("y^5 = x (x - 1) (x - 2)").genus(), 4);
        assert_eq!(curve("y^2 = x^3 + 1").genus(), 1);
        assert_eq!(curve("y^6 = x (x - 1) (x - 3)").genus(), 4);
        assert_eq!(curve("y^3 = x^3 - 1").genus(), 1);
        assert_eq!(curve("y^2 = x^5 + x + 1").genus(), 2);
        assert_eq!(curve("y^2 = x^10 - 1").genus(), 4);
        assert_eq!(curve("y^3 = x^6 - 1").genus(), 4);
    }

    #[test]
    fn branch_multiplicities_examples() {
        // x^2 (x^3 - 1): roots of x^3-1 with multiplicity 1, the root 0 with
        // multiplicity 2, and infinity with d = 5.
        let c = curve("y^4 = x^2 (x^3 - 1)");
        assert_eq!(c.branch_multiplicities(), vec![1, 1, 1, 2, 5]);

        // n | d: no branch point at infinity.
        let c = curve("y^2 = x^10 - 1");
        assert_eq!(c.branch_multiplicities(), vec![1; 10]);
    }

    #[test]
    fn reducible_models_rejected() {
        let f = IntPoly::parse("(x^2 + 1)^2").unwrap();
        assert_eq!(
            SuperellipticCurve::new(2, f),
            Err(Error::ReducibleModel { n: 2, witness: 2 })
        );
        let f = IntPoly::parse("(x + 1)^2").unwrap();
        assert_eq!(
            SuperellipticCurve::new(4, f),
            Err(Error::ReducibleModel { n: 4, witness: 2 })
        );
        let f = IntPoly::parse("5").unwrap();
        assert_eq!(
            SuperellipticCurve::new(3, f),
            Err(Error::ReducibleModel { n: 3, witness: 3 })
        );
        // Mixed multiplicities with gcd 1 are fine.
        assert!(SuperellipticCurve::new(4, IntPoly::parse("x^2 (x^3-1)").unwrap()).is_ok());
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            SuperellipticCurve::new(1, IntPoly::x()),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            SuperellipticCurve::new(2, IntPoly::zero()),
            Err(Error::InvalidCurve(_))
        ));
        assert!(SuperellipticCurve::parse("y^2 - x").is_err());
        assert!(SuperellipticCurve::parse("z^2 = x").is_err());
    }

    #[test]
    fn content_canonicalization() {
        // 4 = 2^2 is a square: strips off for n = 2.
        assert_eq!(curve("y^2 = 4x^6 + 4"), curve("y^2 = x^6 + 1"));
        // 8 = 2^3 strips for n = 3; 1/2 is equivalent to 4 modulo cubes.
        assert_eq!(curve("y^3 = 8x^4 + 8x"), curve("y^3 = x^4 + x"));
        assert_eq!(
            SuperellipticCurve::new(3, IntPoly::parse("(1/2) x^4 + (1/2) x").unwrap()).unwrap(),
            curve("y^3 = 4x^4 + 4x")
        );
        // 12 = 2^2 * 3 keeps only the 3 for n = 2.
        assert_eq!(curve("y^2 = 12x^6 + 12"), curve("y^2 = 3x^6 + 3"));
        // Odd n: the sign is an n-th power and is dropped.
        assert_eq!(curve("y^3 = -x^4 - x"), curve("y^3 = x^4 + x"));
        // Even n: the sign is a genuine twist and stays.
        assert_ne!(curve("y^2 = -x^5 - 1"), curve("y^2 = x^5 + 1"));
        // Non-power content is untouched.
        assert_eq!(
            curve("y^2 = 3x^5 + 3").f().coeff(5),
            BigRational::from_integer(3.into())
        );
    }

    #[test]
    fn closed_form_matches_genus() {
        let samples = [
            (2, "x^9 + x + 1"),
            (2, "x^10 - 2x + 1"),
            (3, "x^5 - x - 1"),
            (3, "x^6 + x + 2"),
            (4, "x^7 + x^2 + 1"),
            (5, "x^3 - x - 1"),
            (6, "x^11 + x^3 + 1"),
        ];
        for (n, f) in samples {
            let poly = IntPoly::parse(f).unwrap();
            assert!(poly.is_squarefree());
            let c = SuperellipticCurve::new(n, poly).unwrap();
            assert_eq!(
                c.genus(),
                genus_closed_form(n, c.degree() as u64),
                "closed form mismatch for n={n}, f={f}"
            );
        }
        // Coprime n, d: the familiar (n-1)(d-1)/2.
        assert_eq!(genus_closed_form(2, 5), 2);
        assert_eq!(genus_closed_form(3, 4), 3);
        assert_eq!(genus_closed_form(5, 3), 4);
    }

    #[test]
    fn transforms_preserve_genus() {
        let c = curve("y^2 = x^5 + x + 1");
        let t = c
            .apply_transform(&MobiusMap::translation(&BigRational::from_integer(
                3.into(),
            )))
            .unwrap();
        assert_eq!(t, curve("y^2 = x^5 + 15x^4 + 90x^3 + 270x^2 + 406x + 247"));
        assert_eq!(t.genus(), 2);

        let inv = c.apply_transform(&MobiusMap::inversion()).unwrap();
        assert_eq!(inv, curve("y^2 = x^6 + x^5 + x"));
        assert_eq!(inv.genus(), 2);

        // Rational scaling: x -> x/2 sends x^5+x+1 to a model with content
        // 2^-5; canonicalization clears it back to an integer model.
        let half = BigRational::new(1.into(), 2.into());
        let s = c.apply_transform(&MobiusMap::scaling(&half)).unwrap();
        assert_eq!(s.genus(), 2);

        let g4 = curve("y^4 = x^2 (x^3 - 1)");
        for m in [
            MobiusMap::negation(),
            MobiusMap::inversion(),
            MobiusMap::new(2, 1, 0, 1),
            MobiusMap::new(1, -1, 1, 1),
        ] {
            assert_eq!(g4.apply_transform(&m).unwrap().genus(), 4, "map {:?}", m);
        }
    }

    #[test]
    fn display_roundtrip() {
        for text in ["y^2 = x^5 + x + 1", "y^4 = x^5 - x^2", "y^3 = 2*x^4 + x"] {
            let c = curve(text);
            assert_eq!(SuperellipticCurve::parse(&c.to_string()).unwrap(), c);
            assert_eq!(c.to_string(), text);
        }
    }
}
