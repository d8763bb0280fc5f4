//! Identification of genus-4 superelliptic curves against the built-in
//! catalogue of automorphism loci.
//!
//! Given a curve `y^n = f(x)` of genus 4 with `2 <= n <= 6`, [`classify`]
//! searches the catalogue for a family that contains it.  The search runs
//! three passes, each ordered most-special-first (ascending locus
//! dimension, then ascending case number):
//!
//! 1. **Fit matchers** solve for a rational change of coordinates carrying
//!    the input onto an instantiated family member.  A successful fit
//!    reports the fitted parameters; if the transformed input equals the
//!    instantiated member exactly the match is [`MatchQuality::Exact`],
//!    otherwise the two models differ by a scalar twist and the match is
//!    [`MatchQuality::AtLeast`].
//! 2. **Structural detectors** recognise membership from coefficient
//!    support alone (for example "even degree-10 polynomial").  These
//!    certify membership in the family's closure without producing
//!    parameters, so they always report [`MatchQuality::AtLeast`].
//! 3. **Generic placement** computes the branching signature of the cyclic
//!    cover and places the curve in the unique catalogue stratum with that
//!    signature, when one exists.
//!
//! Curves whose signature matches no catalogue row are reported as
//! [`ClassifyOutcome::Unknown`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::curve::factor_positive;
use crate::curve::SuperellipticCurve;
use crate::error::{Error, Result};
use crate::hurwitz::CoverSignature;
use crate::loci::LociTable;
use crate::poly::{rational_nth_root, IntPoly, MobiusMap};

/// How faithfully a catalogue family reproduces the input curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchQuality {
    /// A rational change of coordinates carries the input onto an exact
    /// member of the family.
    Exact,
    /// The input lies in the family's closure (membership is certain over
    /// an algebraically closed field), but no exact rational model in the
    /// family was found; typically the input is a scalar twist.
    AtLeast,
}

impl fmt::Display for MatchQuality {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchQuality::Exact => write!(out, "exact-match"),
            MatchQuality::AtLeast => write!(out, "at-least"),
        }
    }
}

/// A successful placement of a curve in a catalogue family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedMember {
    /// Catalogue case number of the matched locus.
    pub case_no: u32,
    /// Whether the match is exact or closure membership only.
    pub quality: MatchQuality,
    /// Fitted family parameters (empty for structural and generic matches).
    pub params: BTreeMap<String, BigRational>,
    /// Coordinate change that aligns the input with the family model.
    /// Identity when no change was needed or the match is not constructive.
    pub transform: MobiusMap,
}

/// Result of classifying a genus-4 curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyOutcome {
    /// The curve belongs to a catalogue family.
    Member(ClassifiedMember),
    /// The curve's cyclic-cover signature matches no catalogue stratum.
    Unknown {
        /// Exponent of the cyclic cover.
        n: u64,
        /// Branching signature of the cover `x: curve -> line`.
        signature: CoverSignature,
    },
}

impl fmt::Display for ClassifyOutcome {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyOutcome::Member(m) => write!(out, "case {}, {}", m.case_no, m.quality),
            ClassifyOutcome::Unknown { n, signature } => {
                write!(
                    out,
                    "unknown: degree-{n} cyclic cover with signature {signature}"
                )
            }
        }
    }
}

/// A candidate solution produced by a fit matcher: family parameters plus
/// the coordinate change that should align the candidate model with the
/// instantiated family member.
struct FitCandidate {
    params: BTreeMap<String, BigRational>,
    undo: MobiusMap,
}

/// Classify a genus-4 curve against the catalogue.
///
/// Errors with [`Error::GenusPrecondition`] when the curve's genus differs
/// from the catalogue genus and with [`Error::OutsideTable`] when the
/// cover exponent `n` is outside `2..=6`.
pub fn classify(curve: &SuperellipticCurve, table: &LociTable) -> Result<ClassifyOutcome> {
    let genus = curve.genus();
    if genus != table.genus() {
        return Err(Error::GenusPrecondition(genus));
    }
    let n = curve.n();
    if !(2..=6).contains(&n) {
        return Err(Error::OutsideTable(n));
    }

    let cands = candidate_models(curve);

    // Catalogue families with the same cover exponent, most special first.
    let mut families: Vec<(u64, u32)> = table
        .iter()
        .filter(|l| l.family.as_ref().map(|f| f.n) == Some(n))
        .map(|l| (l.dim, l.case_no))
        .collect();
    families.sort();

    // Pass 1: rational fits.
    for &(_, case_no) in &families {
        let mut twist: Option<ClassifiedMember> = None;
        for (cand, reach) in &cands {
            for fit in fit_candidates(case_no, cand.f()) {
                let aligned = match cand.apply_transform(&fit.undo) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let target = match table.instantiate(case_no, &fit.params) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let transform = reach.compose(&fit.undo);
                if aligned == target {
                    return Ok(ClassifyOutcome::Member(ClassifiedMember {
                        case_no,
                        quality: MatchQuality::Exact,
                        params: fit.params,
                        transform,
                    }));
                }
                let proportional = aligned.f().primitive_part() == target.f().primitive_part();
                if proportional && twist.is_none() {
                    twist = Some(ClassifiedMember {
                        case_no,
                        quality: MatchQuality::AtLeast,
                        params: fit.params,
                        transform,
                    });
                }
            }
        }
        if let Some(member) = twist {
            return Ok(ClassifyOutcome::Member(member));
        }
    }

    // Pass 2: structural membership certificates.
    for &(_, case_no) in &families {
        for (cand, reach) in &cands {
            if structural_member(case_no, cand) {
                return Ok(ClassifyOutcome::Member(ClassifiedMember {
                    case_no,
                    quality: MatchQuality::AtLeast,
                    params: BTreeMap::new(),
                    transform: reach.clone(),
                }));
            }
        }
    }

    // Pass 3: placement by cyclic-cover signature.
    let indices = cover_indices(curve);
    let degree = curve.degree() as u64;
    let case = match n {
        2 if indices == [2; 10] => Some(41),
        3 if indices == [3; 6] && degree == 5 => Some(34),
        3 if indices == [3; 6] && degree == 6 => Some(35),
        4 if indices == [2, 4, 4, 4, 4] => Some(30),
        4 if indices == [2, 2, 2, 2, 4, 4] => Some(33),
        5 if indices == [5, 5, 5, 5] => Some(23),
        6 if indices == [2, 6, 6, 6] => Some(22),
        6 if indices == [2, 2, 3, 3, 3] => Some(28),
        6 if indices == [2, 2, 2, 3, 6] => Some(27),
        _ => None,
    };
    if let Some(case_no) = case {
        if table.get(case_no).is_ok() {
            return Ok(ClassifyOutcome::Member(ClassifiedMember {
                case_no,
                quality: MatchQuality::AtLeast,
                params: BTreeMap::new(),
                transform: MobiusMap::identity(),
            }));
        }
    }
    Ok(ClassifyOutcome::Unknown {
        n,
        signature: CoverSignature::new(0, indices)?,
    })
}

/// Ramification indices of the cyclic cover at its branch points, sorted.
fn cover_indices(curve: &SuperellipticCurve) -> Vec<u64> {
    let n = curve.n();
    let mut indices: Vec<u64> = curve
        .branch_multiplicities()
        .into_iter()
        .filter_map(|m| {
            let g = gcd_u64(n, m % n);
            (g < n).then_some(n / g)
        })
        .collect();
    indices.sort_unstable();
    indices
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Alternative models of the input reached by a translation that removes
/// the sub-leading coefficient, by reversal (`x -> 1/x`), and by their
/// compositions.  Each entry records the transform that reaches it.
fn candidate_models(curve: &SuperellipticCurve) -> Vec<(SuperellipticCurve, MobiusMap)> {
    let mut out: Vec<(SuperellipticCurve, MobiusMap)> =
        vec![(curve.clone(), MobiusMap::identity())];
    let add = |out: &mut Vec<(SuperellipticCurve, MobiusMap)>,
               res: Result<SuperellipticCurve>,
               m: MobiusMap| {
        if let Ok(c) = res {
            if !out.iter().any(|(existing, _)| *existing == c) {
                out.push((c, m));
            }
        }
    };

    let inv = MobiusMap::inversion();
    let shift = depression_shift(curve.f());
    if let Some(t) = &shift {
        let m = translation_by(t);
        add(&mut out, curve.apply_transform(&m), m.clone());
        if let Ok(depressed) = curve.apply_transform(&m) {
            add(&mut out, depressed.apply_transform(&inv), m.compose(&inv));
        }
    }
    if let Ok(reversed) = curve.apply_transform(&inv) {
        if let Some(t) = depression_shift(reversed.f()) {
            let m = translation_by(&t);
            add(&mut out, reversed.apply_transform(&m), inv.compose(&m));
        }
        add(&mut out, Ok(reversed), inv);
    }
    out
}

/// Translation `t` for which `f(x + t)` has no sub-leading term, when the
/// required shift is nonzero.
fn depression_shift(f: &IntPoly) -> Option<BigRational> {
    let d = f.degree()?;
    if d == 0 {
        return None;
    }
    let sub = f.coeff(d - 1);
    if sub.is_zero() {
        return None;
    }
    let lead = f.coeff(d);
    let t = -sub / (lead * BigRational::from_integer(BigInt::from(d as i64)));
    Some(t)
}

fn translation_by(t: &BigRational) -> MobiusMap {
    MobiusMap::translation(t)
}

fn scaling_by(u: &BigRational) -> MobiusMap {
    MobiusMap::scaling(u)
}

/// Nonzero rational `u` with `u^k` equal to the given ratio, if one exists.
fn kth_root(value: &BigRational, k: u32) -> Option<BigRational> {
    if value.is_zero() {
        return None;
    }
    rational_nth_root(value, k)
}

/// True when every exponent carrying a nonzero coefficient is listed.
fn support_subset(f: &IntPoly, allowed: &[usize]) -> bool {
    f.support().iter().all(|e| allowed.contains(e))
}

/// Coefficients of `h` when `f(x) = h(x^2)`, i.e. `f` is even.
fn even_part(f: &IntPoly) -> Option<Vec<BigRational>> {
    let d = f.degree()?;
    if d % 2 != 0 {
        return None;
    }
    let mut h = Vec::with_capacity(d / 2 + 1);
    for i in 0..=d {
        let c = f.coeff(i);
        if i % 2 == 0 {
            h.push(c);
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(h)
}

/// Coefficients of `h` when `f(x) = x * h(x^2)`.
fn odd_part(f: &IntPoly) -> Option<Vec<BigRational>> {
    let d = f.degree()?;
    if d % 2 != 1 {
        return None;
    }
    let mut h = Vec::with_capacity(d / 2 + 1);
    for i in 0..=d {
        let c = f.coeff(i);
        if i % 2 == 1 {
            h.push(c);
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(h)
}

/// All positive divisors of a nonzero integer's absolute value.
fn divisors(v: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factor_positive(v.abs()) {
        let base = out.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power = &power * &p;
            for b in &base {
                out.push(b * &power);
            }
        }
    }
    out
}

/// Distinct rational roots of `f`, ascending.
fn rational_roots(f: &IntPoly) -> Vec<BigRational> {
    if f.is_zero() {
        return Vec::new();
    }
    let coeffs = f.prim_coeffs();
    let mut low = 0;
    while coeffs[low].is_zero() {
        low += 1;
    }
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let c0 = &coeffs[low];
    let cd = coeffs.last().expect("nonzero polynomial");
    for p in divisors(c0) {
        for q in divisors(cd) {
            for cand in [
                BigRational::new(p.clone(), q.clone()),
                BigRational::new(-p.clone(), q.clone()),
            ] {
                if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn params_of(pairs: &[(&str, BigRational)]) -> BTreeMap<String, BigRational> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Solve `a z^2 + b z + c = 0` over the rationals; roots ascending.
fn rational_quadratic_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Vec<BigRational> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let disc = b * b - four * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let Some(delta) = rational_nth_root(&disc, 2) else {
        return Vec::new();
    };
    let mut roots = vec![
        (-b.clone() + &delta) / (&two * a),
        (-b.clone() - &delta) / (&two * a),
    ];
    roots.sort();
    roots.dedup();
    roots
}

/// Rational fits of the candidate polynomial against one family's shape.
///
/// Each matcher inverts the coefficient relations of `w * T(u x)` (or an
/// affine root-pinning) for the family template `T`, returning every
/// solution with rational scale data.  Parameter values that land in a
/// more special catalogue family are rejected so that the deeper matcher,
/// which runs earlier, keeps priority over its specialisations.
fn fit_candidates(case_no: u32, f: &IntPoly) -> Vec<FitCandidate> {
    let d = match f.degree() {
        Some(d) => d,
        None => return Vec::new(),
    };
    let mut fits = Vec::new();
    match case_no {
        // y^2 = x^10 - 1
        4 => {
            if d == 10 && support_subset(f, &[0, 10]) {
                if let Some(u) = kth_root(&(-f.coeff(10) / f.coeff(0)), 10) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^2 = x^10 + L x^5 + 1
        14 => {
            if d == 10 && support_subset(f, &[0, 5, 10]) && !f.coeff(5).is_zero() {
                if let Some(u) = kth_root(&(f.coeff(10) / f.coeff(0)), 10) {
                    let lambda = f.coeff(5) / (f.coeff(0) * pow_rat(&u, 5));
                    fits.push(FitCandidate {
                        params: params_of(&[("lambda", lambda)]),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^2 = x^10 + a1 x^8 + a2 x^6 + a3 x^4 + a4 x^2 + 1
        37 => {
            if d == 10 && even_part(f).is_some() {
                if let Some(u) = kth_root(&(f.coeff(10) / f.coeff(0)), 10) {
                    let w = f.coeff(0);
                    let a: Vec<BigRational> = (1..=4)
                        .map(|i| f.coeff(10 - 2 * i) / (&w * pow_rat(&u, 10 - 2 * i as i64)))
                        .collect();
                    if a.iter().any(|v| !v.is_zero()) {
                        fits.push(FitCandidate {
                            params: params_of(&[
                                ("a1", a[0].clone()),
                                ("a2", a[1].clone()),
                                ("a3", a[2].clone()),
                                ("a4", a[3].clone()),
                            ]),
                            undo: scaling_by(&u.recip()),
                        });
                    }
                }
            }
        }
        // y^2 = x^9 + 1
        8 => {
            if d == 9 && support_subset(f, &[0, 9]) {
                if let Some(u) = kth_root(&(f.coeff(9) / f.coeff(0)), 9) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^2 = x^9 + a1 x^6 + a2 x^3 + 1
        27 => {
            if d == 9 && support_subset(f, &[0, 3, 6, 9]) {
                let (g6, g3) = (f.coeff(6), f.coeff(3));
                if !(g6.is_zero() && g3.is_zero()) {
                    if let Some(u) = kth_root(&(f.coeff(9) / f.coeff(0)), 9) {
                        let w = f.coeff(0);
                        let a1 = g6 / (&w * pow_rat(&u, 6));
                        let a2 = g3 / (&w * pow_rat(&u, 3));
                        fits.push(FitCandidate {
                            params: params_of(&[("a1", a1), ("a2", a2)]),
                            undo: scaling_by(&u.recip()),
                        });
                    }
                }
            }
        }
        // y^2 = x (x^8 - 1)
        6 => {
            if d == 9 && support_subset(f, &[1, 9]) {
                if let Some(u) = kth_root(&(-f.coeff(9) / f.coeff(1)), 8) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^2 = x (x^8 + L x^4 + 1)
        16 => {
            if d == 9 && support_subset(f, &[1, 5, 9]) && !f.coeff(5).is_zero() {
                if let Some(u) = kth_root(&(f.coeff(9) / f.coeff(1)), 8) {
                    let lambda = f.coeff(5) / (f.coeff(1) * pow_rat(&u, 4));
                    fits.push(FitCandidate {
                        params: params_of(&[("lambda", lambda)]),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^2 = x (x^4 - 1)(x^4 + M x^2 + 1): cases 7 (deep) and 21 share it
        7 | 21 => {
            if let Some(h) = odd_part(f) {
                if h.len() == 5 && h[2].is_zero() && !h[3].is_zero() && !h[1].is_zero() {
                    if let Some(u) = kth_root(&(-&h[3] / &h[1]), 4) {
                        if -&h[4] / &h[0] == pow_rat(&u, 8) {
                            let m = -&h[3] / (&h[0] * pow_rat(&u, 6));
                            let key = if case_no == 7 { "mu" } else { "lambda" };
                            fits.push(FitCandidate {
                                params: params_of(&[(key, m)]),
                                undo: scaling_by(&u.recip()),
                            });
                        }
                    }
                }
            }
        }
        // y^2 = x (x^4 + L1 x^2 + 1)(x^4 + L2 x^2 + 1)
        26 => {
            if let Some(h) = odd_part(f) {
                if h.len() == 5 && !h[0].is_zero() {
                    if let Some(u) = kth_root(&(&h[4] / &h[0]), 8) {
                        let s = &h[3] / (&h[0] * pow_rat(&u, 6));
                        let m = &h[2] / (&h[0] * pow_rat(&u, 4));
                        if h[1] == &s * pow_rat(&u, 2) * &h[0] {
                            let two = BigRational::from_integer(BigInt::from(2));
                            let c = &m - &two;
                            let roots =
                                rational_quadratic_roots(&BigRational::one(), &-s.clone(), &c);
                            if roots.len() == 2 {
                                fits.push(FitCandidate {
                                    params: params_of(&[
                                        ("lambda1", roots[0].clone()),
                                        ("lambda2", roots[1].clone()),
                                    ]),
                                    undo: scaling_by(&u.recip()),
                                });
                            }
                        }
                    }
                }
            }
        }
        // y^2 = x (x^8 + a1 x^6 + a2 x^4 + a3 x^2 + 1)
        33 => {
            if let Some(h) = odd_part(f) {
                if h.len() == 5 && !h[0].is_zero() {
                    if let Some(u) = kth_root(&(&h[4] / &h[0]), 8) {
                        let a: Vec<BigRational> = (1..=3)
                            .map(|i| &h[4 - i] / (&h[0] * pow_rat(&u, 2 * (4 - i as i64))))
                            .collect();
                        if a.iter().any(|v| !v.is_zero()) {
                            fits.push(FitCandidate {
                                params: params_of(&[
                                    ("a1", a[0].clone()),
                                    ("a2", a[1].clone()),
                                    ("a3", a[2].clone()),
                                ]),
                                undo: scaling_by(&u.recip()),
                            });
                        }
                    }
                }
            }
        }
        // y^3 = x (x^4 - 1)
        2 => {
            if d == 5 && support_subset(f, &[1, 5]) {
                if let Some(u) = kth_root(&(-f.coeff(5) / f.coeff(1)), 4) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^3 = x^6 + 2
        3 => {
            if d == 6 && support_subset(f, &[0, 6]) {
                let two = BigRational::from_integer(BigInt::from(2));
                if let Some(u) = kth_root(&(two * f.coeff(6) / f.coeff(0)), 6) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^3 = x^6 - 1
        5 => {
            if d == 6 && support_subset(f, &[0, 6]) {
                if let Some(u) = kth_root(&(-f.coeff(6) / f.coeff(0)), 6) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^3 = x^6 + L x^3 + 2
        12 => {
            if d == 6 && support_subset(f, &[0, 3, 6]) && !f.coeff(3).is_zero() {
                let two = BigRational::from_integer(BigInt::from(2));
                if let Some(u) = kth_root(&(&two * f.coeff(6) / f.coeff(0)), 6) {
                    let lambda = &two * f.coeff(3) / (f.coeff(0) * pow_rat(&u, 3));
                    fits.push(FitCandidate {
                        params: params_of(&[("lambda", lambda)]),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^3 = x^6 + L x^3 + 1
        15 => {
            if d == 6 && support_subset(f, &[0, 3, 6]) && !f.coeff(3).is_zero() {
                if let Some(u) = kth_root(&(f.coeff(6) / f.coeff(0)), 6) {
                    let lambda = f.coeff(3) / (f.coeff(0) * pow_rat(&u, 3));
                    fits.push(FitCandidate {
                        params: params_of(&[("lambda", lambda)]),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^3 = (x^2 - 1)(x^4 - L x^2 + 1)
        17 => {
            if let Some(h) = even_part(f) {
                if h.len() == 4 && !h[2].is_zero() && !h[1].is_zero() {
                    if let Some(u) = kth_root(&(-&h[2] / &h[1]), 2) {
                        if -&h[3] / &h[0] == pow_rat(&u, 6) {
                            let lambda = -&h[1] / (&h[0] * pow_rat(&u, 2)) - BigRational::one();
                            fits.push(FitCandidate {
                                params: params_of(&[("lambda", lambda)]),
                                undo: scaling_by(&u.recip()),
                            });
                        }
                    }
                }
            }
        }
        // y^3 = 1 + (x^2 - 1)(x^2 - A1)(x^2 - A2)
        18 => {
            if let Some(h) = even_part(f) {
                if h.len() == 4 && !h[0].is_zero() {
                    for cap_u in rational_quadratic_roots(&h[0], &h[1], &h[2]) {
                        if !cap_u.is_positive() {
                            continue;
                        }
                        let Some(u) = kth_root(&cap_u, 2) else {
                            continue;
                        };
                        let s = -BigRational::one() - &cap_u * &h[2] / &h[3];
                        let p = &cap_u * &cap_u * &h[1] / &h[3] - &s;
                        let alphas = rational_quadratic_roots(&BigRational::one(), &-s, &p);
                        if alphas.len() == 2 {
                            fits.push(FitCandidate {
                                params: params_of(&[
                                    ("alpha1", alphas[0].clone()),
                                    ("alpha2", alphas[1].clone()),
                                ]),
                                undo: scaling_by(&u.recip()),
                            });
                        }
                    }
                }
            }
        }
        // y^3 = (x^2 - 1)(x^2 - A1)(x^2 - A2)
        28 => {
            if let Some(h) = even_part(f) {
                if h.len() == 4 {
                    let hp = IntPoly::from_rational_coeffs(h);
                    for r in rational_roots(&hp) {
                        if r.is_zero() {
                            continue;
                        }
                        let Some(u) = kth_root(&r.recip(), 2) else {
                            continue;
                        };
                        let Some(q) = hp.div_exact(&IntPoly::from_rational_coeffs(vec![
                            -r.clone(),
                            BigRational::one(),
                        ])) else {
                            continue;
                        };
                        let alphas =
                            rational_quadratic_roots(&q.coeff(2), &q.coeff(1), &q.coeff(0));
                        if alphas.len() == 2 {
                            let a: Vec<BigRational> = alphas.iter().map(|x| x / &r).collect();
                            let (lo, hi) = if a[0] <= a[1] {
                                (a[0].clone(), a[1].clone())
                            } else {
                                (a[1].clone(), a[0].clone())
                            };
                            fits.push(FitCandidate {
                                params: params_of(&[("a1", lo), ("a2", hi)]),
                                undo: scaling_by(&u.recip()),
                            });
                        }
                    }
                }
            }
        }
        // y^3 = 1 + x (x^5 + (B-2) x^3 + C x^3 - (2B + 1/2) x - 2C)
        29 => {
            if d == 6 && support_subset(f, &[0, 1, 2, 4, 6]) && !f.coeff(0).is_zero() {
                if let Some(u) = kth_root(&(f.coeff(6) / f.coeff(0)), 6) {
                    let w = f.coeff(0);
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    let two = BigRational::from_integer(BigInt::from(2));
                    let b = (-(f.coeff(2) / (&w * pow_rat(&u, 2))) - &half) / &two;
                    let c = -f.coeff(1) / (&two * &w * &u);
                    let expect_g4 = &w * pow_rat(&u, 4) * (&b + &c - &two);
                    if f.coeff(4) == expect_g4 {
                        fits.push(FitCandidate {
                            params: params_of(&[("b", b), ("c", c)]),
                            undo: scaling_by(&u.recip()),
                        });
                    }
                }
            }
        }
        // y^3 = x (x - 1)(x - A1)(x - A2)(x - A3)
        34 => {
            if d == 5 {
                let roots = rational_roots(f);
                if roots.len() == 5 {
                    fits.extend(root_pinning_fits(&roots, &["a1", "a2", "a3"]));
                }
            }
        }
        // y^3 = (x^2 - 2)(x^4 + B x^2 + C x + D)
        35 => {
            if d == 6 && f.coeff(5).is_zero() {
                fits.extend(fit_case_35(f));
            }
        }
        // y^5 = x^3 - 1
        9 => {
            if d == 3 && support_subset(f, &[0, 3]) {
                if let Some(u) = kth_root(&(-f.coeff(3) / f.coeff(0)), 3) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^5 = x (x^2 - 1)
        11 => {
            if d == 3 && support_subset(f, &[1, 3]) {
                if let Some(u) = kth_root(&(-f.coeff(3) / f.coeff(1)), 2) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^5 = x (x - 1)(x - L)
        23 => {
            if d == 3 {
                let roots = rational_roots(f);
                if roots.len() == 3 {
                    fits.extend(root_pinning_fits(&roots, &["lambda"]));
                }
            }
        }
        // y^4 = x^2 (x^3 - 1)
        10 => {
            if d == 5 && support_subset(f, &[2, 5]) {
                if let Some(u) = kth_root(&(-f.coeff(5) / f.coeff(2)), 3) {
                    fits.push(FitCandidate {
                        params: BTreeMap::new(),
                        undo: scaling_by(&u.recip()),
                    });
                }
            }
        }
        // y^4 = x^2 (x - 1)(x - A1)(x - A2)
        30 => {
            if d == 5 && f.coeff(0).is_zero() && f.coeff(1).is_zero() && !f.coeff(2).is_zero() {
                let cubic = IntPoly::from_rational_coeffs(vec![
                    f.coeff(2),
                    f.coeff(3),
                    f.coeff(4),
                    f.coeff(5),
                ]);
                let roots = rational_roots(&cubic);
                if roots.len() == 3 {
                    for r in &roots {
                        let mut alphas: Vec<BigRational> =
                            roots.iter().filter(|x| *x != r).map(|x| x / r).collect();
                        alphas.sort();
                        fits.push(FitCandidate {
                            params: params_of(&[
                                ("alpha1", alphas[0].clone()),
                                ("alpha2", alphas[1].clone()),
                            ]),
                            undo: scaling_by(r),
                        });
                    }
                }
            }
        }
        // y^6 = x (x - 1)(x - A)
        22 if d == 3 => {
            let roots = rational_roots(f);
            if roots.len() == 3 {
                fits.extend(root_pinning_fits(&roots, &["alpha"]));
            }
        }
        _ => {}
    }
    fits
}

fn pow_rat(base: &BigRational, exp: i64) -> BigRational {
    crate::poly::rational_pow(base, exp)
}

/// Fits for families of the shape `x (x - 1)(x - p1)...`: map an ordered
/// pair of rational roots onto `(0, 1)` and read the parameters off the
/// images of the remaining roots.
fn root_pinning_fits(roots: &[BigRational], names: &[&str]) -> Vec<FitCandidate> {
    let mut fits = Vec::new();
    for (i, ri) in roots.iter().enumerate() {
        for (j, rj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let span = rj - ri;
            let mut images: Vec<BigRational> = roots
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, r)| (r - ri) / &span)
                .collect();
            images.sort();
            let params: BTreeMap<String, BigRational> = names
                .iter()
                .zip(images)
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            fits.push(FitCandidate {
                params,
                undo: MobiusMap::affine(&span, ri),
            });
        }
    }
    fits
}

/// Fits for `y^3 = (x^2 - 2)(x^4 + B x^2 + C x + D)`: look for a rational
/// `s` with `(x^2 - s) | f` such that rescaling `x` by `sqrt(2/s)` is
/// rational, then read the quartic cofactor's coefficients.
fn fit_case_35(f: &IntPoly) -> Vec<FitCandidate> {
    let mut fits = Vec::new();
    // Write f = A(x^2) + x B(x^2); (x^2 - s) divides f iff s is a common
    // root of A and B.
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for i in 0..=f.deg() {
        let c = f.coeff(i);
        if i % 2 == 0 {
            even.push(c);
        } else {
            odd.push(c);
        }
    }
    let pa = IntPoly::from_rational_coeffs(even);
    let pb = IntPoly::from_rational_coeffs(odd);
    let candidates: Vec<BigRational> = if pb.is_zero() {
        rational_roots(&pa)
    } else {
        rational_roots(&pa)
            .into_iter()
            .filter(|s| pb.eval(s).is_zero())
            .collect()
    };
    let two = BigRational::from_integer(BigInt::from(2));
    for s in candidates {
        if s.is_zero() {
            continue;
        }
        let Some(u) = kth_root(&(&two / &s), 2) else {
            continue;
        };
        // Align: g(x) = f(x / u) is proportional to (x^2 - 2) * quartic.
        let undo = scaling_by(&u.recip());
        let Ok(aligned) = crate::poly::mobius_transform(f, &undo, f.deg()) else {
            continue;
        };
        let divisor = IntPoly::from_rational_coeffs(vec![
            -two.clone(),
            BigRational::zero(),
            BigRational::one(),
        ]);
        let Some(q) = aligned.div_exact(&divisor) else {
            continue;
        };
        if q.deg() != 4 || !q.coeff(3).is_zero() {
            continue;
        }
        let w = q.coeff(4);
        fits.push(FitCandidate {
            params: params_of(&[
                ("b", q.coeff(2) / &w),
                ("c", q.coeff(1) / &w),
                ("d", q.coeff(0) / &w),
            ]),
            undo,
        });
    }
    fits
}

/// Support-based membership certificates.  Each predicate is sound over an
/// algebraically closed field: every curve satisfying it lies in the named
/// family's closure, because the one remaining normalisation only needs a
/// root extraction of a scalar.
fn structural_member(case_no: u32, curve: &SuperellipticCurve) -> bool {
    let f = curve.f();
    let d = match f.degree() {
        Some(d) => d,
        None => return false,
    };
    let n = curve.n();
    match (n, case_no) {
        (2, 4) => d == 10 && support_subset(f, &[0, 10]),
        (2, 6) => d == 9 && support_subset(f, &[1, 9]),
        (2, 8) => d == 9 && support_subset(f, &[0, 9]),
        (2, 14) => d == 10 && support_subset(f, &[0, 5, 10]),
        (2, 16) => d == 9 && support_subset(f, &[1, 5, 9]),
        (2, 27) => d == 9 && support_subset(f, &[0, 3, 6, 9]),
        (2, 33) => d == 9 && odd_part(f).is_some(),
        (2, 37) => d == 10 && even_part(f).is_some(),
        (3, 28) => d == 6 && even_part(f).is_some(),
        _ => false,
    }
}
