//! Riemann-Hurwitz bookkeeping for Galois covers of curves.
//!
//! A [`CoverSignature`] records the quotient genus and the branching indices
//! of a G-cover `X -> X/G`. For a group of order `N` acting with signature
//! `(g'; e_1, ..., e_s)` the covered curve has genus
//! `g = 1 + (N/2) * (2g' - 2 + sum(1 - 1/e_i))`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Branching data `(g'; e_1, ..., e_s)` of a Galois cover: quotient genus
/// plus the sorted list of branching indices, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverSignature {
    quotient_genus: u64,
    indices: Vec<u64>,
}

impl CoverSignature {
    pub fn new(quotient_genus: u64, mut indices: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&e| e < 2) {
            return Err(Error::InadmissibleSignature {
                value: format!("branching index {bad} is less than 2"),
            });
        }
        indices.sort_unstable();
        Ok(CoverSignature {
            quotient_genus,
            indices,
        })
    }

    pub fn quotient_genus(&self) -> u64 {
        self.quotient_genus
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn num_branch_points(&self) -> usize {
        self.indices.len()
    }

    /// Parse `g-(e1, e2, ...)` with `e^k` (or `e^{k}`) run shorthand,
    /// e.g. `0-(2, 4, 5)`, `0-(2^5)`, `1-(2^{3}, 4)`, `2-()`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, tail) = text
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("expected `g-(...)`, got `{text}`")))?;
        let quotient_genus: u64 = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad quotient genus `{}`", head.trim())))?;
        let tail = tail.trim();
        let inner = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesized indices, got `{tail}`")))?
            .trim();
        let mut indices = Vec::new();
        if !inner.is_empty() {
            for item in inner.split(',') {
                let item = item.trim();
                let (base, count) = match item.split_once('^') {
                    Some((b, k)) => {
                        let k = k.trim();
                        let k = k
                            .strip_prefix('{')
                            .and_then(|t| t.strip_suffix('}'))
                            .unwrap_or(k);
                        let count: u64 = k
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad run length `{k}`")))?;
                        if count == 0 {
                            return Err(Error::Parse("run length must be positive".into()));
                        }
                        (b.trim(), count)
                    }
                    None => (item, 1),
                };
                let e: u64 = base
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad branching index `{base}`")))?;
                indices.extend(std::iter::repeat_n(e, count as usize));
            }
        }
        CoverSignature::new(quotient_genus, indices)
    }
}

impl fmt::Display for CoverSignature {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}-(", self.quotient_genus)?;
        let mut first = true;
        let mut i = 0;
        while i < self.indices.len() {
            let e = self.indices[i];
            let mut j = i;
            while j < self.indices.len() && self.indices[j] == e {
                j += 1;
            }
            let run = j - i;
            let mut emit = |s: String, out: &mut fmt::Formatter<'_>| -> fmt::Result {
                if !first {
                    write!(out, ", ")?;
                }
                first = false;
                write!(out, "{s}")
            };
            if run >= 3 {
                emit(format!("{e}^{run}"), out)?;
            } else {
                for _ in 0..run {
                    emit(format!("{e}"), out)?;
                }
            }
            i = j;
        }
        write!(out, ")")
    }
}

/// `2g' - 2 + sum(1 - 1/e_i)`: the Riemann-Hurwitz factor multiplying half
/// the covering degree.
pub fn rh_expression(sig: &CoverSignature) -> BigRational {
    let mut acc = BigRational::from_integer((2 * sig.quotient_genus as i64 - 2).into());
    for &e in sig.indices() {
        acc += BigRational::one() - BigRational::new(1.into(), (e as i64).into());
    }
    acc
}

/// Genus of the covering curve for a cover of the given degree, when it is
/// a nonnegative integer; otherwise the signature does not belong to a
/// degree-`degree` cover.
pub fn rh_genus(degree: u64, sig: &CoverSignature) -> Result<u64> {
    let g = BigRational::one()
        + BigRational::new((degree as i64).into(), 2.into()) * rh_expression(sig);
    if !g.is_integer() || g.is_negative() {
        return Err(Error::InadmissibleSignature {
            value: format!("degree {degree} with signature {sig} gives genus {g}"),
        });
    }
    Ok(u64::try_from(g.to_integer()).expect("nonnegative genus"))
}

/// Dimension `3g' - 3 + s` of the moduli stratum of covers with this
/// signature; negative values mean the stratum is rigid or empty.
pub fn locus_dimension(sig: &CoverSignature) -> Result<u64> {
    let v = 3 * sig.quotient_genus as i64 - 3 + sig.num_branch_points() as i64;
    if v < 0 {
        return Err(Error::RigidStratum(v));
    }
    Ok(v as u64)
}

/// The classical `84(g-1)` automorphism bound, defined for `g >= 2`.
pub fn hurwitz_bound(genus: u64) -> Result<u64> {
    if genus < 2 {
        return Err(Error::GenusTooSmall(genus));
    }
    Ok(84 * (genus - 1))
}

type Witness = (BigRational, CoverSignature);

/// Order candidates by value, then prefer smaller quotient genus, fewer
/// branch points, lexicographically smaller indices.
fn better(a: &Witness, b: &Witness) -> Ordering {
    a.0.cmp(&b.0)
        .then_with(|| a.1.quotient_genus.cmp(&b.1.quotient_genus))
        .then_with(|| a.1.indices.len().cmp(&b.1.indices.len()))
        .then_with(|| a.1.indices.cmp(&b.1.indices))
}

fn take_better(best: Option<Witness>, cand: Witness) -> Option<Witness> {
    match best {
        None => Some(cand),
        Some(b) => {
            if better(&cand, &b) == Ordering::Less {
                Some(cand)
            } else {
                Some(b)
            }
        }
    }
}

/// Minimum of the stratum with fixed quotient genus and branch count over
/// all non-decreasing index tuples in `[2, max_e]`.
fn stratum_min(gq: u64, s: u64, max_e: u64) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    let consider = |indices: &[u64], best: &mut Option<Witness>| {
        let sig = CoverSignature::new(gq, indices.to_vec()).expect("indices >= 2");
        let v = rh_expression(&sig);
        if v.is_positive() {
            *best = take_better(best.take(), (v, sig));
        }
    };
    if s == 0 {
        consider(&[], &mut best);
        return best;
    }
    if max_e < 2 {
        return None;
    }
    let s = s as usize;
    let mut idx = vec![2u64; s];
    loop {
        consider(&idx, &mut best);
        // Advance to the next non-decreasing tuple.
        let mut i = s;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < max_e {
                idx[i] += 1;
                let v = idx[i];
                for slot in idx[i + 1..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

fn strata(max_s: u64, max_gq: u64) -> Vec<(u64, u64)> {
    (0..=max_gq)
        .flat_map(|g| (0..=max_s).map(move |s| (g, s)))
        .collect()
}

/// Smallest positive value of [`rh_expression`] over all signatures with at
/// most `max_s` branch points, indices at most `max_e`, and quotient genus
/// at most `max_gq`, together with the minimizing signature.
///
/// With the `parallel` feature the strata are searched concurrently; the
/// result is identical to the sequential scan.
pub fn minimize_rh_expression(
    max_s: u64,
    max_e: u64,
    max_gq: u64,
) -> Result<(BigRational, CoverSignature)> {
    #[cfg(feature = "parallel")]
    {
        strata(max_s, max_gq)
            .into_par_iter()
            .filter_map(|(gq, s)| stratum_min(gq, s, max_e))
            .reduce_with(|a, b| {
                if better(&a, &b) != Ordering::Greater {
                    a
                } else {
                    b
                }
            })
            .ok_or(Error::EmptySearchSpace)
    }
    #[cfg(not(feature = "parallel"))]
    minimize_rh_expression_sequential(max_s, max_e, max_gq)
}

/// Single-threaded version of [`minimize_rh_expression`]; always available
/// for comparison and testing.
pub fn minimize_rh_expression_sequential(
    max_s: u64,
    max_e: u64,
    max_gq: u64,
) -> Result<(BigRational, CoverSignature)> {
    let mut best: Option<Witness> = None;
    for (gq, s) in strata(max_s, max_gq) {
        if let Some(cand) = stratum_min(gq, s, max_e) {
            best = take_better(best, cand);
        }
    }
    best.ok_or(Error::EmptySearchSpace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(gq: u64, indices: &[u64]) -> CoverSignature {
        CoverSignature::new(gq, indices.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rh_expression_examples() {
        assert_eq!(rh_expression(&sig(0, &[2, 4, 5])), rat(1, 20));
        assert_eq!(rh_expression(&sig(0, &[2, 3, 7])), rat(1, 42));
        assert_eq!(rh_expression(&sig(1, &[2])), rat(1, 2));
        assert_eq!(rh_expression(&sig(0, &[])), rat(-2, 1));
        assert_eq!(rh_expression(&sig(0, &[2, 2, 2, 2])), rat(0, 1));
    }

    #[test]
    fn rh_genus_examples() {
        assert_eq!(rh_genus(120, &sig(0, &[2, 4, 5])).unwrap(), 4);
        assert_eq!(rh_genus(2, &sig(0, &[2; 10])).unwrap(), 4);
        assert_eq!(rh_genus(40, &sig(0, &[2, 4, 10])).unwrap(), 4);
        assert_eq!(rh_genus(36, &sig(0, &[2, 2, 2, 3])).unwrap(), 4);
        assert_eq!(rh_genus(4, &sig(1, &[2, 2, 2])).unwrap(), 4);
        assert_eq!(rh_genus(2, &sig(2, &[2, 2])).unwrap(), 4);
        assert_eq!(rh_genus(84 * 3, &sig(0, &[2, 3, 7])).unwrap(), 4);
        // Fractional or negative results are rejected.
        assert!(rh_genus(5, &sig(0, &[2, 3])).is_err());
        assert!(rh_genus(2, &sig(0, &[])).is_err());
    }

    #[test]
    fn dimension_and_bound() {
        assert_eq!(locus_dimension(&sig(0, &[2, 4, 5])).unwrap(), 0);
        assert_eq!(locus_dimension(&sig(0, &[2; 10])).unwrap(), 7);
        assert_eq!(locus_dimension(&sig(2, &[2, 2])).unwrap(), 5);
        assert_eq!(locus_dimension(&sig(1, &[2])).unwrap(), 1);
        assert_eq!(
            locus_dimension(&sig(0, &[2, 2])),
            Err(Error::RigidStratum(-1))
        );

        assert_eq!(hurwitz_bound(4).unwrap(), 252);
        assert_eq!(hurwitz_bound(2).unwrap(), 84);
        assert_eq!(hurwitz_bound(1), Err(Error::GenusTooSmall(1)));
        assert_eq!(hurwitz_bound(0), Err(Error::GenusTooSmall(0)));
    }

    #[test]
    fn signature_parse_print() {
        assert_eq!(
            CoverSignature::parse("0-(2, 4, 5)").unwrap(),
            sig(0, &[2, 4, 5])
        );
        assert_eq!(CoverSignature::parse("0-(2^5)").unwrap(), sig(0, &[2; 5]));
        assert_eq!(
            CoverSignature::parse("0-(2^{10})").unwrap(),
            sig(0, &[2; 10])
        );
        assert_eq!(
            CoverSignature::parse("0-(2^2, 3^3)").unwrap(),
            sig(0, &[2, 2, 3, 3, 3])
        );
        assert_eq!(CoverSignature::parse("2-()").unwrap(), sig(2, &[]));
        assert_eq!(
            CoverSignature::parse(" 1-( 2,2 , 2 ) ").unwrap(),
            sig(1, &[2, 2, 2])
        );

        // Indices come back sorted.
        assert_eq!(sig(0, &[5, 2, 3]).indices(), &[2, 3, 5]);

        // Canonical printing: runs of three or more collapse.
        assert_eq!(sig(0, &[2, 4, 5]).to_string(), "0-(2, 4, 5)");
        assert_eq!(sig(0, &[2; 10]).to_string(), "0-(2^10)");
        assert_eq!(sig(0, &[2, 2, 3, 3, 3]).to_string(), "0-(2, 2, 3^3)");
        assert_eq!(sig(2, &[]).to_string(), "2-()");
        assert_eq!(sig(1, &[2, 2]).to_string(), "1-(2, 2)");

        for s in [
            sig(0, &[2, 4, 5]),
            sig(0, &[2; 7]),
            sig(1, &[3, 3, 3]),
            sig(2, &[]),
        ] {
            assert_eq!(CoverSignature::parse(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn signature_rejects_bad_input() {
        assert!(CoverSignature::new(0, vec![1, 2]).is_err());
        assert!(CoverSignature::parse("0-(1, 2)").is_err());
        assert!(CoverSignature::parse("(2,3)").is_err());
        assert!(CoverSignature::parse("0-(2^0)").is_err());
        assert!(CoverSignature::parse("x-(2)").is_err());
    }

    #[test]
    fn minimize_examples() {
        // The (2,3,7) triangle signature is the global floor once e reaches 7.
        let (v, w) = minimize_rh_expression(4, 12, 1).unwrap();
        assert_eq!(v, rat(1, 42));
        assert_eq!(w, sig(0, &[2, 3, 7]));

        let (v, w) = minimize_rh_expression(3, 5, 0).unwrap();
        assert_eq!(v, rat(1, 20));
        assert_eq!(w, sig(0, &[2, 4, 5]));

        let (v, w) = minimize_rh_expression(3, 6, 0).unwrap();
        assert_eq!(v, rat(1, 20));
        assert_eq!(w, sig(0, &[2, 4, 5]));

        // Small box where only a positive-genus quotient works.
        let (v, w) = minimize_rh_expression(1, 2, 2).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(w, sig(1, &[2]));

        // Boxes with no positive value at all.
        assert_eq!(
            minimize_rh_expression(0, 2, 0),
            Err(Error::EmptySearchSpace)
        );
        assert_eq!(
            minimize_rh_expression(1, 2, 0),
            Err(Error::EmptySearchSpace)
        );
        assert_eq!(
            minimize_rh_expression(3, 3, 0),
            Err(Error::EmptySearchSpace)
        );
    }

    #[test]
    fn minimize_parallel_matches_sequential() {
        for (s, e, gq) in [(4, 12, 1), (3, 5, 0), (5, 9, 2), (2, 30, 1), (0, 2, 3)] {
            assert_eq!(
                minimize_rh_expression(s, e, gq),
                minimize_rh_expression_sequential(s, e, gq),
                "box ({s}, {e}, {gq})"
            );
        }
    }
}
