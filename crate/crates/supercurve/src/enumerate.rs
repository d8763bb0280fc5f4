//! Bounded enumeration of superelliptic curve models with small integer
//! coefficients, deduplicated by a canonical orbit key.
//!
//! Two integral models of the same curve frequently appear in a naive
//! coefficient scan: `f(x)` and `f(-x)`, a model and its reversal, and
//! for even cover exponents `f` and `-f`.  [`canonical_key`] closes a
//! model under those identifications and serializes the lexicographically
//! least member, so equality of keys merges the redundant presentations
//! while genuinely different twists (different scalar content) stay
//! distinct.
//!
//! [`enumerate`] scans every coefficient vector within a height bound,
//! partitioned by (degree, leading coefficient, constant coefficient) so
//! the partitions can run on a thread pool; results are merged by sorting
//! on the key, which makes the output byte-identical for any worker count.
//! Vectors that fail to define a valid model, and valid models dropped by
//! a filter, are tallied separately in [`EnumerationStats`].

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write as IoWrite};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::SuperellipticCurve;
use crate::error::{Error, Result};
use crate::heights::poly_height;
use crate::poly::{IntPoly, MobiusMap};

/// One deduplicated entry of an enumeration run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumRecord {
    /// Cover exponent of the model `y^n = f(x)`.
    pub n: u64,
    /// Canonical text of the defining polynomial.
    pub f: String,
    /// Genus of the curve.
    pub genus: u64,
    /// Height of the model (largest absolute primitive coefficient).
    pub height: u64,
    /// Discriminant of the squarefree part of `f`, in decimal.
    pub disc_sqfree: String,
    /// Canonical orbit key, hex-encoded.
    pub key: String,
}

/// Search-space description for [`enumerate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationParams {
    /// Cover exponent `n` of the models to scan.
    pub n: u64,
    /// Smallest polynomial degree to scan.
    pub min_degree: usize,
    /// Largest polynomial degree to scan.
    pub max_degree: usize,
    /// Coefficients run over `-height_bound ..= height_bound`.
    pub height_bound: u64,
    /// Keep only curves of this genus, when set.
    pub genus: Option<u64>,
    /// Keep only models whose defining polynomial is squarefree.
    pub squarefree_only: bool,
}

/// Counters describing an enumeration run.
///
/// Every scanned coefficient vector lands in exactly one of the three
/// buckets, so `scanned == rejected_invalid + filtered + admitted`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Coefficient vectors examined.
    pub scanned: u64,
    /// Vectors that did not define a valid curve model.
    pub rejected_invalid: u64,
    /// Valid models skipped by the squarefree or genus filter.
    pub filtered: u64,
    /// Valid curves that passed the filters, before deduplication.
    pub admitted: u64,
    /// Records left after deduplication.
    pub unique: u64,
}

/// Canonical orbit key of a curve model.
///
/// The model's orbit under `x -> -x`, `x -> 1/x`, and (through the
/// serialization) `f -> -f` is closed off, every member is serialized as
/// `n|content|coefficients` with the polynomial sign normalised to a
/// positive leading coefficient, and the lexicographically least
/// serialization is hex-encoded.  Scalar twists with different content
/// keep different keys; sign twists merge.
pub fn canonical_key(curve: &SuperellipticCurve) -> String {
    let start = reduce_zero_root(curve);
    let mut serials = BTreeSet::new();
    serials.insert(sign_normal_serial(&start));
    let mut seen = BTreeSet::new();
    seen.insert(model_serial(&start));
    let mut frontier = vec![start];
    let generators = [MobiusMap::negation(), MobiusMap::inversion()];
    let mut budget = 64usize;
    while let Some(model) = frontier.pop() {
        if budget == 0 {
            break;
        }
        budget -= 1;
        for m in &generators {
            if let Ok(next) = model.apply_transform_unchecked(m) {
                let next = reduce_zero_root(&next);
                if seen.insert(model_serial(&next)) {
                    serials.insert(sign_normal_serial(&next));
                    frontier.push(next);
                }
            }
        }
    }
    let least = serials.into_iter().next().expect("orbit is nonempty");
    hex_encode(least.as_bytes())
}

/// Replace `y^n = x^{nk} g(x)` by the equivalent model `y^n = g(x) x^v`
/// with `v < n`, absorbing full n-th powers of `x` into `y`.  Without
/// this step the substitution `x -> 1/x` would shrink such models but
/// never grow them back, and the orbit walk would not be symmetric.
fn reduce_zero_root(curve: &SuperellipticCurve) -> SuperellipticCurve {
    let n = curve.n() as usize;
    let f = curve.f();
    let coeffs = f.prim_coeffs();
    let valuation = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    let strip = n * (valuation / n);
    if strip == 0 {
        return curve.clone();
    }
    let shifted =
        IntPoly::from_bigint_coeffs(coeffs[strip..].to_vec()).mul_scalar(f.content_factor());
    SuperellipticCurve::new(curve.n(), shifted).expect("stripping x^n powers keeps the curve valid")
}

/// Exact serialization of a model, distinguishing sign twists.
fn model_serial(curve: &SuperellipticCurve) -> String {
    serialize_parts(curve, false)
}

/// Serialization with the polynomial sign normalised away.
fn sign_normal_serial(curve: &SuperellipticCurve) -> String {
    serialize_parts(curve, true)
}

fn serialize_parts(curve: &SuperellipticCurve, normalise_sign: bool) -> String {
    let f = curve.f();
    let coeffs = f.prim_coeffs();
    let flip = normalise_sign && coeffs.last().map(|c| c.is_negative()).unwrap_or(false);
    let rendered: Vec<String> = coeffs
        .iter()
        .map(|c| {
            if flip {
                (-c).to_string()
            } else {
                c.to_string()
            }
        })
        .collect();
    format!(
        "{}|{}|{}",
        curve.n(),
        f.content_factor(),
        rendered.join(",")
    )
}

fn hex_encode(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Discriminant of the squarefree part of `f`, which stays nonzero for
/// every nonconstant model and so remains an informative invariant even
/// when `f` has repeated roots.
fn disc_of_squarefree_part(f: &IntPoly) -> Result<BigInt> {
    let sf = f.squarefree_part()?.primitive_part();
    let disc = sf.discriminant()?;
    debug_assert!(
        disc.is_integer(),
        "primitive integer model has integer discriminant"
    );
    Ok(disc.to_integer())
}

/// One slice of the scan: degree, leading and constant coefficients are
/// pinned, the middle coefficients run through an odometer.  Pinning two
/// coefficients keeps the slices numerous enough to spread over a pool.
struct Job {
    degree: usize,
    lead: i64,
    low: i64,
}

/// Per-job counters, one bucket per [`examine`] outcome.
#[derive(Default)]
struct ScanTally {
    scanned: u64,
    rejected_invalid: u64,
    filtered: u64,
    admitted: u64,
}

/// Outcome of looking at one coefficient vector.
enum Examined {
    /// A valid model that passed every filter.
    Admitted(Box<EnumRecord>),
    /// The coefficients do not define a valid curve model.
    Invalid,
    /// A valid model skipped by the squarefree or genus filter.
    Filtered,
}

fn scan_job(job: &Job, params: &EnumerationParams) -> (Vec<EnumRecord>, ScanTally) {
    let d = job.degree;
    let h = params.height_bound as i64;
    let mut coeffs = vec![-h; d];
    if d > 0 {
        coeffs[0] = job.low;
    }
    let mut records = Vec::new();
    let mut tally = ScanTally::default();
    loop {
        tally.scanned += 1;
        let mut full: Vec<i64> = coeffs.clone();
        full.push(job.lead);
        match examine(&full, params) {
            Examined::Admitted(record) => {
                tally.admitted += 1;
                records.push(*record);
            }
            Examined::Invalid => tally.rejected_invalid += 1,
            Examined::Filtered => tally.filtered += 1,
        }
        // Odometer step over the middle coefficients.
        let mut pos = 1;
        loop {
            if pos >= coeffs.len() {
                return (records, tally);
            }
            if coeffs[pos] < h {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = -h;
            pos += 1;
        }
    }
}

fn examine(coeffs: &[i64], params: &EnumerationParams) -> Examined {
    let f = IntPoly::from_int_coeffs(coeffs);
    let curve = match SuperellipticCurve::new(params.n, f) {
        Ok(c) => c,
        Err(_) => return Examined::Invalid,
    };
    if params.squarefree_only && !curve.f().is_squarefree() {
        return Examined::Filtered;
    }
    let genus = curve.genus();
    if let Some(want) = params.genus {
        if genus != want {
            return Examined::Filtered;
        }
    }
    let disc = match disc_of_squarefree_part(curve.f()) {
        Ok(d) => d,
        Err(_) => return Examined::Invalid,
    };
    let height = poly_height(curve.f())
        .to_u64()
        .expect("height within the scan bound");
    Examined::Admitted(Box::new(EnumRecord {
        n: curve.n(),
        f: curve.f().to_string(),
        genus,
        height,
        disc_sqfree: disc.to_string(),
        key: canonical_key(&curve),
    }))
}

/// Sort by key and drop all but the least record of each key class.
///
/// Records sharing a key must agree on the genus, and their stored
/// discriminants must lie in the same square class: every move behind
/// the key changes the discriminant of the squarefree part by a perfect
/// square at most.  Either disagreement means the key identified two
/// genuinely different curves and is reported as an invariant violation
/// rather than silently merged.  Both checks run only on colliding
/// pairs, so the common non-colliding path stays cheap.
pub fn merge_records(mut records: Vec<EnumRecord>) -> Result<Vec<EnumRecord>> {
    records.sort_by(|a, b| (&a.key, &a.n, &a.f).cmp(&(&b.key, &b.n, &b.f)));
    let mut out: Vec<EnumRecord> = Vec::with_capacity(records.len());
    for rec in records {
        match out.last() {
            Some(prev) if prev.key == rec.key => {
                if prev.genus != rec.genus {
                    return Err(Error::InvariantViolation(format!(
                        "key {} matches models of genus {} and {}",
                        rec.key, prev.genus, rec.genus
                    )));
                }
                let kept = parse_disc(&prev.disc_sqfree)?;
                let merged = parse_disc(&rec.disc_sqfree)?;
                if !same_square_class(&kept, &merged) {
                    return Err(Error::InvariantViolation(format!(
                        "key {} matches models with discriminants {} and {} \
                         in different square classes",
                        rec.key, prev.disc_sqfree, rec.disc_sqfree
                    )));
                }
            }
            _ => out.push(rec),
        }
    }
    Ok(out)
}

fn parse_disc(text: &str) -> Result<BigInt> {
    text.parse()
        .map_err(|_| Error::Dataset(format!("unreadable discriminant {text:?}")))
}

/// Whether two integers differ by the square of a nonzero rational.
/// Zero is equivalent only to itself.
fn same_square_class(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let product = a * b;
    if product.is_negative() {
        return false;
    }
    let root = product.sqrt();
    &root * &root == product
}

fn jobs_for(params: &EnumerationParams) -> Vec<Job> {
    let h = params.height_bound as i64;
    let mut jobs = Vec::new();
    for degree in params.min_degree..=params.max_degree {
        for lead in 1..=h {
            if degree == 0 {
                jobs.push(Job {
                    degree,
                    lead,
                    low: 0,
                });
            } else {
                for low in -h..=h {
                    jobs.push(Job { degree, lead, low });
                }
            }
        }
    }
    jobs
}

/// Enumerate curve models within the given bounds.
///
/// Negative leading coefficients are never scanned: the canonical key
/// identifies `f` with `-f`, so every such model is represented by its
/// sign twin.  The result is sorted by key and is identical — byte for
/// byte — for every choice of `workers`.
pub fn enumerate(
    params: &EnumerationParams,
    workers: Option<usize>,
) -> Result<(Vec<EnumRecord>, EnumerationStats)> {
    let jobs = jobs_for(params);
    let parts = run_jobs(&jobs, params, workers)?;
    let mut tally = ScanTally::default();
    let mut all = Vec::new();
    for (records, t) in parts {
        tally.scanned += t.scanned;
        tally.rejected_invalid += t.rejected_invalid;
        tally.filtered += t.filtered;
        tally.admitted += t.admitted;
        all.extend(records);
    }
    debug_assert_eq!(
        tally.scanned,
        tally.rejected_invalid + tally.filtered + tally.admitted,
        "every scanned vector lands in exactly one bucket"
    );
    let records = merge_records(all)?;
    let stats = EnumerationStats {
        scanned: tally.scanned,
        rejected_invalid: tally.rejected_invalid,
        filtered: tally.filtered,
        admitted: tally.admitted,
        unique: records.len() as u64,
    };
    Ok((records, stats))
}

#[cfg(feature = "parallel")]
fn run_jobs(
    jobs: &[Job],
    params: &EnumerationParams,
    workers: Option<usize>,
) -> Result<Vec<(Vec<EnumRecord>, ScanTally)>> {
    use rayon::prelude::*;
    let work = || jobs.par_iter().map(|job| scan_job(job, params)).collect();
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvariantViolation(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(
    jobs: &[Job],
    params: &EnumerationParams,
    _workers: Option<usize>,
) -> Result<Vec<(Vec<EnumRecord>, ScanTally)>> {
    Ok(jobs.iter().map(|job| scan_job(job, params)).collect())
}

/// Description stored next to an enumeration database: the format
/// version, the version of the tool that produced it, the search
/// parameters, and the run's counters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatabaseMeta {
    pub version: u32,
    pub tool_version: String,
    pub params: EnumerationParams,
    pub stats: EnumerationStats,
}

impl DatabaseMeta {
    /// Metadata for a freshly produced database: current format version
    /// and this crate's version, with the given parameters and counters.
    pub fn new(params: EnumerationParams, stats: EnumerationStats) -> Self {
        DatabaseMeta {
            version: 1,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            params,
            stats,
        }
    }
}

/// Path of the metadata sidecar for a database file.
pub fn sidecar_path(db: &Path) -> PathBuf {
    let mut name = db.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    db.with_file_name(name)
}

/// Write records as JSON Lines plus a metadata sidecar.
///
/// Records go out one line at a time; a failure reports the index of the
/// record it interrupted.
pub fn write_database(path: &Path, meta: &DatabaseMeta, records: &[EnumRecord]) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    for (idx, rec) in records.iter().enumerate() {
        let line = serde_json::to_string(rec)
            .map_err(|e| Error::Dataset(format!("serialize record {idx}: {e}")))?;
        writeln!(out, "{line}")
            .map_err(|e| Error::Dataset(format!("write record {idx} to {path:?}: {e}")))?;
    }
    out.flush().map_err(|e| {
        Error::Dataset(format!(
            "flush {path:?} after record {}: {e}",
            records.len()
        ))
    })?;
    let meta_text = serde_json::to_string_pretty(meta)
        .map_err(|e| Error::Dataset(format!("serialize metadata: {e}")))?;
    fs::write(sidecar_path(path), meta_text)?;
    Ok(())
}

/// Read a database and its sidecar back.
pub fn read_database(path: &Path) -> Result<(DatabaseMeta, Vec<EnumRecord>)> {
    let meta_text = fs::read_to_string(sidecar_path(path))?;
    let meta: DatabaseMeta =
        serde_json::from_str(&meta_text).map_err(|e| Error::Dataset(format!("metadata: {e}")))?;
    if meta.version != 1 {
        return Err(Error::Dataset(format!(
            "unsupported database version {}",
            meta.version
        )));
    }
    let file = fs::File::open(path)?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EnumRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Dataset(format!("record on line {}: {e}", idx + 1)))?;
        records.push(rec);
    }
    if records.len() as u64 != meta.stats.unique {
        return Err(Error::Dataset(format!(
            "metadata promises {} records, file holds {}",
            meta.stats.unique,
            records.len()
        )));
    }
    Ok((meta, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(text: &str) -> SuperellipticCurve {
        SuperellipticCurve::parse(text).expect("valid curve")
    }

    fn params(n: u64, degrees: std::ops::RangeInclusive<usize>, h: u64) -> EnumerationParams {
        EnumerationParams {
            n,
            min_degree: *degrees.start(),
            max_degree: *degrees.end(),
            height_bound: h,
            genus: None,
            squarefree_only: false,
        }
    }

    #[test]
    fn key_is_invariant_on_the_model_orbit() {
        for text in [
            "y^2 = x^5 + x + 1",
            "y^2 = x^9 + 3 x^2 - 1",
            "y^3 = x^6 + 2 x^3 + 5",
            "y^2 = x^5 + x^3",
            "y^4 = x^5 - x^2",
        ] {
            let c = curve(text);
            let key = canonical_key(&c);
            for m in [MobiusMap::negation(), MobiusMap::inversion()] {
                let moved = c.apply_transform(&m).unwrap();
                assert_eq!(
                    canonical_key(&moved),
                    key,
                    "key changed under orbit move on {text}"
                );
            }
        }
    }

    #[test]
    fn key_merges_sign_twists_but_not_content_twists() {
        let plus = curve("y^2 = x^10 - 1");
        let minus = curve("y^2 = 1 - x^10");
        assert_ne!(plus, minus);
        assert_eq!(canonical_key(&plus), canonical_key(&minus));

        let twisted = curve("y^2 = 2 x^10 - 2");
        assert_ne!(canonical_key(&plus), canonical_key(&twisted));
    }

    #[test]
    fn key_identifies_absorbed_square_factors() {
        // y^2 = x^2 (x^3 + x) and y^2 = x^3 + x present the same curve.
        let padded = curve("y^2 = x^5 + x^3");
        let slim = curve("y^2 = x^3 + x");
        assert_eq!(canonical_key(&padded), canonical_key(&slim));
    }

    #[test]
    fn square_class_comparison_examples() {
        let v = |x: i64| BigInt::from(x);
        assert!(same_square_class(&v(12), &v(75))); // both 3 * square
        assert!(same_square_class(&v(-18), &v(-2)));
        assert!(same_square_class(&v(1), &v(49)));
        assert!(!same_square_class(&v(12), &v(5)));
        assert!(!same_square_class(&v(3), &v(-3)));
        assert!(!same_square_class(&v(0), &v(4)));
        assert!(same_square_class(&v(0), &v(0)));
    }

    #[test]
    fn enumeration_is_deterministic_across_worker_counts() {
        let p = params(2, 3..=4, 1);
        let (base, stats) = enumerate(&p, Some(1)).unwrap();
        assert!(stats.unique > 0);
        for w in [2usize, 4] {
            let (again, stats_again) = enumerate(&p, Some(w)).unwrap();
            assert_eq!(base, again, "records differ with {w} workers");
            assert_eq!(stats, stats_again);
        }
        let (free, _) = enumerate(&p, None).unwrap();
        assert_eq!(base, free);
    }

    #[test]
    fn records_are_sorted_and_unique_by_key() {
        let p = params(2, 5..=5, 1);
        let (records, _) = enumerate(&p, Some(2)).unwrap();
        for pair in records.windows(2) {
            assert!(pair[0].key < pair[1].key);
        }
    }

    #[test]
    fn enumeration_matches_an_orbit_recount() {
        // Independent recount: scan every admissible model (both leading
        // signs), group by orbit closure under negation/reversal and the
        // sign normalisation, and count the classes.
        let p = EnumerationParams {
            n: 2,
            min_degree: 5,
            max_degree: 5,
            height_bound: 1,
            genus: None,
            squarefree_only: true,
        };
        let (records, _) = enumerate(&p, None).unwrap();

        let mut classes = BTreeSet::new();
        let h = p.height_bound as i64;
        let mut coeffs = vec![-h; 6];
        loop {
            if coeffs[5] != 0 {
                if let Ok(c) = SuperellipticCurve::new(2, IntPoly::from_int_coeffs(&coeffs)) {
                    if c.f().is_squarefree() {
                        classes.insert(canonical_key(&c));
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == coeffs.len() {
                    assert_eq!(records.len(), classes.len());
                    return;
                }
                if coeffs[pos] < h {
                    coeffs[pos] += 1;
                    break;
                }
                coeffs[pos] = -h;
                pos += 1;
            }
        }
    }

    #[test]
    fn genus_filter_applies() {
        let mut p = params(2, 5..=6, 1);
        p.genus = Some(2);
        p.squarefree_only = true;
        let (records, stats) = enumerate(&p, None).unwrap();
        assert!(!records.is_empty());
        assert!(records.iter().all(|r| r.genus == 2));
        assert!(stats.filtered > 0, "degree-6 genus-2 models must be rare");
        assert_eq!(
            stats.scanned,
            stats.rejected_invalid + stats.filtered + stats.admitted
        );
    }

    #[test]
    fn cubic_covers_of_squarefree_quartics_have_genus_three() {
        let mut p = params(3, 4..=4, 1);
        p.squarefree_only = true;
        let (records, stats) = enumerate(&p, None).unwrap();
        assert!(!records.is_empty());
        assert!(records.iter().all(|r| r.genus == 3));
        assert_eq!(
            stats.scanned,
            stats.rejected_invalid + stats.filtered + stats.admitted
        );
    }

    #[test]
    fn zero_bound_is_an_empty_search() {
        let p = params(2, 5..=6, 0);
        let (records, stats) = enumerate(&p, None).unwrap();
        assert!(records.is_empty());
        assert_eq!(stats.scanned, 0);
    }

    #[test]
    fn merge_rejects_colliding_keys_with_different_genus() {
        let a = EnumRecord {
            n: 2,
            f: "x^5 + x + 1".into(),
            genus: 2,
            height: 1,
            disc_sqfree: "1".into(),
            key: "aa".into(),
        };
        let mut b = a.clone();
        b.f = "x^7 + x + 1".into();
        b.genus = 3;
        assert!(merge_records(vec![a, b]).is_err());
    }

    #[test]
    fn merge_rejects_colliding_keys_with_different_disc_class() {
        let a = EnumRecord {
            n: 2,
            f: "x^5 + x + 1".into(),
            genus: 2,
            height: 1,
            disc_sqfree: "12".into(),
            key: "aa".into(),
        };
        let mut b = a.clone();
        b.f = "x^5 + x - 1".into();
        b.disc_sqfree = "5".into();
        assert!(merge_records(vec![a, b]).is_err());
    }

    #[test]
    fn merge_accepts_colliding_keys_in_the_same_disc_class() {
        let a = EnumRecord {
            n: 2,
            f: "x^5 + x + 1".into(),
            genus: 2,
            height: 1,
            disc_sqfree: "12".into(),
            key: "aa".into(),
        };
        let mut b = a.clone();
        b.f = "x^5 + 2 x + 1".into();
        // 75 = 3 * 5^2 and 12 = 3 * 2^2 share the square class of 3.
        b.disc_sqfree = "75".into();
        let merged = merge_records(vec![a, b.clone()]).unwrap();
        // "2 x" sorts before "x", so the twin with f = x^5 + 2 x + 1 is
        // the representative the merge keeps.
        assert_eq!(merged, vec![b]);
    }

    #[test]
    fn database_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let db = dir.path().join("models.jsonl");
        let p = params(3, 4..=4, 1);
        let (records, stats) = enumerate(&p, None).unwrap();
        let meta = DatabaseMeta::new(p, stats);
        assert_eq!(meta.version, 1);
        assert_eq!(meta.tool_version, env!("CARGO_PKG_VERSION"));
        write_database(&db, &meta, &records).unwrap();
        assert!(sidecar_path(&db).exists());
        let (meta_back, records_back) = read_database(&db).unwrap();
        assert_eq!(meta_back, meta);
        assert_eq!(records_back, records);
    }

    #[test]
    fn disc_field_reflects_the_squarefree_part() {
        let p = params(2, 5..=5, 1);
        let (records, _) = enumerate(&p, None).unwrap();
        let rec = records
            .iter()
            .find(|r| r.f == "x^5 + x + 1")
            .expect("x^5 + x + 1 enumerated");
        // x^5 + x + 1 is already squarefree, with discriminant 3381.
        assert_eq!(rec.disc_sqfree, "3381");
        // x^5 + x^3 = x^3 (x^2 + 1) has squarefree part x^3 + x, whose
        // discriminant is -4.
        let padded = curve("y^2 = x^5 + x^3");
        match examine(&[0, 0, 0, 1, 0, 1], &params(2, 5..=5, 1)) {
            Examined::Admitted(r) => {
                assert_eq!(r.f, padded.f().to_string());
                assert_eq!(r.disc_sqfree, "-4");
            }
            _ => panic!("x^5 + x^3 admitted without filters"),
        }
    }
}
