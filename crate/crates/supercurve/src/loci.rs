//! Catalogue of the 41 automorphism loci of genus-4 curves.
//!
//! Each locus records the automorphism group (name and small-group id), the
//! cover signature of the quotient map, the dimension of the stratum inside
//! the genus-4 moduli space, the containment edges to more special strata,
//! the color the stratum carries in the reference inclusion diagram, and,
//! for the 29 superelliptic strata, a parametrized family `y^n = f_t(x)`
//! with a rational sample point.
//!
//! The dataset ships embedded in the library; an alternative catalogue with
//! the same JSON schema can be loaded from disk.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curve::SuperellipticCurve;
use crate::error::{Error, Result};
use crate::hurwitz::{locus_dimension, rh_genus, CoverSignature};
use crate::poly::{parse_with_params, template_params};

/// Color of a stratum in the reference inclusion diagram: red marks
/// hyperelliptic strata, yellow the other superelliptic strata, blue the
/// rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramColor {
    Red,
    Yellow,
    Blue,
}

impl fmt::Display for DiagramColor {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagramColor::Red => "red",
            DiagramColor::Yellow => "yellow",
            DiagramColor::Blue => "blue",
        };
        write!(out, "{s}")
    }
}

/// A parametrized superelliptic family `y^n = f(x; params)` attached to a
/// locus, with a rational sample point lying in the family.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily {
    pub case_no: u32,
    pub n: u64,
    pub template: String,
    pub params: Vec<String>,
    pub sample: BTreeMap<String, BigRational>,
    /// True when the parameter count equals the locus dimension, i.e. the
    /// written form has no redundant degrees of freedom.
    pub normalized: bool,
}

/// One automorphism locus.
#[derive(Clone, Debug, PartialEq)]
pub struct Locus {
    pub case_no: u32,
    pub dim: u64,
    pub group_name: String,
    /// Small-group id `(order, index)`.
    pub gap_id: (u64, u32),
    pub signature: CoverSignature,
    /// Opaque row tag carried over from the source classification.
    pub type_code: u32,
    /// Cases of strictly more special strata contained in this one.
    pub subs: Vec<u32>,
    pub diagram_color: DiagramColor,
    pub family: Option<CurveFamily>,
}

impl Locus {
    pub fn group_order(&self) -> u64 {
        self.gap_id.0
    }

    /// Human-readable group name, falling back to the small-group id.
    pub fn group_label(&self) -> String {
        if self.group_name.is_empty() {
            format!("({}, {})", self.gap_id.0, self.gap_id.1)
        } else {
            self.group_name.clone()
        }
    }

    pub fn is_superelliptic(&self) -> bool {
        self.family.is_some()
    }

    pub fn is_hyperelliptic(&self) -> bool {
        matches!(&self.family, Some(f) if f.n == 2)
    }
}

/// Validation outcome for one locus; `problems` empty means all checks pass.
#[derive(Clone, Debug)]
pub struct LocusReport {
    pub case_no: u32,
    pub problems: Vec<String>,
}

/// Summary counts over the catalogue.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogueStats {
    pub total: usize,
    pub superelliptic: usize,
    pub hyperelliptic: usize,
    pub superelliptic_fraction: BigRational,
    pub max_group_order: u64,
    pub red: usize,
    pub yellow: usize,
    pub blue: usize,
    /// Cases where the diagram color disagrees with the presence of a
    /// superelliptic family (blue but superelliptic, or colored but not).
    pub discrepancies: Vec<u32>,
}

#[derive(Deserialize)]
struct RawDataset {
    version: u32,
    genus: u64,
    loci: Vec<RawLocus>,
}

#[derive(Deserialize)]
struct RawLocus {
    #[serde(rename = "case")]
    case_no: u32,
    dim: u64,
    group: String,
    gap: (u64, u32),
    signature: String,
    #[serde(rename = "type")]
    type_code: u32,
    subs: Vec<u32>,
    color: DiagramColor,
    family: Option<RawFamily>,
}

#[derive(Deserialize)]
struct RawFamily {
    n: u64,
    template: String,
    params: Vec<String>,
    sample: BTreeMap<String, String>,
    normalized: bool,
}

/// The loaded catalogue: loci ordered by case number.
#[derive(Clone, Debug)]
pub struct LociTable {
    genus: u64,
    loci: Vec<Locus>,
    index: BTreeMap<u32, usize>,
}

static BUILTIN: OnceLock<LociTable> = OnceLock::new();

/// The embedded genus-4 catalogue.
pub fn builtin() -> &'static LociTable {
    BUILTIN.get_or_init(|| {
        LociTable::from_json(include_str!("../data/genus4_loci.json"))
            .expect("embedded catalogue is well-formed")
    })
}

impl LociTable {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Parse and structurally validate a catalogue. Semantic consistency
    /// (genus, dimension, divisibility, containment) is checked separately
    /// by [`LociTable::validate`].
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDataset =
            serde_json::from_str(text).map_err(|e| Error::Dataset(format!("bad JSON: {e}")))?;
        if raw.version != 1 {
            return Err(Error::Dataset(format!(
                "unsupported catalogue version {}",
                raw.version
            )));
        }
        let mut loci = Vec::with_capacity(raw.loci.len());
        let mut index = BTreeMap::new();
        for r in raw.loci {
            if r.gap.0 == 0 {
                return Err(Error::Dataset(format!("case {}: group order 0", r.case_no)));
            }
            let signature = CoverSignature::parse(&r.signature)
                .map_err(|e| Error::Dataset(format!("case {}: {e}", r.case_no)))?;
            let family = match r.family {
                None => None,
                Some(f) => Some(convert_family(r.case_no, r.dim, f)?),
            };
            let pos = loci.len();
            if index.insert(r.case_no, pos).is_some() {
                return Err(Error::Dataset(format!("duplicate case {}", r.case_no)));
            }
            loci.push(Locus {
                case_no: r.case_no,
                dim: r.dim,
                group_name: r.group,
                gap_id: r.gap,
                signature,
                type_code: r.type_code,
                subs: r.subs,
                diagram_color: r.color,
                family,
            });
        }
        let table = LociTable {
            genus: raw.genus,
            loci,
            index,
        };
        table.check_edges_well_formed()?;
        Ok(table)
    }

    fn check_edges_well_formed(&self) -> Result<()> {
        for l in &self.loci {
            for &t in &l.subs {
                if t == l.case_no {
                    return Err(Error::Dataset(format!(
                        "case {} contains itself",
                        l.case_no
                    )));
                }
                if !self.index.contains_key(&t) {
                    return Err(Error::Dataset(format!(
                        "case {} lists unknown sub-locus {t}",
                        l.case_no
                    )));
                }
            }
        }
        // Reject cycles: three-state depth-first search (open / closed).
        fn visit(table: &LociTable, c: u32, state: &mut BTreeMap<u32, u8>) -> Result<()> {
            match state.get(&c) {
                Some(1) => {
                    return Err(Error::Dataset(format!(
                        "containment cycle through case {c}"
                    )))
                }
                Some(_) => return Ok(()),
                None => {}
            }
            state.insert(c, 1);
            for &t in &table.loci[table.index[&c]].subs {
                visit(table, t, state)?;
            }
            state.insert(c, 2);
            Ok(())
        }
        let mut state = BTreeMap::new();
        for l in &self.loci {
            visit(self, l.case_no, &mut state)?;
        }
        Ok(())
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.loci.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loci.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Locus> {
        self.loci.iter()
    }

    pub fn get(&self, case_no: u32) -> Result<&Locus> {
        self.index
            .get(&case_no)
            .map(|&i| &self.loci[i])
            .ok_or(Error::UnknownCase(case_no))
    }

    /// All containment edges `(case, sub-case)`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for l in &self.loci {
            for &t in &l.subs {
                out.push((l.case_no, t));
            }
        }
        out
    }

    /// Reflexive-transitive reachability along containment edges: is the
    /// stratum `to` equal to, or strictly more special than, `from`?
    pub fn reachable(&self, from: u32, to: u32) -> bool {
        if !self.index.contains_key(&from) {
            return false;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([from]);
        while let Some(c) = queue.pop_front() {
            if c == to {
                return true;
            }
            if !seen.insert(c) {
                continue;
            }
            if let Some(&i) = self.index.get(&c) {
                queue.extend(self.loci[i].subs.iter().copied());
            }
        }
        false
    }

    /// Run the consistency checks for one locus: the Riemann-Hurwitz genus,
    /// the dimension formula, divisibility of the branching indices by the
    /// group order, and the containment edges (strict dimension drop, group
    /// order divides the subgroup-side order).
    pub fn validate_locus(&self, locus: &Locus) -> LocusReport {
        let mut problems = Vec::new();
        let order = locus.group_order();
        match rh_genus(order, &locus.signature) {
            Ok(g) if g == self.genus => {}
            Ok(g) => problems.push(format!(
                "Riemann-Hurwitz genus is {g}, catalogue genus is {}",
                self.genus
            )),
            Err(e) => problems.push(format!("Riemann-Hurwitz genus: {e}")),
        }
        match locus_dimension(&locus.signature) {
            Ok(d) if d == locus.dim => {}
            Ok(d) => problems.push(format!(
                "dimension formula gives {d}, row says {}",
                locus.dim
            )),
            Err(e) => problems.push(format!("dimension formula: {e}")),
        }
        for &e in locus.signature.indices() {
            if !order.is_multiple_of(e) {
                problems.push(format!(
                    "branching index {e} does not divide group order {order}"
                ));
            }
        }
        for &t in &locus.subs {
            match self.get(t) {
                Ok(sub) => {
                    if sub.dim >= locus.dim {
                        problems.push(format!(
                            "sub-locus {t} has dimension {} >= {}",
                            sub.dim, locus.dim
                        ));
                    }
                    if sub.group_order() % order != 0 {
                        problems.push(format!(
                            "sub-locus {t} group order {} is not a multiple of {order}",
                            sub.group_order()
                        ));
                    }
                }
                Err(_) => problems.push(format!("unknown sub-locus {t}")),
            }
        }
        LocusReport {
            case_no: locus.case_no,
            problems,
        }
    }

    /// Validate every locus, in case order.
    pub fn validate(&self) -> Vec<LocusReport> {
        self.loci.iter().map(|l| self.validate_locus(l)).collect()
    }

    /// Instantiate the family of a superelliptic locus at the given
    /// parameter values. All declared parameters must be supplied; values
    /// that make the model reducible or move its genus are rejected.
    pub fn instantiate(
        &self,
        case_no: u32,
        params: &BTreeMap<String, BigRational>,
    ) -> Result<SuperellipticCurve> {
        let locus = self.get(case_no)?;
        let fam = locus.family.as_ref().ok_or_else(|| {
            Error::Dataset(format!("case {case_no} has no associated curve family"))
        })?;
        for name in params.keys() {
            if !fam.params.contains(name) {
                return Err(Error::UnexpectedParameter(name.clone()));
            }
        }
        let f = parse_with_params(&fam.template, params)?;
        let curve = SuperellipticCurve::new(fam.n, f)
            .map_err(|e| Error::DegenerateInstantiation(format!("case {case_no}: {e}")))?;
        if curve.genus() != self.genus {
            return Err(Error::DegenerateInstantiation(format!(
                "case {case_no}: instantiated curve has genus {}, expected {}",
                curve.genus(),
                self.genus
            )));
        }
        Ok(curve)
    }

    /// The family of a superelliptic locus at its stored sample point.
    pub fn sample_curve(&self, case_no: u32) -> Result<SuperellipticCurve> {
        let locus = self.get(case_no)?;
        let fam = locus.family.as_ref().ok_or_else(|| {
            Error::Dataset(format!("case {case_no} has no associated curve family"))
        })?;
        self.instantiate(case_no, &fam.sample)
    }

    /// Counts of superelliptic loci versus the diagram coloring.
    pub fn stats(&self) -> CatalogueStats {
        let total = self.loci.len();
        let superelliptic = self.loci.iter().filter(|l| l.is_superelliptic()).count();
        let hyperelliptic = self.loci.iter().filter(|l| l.is_hyperelliptic()).count();
        let count_color =
            |c: DiagramColor| self.loci.iter().filter(|l| l.diagram_color == c).count();
        let discrepancies = self
            .loci
            .iter()
            .filter(|l| l.is_superelliptic() == (l.diagram_color == DiagramColor::Blue))
            .map(|l| l.case_no)
            .collect();
        CatalogueStats {
            total,
            superelliptic,
            hyperelliptic,
            superelliptic_fraction: BigRational::new(
                (superelliptic as i64).into(),
                (total as i64).into(),
            ),
            max_group_order: self.loci.iter().map(|l| l.group_order()).max().unwrap_or(0),
            red: count_color(DiagramColor::Red),
            yellow: count_color(DiagramColor::Yellow),
            blue: count_color(DiagramColor::Blue),
            discrepancies,
        }
    }
}

fn convert_family(case_no: u32, dim: u64, raw: RawFamily) -> Result<CurveFamily> {
    if raw.n < 2 {
        return Err(Error::Dataset(format!(
            "case {case_no}: family exponent {} < 2",
            raw.n
        )));
    }
    let declared: BTreeSet<String> = raw.params.iter().cloned().collect();
    if declared.len() != raw.params.len() {
        return Err(Error::Dataset(format!(
            "case {case_no}: duplicate parameter name"
        )));
    }
    let in_template = template_params(&raw.template)
        .map_err(|e| Error::Dataset(format!("case {case_no}: bad template: {e}")))?;
    if in_template != declared {
        return Err(Error::Dataset(format!(
            "case {case_no}: template parameters {in_template:?} do not match declared {declared:?}"
        )));
    }
    let sample_keys: BTreeSet<String> = raw.sample.keys().cloned().collect();
    if sample_keys != declared {
        return Err(Error::Dataset(format!(
            "case {case_no}: sample keys {sample_keys:?} do not match declared {declared:?}"
        )));
    }
    if raw.normalized && raw.params.len() as u64 != dim {
        return Err(Error::Dataset(format!(
            "case {case_no}: normalized family has {} parameters but dimension {dim}",
            raw.params.len()
        )));
    }
    let mut sample = BTreeMap::new();
    for (k, v) in raw.sample {
        let value: BigRational = v
            .parse()
            .map_err(|e| Error::Dataset(format!("case {case_no}: bad sample value `{v}`: {e}")))?;
        sample.insert(k, value);
    }
    Ok(CurveFamily {
        case_no,
        n: raw.n,
        template: raw.template,
        params: raw.params,
        sample,
        normalized: raw.normalized,
    })
}
