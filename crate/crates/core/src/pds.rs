//! Exact verification of candidate partial difference sets.
//!
//! Every verdict here is decided by integer difference counting. Character
//! sums appear only as an extra necessary condition for regular PDSs.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::exact_sqrt;
use crate::group::{AbelianGroup, CharacterIndex, GroupElement, GroupError};

/// Value of the top-level `"schema"` field in every JSON document.
pub const SCHEMA: &str = "pds-kit/1";

/// Tolerance for floating point character sums.
pub const CHARACTER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum PdsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid parameters {0}")]
    InvalidParams(String),
    #[error("Paley parameters need v ≡ 1 (mod 4), got v = {0}")]
    NotPaleyOrder(u64),
    #[error("unsupported schema `{0}` (expected `{SCHEMA}`)")]
    Schema(String),
    #[error("malformed candidate set JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// The tuple `(v, k, λ, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdsParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl PdsParams {
    /// Checked constructor: `k <= v - 1`, `λ <= k`, `μ <= k`.
    pub fn new(v: u64, k: u64, lambda: u64, mu: u64) -> Result<Self, PdsError> {
        let p = Self { v, k, lambda, mu };
        if v == 0 || k > v - 1 || lambda > k || mu > k {
            return Err(PdsError::InvalidParams(p.to_string()));
        }
        Ok(p)
    }

    /// `β = λ - μ`.
    pub fn beta(&self) -> i64 {
        self.lambda as i64 - self.mu as i64
    }

    /// `Δ = β² + 4(k - μ)`.
    pub fn delta(&self) -> i64 {
        self.beta().pow(2) + 4 * (self.k as i64 - self.mu as i64)
    }

    pub fn delta_is_square(&self) -> bool {
        exact_sqrt(self.delta()).is_some()
    }

    /// `k(k - 1) = λk + μ(v - 1 - k)`.
    pub fn satisfies_counting_identity(&self) -> bool {
        let (v, k, l, m) = (
            self.v as i128,
            self.k as i128,
            self.lambda as i128,
            self.mu as i128,
        );
        k * (k - 1) == l * k + m * (v - 1 - k)
    }

    /// Parameters of the complementary set `G \ (D ∪ {e})`:
    /// `(v, v-1-k, v-2-2k+μ, v-2k+λ)`. `None` when a component would be negative.
    pub fn complement(&self) -> Option<PdsParams> {
        let (v, k, l, m) = (
            self.v as i64,
            self.k as i64,
            self.lambda as i64,
            self.mu as i64,
        );
        let parts = [v - 1 - k, v - 2 - 2 * k + m, v - 2 * k + l];
        if parts.iter().any(|&x| x < 0) {
            return None;
        }
        Some(PdsParams {
            v: self.v,
            k: parts[0] as u64,
            lambda: parts[1] as u64,
            mu: parts[2] as u64,
        })
    }

    /// The two values `(β ± √Δ)/2` a nontrivial character can take on a regular PDS.
    pub fn character_values(&self) -> [f64; 2] {
        let b = self.beta() as f64;
        let r = (self.delta().max(0) as f64).sqrt();
        [(b + r) / 2.0, (b - r) / 2.0]
    }

    pub fn is_paley(&self) -> bool {
        paley_params(self.v).is_ok_and(|p| p == *self)
    }
}

impl fmt::Display for PdsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v, self.k, self.lambda, self.mu)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    v: u64,
    k: u64,
    lambda: u64,
    mu: u64,
    beta: i64,
    delta: i64,
}

impl Serialize for PdsParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParamsJson {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            mu: self.mu,
            beta: self.beta(),
            delta: self.delta(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PdsParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ParamsJson::deserialize(d)?;
        Ok(PdsParams {
            v: j.v,
            k: j.k,
            lambda: j.lambda,
            mu: j.mu,
        })
    }
}

/// `(v, (v-1)/2, (v-5)/4, (v-1)/4)`.
pub fn paley_params(v: u64) -> Result<PdsParams, PdsError> {
    if v % 4 != 1 || v < 5 {
        return Err(PdsError::NotPaleyOrder(v));
    }
    Ok(PdsParams {
        v,
        k: (v - 1) / 2,
        lambda: (v - 5) / 4,
        mu: (v - 1) / 4,
    })
}

/// A subset of a group proposed as a PDS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub group: AbelianGroup,
    pub members: BTreeSet<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct CandidateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    group: String,
    members: Vec<String>,
}

impl CandidateSet {
    pub fn new(
        group: AbelianGroup,
        members: impl IntoIterator<Item = GroupElement>,
    ) -> Result<Self, PdsError> {
        let members: BTreeSet<_> = members.into_iter().collect();
        for g in &members {
            group.check(g)?;
        }
        Ok(Self { group, members })
    }

    pub fn from_indices(group: AbelianGroup, indices: impl IntoIterator<Item = usize>) -> Self {
        let members = indices.into_iter().map(|i| group.element_at(i)).collect();
        Self { group, members }
    }

    pub fn from_mask(group: AbelianGroup, mask: &[bool]) -> Self {
        let idx = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i);
        Self::from_indices(group, idx)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.members.contains(g)
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.group.order() as usize];
        for g in &self.members {
            m[self.group.index_of(g)] = true;
        }
        m
    }

    /// The same set with identity membership flipped.
    pub fn toggle_identity(&self) -> CandidateSet {
        let mut out = self.clone();
        let e = self.group.identity();
        if !out.members.remove(&e) {
            out.members.insert(e);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CandidateJson {
            schema: Some(SCHEMA.to_string()),
            group: self.group.to_string(),
            members: self.members.iter().map(|g| g.to_string()).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, PdsError> {
        Self::from_json_value(serde_json::from_str(text)?)
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self, PdsError> {
        let raw: CandidateJson = serde_json::from_value(value)?;
        if let Some(s) = raw.schema.filter(|s| s != SCHEMA) {
            return Err(PdsError::Schema(s));
        }
        let group = AbelianGroup::parse(&raw.group)?;
        let members = raw
            .members
            .iter()
            .map(|m| group.parse_element(m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, members)
    }
}

impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.group)?;
        for (i, g) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// Difference multiplicities, indexed densely by group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceCounts {
    group: AbelianGroup,
    counts: Vec<u64>,
}

impl DifferenceCounts {
    pub fn get(&self, g: &GroupElement) -> u64 {
        self.counts[self.group.index_of(g)]
    }

    pub fn by_index(&self) -> &[u64] {
        &self.counts
    }

    /// `(element, count)` over the nonidentity elements.
    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, u64)> + '_ {
        (1..self.counts.len()).map(|i| (self.group.element_at(i), self.counts[i]))
    }

    pub fn total(&self) -> u64 {
        self.counts[1..].iter().sum()
    }
}

/// `count[x] = #{(g, h) in D² : g ≠ h, g - h = x}`.
pub fn difference_counts(d: &CandidateSet) -> DifferenceCounts {
    let group = &d.group;
    let members: Vec<&GroupElement> = d.members.iter().collect();
    let mut counts = vec![0u64; group.order() as usize];
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            if i != j {
                counts[group.index_of(&group.sub(a, b))] += 1;
            }
        }
    }
    DifferenceCounts {
        group: group.clone(),
        counts,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub is_pds: bool,
    pub params: Option<PdsParams>,
    pub is_regular: bool,
    pub is_trivial: bool,
    /// Set when `λ` or `μ` had no element to be observed on and was reported as 0.
    pub degenerate: bool,
    #[serde(with = "opt_element")]
    pub failing_element: Option<GroupElement>,
}

mod opt_element {
    use super::GroupElement;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &Option<GroupElement>, s: S) -> Result<S::Ok, S::Error> {
        match g {
            Some(g) => s.serialize_some(&g.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<GroupElement>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("serializable");
        value
            .as_object_mut()
            .expect("object")
            .insert("schema".into(), SCHEMA.into());
        value.to_string()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.params, &self.failing_element) {
            (Some(p), _) if self.is_pds => {
                write!(
                    f,
                    "PDS {p}: {}, {}",
                    if self.is_regular {
                        "regular"
                    } else {
                        "not regular"
                    },
                    if self.is_trivial {
                        "trivial"
                    } else {
                        "nontrivial"
                    }
                )?;
                if self.degenerate {
                    f.write_str(" (degenerate)")?;
                }
                Ok(())
            }
            (_, Some(w)) => write!(f, "not a PDS: difference count at {w} breaks the pattern"),
            _ => f.write_str("not a PDS"),
        }
    }
}

/// Exact verification by difference counting.
pub fn verify_pds(d: &CandidateSet) -> VerificationReport {
    let group = &d.group;
    let counts = difference_counts(d);
    let mask = d.mask();
    let v = group.order() as usize;

    let mut lambda = None;
    let mut mu = None;
    let mut failing = None;
    for (i, (&member, &count)) in mask.iter().zip(&counts.counts).enumerate().skip(1) {
        let slot = if member { &mut lambda } else { &mut mu };
        match *slot {
            None => *slot = Some(count),
            Some(c) if c != count => {
                failing = Some(group.element_at(i));
                break;
            }
            Some(_) => {}
        }
    }

    let is_regular = !mask[0] && (1..v).all(|i| mask[i] == mask[group.neg_idx(i)]);
    let is_trivial = is_trivial_mask(group, &mask);
    let is_pds = failing.is_none();
    let degenerate = lambda.is_none() || mu.is_none();
    let params = is_pds.then(|| PdsParams {
        v: v as u64,
        k: d.len() as u64,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    });
    VerificationReport {
        is_pds,
        params,
        is_regular,
        is_trivial,
        degenerate,
        failing_element: failing,
    }
}

fn is_trivial_mask(group: &AbelianGroup, mask: &[bool]) -> bool {
    let with_identity: Vec<bool> = mask.iter().enumerate().map(|(i, &b)| b || i == 0).collect();
    let complement: Vec<bool> = mask.iter().map(|&b| !b).collect();
    is_subgroup(group, &with_identity) || is_subgroup(group, &complement)
}

/// Nonempty and closed under subtraction.
fn is_subgroup(group: &AbelianGroup, mask: &[bool]) -> bool {
    let members: Vec<GroupElement> = mask
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| group.element_at(i))
        .collect();
    !members.is_empty()
        && members.iter().all(|a| {
            members
                .iter()
                .all(|b| mask[group.index_of(&group.sub(a, b))])
        })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SrgError {
    #[error("connection set is not regular (needs D = -D and e ∉ D)")]
    NotRegular,
    #[error("degenerate graph: {0}")]
    Degenerate(&'static str),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    IrregularDegree {
        vertex: GroupElement,
        degree: u64,
        expected: u64,
    },
    #[error("vertices {x} and {y} ({}) share {common} neighbours, expected {expected}",
        if *.adjacent { "adjacent" } else { "non-adjacent" })]
    NotStronglyRegular {
        x: GroupElement,
        y: GroupElement,
        adjacent: bool,
        common: u64,
        expected: u64,
    },
}

/// Strongly regular parameters of `Cay(G, D)` by common-neighbour counting
/// over all vertex pairs.
pub fn cayley_srg_params(d: &CandidateSet) -> Result<PdsParams, SrgError> {
    let group = &d.group;
    let mask = d.mask();
    let v = group.order() as usize;
    if mask[0] || (1..v).any(|i| mask[i] != mask[group.neg_idx(i)]) {
        return Err(SrgError::NotRegular);
    }

    let words = v.div_ceil(64);
    let mut rows = vec![0u64; v * words];
    for x in 0..v {
        let xe = group.element_at(x);
        for y in 0..v {
            if mask[group.index_of(&group.sub(&xe, &group.element_at(y)))] {
                rows[x * words + y / 64] |= 1 << (y % 64);
            }
        }
    }
    let row = |x: usize| &rows[x * words..(x + 1) * words];
    let adjacent = |x: usize, y: usize| row(x)[y / 64] >> (y % 64) & 1 == 1;

    let k = row(0).iter().map(|w| w.count_ones() as u64).sum::<u64>();
    for x in 1..v {
        let degree = row(x).iter().map(|w| w.count_ones() as u64).sum::<u64>();
        if degree != k {
            return Err(SrgError::IrregularDegree {
                vertex: group.element_at(x),
                degree,
                expected: k,
            });
        }
    }
    if k == 0 {
        return Err(SrgError::Degenerate("no adjacent pairs"));
    }
    if k as usize == v - 1 {
        return Err(SrgError::Degenerate(
            "complete graph, no non-adjacent pairs",
        ));
    }

    let mut lambda = None;
    let mut mu = None;
    for x in 0..v {
        for y in (x + 1)..v {
            let common: u64 = row(x)
                .iter()
                .zip(row(y))
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            let adj = adjacent(x, y);
            let slot = if adj { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(common),
                Some(expected) if expected != common => {
                    return Err(SrgError::NotStronglyRegular {
                        x: group.element_at(x),
                        y: group.element_at(y),
                        adjacent: adj,
                        common,
                        expected,
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(PdsParams {
        v: v as u64,
        k,
        lambda: lambda.expect("k > 0"),
        mu: mu.expect("k < v - 1"),
    })
}

/// Checks that every nontrivial character sum over `D` is one of
/// `(β ± √Δ)/2`. Returns the first offending character and its sum.
pub fn check_character_spectrum(
    d: &CandidateSet,
    params: &PdsParams,
) -> Result<(), (CharacterIndex, Complex64)> {
    let targets = params.character_values();
    let group = &d.group;
    for chi in group.elements().skip(1).map(CharacterIndex::from) {
        let sum = group.character_sum(&chi, &d.members);
        let ok = sum.im.abs() < CHARACTER_TOLERANCE
            && targets
                .iter()
                .any(|t| (sum.re - t).abs() < CHARACTER_TOLERANCE);
        if !ok {
            return Err((chi, sum));
        }
    }
    Ok(())
}
