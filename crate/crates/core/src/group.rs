//! Finite abelian groups in primary decomposition.
//!
//! A group is a direct product of cyclic groups of prime-power order, kept in
//! canonical order (sorted by prime, then exponent). Elements are residue
//! tuples; every group also has a dense indexing `0..v` that follows the
//! lexicographic order of coordinates, which is what the verifier and the
//! search use internally.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{factorize, gcd, lcm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group spec `{0}`: expected terms like Z9 or Z3^2 joined by `x`")]
    MalformedSpec(String),
    #[error("cyclic factor Z{0} is too small (factors must be at least 2)")]
    FactorTooSmall(u64),
    #[error("malformed element `{0}`: expected a residue tuple like (1,0,2)")]
    MalformedElement(String),
    #[error("element has {got} coordinates but the group has {expected} factors")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} is out of range for factor Z{factor}")]
    CoordinateOutOfRange {
        index: usize,
        value: u64,
        factor: u64,
    },
    #[error("operation is undefined for the identity element")]
    IdentityElement,
    #[error("prime {0} does not divide the group order")]
    PrimeNotDividing(u64),
    #[error("element {element} is not supported on the coordinates of {what}")]
    WrongSupport { element: String, what: &'static str },
    #[error("element {0} does not have prime-power order")]
    NotPrimePowerOrder(String),
}

/// A residue tuple, one coordinate per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        Self { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::MalformedElement(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(GroupElement::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(GroupElement::new)
    }
}

/// Index of a character `chi`; evaluates as `exp(2πi Σ chi_j g_j / n_j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterIndex {
    pub coords: Vec<u64>,
}

impl From<GroupElement> for CharacterIndex {
    fn from(g: GroupElement) -> Self {
        Self { coords: g.coords }
    }
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_r}` with every `n_j` a prime power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    factor_primes: Vec<u64>,
    strides: Vec<usize>,
    order: u64,
}

impl AbelianGroup {
    /// Builds the group from arbitrary cyclic orders, splitting each one into
    /// its prime-power parts.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        let mut parts = Vec::new();
        for &n in orders {
            if n < 2 {
                return Err(GroupError::FactorTooSmall(n));
            }
            for (p, e) in factorize(n) {
                parts.push((p, e));
            }
        }
        parts.sort_unstable();
        let factors: Vec<u64> = parts.iter().map(|&(p, e)| p.pow(e)).collect();
        let factor_primes: Vec<u64> = parts.iter().map(|&(p, _)| p).collect();
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1] as usize;
        }
        let order = factors.iter().product();
        Ok(Self {
            factors,
            factor_primes,
            strides,
            order,
        })
    }

    /// Parses `Z<n>` terms joined by `x`, each with an optional `^<k>` repetition.
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::MalformedSpec(spec.to_string());
        let spec_trim = spec.trim();
        if spec_trim.is_empty() {
            return Err(bad());
        }
        let mut orders = Vec::new();
        for term in spec_trim.split('x') {
            let body = term.trim().strip_prefix('Z').ok_or_else(bad)?;
            let (base, reps) = match body.split_once('^') {
                Some((b, r)) => (b, r.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            if reps == 0 || base.is_empty() || !base.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let n = base.parse::<u64>().map_err(|_| bad())?;
            orders.extend(std::iter::repeat_n(n, reps));
        }
        Self::from_cyclic_orders(&orders)
    }

    /// The elementary abelian group `(Z_p)^rank`.
    pub fn elementary(p: u64, rank: usize) -> Result<Self, GroupError> {
        Self::from_cyclic_orders(&vec![p; rank])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Prime of each cyclic factor, parallel to [`factors`](Self::factors).
    pub fn factor_primes(&self) -> &[u64] {
        &self.factor_primes
    }

    /// Distinct primes dividing the order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps = self.factor_primes.clone();
        ps.dedup();
        ps
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.coords.len() != self.rank() {
            return Err(GroupError::ShapeMismatch {
                expected: self.rank(),
                got: g.coords.len(),
            });
        }
        for (index, (&value, &factor)) in g.coords.iter().zip(&self.factors).enumerate() {
            if value >= factor {
                return Err(GroupError::CoordinateOutOfRange {
                    index,
                    value,
                    factor,
                });
            }
        }
        Ok(())
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let g: GroupElement = s.parse()?;
        self.check(&g)?;
        Ok(g)
    }

    /// Dense index of `g`; follows lexicographic coordinate order.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let coords = self
            .strides
            .iter()
            .map(|&s| {
                let c = idx / s;
                idx %= s;
                c as u64
            })
            .collect();
        GroupElement::new(coords)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.zip_coords(a, b, |x, y, n| (x + y) % n)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.zip_coords(a, b, |x, y, n| (x + n - y) % n)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    /// `s·g`, the `s`-th power in multiplicative notation.
    pub fn scale(&self, s: u64, g: &GroupElement) -> GroupElement {
        GroupElement::new(
            g.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| ((s % n) * x) % n)
                .collect(),
        )
    }

    fn zip_coords(
        &self,
        a: &GroupElement,
        b: &GroupElement,
        op: impl Fn(u64, u64, u64) -> u64,
    ) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| op(x, y, n))
                .collect(),
        )
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.add(&self.element_at(a), &self.element_at(b)))
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.sub(&self.element_at(a), &self.element_at(b)))
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.index_of(&self.neg(&self.element_at(a)))
    }

    /// Order of `g`: the lcm over coordinates of `n_j / gcd(g_j, n_j)`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.check(g)?;
        Ok(g.coords
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&c, &n)| lcm(acc, n / gcd(c, n))))
    }

    /// `{s·g : 1 <= s < o(g), gcd(s, o(g)) = 1}`.
    pub fn power_class(&self, g: &GroupElement) -> Result<BTreeSet<GroupElement>, GroupError> {
        let ord = self.element_order(g)?;
        if ord == 1 {
            return Err(GroupError::IdentityElement);
        }
        Ok((1..ord)
            .filter(|&s| gcd(s, ord) == 1)
            .map(|s| self.scale(s, g))
            .collect())
    }

    /// Partition of the nonidentity elements into power classes, ordered by
    /// smallest member.
    pub fn power_class_partition(&self) -> Vec<BTreeSet<GroupElement>> {
        let v = self.order as usize;
        let mut seen = vec![false; v];
        seen[0] = true;
        let mut classes = Vec::new();
        for idx in 1..v {
            if seen[idx] {
                continue;
            }
            let class = self
                .power_class(&self.element_at(idx))
                .expect("nonidentity element");
            for g in &class {
                seen[self.index_of(g)] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// The unique subgroup whose order is the full `primes`-part of `v`.
    pub fn hall_subgroup(&self, primes: &BTreeSet<u64>) -> Result<HallSubgroup, GroupError> {
        if let Some(&p) = primes
            .iter()
            .find(|p| !self.order.is_multiple_of(**p) || **p < 2)
        {
            return Err(GroupError::PrimeNotDividing(p));
        }
        let coords: Vec<usize> = (0..self.rank())
            .filter(|&j| primes.contains(&self.factor_primes[j]))
            .collect();
        let order = coords.iter().map(|&j| self.factors[j]).product();
        Ok(HallSubgroup {
            primes: primes.clone(),
            order,
            coords,
        })
    }

    /// `exp(2πi Σ_j chi_j g_j / n_j)`.
    pub fn character_value(
        &self,
        chi: &CharacterIndex,
        g: &GroupElement,
    ) -> Result<Complex64, GroupError> {
        self.check(g)?;
        if chi.coords.len() != self.rank() {
            return Err(GroupError::ShapeMismatch {
                expected: self.rank(),
                got: chi.coords.len(),
            });
        }
        Ok(self.character_value_unchecked(chi, g))
    }

    pub(crate) fn character_value_unchecked(
        &self,
        chi: &CharacterIndex,
        g: &GroupElement,
    ) -> Complex64 {
        let phase: f64 = chi
            .coords
            .iter()
            .zip(&g.coords)
            .zip(&self.factors)
            .map(|((&a, &b), &n)| ((a % n) * b % n) as f64 / n as f64)
            .sum();
        Complex64::from_polar(1.0, std::f64::consts::TAU * phase.fract())
    }

    /// Sum of `chi` over a set of elements.
    pub fn character_sum<'a>(
        &self,
        chi: &CharacterIndex,
        members: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Complex64 {
        members
            .into_iter()
            .map(|g| self.character_value_unchecked(chi, g))
            .sum()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let n = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&m| m == n).count();
            if !first {
                f.write_str("x")?;
            }
            first = false;
            if run > 1 {
                write!(f, "Z{n}^{run}")?;
            } else {
                write!(f, "Z{n}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// A Hall subgroup, realised as the coordinates whose prime lies in `primes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallSubgroup {
    pub primes: BTreeSet<u64>,
    pub order: u64,
    /// Positions of the selected cyclic factors.
    pub coords: Vec<usize>,
}

impl HallSubgroup {
    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords
            .iter()
            .enumerate()
            .all(|(j, &c)| c == 0 || self.coords.contains(&j))
    }

    pub fn index(&self, group: &AbelianGroup) -> u64 {
        group.order() / self.order
    }

    /// Whether `[G : N]` is odd, the extra hypothesis of the subgroup restriction.
    pub fn index_is_odd(&self, group: &AbelianGroup) -> bool {
        self.index(group) % 2 == 1
    }

    /// The Hall subgroup on the remaining primes.
    pub fn complement(&self, group: &AbelianGroup) -> HallSubgroup {
        let primes = group
            .primes()
            .into_iter()
            .filter(|p| !self.primes.contains(p))
            .collect();
        group.hall_subgroup(&primes).expect("primes divide v")
    }

    /// Splits `g` into its component in this subgroup and the complementary component.
    pub fn split(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        let mut inside = g.clone();
        let mut outside = g.clone();
        for j in 0..g.coords.len() {
            if self.coords.contains(&j) {
                outside.coords[j] = 0;
            } else {
                inside.coords[j] = 0;
            }
        }
        (inside, outside)
    }

    pub fn elements<'a>(
        &'a self,
        group: &'a AbelianGroup,
    ) -> impl Iterator<Item = GroupElement> + 'a {
        group.elements().filter(move |g| self.contains(g))
    }
}
