//! Finite fields `F_q = F_p[x]/(f)` for odd `p`, and the Paley construction.

use thiserror::Error;

use crate::arith::{is_prime, prime_power};
use crate::group::{AbelianGroup, GroupElement};
use crate::pds::CandidateSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is even; characteristic 2 is not supported")]
    EvenOrder(u64),
    #[error("the Paley construction needs q ≡ 1 (mod 4), got q = {0}")]
    NotOneModFour(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(usize),
    #[error("element has {got} coefficients, field degree is {expected}")]
    ShapeMismatch { expected: usize, got: usize },
}

/// Polynomial over `Z_p` as coefficients, lowest degree first.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

/// Remainder of `a` modulo `b` over `Z_p`; `b` nonzero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomials of `degree` over `Z_p`, ordered by the base-`p` value of
/// their lower coefficients (constant term least significant).
fn monic_polys(p: u64, degree: usize) -> impl Iterator<Item = Poly> {
    (0..p.pow(degree as u32)).map(move |mut n| {
        let mut c = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            c.push(n % p);
            n /= p;
        }
        c.push(1);
        c
    })
}

/// Irreducibility by trial division over all monics of degree `1..=deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let deg = match f.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|g| !poly_rem(&f, &g, p).is_empty()))
}

/// The first monic irreducible polynomial of `degree` over `Z_p` in the
/// enumeration order of [`monic_polys`].
pub fn find_irreducible(p: u64, degree: usize) -> Result<Poly, FieldError> {
    if degree == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    Ok(monic_polys(p, degree)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree"))
}

/// Element of `F_q`: `degree` residues mod `p`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    modulus: Poly,
}

impl FiniteField {
    pub fn new(p: u64, modulus: Poly) -> Result<Self, FieldError> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(degree));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(degree));
        }
        Ok(Self { p, degree, modulus })
    }

    /// `F_q` with the modulus chosen by [`find_irreducible`].
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        if q.is_multiple_of(2) {
            return Err(FieldError::EvenOrder(q));
        }
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, find_irreducible(p, e as usize)?)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.degree];
        c[0] = 1;
        FieldElement { coeffs: c }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.degree {
            return Err(FieldError::ShapeMismatch {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        Ok(FieldElement {
            coeffs: coeffs.into_iter().map(|c| c % self.p).collect(),
        })
    }

    /// All `q` elements, in lexicographic coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |mut n| {
            let mut c = vec![0; self.degree];
            for slot in c.iter_mut().rev() {
                *slot = n % self.p;
                n /= self.p;
            }
            FieldElement { coeffs: c }
        })
    }

    fn check(&self, a: &FieldElement) -> Result<(), FieldError> {
        if a.coeffs.len() != self.degree {
            return Err(FieldError::ShapeMismatch {
                expected: self.degree,
                got: a.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        })
    }

    /// Polynomial product reduced modulo `(modulus, p)`.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.degree - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, p);
        r.resize(self.degree, 0);
        Ok(FieldElement { coeffs: r })
    }

    /// Additive group `(Z_p)^degree` the field embeds into.
    pub fn additive_group(&self) -> AbelianGroup {
        AbelianGroup::elementary(self.p, self.degree).expect("p >= 3")
    }

    pub fn to_group_element(&self, a: &FieldElement) -> GroupElement {
        GroupElement::new(a.coeffs.clone())
    }
}

/// Nonzero squares of `F_q` as a subset of `(Z_p)^degree`.
pub fn paley_pds(q: u64) -> Result<CandidateSet, FieldError> {
    if q.is_multiple_of(2) {
        return Err(FieldError::EvenOrder(q));
    }
    prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    if q % 4 != 1 {
        return Err(FieldError::NotOneModFour(q));
    }
    let field = FiniteField::with_order(q)?;
    let group = field.additive_group();
    let zero = field.zero();
    let squares = field
        .elements()
        .filter(|a| *a != zero)
        .map(|a| field.to_group_element(&field.mul(&a, &a).expect("same field")));
    Ok(CandidateSet::new(group, squares).expect("coefficients are residues"))
}
