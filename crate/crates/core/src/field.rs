//! Arithmetic in GF(p^k) over a polynomial basis.
//!
//! An element is stored as the integer `c0 + c1*p + ... + c(k-1)*p^(k-1)`
//! where `c0..c(k-1)` are its coefficients (constant term first). That integer
//! is also the element's position in [`Field::elements`], so the enumeration
//! order is lexicographic on the coefficient vector read from the highest
//! degree down, with zero first.
//!
//! Multiplication goes through log/antilog tables built from a primitive
//! element; the tables themselves are filled by schoolbook polynomial
//! multiplication reduced modulo the field's modulus.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} is too large")]
    TooLarge { p: u32, k: u32 },
    #[error("modulus {0:?} is not a monic polynomial of the requested degree with coefficients below p")]
    InvalidModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible")]
    ReduciblePolynomial(Vec<u32>),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {0} does not belong to a field of order {1}")]
    FieldMismatch(u32, u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("malformed field descriptor `{0}`")]
    BadDescriptor(String),
}

/// Largest field order supported (tables are `O(q)`).
pub const MAX_ORDER: u64 = 1 << 24;

/// An element of some [`Field`]. Carries no reference to its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Element at position `index` of the field enumeration.
    pub const fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// GF(p^k) with a fixed irreducible modulus.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for i in 0..2(q-1); log[0] unused.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^k). Without a modulus the lexicographically smallest monic
    /// irreducible of degree `k` is used (coefficients compared constant term
    /// first).
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::TooLarge { p, k })? as u32;
        let modulus = match modulus {
            Some(m) => {
                let monic = m.len() == k as usize + 1
                    && m[k as usize] == 1
                    && m.iter().all(|&c| c < p);
                if !monic {
                    return Err(FieldError::InvalidModulus(m));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::ReduciblePolynomial(m));
                }
                m
            }
            None => smallest_irreducible(p, k),
        };
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// GF(q) for a prime power `q` with the default modulus.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, k, None)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        if q == 2 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        let generator = (2..self.q)
            .find(|&g| self.poly_order(g) == self.q - 1)
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut acc = 1u32;
        for i in 0..q - 1 {
            exp[i] = acc;
            exp[i + q - 1] = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_poly(acc, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn poly_order(&self, g: u32) -> u32 {
        let mut acc = g;
        let mut order = 1;
        while acc != 1 {
            acc = self.mul_poly(acc, g);
            order += 1;
            if order > self.q {
                return 0;
            }
        }
        order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; the last entry is 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q
    }

    /// All `q` elements, zero first, in coefficient-lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Length-`k` coefficient vector, constant term first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut rest = a.0;
        (0..self.k)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    /// Element with the given coefficients (constant term first); missing
    /// high coefficients are zero, entries are reduced mod p, and vectors
    /// longer than `k` are reduced modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let mut poly: Vec<u32> = coeffs.iter().map(|&c| c % self.p).collect();
        poly_rem_in_place(&mut poly, &self.modulus, self.p);
        let mut index = 0u32;
        for &c in poly.iter().take(self.k as usize).rev() {
            index = index * self.p + c;
        }
        FieldElement(index)
    }

    /// The image of an integer under `Z -> GF(p) -> GF(q)`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// Checked arithmetic; `b` is ignored by the unary ops.
    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        for e in [a, b] {
            if !self.contains(e) {
                return Err(FieldError::FieldMismatch(e.0, self.q));
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a).ok_or(FieldError::ZeroInverse)?,
        })
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.k == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize];
        let i = if l == 0 { 0 } else { self.q - 1 - l };
        Some(FieldElement(self.exp[i as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64 * (e % (self.q as u64 - 1));
        FieldElement(self.exp[(l % (self.q as u64 - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some((self.q - 1) / gcd(l, self.q - 1))
    }

    /// Reference multiplication: schoolbook product reduced by the modulus.
    /// Independent of the log tables.
    pub fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let ca = self.coeffs(FieldElement(a));
        let cb = self.coeffs(FieldElement(b));
        let mut prod = vec![0u32; ca.len() + cb.len()];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.from_coeffs(&prod).0
    }

    /// Evaluates a polynomial with coefficients in this field (constant
    /// term first) at `x`.
    pub fn eval(&self, poly: &[FieldElement], x: FieldElement) -> FieldElement {
        poly.iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `p^k:c0,c1,...,ck`
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        write!(f, "{}^{}:{}", self.p, self.k, coeffs.join(","))
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadDescriptor(s.to_string());
        let (head, tail) = s.trim().split_once(':').ok_or_else(bad)?;
        let (p, k) = head.split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        let modulus = tail
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Field::new(p, k, Some(modulus))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and small.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Replaces `poly` by its remainder modulo `divisor` over GF(p).
fn poly_rem_in_place(poly: &mut Vec<u32>, divisor: &[u32], p: u32) {
    let mut divisor = divisor.to_vec();
    trim(&mut divisor);
    trim(poly);
    let d = divisor.len() - 1;
    let lead_inv = inv_mod_p(divisor[d], p);
    while poly.len() > d {
        let top = poly.len() - 1;
        let factor = poly[top] * lead_inv % p;
        if factor != 0 {
            for (i, &c) in divisor.iter().enumerate() {
                let at = top - d + i;
                poly[at] = (poly[at] + p - factor * c % p) % p;
            }
        }
        trim(poly);
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    trim(&mut f);
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                divisor.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            divisor.push(1);
            let mut r = f.clone();
            poly_rem_in_place(&mut r, &divisor, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k` over GF(p), comparing coefficient
/// vectors constant term first.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    // Lexicographic with c0 most significant: iterate digit vectors so that
    // c0 varies slowest.
    for code in 0..count {
        let mut poly = vec![0u32; k as usize + 1];
        let mut rest = code;
        for i in (0..k as usize).rev() {
            poly[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        poly[k as usize] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
