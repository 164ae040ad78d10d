//! Elements of the cyclotomic fields Q(zeta_N), represented canonically as
//! residues in Q[X]/Phi_N(X) with zeta_N = e^{2 pi i / N}.
//!
//! The residue-ring representation gives unique coefficient vectors, so
//! equality is an exact coefficient comparison after embedding both operands
//! into a common order (the lcm of the operand orders). Inverses come from
//! the extended Euclidean algorithm against Phi_N, which is irreducible
//! over Q.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{rat_int, Rational};
use super::ExactError;

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    divs
}

/// Coefficients of the N-th cyclotomic polynomial Phi_N, low degree first,
/// monic of degree phi(N). Computed by dividing X^N - 1 by Phi_d over all
/// proper divisors d of N; the division is exact over Z.
pub fn phi_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut quotient: Vec<BigInt> = vec![BigInt::zero(); (n + 1) as usize];
    quotient[0] = -BigInt::one();
    quotient[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = field_data(d).modulus_int.clone();
        quotient = int_poly_div_exact(&quotient, &phi_d);
    }
    quotient
}

/// Exact division of integer polynomials (the divisor must be monic and the
/// division exact, as is the case for cyclotomic factors of X^N - 1).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact poly division");
    quot
}

struct FieldData {
    phi: usize,
    /// Phi_N with integer coefficients, low first, monic.
    modulus_int: Vec<BigInt>,
    /// Phi_N with rational coefficients, for reduction and gcd work.
    modulus: Vec<Rational>,
}

/// Per-order field data, memoized. The cache is append-only; entries are
/// immutable once inserted, so this does not affect the purity of any
/// operation.
fn field_data(n: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(data) = cache.read().unwrap().get(&n) {
        return data.clone();
    }
    let modulus_int = phi_poly(n);
    let modulus: Vec<Rational> = modulus_int
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let data = Arc::new(FieldData {
        phi: euler_phi(n) as usize,
        modulus_int,
        modulus,
    });
    cache.write().unwrap().entry(n).or_insert(data).clone()
}

/// An element of Q(zeta_N): `coeffs[j]` is the coefficient of zeta_N^j in the
/// canonical residue modulo Phi_N, so `coeffs.len() == phi(N)`.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        let phi = field_data(order).phi;
        Cyclotomic {
            order,
            coeffs: vec![Rational::zero(); phi.max(1)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational_at(Rational::one(), order)
    }

    /// A rational constant, living in Q(zeta_1) = Q.
    pub fn from_rational(r: Rational) -> Self {
        Self::from_rational_at(r, 1)
    }

    pub fn from_rational_at(r: Rational, order: u32) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = r;
        x
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// zeta_N^k for any integer k (reduced mod N).
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        Cyclotomic::from_poly(order, coeffs)
    }

    /// Build from an arbitrary-degree polynomial in zeta_N, reducing mod Phi_N.
    pub fn from_poly(order: u32, coeffs: Vec<Rational>) -> Self {
        let data = field_data(order);
        let coeffs = reduce_mod(coeffs, &data.modulus, data.phi);
        Cyclotomic { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reinterpret in Q(zeta_M) for N | M, preserving the complex value via
    /// zeta_N = zeta_M^(M/N). Round-tripping through a larger order is the
    /// identity on coefficient vectors.
    pub fn embed(&self, want: u32) -> Result<Cyclotomic, ExactError> {
        if want == self.order {
            return Ok(self.clone());
        }
        if want % self.order != 0 {
            return Err(ExactError::OrderMismatch {
                have: self.order,
                want,
            });
        }
        let stride = (want / self.order) as usize;
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * stride + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[j * stride] = c.clone();
            }
        }
        Ok(Cyclotomic::from_poly(want, coeffs))
    }

    fn promote(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic, u32) {
        let order = lcm_u32(self.order, other.order);
        (
            self.embed(order).expect("lcm embedding"),
            other.embed(order).expect("lcm embedding"),
            order,
        )
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b, order) = self.promote(other);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        Cyclotomic { order, coeffs }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b, order) = self.promote(other);
        let mut conv = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_poly(order, conv)
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_N; errors on zero.
    pub fn inv(&self) -> Result<Cyclotomic, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let data = field_data(self.order);
        let inv = poly_modular_inverse(&self.coeffs, &data.modulus)
            .ok_or(ExactError::DivisionByZero)?;
        Ok(Cyclotomic::from_poly(self.order, inv))
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, exp: i64) -> Result<Cyclotomic, ExactError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Cyclotomic::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Numeric value as (re, im). Display and diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        use std::f64::consts::TAU;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = bigint_to_f64(c.numer()) / bigint_to_f64(c.denom());
            let theta = TAU * j as f64 / self.order as f64;
            re += cf * theta.cos();
            im += cf * theta.sin();
        }
        (re, im)
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Reduce a polynomial modulo the monic `modulus`, truncating to length `phi`.
fn reduce_mod(mut coeffs: Vec<Rational>, modulus: &[Rational], phi: usize) -> Vec<Rational> {
    let deg_m = modulus.len() - 1;
    while coeffs.len() > deg_m {
        let top = coeffs.len() - 1;
        let lead = coeffs.pop().unwrap();
        if !lead.is_zero() {
            let shift = top - deg_m;
            for (j, m) in modulus.iter().take(deg_m).enumerate() {
                if !m.is_zero() {
                    let delta = &lead * m;
                    coeffs[shift + j] -= delta;
                }
            }
        }
    }
    coeffs.resize(phi.max(1), Rational::zero());
    coeffs
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Extended Euclid in Q[X]: returns u with u*a = 1 (mod m), provided
/// gcd(a, m) = 1 (always true for nonzero a against an irreducible m).
fn poly_modular_inverse(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    // Invariants: r0 = s0*a (mod m), r1 = s1*a (mod m).
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    loop {
        let d1 = match poly_degree(&r1) {
            Some(d) => d,
            None => return None,
        };
        if d1 == 0 {
            let c = r1[0].clone();
            return Some(s1.iter().map(|x| x / &c).collect());
        }
        // r0 = q*r1 + rem
        let d0 = poly_degree(&r0).unwrap_or(0);
        if d0 < d1 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            continue;
        }
        let mut rem = r0.clone();
        let mut q = vec![Rational::zero(); d0 - d1 + 1];
        for k in (0..=d0 - d1).rev() {
            let lead = rem[k + d1].clone() / &r1[d1];
            if !lead.is_zero() {
                for j in 0..=d1 {
                    let delta = &lead * &r1[j];
                    rem[k + j] -= delta;
                }
            }
            q[k] = lead;
        }
        // s_next = s0 - q*s1
        let mut s_next = s0.clone();
        s_next.resize(s_next.len().max(q.len() + s1.len() - 1), Rational::zero());
        for (i, qc) in q.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            for (j, sc) in s1.iter().enumerate() {
                let delta = qc * sc;
                s_next[i + j] -= delta;
            }
        }
        r0 = r1;
        s0 = s1;
        r1 = rem;
        s1 = s_next;
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.promote(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(N={};", self.order)?;
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*z^{}", c, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
