//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are carried around as packed integers `c0 + c1 p + ... + c_{m-1} p^{m-1}`
//! where `c_i` are the coefficients of the residue polynomial modulo the field's
//! modulus. Every field keeps full exponential/logarithm tables (and Zech
//! logarithms for odd-characteristic extension fields), so orders are capped at
//! 2^20.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order for which tables are built.
pub const TABLE_LIMIT: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("GF({p}^{m}) exceeds the table limit of 2^20 elements")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("field degree must be positive")]
    ZeroDegree,
    #[error("modulus is not irreducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("discrete logarithm of zero")]
    ZeroArgument,
    #[error("GF({order}) has no primitive {n}-th root of unity")]
    NoSuchRoot { n: u64, order: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AddKind {
    Prime,
    Binary,
    Zech,
}

/// A finite field GF(p^m) together with its lookup tables.
pub struct FieldSpec {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive: u32,
    kind: AddKind,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// Shared handle to an immutable [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

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

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// Polynomials over GF(p) as little-endian coefficient vectors; only used while
// building tables and testing irreducibility of candidate moduli.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn prime_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn prime_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    prime_poly_rem(&prod, modulus, p)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut k: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((k % p as u64) as u32);
        k /= p as u64;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Trial factorisation: no monic divisor of degree 1..=deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut cand = digits(k, p, d);
            cand.push(1);
            if prime_poly_rem(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn check_order(p: u64, m: u32) -> Result<u32, GfError> {
    if !is_prime(p) {
        return Err(GfError::NonPrimeCharacteristic(p));
    }
    if m == 0 {
        return Err(GfError::ZeroDegree);
    }
    let mut order: u64 = 1;
    for _ in 0..m {
        order = order.saturating_mul(p);
        if order > TABLE_LIMIT {
            return Err(GfError::FieldTooLarge { p, m });
        }
    }
    Ok(order as u32)
}

impl Field {
    /// GF(p^m) with the lowest irreducible monic modulus, ordering candidates by
    /// their packed lower coefficients.
    pub fn new(p: u64, m: u32) -> Result<Field, GfError> {
        check_order(p, m)?;
        let p32 = p as u32;
        let count = p.pow(m);
        for k in 0..count {
            let mut cand = digits(k, p32, m as usize);
            cand.push(1);
            if is_irreducible(&cand, p32) {
                return Ok(Field::build(p32, m, cand));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// GF(p^m) with an explicit modulus given by its `m` lower coefficients
    /// (the leading coefficient 1 is implied).
    pub fn with_modulus(p: u64, lower: &[u32]) -> Result<Field, GfError> {
        let m = lower.len() as u32;
        check_order(p, m)?;
        let p32 = p as u32;
        if lower.iter().any(|&c| c >= p32) {
            return Err(GfError::ReducibleModulus(p32));
        }
        let mut poly = lower.to_vec();
        poly.push(1);
        if !is_irreducible(&poly, p32) {
            return Err(GfError::ReducibleModulus(p32));
        }
        Ok(Field::build(p32, m, poly))
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Field {
        let order = p.pow(m);
        let q1 = order - 1;
        let one = vec![1u32];
        let primes = prime_divisors(q1 as u64);
        let power = |base: &[u32], mut e: u64| -> Vec<u32> {
            let mut acc = one.clone();
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = prime_poly_mulmod(&acc, &b, &modulus, p);
                }
                b = prime_poly_mulmod(&b, &b, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let primitive = (1..order)
            .find(|&cand| {
                let c = trim(digits(cand as u64, p, m as usize));
                primes.iter().all(|&r| power(&c, q1 as u64 / r) != one)
            })
            .expect("multiplicative group is cyclic");

        let g = trim(digits(primitive as u64, p, m as usize));
        let mut exp = Vec::with_capacity(q1 as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = one.clone();
        for i in 0..q1 {
            let mut padded = cur.clone();
            padded.resize(m as usize, 0);
            let packed = pack(&padded, p);
            exp.push(packed);
            log[packed as usize] = i;
            cur = prime_poly_mulmod(&cur, &g, &modulus, p);
        }

        let kind = if m == 1 {
            AddKind::Prime
        } else if p == 2 {
            AddKind::Binary
        } else {
            AddKind::Zech
        };
        let zech = if kind == AddKind::Zech {
            exp.iter()
                .map(|&x| {
                    // 1 + x only touches the constant coefficient.
                    let c0 = x % p;
                    let y = x - c0 + (c0 + 1) % p;
                    log[y as usize]
                })
                .collect()
        } else {
            Vec::new()
        };

        Field(Arc::new(FieldSpec {
            p,
            m,
            order,
            modulus,
            primitive,
            kind,
            exp,
            log,
            zech,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Monic modulus, little-endian, length `degree + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The fixed primitive element g, packed.
    pub fn primitive(&self) -> u32 {
        self.0.primitive
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn is_gf2(&self) -> bool {
        self.0.p == 2 && self.0.m == 1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = &*self.0;
        match s.kind {
            AddKind::Prime => {
                let t = a + b;
                if t >= s.p {
                    t - s.p
                } else {
                    t
                }
            }
            AddKind::Binary => a ^ b,
            AddKind::Zech => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let q1 = s.order - 1;
                let la = s.log[a as usize];
                let lb = s.log[b as usize];
                let n = if lb >= la { lb - la } else { lb + q1 - la };
                let z = s.zech[n as usize];
                if z == NO_LOG {
                    0
                } else {
                    let e = la + z;
                    s.exp[(if e >= q1 { e - q1 } else { e }) as usize]
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let s = &*self.0;
        match s.kind {
            AddKind::Prime => {
                if a == 0 {
                    0
                } else {
                    s.p - a
                }
            }
            AddKind::Binary => a,
            AddKind::Zech => {
                if a == 0 {
                    return 0;
                }
                let q1 = s.order - 1;
                let e = s.log[a as usize] + q1 / 2;
                s.exp[(if e >= q1 { e - q1 } else { e }) as usize]
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let s = &*self.0;
        if s.kind == AddKind::Prime {
            return (a as u64 * b as u64 % s.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let q1 = s.order - 1;
        let e = s.log[a as usize] + s.log[b as usize];
        s.exp[(if e >= q1 { e - q1 } else { e }) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        let s = &*self.0;
        assert!(a != 0, "inverse of zero in GF({})", s.order);
        let q1 = s.order - 1;
        let l = s.log[a as usize];
        s.exp[((q1 - l) % q1) as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let q1 = (self.0.order - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % q1)) % q1) as usize]
    }

    /// x ↦ x^(p^k).
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        let e = (self.0.p as u64).pow(k % self.0.m);
        self.pow(a, e)
    }

    /// Exponent e in [0, order-1) with g^e = a.
    pub fn dlog(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::ZeroArgument);
        }
        Ok(self.0.log[a as usize])
    }

    /// g^e for the fixed primitive element g.
    pub fn exp(&self, e: u64) -> u32 {
        let q1 = (self.0.order - 1) as u64;
        self.0.exp[(e % q1) as usize]
    }

    /// The fixed primitive n-th root of unity g^((order-1)/n).
    pub fn embed_root_of_unity(&self, n: u64) -> Result<u32, GfError> {
        let q1 = (self.0.order - 1) as u64;
        if n == 0 || !q1.is_multiple_of(n) {
            return Err(GfError::NoSuchRoot {
                n,
                order: self.0.order as u64,
            });
        }
        Ok(self.exp(q1 / n))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> u64 {
        let q1 = (self.0.order - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        q1 / gcd(l, q1)
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.0.p, self.0.m as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> u32 {
        let mut c = coeffs.to_vec();
        c.resize(self.0.m as usize, 0);
        pack(&c, self.0.p)
    }

    /// Whether `a` is a valid packed element of this field.
    pub fn contains(&self, a: u32) -> bool {
        a < self.0.order
    }

    pub fn elem(&self, value: u32) -> FieldElem {
        assert!(self.contains(value));
        FieldElem {
            field: self.clone(),
            value,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.order
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A field element tied to its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: u32,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn packed(&self) -> u32 {
        self.value
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, e))
    }

    pub fn inv(&self) -> FieldElem {
        self.field.elem(self.field.inv(self.value))
    }

    pub fn frobenius(&self, k: u32) -> FieldElem {
        self.field.elem(self.field.frobenius(self.value, k))
    }

    pub fn dlog(&self) -> Result<u32, GfError> {
        self.field.dlog(self.value)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl std::ops::$tr for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                assert!(self.field.same(&rhs.field), "field mismatch");
                let v = self.field.$op(self.value, rhs.value);
                FieldElem {
                    field: self.field,
                    value: v,
                }
            }
        }
    };
}

elem_binop!(Add, add, add);
elem_binop!(Sub, sub, sub);
elem_binop!(Mul, mul, mul);
elem_binop!(Div, div, div);

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let v = self.field.neg(self.value);
        FieldElem {
            field: self.field,
            value: v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            let mut m = 1;
            while p.pow(m) <= 512 {
                out.push(Field::new(p, m).unwrap());
                m += 1;
            }
        }
        out
    }

    #[test]
    fn make_examples() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        assert_eq!(f9.element_order(f9.primitive()), 8);
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert!(f2.is_gf2());
        // smallest m with 7^m = 1 mod 8, by scanning
        let m = (1..).find(|&m| 7u64.pow(m) % 8 == 1).unwrap();
        assert_eq!(m, 2);
        let f49 = Field::new(7, m).unwrap();
        assert_eq!(f49.order(), 49);
        assert_eq!(Field::new(4, 1).err(), Some(GfError::NonPrimeCharacteristic(4)));
        assert!(matches!(Field::new(2, 21), Err(GfError::FieldTooLarge { .. })));
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Field::new(5, 2).unwrap();
        let b = Field::new(5, 2).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.primitive(), b.primitive());
        assert_eq!(a, b);
        // a quadratic is irreducible iff it has no root; scan lower coefficients in packed order
        for p in [3u32, 5, 7] {
            let first = (0..p * p)
                .map(|k| (k % p, k / p))
                .find(|&(c0, c1)| (0..p).all(|x| (x * x + c1 * x + c0) % p != 0))
                .unwrap();
            assert_eq!(Field::new(p as u64, 2).unwrap().modulus(), &[first.0, first.1, 1]);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 2x + 1 = (x + 1)^2 over GF(3)
        assert_eq!(
            Field::with_modulus(3, &[1, 2]).err(),
            Some(GfError::ReducibleModulus(3))
        );
        assert!(Field::with_modulus(3, &[2, 0]).is_err());
        assert!(Field::with_modulus(3, &[2, 1]).is_ok());
    }

    #[test]
    fn fermat_exhaustive() {
        for f in small_fields() {
            for x in 1..f.order() {
                // repeated multiplication, not the table-backed pow
                let mut acc = 1;
                for _ in 0..f.order() - 1 {
                    acc = f.mul(acc, x);
                }
                assert_eq!(acc, 1, "{:?} x={}", f, x);
            }
        }
    }

    #[test]
    fn arithmetic_matches_polynomials() {
        for f in small_fields() {
            let p = f.characteristic();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..200 {
                let a = rng.random_range(0..f.order());
                let b = rng.random_range(0..f.order());
                let ca = f.coefficients(a);
                let cb = f.coefficients(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.add(a, b), f.from_coefficients(&sum));
                let prod = prime_poly_mulmod(&trim(ca), &trim(cb), f.modulus(), p);
                assert_eq!(f.mul(a, b), f.from_coefficients(&prod));
                assert_eq!(f.add(f.sub(a, b), b), a);
                if b != 0 {
                    assert_eq!(f.mul(f.div(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f9 = Field::new(3, 2).unwrap();
        for x in f9.elements() {
            assert_eq!(f9.frobenius(x, 1), f9.mul(x, f9.mul(x, x)));
            assert_eq!(f9.frobenius(f9.frobenius(x, 1), 1), x);
            assert_eq!(f9.frobenius(x, 2), x);
        }
        let f2 = Field::new(2, 1).unwrap();
        for k in 0..5 {
            assert_eq!(f2.frobenius(1, k), 1);
            assert_eq!(f2.frobenius(0, k), 0);
        }
        // norm of a generator of GF(25) lands in GF(5)^x, which has order 4
        let f25 = Field::new(5, 2).unwrap();
        let g = f25.primitive();
        let norm = f25.mul(g, f25.frobenius(g, 1));
        assert_eq!(norm, f25.exp(6));
        assert_eq!(f25.frobenius(norm, 1), norm);
        let mut acc = 1;
        for _ in 0..4 {
            acc = f25.mul(acc, norm);
        }
        assert_eq!(acc, 1);
    }

    #[test]
    fn frobenius_is_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in small_fields().into_iter().filter(|f| f.degree() > 1) {
            for _ in 0..1000 {
                let a = rng.random_range(0..f.order());
                let b = rng.random_range(0..f.order());
                let k = rng.random_range(0..f.degree());
                assert_eq!(
                    f.frobenius(f.add(a, b), k),
                    f.add(f.frobenius(a, k), f.frobenius(b, k))
                );
                assert_eq!(
                    f.frobenius(f.mul(a, b), k),
                    f.mul(f.frobenius(a, k), f.frobenius(b, k))
                );
            }
        }
    }

    #[test]
    fn dlog_examples() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.dlog(1), Ok(0));
        assert_eq!(f9.dlog(f9.primitive()), Ok(1));
        let mut x = 1;
        for _ in 0..5 {
            x = f9.mul(x, f9.primitive());
        }
        assert_eq!(f9.dlog(x), Ok(5));
        assert_eq!(f9.dlog(0), Err(GfError::ZeroArgument));
        for f in small_fields() {
            for e in 0..f.order() as u64 - 1 {
                assert_eq!(f.dlog(f.exp(e)).unwrap() as u64, e);
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let f49 = Field::new(7, 2).unwrap();
        let z = f49.embed_root_of_unity(8).unwrap();
        let mut acc = 1;
        for k in 1..=8 {
            acc = f49.mul(acc, z);
            assert_eq!(acc == 1, k == 8);
        }
        assert_eq!(Field::new(11, 1).unwrap().embed_root_of_unity(1), Ok(1));
        assert_eq!(
            Field::new(2, 1).unwrap().embed_root_of_unity(4),
            Err(GfError::NoSuchRoot { n: 4, order: 2 })
        );
        for f in small_fields() {
            let q1 = f.order() as u64 - 1;
            for n in (1..=q1).filter(|n| q1.is_multiple_of(*n)) {
                let z = f.embed_root_of_unity(n).unwrap();
                assert_eq!(f.element_order(z), n);
                assert_eq!(f.pow(z, n), 1);
            }
        }
    }

    #[test]
    fn elem_operators() {
        let f = Field::new(5, 2).unwrap();
        let a = f.elem(f.primitive());
        let b = a.clone() * a.clone();
        assert_eq!((b.clone() / a.clone()), a);
        assert_eq!(a.clone() - a.clone(), f.elem(0));
        assert_eq!(-(-a.clone()), a);
        assert_eq!(a.coefficients().len(), 2);
        assert_eq!(a.frobenius(2), a);
    }
}
