//! Univariate polynomials over a [`Field`] and their factorisation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::Field;

/// Dense polynomial, little-endian coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<u32>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![1])
    }

    /// The monomial x.
    pub fn x() -> Poly {
        Poly(vec![0, 1])
    }

    pub fn constant(c: u32) -> Poly {
        Poly(vec![c]).trimmed()
    }

    pub fn from_coeffs(c: Vec<u32>) -> Poly {
        Poly(c).trimmed()
    }

    fn trimmed(mut self) -> Poly {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn lead(&self) -> u32 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            out.push(f.add(a, b));
        }
        Poly(out).trimmed()
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        self.add(&other.scale(f.neg(1), f), f)
    }

    pub fn scale(&self, c: u32, f: &Field) -> Poly {
        Poly(self.0.iter().map(|&a| f.mul(a, c)).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly(out).trimmed()
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn divrem(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        let dd = d.deg();
        let inv = f.inv(d.lead());
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0u32; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c == 0 {
                continue;
            }
            q[top - dd] = c;
            let shift = top - dd;
            for (i, &di) in d.0.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly(q).trimmed(), Poly(r).trimmed())
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.divrem(d, f).1
    }

    pub fn div_exact(&self, d: &Poly, f: &Field) -> Poly {
        let (q, r) = self.divrem(d, f);
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        let out: Vec<u32> = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly(out).trimmed()
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly, f: &Field) -> Poly {
        self.mul(other, f).rem(m, f)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly, f: &Field) -> Poly {
        let mut acc = Poly::one().rem(m, f);
        let mut base = self.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, f);
            }
            base = base.mulmod(&base, m, f);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u32, f: &Field) -> u32 {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Distinct monic irreducible factors, sorted by degree then coefficients.
    pub fn irreducible_factors(&self, f: &Field) -> Vec<Poly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        for part in squarefree_parts(&self.monic(f), f) {
            for (g, d) in distinct_degree(&part, f) {
                equal_degree(&g, d, f, &mut out);
            }
        }
        out.sort_by(|a, b| (a.deg(), &a.0).cmp(&(b.deg(), &b.0)));
        out.dedup();
        out
    }
}

/// Squarefree monic polynomials whose product has the same roots as `f`.
fn squarefree_parts(f: &Poly, fld: &Field) -> Vec<Poly> {
    let p = fld.characteristic() as usize;
    let mut out = Vec::new();
    let d = f.derivative(fld);
    if d.is_zero() {
        // f is a p-th power: take the p-th root coefficientwise
        let root = pth_root(f, fld, p);
        return squarefree_parts(&root, fld);
    }
    let c = f.gcd(&d, fld);
    let w = f.div_exact(&c, fld);
    if w.deg() > 0 {
        out.push(w.monic(fld));
    }
    if c.deg() > 0 {
        // every root of c is a root of f; recurse for the repeated part
        let rest = squarefree_parts(&c, fld);
        out.extend(rest);
    }
    out
}

fn pth_root(f: &Poly, fld: &Field, p: usize) -> Poly {
    let m = fld.degree();
    let coeffs: Vec<u32> = f
        .0
        .iter()
        .step_by(p)
        .map(|&c| fld.frobenius(c, m - 1))
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Distinct-degree factorisation of a squarefree monic polynomial.
fn distinct_degree(f: &Poly, fld: &Field) -> Vec<(Poly, usize)> {
    let q = fld.order() as u64;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x();
    let mut h = x.rem(&rest, fld);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest, fld);
        let g = h.sub(&x, fld).gcd(&rest, fld);
        if g.deg() > 0 {
            rest = rest.div_exact(&g, fld);
            h = h.rem(&rest, fld);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d` into its factors.
fn equal_degree(g: &Poly, d: usize, fld: &Field, out: &mut Vec<Poly>) {
    let n = g.deg();
    if n == d {
        out.push(g.monic(fld));
        return;
    }
    let q = fld.order() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9 ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = Poly::from_coeffs((0..n).map(|_| rng.random_range(0..fld.order())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if fld.characteristic() == 2 {
            // absolute trace a + a^2 + ... + a^(2^(k d - 1))
            let steps = fld.degree() as usize * d;
            let mut t = a.rem(g, fld);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mulmod(&t, g, fld);
                acc = acc.add(&t, fld);
            }
            acc
        } else {
            // a^((q^d - 1)/2) via the norm a^(1 + q + ... + q^(d-1))
            let mut t = a.rem(g, fld);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.powmod(q, g, fld);
                acc = acc.mulmod(&t, g, fld);
            }
            acc.powmod((q - 1) / 2, g, fld).sub(&Poly::one(), fld)
        };
        let h = b.gcd(g, fld);
        if h.deg() > 0 && h.deg() < n {
            let other = g.div_exact(&h, fld);
            equal_degree(&h, d, fld, out);
            equal_degree(&other, d, fld, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[Poly], f: &Field) -> Poly {
        fs.iter().fold(Poly::one(), |acc, g| acc.mul(g, f))
    }

    /// Brute-force irreducibility: no monic factor of degree <= n/2.
    fn brute_irreducible(g: &Poly, f: &Field) -> bool {
        let n = g.deg();
        let q = f.order() as u64;
        for d in 1..=n / 2 {
            for k in 0..q.pow(d as u32) {
                let mut c: Vec<u32> = (0..d).map(|i| ((k / q.pow(i as u32)) % q) as u32).collect();
                c.push(1);
                if g.rem(&Poly(c), f).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn divrem_roundtrip() {
        let f = Field::new(7, 1).unwrap();
        let a = Poly::from_coeffs(vec![3, 0, 5, 1, 6]);
        let b = Poly::from_coeffs(vec![2, 1, 1]);
        let (q, r) = a.divrem(&b, &f);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn factors_of_x_pow_q_minus_x() {
        // x^q - x is the product of all monic linear polynomials
        for (p, m) in [(2u64, 1u32), (3, 1), (3, 2), (5, 1), (2, 3)] {
            let f = Field::new(p, m).unwrap();
            let q = f.order() as usize;
            let mut c = vec![0u32; q + 1];
            c[q] = 1;
            c[1] = f.neg(1);
            let g = Poly::from_coeffs(c);
            let fs = g.irreducible_factors(&f);
            assert_eq!(fs.len(), q);
            assert!(fs.iter().all(|h| h.deg() == 1));
            assert_eq!(prod(&fs, &f), g);
        }
    }

    #[test]
    fn random_products_refactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, m) in [(2u64, 1u32), (3, 1), (3, 2), (7, 1), (2, 2), (5, 2)] {
            let f = Field::new(p, m).unwrap();
            for _ in 0..20 {
                let n = rng.random_range(1..10);
                let mut c: Vec<u32> = (0..n).map(|_| rng.random_range(0..f.order())).collect();
                c.push(1);
                let g = Poly(c);
                let fs = g.irreducible_factors(&f);
                for h in &fs {
                    assert!(brute_irreducible(h, &f), "{:?} over {:?}", h, f);
                    assert!(g.rem(h, &f).is_zero());
                }
                // every irreducible divisor found by brute force is listed
                let sq = g.mul(&g, &f);
                let fs2 = sq.irreducible_factors(&f);
                assert_eq!(fs, fs2);
                // product of the factors with multiplicity recovers g
                let mut rest = g.clone();
                for h in &fs {
                    while rest.rem(h, &f).is_zero() {
                        rest = rest.div_exact(h, &f);
                    }
                }
                assert_eq!(rest.deg(), 0);
            }
        }
    }

    #[test]
    fn eval_and_gcd() {
        let f = Field::new(5, 1).unwrap();
        let a = Poly::from_coeffs(vec![4, 0, 1]); // x^2 - 1
        let b = Poly::from_coeffs(vec![1, 1]); // x + 1
        assert_eq!(a.eval(1, &f), 0);
        assert_eq!(a.gcd(&b, &f), b);
        assert_eq!(a.derivative(&f), Poly::from_coeffs(vec![0, 2]));
    }
}
