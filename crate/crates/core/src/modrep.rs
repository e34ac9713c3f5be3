//! Torus characters, principal series modules i_B^G(χ) realised on the flag
//! basis, and the FMOD text format.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::gf::{gcd, Field, GfError};
use crate::grp::{FlagTable, GroupSpec};
use crate::matrix::{Matrix, Row};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModrepError {
    #[error("ell = {0} equals the characteristic of the group's field")]
    BadPrime(u32),
    #[error("character and group do not match: {0}")]
    FieldMismatch(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid module: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Exponent e projected onto the prime-to-ell part of Z/n: the unique e' with
/// e' = e modulo the prime-to-ell part of n and e' = 0 modulo its ell-part.
pub fn project_prime_to(e: u64, n: u64, ell: u64) -> u64 {
    let mut ell_part = 1;
    let mut rest = n;
    while rest.is_multiple_of(ell) {
        rest /= ell;
        ell_part *= ell;
    }
    if rest == 1 {
        return 0;
    }
    let inv = mod_inverse(ell_part % rest, rest);
    let idem = (ell_part as u128 * inv as u128 % n as u128) as u64;
    ((e % n) as u128 * idem as u128 % n as u128) as u64
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(n as i128) as u64
}

/// Smallest m with every order dividing ell^m - 1.
pub fn splitting_degree(ell: u64, orders: &[u64]) -> u32 {
    let l = orders.iter().fold(1, |acc, &o| acc / gcd(acc, o) * o);
    let mut m = 1;
    let mut pw = ell % l;
    while pw != 1 % l {
        pw = pw * ell % l;
        m += 1;
    }
    m
}

/// A character of the diagonal torus: χ₁ on GF(q0²)^× and χ₂ on the norm-one
/// subgroup, both given as exponents relative to the fixed primitive element.
#[derive(Clone, Debug)]
pub struct TorusCharacter {
    q0: u32,
    ell: u32,
    raw: (u64, u64),
    e1: u64,
    e2: u64,
    ord1: u64,
    ord2: u64,
    coeff: Field,
    zeta1: u32,
    zeta2: u32,
}

impl TorusCharacter {
    pub fn q0(&self) -> u32 {
        self.q0
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Exponent of χ₁ after projection to the prime-to-ell part.
    pub fn e1(&self) -> u64 {
        self.e1
    }

    pub fn e2(&self) -> u64 {
        self.e2
    }

    /// Exponents as supplied, before projection.
    pub fn raw_exponents(&self) -> (u64, u64) {
        self.raw
    }

    pub fn orders(&self) -> (u64, u64) {
        (self.ord1, self.ord2)
    }

    pub fn coeff(&self) -> &Field {
        &self.coeff
    }

    pub fn is_trivial(&self) -> bool {
        self.e1 == 0 && self.e2 == 0
    }

    /// Regular iff χ₁^(q0+1) is nontrivial.
    pub fn is_regular(&self) -> bool {
        !self.e1.is_multiple_of(self.q0 as u64 - 1)
    }

    /// χ₁(g^k).
    pub fn chi1_power(&self, k: u64) -> u32 {
        let n = self.q0 as u64 * self.q0 as u64 - 1;
        let step = self.e1 / gcd(self.e1, n);
        self.coeff.pow(self.zeta1, step * (k % self.ord1))
    }

    /// χ₂(h^k) for the generator h = g^(q0-1) of the norm-one group.
    pub fn chi2_power(&self, k: u64) -> u32 {
        let n = self.q0 as u64 + 1;
        let step = self.e2 / gcd(self.e2, n);
        self.coeff.pow(self.zeta2, step * (k % self.ord2))
    }

    /// Value on the diagonal torus element with entries `diag`, which must be
    /// the diagonal of an element of the group over `entry`:
    /// χ₁(diag[0]) χ₂(det).
    pub fn eval(&self, entry: &Field, diag: &[u32]) -> u32 {
        let x = entry.dlog(diag[0]).expect("torus entries are nonzero") as u64;
        let det = diag.iter().fold(1, |acc, &d| entry.mul(acc, d));
        let k = entry.dlog(det).expect("torus entries are nonzero") as u64;
        let q1 = self.q0 as u64 - 1;
        debug_assert_eq!(k % q1, 0, "determinant must have norm one");
        self.coeff.mul(self.chi1_power(x), self.chi2_power(k / q1))
    }
}

/// Torus character with exponents e1 mod q0²-1 and e2 mod q0+1, reduced modulo
/// ell: exponents are projected to prime-to-ell parts and the coefficient field
/// is the smallest GF(ell^m) containing the needed roots of unity.
pub fn torus_character(q0: u32, e1: u64, e2: u64, ell: u32) -> Result<TorusCharacter, ModrepError> {
    let p = crate::gf::prime_divisors(q0 as u64);
    if p.first() == Some(&(ell as u64)) {
        return Err(ModrepError::BadPrime(ell));
    }
    if !crate::gf::is_prime(ell as u64) {
        return Err(ModrepError::Field(GfError::NonPrimeCharacteristic(ell as u64)));
    }
    let n1 = q0 as u64 * q0 as u64 - 1;
    let n2 = q0 as u64 + 1;
    let p1 = project_prime_to(e1 % n1, n1, ell as u64);
    let p2 = project_prime_to(e2 % n2, n2, ell as u64);
    let ord1 = n1 / gcd(p1, n1);
    let ord2 = n2 / gcd(p2, n2);
    let m = splitting_degree(ell as u64, &[ord1, ord2]);
    let coeff = Field::new(ell as u64, m)?;
    let zeta1 = coeff.embed_root_of_unity(ord1)?;
    let zeta2 = coeff.embed_root_of_unity(ord2)?;
    Ok(TorusCharacter {
        q0,
        ell,
        raw: (e1 % n1, e2 % n2),
        e1: p1,
        e2: p2,
        ord1,
        ord2,
        coeff,
        zeta1,
        zeta2,
    })
}

/// A module given by one matrix per group generator (column convention:
/// the generator g sends basis vector i to column i of its matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatModule {
    field: Field,
    dim: usize,
    gens: Vec<Matrix>,
    label: String,
}

impl FlatModule {
    pub fn new(field: &Field, gens: Vec<Matrix>, label: &str) -> Result<FlatModule, ModrepError> {
        let dim = gens.first().map_or(0, |g| g.nrows());
        if gens.is_empty() {
            return Err(ModrepError::Invalid("a module needs at least one generator".into()));
        }
        for g in &gens {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(ModrepError::Invalid("generator matrices must be square of equal size".into()));
            }
            if g.field() != field {
                return Err(ModrepError::FieldMismatch("generator over a different field".into()));
            }
        }
        Ok(FlatModule {
            field: field.clone(),
            dim,
            gens,
            label: label.replace('\n', " "),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn all_invertible(&self) -> bool {
        self.gens.iter().all(|g| g.rank() == self.dim)
    }
}

/// Matrix of an arbitrary group element on i_B^G(χ).
pub fn element_matrix(
    spec: &GroupSpec,
    table: &FlagTable,
    chi: &TorusCharacter,
    g: &Matrix,
) -> Matrix {
    let n = table.len();
    let mut out = Matrix::zero(chi.coeff(), n, n);
    for i in 0..n {
        let (j, b) = table.act(spec, g, i);
        let diag: Vec<u32> = (0..spec.rank()).map(|k| b.get(k, k)).collect();
        out.set(j, i, chi.eval(spec.field(), &diag));
    }
    out
}

/// The principal series module i_B^G(χ) on the flag basis.
pub fn induced_module(
    spec: &GroupSpec,
    table: &FlagTable,
    chi: &TorusCharacter,
) -> Result<FlatModule, ModrepError> {
    if chi.q0() != spec.q0() {
        return Err(ModrepError::FieldMismatch(format!(
            "character for q0 = {} used with group over q0 = {}",
            chi.q0(),
            spec.q0()
        )));
    }
    let gens = spec
        .generators()
        .iter()
        .map(|g| element_matrix(spec, table, chi, g))
        .collect();
    let (r1, r2) = chi.raw_exponents();
    let label = format!(
        "iB^G(chi), q0={}, ell={}, e1={}, e2={}, rank={}",
        spec.q0(),
        chi.ell(),
        r1,
        r2,
        spec.rank()
    );
    FlatModule::new(chi.coeff(), gens, &label)
}

/// FMOD v1 text.
pub fn module_to_string(m: &FlatModule) -> String {
    let f = m.field();
    let mut s = String::new();
    s.push_str("FMOD 1\n");
    let _ = write!(s, "field {} {}", f.characteristic(), f.degree());
    for c in &f.modulus()[..f.degree() as usize] {
        let _ = write!(s, " {c}");
    }
    s.push('\n');
    let _ = writeln!(s, "dim {}", m.dim());
    let _ = writeln!(s, "ngens {}", m.gens().len());
    let _ = writeln!(s, "label {}", m.label());
    for (k, g) in m.gens().iter().enumerate() {
        let _ = writeln!(s, "gen {k}");
        for r in g.rows() {
            let vals: Vec<String> = r.to_vec().iter().map(|v| v.to_string()).collect();
            s.push_str(&vals.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn module_write(m: &FlatModule, path: impl AsRef<Path>) -> Result<(), ModrepError> {
    std::fs::write(path, module_to_string(m)).map_err(|e| ModrepError::Io(e.to_string()))
}

pub fn module_read(path: impl AsRef<Path>) -> Result<FlatModule, ModrepError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModrepError::Io(e.to_string()))?;
    module_from_str(&text)
}

fn format_err(line: usize, msg: impl Into<String>) -> ModrepError {
    ModrepError::Format {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ModrepError> {
    tok.parse()
        .map_err(|_| format_err(line, format!("expected an integer, found {tok:?}")))
}

/// Parses FMOD v1 text; errors carry 1-based line numbers.
pub fn module_from_str(text: &str) -> Result<FlatModule, ModrepError> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| format_err(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, l) = next("header")?;
    if l != "FMOD 1" {
        return Err(format_err(ln, "expected header \"FMOD 1\""));
    }

    let (ln, l) = next("field line")?;
    let toks: Vec<&str> = l.split(' ').collect();
    if toks.len() < 3 || toks[0] != "field" {
        return Err(format_err(ln, "expected \"field <p> <m> <c0> ... <c_{m-1}>\""));
    }
    let p: u64 = parse_num(toks[1], ln)?;
    let m: usize = parse_num(toks[2], ln)?;
    if toks.len() != 3 + m {
        return Err(format_err(ln, format!("expected {m} modulus coefficients")));
    }
    let coeffs = toks[3..]
        .iter()
        .map(|t| parse_num::<u32>(t, ln))
        .collect::<Result<Vec<_>, _>>()?;
    let field = Field::with_modulus(p, &coeffs).map_err(|e| format_err(ln, e.to_string()))?;

    let (ln, l) = next("dim line")?;
    let dim: usize = match l.strip_prefix("dim ") {
        Some(t) => parse_num(t, ln)?,
        None => return Err(format_err(ln, "expected \"dim <n>\"")),
    };
    if dim == 0 {
        return Err(format_err(ln, "dimension must be positive"));
    }
    let (ln, l) = next("ngens line")?;
    let ngens: usize = match l.strip_prefix("ngens ") {
        Some(t) => parse_num(t, ln)?,
        None => return Err(format_err(ln, "expected \"ngens <k>\"")),
    };
    if ngens == 0 {
        return Err(format_err(ln, "at least one generator is required"));
    }
    let (ln, l) = next("label line")?;
    let label = if l == "label" {
        ""
    } else {
        l.strip_prefix("label ")
            .ok_or_else(|| format_err(ln, "expected \"label <text>\""))?
    };

    let mut gens = Vec::with_capacity(ngens);
    for k in 0..ngens {
        let (gln, l) = next("generator header")?;
        if l != format!("gen {k}") {
            return Err(format_err(gln, format!("expected \"gen {k}\"")));
        }
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (ln, l) = next("matrix row")?;
            let vals = l
                .split(' ')
                .map(|t| parse_num::<u32>(t, ln))
                .collect::<Result<Vec<_>, _>>()?;
            if vals.len() != dim {
                return Err(format_err(
                    ln,
                    format!("row has {} entries, expected {dim}", vals.len()),
                ));
            }
            if let Some(v) = vals.iter().find(|&&v| !field.contains(v)) {
                return Err(format_err(ln, format!("entry {v} is not an element of {field}")));
            }
            rows.push(Row::from_values(&field, &vals));
        }
        let g = Matrix::from_rows(&field, dim, rows);
        if g.rank() != dim {
            return Err(format_err(gln, format!("generator {k} is singular")));
        }
        gens.push(g);
    }
    for (ln, l) in lines {
        if !l.is_empty() {
            return Err(format_err(ln, "trailing content after last generator"));
        }
    }
    FlatModule::new(&field, gens, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{flag_table, unitary_group};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn character_examples() {
        let c = torus_character(3, 0, 0, 2).unwrap();
        assert!(c.is_trivial());
        assert_eq!(c.coeff().order(), 2);
        // e1 = 1 has order 8; 7^2 = 49 = 1 mod 8 is the first hit
        let c = torus_character(3, 1, 0, 7).unwrap();
        assert_eq!(c.orders().0, 8);
        assert_eq!(c.coeff().order(), 49);
        // e1 = 2 has order 4, a power of 2: the reduction is trivial
        let c = torus_character(3, 2, 0, 2).unwrap();
        assert!(c.is_trivial());
        assert_eq!(c.coeff().order(), 2);
        assert_eq!(torus_character(3, 0, 0, 3).err(), Some(ModrepError::BadPrime(3)));
        assert_eq!(torus_character(9, 0, 0, 3).err(), Some(ModrepError::BadPrime(3)));
    }

    #[test]
    fn projection_is_idempotent_and_kills_ell_part() {
        for n in [8u64, 24, 80, 4, 6] {
            for ell in [2u64, 3, 5, 7] {
                for e in 0..n {
                    let p = project_prime_to(e, n, ell);
                    assert_eq!(project_prime_to(p, n, ell), p);
                    let ord = n / gcd(p, n);
                    assert_ne!(ord % ell, 0);
                    // agrees with e on the prime-to-ell quotient
                    let mut rest = n;
                    while rest % ell == 0 {
                        rest /= ell;
                    }
                    assert_eq!(p % rest, e % rest);
                }
            }
        }
    }

    #[test]
    fn character_is_multiplicative() {
        let spec = unitary_group(5, 3).unwrap();
        let f = spec.field();
        let chi = torus_character(5, 7, 2, 13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let x = f.exp(rng.random_range(0..24));
            let y = f.exp(rng.random_range(0..6) * 4);
            let z = f.inv(spec.conj(x));
            let x2 = f.exp(rng.random_range(0..24));
            let y2 = f.exp(rng.random_range(0..6) * 4);
            let z2 = f.inv(spec.conj(x2));
            let a = chi.eval(f, &[x, y, z]);
            let b = chi.eval(f, &[x2, y2, z2]);
            let ab = chi.eval(f, &[f.mul(x, x2), f.mul(y, y2), f.mul(z, z2)]);
            assert_eq!(chi.coeff().mul(a, b), ab);
        }
    }

    fn random_chi(q: u32, rng: &mut ChaCha8Rng) -> TorusCharacter {
        let ells: Vec<u32> = [2u32, 3, 5, 7, 11, 13].into_iter().filter(|&l| !q.is_multiple_of(l)).collect();
        let ell = ells[rng.random_range(0..ells.len())];
        let n1 = (q * q - 1) as u64;
        torus_character(q, rng.random_range(0..n1), rng.random_range(0..q as u64 + 1), ell).unwrap()
    }

    #[test]
    fn induced_examples() {
        let g = unitary_group(3, 3).unwrap();
        let t = flag_table(&g);
        let m = induced_module(&g, &t, &torus_character(3, 0, 0, 5).unwrap()).unwrap();
        assert_eq!(m.dim(), 28);
        assert_eq!(m.field().order(), 5);
        let h = unitary_group(3, 2).unwrap();
        let th = flag_table(&h);
        let m = induced_module(&h, &th, &torus_character(3, 0, 0, 2).unwrap()).unwrap();
        assert_eq!(m.dim(), 4);
        let g5 = unitary_group(5, 3).unwrap();
        let t5 = flag_table(&g5);
        // χ₁ of order 2 on GF(25)^x
        let m = induced_module(&g5, &t5, &torus_character(5, 12, 0, 3).unwrap()).unwrap();
        assert_eq!(m.dim(), 126);
        assert_eq!(m.field().order(), 3);
        let wrong = torus_character(5, 0, 0, 2).unwrap();
        assert!(matches!(induced_module(&g, &t, &wrong), Err(ModrepError::FieldMismatch(_))));
    }

    #[test]
    fn monomial_and_trivial_specialisation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, rank) in [(3, 3), (3, 2), (5, 2), (5, 3)] {
            let g = unitary_group(q, rank).unwrap();
            let t = flag_table(&g);
            let chi = random_chi(q, &mut rng);
            let m = induced_module(&g, &t, &chi).unwrap();
            assert_eq!(m.dim(), if rank == 3 { q.pow(3) + 1 } else { q + 1 } as usize);
            for a in m.gens() {
                assert!(a.row_weights().iter().all(|&w| w == 1));
                assert!(a.transpose().row_weights().iter().all(|&w| w == 1));
            }
            let triv = induced_module(&g, &t, &torus_character(q, 0, 0, chi.ell()).unwrap()).unwrap();
            for (a, gm) in triv.gens().iter().zip(g.generators()) {
                let perm = t.permutation(&g, gm);
                for i in 0..t.len() {
                    for j in 0..t.len() {
                        assert_eq!(a.get(j, i), (perm[i] == j) as u32);
                    }
                }
            }
        }
    }

    #[test]
    fn functoriality() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (q, rank, pairs) in [(3, 3, 300), (3, 2, 400), (5, 3, 100), (5, 2, 200)] {
            let g = unitary_group(q, rank).unwrap();
            let t = flag_table(&g);
            let chi = random_chi(q, &mut rng);
            for _ in 0..pairs {
                let x = g.random_element(&mut rng, 6);
                let y = g.random_element(&mut rng, 6);
                let mx = element_matrix(&g, &t, &chi, &x);
                let my = element_matrix(&g, &t, &chi, &y);
                assert_eq!(element_matrix(&g, &t, &chi, &x.mul(&y)), mx.mul(&my));
            }
        }
    }

    #[test]
    fn relators_hold_on_modules() {
        // collisions between random words give relators of the group
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (q, rank) in [(3, 2), (3, 3)] {
            let g = unitary_group(q, rank).unwrap();
            let t = flag_table(&g);
            let chi = random_chi(q, &mut rng);
            let m = induced_module(&g, &t, &chi).unwrap();
            let word_matrix = |w: &[usize]| {
                w.iter().fold(Matrix::identity(m.field(), m.dim()), |acc, &k| acc.mul(&m.gens()[k]))
            };
            let mut seen: HashMap<Vec<Vec<u32>>, Vec<usize>> = HashMap::new();
            let mut found = 0;
            while found < 100 {
                let len = rng.random_range(1..10);
                let w: Vec<usize> = (0..len).map(|_| rng.random_range(0..g.generators().len())).collect();
                let gm = w.iter().fold(Matrix::identity(g.field(), rank), |acc, &k| acc.mul(&g.generators()[k]));
                match seen.get(&gm.to_values()) {
                    Some(other) if *other != w => {
                        assert_eq!(word_matrix(other), word_matrix(&w));
                        found += 1;
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(gm.to_values(), w);
                    }
                }
            }
        }
    }

    #[test]
    fn fmod_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = unitary_group(3, 3).unwrap();
        let t = flag_table(&g);
        for (e1, ell) in [(0, 5), (1, 7), (0, 2)] {
            let m = induced_module(&g, &t, &torus_character(3, e1, 0, ell).unwrap()).unwrap();
            let path = dir.path().join("m.fmod");
            module_write(&m, &path).unwrap();
            let back = module_read(&path).unwrap();
            assert_eq!(back, m);
            assert_eq!(module_to_string(&back), std::fs::read_to_string(&path).unwrap());
        }
    }

    #[test]
    fn fmod_errors() {
        let good = "FMOD 1\nfield 3 1 0\ndim 2\nngens 1\nlabel x\ngen 0\n1 0\n0 1\n";
        assert!(module_from_str(good).is_ok());
        // x^2 + 2x + 1 = (x + 1)^2 over GF(3)
        let red = good.replace("field 3 1 0", "field 3 2 1 2");
        assert!(matches!(module_from_str(&red), Err(ModrepError::Format { line: 2, .. })));
        let short = good.replace("0 1\n", "0\n");
        assert!(matches!(module_from_str(&short), Err(ModrepError::Format { line: 8, .. })));
        let singular = good.replace("0 1\n", "0 0\n");
        assert!(matches!(module_from_str(&singular), Err(ModrepError::Format { line: 6, .. })));
        let big = good.replace("1 0\n0 1", "1 0\n0 4");
        assert!(matches!(module_from_str(&big), Err(ModrepError::Format { line: 8, .. })));
        assert!(matches!(module_from_str("FMOD 2\n"), Err(ModrepError::Format { line: 1, .. })));
    }
}
