//! Finite unitary groups U(2,1) and U(1,1) over GF(q0^2)/GF(q0) as matrix
//! groups, with their Borel subgroup and the flag model of G/B.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::gf::{is_prime, prime_divisors, Field, GfError};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrpError {
    #[error("q0 = {0} is even; only odd residue characteristic is supported")]
    EvenCharacteristic(u32),
    #[error("q0 = {0} is not a prime power")]
    NotPrimePower(u32),
    #[error("rank {0} is not supported (expected 2 or 3)")]
    UnsupportedRank(usize),
    #[error("enumeration of rank {rank} group at q0 = {q0} exceeds the enumeration limit")]
    EnumerationTooLarge { rank: usize, q0: u32 },
    #[error("matrix is not in the unitary group")]
    NotInGroup,
    #[error("group construction check failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Order of U(2,1) (rank 3) or U(1,1) (rank 2) over GF(q^2)/GF(q).
pub fn order_formula(rank: usize, q: u64) -> u64 {
    match rank {
        3 => q.pow(3) * (q - 1) * (q + 1).pow(3) * (q * q - q + 1),
        2 => q * (q - 1) * (q + 1).pow(2),
        _ => panic!("unsupported rank"),
    }
}

/// The closed form q(q-1)(q+1), which is the order of the special unitary
/// group SU(1,1) rather than of U(1,1).
pub fn special_order_formula_rank2(q: u64) -> u64 {
    q * (q - 1) * (q + 1)
}

/// Order of the upper triangular Borel subgroup.
pub fn borel_order(rank: usize, q: u64) -> u64 {
    match rank {
        3 => q.pow(3) * (q * q - 1) * (q + 1),
        2 => q * (q * q - 1),
        _ => panic!("unsupported rank"),
    }
}

fn enumeration_limit(rank: usize) -> u32 {
    if rank == 3 {
        3
    } else {
        7
    }
}

/// A finite unitary group given by its hermitian form and generators.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    rank: usize,
    q0: u32,
    field: Field,
    conj_k: u32,
    form: Matrix,
    generators: Vec<Matrix>,
    names: Vec<String>,
    borel: Vec<Matrix>,
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn q0(&self) -> u32 {
        self.q0
    }

    /// The entry field GF(q0^2).
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    /// Index of the Weyl element among the generators.
    pub fn weyl_index(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn weyl(&self) -> &Matrix {
        &self.generators[self.weyl_index()]
    }

    /// Generators of the Borel subgroup (all generators except w).
    /// Generators of the upper triangular Borel subgroup. In rank 3 the
    /// listed generators only reach part of the torus, so diag(1, z, 1) with
    /// N(z) = 1 is added.
    pub fn borel_generators(&self) -> &[Matrix] {
        &self.borel
    }

    /// x ↦ x^q0.
    pub fn conj(&self, x: u32) -> u32 {
        self.field.frobenius(x, self.conj_k)
    }

    pub fn norm(&self, x: u32) -> u32 {
        self.field.mul(x, self.conj(x))
    }

    pub fn trace(&self, x: u32) -> u32 {
        self.field.add(x, self.conj(x))
    }

    pub fn conj_matrix(&self, g: &Matrix) -> Matrix {
        g.map(|x| self.conj(x))
    }

    /// g J conj(g)^T = J.
    pub fn is_unitary(&self, g: &Matrix) -> bool {
        g.nrows() == self.rank
            && g.ncols() == self.rank
            && g.mul(&self.form).mul(&self.conj_matrix(g).transpose()) == self.form
    }

    pub fn order_formula(&self) -> u64 {
        order_formula(self.rank, self.q0 as u64)
    }

    /// Exact order by closure over the generators.
    pub fn enumerate_order(&self) -> Result<u64, GrpError> {
        Ok(self.enumerate_elements()?.len() as u64)
    }

    /// All group elements, identity first, in breadth-first order.
    pub fn enumerate_elements(&self) -> Result<Vec<Matrix>, GrpError> {
        if self.q0 > enumeration_limit(self.rank) {
            return Err(GrpError::EnumerationTooLarge {
                rank: self.rank,
                q0: self.q0,
            });
        }
        Ok(closure(&Matrix::identity(&self.field, self.rank), &self.generators))
    }

    /// Borel membership: `Some(diagonal)` iff g is upper triangular.
    pub fn borel_membership(&self, g: &Matrix) -> Result<Option<Vec<u32>>, GrpError> {
        if !self.is_unitary(g) {
            return Err(GrpError::NotInGroup);
        }
        let n = self.rank;
        let upper = (0..n).all(|i| (0..i).all(|j| g.get(i, j) == 0));
        Ok(upper.then(|| (0..n).map(|i| g.get(i, i)).collect()))
    }

    /// Product of `len` uniformly chosen generators.
    pub fn random_element<R: Rng>(&self, rng: &mut R, len: usize) -> Matrix {
        let mut x = Matrix::identity(&self.field, self.rank);
        for _ in 0..len {
            let k = rng.random_range(0..self.generators.len());
            x = x.mul(&self.generators[k]);
        }
        x
    }
}

/// Breadth-first closure of `gens` applied on the right of `start`.
pub fn closure(start: &Matrix, gens: &[Matrix]) -> Vec<Matrix> {
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_values());
    queue.push_back(start.clone());
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.to_values()) {
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out
}

/// U(2,1) for rank 3 or U(1,1) for rank 2 over GF(q0^2)/GF(q0).
pub fn unitary_group(q0: u32, rank: usize) -> Result<GroupSpec, GrpError> {
    if rank != 2 && rank != 3 {
        return Err(GrpError::UnsupportedRank(rank));
    }
    let primes = prime_divisors(q0 as u64);
    if primes.len() != 1 || q0 < 2 {
        return Err(GrpError::NotPrimePower(q0));
    }
    let p = primes[0];
    debug_assert!(is_prime(p));
    if p == 2 {
        return Err(GrpError::EvenCharacteristic(q0));
    }
    let mut k = 0u32;
    while p.pow(k) < q0 as u64 {
        k += 1;
    }
    let field = Field::new(p, 2 * k)?;
    let f = &field;
    let conj = |x: u32| f.frobenius(x, k);
    let g = f.primitive();
    let one = 1u32;
    // nonzero element of trace zero: g^((q0+1)/2)
    let y0 = f.exp((q0 as u64).div_ceil(2));
    let form = Matrix::from_fn(f, rank, rank, |i, j| (i + j == rank - 1) as u32);

    let mut generators = Vec::new();
    let mut names = Vec::new();
    if rank == 3 {
        let half = f.inv(f.from_int(2));
        let unip = |x: u32, y: u32| {
            Matrix::from_values(
                f,
                &[
                    vec![one, x, f.neg(y)],
                    vec![0, one, f.neg(conj(x))],
                    vec![0, 0, one],
                ],
            )
        };
        generators.push(Matrix::from_values(
            f,
            &[vec![g, 0, 0], vec![0, one, 0], vec![0, 0, f.inv(conj(g))]],
        ));
        names.push("t".to_string());
        generators.push(unip(one, half));
        names.push("u(1,1/2)".to_string());
        generators.push(unip(g, f.mul(f.mul(g, conj(g)), half)));
        names.push("u(g,N(g)/2)".to_string());
        generators.push(unip(0, y0));
        names.push("u(0,y0)".to_string());
    } else {
        generators.push(Matrix::from_values(f, &[vec![g, 0], vec![0, f.inv(conj(g))]]));
        names.push("t".to_string());
        generators.push(Matrix::from_values(f, &[vec![one, y0], vec![0, one]]));
        names.push("u(a0)".to_string());
    }
    let mut borel = generators.clone();
    if rank == 3 {
        let z = f.exp(q0 as u64 - 1);
        borel.push(Matrix::from_values(f, &[vec![one, 0, 0], vec![0, z, 0], vec![0, 0, one]]));
    }
    generators.push(form.clone());
    names.push("w".to_string());

    let spec = GroupSpec {
        borel,
        rank,
        q0,
        field,
        conj_k: k,
        form,
        generators,
        names,
    };
    for (m, name) in spec.generators.iter().zip(&spec.names) {
        if !spec.is_unitary(m) {
            return Err(GrpError::ConstructionFailed(format!("generator {name} is not unitary")));
        }
    }
    if q0 <= enumeration_limit(rank) {
        let n = spec.enumerate_order()?;
        if n != spec.order_formula() {
            return Err(GrpError::ConstructionFailed(format!(
                "generated group has order {n}, expected {}",
                spec.order_formula()
            )));
        }
    }
    Ok(spec)
}

/// Canonical isotropic lines and section matrices modelling G/B.
#[derive(Clone, Debug)]
pub struct FlagTable {
    flags: Vec<Vec<u32>>,
    sections: Vec<Matrix>,
    section_inverses: Vec<Matrix>,
    index: HashMap<Vec<u32>, usize>,
}

impl FlagTable {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    /// Echelon representative of flag i (first nonzero coordinate 1).
    pub fn flag(&self, i: usize) -> &[u32] {
        &self.flags[i]
    }

    pub fn section(&self, i: usize) -> &Matrix {
        &self.sections[i]
    }

    /// Index of the standard flag spanned by the first basis vector.
    pub fn standard(&self) -> usize {
        0
    }

    /// Index of the line spanned by v (any nonzero representative).
    pub fn index_of(&self, spec: &GroupSpec, v: &[u32]) -> Option<usize> {
        let f = spec.field();
        let piv = v.iter().position(|&x| x != 0)?;
        let s = f.inv(v[piv]);
        let key: Vec<u32> = v.iter().map(|&x| f.mul(x, s)).collect();
        self.index.get(&key).copied()
    }

    /// g s(i) = s(j) b with b upper triangular; returns (j, b).
    pub fn coset_action(
        &self,
        spec: &GroupSpec,
        g: &Matrix,
        i: usize,
    ) -> Result<(usize, Matrix), GrpError> {
        if !spec.is_unitary(g) {
            return Err(GrpError::NotInGroup);
        }
        Ok(self.act(spec, g, i))
    }

    /// As [`FlagTable::coset_action`] without the membership check.
    pub fn act(&self, spec: &GroupSpec, g: &Matrix, i: usize) -> (usize, Matrix) {
        let j = self.permute(spec, g, i);
        let b = self.section_inverses[j].mul(g).mul(&self.sections[i]);
        (j, b)
    }

    /// Image of flag i under g.
    pub fn permute(&self, spec: &GroupSpec, g: &Matrix, i: usize) -> usize {
        let f = spec.field();
        let v = &self.flags[i];
        let n = v.len();
        let gv: Vec<u32> = (0..n)
            .map(|r| (0..n).fold(0, |acc, c| f.add(acc, f.mul(g.get(r, c), v[c]))))
            .collect();
        self.index_of(spec, &gv).expect("unitary matrices preserve isotropic lines")
    }

    /// The permutation of flags induced by g.
    pub fn permutation(&self, spec: &GroupSpec, g: &Matrix) -> Vec<usize> {
        (0..self.len()).map(|i| self.permute(spec, g, i)).collect()
    }
}

pub fn flag_table(spec: &GroupSpec) -> FlagTable {
    let f = spec.field();
    let order = f.order();
    let mut flags: Vec<Vec<u32>> = Vec::new();
    let mut sections = Vec::new();
    if spec.rank() == 3 {
        for x in 0..order {
            let target = f.neg(spec.norm(x));
            for y in 0..order {
                if spec.trace(y) == target {
                    flags.push(vec![1, x, y]);
                    sections.push(Matrix::from_values(
                        f,
                        &[vec![1, 0, 0], vec![x, 1, 0], vec![y, f.neg(spec.conj(x)), 1]],
                    ));
                }
            }
        }
        flags.push(vec![0, 0, 1]);
    } else {
        for a in 0..order {
            if spec.trace(a) == 0 {
                flags.push(vec![1, a]);
                sections.push(Matrix::from_values(f, &[vec![1, 0], vec![a, 1]]));
            }
        }
        flags.push(vec![0, 1]);
    }
    sections.push(spec.weyl().clone());
    let section_inverses = sections
        .iter()
        .map(|s| s.inverse().expect("sections are invertible"))
        .collect();
    let index = flags
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let table = FlagTable {
        flags,
        sections,
        section_inverses,
        index,
    };
    debug_assert!((0..table.len()).all(|i| {
        let col: Vec<u32> = (0..spec.rank()).map(|r| table.sections[i].get(r, 0)).collect();
        table.index_of(spec, &col) == Some(i)
    }));
    table
}

/// Number of orbits of the subgroup generated by `gens` on the flags.
pub fn orbit_count(spec: &GroupSpec, table: &FlagTable, gens: &[Matrix]) -> usize {
    let perms: Vec<Vec<usize>> = gens.iter().map(|g| table.permutation(spec, g)).collect();
    let mut seen = vec![false; table.len()];
    let mut count = 0;
    for start in 0..table.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for p in &perms {
                if !seen[p[i]] {
                    seen[p[i]] = true;
                    stack.push(p[i]);
                }
            }
        }
    }
    count
}

/// Checks that the generators act transitively on the flags.
pub fn check_transitive(spec: &GroupSpec, table: &FlagTable) -> bool {
    orbit_count(spec, table, spec.generators()) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_examples() {
        let g = unitary_group(3, 3).unwrap();
        assert_eq!(g.field().order(), 9);
        assert_eq!(g.generators().len(), 5);
        let h = unitary_group(3, 2).unwrap();
        assert_eq!(h.generators().len(), 3);
        assert_eq!(unitary_group(2, 3).err(), Some(GrpError::EvenCharacteristic(2)));
        assert_eq!(unitary_group(9, 4).err(), Some(GrpError::UnsupportedRank(4)));
        assert_eq!(unitary_group(6, 3).err(), Some(GrpError::NotPrimePower(6)));
    }

    #[test]
    fn orders() {
        let g = unitary_group(3, 3).unwrap();
        assert_eq!(g.order_formula(), 24192);
        assert_eq!(g.enumerate_order().unwrap(), 24192);
        let h = unitary_group(3, 2).unwrap();
        let n = h.enumerate_order().unwrap();
        assert_eq!(n, 96);
        assert_eq!(n, order_formula(2, 3));
        assert_ne!(n, special_order_formula_rank2(3));
        assert!(matches!(
            unitary_group(5, 3).unwrap().enumerate_order(),
            Err(GrpError::EnumerationTooLarge { .. })
        ));
        for q in [5, 7] {
            let h = unitary_group(q, 2).unwrap();
            assert_eq!(h.enumerate_order().unwrap(), order_formula(2, q as u64));
        }
    }

    /// Isotropic lines counted projectively by brute force over all vectors.
    fn count_isotropic_lines(spec: &GroupSpec) -> usize {
        let f = spec.field();
        let n = spec.rank();
        let qq = f.order() as usize;
        let mut count = 0;
        for k in 1..qq.pow(n as u32) {
            let v: Vec<u32> = (0..n).map(|i| ((k / qq.pow(i as u32)) % qq) as u32).collect();
            let h = (0..n).fold(0, |acc, i| {
                f.add(acc, f.mul(v[i], spec.conj(v[n - 1 - i])))
            });
            if h == 0 {
                count += 1;
            }
        }
        count / (qq - 1)
    }

    #[test]
    fn flag_counts() {
        for (q, rank, expect) in [(3, 3, 28), (3, 2, 4), (5, 3, 126), (5, 2, 6)] {
            let spec = unitary_group(q, rank).unwrap();
            let t = flag_table(&spec);
            assert_eq!(t.len(), expect);
            assert_eq!(count_isotropic_lines(&spec), expect);
            assert!(check_transitive(&spec, &t));
        }
        let g = unitary_group(3, 3).unwrap();
        assert_eq!(
            (g.order_formula() / borel_order(3, 3)) as usize,
            flag_table(&g).len()
        );
    }

    #[test]
    fn borel_examples() {
        let g = unitary_group(3, 3).unwrap();
        let f = g.field();
        let id = Matrix::identity(f, 3);
        assert_eq!(g.borel_membership(&id).unwrap(), Some(vec![1, 1, 1]));
        assert_eq!(g.borel_membership(g.weyl()).unwrap(), None);
        for u in &g.generators()[1..4] {
            assert_eq!(g.borel_membership(u).unwrap(), Some(vec![1, 1, 1]));
        }
        let bad = Matrix::scalar(f, 3, f.from_int(2));
        // 2 * 2 = 1 in GF(3) so the scalar 2 is unitary; g itself is not
        assert!(g.borel_membership(&bad).is_ok());
        let nonunitary = Matrix::from_values(f, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(g.borel_membership(&nonunitary), Err(GrpError::NotInGroup));
        assert!(g.weyl().mul(g.weyl()).is_identity());
    }

    #[test]
    fn coset_examples() {
        for rank in [2, 3] {
            let g = unitary_group(3, rank).unwrap();
            let t = flag_table(&g);
            let id = Matrix::identity(g.field(), rank);
            for i in 0..t.len() {
                let (j, b) = t.coset_action(&g, &id, i).unwrap();
                assert_eq!(j, i);
                assert!(b.is_identity());
                let (j, b) = t.coset_action(&g, t.section(i), t.standard()).unwrap();
                assert_eq!(j, i);
                assert!(b.is_identity());
            }
            let torus = &g.generators()[0];
            let (j, b) = t.coset_action(&g, torus, t.standard()).unwrap();
            assert_eq!(j, t.standard());
            assert_eq!(&b, torus);
        }
    }

    #[test]
    fn cocycle_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [3, 5] {
            for rank in [2, 3] {
                let g = unitary_group(q, rank).unwrap();
                let t = flag_table(&g);
                for _ in 0..(1000 / 4) {
                    let x = g.random_element(&mut rng, 12);
                    assert!(g.is_unitary(&x));
                }
                for _ in 0..20 {
                    let x = g.random_element(&mut rng, 8);
                    let y = g.random_element(&mut rng, 8);
                    let xy = x.mul(&y);
                    for i in 0..t.len() {
                        let (hi, bh) = t.act(&g, &y, i);
                        let (j1, bx) = t.act(&g, &x, hi);
                        let (j2, bxy) = t.act(&g, &xy, i);
                        assert_eq!(j1, j2);
                        assert_eq!(bxy, bx.mul(&bh));
                        assert!(g.borel_membership(&bxy).unwrap().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn bruhat_double_cosets() {
        for q in [3, 5] {
            for rank in [2, 3] {
                let g = unitary_group(q, rank).unwrap();
                let t = flag_table(&g);
                assert_eq!(orbit_count(&g, &t, g.borel_generators()), 2);
            }
        }
    }
}
