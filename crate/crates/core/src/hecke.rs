//! Two-generator Hecke algebras with quadratic relations, their characters,
//! and convolution of bi-invariant functions on a finite group.

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::gf::{is_prime, prime_divisors, Field};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("the Laurent generator X is invertible; {0} is not a unit")]
    NotInvertible(i64),
    #[error("subgroup mismatch: {0}")]
    SubgroupMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeParams {
    pub q: u64,
    pub a: u32,
    /// 0 for characteristic zero.
    pub ell: u64,
}

impl HeckeParams {
    /// Image of an integer in the coefficient ring (exact when ell = 0).
    pub fn reduce(&self, n: i64) -> i64 {
        if self.ell == 0 {
            n
        } else {
            n.rem_euclid(self.ell as i64)
        }
    }
}

/// A quadratic relation f^2 = c1 f + c0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub c1: i64,
    pub c0: i64,
}

impl Quadratic {
    pub fn eval(&self, x: i64, params: &HeckeParams) -> i64 {
        params.reduce(x * x - self.c1 * x - self.c0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckePresentation {
    pub params: HeckeParams,
    pub rel_x: Quadratic,
    pub rel_y: Quadratic,
    /// f_x(1) and f_y(1) as rationals (numerator, denominator).
    pub norm_x: (u64, u64),
    pub norm_y: (u64, u64),
}

/// Collapse regime of the character table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collapse {
    Distinct,
    Two,
    Unique,
}

impl Collapse {
    pub fn name(&self) -> &'static str {
        match self {
            Collapse::Distinct => "distinct",
            Collapse::Two => "two",
            Collapse::Unique => "unique",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeCharacter {
    /// All table names that give this character, first name canonical.
    pub names: Vec<&'static str>,
    pub value_x: i64,
    pub value_y: i64,
}

impl HeckeCharacter {
    pub fn name(&self) -> &'static str {
        self.names[0]
    }
}

pub fn presentation(q: u64, a: u32, ell: u64) -> Result<HeckePresentation, HeckeError> {
    let ps = prime_divisors(q);
    if q < 3 || ps.len() != 1 || ps[0] == 2 {
        return Err(HeckeError::BadParams(format!("q = {q} is not an odd prime power")));
    }
    if a != 1 && a != 3 {
        return Err(HeckeError::BadParams(format!("a = {a} is not 1 or 3")));
    }
    if ell != 0 && !is_prime(ell) {
        return Err(HeckeError::BadParams(format!("ell = {ell} is not 0 or a prime")));
    }
    if ell == ps[0] {
        return Err(HeckeError::BadParams(format!("ell = {ell} is the residue characteristic")));
    }
    let params = HeckeParams { q, a, ell };
    let qa = q.pow(a) as i64;
    let qi = q as i64;
    Ok(HeckePresentation {
        params,
        rel_x: Quadratic {
            c1: params.reduce(qa - 1),
            c0: params.reduce(qa),
        },
        rel_y: Quadratic {
            c1: params.reduce(qi - 1),
            c0: params.reduce(qi),
        },
        norm_x: if a == 3 { (1, 1) } else { (1, q) },
        norm_y: (1, 1),
    })
}

impl HeckePresentation {
    /// The roots {q^a, -1} and {q, -1} of the two relations.
    pub fn roots(&self) -> ([i64; 2], [i64; 2]) {
        let p = &self.params;
        (
            [p.reduce(p.q.pow(p.a) as i64), p.reduce(-1)],
            [p.reduce(p.q as i64), p.reduce(-1)],
        )
    }

    /// One-dimensional characters, deduplicated in table order.
    pub fn characters(&self) -> Vec<HeckeCharacter> {
        let ([qa, mx], [qy, my]) = self.roots();
        let table = [
            ("Xi_sgn", mx, my),
            ("Xi_ind", qa, qy),
            ("Xi_1", qa, my),
            ("Xi_2", mx, qy),
        ];
        let mut out: Vec<HeckeCharacter> = Vec::new();
        for (name, x, y) in table {
            match out.iter_mut().find(|c| c.value_x == x && c.value_y == y) {
                Some(c) => c.names.push(name),
                None => out.push(HeckeCharacter {
                    names: vec![name],
                    value_x: x,
                    value_y: y,
                }),
            }
        }
        out
    }

    /// The three-case rule for how the table collapses.
    pub fn collapse(&self) -> Collapse {
        let ([qa, m], [qy, _]) = self.roots();
        if qy == m {
            Collapse::Unique
        } else if qa == m {
            Collapse::Two
        } else {
            Collapse::Distinct
        }
    }

    pub fn to_json(&self) -> Value {
        let p = &self.params;
        let chars = self.characters();
        json!({
            "q": p.q,
            "a": p.a,
            "ell": p.ell,
            "relations": {
                "x": {"c1": self.rel_x.c1, "c0": self.rel_x.c0},
                "y": {"c1": self.rel_y.c1, "c0": self.rel_y.c0},
            },
            "normalization": {
                "f_x(1)": [self.norm_x.0, self.norm_x.1],
                "f_y(1)": [self.norm_y.0, self.norm_y.1],
            },
            "characters": chars.iter().map(|c| json!({
                "names": c.names,
                "value_x": c.value_x,
                "value_y": c.value_y,
            })).collect::<Vec<_>>(),
            "count": chars.len(),
            "collapse": self.collapse().name(),
        })
    }
}

/// Characters of the presentation (convenience wrapper).
pub fn characters(pres: &HeckePresentation) -> Vec<HeckeCharacter> {
    pres.characters()
}

/// The Laurent polynomial algebra R[X, X^-1] attached to a regular character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentAlgebra {
    pub q: u64,
    pub ell: u64,
}

impl LaurentAlgebra {
    pub fn describe(&self) -> &'static str {
        "R[X, X^-1]: one character for each invertible scalar"
    }

    /// The character X ↦ x; rejected unless x is a unit.
    pub fn character_at(&self, x: i64) -> Result<i64, HeckeError> {
        let v = if self.ell == 0 { x } else { x.rem_euclid(self.ell as i64) };
        if v == 0 {
            return Err(HeckeError::NotInvertible(x));
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Value {
        json!({"q": self.q, "ell": self.ell, "algebra": "laurent", "characters": self.describe()})
    }
}

pub fn characters_regular(q: u64, ell: u64) -> Result<LaurentAlgebra, HeckeError> {
    presentation(q, 1, ell)?;
    Ok(LaurentAlgebra { q, ell })
}

/// An explicitly enumerated finite matrix group.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<Matrix>,
    index: HashMap<u128, usize>,
}

/// A subgroup as sorted element indices together with generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub gens: Vec<usize>,
}

fn key(m: &Matrix) -> u128 {
    let q = m.field().order() as u128;
    let mut k = 0u128;
    for r in m.rows() {
        for v in r.to_vec() {
            k = k * q + v as u128;
        }
    }
    k
}

impl FiniteGroup {
    pub fn new(elements: Vec<Matrix>) -> FiniteGroup {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (key(m), i))
            .collect();
        FiniteGroup { elements, index }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&key(m)).copied()
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.elements[i].mul(&self.elements[j]))
            .expect("group is closed")
    }

    fn inv(&self, i: usize) -> usize {
        let m = self.elements[i].inverse().expect("group elements are invertible");
        self.index_of(&m).expect("group is closed under inverses")
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Matrix]) -> Result<Subgroup, HeckeError> {
        let gens = gens
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| HeckeError::SubgroupMismatch("generator outside the group".into()))?;
        let id = Matrix::identity(self.elements[0].field(), self.elements[0].nrows());
        let gm: Vec<Matrix> = gens.iter().map(|&i| self.elements[i].clone()).collect();
        let mut elements: Vec<usize> = crate::grp::closure(&id, &gm)
            .iter()
            .map(|m| self.index_of(m).unwrap())
            .collect();
        elements.sort_unstable();
        Ok(Subgroup { elements, gens })
    }

    /// Indicator function of the double coset K x K.
    pub fn double_coset_indicator(&self, k: &Subgroup, x: usize) -> Vec<u32> {
        let mut f = vec![0u32; self.order()];
        let left: Vec<usize> = k.elements.iter().map(|&a| self.mul(a, x)).collect();
        let mut seen = std::collections::HashSet::new();
        for ax in left {
            if !seen.insert(ax) {
                continue;
            }
            for &b in &k.elements {
                f[self.mul(ax, b)] = 1;
            }
        }
        f
    }
}

fn check_bi_invariant(g: &FiniteGroup, k: &Subgroup, f: &[u32]) -> Result<(), HeckeError> {
    if f.len() != g.order() {
        return Err(HeckeError::SubgroupMismatch("function has the wrong domain".into()));
    }
    for &a in &k.gens {
        for x in 0..g.order() {
            if f[g.mul(a, x)] != f[x] || f[g.mul(x, a)] != f[x] {
                return Err(HeckeError::SubgroupMismatch(
                    "function is not bi-invariant under the subgroup".into(),
                ));
            }
        }
    }
    Ok(())
}

/// (f1 ⋆ f2)(h) = Σ_{gK ∈ G/K} f1(g) f2(g^-1 h), with values in `field`.
pub fn convolve(
    g: &FiniteGroup,
    k: &Subgroup,
    f1: &[u32],
    f2: &[u32],
    field: &Field,
) -> Result<Vec<u32>, HeckeError> {
    if k.elements.is_empty() || k.elements.iter().chain(&k.gens).any(|&x| x >= g.order()) {
        return Err(HeckeError::SubgroupMismatch("subgroup is not inside the group".into()));
    }
    check_bi_invariant(g, k, f1)?;
    check_bi_invariant(g, k, f2)?;
    // left coset representatives
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &a in &k.elements {
            covered[g.mul(x, a)] = true;
        }
    }
    if reps.len() * k.elements.len() != g.order() {
        return Err(HeckeError::SubgroupMismatch("K is not a subgroup".into()));
    }
    let inverses: Vec<usize> = reps.iter().map(|&r| g.inv(r)).collect();
    let mut out = vec![0u32; g.order()];
    for (&r, &rinv) in reps.iter().zip(&inverses) {
        let c = f1[r];
        if c == 0 {
            continue;
        }
        for (h, o) in out.iter_mut().enumerate() {
            let v = f2[g.mul(rinv, h)];
            if v != 0 {
                *o = field.add(*o, field.mul(c, v));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::unitary_group;

    #[test]
    fn presentation_examples() {
        let p = presentation(3, 3, 0).unwrap();
        assert_eq!(p.rel_x, Quadratic { c1: 26, c0: 27 });
        assert_eq!(p.rel_y, Quadratic { c1: 2, c0: 3 });
        let p = presentation(3, 3, 7).unwrap();
        assert_eq!(p.rel_x, Quadratic { c1: 5, c0: 6 });
        assert_eq!(p.rel_y, Quadratic { c1: 2, c0: 3 });
        let p = presentation(3, 1, 2).unwrap();
        assert_eq!(p.rel_x, Quadratic { c1: 0, c0: 1 });
        assert_eq!(p.rel_y, Quadratic { c1: 0, c0: 1 });
        assert_eq!(p.norm_x, (1, 3));
        assert!(presentation(3, 2, 5).is_err());
        assert!(presentation(4, 1, 5).is_err());
        assert!(presentation(9, 1, 3).is_err());
    }

    #[test]
    fn character_examples() {
        assert_eq!(presentation(3, 3, 5).unwrap().characters().len(), 4);
        let two = presentation(3, 3, 7).unwrap().characters();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].names, vec!["Xi_sgn", "Xi_1"]);
        assert_eq!(two[1].names, vec!["Xi_ind", "Xi_2"]);
        assert_eq!(presentation(3, 3, 2).unwrap().characters().len(), 1);
        assert_eq!(presentation(3, 3, 0).unwrap().characters().len(), 4);
    }

    #[test]
    fn roots_satisfy_relations() {
        for q in [3u64, 5, 7, 9] {
            for a in [1, 3] {
                for ell in (0..100u64).filter(|&l| l == 0 || (is_prime(l) && q % l != 0)) {
                    let p = presentation(q, a, ell).unwrap();
                    let ([x1, x2], [y1, y2]) = p.roots();
                    for x in [x1, x2] {
                        assert_eq!(p.rel_x.eval(x, &p.params), 0);
                    }
                    for y in [y1, y2] {
                        assert_eq!(p.rel_y.eval(y, &p.params), 0);
                    }
                    let n = p.characters().len();
                    let expect = match p.collapse() {
                        Collapse::Distinct => 4,
                        Collapse::Two => 2,
                        Collapse::Unique => 1,
                    };
                    assert_eq!(n, expect);
                }
            }
        }
    }

    #[test]
    fn laurent() {
        let l = characters_regular(3, 7).unwrap();
        assert_eq!(l.character_at(1), Ok(1));
        assert_eq!(l.character_at(0), Err(HeckeError::NotInvertible(0)));
        assert_eq!(l.character_at(14), Err(HeckeError::NotInvertible(14)));
        assert_eq!(characters_regular(3, 0).unwrap().character_at(-2), Ok(-2));
    }

    fn setup(rank: usize) -> (FiniteGroup, Subgroup, Field, usize) {
        let spec = unitary_group(3, rank).unwrap();
        let g = FiniteGroup::new(spec.enumerate_elements().unwrap());
        let k = g.subgroup(spec.borel_generators()).unwrap();
        let w = g.index_of(spec.weyl()).unwrap();
        assert_eq!(k.elements.len() as u64, crate::grp::borel_order(rank, 3));
        (g, k, Field::new(101, 1).unwrap(), w)
    }

    #[test]
    fn convolution_examples() {
        for (rank, expect) in [(2, 3u32), (3, 27)] {
            let (g, k, f, w) = setup(rank);
            let id = g.index_of(&Matrix::identity(g.element(0).field(), rank)).unwrap();
            let one = g.double_coset_indicator(&k, id);
            assert_eq!(convolve(&g, &k, &one, &one, &f).unwrap(), one);
            let fw = g.double_coset_indicator(&k, w);
            let sq = convolve(&g, &k, &fw, &fw, &f).unwrap();
            assert_eq!(sq[id], expect);
            // the full quadratic relation f_w^2 = (Q - 1) f_w + Q
            for x in 0..g.order() {
                let rhs = f.add(f.mul(expect - 1, fw[x]), f.mul(expect, one[x]));
                assert_eq!(sq[x], rhs);
            }
        }
    }

    #[test]
    fn convolution_is_associative() {
        let (g, k, f, w) = setup(2);
        let one = g.double_coset_indicator(&k, 0);
        let fw = g.double_coset_indicator(&k, w);
        let funcs = [one.clone(), fw.clone()];
        let lin = |a: u32, b: u32| -> Vec<u32> {
            (0..g.order()).map(|x| f.add(f.mul(a, one[x]), f.mul(b, fw[x]))).collect()
        };
        let triples = [
            (lin(2, 5), lin(7, 1), lin(3, 3)),
            (funcs[1].clone(), funcs[1].clone(), funcs[1].clone()),
            (lin(1, 9), funcs[0].clone(), lin(4, 11)),
        ];
        for (a, b, c) in triples {
            let left = convolve(&g, &k, &convolve(&g, &k, &a, &b, &f).unwrap(), &c, &f).unwrap();
            let right = convolve(&g, &k, &a, &convolve(&g, &k, &b, &c, &f).unwrap(), &f).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn non_invariant_rejected() {
        let (g, k, f, _) = setup(2);
        let mut delta = vec![0u32; g.order()];
        delta[1] = 1;
        assert!(matches!(
            convolve(&g, &k, &delta, &delta, &f),
            Err(HeckeError::SubgroupMismatch(_))
        ));
    }
}
