//! Endomorphism algebras and the quadratic relation of a rank-two commutant.

use serde_json::{json, Value};

use super::hom::hom_rows;
use super::{MeatAxeError, RowModule};
use crate::gf::Field;
use crate::matrix::{Matrix, Row, SubspaceBasis};
use crate::modrep::FlatModule;

const DENSE_LIMIT: usize = 512;
const MAX_PARAMETER_EXPONENT: u32 = 12;

#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub field: Field,
    /// Basis of the commutant (column convention), identity first.
    pub basis: Vec<Matrix>,
    /// `structure[a][b][k]`: coefficient of basis k in basis[a] * basis[b].
    pub structure: Vec<Vec<Vec<u32>>>,
}

impl EndAlgebra {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": [self.field.characteristic(), self.field.degree()],
            "dimension": self.dimension(),
            "structure_constants": self.structure,
        })
    }
}

fn flatten(m: &Matrix) -> Row {
    let f = m.field();
    let n = m.ncols();
    let mut out = Row::zero(f, m.nrows() * n);
    for i in 0..m.nrows() {
        for j in 0..n {
            let v = m.get(i, j);
            if v != 0 {
                out.set(i * n + j, v);
            }
        }
    }
    out
}

/// Solves for coordinates relative to a fixed list of independent vectors.
struct CoordinateSolver {
    field: Field,
    ech: SubspaceBasis,
    trans: Vec<Row>,
    count: usize,
}

impl CoordinateSolver {
    fn new(field: &Field, len: usize, count: usize) -> CoordinateSolver {
        CoordinateSolver {
            field: field.clone(),
            ech: SubspaceBasis::new(field, len),
            trans: Vec::new(),
            count,
        }
    }

    /// Adds the next vector if independent; returns whether it was added.
    fn push(&mut self, v: Row) -> bool {
        let f = &self.field;
        let (coords, rest) = self.ech.coordinates(v);
        let Some(piv) = rest.first_nonzero() else {
            return false;
        };
        let mut t = Row::unit(f, self.count, self.trans.len());
        for (c, tr) in coords.iter().zip(&self.trans) {
            if *c != 0 {
                t.axpy(f.neg(*c), tr, f);
            }
        }
        let s = f.inv(rest.get(piv));
        let mut r = rest;
        r.scale(s, f);
        t.scale(s, f);
        self.ech.insert_reduced(r);
        self.trans.push(t);
        true
    }

    fn solve(&self, v: Row) -> Option<Vec<u32>> {
        let f = &self.field;
        let (coords, rest) = self.ech.coordinates(v);
        if !rest.is_zero() {
            return None;
        }
        let mut out = Row::zero(f, self.count);
        for (c, tr) in coords.iter().zip(&self.trans) {
            if *c != 0 {
                out.axpy(*c, tr, f);
            }
        }
        Some(out.to_vec()[..self.trans.len()].to_vec())
    }
}

/// Full commutant of the module with structure constants.
pub fn endomorphism_algebra(m: &FlatModule) -> Result<EndAlgebra, MeatAxeError> {
    if m.dim() > DENSE_LIMIT {
        return Err(MeatAxeError::TooLarge(m.dim()));
    }
    let f = m.field();
    let r = RowModule::from_flat(m);
    let homs = hom_rows(&r, &r);
    let n = m.dim();
    let mut solver = CoordinateSolver::new(f, n * n, homs.len());
    let mut basis = Vec::with_capacity(homs.len());
    let id = Matrix::identity(f, n);
    solver.push(flatten(&id));
    basis.push(id);
    for h in homs {
        let x = h.transpose();
        if solver.push(flatten(&x)) {
            basis.push(x);
        }
    }
    let mut structure = Vec::with_capacity(basis.len());
    for a in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for b in &basis {
            let coords = solver
                .solve(flatten(&a.mul(b)))
                .expect("commutant is closed under products");
            row.push(coords);
        }
        structure.push(row);
    }
    Ok(EndAlgebra {
        field: f.clone(),
        basis,
        structure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticParameter {
    /// d = q0^exponent.
    pub d: u64,
    pub exponent: u32,
    /// Eigenvalues (λ1, λ2) of the zero-diagonal element, with d = -λ1/λ2.
    pub eigenvalues: (u32, u32),
    /// A^2 = s A + t for the zero-diagonal element A, as (s, t).
    pub relation: (u32, u32),
    /// The rescaled element satisfying T^2 = (d - 1) T + d.
    pub normalized: Matrix,
}

impl QuadraticParameter {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "exponent": self.exponent,
            "eigenvalues": [self.eigenvalues.0, self.eigenvalues.1],
            "relation": [self.relation.0, self.relation.1],
        })
    }
}

/// Quadratic parameter of a two-dimensional commutant: the element A with
/// zero diagonal satisfies a quadratic whose root ratio -λ1/λ2 is matched
/// against powers of q0 in the coefficient field.
pub fn quadratic_parameter(
    e: &EndAlgebra,
    m: &FlatModule,
    q0: u32,
) -> Result<QuadraticParameter, MeatAxeError> {
    if e.dimension() != 2 {
        return Err(MeatAxeError::NotRankTwo(e.dimension()));
    }
    let f = &e.field;
    if m.field() != f || e.basis.iter().any(|x| x.nrows() != m.dim()) {
        return Err(MeatAxeError::Incompatible("algebra does not belong to this module".into()));
    }
    for x in &e.basis {
        for g in m.gens() {
            if x.mul(g) != g.mul(x) {
                return Err(MeatAxeError::Incompatible(
                    "basis element does not commute with the module".into(),
                ));
            }
        }
    }
    let n = m.dim();
    let (x1, x2) = (&e.basis[0], &e.basis[1]);
    let a = if (0..n).all(|i| x2.get(i, i) == 0) {
        x2.clone()
    } else if (0..n).all(|i| x1.get(i, i) == 0) {
        x1.clone()
    } else {
        x2.scale(x1.get(0, 0)).sub(&x1.scale(x2.get(0, 0)))
    };
    if a.is_zero() || (0..n).any(|i| a.get(i, i) != 0) {
        return Err(MeatAxeError::AmbiguousParameter(
            "no basis element with zero diagonal".into(),
        ));
    }
    let a2 = a.mul(&a);
    let (pi, pj) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| a.get(i, j) != 0)
        .unwrap();
    let s = f.div(a2.get(pi, pj), a.get(pi, pj));
    let t = f.sub(a2.get(0, 0), f.mul(s, a.get(0, 0)));
    if a2 != a.scale(s).add(&Matrix::scalar(f, n, t)) {
        return Err(MeatAxeError::AmbiguousParameter("element is not quadratic".into()));
    }
    // roots of x^2 - s x - t
    let roots: Vec<u32> = f
        .elements()
        .filter(|&x| f.sub(f.sub(f.mul(x, x), f.mul(s, x)), t) == 0)
        .collect();
    if roots.len() != 2 || roots.contains(&0) {
        return Err(MeatAxeError::AmbiguousParameter(format!(
            "minimal polynomial has roots {roots:?}"
        )));
    }
    let ell = f.characteristic() as u64;
    let mut best: Option<(u32, u32, u32)> = None;
    for (l1, l2) in [(roots[0], roots[1]), (roots[1], roots[0])] {
        let ratio = f.neg(f.div(l1, l2));
        let mut pw = 1u64;
        for k in 1..=MAX_PARAMETER_EXPONENT {
            pw = pw * q0 as u64 % ell;
            if f.from_int(pw as i64) == ratio {
                if best.is_none_or(|(bk, _, _)| k < bk) {
                    best = Some((k, l1, l2));
                }
                break;
            }
        }
    }
    let Some((k, l1, l2)) = best else {
        return Err(MeatAxeError::AmbiguousParameter(
            "neither root ratio is a power of q0".into(),
        ));
    };
    let normalized = a.scale(f.neg(f.inv(l2)));
    Ok(QuadraticParameter {
        d: (q0 as u64).pow(k),
        exponent: k,
        eigenvalues: (l1, l2),
        relation: (s, t),
        normalized,
    })
}
