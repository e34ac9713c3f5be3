//! Composition series, isomorphism tests, socle series and endomorphism
//! algebras of [`FlatModule`]s.
//!
//! Everything here works with row vectors: a module is a list of matrices
//! `R_g` acting by `v ↦ v R_g`. A [`FlatModule`] (column convention) is
//! converted by transposing its generators.

mod chop;
mod endo;
mod hom;
mod socle;

pub use chop::{chop, chop_rows, CompositionReport, FactorClass, Witness};
pub use endo::{endomorphism_algebra, quadratic_parameter, EndAlgebra, QuadraticParameter};
pub use hom::{hom_space, is_isomorphic, is_isomorphic_rows};
pub use socle::{socle, socle_series, SocleLayer, SocleReport};

use thiserror::Error;

use crate::gf::Field;
use crate::matrix::{Matrix, Row, SubspaceBasis};
use crate::modrep::{FlatModule, ModrepError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeatAxeError {
    #[error("no splitting or certificate found for a {dim}-dimensional module after {tries} candidates")]
    RetryBudgetExceeded { dim: usize, tries: usize },
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("modules are incompatible: {0}")]
    Incompatible(String),
    #[error("endomorphism algebra has dimension {0}, expected 2")]
    NotRankTwo(usize),
    #[error("quadratic parameter is ambiguous: {0}")]
    AmbiguousParameter(String),
    #[error("module too large for a dense endomorphism solve ({0} > 512)")]
    TooLarge(usize),
    #[error(transparent)]
    Module(#[from] ModrepError),
}

/// A module in row convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowModule {
    field: Field,
    dim: usize,
    gens: Vec<Matrix>,
}

impl RowModule {
    pub fn new(field: &Field, dim: usize, gens: Vec<Matrix>) -> RowModule {
        debug_assert!(gens.iter().all(|g| g.nrows() == dim && g.ncols() == dim));
        RowModule {
            field: field.clone(),
            dim,
            gens,
        }
    }

    pub fn from_flat(m: &FlatModule) -> RowModule {
        RowModule::new(m.field(), m.dim(), m.gens().iter().map(|g| g.transpose()).collect())
    }

    pub fn to_flat(&self, label: &str) -> FlatModule {
        FlatModule::new(
            &self.field,
            self.gens.iter().map(|g| g.transpose()).collect(),
            label,
        )
        .expect("row module has consistent generators")
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

    /// The module with transposed generators (the dual, up to inverting).
    pub fn transposed(&self) -> RowModule {
        RowModule::new(
            &self.field,
            self.dim,
            self.gens.iter().map(|g| g.transpose()).collect(),
        )
    }

    /// Product of the generators listed in `word`.
    pub fn word(&self, word: &[usize]) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.dim);
        for &k in word {
            acc = acc.mul(&self.gens[k]);
        }
        acc
    }

    /// Smallest submodule containing the seeds.
    pub fn spin(&self, seeds: &[Row]) -> SubspaceBasis {
        let mut b = SubspaceBasis::new(&self.field, self.dim);
        for s in seeds {
            b.insert(s.clone());
        }
        let mut k = 0;
        while k < b.dim() && b.dim() < self.dim {
            let v = b.rows()[k].clone();
            for g in &self.gens {
                b.insert(v.mul_mat(g));
                if b.dim() == self.dim {
                    break;
                }
            }
            k += 1;
        }
        b
    }

    /// Action on a submodule, in the coordinates of its semi-echelon basis.
    pub fn submodule(&self, w: &SubspaceBasis) -> RowModule {
        let k = w.dim();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let rows = w
                    .rows()
                    .iter()
                    .map(|r| {
                        let (coords, rest) = w.coordinates(r.mul_mat(g));
                        debug_assert!(rest.is_zero(), "subspace is not invariant");
                        Row::from_values(&self.field, &coords)
                    })
                    .collect();
                Matrix::from_rows(&self.field, k, rows)
            })
            .collect();
        RowModule::new(&self.field, k, gens)
    }

    /// Columns that index the quotient basis modulo `w`.
    pub fn quotient_columns(&self, w: &SubspaceBasis) -> Vec<usize> {
        let mut is_piv = vec![false; self.dim];
        for &p in w.pivots() {
            is_piv[p] = true;
        }
        (0..self.dim).filter(|&j| !is_piv[j]).collect()
    }

    /// Action on M/W with basis the images of unit vectors at non-pivot columns.
    pub fn quotient(&self, w: &SubspaceBasis) -> RowModule {
        let cols = self.quotient_columns(w);
        let k = cols.len();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let rows = cols
                    .iter()
                    .map(|&j| {
                        let red = w.reduce(g.row(j).clone());
                        let vals: Vec<u32> = cols.iter().map(|&c| red.get(c)).collect();
                        Row::from_values(&self.field, &vals)
                    })
                    .collect();
                Matrix::from_rows(&self.field, k, rows)
            })
            .collect();
        RowModule::new(&self.field, k, gens)
    }

    /// Whether a subspace is invariant under every generator.
    pub fn is_invariant(&self, w: &SubspaceBasis) -> bool {
        w.rows()
            .iter()
            .all(|r| self.gens.iter().all(|g| w.contains(&r.mul_mat(g))))
    }
}

/// Lifts a quotient vector back to the ambient space by placing its entries
/// at the quotient columns.
pub fn lift_from_quotient(field: &Field, dim: usize, cols: &[usize], v: &Row) -> Row {
    let mut out = Row::zero(field, dim);
    for (i, &c) in cols.iter().enumerate() {
        let x = v.get(i);
        if x != 0 {
            out.set(c, x);
        }
    }
    out
}

#[cfg(test)]
mod tests;
