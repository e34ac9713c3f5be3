//! Homomorphism spaces via spin-up scripts.
//!
//! The source module S is spun from unit vectors, recording for every new basis
//! vector which generator produced it. A homomorphism is fixed by the images of
//! the seeds, so images are tracked as linear functions of a parameter vector
//! `z`: φ(b_l) = z Y_l. Each linear dependency met while spinning imposes
//! `z D = 0` and shrinks the parameter space.

use super::{MeatAxeError, RowModule};
use crate::matrix::{Matrix, Row, SubspaceBasis};
use crate::modrep::FlatModule;

/// Basis of Hom(S, M) in row convention: s×n matrices Φ with R^S_g Φ = Φ R^M_g.
pub(crate) fn hom_rows(s: &RowModule, m: &RowModule) -> Vec<Matrix> {
    assert_eq!(s.gens().len(), m.gens().len(), "generator counts differ");
    assert!(s.field() == m.field(), "fields differ");
    let f = s.field();
    let sd = s.dim();
    let n = m.dim();

    let mut ech = SubspaceBasis::new(f, sd);
    let mut trans: Vec<Row> = Vec::new();
    let mut bvecs: Vec<Row> = Vec::new();
    let mut ys: Vec<Matrix> = Vec::new();
    let mut d = 0usize;
    let mut next_unit = 0usize;
    let mut k = 0usize;

    // inserts a vector independent of `ech`, given its reduction data
    let insert = |ech: &mut SubspaceBasis,
                      trans: &mut Vec<Row>,
                      coords: &[u32],
                      rest: Row,
                      index: usize| {
        let mut t = Row::unit(f, sd, index);
        for (c, tr) in coords.iter().zip(trans.iter()) {
            if *c != 0 {
                t.axpy(f.neg(*c), tr, f);
            }
        }
        let piv = rest.first_nonzero().expect("independent vector");
        let scale = f.inv(rest.get(piv));
        let mut r = rest;
        r.scale(scale, f);
        t.scale(scale, f);
        ech.insert_reduced(r);
        trans.push(t);
    };

    while bvecs.len() < sd || k < bvecs.len() {
        if k == bvecs.len() {
            // the spun part is closed; start from the next unit vector outside it
            let (coords, rest, j) = loop {
                let e = Row::unit(f, sd, next_unit);
                let (coords, rest) = ech.coordinates(e);
                next_unit += 1;
                if !rest.is_zero() {
                    break (coords, rest, next_unit - 1);
                }
            };
            for y in ys.iter_mut() {
                for _ in 0..n {
                    y.push_row(Row::zero(f, n));
                }
            }
            let mut seed = Matrix::zero(f, d + n, n);
            for i in 0..n {
                seed.set(d + i, i, 1);
            }
            d += n;
            let idx = bvecs.len();
            insert(&mut ech, &mut trans, &coords, rest, idx);
            bvecs.push(Row::unit(f, sd, j));
            ys.push(seed);
        }
        let v = bvecs[k].clone();
        for (gs, gm) in s.gens().iter().zip(m.gens()) {
            let img = v.mul_mat(gs);
            let (coords, rest) = ech.coordinates(img.clone());
            let ynew = ys[k].mul(gm);
            if !rest.is_zero() {
                let idx = bvecs.len();
                insert(&mut ech, &mut trans, &coords, rest, idx);
                bvecs.push(img);
                ys.push(ynew);
            } else {
                let mut c = Row::zero(f, sd);
                for (ci, tr) in coords.iter().zip(&trans) {
                    if *ci != 0 {
                        c.axpy(*ci, tr, f);
                    }
                }
                let mut diff = ynew;
                for (l, y) in ys.iter().enumerate() {
                    let cl = c.get(l);
                    if cl != 0 {
                        diff = diff.add_scaled(y, f.neg(cl));
                    }
                }
                if !diff.is_zero() {
                    let null = diff.left_nullspace();
                    d = null.nrows();
                    if d == 0 {
                        return Vec::new();
                    }
                    for y in ys.iter_mut() {
                        *y = null.mul(y);
                    }
                }
            }
        }
        k += 1;
    }

    let b = Matrix::from_rows(f, sd, bvecs);
    let binv = b.inverse().expect("spun vectors form a basis");
    (0..d)
        .map(|i| {
            let rows = ys.iter().map(|y| y.row(i).clone()).collect();
            binv.mul(&Matrix::from_rows(f, n, rows))
        })
        .collect()
}

/// Basis of Hom_G(A, B) in column convention: matrices X with X A_g = B_g X.
pub fn hom_space(a: &FlatModule, b: &FlatModule) -> Result<Vec<Matrix>, MeatAxeError> {
    if a.field() != b.field() || a.gens().len() != b.gens().len() {
        return Err(MeatAxeError::Incompatible(
            "modules differ in field or number of generators".into(),
        ));
    }
    let homs = hom_rows(&RowModule::from_flat(a), &RowModule::from_flat(b));
    Ok(homs.into_iter().map(|h| h.transpose()).collect())
}

/// Isomorphism test for modules already known to be irreducible.
pub fn is_isomorphic_rows(a: &RowModule, b: &RowModule) -> bool {
    a.dim() == b.dim() && !hom_rows(a, b).is_empty()
}

/// Isomorphism test for irreducible modules; both are certified first.
pub fn is_isomorphic(a: &FlatModule, b: &FlatModule) -> Result<bool, MeatAxeError> {
    if a.field() != b.field() || a.gens().len() != b.gens().len() {
        return Err(MeatAxeError::Incompatible(
            "modules differ in field or number of generators".into(),
        ));
    }
    let ra = RowModule::from_flat(a);
    let rb = RowModule::from_flat(b);
    for r in [&ra, &rb] {
        if !super::chop::is_irreducible(r, 1)? {
            return Err(MeatAxeError::NotIrreducible);
        }
    }
    Ok(is_isomorphic_rows(&ra, &rb))
}
