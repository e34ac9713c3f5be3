use super::hom::hom_rows;
use super::*;
use crate::grp::{flag_table, unitary_group};
use crate::modrep::{induced_module, torus_character};

fn induced(q: u32, rank: usize, e1: u64, e2: u64, ell: u32) -> FlatModule {
    let g = unitary_group(q, rank).unwrap();
    let t = flag_table(&g);
    induced_module(&g, &t, &torus_character(q, e1, e2, ell).unwrap()).unwrap()
}

/// dim Hom(S, M) from the full linear system R^S X = X R^M.
fn brute_hom_dim(s: &RowModule, m: &RowModule) -> usize {
    let f = s.field();
    let (a, b) = (s.dim(), m.dim());
    let k = s.gens().len();
    let mut c = Matrix::zero(f, a * b, a * b * k);
    for (gi, (gs, gm)) in s.gens().iter().zip(m.gens()).enumerate() {
        let base = gi * a * b;
        for r in 0..a {
            for col in 0..b {
                let eq = base + r * b + col;
                for x in 0..a {
                    let v = gs.get(r, x);
                    let cur = c.get(x * b + col, eq);
                    c.set(x * b + col, eq, f.add(cur, v));
                }
                for x in 0..b {
                    let v = gm.get(x, col);
                    let cur = c.get(r * b + x, eq);
                    c.set(r * b + x, eq, f.sub(cur, v));
                }
            }
        }
    }
    c.left_nullspace().nrows()
}

fn direct_sum(a: &RowModule, b: &RowModule) -> RowModule {
    let f = a.field();
    let n = a.dim() + b.dim();
    let gens = a
        .gens()
        .iter()
        .zip(b.gens())
        .map(|(x, y)| {
            Matrix::from_fn(f, n, n, |i, j| {
                if i < a.dim() && j < a.dim() {
                    x.get(i, j)
                } else if i >= a.dim() && j >= a.dim() {
                    y.get(i - a.dim(), j - a.dim())
                } else {
                    0
                }
            })
        })
        .collect();
    RowModule::new(f, n, gens)
}

#[test]
fn u11_mod_two_is_uniserial() {
    let m = induced(3, 2, 0, 0, 2);
    let r = socle_series(&m, 42).unwrap();
    assert_eq!(r.composition.dims_multiset(), vec![(1, 2), (2, 1)]);
    let dims: Vec<usize> = r.layer_dims().iter().map(|l| l[0].0).collect();
    assert_eq!(dims, vec![1, 2, 1]);
    assert!(r.uniserial);
}

#[test]
fn hom_dimensions_match_linear_system() {
    let mut cases = Vec::new();
    for (q, ell) in [(3u32, 2u32), (3, 5), (3, 7), (5, 2), (5, 3), (5, 13)] {
        for e1 in [0u64, 1, (q as u64 - 1), 2 * (q as u64 - 1)] {
            for e2 in [0u64, 1] {
                cases.push(RowModule::from_flat(&induced(q, 2, e1, e2, ell)));
            }
        }
    }
    for m in &cases {
        assert_eq!(hom_rows(m, m).len(), brute_hom_dim(m, m));
        let report = chop_rows(m, 1).unwrap();
        for c in &report.classes {
            assert_eq!(hom_rows(&c.module, m).len(), brute_hom_dim(&c.module, m));
            assert_eq!(hom_rows(m, &c.module).len(), brute_hom_dim(m, &c.module));
        }
    }
}

#[test]
fn homs_commute() {
    let m = RowModule::from_flat(&induced(3, 3, 0, 0, 7));
    for phi in hom_rows(&m, &m) {
        for g in m.gens() {
            assert_eq!(g.mul(&phi), phi.mul(g));
        }
    }
}

#[test]
fn direct_sums_chop_to_unions() {
    let a = RowModule::from_flat(&induced(3, 2, 0, 0, 2));
    let b = RowModule::from_flat(&induced(3, 2, 2, 1, 2));
    let ra = chop_rows(&a, 3).unwrap();
    let rb = chop_rows(&b, 3).unwrap();
    let rs = chop_rows(&direct_sum(&a, &b), 3).unwrap();
    // merge isomorphic classes across the two reports
    let mut merged: Vec<(&RowModule, usize)> = Vec::new();
    for c in ra.classes.iter().chain(&rb.classes) {
        match merged.iter_mut().find(|(m, _)| is_isomorphic_rows(m, &c.module)) {
            Some(entry) => entry.1 += c.mult,
            None => merged.push((&c.module, c.mult)),
        }
    }
    let mut expect: Vec<(usize, usize)> = merged.iter().map(|(m, k)| (m.dim(), *k)).collect();
    expect.sort();
    assert_eq!(rs.dims_multiset(), expect);
    assert_eq!(rs.total_length(), ra.total_length() + rb.total_length());
}

#[test]
fn submodule_and_quotient_are_modules() {
    let m = RowModule::from_flat(&induced(3, 3, 0, 0, 2));
    let v = crate::matrix::Row::unit(m.field(), m.dim(), 0);
    let mut ones = crate::matrix::Row::zero(m.field(), m.dim());
    for i in 0..m.dim() {
        ones.set(i, 1);
    }
    // the all-ones vector spans the trivial submodule of a permutation module
    let triv = m.spin(&[ones]);
    assert_eq!(triv.dim(), 1);
    assert!(m.is_invariant(&triv));
    assert_eq!(m.spin(&[v]).dim(), m.dim());
    let q = m.quotient(&triv);
    assert_eq!(q.dim(), m.dim() - 1);
    // quotient action composes like the original
    let gq = &q.gens()[0];
    let hq = &q.gens()[1];
    let ghm = RowModule::new(m.field(), m.dim(), vec![m.gens()[0].mul(&m.gens()[1])]);
    let ghq = ghm.quotient(&triv);
    assert_eq!(ghq.gens()[0], gq.mul(hq));
}

#[test]
fn u11_quadratic_parameter() {
    let m = induced(3, 2, 0, 0, 101);
    let e = endomorphism_algebra(&m).unwrap();
    assert_eq!(e.dimension(), 2);
    let qp = quadratic_parameter(&e, &m, 3).unwrap();
    assert_eq!(qp.d, 3);
    let f = m.field();
    let t = &qp.normalized;
    let d = f.from_int(3);
    let rhs = t.scale(f.sub(d, 1)).add(&Matrix::scalar(f, m.dim(), d));
    assert_eq!(t.mul(t), rhs);
}

#[test]
fn irreducible_end_is_one_dimensional() {
    let m = induced(3, 2, 0, 0, 101);
    let r = chop(&m, 5).unwrap();
    for c in &r.classes {
        let e = endomorphism_algebra(&c.flat_module()).unwrap();
        assert_eq!(e.dimension(), 1);
        assert!(is_isomorphic(&c.flat_module(), &c.flat_module()).unwrap());
    }
    assert_eq!(
        is_isomorphic(&m, &m),
        Err(MeatAxeError::NotIrreducible)
    );
    assert_eq!(
        quadratic_parameter(&endomorphism_algebra(&r.classes[0].flat_module()).unwrap(), &m, 3)
            .err(),
        Some(MeatAxeError::NotRankTwo(1))
    );
}
