//! Splitting modules into composition factors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::hom::is_isomorphic_rows;
use super::{MeatAxeError, RowModule};
use crate::gf::Field;
use crate::matrix::{Matrix, SubspaceBasis};
use crate::modrep::FlatModule;
use crate::poly::Poly;

/// Candidates tried per split before giving up.
pub const RETRY_BUDGET: usize = 200;
const MAX_WORD_LEN: usize = 6;
const WORDS_PER_ELEMENT: usize = 3;
const MAX_FACTOR_DEGREE: usize = 16;
const STANDARD_WORDS: usize = 8;

/// Evidence that a factor is irreducible: the algebra element Σ c_i w_i, the
/// irreducible factor f of its characteristic polynomial, and the vector of
/// ker f(A) that was spun.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub words: Vec<Vec<usize>>,
    pub coeffs: Vec<u32>,
    pub factor: Vec<u32>,
    pub vector: Vec<u32>,
}

impl Witness {
    fn one_dimensional() -> Witness {
        Witness {
            words: Vec::new(),
            coeffs: Vec::new(),
            factor: Vec::new(),
            vector: vec![1],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "words": self.words,
            "coeffs": self.coeffs,
            "factor": self.factor,
            "vector": self.vector,
        })
    }
}

/// Isomorphism invariant used to order and pre-sort factors.
pub type Fingerprint = (usize, Vec<Poly>);

/// One isomorphism class of composition factors.
#[derive(Clone, Debug)]
pub struct FactorClass {
    pub id: String,
    pub dim: usize,
    pub mult: usize,
    pub fingerprint: Fingerprint,
    pub witness: Witness,
    pub module: RowModule,
}

impl FactorClass {
    pub fn flat_module(&self) -> FlatModule {
        self.module.to_flat(&format!("composition factor {}", self.id))
    }
}

#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub dim: usize,
    pub field: Field,
    pub seed: u64,
    /// Classes in canonical order (by fingerprint).
    pub classes: Vec<FactorClass>,
    /// Class index of each factor of the computed series, bottom first.
    pub series: Vec<usize>,
}

impl CompositionReport {
    pub fn total_length(&self) -> usize {
        self.series.len()
    }

    /// Sorted (dim, multiplicity) pairs.
    pub fn dims_multiset(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.classes.iter().map(|c| (c.dim, c.mult)).collect();
        v.sort();
        v
    }

    pub fn class_by_id(&self, id: &str) -> Option<&FactorClass> {
        self.classes.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "field": [self.field.characteristic(), self.field.degree()],
            "seed": self.seed,
            "length": self.total_length(),
            "factors": self.classes.iter().map(|c| json!({
                "id": c.id,
                "dim": c.dim,
                "mult": c.mult,
                "witness": c.witness.to_json(),
            })).collect::<Vec<_>>(),
            "series": self.series.iter().map(|&i| self.classes[i].id.clone()).collect::<Vec<_>>(),
        })
    }
}

enum Outcome {
    Irreducible(Witness),
    Split(SubspaceBasis),
}

fn random_algebra_element(m: &RowModule, rng: &mut ChaCha8Rng) -> (Matrix, Vec<Vec<usize>>, Vec<u32>) {
    let f = m.field();
    let k = m.gens().len();
    let mut a = Matrix::zero(f, m.dim(), m.dim());
    let mut words = Vec::with_capacity(WORDS_PER_ELEMENT);
    let mut coeffs = Vec::with_capacity(WORDS_PER_ELEMENT);
    for _ in 0..WORDS_PER_ELEMENT {
        let len = rng.random_range(1..=MAX_WORD_LEN);
        let w: Vec<usize> = (0..len).map(|_| rng.random_range(0..k)).collect();
        let c = rng.random_range(1..f.order());
        a = a.add_scaled(&m.word(&w), c);
        words.push(w);
        coeffs.push(c);
    }
    (a, words, coeffs)
}

/// Subspace annihilated by all vectors of `w`.
fn annihilator(w: &SubspaceBasis) -> SubspaceBasis {
    let null = w.to_matrix().transpose().left_nullspace();
    let mut out = SubspaceBasis::new(w.field(), w.ambient_dim());
    for r in null.rows() {
        out.insert(r.clone());
    }
    out
}

fn split_or_certify(m: &RowModule, rng: &mut ChaCha8Rng) -> Result<Outcome, MeatAxeError> {
    let n = m.dim();
    if n == 1 {
        return Ok(Outcome::Irreducible(Witness::one_dimensional()));
    }
    let f = m.field();
    let mut dual: Option<RowModule> = None;
    for _ in 0..RETRY_BUDGET {
        let (a, words, coeffs) = random_algebra_element(m, rng);
        let cp = a.charpoly();
        for fac in cp.irreducible_factors(f) {
            if fac.deg() > MAX_FACTOR_DEGREE {
                break;
            }
            let nf = a.eval_poly(&fac);
            let ker = nf.left_nullspace();
            let v = ker.row(0).clone();
            let sp = m.spin(std::slice::from_ref(&v));
            if sp.dim() < n {
                return Ok(Outcome::Split(sp));
            }
            if ker.nrows() != fac.deg() {
                continue;
            }
            // Norton: every vector of ker f(A) generates M; test the dual side
            let kt = nf.right_nullspace();
            let dual = dual.get_or_insert_with(|| m.transposed());
            let spt = dual.spin(&[kt.row(0).clone()]);
            if spt.dim() < n {
                return Ok(Outcome::Split(annihilator(&spt)));
            }
            return Ok(Outcome::Irreducible(Witness {
                words,
                coeffs,
                factor: fac.coeffs().to_vec(),
                vector: v.to_vec(),
            }));
        }
    }
    Err(MeatAxeError::RetryBudgetExceeded {
        dim: n,
        tries: RETRY_BUDGET,
    })
}

/// Irreducibility test (a proper submodule is found, or Norton's criterion
/// certifies irreducibility).
pub(crate) fn is_irreducible(m: &RowModule, seed: u64) -> Result<bool, MeatAxeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(matches!(split_or_certify(m, &mut rng)?, Outcome::Irreducible(_)))
}

fn collect_factors(
    m: &RowModule,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<(RowModule, Witness)>,
) -> Result<(), MeatAxeError> {
    match split_or_certify(m, rng)? {
        Outcome::Irreducible(w) => out.push((m.clone(), w)),
        Outcome::Split(sub) => {
            collect_factors(&m.submodule(&sub), rng, out)?;
            collect_factors(&m.quotient(&sub), rng, out)?;
        }
    }
    Ok(())
}

/// Dimension and sorted characteristic polynomials of the standard words
/// X_1 = G_0, X_(i+1) = X_i G_(i mod k) + G_(i+1 mod k).
pub(crate) fn fingerprint(m: &RowModule) -> Fingerprint {
    let k = m.gens().len();
    let mut x = m.gens()[0].clone();
    let mut polys = Vec::with_capacity(STANDARD_WORDS);
    for i in 0..STANDARD_WORDS {
        polys.push(x.charpoly());
        x = x.mul(&m.gens()[i % k]).add(&m.gens()[(i + 1) % k]);
    }
    polys.sort();
    (m.dim(), polys)
}

fn class_suffix(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// Composition factors of a row module; deterministic in `seed`.
pub fn chop_rows(m: &RowModule, seed: u64) -> Result<CompositionReport, MeatAxeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    collect_factors(m, &mut rng, &mut raw)?;

    let mut classes: Vec<(Fingerprint, RowModule, Witness, usize)> = Vec::new();
    let mut series_raw = Vec::with_capacity(raw.len());
    for (module, witness) in raw {
        let fp = fingerprint(&module);
        let found = classes
            .iter()
            .position(|(cfp, cm, _, _)| *cfp == fp && is_isomorphic_rows(cm, &module));
        match found {
            Some(i) => {
                classes[i].3 += 1;
                series_raw.push(i);
            }
            None => {
                series_raw.push(classes.len());
                classes.push((fp, module, witness, 1));
            }
        }
    }
    // stable sort keeps discovery order among equal fingerprints
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| classes[a].0.cmp(&classes[b].0));
    let mut rank = vec![0; classes.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut per_dim: std::collections::HashMap<usize, usize> = Default::default();
    let mut slots: Vec<Option<FactorClass>> = vec![None; classes.len()];
    let mut taken: Vec<Option<(Fingerprint, RowModule, Witness, usize)>> =
        classes.into_iter().map(Some).collect();
    for &old in &order {
        let (fp, module, witness, mult) = taken[old].take().unwrap();
        let dim = fp.0;
        let counter = per_dim.entry(dim).or_insert(0);
        let id = format!("{dim}{}", class_suffix(*counter));
        *counter += 1;
        slots[rank[old]] = Some(FactorClass {
            id,
            dim,
            mult,
            fingerprint: fp,
            witness,
            module,
        });
    }
    Ok(CompositionReport {
        dim: m.dim(),
        field: m.field().clone(),
        seed,
        classes: slots.into_iter().map(Option::unwrap).collect(),
        series: series_raw.into_iter().map(|i| rank[i]).collect(),
    })
}

/// Composition factors of a module; deterministic in `seed`.
pub fn chop(m: &FlatModule, seed: u64) -> Result<CompositionReport, MeatAxeError> {
    chop_rows(&RowModule::from_flat(m), seed)
}
