//! Socles and socle series.

use serde_json::{json, Value};

use super::chop::{chop_rows, CompositionReport};
use super::hom::hom_rows;
use super::{MeatAxeError, RowModule};
use crate::matrix::SubspaceBasis;
use crate::modrep::FlatModule;

/// One layer: (factor id, multiplicity) in canonical class order.
pub type SocleLayer = Vec<(String, usize)>;

#[derive(Clone, Debug)]
pub struct SocleReport {
    /// Socle first.
    pub layers: Vec<SocleLayer>,
    pub uniserial: bool,
    pub composition: CompositionReport,
}

impl SocleReport {
    /// Dimensions of the layers, socle first.
    pub fn layer_dims(&self) -> Vec<Vec<(usize, usize)>> {
        self.layers
            .iter()
            .map(|l| {
                l.iter()
                    .map(|(id, mult)| (self.composition.class_by_id(id).unwrap().dim, *mult))
                    .collect()
            })
            .collect()
    }

    pub fn is_semisimple(&self) -> bool {
        self.layers.len() <= 1
    }

    pub fn to_json(&self) -> Value {
        let c = &self.composition;
        json!({
            "dim": c.dim,
            "field": [c.field.characteristic(), c.field.degree()],
            "seed": c.seed,
            "factors": c.classes.iter().map(|k| json!({
                "id": k.id, "dim": k.dim, "mult": k.mult,
            })).collect::<Vec<_>>(),
            "socle_layers": self.layers.iter().map(|l| l.iter().map(|(id, mult)| json!({
                "id": id, "mult": mult,
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "uniserial": self.uniserial,
        })
    }
}

/// Socle of `m` as a subspace, with the multiplicity of each class of
/// `report` in it (index-aligned with `report.classes`).
pub fn socle(m: &RowModule, report: &CompositionReport) -> (SubspaceBasis, Vec<usize>) {
    let mut total = SubspaceBasis::new(m.field(), m.dim());
    let mut mults = Vec::with_capacity(report.classes.len());
    for class in &report.classes {
        let t = &class.module;
        if t.dim() > m.dim() {
            mults.push(0);
            continue;
        }
        let mut component = SubspaceBasis::new(m.field(), m.dim());
        for phi in hom_rows(t, m) {
            for r in phi.rows() {
                component.insert(r.clone());
            }
        }
        debug_assert_eq!(component.dim() % t.dim(), 0);
        mults.push(component.dim() / t.dim());
        for r in component.rows() {
            total.insert(r.clone());
        }
    }
    (total, mults)
}

/// Socle series using the composition factors in `report`.
pub fn socle_series_rows(m: &RowModule, report: CompositionReport) -> SocleReport {
    let mut layers = Vec::new();
    let mut current = m.clone();
    while current.dim() > 0 {
        let (soc, mults) = socle(&current, &report);
        assert!(soc.dim() > 0, "a nonzero module has a nonzero socle");
        layers.push(
            mults
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (report.classes[i].id.clone(), k))
                .collect::<SocleLayer>(),
        );
        current = current.quotient(&soc);
    }
    let uniserial = layers.iter().all(|l| l.len() == 1 && l[0].1 == 1);
    SocleReport {
        layers,
        uniserial,
        composition: report,
    }
}

/// Socle series of a module, chopping it first with `seed`.
pub fn socle_series(m: &FlatModule, seed: u64) -> Result<SocleReport, MeatAxeError> {
    let r = RowModule::from_flat(m);
    let report = chop_rows(&r, seed)?;
    Ok(socle_series_rows(&r, report))
}
