//! Principal series structure predicted from the classification: dimension
//! tables for the finite groups, finite principal series by congruence case,
//! p-adic reducibility points and composition series, and the check that
//! ties the p-adic cuspidal subquotients to the finite MeatAxe reports.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::gf::{is_prime, prime_divisors};
use crate::meataxe::CompositionReport;
use crate::modrep::project_prime_to;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("mismatched parameters: {0}")]
    MismatchedParameters(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Triv,
    St,
    Nu,
    Sigma3,
    Tau,
    TauPlus,
    SigmaBar,
    R1H,
    RStH,
    /// Irreducible principal series of a regular character.
    Ps,
    /// A non-cuspidal irreducible p-adic subquotient without a standard name.
    Pi,
    ILambdaX,
    ILambdaY,
    IKappaX,
    IKappaY,
}

impl LabelKind {
    pub fn name(&self) -> &'static str {
        match self {
            LabelKind::Triv => "triv",
            LabelKind::St => "St",
            LabelKind::Nu => "nu",
            LabelKind::Sigma3 => "sigma3",
            LabelKind::Tau => "tau",
            LabelKind::TauPlus => "tau_plus",
            LabelKind::SigmaBar => "sigma_bar",
            LabelKind::R1H => "R_1H",
            LabelKind::RStH => "R_StH",
            LabelKind::Ps => "ps",
            LabelKind::Pi => "pi",
            LabelKind::ILambdaX => "I_Lambda_x",
            LabelKind::ILambdaY => "I_Lambda_y",
            LabelKind::IKappaX => "I_kappa_x",
            LabelKind::IKappaY => "I_kappa_y",
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(
            self,
            LabelKind::Nu
                | LabelKind::Sigma3
                | LabelKind::Tau
                | LabelKind::TauPlus
                | LabelKind::SigmaBar
                | LabelKind::ILambdaX
                | LabelKind::ILambdaY
                | LabelKind::IKappaX
                | LabelKind::IKappaY
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleLabel {
    pub kind: LabelKind,
    /// Character parameters, "1" for trivial.
    pub args: Vec<String>,
    /// Finite cuspidal inside an I_Lambda / I_kappa label.
    pub inner: Option<Box<IrreducibleLabel>>,
    /// Second tensor factor of an I_Lambda_y / I_kappa label.
    pub twist: Option<String>,
    pub dim_ladic: Option<u64>,
    pub dim_mod: Option<u64>,
}

impl IrreducibleLabel {
    fn finite(kind: LabelKind, args: &[&str], dim_ladic: Option<u64>, dim_mod: u64) -> Self {
        IrreducibleLabel {
            kind,
            args: args.iter().map(|s| s.to_string()).collect(),
            inner: None,
            twist: None,
            dim_ladic,
            dim_mod: Some(dim_mod),
        }
    }

    fn padic(kind: LabelKind, args: &[&str]) -> Self {
        IrreducibleLabel {
            kind,
            args: args.iter().map(|s| s.to_string()).collect(),
            inner: None,
            twist: None,
            dim_ladic: None,
            dim_mod: None,
        }
    }

    fn induced(kind: LabelKind, inner: IrreducibleLabel, twist: Option<&str>) -> Self {
        IrreducibleLabel {
            kind,
            args: Vec::new(),
            inner: Some(Box::new(inner)),
            twist: twist.map(str::to_string),
            dim_ladic: None,
            dim_mod: None,
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        self.kind.is_cuspidal()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.to_string(),
            "kind": self.kind.name(),
            "args": self.args,
            "inner": self.inner.as_ref().map(|i| i.to_json()),
            "twist": self.twist,
            "dim_ladic": self.dim_ladic.map_or(json!("n/a"), |d| json!(d)),
            "dim_mod": self.dim_mod.map_or(json!("n/a"), |d| json!(d)),
        })
    }
}

impl fmt::Display for IrreducibleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(inner) = &self.inner {
            write!(f, "({inner}")?;
            if let Some(t) = &self.twist {
                write!(f, " x {t}")?;
            }
            write!(f, ")")
        } else if self.args.is_empty() {
            Ok(())
        } else {
            write!(f, "({})", self.args.join(","))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StructureFlags {
    pub uniserial: bool,
    pub semisimple: bool,
    /// None when the unique sub / quotient are not both defined.
    pub sub_iso_quotient: Option<bool>,
    pub has_cuspidal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub reducible: bool,
    pub length: usize,
    pub factors: Vec<(IrreducibleLabel, usize)>,
    /// Socle layers (socle first) by label name, where the structure is known.
    pub layers: Option<Vec<Vec<(String, usize)>>>,
    pub flags: StructureFlags,
    pub sub: Option<String>,
    pub quotient: Option<String>,
    pub notes: Vec<String>,
    pub clause: String,
    /// Dimension of the module for finite reports.
    pub dim: Option<u64>,
}

impl StructureReport {
    /// (dim_mod, multiplicity) pairs sorted, for comparison with a chop.
    pub fn dims_multiset(&self) -> Vec<(usize, usize)> {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for (l, k) in &self.factors {
            if let Some(d) = l.dim_mod {
                *m.entry(d as usize).or_default() += k;
            }
        }
        m.into_iter().collect()
    }

    /// Dimensions in each socle layer, sorted within the layer.
    pub fn layer_dims(&self) -> Option<Vec<Vec<(usize, usize)>>> {
        let layers = self.layers.as_ref()?;
        let dim_of = |name: &str| {
            self.factors
                .iter()
                .find(|(l, _)| l.to_string() == name)
                .and_then(|(l, _)| l.dim_mod)
                .unwrap_or(0) as usize
        };
        Some(
            layers
                .iter()
                .map(|layer| {
                    let mut v: Vec<(usize, usize)> =
                        layer.iter().map(|(n, k)| (dim_of(n), *k)).collect();
                    v.sort();
                    v
                })
                .collect(),
        )
    }

    pub fn cuspidal_factors(&self) -> Vec<(&IrreducibleLabel, usize)> {
        self.factors
            .iter()
            .filter(|(l, _)| l.is_cuspidal())
            .map(|(l, k)| (l, *k))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "reducible": self.reducible,
            "length": self.length,
            "dim": self.dim,
            "factors": self.factors.iter().map(|(l, k)| {
                let mut v = l.to_json();
                v["mult"] = json!(k);
                v
            }).collect::<Vec<_>>(),
            "socle_layers": self.layers.as_ref().map(|ls| ls.iter().map(|l| l.iter().map(|(n, k)| json!({
                "name": n, "mult": k,
            })).collect::<Vec<_>>()).collect::<Vec<_>>()),
            "flags": {
                "uniserial": self.flags.uniserial,
                "semisimple": self.flags.semisimple,
                "sub_iso_quotient": self.flags.sub_iso_quotient,
                "has_cuspidal": self.flags.has_cuspidal,
            },
            "sub": self.sub,
            "quotient": self.quotient,
            "notes": self.notes,
            "clause": self.clause,
        })
    }
}

fn check_q(q: u64) -> Result<u64, ClassifyError> {
    let ps = prime_divisors(q);
    if q < 3 || ps.len() != 1 || ps[0] == 2 {
        return Err(ClassifyError::BadParams(format!("q = {q} is not an odd prime power")));
    }
    Ok(ps[0])
}

fn check_ell(q: u64, ell: u64) -> Result<(), ClassifyError> {
    let p = check_q(q)?;
    if ell != 0 && !is_prime(ell) {
        return Err(ClassifyError::BadParams(format!("ell = {ell} is not 0 or a prime")));
    }
    if ell == p {
        return Err(ClassifyError::BadParams(format!(
            "ell = {ell} is the characteristic of the residue field"
        )));
    }
    Ok(())
}

fn divides(ell: u64, n: u64) -> bool {
    ell != 0 && n.is_multiple_of(ell)
}

/// Dimensions and counts of the characteristic-zero irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadicTable {
    pub q: u64,
    pub sigma: u64,
    pub tau: u64,
    pub nu: u64,
    pub st: u64,
    pub r1: u64,
    pub rst: u64,
    /// Cuspidals of U(1,1).
    pub sigma_h: u64,
    pub count_sigma: u64,
    pub count_tau: u64,
    pub count_nu: u64,
    pub count_cuspidal_h: u64,
}

impl LadicTable {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "dims": {
                "sigma": self.sigma, "tau": self.tau, "nu": self.nu, "St": self.st,
                "R_1": self.r1, "R_St": self.rst, "sigma_H": self.sigma_h,
            },
            "counts": {
                "sigma": self.count_sigma, "tau": self.count_tau, "nu": self.count_nu,
                "cuspidal_H": self.count_cuspidal_h,
            },
        })
    }
}

pub fn ladic_dimension_table(q: u64) -> Result<LadicTable, ClassifyError> {
    check_q(q)?;
    Ok(LadicTable {
        q,
        sigma: (q - 1) * (q * q - q + 1),
        tau: (q - 1) * (q + 1) * (q + 1),
        nu: q * (q - 1),
        st: q * q * q,
        r1: q * q - q + 1,
        rst: q * (q * q - q + 1),
        sigma_h: q - 1,
        count_sigma: (q + 1) * q * (q - 1) / 6,
        count_tau: (q + 1) * q * (q - 1) / 3,
        count_nu: q + 1,
        count_cuspidal_h: (q * q + q) / 2,
    })
}

/// Dimensions of the reductions mod ell of the cuspidal families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularTable {
    pub q: u64,
    pub ell: u64,
    pub nu_bar: u64,
    pub sigma_bar: u64,
    pub sigma_bar_h: u64,
    /// Present only when the reduction of tau splits off a non-lifting piece.
    pub tau_plus: Option<u64>,
}

impl ModularTable {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q, "ell": self.ell, "nu_bar": self.nu_bar, "sigma_bar": self.sigma_bar,
            "sigma_bar_H": self.sigma_bar_h, "tau_plus": self.tau_plus,
        })
    }
}

pub fn modular_constituent_dims(q: u64, ell: u64) -> Result<ModularTable, ClassifyError> {
    check_ell(q, ell)?;
    let t = ladic_dimension_table(q)?;
    let tau_plus = if ell != 3 && divides(ell, q * q - q + 1) {
        Some(t.tau - t.nu)
    } else if ell == 2 && (q - 1).is_multiple_of(4) {
        Some(t.tau - 2 * t.nu)
    } else {
        None
    };
    Ok(ModularTable {
        q,
        ell,
        nu_bar: t.nu,
        sigma_bar: t.sigma,
        sigma_bar_h: t.sigma_h,
        tau_plus,
    })
}

fn char_name(k: u64) -> String {
    if k == 0 {
        "1".to_string()
    } else {
        format!("chi{k}")
    }
}

struct Builder {
    factors: Vec<(IrreducibleLabel, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder { factors: Vec::new() }
    }

    fn add(&mut self, l: IrreducibleLabel, k: usize) -> String {
        let name = l.to_string();
        match self.factors.iter_mut().find(|(x, _)| *x == l) {
            Some(e) => e.1 += k,
            None => self.factors.push((l, k)),
        }
        name
    }
}

fn report(
    b: Builder,
    layers: Option<Vec<Vec<(String, usize)>>>,
    sub: Option<String>,
    quotient: Option<String>,
    clause: &str,
    dim: Option<u64>,
    notes: Vec<String>,
) -> StructureReport {
    let length: usize = b.factors.iter().map(|(_, k)| k).sum();
    let uniserial = match &layers {
        Some(ls) => ls.iter().all(|l| l.len() == 1 && l[0].1 == 1),
        None => false,
    };
    let semisimple = match &layers {
        Some(ls) => ls.len() <= 1,
        None => sub.is_none() && quotient.is_none() && length <= 1,
    };
    let sub_iso_quotient = match (&sub, &quotient) {
        (Some(a), Some(b)) if length > 1 => Some(a == b),
        _ => None,
    };
    let has_cuspidal = b.factors.iter().any(|(l, _)| l.is_cuspidal());
    StructureReport {
        reducible: length > 1,
        length,
        factors: b.factors,
        layers,
        flags: StructureFlags {
            uniserial,
            semisimple,
            sub_iso_quotient,
            has_cuspidal,
        },
        sub,
        quotient,
        notes,
        clause: clause.to_string(),
        dim,
    }
}

fn single(name: &str) -> Vec<(String, usize)> {
    vec![(name.to_string(), 1)]
}

/// Structure of the finite principal series i_B^G(χ) over a field of
/// characteristic ell (0 for characteristic zero). Exponents are taken
/// relative to the fixed primitive element as in the induced modules.
pub fn finite_ps_structure(
    q: u64,
    ell: u64,
    e1: u64,
    e2: u64,
    rank: usize,
) -> Result<StructureReport, ClassifyError> {
    check_ell(q, ell)?;
    if rank != 2 && rank != 3 {
        return Err(ClassifyError::BadParams(format!("rank {rank} is not 2 or 3")));
    }
    let (n1, n2) = (q * q - 1, q + 1);
    let (e1, e2) = if ell == 0 {
        (e1 % n1, e2 % n2)
    } else {
        (project_prime_to(e1, n1, ell), project_prime_to(e2, n2, ell))
    };
    let tw = char_name(e2);
    let t = ladic_dimension_table(q)?;
    let mut b = Builder::new();
    if rank == 2 {
        let dim = q + 1;
        if e1 % (q - 1) != 0 {
            let ps = b.add(IrreducibleLabel::finite(LabelKind::Ps, &[&char_name(e1), &tw], Some(dim), dim), 1);
            return Ok(report(b, Some(vec![single(&ps)]), None, None, "regular", Some(dim), vec![]));
        }
        // a non-regular character is a twist of the trivial one by a character of det
        let det = (e2 + n2 - (e1 / (q - 1)) % n2) % n2;
        let dn = char_name(det);
        let triv = IrreducibleLabel::finite(LabelKind::Triv, &[&dn], Some(1), 1);
        if divides(ell, q + 1) {
            let one = b.add(triv, 2);
            let s = b.add(IrreducibleLabel::finite(LabelKind::SigmaBar, &[&dn], Some(t.sigma_h), t.sigma_h), 1);
            let layers = vec![single(&one), single(&s), single(&one)];
            return Ok(report(b, Some(layers), Some(one.clone()), Some(one), "ell | q+1", Some(dim), vec![]));
        }
        let one = b.add(triv, 1);
        let st = b.add(IrreducibleLabel::finite(LabelKind::St, &[&dn], Some(q), q), 1);
        let layers = vec![vec![(one, 1), (st, 1)]];
        return Ok(report(b, Some(layers), None, None, "ell does not divide q+1", Some(dim), vec![]));
    }

    let dim = q * q * q + 1;
    if e1 % (q - 1) != 0 {
        let ps = b.add(IrreducibleLabel::finite(LabelKind::Ps, &[&char_name(e1), &tw], Some(dim), dim), 1);
        return Ok(report(b, Some(vec![single(&ps)]), None, None, "regular", Some(dim), vec![]));
    }
    let psi = (e1 / (q - 1)) % n2;
    if psi != 0 {
        let pn = char_name(psi);
        let r1 = IrreducibleLabel::finite(LabelKind::R1H, &[&pn, &tw], Some(t.r1), t.r1);
        if divides(ell, q + 1) {
            let r = b.add(r1, 2);
            let s = b.add(
                IrreducibleLabel::finite(LabelKind::Sigma3, &[&pn, &pn, &tw], Some(t.sigma), t.sigma),
                1,
            );
            let layers = vec![single(&r), single(&s), single(&r)];
            return Ok(report(b, Some(layers), Some(r.clone()), Some(r), "unitary pullback, ell | q+1", Some(dim), vec![]));
        }
        let r = b.add(r1, 1);
        let rs = b.add(IrreducibleLabel::finite(LabelKind::RStH, &[&pn, &tw], Some(t.rst), t.rst), 1);
        let layers = vec![vec![(r, 1), (rs, 1)]];
        return Ok(report(b, Some(layers), None, None, "unitary pullback, ell does not divide q+1", Some(dim), vec![]));
    }

    let m = modular_constituent_dims(q, ell)?;
    let triv = IrreducibleLabel::finite(LabelKind::Triv, &[&tw], Some(1), 1);
    let nu = IrreducibleLabel::finite(LabelKind::Nu, &[&tw], Some(t.nu), m.nu_bar);
    let banal = ell == 0 || !divides(ell, (q - 1) * (q + 1) * (q * q - q + 1));
    if banal || (ell != 2 && divides(ell, q - 1)) {
        let one = b.add(triv, 1);
        let st = b.add(IrreducibleLabel::finite(LabelKind::St, &[&tw], Some(t.st), t.st), 1);
        let clause = if banal { "banal" } else { "ell | q-1" };
        return Ok(report(b, Some(vec![vec![(one, 1), (st, 1)]]), None, None, clause, Some(dim), vec![]));
    }
    if ell == 3 && divides(3, q + 1) {
        return Err(ClassifyError::UnsupportedCase(format!(
            "ell = 3 divides q+1 = {} for the trivial character",
            q + 1
        )));
    }
    if divides(ell, q * q - q + 1) {
        let tp = m.tau_plus.expect("tau_plus exists when ell | q^2-q+1");
        let one = b.add(triv, 2);
        let tau = b.add(IrreducibleLabel::finite(LabelKind::TauPlus, &[&tw], None, tp), 1);
        let layers = vec![single(&one), single(&tau), single(&one)];
        return Ok(report(b, Some(layers), Some(one.clone()), Some(one), "ell | q^2-q+1", Some(dim), vec![]));
    }
    if ell == 2 && (q - 1).is_multiple_of(4) {
        let tp = m.tau_plus.expect("tau_plus exists when 4 | q-1");
        let one = b.add(triv, 2);
        let n = b.add(nu, 1);
        let tau = b.add(IrreducibleLabel::finite(LabelKind::TauPlus, &[&tw], None, tp), 1);
        let layers = vec![single(&one), vec![(n, 1), (tau, 1)], single(&one)];
        return Ok(report(b, Some(layers), Some(one.clone()), Some(one), "ell = 2, 4 | q-1", Some(dim), vec![]));
    }
    // ell | q+1 with ell odd, or ell = 2 with 4 | q+1
    debug_assert!(divides(ell, q + 1));
    let one = b.add(triv, 2);
    let n = b.add(nu, 2);
    let s = b.add(
        IrreducibleLabel::finite(LabelKind::Sigma3, &[&tw, &tw, &tw], Some(t.sigma), m.sigma_bar),
        1,
    );
    let layers = vec![single(&one), single(&n), single(&s), single(&n), single(&one)];
    let notes = vec![format!("maximal cuspidal subquotient is uniserial: [{n}],[{s}],[{n}]")];
    Ok(report(b, Some(layers), Some(one.clone()), Some(one), "ell | q+1", Some(dim), notes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Zero,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chi1Class {
    Trivial,
    DeltaHalf,
    DeltaMinusHalf,
    EtaDeltaQuarter,
    EtaDeltaMinusQuarter,
    /// χ₁ nontrivial with χ₁ trivial on the base field.
    UnitaryPullbackNontrivial,
    RegularOther,
}

impl Chi1Class {
    pub const ALL: [Chi1Class; 7] = [
        Chi1Class::Trivial,
        Chi1Class::DeltaHalf,
        Chi1Class::DeltaMinusHalf,
        Chi1Class::EtaDeltaQuarter,
        Chi1Class::EtaDeltaMinusQuarter,
        Chi1Class::UnitaryPullbackNontrivial,
        Chi1Class::RegularOther,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Chi1Class::Trivial => "trivial",
            Chi1Class::DeltaHalf => "delta_half",
            Chi1Class::DeltaMinusHalf => "delta_minus_half",
            Chi1Class::EtaDeltaQuarter => "eta_delta_quarter",
            Chi1Class::EtaDeltaMinusQuarter => "eta_delta_minus_quarter",
            Chi1Class::UnitaryPullbackNontrivial => "unitary_pullback_nontrivial",
            Chi1Class::RegularOther => "regular_other",
        }
    }

    pub fn from_name(s: &str) -> Option<Chi1Class> {
        Chi1Class::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicCharDescriptor {
    pub level: Level,
    pub chi1_class: Chi1Class,
    /// χ₂ has been absorbed by a twist by a character of det.
    pub chi2_absorbed: bool,
    pub q: u64,
    /// 0 for characteristic zero coefficients.
    pub ell: u64,
}

impl PadicCharDescriptor {
    pub fn level_zero(chi1_class: Chi1Class, q: u64, ell: u64) -> Self {
        PadicCharDescriptor {
            level: Level::Zero,
            chi1_class,
            chi2_absorbed: true,
            q,
            ell,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": match self.level { Level::Zero => "zero", Level::Positive => "positive" },
            "chi1_class": self.chi1_class.name(),
            "chi2_absorbed": self.chi2_absorbed,
            "q": self.q,
            "ell": self.ell,
        })
    }

    fn validate(&self) -> Result<(), ClassifyError> {
        check_ell(self.q, self.ell)?;
        if self.level == Level::Positive
            && !matches!(
                self.chi1_class,
                Chi1Class::UnitaryPullbackNontrivial | Chi1Class::RegularOther
            )
        {
            return Err(ClassifyError::BadParams(format!(
                "{} is a level zero character",
                self.chi1_class.name()
            )));
        }
        if self.level == Level::Zero
            && self.chi1_class == Chi1Class::UnitaryPullbackNontrivial
            && self.ell != 0
        {
            // ψ is a character of the norm-one group of order q+1
            let mut n = self.q + 1;
            while n.is_multiple_of(self.ell) {
                n /= self.ell;
            }
            if n == 1 {
                return Err(ClassifyError::BadParams(format!(
                    "q+1 = {} is a power of ell, so no nontrivial level zero pullback exists",
                    self.q + 1
                )));
            }
        }
        Ok(())
    }
}

/// Applies the congruence identifications between δ_B, η and the trivial
/// character. Idempotent.
pub fn collapse(desc: &PadicCharDescriptor) -> PadicCharDescriptor {
    let (q, ell) = (desc.q, desc.ell);
    let mut out = *desc;
    use Chi1Class::*;
    out.chi1_class = match desc.chi1_class {
        DeltaHalf | DeltaMinusHalf | EtaDeltaQuarter | EtaDeltaMinusQuarter if divides(ell, q + 1) => {
            Trivial
        }
        DeltaHalf | DeltaMinusHalf if divides(ell, q - 1) => Trivial,
        EtaDeltaMinusQuarter if divides(ell, q - 1) => EtaDeltaQuarter,
        EtaDeltaQuarter if divides(ell, q * q + q + 1) && !divides(ell, q - 1) => DeltaMinusHalf,
        EtaDeltaMinusQuarter if divides(ell, q * q + q + 1) && !divides(ell, q - 1) => DeltaHalf,
        c => c,
    };
    out
}

fn delta_trivial(q: u64, ell: u64) -> bool {
    divides(ell, q * q - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub reducible: bool,
    /// Which of the three reducibility clauses fired.
    pub clause: Option<u8>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({"reducible": self.reducible, "clause": self.clause})
    }
}

pub fn padic_reducibility(desc: &PadicCharDescriptor) -> Result<Verdict, ClassifyError> {
    desc.validate()?;
    let d = collapse(desc);
    let clause = match d.chi1_class {
        Chi1Class::Trivial if delta_trivial(d.q, d.ell) => Some(1),
        Chi1Class::Trivial | Chi1Class::RegularOther => None,
        Chi1Class::DeltaHalf | Chi1Class::DeltaMinusHalf => Some(1),
        Chi1Class::EtaDeltaQuarter | Chi1Class::EtaDeltaMinusQuarter => Some(2),
        Chi1Class::UnitaryPullbackNontrivial => Some(3),
    };
    Ok(Verdict {
        reducible: clause.is_some(),
        clause,
    })
}

fn lx(inner: IrreducibleLabel) -> IrreducibleLabel {
    IrreducibleLabel::induced(LabelKind::ILambdaX, inner, None)
}

fn ly(inner: IrreducibleLabel) -> IrreducibleLabel {
    IrreducibleLabel::induced(LabelKind::ILambdaY, inner, Some("1"))
}

/// p-adic composition series of i_B^G(χ) for a descriptor inside the
/// hypotheses of the classification. Finite labels inside I_Lambda carry
/// their finite dimensions so the bridge can match them.
pub fn padic_ps_structure(desc: &PadicCharDescriptor) -> Result<StructureReport, ClassifyError> {
    let verdict = padic_reducibility(desc)?;
    let d = collapse(desc);
    let (q, ell) = (d.q, d.ell);
    let t = ladic_dimension_table(q)?;
    let mut b = Builder::new();
    let mut notes = Vec::new();
    if d != *desc {
        notes.push(format!("collapsed {} to {}", desc.chi1_class.name(), d.chi1_class.name()));
    }
    if !verdict.reducible {
        let ps = b.add(IrreducibleLabel::padic(LabelKind::Ps, &[d.chi1_class.name()]), 1);
        return Ok(report(b, Some(vec![single(&ps)]), Some(ps.clone()), Some(ps), "irreducible", None, notes));
    }
    let nu_bar = |arg: &str| IrreducibleLabel::finite(LabelKind::Nu, &[arg], Some(t.nu), t.nu);
    let sigma_h = |arg: &str| IrreducibleLabel::finite(LabelKind::SigmaBar, &[arg], Some(t.sigma_h), t.sigma_h);
    let generic = |b: &mut Builder, sub: &str, quo: &str, clause: &str, notes: Vec<String>| {
        let s = b.add(IrreducibleLabel::padic(LabelKind::Pi, &[sub]), 1);
        let qn = b.add(IrreducibleLabel::padic(LabelKind::Pi, &[quo]), 1);
        (s, qn, clause.to_string(), notes)
    };
    match (d.level, d.chi1_class) {
        (Level::Zero, Chi1Class::Trivial | Chi1Class::DeltaHalf | Chi1Class::DeltaMinusHalf) => {
            let half = d.chi1_class == Chi1Class::DeltaHalf;
            let m = modular_constituent_dims(q, ell)?;
            let banal = ell == 0 || !divides(ell, (q - 1) * (q + 1) * (q * q - q + 1));
            let (one_name, st_name) = (
                IrreducibleLabel::padic(LabelKind::Triv, &[]).to_string(),
                IrreducibleLabel::padic(LabelKind::St, &[]).to_string(),
            );
            if banal {
                b.add(IrreducibleLabel::padic(LabelKind::Triv, &[]), 1);
                b.add(IrreducibleLabel::padic(LabelKind::St, &[]), 1);
                let (sub, quo) = if half { (st_name, one_name) } else { (one_name, st_name) };
                let layers = vec![single(&sub), single(&quo)];
                return Ok(report(b, Some(layers), Some(sub), Some(quo), "urprincipal (1)", None, notes));
            }
            if ell != 2 && divides(ell, q - 1) {
                b.add(IrreducibleLabel::padic(LabelKind::Triv, &[]), 1);
                b.add(IrreducibleLabel::padic(LabelKind::St, &[]), 1);
                let layers = vec![vec![(one_name, 1), (st_name, 1)]];
                return Ok(report(b, Some(layers), None, None, "urprincipal (2)", None, notes));
            }
            if ell == 3 && divides(3, q + 1) {
                return Err(ClassifyError::UnsupportedCase(format!(
                    "ell = 3 divides q+1 = {}; no composition series is asserted",
                    q + 1
                )));
            }
            if divides(ell, q * q - q + 1) {
                let one = b.add(IrreducibleLabel::padic(LabelKind::Triv, &[]), 1);
                let tau = IrreducibleLabel::finite(LabelKind::TauPlus, &["1"], None, m.tau_plus.unwrap());
                b.add(lx(tau), 1);
                let nu_g = b.add(IrreducibleLabel::padic(LabelKind::Pi, &["nu_G"]), 1);
                notes.push("the unique irreducible quotient nu_G is not a character".into());
                let (sub, quo) = if half { (nu_g, one) } else { (one, nu_g) };
                return Ok(report(b, None, Some(sub), Some(quo), "urprincipal (3)", None, notes));
            }
            if ell == 2 && (q - 1) % 4 == 0 {
                let one = b.add(IrreducibleLabel::padic(LabelKind::Triv, &[]), 2);
                let n = b.add(lx(nu_bar("1")), 1);
                let tau = IrreducibleLabel::finite(LabelKind::TauPlus, &["1"], None, m.tau_plus.unwrap());
                let tn = b.add(lx(tau), 1);
                let s = b.add(ly(sigma_h("1")), 1);
                notes.push(format!("maximal proper submodule of St_G is {n} + {tn} + {s}"));
                return Ok(report(b, None, Some(one.clone()), Some(one), "urprincipal (5)", None, notes));
            }
            // ell | q+1, ell odd (ell != 3), or ell = 2 with 4 | q+1
            let one = b.add(IrreducibleLabel::padic(LabelKind::Triv, &[]), 2);
            let n = b.add(lx(nu_bar("1")), 2);
            let s3 = b.add(
                lx(IrreducibleLabel::finite(LabelKind::Sigma3, &["1"], Some(t.sigma), m.sigma_bar)),
                1,
            );
            let sy = b.add(ly(sigma_h("1")), 1);
            notes.push(format!(
                "maximal proper submodule of St_G is rho + {sy}; rho is uniserial [{n}],[{s3}],[{n}]"
            ));
            Ok(report(b, None, Some(one.clone()), Some(one), "urprincipal (4)", None, notes))
        }
        (Level::Zero, Chi1Class::EtaDeltaQuarter | Chi1Class::EtaDeltaMinusQuarter) => {
            if divides(ell, q - 1) && ell != 2 {
                b.add(IrreducibleLabel::padic(LabelKind::Pi, &["eta", "1"]), 1);
                b.add(IrreducibleLabel::padic(LabelKind::Pi, &["eta", "2"]), 1);
                let layers = vec![b.factors.iter().map(|(l, _)| (l.to_string(), 1)).collect()];
                return Ok(report(b, Some(layers), None, None, "semisimple lemma", None, notes));
            }
            let banal = ell == 0 || !divides(ell, (q - 1) * (q + 1) * (q * q - q + 1));
            if !banal {
                return Err(ClassifyError::UnsupportedCase(format!(
                    "{} with ell = {ell}, q = {q} is not described",
                    d.chi1_class.name()
                )));
            }
            let (s, qn, clause, notes) = generic(&mut b, "sub", "quotient", "redpoints (2)", notes);
            let layers = vec![single(&s), single(&qn)];
            Ok(report(b, Some(layers), Some(s), Some(qn), &clause, None, notes))
        }
        (level, Chi1Class::UnitaryPullbackNontrivial) => {
            if !divides(ell, q + 1) {
                if ell != 2 && divides(ell, q - 1) {
                    let (s, qn, clause, notes) = generic(&mut b, "a", "b", "semisimple lemma", notes);
                    let layers = vec![vec![(s, 1), (qn, 1)]];
                    return Ok(report(b, Some(layers), None, None, &clause, None, notes));
                }
                let (s, qn, clause, notes) = generic(&mut b, "sub", "quotient", "ramified, ell does not divide q+1", notes);
                let layers = vec![single(&s), single(&qn)];
                return Ok(report(b, Some(layers), Some(s), Some(qn), &clause, None, notes));
            }
            let pi = b.add(IrreducibleLabel::padic(LabelKind::Pi, &["psi"]), 2);
            if level == Level::Zero {
                b.add(
                    lx(IrreducibleLabel::finite(LabelKind::Sigma3, &["psi", "psi", "1"], Some(t.sigma), t.sigma)),
                    1,
                );
                b.add(ly(sigma_h("psi")), 1);
                Ok(report(b, None, Some(pi.clone()), Some(pi), "ramified principal series", None, notes))
            } else {
                b.add(IrreducibleLabel::induced(LabelKind::IKappaX, sigma_h("chi"), Some("1")), 1);
                b.add(IrreducibleLabel::induced(LabelKind::IKappaY, sigma_h("chi"), Some("1")), 1);
                Ok(report(b, None, Some(pi.clone()), Some(pi), "positive level", None, notes))
            }
        }
        (_, Chi1Class::RegularOther) => unreachable!("regular characters are irreducible"),
        (Level::Positive, _) => unreachable!("rejected by validate"),
    }
}

/// Cuspidal finite labels by dimension for one side of the bridge.
fn finite_cuspidal_dims(
    report: &CompositionReport,
    cuspidal: &BTreeMap<u64, LabelKind>,
) -> BTreeMap<LabelKind, Vec<(u64, usize)>> {
    let mut out: BTreeMap<LabelKind, Vec<(u64, usize)>> = BTreeMap::new();
    for c in &report.classes {
        if let Some(k) = cuspidal.get(&(c.dim as u64)) {
            out.entry(*k).or_default().push((c.dim as u64, c.mult));
        }
    }
    out
}

/// Checks the cuspidal subquotients predicted by the p-adic composition
/// series against finite composition series of the principal series of the
/// two maximal parahoric reductive quotients: U(2,1) for Λ_x and the U(1,1)
/// factor for Λ_y.
pub fn bridge_check(
    desc: &PadicCharDescriptor,
    report_x: &CompositionReport,
    report_y: &CompositionReport,
) -> Result<bool, ClassifyError> {
    if desc.level != Level::Zero {
        return Err(ClassifyError::MismatchedParameters("bridge needs a level zero descriptor".into()));
    }
    let (q, ell) = (desc.q, desc.ell);
    for (r, want) in [(report_x, q * q * q + 1), (report_y, q + 1)] {
        if r.dim as u64 != want {
            return Err(ClassifyError::MismatchedParameters(format!(
                "report of dimension {} where {want} was expected",
                r.dim
            )));
        }
        if r.field.characteristic() as u64 != ell {
            return Err(ClassifyError::MismatchedParameters(format!(
                "report over characteristic {} for ell = {ell}",
                r.field.characteristic()
            )));
        }
    }
    let predicted = padic_ps_structure(desc)?;
    let m = modular_constituent_dims(q, ell)?;
    let mut vocab_x: BTreeMap<u64, LabelKind> = BTreeMap::new();
    vocab_x.insert(m.nu_bar, LabelKind::Nu);
    vocab_x.insert(m.sigma_bar, LabelKind::Sigma3);
    if let Some(tp) = m.tau_plus {
        vocab_x.insert(tp, LabelKind::TauPlus);
    }
    let vocab_y: BTreeMap<u64, LabelKind> = [(m.sigma_bar_h, LabelKind::SigmaBar)].into();
    let found_x = finite_cuspidal_dims(report_x, &vocab_x);
    let found_y = finite_cuspidal_dims(report_y, &vocab_y);
    let mut want_x: BTreeMap<LabelKind, usize> = BTreeMap::new();
    let mut want_y: BTreeMap<LabelKind, usize> = BTreeMap::new();
    for (l, k) in &predicted.factors {
        let Some(inner) = &l.inner else { continue };
        match l.kind {
            LabelKind::ILambdaX => *want_x.entry(inner.kind).or_default() += k,
            LabelKind::ILambdaY => *want_y.entry(inner.kind).or_default() += k,
            _ => {}
        }
    }
    let covers = |want: &BTreeMap<LabelKind, usize>, found: &BTreeMap<LabelKind, Vec<(u64, usize)>>| {
        // (i) every predicted finite cuspidal occurs with at least that multiplicity
        let ok_i = want.iter().all(|(kind, k)| {
            found
                .get(kind)
                .is_some_and(|v| v.iter().map(|(_, m)| m).sum::<usize>() >= *k)
        });
        // (ii) nothing cuspidal in the finite report is missing from the prediction
        let ok_ii = found.keys().all(|kind| want.contains_key(kind));
        ok_i && ok_ii
    };
    Ok(covers(&want_x, &found_x) && covers(&want_y, &found_y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(r: &StructureReport) -> Vec<(usize, usize)> {
        r.dims_multiset()
    }

    #[test]
    fn ladic_examples() {
        let t = ladic_dimension_table(3).unwrap();
        assert_eq!((t.sigma, t.tau, t.nu, t.st, t.r1, t.rst), (14, 32, 6, 27, 7, 21));
        let t = ladic_dimension_table(5).unwrap();
        assert_eq!((t.sigma, t.tau, t.nu, t.st, t.r1, t.rst), (84, 144, 20, 125, 21, 105));
        for q in [3u64, 5, 7, 9, 11, 13] {
            let t = ladic_dimension_table(q).unwrap();
            assert_eq!(t.count_sigma, (q + 1) * q * (q - 1) / 6);
            assert_eq!(t.count_tau, (q + 1) * q * (q - 1) / 3);
            assert_eq!(t.count_nu, q + 1);
            // the permutation module on flags in characteristic zero
            assert_eq!(1 + t.st, q * q * q + 1);
            assert_eq!(t.r1 + t.rst, q * q * q + 1);
        }
        assert!(ladic_dimension_table(4).is_err());
    }

    #[test]
    fn modular_examples() {
        assert_eq!(modular_constituent_dims(3, 7).unwrap().tau_plus, Some(26));
        assert_eq!(modular_constituent_dims(5, 2).unwrap().tau_plus, Some(104));
        let m = modular_constituent_dims(3, 2).unwrap();
        assert_eq!((m.nu_bar, m.sigma_bar, m.tau_plus), (6, 14, None));
        assert!(modular_constituent_dims(3, 3).is_err());
    }

    #[test]
    fn finite_examples() {
        let r = finite_ps_structure(3, 2, 0, 0, 3).unwrap();
        assert_eq!(r.length, 5);
        assert!(r.flags.uniserial);
        assert_eq!(
            r.layer_dims().unwrap(),
            vec![vec![(1, 1)], vec![(6, 1)], vec![(14, 1)], vec![(6, 1)], vec![(1, 1)]]
        );
        let r = finite_ps_structure(5, 2, 0, 0, 3).unwrap();
        assert_eq!(r.length, 4);
        assert_eq!(dims(&r), vec![(1, 2), (20, 1), (104, 1)]);
        assert!(!r.flags.uniserial);
        let r = finite_ps_structure(5, 3, 12, 0, 3).unwrap();
        assert_eq!(r.length, 3);
        assert!(r.flags.uniserial);
        assert_eq!(r.layer_dims().unwrap(), vec![vec![(21, 1)], vec![(84, 1)], vec![(21, 1)]]);
        assert_eq!(r.flags.sub_iso_quotient, Some(true));
        let r = finite_ps_structure(3, 5, 0, 0, 3).unwrap();
        assert_eq!(dims(&r), vec![(1, 1), (27, 1)]);
        assert!(r.flags.semisimple);
        let r = finite_ps_structure(3, 7, 0, 0, 3).unwrap();
        assert_eq!(dims(&r), vec![(1, 2), (26, 1)]);
        assert!(r.flags.uniserial);
        let r = finite_ps_structure(3, 2, 0, 0, 2).unwrap();
        assert_eq!(r.layer_dims().unwrap(), vec![vec![(1, 1)], vec![(2, 1)], vec![(1, 1)]]);
        assert!(matches!(
            finite_ps_structure(5, 3, 0, 0, 3),
            Err(ClassifyError::UnsupportedCase(_))
        ));
        assert_eq!(finite_ps_structure(3, 101, 1, 0, 3).unwrap().length, 1);
    }

    #[test]
    fn finite_dimensions_are_conserved() {
        for q in [3u64, 5, 7, 9, 11] {
            for ell in [0u64, 2, 3, 5, 7, 11, 13, 19, 37] {
                if q % ell.max(1) == 0 && ell != 0 {
                    continue;
                }
                for e1 in 0..(q * q - 1) {
                    for e2 in [0, 1] {
                        for rank in [2, 3] {
                            match finite_ps_structure(q, ell, e1, e2, rank) {
                                Ok(r) => {
                                    let total: usize = dims(&r).iter().map(|(d, k)| d * k).sum();
                                    let want = if rank == 3 { q * q * q + 1 } else { q + 1 };
                                    assert_eq!(total as u64, want, "q={q} ell={ell} e1={e1}");
                                    let ld: usize = r.layer_dims().unwrap().iter().flatten().map(|(d, k)| d * k).sum();
                                    assert_eq!(ld as u64, want);
                                }
                                Err(ClassifyError::UnsupportedCase(_)) => {
                                    assert!(ell == 3 && (q + 1) % 3 == 0 && rank == 3);
                                }
                                Err(e) => panic!("{e}"),
                            }
                        }
                    }
                }
            }
        }
    }

    fn desc(c: Chi1Class, q: u64, ell: u64) -> PadicCharDescriptor {
        PadicCharDescriptor::level_zero(c, q, ell)
    }

    #[test]
    fn reducibility_examples() {
        for ell in [0u64, 2, 5, 7, 11, 13] {
            let v = padic_reducibility(&desc(Chi1Class::DeltaMinusHalf, 3, ell)).unwrap();
            assert!(v.reducible);
            assert_eq!(v.clause, Some(1));
        }
        let v = padic_reducibility(&desc(Chi1Class::RegularOther, 3, 7)).unwrap();
        assert!(!v.reducible);
        let v = padic_reducibility(&desc(Chi1Class::UnitaryPullbackNontrivial, 5, 7)).unwrap();
        assert_eq!(v.clause, Some(3));
        // eta classes collapse to the trivial character when ell | q+1
        let v = padic_reducibility(&desc(Chi1Class::EtaDeltaQuarter, 3, 2)).unwrap();
        assert_eq!(v.clause, Some(1));
        assert!(!padic_reducibility(&desc(Chi1Class::Trivial, 3, 0)).unwrap().reducible);
    }

    #[test]
    fn padic_examples() {
        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 3, 7)).unwrap();
        assert_eq!(r.length, 3);
        assert_eq!(r.flags.sub_iso_quotient, Some(false));
        let c = r.cuspidal_factors();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0.to_string(), "I_Lambda_x(tau_plus(1))");

        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 5, 3));
        assert!(matches!(r, Err(ClassifyError::UnsupportedCase(_))));

        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 5, 2)).unwrap();
        assert_eq!(r.length, 5);
        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 3, 2)).unwrap();
        assert_eq!(r.length, 6);
        let names: Vec<(String, usize)> = r.factors.iter().map(|(l, k)| (l.to_string(), *k)).collect();
        assert!(names.contains(&("triv".into(), 2)));
        assert!(names.contains(&("I_Lambda_x(nu(1))".into(), 2)));
        assert!(names.contains(&("I_Lambda_x(sigma3(1))".into(), 1)));
        assert!(names.contains(&("I_Lambda_y(sigma_bar(1) x 1)".into(), 1)));
        assert_eq!(r.flags.sub_iso_quotient, Some(true));

        let mut pos = desc(Chi1Class::UnitaryPullbackNontrivial, 5, 3);
        pos.level = Level::Positive;
        let r = padic_ps_structure(&pos).unwrap();
        assert_eq!(r.length, 4);
        assert_eq!(r.flags.sub_iso_quotient, Some(true));
        assert_eq!(r.cuspidal_factors().len(), 2);

        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 7, 0)).unwrap();
        assert_eq!(r.length, 2);
        assert_eq!(r.sub.as_deref(), Some("triv"));
        let r = padic_ps_structure(&desc(Chi1Class::DeltaMinusHalf, 7, 3)).unwrap();
        assert!(r.flags.semisimple);
        // ψ must be nontrivial mod 2, impossible when q+1 is a power of 2
        assert!(padic_ps_structure(&desc(Chi1Class::UnitaryPullbackNontrivial, 3, 2)).is_err());
    }

    #[test]
    fn collapse_and_verdicts_are_consistent() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            for ell in [0u64, 2, 3, 5, 7, 11, 13, 19, 31, 37, 61, 67, 73] {
                if ell != 0 && q % ell == 0 {
                    continue;
                }
                for c in Chi1Class::ALL {
                    for level in [Level::Zero, Level::Positive] {
                        let d = PadicCharDescriptor { level, chi1_class: c, chi2_absorbed: true, q, ell };
                        let once = collapse(&d);
                        assert_eq!(collapse(&once), once);
                        let Ok(v) = padic_reducibility(&d) else { continue };
                        match padic_ps_structure(&d) {
                            Ok(r) => assert_eq!(v.reducible, r.length >= 2, "{d:?}"),
                            Err(ClassifyError::UnsupportedCase(_)) => {}
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }
}
