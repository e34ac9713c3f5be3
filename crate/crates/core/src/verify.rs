//! The desk-scale acceptance suite: every check recomputes its modules from
//! scratch and compares against the expected structure.

use serde_json::{json, Value};

use crate::classify::{
    bridge_check, finite_ps_structure, padic_ps_structure, Chi1Class, ClassifyError,
    PadicCharDescriptor, StructureReport,
};
use crate::gf::is_prime;
use crate::grp::{borel_order, flag_table, order_formula, special_order_formula_rank2, unitary_group};
use crate::hecke::presentation;
use crate::meataxe::{chop, endomorphism_algebra, quadratic_parameter, socle_series, CompositionReport};
use crate::modrep::{induced_module, torus_character, FlatModule};

pub const DEFAULT_SEED: u64 = 42;

/// One principal series module of the plan and its predicted structure.
#[derive(Clone, Debug)]
pub struct PlanCase {
    pub q0: u32,
    pub ell: u32,
    pub e1: u64,
    pub e2: u64,
    pub rank: usize,
    pub expected: Result<StructureReport, ClassifyError>,
}

impl PlanCase {
    pub fn new(q0: u32, ell: u32, e1: u64, e2: u64, rank: usize) -> PlanCase {
        PlanCase {
            q0,
            ell,
            e1,
            e2,
            rank,
            expected: finite_ps_structure(q0 as u64, ell as u64, e1, e2, rank),
        }
    }

    pub fn key(&self) -> (u32, u32, u64, u64, usize) {
        (self.q0, self.ell, self.e1, self.e2, self.rank)
    }

    pub fn module(&self) -> Result<FlatModule, String> {
        let g = unitary_group(self.q0, self.rank).map_err(|e| e.to_string())?;
        let t = flag_table(&g);
        let chi = torus_character(self.q0, self.e1, self.e2, self.ell).map_err(|e| e.to_string())?;
        induced_module(&g, &t, &chi).map_err(|e| e.to_string())
    }

    fn key_json(&self) -> Value {
        json!({"q0": self.q0, "ell": self.ell, "e1": self.e1, "e2": self.e2, "rank": self.rank})
    }
}

/// A grid point of the bridge property.
#[derive(Clone, Debug)]
pub struct BridgeCase {
    pub desc: PadicCharDescriptor,
    /// Finite cases at Λ_x (rank 3) and Λ_y (rank 2), when the descriptor is realisable.
    pub finite: Option<(PlanCase, PlanCase)>,
}

#[derive(Clone, Debug)]
pub struct VerifyPlan {
    pub seed: u64,
    pub cases: Vec<PlanCase>,
    pub bridge: Vec<BridgeCase>,
}

/// Smallest nontrivial order prime to ell of a character of the norm-one
/// group, as an exponent e1 of the pulled-back χ₁.
fn pullback_exponent(q: u64, ell: u64) -> Option<u64> {
    let d = (2..=q + 1).find(|d| (q + 1).is_multiple_of(*d) && d % ell != 0)?;
    Some((q - 1) * ((q + 1) / d))
}

impl VerifyPlan {
    pub fn desk(seed: u64) -> VerifyPlan {
        let mut cases = vec![
            PlanCase::new(3, 5, 0, 0, 3),
            PlanCase::new(3, 7, 0, 0, 3),
            PlanCase::new(3, 2, 0, 0, 3),
            PlanCase::new(5, 2, 0, 0, 3),
            PlanCase::new(3, 2, 0, 0, 2),
            PlanCase::new(5, 3, 12, 0, 3),
        ];
        let mut bridge = Vec::new();
        let mut grid: Vec<(u64, u64, Chi1Class)> = Vec::new();
        for q in [3u64, 5] {
            for ell in [2u64, 5, 7] {
                grid.push((q, ell, Chi1Class::DeltaMinusHalf));
                grid.push((q, ell, Chi1Class::UnitaryPullbackNontrivial));
            }
        }
        grid.push((5, 3, Chi1Class::DeltaMinusHalf));
        grid.push((5, 3, Chi1Class::UnitaryPullbackNontrivial));
        grid.sort();
        for (q, ell, class) in grid {
            let desc = PadicCharDescriptor::level_zero(class, q, ell);
            let e1 = match class {
                Chi1Class::UnitaryPullbackNontrivial => pullback_exponent(q, ell),
                _ => Some(0),
            };
            let finite = e1.filter(|_| q % ell != 0).map(|e1| {
                (
                    PlanCase::new(q as u32, ell as u32, e1, 0, 3),
                    PlanCase::new(q as u32, ell as u32, e1, 0, 2),
                )
            });
            bridge.push(BridgeCase { desc, finite });
        }
        cases.sort_by_key(|c| c.key());
        VerifyPlan { seed, cases, bridge }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub pass: bool,
    pub detail: Value,
    pub mismatches: Vec<String>,
}

impl CriterionResult {
    fn new(id: &str, title: &str) -> Self {
        CriterionResult {
            id: id.to_string(),
            title: title.to_string(),
            pass: true,
            detail: json!({}),
            mismatches: Vec::new(),
        }
    }

    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.pass = false;
            self.mismatches.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        self.mismatches.push(msg);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "pass": self.pass,
            "detail": self.detail,
            "mismatches": self.mismatches,
        })
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": "desk",
            "seed": self.seed,
            "pass": self.all_pass(),
            "criteria": self.results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn module(q0: u32, ell: u32, e1: u64, rank: usize) -> Result<FlatModule, String> {
    PlanCase::new(q0, ell, e1, 0, rank).module()
}

/// Layer dimensions of a socle series, sorted within each layer.
fn socle_dims(m: &FlatModule, seed: u64) -> Result<(Vec<(usize, usize)>, Vec<Vec<(usize, usize)>>, bool, Value), String> {
    let s = socle_series(m, seed).map_err(|e| e.to_string())?;
    let mut layers = s.layer_dims();
    for l in &mut layers {
        l.sort();
    }
    Ok((s.composition.dims_multiset(), layers, s.uniserial, s.to_json()))
}

pub fn a1_group_orders() -> CriterionResult {
    let mut r = CriterionResult::new("A1", "group orders");
    let run = || -> Result<Value, String> {
        let g3 = unitary_group(3, 3).map_err(|e| e.to_string())?;
        let n3 = g3.enumerate_order().map_err(|e| e.to_string())?;
        let g2 = unitary_group(3, 2).map_err(|e| e.to_string())?;
        let n2 = g2.enumerate_order().map_err(|e| e.to_string())?;
        let flags2 = flag_table(&g2).len() as u64;
        Ok(json!({
            "rank3": {"bfs": n3, "formula": order_formula(3, 3)},
            "rank2": {
                "bfs": n2,
                "formula_full": order_formula(2, 3),
                "formula_special": special_order_formula_rank2(3),
                "borel": borel_order(2, 3),
                "flags": flags2,
            },
        }))
    };
    match run() {
        Ok(d) => {
            r.expect("U(2,1) BFS order", d["rank3"]["bfs"].as_u64(), Some(24192));
            r.expect("U(2,1) formula", d["rank3"]["formula"].as_u64(), Some(24192));
            let bfs2 = d["rank2"]["bfs"].as_u64().unwrap_or(0);
            r.expect("U(1,1) BFS order against its formula", bfs2, order_formula(2, 3));
            // the induced dimension must be |G|/|B| = q+1
            r.expect("U(1,1) |G|/|B|", bfs2 / borel_order(2, 3), 4);
            r.expect("U(1,1) flags", d["rank2"]["flags"].as_u64(), Some(4));
            r.detail = d;
        }
        Err(e) => r.fail(e),
    }
    r
}

fn structure_check(
    r: &mut CriterionResult,
    m: Result<FlatModule, String>,
    seed: u64,
    dims: Vec<(usize, usize)>,
    layers: Vec<Vec<(usize, usize)>>,
    uniserial: bool,
) -> Option<Value> {
    match m.and_then(|m| socle_dims(&m, seed)) {
        Ok((got_dims, got_layers, got_uni, json)) => {
            r.expect("composition factors (dim, mult)", got_dims, dims);
            r.expect("socle layers", got_layers, layers);
            r.expect("uniserial", got_uni, uniserial);
            Some(json)
        }
        Err(e) => {
            r.fail(e);
            None
        }
    }
}

pub fn a2_banal(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A2", "banal split q=3 ell=5");
    let d = structure_check(&mut r, module(3, 5, 0, 3), seed, vec![(1, 1), (27, 1)], vec![vec![(1, 1), (27, 1)]], false);
    r.detail = json!(d);
    r
}

pub fn a3_q2_q_1(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A3", "ell | q^2-q+1 at q=3 ell=7");
    let d = structure_check(
        &mut r,
        module(3, 7, 0, 3),
        seed,
        vec![(1, 2), (26, 1)],
        vec![vec![(1, 1)], vec![(26, 1)], vec![(1, 1)]],
        true,
    );
    r.detail = json!(d);
    r
}

pub fn a4_q_plus_1(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A4", "ell | q+1 at q=3 ell=2");
    let m = module(3, 2, 0, 3);
    let d = structure_check(
        &mut r,
        m.clone(),
        seed,
        vec![(1, 2), (6, 2), (14, 1)],
        vec![vec![(1, 1)], vec![(6, 1)], vec![(14, 1)], vec![(6, 1)], vec![(1, 1)]],
        true,
    );
    // both 6-dimensional layers carry the same isomorphism class
    if let Ok(m) = m {
        match socle_series(&m, seed) {
            Ok(s) => {
                let ids: Vec<&str> = s.layers.iter().map(|l| l[0].0.as_str()).collect();
                if ids.len() == 5 {
                    r.expect("layer 2 and layer 4 isomorphic", ids[1], ids[3]);
                }
            }
            Err(e) => r.fail(e.to_string()),
        }
    }
    r.detail = json!(d);
    r
}

pub fn a5_two_divides_q_minus_1(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A5", "ell = 2, 4 | q-1 at q=5");
    match module(5, 2, 0, 3).and_then(|m| chop(&m, seed).map_err(|e| e.to_string())) {
        Ok(c) => {
            r.expect("composition factors (dim, mult)", c.dims_multiset(), vec![(1, 2), (20, 1), (104, 1)]);
            r.expect("length", c.total_length(), 4);
            r.detail = c.to_json();
        }
        Err(e) => r.fail(e),
    }
    r
}

pub fn a6_u11(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A6", "U(1,1) ell | q+1 at q=3 ell=2");
    let d = structure_check(
        &mut r,
        module(3, 2, 0, 2),
        seed,
        vec![(1, 2), (2, 1)],
        vec![vec![(1, 1)], vec![(2, 1)], vec![(1, 1)]],
        true,
    );
    r.detail = json!(d);
    r
}

pub fn a7_ramified(seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new("A7", "unitary pullback of order 2 at q=5 ell=3");
    let d = structure_check(
        &mut r,
        module(5, 3, 12, 3),
        seed,
        vec![(21, 2), (84, 1)],
        vec![vec![(21, 1)], vec![(84, 1)], vec![(21, 1)]],
        true,
    );
    r.detail = json!(d);
    r
}

pub fn a8_hecke_parameters() -> CriterionResult {
    let mut r = CriterionResult::new("A8", "quadratic parameters of End(i_B^G)");
    let mut detail = Vec::new();
    for (q0, ell, e1, rank, want) in [(3u32, 101u32, 0u64, 3usize, 27u64), (3, 101, 0, 2, 3), (5, 11, 12, 3, 5)] {
        let run = || -> Result<Value, String> {
            let m = module(q0, ell, e1, rank)?;
            let e = endomorphism_algebra(&m).map_err(|e| e.to_string())?;
            let qp = quadratic_parameter(&e, &m, q0).map_err(|e| e.to_string())?;
            Ok(json!({"q0": q0, "ell": ell, "e1": e1, "rank": rank, "end_dim": e.dimension(), "parameter": qp.to_json()}))
        };
        match run() {
            Ok(v) => {
                r.expect(&format!("d at q0={q0} ell={ell} rank={rank}"), v["parameter"]["d"].as_u64(), Some(want));
                detail.push(v);
            }
            Err(e) => r.fail(format!("q0={q0} ell={ell} rank={rank}: {e}")),
        }
    }
    r.detail = json!(detail);
    r
}

fn pow_mod(b: u64, e: u32, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

pub fn a9_hecke_counts() -> CriterionResult {
    let mut r = CriterionResult::new("A9", "Hecke character counts");
    let mut checked = 0;
    let mut skipped = Vec::new();
    for q in [3u64, 5, 7, 9] {
        for a in [1u32, 3] {
            for ell in (2..=100u64).filter(|&l| is_prime(l)) {
                if q % ell == 0 {
                    skipped.push(json!([q, a, ell]));
                    continue;
                }
                let want = if (q + 1) % ell == 0 {
                    1
                } else if (pow_mod(q, a, ell) + 1).is_multiple_of(ell) {
                    2
                } else {
                    4
                };
                match presentation(q, a, ell) {
                    Ok(p) => r.expect(&format!("count at q={q} a={a} ell={ell}"), p.characters().len(), want),
                    Err(e) => r.fail(format!("q={q} a={a} ell={ell}: {e}")),
                }
                checked += 1;
            }
        }
    }
    r.detail = json!({"checked": checked, "skipped_residue_characteristic": skipped});
    r
}

fn bridge_case(c: &BridgeCase, seed: u64) -> (bool, Value) {
    let base = c.desc.to_json();
    let predicted = padic_ps_structure(&c.desc);
    let finite = match (&predicted, &c.finite) {
        (Err(ClassifyError::UnsupportedCase(msg)), _) => {
            return (true, json!({"descriptor": base, "status": "unsupported", "reason": msg}));
        }
        (Err(ClassifyError::BadParams(msg)), _) => {
            // ell = p lies outside every hypothesis; otherwise no such character exists
            let status = if c.desc.q.is_multiple_of(c.desc.ell) { "unsupported" } else { "vacuous" };
            return (true, json!({"descriptor": base, "status": status, "reason": msg}));
        }
        (Err(e), _) => return (false, json!({"descriptor": base, "status": "error", "reason": e.to_string()})),
        (Ok(_), None) => return (false, json!({"descriptor": base, "status": "error", "reason": "no finite realisation"})),
        (Ok(_), Some(f)) => f,
    };
    let chop_case = |p: &PlanCase| -> Result<CompositionReport, String> {
        chop(&p.module()?, seed).map_err(|e| e.to_string())
    };
    let (cx, cy) = match (chop_case(&finite.0), chop_case(&finite.1)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            return (false, json!({"descriptor": base, "status": "error", "reason": e}));
        }
    };
    let mut ok = true;
    let mut cross = Vec::new();
    for (p, c) in [(&finite.0, &cx), (&finite.1, &cy)] {
        // finite prediction against the chop, where the prediction exists
        let agrees = match &p.expected {
            Ok(s) => Some(s.dims_multiset() == c.dims_multiset()),
            Err(_) => None,
        };
        ok &= agrees != Some(false);
        cross.push(json!({"case": p.key_json(), "chop": c.dims_multiset(), "prediction_agrees": agrees}));
    }
    let bridge = bridge_check(&c.desc, &cx, &cy);
    ok &= bridge == Ok(true);
    (
        ok,
        json!({
            "descriptor": base,
            "status": "checked",
            "clause": predicted.as_ref().map(|p| p.clause.clone()).unwrap_or_default(),
            "bridge": match bridge {
                Ok(b) => json!(b),
                Err(e) => json!({"error": e.to_string()}),
            },
            "finite": cross,
        }),
    )
}

pub fn a10_bridge(plan: &VerifyPlan) -> CriterionResult {
    let mut r = CriterionResult::new("A10", "bridge between p-adic predictions and finite chops");
    let mut rows = Vec::new();
    for c in &plan.bridge {
        let (ok, v) = bridge_case(c, plan.seed);
        if !ok {
            r.fail(format!("bridge failed for {}", c.desc.to_json()));
        }
        rows.push(v);
    }
    let cross = plan_cross_validation(plan);
    for c in &cross {
        if c["agrees"] == json!(false) {
            r.fail(format!("classify disagrees with the socle series for {}", c["case"]));
        }
    }
    r.detail = json!({"grid": rows, "cross_validation": cross});
    r
}

/// The plan's finite cases: classify prediction against chop and socle series.
pub fn plan_cross_validation(plan: &VerifyPlan) -> Vec<Value> {
    plan.cases
        .iter()
        .map(|c| {
            let got = c.module().and_then(|m| socle_dims(&m, plan.seed));
            let expected = c.expected.as_ref().map(|s| (s.dims_multiset(), s.layer_dims()));
            json!({
                "case": c.key_json(),
                "expected": match &expected {
                    Ok((d, l)) => json!({"dims": d, "layers": l}),
                    Err(e) => json!({"error": e.to_string()}),
                },
                "agrees": match (&got, &expected) {
                    (Ok((d, l, _, _)), Ok((ed, el))) => json!(d == ed && Some(l) == el.as_ref()),
                    _ => json!(null),
                },
            })
        })
        .collect()
}

fn run_a1_to_a10(plan: &VerifyPlan) -> Vec<CriterionResult> {
    let seed = plan.seed;
    vec![
        a1_group_orders(),
        a2_banal(seed),
        a3_q2_q_1(seed),
        a4_q_plus_1(seed),
        a5_two_divides_q_minus_1(seed),
        a6_u11(seed),
        a7_ramified(seed),
        a8_hecke_parameters(),
        a9_hecke_counts(),
        a10_bridge(plan),
    ]
}

/// Runs A1..A10 twice and compares the serialized output.
pub fn a11_determinism(plan: &VerifyPlan, first: &[CriterionResult]) -> CriterionResult {
    let mut r = CriterionResult::new("A11", "determinism of the suite");
    let ser = |rs: &[CriterionResult]| {
        serde_json::to_string(&rs.iter().map(|x| x.to_json()).collect::<Vec<_>>()).unwrap()
    };
    let again = run_a1_to_a10(plan);
    let (a, b) = (ser(first), ser(&again));
    r.expect("identical JSON across runs", a == b, true);
    r.detail = json!({"bytes": a.len()});
    r
}

pub fn run_desk(seed: u64) -> SuiteReport {
    let plan = VerifyPlan::desk(seed);
    let mut results = run_a1_to_a10(&plan);
    let a11 = a11_determinism(&plan, &results);
    results.push(a11);
    SuiteReport { seed, results }
}
