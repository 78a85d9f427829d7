//! Necessary conditions for two knots (or a knot and a link) to be related
//! by a single band surgery.
//!
//! Each criterion either obstructs the banding, fails to obstruct it, or
//! does not apply because one of its hypotheses is unmet. A verdict of
//! `NotObstructed` never asserts that a band exists.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::PdCode;
use crate::invariants::{
    homfly, invariant_set, jones_derivative_at_minus_one, jones_from_homfly, InvariantError, LaurentPoly2,
};
use crate::knot_table::{mirror_name, KnotRecord, KnotTable};

#[derive(Debug, Error)]
pub enum ObstructionError {
    #[error("non-coherent banding needs two knots, got {0} and {1} components")]
    NotKnots(u32, u32),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("a link with {0} components is not supported")]
    TooManyComponents(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    NonCoherent,
    Coherent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Obstructed,
    NotObstructed,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    E2,
    JonesOmega,
    QPhibar,
    Murasugi,
    KanenobuQr,
    Yasuhara,
    Km45,
    Sigdif,
    TorusClassification,
}

impl Criterion {
    pub const ALL: [Criterion; 9] = [
        Criterion::E2,
        Criterion::JonesOmega,
        Criterion::QPhibar,
        Criterion::Murasugi,
        Criterion::KanenobuQr,
        Criterion::Yasuhara,
        Criterion::Km45,
        Criterion::Sigdif,
        Criterion::TorusClassification,
    ];

    pub fn citation(self) -> &'static str {
        match self {
            Criterion::E2 => "Abe-Kanenobu, Lemma 5.1: |e_p(K) - e_p(K')| <= p - 1",
            Criterion::JonesOmega => "Abe-Kanenobu, Theorem 5.5 (Jones polynomial at omega)",
            Criterion::QPhibar => "Abe-Kanenobu, Theorem 5.5 (Q-polynomial at -phibar)",
            Criterion::Murasugi => "Murasugi, Lemma 7.1: |sigma(L) - sigma(L')| <= 1 for coherent bandings",
            Criterion::KanenobuQr => "Kanenobu, Theorem 2.2: 2 det(L) = +-s^2 mod det(K) when u(K) = 1",
            Criterion::Yasuhara => "Yasuhara, Proposition 5.1: |8x + 4 Arf(K) - sigma(K)| <= 2",
            Criterion::Km45 => "Kanenobu-Miyazawa, Theorem 4.5: V'(K;-1) = (-1)^Arf 8 eps mod 24",
            Criterion::Sigdif => "quasi-alternating knots of equal square-free determinant: |sigma(K) - sigma(K')| in {0, 8}",
            Criterion::TorusClassification => {
                "T(2,3) to T(2,n): non-coherent iff n in {+-1, 3, 7}; coherent iff n in {+-2, 4, -6}"
            }
        }
    }
}

/// The invariants of one side of a banding query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Operand {
    pub name: String,
    pub n_components: u32,
    pub det: u64,
    /// Signature of every orientation class (one entry for knots).
    pub sigmas: Vec<i32>,
    pub arf: Option<u8>,
    pub e2: u32,
    pub delta3: u32,
    pub rank5: u32,
    pub qa: Option<bool>,
    pub u: Option<u32>,
    pub u2: Option<u32>,
    /// `n` when this is the torus knot or link `T(2, n)`; `+-1` for the unknot.
    pub torus_param: Option<i32>,
    /// `V'(-1)` of a knot.
    pub jones_derivative: Option<i64>,
}

fn jones_derivative(h: &LaurentPoly2) -> Option<i64> {
    jones_derivative_at_minus_one(&jones_from_homfly(h)).ok()
}

impl Operand {
    pub fn from_record(r: &KnotRecord) -> Operand {
        Operand {
            name: r.name.clone(),
            n_components: 1,
            det: r.det,
            sigmas: vec![r.sigma],
            arf: Some(r.arf),
            e2: r.e2,
            delta3: r.delta3,
            rank5: r.rank5,
            qa: r.qa,
            u: r.u,
            u2: r.u2,
            torus_param: if r.crossing_number == 0 { Some(1) } else { r.torus_param },
            jones_derivative: jones_derivative(&r.homfly),
        }
    }

    /// Invariants computed from a diagram. Table data (QA, unknotting
    /// numbers, torus family) is unknown.
    pub fn from_diagram(name: &str, d: &PdCode) -> Result<Operand, ObstructionError> {
        let s = invariant_set(d)?;
        let c = s.n_components;
        let sigmas = match c {
            1 => vec![s.sigma],
            2 => {
                let rev = invariant_set(&d.reverse_component(0))?;
                let mut v = vec![s.sigma, rev.sigma];
                v.sort_unstable();
                v.dedup();
                v
            }
            _ => {
                // every orientation class: fix component 0, flip any subset of the rest
                let k = d.component_ranges().len();
                if k < c as usize || c > 6 {
                    return Err(ObstructionError::TooManyComponents(c));
                }
                let mut v = Vec::new();
                for mask in 0u32..(1 << (k - 1)) {
                    let mut e = d.clone();
                    for j in 1..k {
                        if mask >> (j - 1) & 1 == 1 {
                            e = e.reverse_component(j);
                        }
                    }
                    v.push(invariant_set(&e)?.sigma);
                }
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        let jones = if c == 1 { jones_derivative(&homfly(d)?) } else { None };
        Ok(Operand {
            name: name.to_string(),
            n_components: c,
            det: s.det,
            sigmas,
            arf: s.arf,
            e2: s.e2,
            delta3: s.delta3,
            rank5: s.rank5,
            qa: None,
            u: None,
            u2: None,
            torus_param: None,
            jones_derivative: jones,
        })
    }

    /// The torus link `T(2, n)` for even `n != 0`, with both orientation
    /// classes: linking number `n/2` gives `1 - n` (or `-1 - n` for
    /// `n < 0`), the other orientation gives `1` (or `-1`).
    pub fn torus_link(n: i32) -> Operand {
        assert!(n % 2 == 0 && n != 0, "T(2,{n}) is not a two-component link");
        let mut sigmas = if n > 0 { vec![1 - n, 1] } else { vec![-1 - n, -1] };
        sigmas.sort_unstable();
        let m = n.unsigned_abs();
        // H1 of the branched double cover is Z/|n|
        let factor = |p: u32| u32::from(m % p == 0);
        Operand {
            name: format!("T(2,{n})"),
            n_components: 2,
            det: m as u64,
            sigmas,
            arf: None,
            e2: u32::from(m != 1),
            delta3: factor(3),
            rank5: factor(5),
            qa: Some(true),
            u: None,
            u2: None,
            torus_param: Some(n),
            jones_derivative: None,
        }
    }

    /// Looks up a table name, a `T(2,n)` torus knot or link, or `K*` for an
    /// amphichiral `K`.
    pub fn named(table: &KnotTable, name: &str) -> Option<Operand> {
        if let Some(n) = name.strip_prefix("T(2,").and_then(|r| r.strip_suffix(')')) {
            let n: i32 = n.trim().parse().ok()?;
            if n % 2 == 0 && n != 0 {
                return Some(Operand::torus_link(n));
            }
            return table.torus_knot(n).map(Operand::from_record);
        }
        if let Some(r) = table.get(name) {
            return Some(Operand::from_record(r));
        }
        match name.strip_suffix('*').and_then(|b| table.get(b)) {
            Some(r) if !r.chiral => Some(Operand::from_record(r)),
            _ => None,
        }
    }

    pub fn is_knot(&self) -> bool {
        self.n_components == 1
    }

    pub fn is_unknot(&self) -> bool {
        self.is_knot() && self.torus_param.is_some_and(|n| n.abs() == 1)
    }

    pub fn mirrored(&self) -> Operand {
        let name = if self.name.starts_with("T(2,") {
            format!("T(2,{})", -self.torus_param.unwrap_or(0))
        } else if self.is_unknot() {
            self.name.clone()
        } else {
            mirror_name(&self.name)
        };
        let mut sigmas: Vec<i32> = self.sigmas.iter().map(|s| -s).collect();
        sigmas.sort_unstable();
        Operand {
            name,
            sigmas,
            torus_param: self.torus_param.map(|n| if n.abs() == 1 { n } else { -n }),
            jones_derivative: self.jones_derivative.map(|d| -d),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BandingQuery {
    pub k: Operand,
    pub k_prime: Operand,
    pub mode: Mode,
}

impl BandingQuery {
    pub fn new(k: Operand, k_prime: Operand, mode: Mode) -> Result<BandingQuery, ObstructionError> {
        if mode == Mode::NonCoherent && !(k.is_knot() && k_prime.is_knot()) {
            return Err(ObstructionError::NotKnots(k.n_components, k_prime.n_components));
        }
        Ok(BandingQuery { k, k_prime, mode })
    }

    pub fn swapped(&self) -> BandingQuery {
        BandingQuery { k: self.k_prime.clone(), k_prime: self.k.clone(), mode: self.mode }
    }

    pub fn mirrored(&self) -> BandingQuery {
        BandingQuery { k: self.k.mirrored(), k_prime: self.k_prime.mirrored(), mode: self.mode }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub status: Status,
    /// The numbers the criterion compared.
    pub witness: Value,
    /// The unmet hypothesis when not applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unmet: Option<String>,
    pub citation: &'static str,
}

fn applied(c: Criterion, obstructed: bool, witness: Value) -> CriterionResult {
    let status = if obstructed { Status::Obstructed } else { Status::NotObstructed };
    CriterionResult { criterion: c, status, witness, unmet: None, citation: c.citation() }
}

fn not_applicable(c: Criterion, unmet: impl Into<String>) -> CriterionResult {
    CriterionResult {
        criterion: c,
        status: Status::NotApplicable,
        witness: Value::Null,
        unmet: Some(unmet.into()),
        citation: c.citation(),
    }
}

pub fn criterion_e2(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::E2;
    if q.mode != Mode::NonCoherent {
        return not_applicable(c, "non-coherent banding between knots");
    }
    let (a, b) = (q.k.e2, q.k_prime.e2);
    applied(c, a.abs_diff(b) > 1, json!({ "e2": [a, b], "bound": 1 }))
}

pub fn criterion_jones_omega(q: &BandingQuery) -> CriterionResult {
    let (a, b) = (q.k.delta3, q.k_prime.delta3);
    applied(Criterion::JonesOmega, a.abs_diff(b) > 1, json!({ "delta": [a, b], "ratio_exponent": a as i64 - b as i64 }))
}

pub fn criterion_q_phibar(q: &BandingQuery) -> CriterionResult {
    let (a, b) = (q.k.rank5, q.k_prime.rank5);
    applied(Criterion::QPhibar, a.abs_diff(b) > 1, json!({ "r": [a, b], "ratio_exponent": a as i64 - b as i64 }))
}

pub fn criterion_murasugi(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::Murasugi;
    if q.mode != Mode::Coherent {
        return not_applicable(c, "coherent banding");
    }
    let best = q
        .k
        .sigmas
        .iter()
        .flat_map(|a| q.k_prime.sigmas.iter().map(move |b| (a - b).abs()))
        .min()
        .expect("every operand has a signature");
    applied(
        c,
        best > 1,
        json!({ "sigmas": [q.k.sigmas, q.k_prime.sigmas], "min_difference": best }),
    )
}

fn is_square_mod(x: i64, m: u64) -> Option<u64> {
    let m = m as i64;
    (0..m).find(|s| (s * s - x).rem_euclid(m) == 0).map(|s| s as u64)
}

fn kanenobu_one_side(k: &Operand, l: &Operand) -> Option<(bool, Value)> {
    if k.u != Some(1) || !k.is_knot() {
        return None;
    }
    let d = k.det;
    let two_l = 2 * l.det as i64;
    let plus = is_square_mod(two_l, d);
    let minus = is_square_mod(-two_l, d);
    let witness = json!({
        "u1_knot": k.name,
        "det_k": d,
        "det_l": l.det,
        "search_range": [0, d],
        "root_of_plus": plus,
        "root_of_minus": minus,
    });
    Some((plus.is_none() && minus.is_none(), witness))
}

pub fn criterion_kanenobu_qr(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::KanenobuQr;
    let sides = [kanenobu_one_side(&q.k, &q.k_prime), kanenobu_one_side(&q.k_prime, &q.k)];
    let tested: Vec<(bool, Value)> = sides.into_iter().flatten().collect();
    if tested.is_empty() {
        return not_applicable(c, "a knot with known unknotting number one");
    }
    let obstructed = tested.iter().any(|(o, _)| *o);
    applied(c, obstructed, Value::Array(tested.into_iter().map(|(_, w)| w).collect()))
}

/// The knot on the other side of an unknot, if the query is
/// knot-to-unknot.
fn unknotting_side(q: &BandingQuery) -> Option<&Operand> {
    if q.mode != Mode::NonCoherent {
        return None;
    }
    if q.k_prime.is_unknot() {
        Some(&q.k)
    } else if q.k.is_unknot() {
        Some(&q.k_prime)
    } else {
        None
    }
}

pub fn criterion_yasuhara(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::Yasuhara;
    let Some(k) = unknotting_side(q) else {
        return not_applicable(c, "non-coherent banding to the unknot");
    };
    let sigma = k.sigmas[0];
    let arf = k.arf.expect("knot") as i32;
    // |8x + 4 Arf - sigma| <= 2 has a solution iff (4 Arf - sigma) mod 8 is within 2 of 0
    let r = (4 * arf - sigma).rem_euclid(8);
    let x = if r <= 2 { -(4 * arf - sigma - r) / 8 } else { -(4 * arf - sigma - r + 8) / 8 };
    let ok = (8 * x + 4 * arf - sigma).abs() <= 2;
    applied(c, !ok, json!({ "knot": k.name, "sigma": sigma, "arf": arf, "x": if ok { Some(x) } else { None } }))
}

pub fn criterion_km45(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::Km45;
    let Some(k) = unknotting_side(q) else {
        return not_applicable(c, "non-coherent banding to the unknot");
    };
    if k.det % 3 != 0 {
        return not_applicable(c, format!("det = {} is not divisible by 3", k.det));
    }
    let sigma = k.sigmas[0];
    let eps = match sigma.rem_euclid(8) {
        2 => 1,
        6 => -1,
        _ => return not_applicable(c, format!("sigma = {sigma} is not +-2 mod 8")),
    };
    let arf = k.arf.expect("knot") as i64;
    let v1 = k.jones_derivative.expect("knot has a Jones derivative");
    let expected = if arf == 0 { 8 * eps } else { -8 * eps };
    let obstructed = (v1 - expected).rem_euclid(24) != 0;
    applied(c, obstructed, json!({ "knot": k.name, "v_prime": v1, "expected_mod_24": expected.rem_euclid(24), "epsilon": eps, "arf": arf }))
}

fn square_free(m: u64) -> bool {
    let mut p = 2;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn criterion_sigdif(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::Sigdif;
    let (k, l) = (&q.k, &q.k_prime);
    if !(k.is_knot() && l.is_knot()) {
        return not_applicable(c, "both sides knots");
    }
    if k.qa != Some(true) || l.qa != Some(true) {
        return not_applicable(c, "both knots quasi-alternating");
    }
    if k.det != l.det {
        return not_applicable(c, format!("equal determinants ({} vs {})", k.det, l.det));
    }
    if !square_free(k.det) {
        return not_applicable(c, format!("square-free determinant ({} is not)", k.det));
    }
    let d = (k.sigmas[0] - l.sigmas[0]).abs();
    applied(c, d != 0 && d != 8, json!({ "det": k.det, "sigma": [k.sigmas[0], l.sigmas[0]], "difference": d }))
}

pub fn torus_classification(q: &BandingQuery) -> CriterionResult {
    let c = Criterion::TorusClassification;
    // orient the query so that one side is T(2,3)
    let pick = |a: &Operand, b: &Operand| -> Option<i32> {
        let n = b.torus_param?;
        match a.torus_param {
            Some(3) if a.is_knot() => Some(n),
            Some(-3) if a.is_knot() => Some(if n.abs() == 1 { n } else { -n }),
            _ => None,
        }
    };
    let Some(n) = pick(&q.k, &q.k_prime).or_else(|| pick(&q.k_prime, &q.k)) else {
        return not_applicable(c, "one side T(2,+-3) and the other T(2,n)");
    };
    let allowed: &[i32] = match q.mode {
        Mode::NonCoherent => &[1, -1, 3, 7],
        Mode::Coherent => &[2, -2, 4, -6],
    };
    let ns: Vec<i32> = if n.abs() == 1 { vec![1, -1] } else { vec![n] };
    let ok = ns.iter().any(|n| allowed.contains(n));
    applied(c, !ok, json!({ "n": n, "allowed": allowed }))
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub query: BandingQuery,
    pub criteria: Vec<CriterionResult>,
    pub overall: Status,
}

impl Verdict {
    pub fn get(&self, c: Criterion) -> &CriterionResult {
        self.criteria.iter().find(|r| r.criterion == c).expect("every criterion is run")
    }

    /// Criteria that obstruct the banding.
    pub fn obstructing(&self) -> Vec<Criterion> {
        self.criteria.iter().filter(|r| r.status == Status::Obstructed).map(|r| r.criterion).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

pub fn run_all(q: &BandingQuery) -> Verdict {
    let criteria = vec![
        criterion_e2(q),
        criterion_jones_omega(q),
        criterion_q_phibar(q),
        criterion_murasugi(q),
        criterion_kanenobu_qr(q),
        criterion_yasuhara(q),
        criterion_km45(q),
        criterion_sigdif(q),
        torus_classification(q),
    ];
    let overall = if criteria.iter().any(|r| r.status == Status::Obstructed) {
        Status::Obstructed
    } else {
        Status::NotObstructed
    };
    Verdict { query: q.clone(), criteria, overall }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(name: &str) -> Operand {
        Operand::from_record(KnotTable::shipped().get(name).unwrap())
    }

    fn query(a: &str, b: &str) -> BandingQuery {
        BandingQuery::new(op(a), op(b), Mode::NonCoherent).unwrap()
    }

    #[test]
    fn residues() {
        assert_eq!(is_square_mod(2, 5), None);
        assert_eq!(is_square_mod(-2, 5), None);
        assert_eq!(is_square_mod(6, 5), Some(1));
        assert_eq!(is_square_mod(2, 1), Some(0));
        assert!(square_free(1) && square_free(30) && !square_free(9) && !square_free(50));
    }

    #[test]
    fn figure_eight_cannot_be_unknotted() {
        let v = run_all(&query("4_1", "0_1"));
        assert_eq!(v.overall, Status::Obstructed);
        assert_eq!(v.get(Criterion::Yasuhara).status, Status::Obstructed);
        assert_eq!(v.get(Criterion::KanenobuQr).status, Status::Obstructed);
        assert_eq!(v.get(Criterion::Km45).status, Status::NotApplicable);
        let w = run_all(&query("4_1", "3_1"));
        assert_eq!(w.get(Criterion::KanenobuQr).status, Status::NotObstructed);
    }

    #[test]
    fn trefoil_examples() {
        let v = run_all(&query("3_1", "0_1"));
        assert_eq!(v.overall, Status::NotObstructed);
        assert_eq!(v.get(Criterion::Km45).status, Status::NotObstructed);
        assert_eq!(v.get(Criterion::Km45).witness["v_prime"], 8);
        assert_eq!(run_all(&query("3_1", "3_1")).overall, Status::NotObstructed);
        assert_eq!(run_all(&query("3_1", "7_1")).overall, Status::NotObstructed);
        assert_eq!(torus_classification(&query("3_1", "5_1")).status, Status::Obstructed);
    }

    #[test]
    fn chirally_cosmetic_pairs() {
        let v = run_all(&query("5_1", "5_1*"));
        assert_eq!(v.overall, Status::NotObstructed);
        assert_eq!(v.get(Criterion::Sigdif).status, Status::NotObstructed);
        let w = run_all(&query("7_1", "7_1*"));
        assert_eq!(w.overall, Status::Obstructed);
        assert_eq!(w.get(Criterion::Sigdif).status, Status::Obstructed);
        let t9 = run_all(&query("9_1", "9_1*"));
        assert_eq!(t9.get(Criterion::Sigdif).status, Status::NotApplicable);
        assert_eq!(t9.overall, Status::NotObstructed);
    }

    #[test]
    fn coherent_torus_links() {
        let t = op("3_1");
        for (n, status) in [(4, Status::NotObstructed), (8, Status::Obstructed), (-6, Status::NotObstructed)] {
            let q = BandingQuery::new(t.clone(), Operand::torus_link(n), Mode::Coherent).unwrap();
            assert_eq!(criterion_murasugi(&q).status, status, "n = {n}");
        }
        let q = BandingQuery::new(t, Operand::torus_link(2), Mode::Coherent).unwrap();
        assert_eq!(run_all(&q).overall, Status::NotObstructed);
    }

    #[test]
    fn homology_criteria() {
        let t = KnotTable::shipped().get("3_1").unwrap();
        let granny = Operand::from_diagram("3_1#3_1", &t.pd.connected_sum(&t.pd)).unwrap();
        let q = BandingQuery::new(op("0_1"), granny.clone(), Mode::NonCoherent).unwrap();
        assert_eq!(criterion_e2(&q).status, Status::Obstructed);
        assert_eq!(criterion_jones_omega(&q).status, Status::Obstructed);
        let f = KnotTable::shipped().get("4_1").unwrap();
        let ff = Operand::from_diagram("4_1#4_1", &f.pd.connected_sum(&f.pd)).unwrap();
        let q = BandingQuery::new(ff, op("0_1"), Mode::NonCoherent).unwrap();
        assert_eq!(criterion_q_phibar(&q).status, Status::Obstructed);
        assert_eq!(criterion_q_phibar(&query("4_1", "0_1")).status, Status::NotObstructed);
        assert_eq!(criterion_jones_omega(&query("4_1", "4_1")).status, Status::NotObstructed);
    }

    #[test]
    fn non_coherent_needs_knots() {
        assert!(BandingQuery::new(op("3_1"), Operand::torus_link(4), Mode::NonCoherent).is_err());
    }
}
