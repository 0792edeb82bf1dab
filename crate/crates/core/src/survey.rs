//! Classification drivers: explicit constructions for class number one, the
//! quadratic-modulus sweeps over exponent 2 and 3 fields, the higher-order
//! modulus cases, and the assembled tables of quadratic and cubic fields.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::chargroup::{enumerate_eta, enumerate_eta_for, OrderConstraint};
use crate::error::{Error, Result};
use crate::grossenchar::{minimal_conductor, Grossenchar};
use crate::quadfield::{enumerate_discriminants, primes_above, ClassGroup, FieldE, QIdeal};
use crate::resunits::UnitsStructure;
use crate::valuefield::{check_q1, check_r1, RationalityField};

pub mod reference;

/// Discriminants of the class number one fields.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

/// Largest |Delta| among fields of class group exponent 2.
pub const EXPONENT_TWO_BOUND: i64 = 5460;

/// Largest |Delta| among fields of class group exponent 3.
pub const EXPONENT_THREE_BOUND: i64 = 4027;

/// Which construction produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Provenance {
    #[serde(rename = "h1-d1")]
    H1D1,
    #[serde(rename = "h1-d2")]
    H1D2,
    #[serde(rename = "h1-d3")]
    H1D3,
    #[serde(rename = "quadmod-e2")]
    QuadmodE2,
    #[serde(rename = "quadmod-e3")]
    QuadmodE3,
    #[serde(rename = "highord-r4")]
    HighordR4,
    #[serde(rename = "highord-r6")]
    HighordR6,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::H1D1 => "h1-d1",
            Provenance::H1D2 => "h1-d2",
            Provenance::H1D3 => "h1-d3",
            Provenance::QuadmodE2 => "quadmod-e2",
            Provenance::QuadmodE3 => "quadmod-e3",
            Provenance::HighordR4 => "highord-r4",
            Provenance::HighordR6 => "highord-r6",
        };
        f.write_str(s)
    }
}

/// One constructed rationality field with its witness character.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub delta_e: i64,
    pub field: RationalityField,
    pub level: i64,
    pub provenance: Provenance,
    pub witness: Grossenchar,
}

impl TableRow {
    fn new(psi: Grossenchar, provenance: Provenance) -> Result<TableRow> {
        let field = psi.rationality_field()?;
        let d = psi.value_field_degree()?;
        if field.degree as u64 != d {
            return Err(Error::Inconsistent(format!(
                "value field degree {d} but rationality field degree {} for {}",
                field.degree,
                psi.field().delta()
            )));
        }
        Ok(TableRow { delta_e: psi.field().delta(), field, level: psi.level(), provenance, witness: psi })
    }

    pub fn delta_k(&self) -> &BigInt {
        &self.field.disc
    }

    pub fn degree(&self) -> u32 {
        self.field.degree
    }
}

fn sort_rows(rows: &mut [TableRow]) {
    rows.sort_by(|a, b| {
        (a.delta_e.abs(), &a.field.disc, a.provenance, a.level).cmp(&(b.delta_e.abs(), &b.field.disc, b.provenance, b.level))
    });
}

/// First eta of the given order on (o/m)^x compatible with chi_E and weight l,
/// turned into a Groessencharacter.
fn first_psi(field: FieldE, m: &QIdeal, order: OrderConstraint, ell: u32) -> Result<Grossenchar> {
    let etas = enumerate_eta_for(field, m, order, Some(ell))?;
    let mut last = Error::NoGrossencharacter;
    for eta in &etas {
        match Grossenchar::build_trivial_nebentypus(eta, ell, None) {
            Ok(psi) => return Ok(psi),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Moduli and orders for the class number one constructions of value field degree d.
/// Over Q(sqrt -3) with l = 3 mod 6 the order 12 character must send zeta_6 to -1,
/// which 11 d_E cannot carry, so 22 d_E is used there.
pub fn h1_recipes(delta: i64, d: u32, ell: u32) -> Result<Vec<(QIdeal, u32)>> {
    let field = FieldE::new(delta)?;
    let (de, _) = minimal_conductor(field);
    let times = |n: i64| QIdeal::from_int(field, n).mul(&de);
    let out = match (d, delta) {
        (1, -3) => vec![(QIdeal::from_int(field, 3), 6)],
        (1, -4) => vec![(de, 4)],
        (1, _) => vec![(de, 2)],
        (2, -4) => vec![(times(7), 8), (times(11), 12)],
        (2, -3) if ell % 6 == 3 => vec![(times(22), 12)],
        (2, -3) => vec![(times(11), 12)],
        (2, _) => {
            let r4 = match delta {
                -8 => de,
                -11 | -19 => times(5),
                _ => times(3),
            };
            let r6 = match delta {
                -7 | -8 => times(5),
                _ => times(2),
            };
            vec![(r4, 4), (r6, 6)]
        }
        (3, -3) => vec![(QIdeal::from_int(field, 27), 18)],
        (3, -7) => vec![(QIdeal::from_int(field, 7), 14)],
        (3, _) => Vec::new(),
        _ => return Err(Error::InvalidArgument(format!("degree {d} is outside 1..=3"))),
    };
    Ok(out)
}

/// Constructions over the class number one fields with [L : E] = d.
pub fn survey_h1(ell: u32, d: u32) -> Result<Vec<TableRow>> {
    if ell % 2 == 0 {
        return Err(Error::InvalidArgument("l must be odd".into()));
    }
    let prov = match d {
        1 => Provenance::H1D1,
        2 => Provenance::H1D2,
        3 => Provenance::H1D3,
        _ => return Err(Error::InvalidArgument(format!("degree {d} is outside 1..=3"))),
    };
    let jobs: Vec<(i64, QIdeal, u32)> = CLASS_NUMBER_ONE
        .iter()
        .map(|&delta| Ok(h1_recipes(delta, d, ell)?.into_iter().map(move |(m, r)| (delta, m, r))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|(delta, m, r)| {
            let field = FieldE::new(*delta)?;
            let order = if d == 1 { OrderConstraint::Divides(*r as u64) } else { OrderConstraint::Equals(*r as u64) };
            let psi = first_psi(field, m, order, ell)?;
            TableRow::new(psi, prov)
        })
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

/// A field excluded by a necessary condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub delta_e: i64,
    pub class_group: Vec<u32>,
    pub reason: String,
}

/// Output of the quadratic-modulus sweep.
#[derive(Debug, Clone)]
pub struct QuadModSurvey {
    pub exponent: u32,
    pub ell: u32,
    /// Every discriminant of the given exponent that was examined.
    pub swept: Vec<i64>,
    /// Class number 2 fields with Delta = 4 mod 8, which need no separate treatment.
    pub skipped: Vec<i64>,
    pub rejections: Vec<Rejection>,
    pub rows: Vec<TableRow>,
}

/// Fields of class group exponent 2 or 3 with a quadratic modulus character at d_E.
pub fn survey_quadratic_modulus(exponent: u32, ell: u32) -> Result<QuadModSurvey> {
    let (bound, prov) = match exponent {
        2 => (EXPONENT_TWO_BOUND, Provenance::QuadmodE2),
        3 => (EXPONENT_THREE_BOUND, Provenance::QuadmodE3),
        _ => return Err(Error::InvalidArgument("exponent must be 2 or 3".into())),
    };
    if ell % 2 == 0 || (exponent == 3 && ell % 3 == 0) {
        return Err(Error::InvalidArgument(format!("l = {ell} is not allowed for exponent {exponent}")));
    }
    let swept = enumerate_discriminants(bound, Some(exponent));
    enum Outcome {
        Skip,
        Reject(Rejection),
        Rows(Vec<TableRow>),
    }
    let outcomes = swept
        .par_iter()
        .map(|&delta| -> Result<Outcome> {
            let field = FieldE::new(delta)?;
            let (de, _) = minimal_conductor(field);
            let cg = ClassGroup::new(field, &de)?;
            if !cg.is_cyclic() {
                let v = check_q1(&cg, ell)?;
                if !v.holds {
                    return Ok(Outcome::Reject(Rejection {
                        delta_e: delta,
                        class_group: cg.orders.clone(),
                        reason: "Q1".into(),
                    }));
                }
            }
            if delta.rem_euclid(8) == 4 {
                return Ok(Outcome::Skip);
            }
            let s = Arc::new(UnitsStructure::new(field, &de)?);
            let cg = Arc::new(cg);
            let mut rows: Vec<TableRow> = Vec::new();
            for eta in enumerate_eta(&s, OrderConstraint::Divides(2), Some(ell)) {
                let psi = Grossenchar::build_with(&eta, ell, None, cg.clone())?;
                let row = TableRow::new(psi, prov)?;
                if !rows.iter().any(|r| r.field.disc == row.field.disc) {
                    rows.push(row);
                }
            }
            if rows.is_empty() {
                return Err(Error::Inconsistent(format!("no quadratic eta at d_E for {delta}")));
            }
            Ok(Outcome::Rows(rows))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = QuadModSurvey { exponent, ell, swept: swept.clone(), skipped: Vec::new(), rejections: Vec::new(), rows: Vec::new() };
    for (&delta, o) in swept.iter().zip(outcomes) {
        match o {
            Outcome::Skip => out.skipped.push(delta),
            Outcome::Reject(r) => out.rejections.push(r),
            Outcome::Rows(rs) => out.rows.extend(rs),
        }
    }
    sort_rows(&mut out.rows);
    Ok(out)
}

/// Result of a bounded search for an order-4 modulus character with eta(theta) = +-i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedSearch {
    pub delta_e: i64,
    pub r: u32,
    /// Every integral modulus of norm at most this was considered.
    pub bound: i64,
    /// Moduli on which the group (o/m)^x was built and searched.
    pub moduli_searched: usize,
    /// Moduli discarded because |Delta| does not divide m ∩ Z, so chi_E cannot factor through them.
    pub moduli_pruned: usize,
    /// A modulus admitting such a character, if one was found.
    pub found: Option<String>,
}

/// Output of the higher-order modulus survey over exponent 2 fields.
#[derive(Debug, Clone)]
pub struct HigherOrderSurvey {
    pub ell: u32,
    /// For r = 4 and r = 6, the discriminants where R1 holds.
    pub r1_holds: Vec<(u32, Vec<i64>)>,
    pub rows: Vec<TableRow>,
    pub searches: Vec<BoundedSearch>,
}

/// Order 4 and 6 modulus characters over exponent 2 fields. For Delta = 0 mod 8
/// in the r = 4 case the nonexistence of eta is checked for all moduli of norm
/// at most `conductor_norm_bound`.
pub fn survey_higher_order(ell: u32, conductor_norm_bound: i64) -> Result<HigherOrderSurvey> {
    if ell % 2 == 0 {
        return Err(Error::InvalidArgument("l must be odd".into()));
    }
    let fields = enumerate_discriminants(EXPONENT_TWO_BOUND, Some(2));
    let mut r1_holds = Vec::new();
    for r in [4u32, 6] {
        let holds = fields
            .par_iter()
            .map(|&delta| -> Result<Option<i64>> {
                let field = FieldE::new(delta)?;
                let (de, _) = minimal_conductor(field);
                let cg = ClassGroup::new(field, &de)?;
                Ok(check_r1(&cg, ell, r)?.holds.then_some(delta))
            })
            .collect::<Result<Vec<_>>>()?;
        r1_holds.push((r, holds.into_iter().flatten().collect::<Vec<_>>()));
    }
    let mut rows = Vec::new();
    let mut searches = Vec::new();
    for (r, list) in &r1_holds {
        for &delta in list {
            let field = FieldE::new(delta)?;
            let (de, _) = minimal_conductor(field);
            match (r, delta.rem_euclid(8)) {
                (4, 4) => rows.push(TableRow::new(first_psi(field, &de, OrderConstraint::Equals(4), ell)?, Provenance::HighordR4)?),
                (4, 0) => searches.push(order_four_search(field, ell, conductor_norm_bound)?),
                (6, _) => {
                    let p3 = primes_above(field, 3)
                        .into_iter()
                        .next()
                        .ok_or_else(|| Error::Inconsistent("no prime above 3".into()))?;
                    let m = p3.mul(&de);
                    rows.push(TableRow::new(first_psi(field, &m, OrderConstraint::Equals(6), ell)?, Provenance::HighordR6)?);
                }
                _ => {
                    return Err(Error::Inconsistent(format!("R1 holds for {delta} with r = {r} outside the known cases")));
                }
            }
        }
    }
    sort_rows(&mut rows);
    Ok(HigherOrderSurvey { ell, r1_holds, rows, searches })
}

/// Integral ideals of norm at most `bound`, as (norm, ideal).
fn integral_ideals(field: FieldE, bound: i64) -> Vec<(i64, QIdeal)> {
    crate::cmform::ideals_of_norm_up_to(field, bound)
}

/// Search all moduli m with N(m) <= bound for an order 4 eta with eta^Z = chi_E,
/// compatible with weight l, and eta(theta) = +-i for theta generating t^2.
pub fn order_four_search(field: FieldE, ell: u32, bound: i64) -> Result<BoundedSearch> {
    let delta = field.delta();
    let ideals = integral_ideals(field, bound);
    let (keep, pruned): (Vec<_>, Vec<_>) = ideals.into_iter().partition(|(_, m)| {
        let (a, _, _) = m.hnf();
        a % delta == 0
    });
    let found = keep
        .par_iter()
        .map(|(_, m)| -> Result<Option<String>> {
            let cg = ClassGroup::new(field, m)?;
            if cg.orders != [2] {
                return Err(Error::Unsupported("bounded search expects class group C2".into()));
            }
            let s = Arc::new(UnitsStructure::new(field, m)?);
            for eta in enumerate_eta(&s, OrderConstraint::Equals(4), Some(ell)) {
                let v = eta.eval(&cg.thetas[0])?;
                if v.order() == 4 {
                    return Ok(Some(m.to_string()));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(BoundedSearch {
        delta_e: delta,
        r: 4,
        bound,
        moduli_searched: keep.len(),
        moduli_pruned: pruned.len(),
        found,
    })
}

/// A table entry: a field discriminant with every Delta_E realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    #[serde(serialize_with = "crate::json::big_as_string")]
    pub delta_k: BigInt,
    pub delta_e: Vec<i64>,
}

/// The quadratic and cubic rationality fields of weight 2 CM forms.
#[derive(Debug, Clone)]
pub struct Theorem2Tables {
    pub quadratic: Vec<TableEntry>,
    pub cubic: Vec<TableEntry>,
    /// Every row behind the entries, one per (Delta_K, Delta_E) pair.
    pub rows: Vec<TableRow>,
}

/// Group rows into entries keyed by Delta_K, with Delta_E sorted by absolute value.
pub fn group_rows(rows: &[TableRow]) -> Vec<TableEntry> {
    let mut map: BTreeMap<BigInt, Vec<i64>> = BTreeMap::new();
    for r in rows {
        let v = map.entry(r.field.disc.clone()).or_default();
        if !v.contains(&r.delta_e) {
            v.push(r.delta_e);
        }
    }
    map.into_iter()
        .map(|(delta_k, mut delta_e)| {
            delta_e.sort_by_key(|d| d.abs());
            TableEntry { delta_k, delta_e }
        })
        .collect()
}

/// Union of the weight 2 (l = 1) constructions, deduplicated by (Delta_K, Delta_E).
pub fn theorem2_tables() -> Result<Theorem2Tables> {
    let mut all = survey_h1(1, 2)?;
    all.extend(survey_h1(1, 3)?);
    all.extend(survey_quadratic_modulus(2, 1)?.rows);
    all.extend(survey_quadratic_modulus(3, 1)?.rows);
    all.extend(survey_higher_order(1, 0)?.rows);
    sort_rows(&mut all);
    let mut rows: Vec<TableRow> = Vec::new();
    for r in all {
        if !rows.iter().any(|s| s.delta_e == r.delta_e && s.field.disc == r.field.disc) {
            rows.push(r);
        }
    }
    let (quad, cubic): (Vec<TableRow>, Vec<TableRow>) = rows.iter().cloned().partition(|r| r.degree() == 2);
    if cubic.iter().any(|r| r.degree() != 3) {
        return Err(Error::Inconsistent("unexpected rationality field degree".into()));
    }
    Ok(Theorem2Tables { quadratic: group_rows(&quad), cubic: group_rows(&cubic), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(rows: &[TableRow]) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> =
            rows.iter().map(|r| (r.delta_e, i64::try_from(&r.field.disc).unwrap())).collect();
        v.sort();
        v
    }

    #[test]
    fn class_number_one_levels() {
        let d1 = survey_h1(1, 1).unwrap();
        assert_eq!(d1.len(), 9);
        for row in &d1 {
            assert_eq!(row.degree(), 1);
            let n = match row.delta_e {
                -3 => 27,
                -4 => 32,
                -8 => 256,
                d => d * d,
            };
            assert_eq!(row.level, n, "{}", row.delta_e);
        }
        let d2 = survey_h1(1, 2).unwrap();
        assert_eq!(d2.len(), 17);
        let lv = |d: i64, k: i64| d2.iter().find(|r| r.delta_e == d && r.field.disc == BigInt::from(k)).unwrap().level;
        assert_eq!(lv(-163, 489), 106276);
        assert_eq!(lv(-163, 652), 239121);
        assert_eq!(lv(-4, 8), 32 * 49);
        assert_eq!(lv(-4, 12), 32 * 121);
        assert_eq!(lv(-3, 12), 9 * 121);
        assert_eq!(lv(-11, 44), 25 * 121);
        assert_eq!(lv(-8, 8), 256);
        let d3 = survey_h1(1, 3).unwrap();
        assert_eq!(pairs(&d3), vec![(-7, 49), (-3, 81)]);
        assert_eq!(d3.iter().find(|r| r.delta_e == -3).unwrap().level, 3i64.pow(7));
        assert_eq!(d3.iter().find(|r| r.delta_e == -7).unwrap().level, 343);
    }

    #[test]
    fn exponent_two_sweep() {
        let s = survey_quadratic_modulus(2, 1).unwrap();
        assert_eq!(s.swept.len(), 56);
        assert_eq!(s.rejections.len(), 38);
        assert_eq!(s.skipped, vec![-20, -52, -148]);
        let mut expect: Vec<(i64, i64)> = reference::QUAD_ODD.iter().chain(&reference::QUAD_EVEN).copied().collect();
        expect.sort();
        assert_eq!(pairs(&s.rows), expect);
        for r in &s.rows {
            assert_eq!(r.level, r.delta_e.abs() * minimal_conductor(r.witness.field()).0.norm_int());
        }
    }

    #[test]
    fn exponent_three_sweep() {
        let s = survey_quadratic_modulus(3, 1).unwrap();
        assert_eq!(s.swept.len(), 17);
        assert_eq!(s.rejections.iter().map(|r| r.delta_e).collect::<Vec<_>>(), vec![-4027]);
        let mut expect = reference::QUAD_E3.to_vec();
        expect.sort();
        assert_eq!(pairs(&s.rows), expect);
        assert!(survey_quadratic_modulus(3, 3).is_err());
    }

    #[test]
    fn higher_order_cases() {
        let s = survey_higher_order(1, 200).unwrap();
        assert_eq!(s.r1_holds[0], (4, reference::R1_ORDER_FOUR.to_vec()));
        assert_eq!(s.r1_holds[1], (6, reference::R1_ORDER_SIX.to_vec()));
        let r4: Vec<(i64, i64)> = pairs(&s.rows.iter().filter(|r| r.provenance == Provenance::HighordR4).cloned().collect::<Vec<_>>());
        assert_eq!(r4, vec![(-148, 37), (-52, 13), (-20, 5)]);
        for r in &s.rows {
            match r.provenance {
                Provenance::HighordR4 => assert_eq!(r.level, 2 * r.delta_e * r.delta_e),
                _ => {
                    assert_eq!(r.level, 3 * minimal_conductor(r.witness.field()).1);
                    assert_eq!(r.field.disc, BigInt::from(crate::arith::field_discriminant_of(r.delta_e.abs() / 3)));
                }
            }
        }
        assert_eq!(s.searches.len(), 4);
        assert!(s.searches.iter().all(|b| b.found.is_none()));
        assert!(s.searches[0].moduli_searched > 0);
    }
}
