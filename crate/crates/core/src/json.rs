//! JSON records. Integers are written as decimal strings and ideals as
//! (a, b, scale) triples for the ideal scale * (Z a + Z (b + w)).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;
use serde_json::{json, Value};

use crate::chargroup::Angle;
use crate::cmform::{CMForm, HeckeFailure, HeckeReport};
use crate::grossenchar::Grossenchar;
use crate::quadfield::{ClassGroup, QIdeal, QuadElem};
use crate::survey::{TableEntry, TableRow};
use crate::valuefield::{AlgElem, RationalityField, ValueAlgebra};

pub fn big_as_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn int(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

pub fn ideal(a: &QIdeal) -> Value {
    json!([int(a.a()), int(a.b()), int(a.scale())])
}

pub fn quad(z: &QuadElem) -> Value {
    json!([rational(&z.x), rational(&z.y)])
}

pub fn angle(t: &Angle) -> Value {
    Value::String(format!("{}/{}", t.numer(), t.denom()))
}

pub fn alg_elem(a: &AlgElem) -> Value {
    json!({
        "num": a.numerators().iter().map(int).collect::<Vec<_>>(),
        "den": int(a.denominator()),
    })
}

pub fn class_group(cg: &ClassGroup) -> Value {
    json!({
        "h": int(cg.h),
        "orders": cg.orders.iter().map(int).collect::<Vec<_>>(),
        "generators": cg.gens.iter().map(ideal).collect::<Vec<_>>(),
        "thetas": cg.thetas.iter().map(quad).collect::<Vec<_>>(),
    })
}

/// Presentation header: E, r, and the radicals beta_i^{n_i} = gamma_i.
pub fn algebra(alg: &ValueAlgebra) -> Value {
    json!({
        "delta_E": int(alg.field().delta()),
        "r": int(alg.r()),
        "dim": int(alg.dim()),
        "basis": "w^a zeta_r^b beta^c, index a + 2b + 2 phi(r) * (mixed radix c)",
        "radicals": alg.radicals().iter().map(|rad| json!({
            "n": int(rad.n),
            "gamma": alg_elem(&rad.gamma),
            "root_choice": int(rad.root_choice),
        })).collect::<Vec<_>>(),
    })
}

pub fn grossenchar(psi: &Grossenchar) -> Value {
    let eta = psi.eta();
    let s = eta.structure();
    json!({
        "delta_E": int(psi.field().delta()),
        "modulus": ideal(psi.modulus()),
        "ell": int(psi.ell()),
        "weight": int(psi.weight()),
        "level": int(psi.level()),
        "eta": {
            "generators": s.generators().iter().map(quad).collect::<Vec<_>>(),
            "orders": s.orders().iter().map(int).collect::<Vec<_>>(),
            "exponents": eta.exps().iter().map(int).collect::<Vec<_>>(),
            "order": int(eta.order()),
        },
        "class_group": class_group(psi.class_group()),
        "roots": psi.roots().iter().map(int).collect::<Vec<_>>(),
        "algebra": algebra(psi.algebra()),
    })
}

pub fn table_row(row: &TableRow) -> Value {
    json!({
        "delta_E": int(row.delta_e),
        "delta_K": int(&row.field.disc),
        "poly": row.field.poly.iter().map(int).collect::<Vec<_>>(),
        "degree": int(row.field.degree),
        "level": int(row.level),
        "provenance": row.provenance.to_string(),
        "witness": grossenchar(&row.witness),
    })
}

pub fn table(entries: &[TableEntry], rows: &[TableRow]) -> Value {
    json!({
        "entries": entries.iter().map(|e| json!({
            "delta_K": int(&e.delta_k),
            "delta_E": e.delta_e.iter().map(int).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "rows": rows.iter().map(table_row).collect::<Vec<_>>(),
    })
}

/// Fixed 12-digit decimal string, with tiny values written as zero.
pub fn decimal(x: f64) -> Value {
    let v = if x.abs() < 5e-13 { 0.0 } else { x };
    Value::String(format!("{v:.12}"))
}

pub fn q_expansion(f: &CMForm) -> Value {
    let alg = f.psi.algebra();
    json!({
        "header": {
            "level": int(f.level),
            "weight": int(f.weight),
            "delta_E": int(f.psi.field().delta()),
            "conductor": ideal(f.psi.modulus()),
            "B": int(f.bound),
            "algebra": algebra(alg),
        },
        "coefficients": f.complex_coeffs.iter().skip(1).map(|z| json!([decimal(z.re), decimal(z.im)])).collect::<Vec<_>>(),
        "exact": f.coeffs.iter().skip(1).map(alg_elem).collect::<Vec<_>>(),
    })
}

pub fn hecke_report(r: &HeckeReport) -> Value {
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| match *f {
            HeckeFailure::Multiplicative { m, n } => json!({"kind": "multiplicative", "m": int(m), "n": int(n)}),
            HeckeFailure::PrimePower { p, j } => json!({"kind": "prime_power", "p": int(p), "j": int(j)}),
        })
        .collect();
    json!({
        "ok": r.is_ok(),
        "pairs_checked": int(r.pairs_checked),
        "powers_checked": int(r.powers_checked),
        "failures": failures,
    })
}

pub fn rationality_field(k: &RationalityField) -> Value {
    serde_json::to_value(k).expect("field serializes")
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}
