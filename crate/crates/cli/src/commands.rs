use std::collections::BTreeSet;
use std::sync::Arc;

use grossen::chargroup::{all_chars, enumerate_eta, GroupChar, OrderConstraint};
use grossen::cmform::{hecke_verify, q_expansion};
use grossen::json::{self, int};
use grossen::survey::{
    group_rows, reference, survey_higher_order, survey_quadratic_modulus, theorem2_tables, TableEntry, TableRow,
};
use grossen::{ClassGroup, FieldE, Grossenchar, Nebentypus, QIdeal, UnitsStructure};
use serde_json::{json, Value};

use crate::config::{precision_from_env, RunConfig};
use crate::modulus::parse_modulus;
use crate::{Cli, Command, FieldModulus, GrossAction, PsiSpec, TableKind};

pub enum Status {
    Ok,
    Mismatch,
}

type Outcome = Result<(Value, Status), String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

pub fn run(cli: Cli) -> Result<Status, String> {
    let precision = precision_from_env()?;
    let mut cfg = RunConfig::new("", cli.output.clone(), precision);
    let (result, status) = match cli.command {
        Command::Classgroup { delta } => {
            cfg.command = "classgroup".into();
            cfg.delta = Some(delta);
            classgroup(delta)?
        }
        Command::Units(fm) => {
            cfg.command = "units".into();
            set_fm(&mut cfg, &fm);
            units(&fm)?
        }
        Command::Chars { fm, order, ell } => {
            cfg.command = "chars".into();
            set_fm(&mut cfg, &fm);
            cfg.ell = ell;
            chars(&fm, order, ell)?
        }
        Command::Gross { action } => match action {
            GrossAction::Build(spec) => {
                cfg.command = "gross build".into();
                set_spec(&mut cfg, &spec);
                gross_build(&spec)?
            }
            GrossAction::Eval { spec, at } => {
                cfg.command = "gross eval".into();
                set_spec(&mut cfg, &spec);
                gross_eval(&spec, &at)?
            }
        },
        Command::Qexp { spec, bound } => {
            cfg.command = "qexp".into();
            set_spec(&mut cfg, &spec);
            cfg.bound = Some(bound);
            qexp(&spec, bound)?
        }
        Command::Table { which, conductor_norm_bound } => {
            cfg.command = format!("table {}", table_name(which));
            cfg.ell = Some(1);
            cfg.conductor_norm_bound = Some(conductor_norm_bound);
            table(which, conductor_norm_bound)?
        }
        Command::Verify { .. } => {
            cfg.command = "verify all".into();
            verify_all()
        }
    };
    let doc = json!({
        "config": serde_json::to_value(&cfg).map_err(err)?,
        "result": result,
    });
    let text = json::to_string(&doc);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(status)
}

fn set_fm(cfg: &mut RunConfig, fm: &FieldModulus) {
    cfg.delta = Some(fm.delta);
    cfg.conductor = Some(fm.modulus.clone());
}

fn set_spec(cfg: &mut RunConfig, spec: &PsiSpec) {
    set_fm(cfg, &spec.fm);
    cfg.ell = Some(spec.ell);
}

fn field_modulus(fm: &FieldModulus) -> Result<(FieldE, QIdeal), String> {
    let field = FieldE::new(fm.delta).map_err(err)?;
    let m = parse_modulus(field, &fm.modulus)?;
    Ok((field, m))
}

fn classgroup(delta: i64) -> Outcome {
    let field = FieldE::new(delta).map_err(err)?;
    let cg = ClassGroup::new(field, &QIdeal::unit(field)).map_err(err)?;
    let mut v = json::class_group(&cg);
    v["delta_E"] = int(delta);
    v["invariants"] = json!(cg.invariants().iter().map(int).collect::<Vec<_>>());
    Ok((v, Status::Ok))
}

fn units(fm: &FieldModulus) -> Outcome {
    let (field, m) = field_modulus(fm)?;
    let s = UnitsStructure::new(field, &m).map_err(err)?;
    let v = json!({
        "delta_E": int(field.delta()),
        "modulus": json::ideal(&m),
        "norm": int(m.norm_int()),
        "orders": s.orders().iter().map(int).collect::<Vec<_>>(),
        "generators": s.generators().iter().map(json::quad).collect::<Vec<_>>(),
        "invariants": s.invariants().iter().map(int).collect::<Vec<_>>(),
        "exponent": int(s.exponent()),
    });
    Ok((v, Status::Ok))
}

fn constraint(order: Option<u64>) -> OrderConstraint {
    order.map_or(OrderConstraint::Any, OrderConstraint::Equals)
}

fn char_json(eta: &GroupChar) -> Value {
    json!({
        "exponents": eta.exps().iter().map(int).collect::<Vec<_>>(),
        "order": int(eta.order()),
        "conductor": json::ideal(&eta.conductor()),
        "restricts_to_chi_E": eta.restricts_to_kronecker(),
    })
}

fn chars(fm: &FieldModulus, order: Option<u64>, ell: Option<u32>) -> Outcome {
    let (field, m) = field_modulus(fm)?;
    let s = Arc::new(UnitsStructure::new(field, &m).map_err(err)?);
    let list = match ell {
        Some(l) => enumerate_eta(&s, constraint(order), Some(l)),
        None => all_chars(&s, constraint(order)),
    };
    let v = json!({
        "delta_E": int(field.delta()),
        "modulus": json::ideal(&m),
        "orders": s.orders().iter().map(int).collect::<Vec<_>>(),
        "count": int(list.len()),
        "characters": list.iter().map(char_json).collect::<Vec<_>>(),
    });
    Ok((v, Status::Ok))
}

/// The `index`-th admissible modulus character for the spec, made into psi.
fn build_psi(spec: &PsiSpec) -> Result<Grossenchar, String> {
    let (field, m) = field_modulus(&spec.fm)?;
    let s = Arc::new(UnitsStructure::new(field, &m).map_err(err)?);
    let etas: Vec<GroupChar> = enumerate_eta(&s, constraint(spec.order), Some(spec.ell))
        .into_iter()
        .filter(|e| !spec.trivial_nebentypus || e.restricts_to_kronecker())
        .collect();
    let eta = etas.get(spec.index).ok_or_else(|| {
        format!(
            "no Groessencharacter: {} admissible modulus characters, index {} requested",
            etas.len(),
            spec.index
        )
    })?;
    if spec.trivial_nebentypus {
        Grossenchar::build_trivial_nebentypus(eta, spec.ell, None).map_err(err)
    } else {
        Grossenchar::build(eta, spec.ell, None).map_err(err)
    }
}

fn psi_json(psi: &Grossenchar) -> Result<Value, String> {
    let mut v = json::grossenchar(psi);
    v["conductor"] = json::ideal(&psi.conductor());
    v["primitive"] = json!(psi.is_primitive());
    v["value_field_degree"] = int(psi.value_field_degree().map_err(err)?);
    v["nebentypus_trivial"] = json!(psi.nebentypus() == Nebentypus::Trivial);
    v["rationality_field"] = match psi.rationality_field() {
        Ok(k) => json::rationality_field(&k),
        Err(_) => Value::Null,
    };
    Ok(v)
}

fn gross_build(spec: &PsiSpec) -> Outcome {
    let psi = build_psi(spec)?;
    Ok((psi_json(&psi)?, Status::Ok))
}

fn gross_eval(spec: &PsiSpec, at: &[String]) -> Outcome {
    let psi = build_psi(spec)?;
    let field = psi.field();
    let alg = psi.algebra();
    let mut values = Vec::new();
    for s in at {
        let a = parse_modulus(field, s)?;
        let x = psi.evaluate(&a);
        let z = alg.to_complex(&x);
        values.push(json!({
            "ideal": json::ideal(&a),
            "norm": int(a.norm_int()),
            "coprime": psi.is_coprime(&a),
            "exact": json::alg_elem(&x),
            "complex": [json::decimal(z.re), json::decimal(z.im)],
        }));
    }
    let v = json!({
        "psi": json::grossenchar(&psi),
        "values": values,
    });
    Ok((v, Status::Ok))
}

fn qexp(spec: &PsiSpec, bound: usize) -> Outcome {
    if bound < 1 {
        return Err("B must be at least 1".into());
    }
    let psi = build_psi(spec)?;
    let f = q_expansion(&psi, bound);
    let report = hecke_verify(&f);
    let mut v = json::q_expansion(&f);
    v["hecke"] = json::hecke_report(&report);
    v["ramanujan"] = json!(f.ramanujan_holds());
    let ok = report.is_ok() && f.ramanujan_holds();
    Ok((v, if ok { Status::Ok } else { Status::Mismatch }))
}

fn table_name(t: TableKind) -> &'static str {
    match t {
        TableKind::Deg2 => "deg2",
        TableKind::Deg3 => "deg3",
        TableKind::Quadodd => "quadodd",
        TableKind::Quadeven => "quadeven",
        TableKind::Quade3 => "quade3",
    }
}

fn pairs(rows: &[TableRow]) -> BTreeSet<(i64, i64)> {
    rows.iter()
        .map(|r| (r.delta_e, i64::try_from(&r.field.disc).unwrap_or(i64::MAX)))
        .collect()
}

fn table(which: TableKind, conductor_norm_bound: i64) -> Outcome {
    let (entries, rows, want): (Vec<TableEntry>, Vec<TableRow>, BTreeSet<(i64, i64)>) = match which {
        TableKind::Deg2 | TableKind::Deg3 => {
            let t = theorem2_tables().map_err(err)?;
            let deg = if matches!(which, TableKind::Deg2) { 2 } else { 3 };
            let rows: Vec<TableRow> = t.rows.into_iter().filter(|r| r.degree() == deg).collect();
            let want = if deg == 2 {
                reference::QUADRATIC.iter().flat_map(|(k, es)| es.iter().map(move |&e| (e, *k))).collect()
            } else {
                reference::CUBIC.iter().map(|&(k, e)| (e, k)).collect()
            };
            let entries = if deg == 2 { t.quadratic } else { t.cubic };
            (entries, rows, want)
        }
        TableKind::Quadodd | TableKind::Quadeven => {
            let odd = matches!(which, TableKind::Quadodd);
            let s = survey_quadratic_modulus(2, 1).map_err(err)?;
            let rows: Vec<TableRow> = s.rows.into_iter().filter(|r| (r.delta_e % 2 != 0) == odd).collect();
            let want = if odd { reference::QUAD_ODD.iter() } else { reference::QUAD_EVEN.iter() }.copied().collect();
            (group_rows(&rows), rows, want)
        }
        TableKind::Quade3 => {
            let s = survey_quadratic_modulus(3, 1).map_err(err)?;
            let want = reference::QUAD_E3.iter().copied().collect();
            (group_rows(&s.rows), s.rows, want)
        }
    };
    let matches = pairs(&rows) == want;
    let mut v = json::table(&entries, &rows);
    v["matches_reference"] = json!(matches);
    if conductor_norm_bound > 0 {
        let searches = survey_higher_order(1, conductor_norm_bound).map_err(err)?.searches;
        v["order_four_searches"] = searches
            .iter()
            .map(|b| {
                json!({
                    "delta_E": int(b.delta_e),
                    "r": int(b.r),
                    "bound": int(b.bound),
                    "moduli_searched": int(b.moduli_searched),
                    "moduli_pruned": int(b.moduli_pruned),
                    "found": b.found,
                })
            })
            .collect();
    }
    Ok((v, if matches { Status::Ok } else { Status::Mismatch }))
}

fn verify_all() -> (Value, Status) {
    let results = grossen::verify::run_all(|c| eprintln!("{c}"));
    let ok = results.iter().all(|c| c.passed);
    let v = json!({
        "passed": ok,
        "criteria": results.iter().map(|c| json!({
            "number": int(c.number),
            "name": c.name,
            "passed": c.passed,
            "message": c.message,
        })).collect::<Vec<_>>(),
    });
    (v, if ok { Status::Ok } else { Status::Mismatch })
}
