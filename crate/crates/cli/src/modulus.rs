use grossen::grossenchar::minimal_conductor;
use grossen::{FieldE, QIdeal};
use num_rational::Ratio;

/// Parse a modulus for the field.
///
/// * `n` is n o_E
/// * `nd` or `d` is n d_E, d_E the smallest modulus carrying chi_E
/// * `a,b,s` is s (Z a + Z (b + w)) with w = (D + sqrt D)/2
/// * `gen:x,y` is the principal ideal (x + y w)
pub fn parse_modulus(field: FieldE, s: &str) -> Result<QIdeal, String> {
    let s = s.trim();
    let ints = |t: &str| -> Result<Vec<i64>, String> {
        t.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| format!("bad integer {p:?} in modulus {s:?}")))
            .collect()
    };
    if let Some(rest) = s.strip_prefix("gen:") {
        let v = ints(rest)?;
        let [x, y] = v[..] else {
            return Err(format!("gen: takes two integers, got {rest:?}"));
        };
        if x == 0 && y == 0 {
            return Err("the zero ideal is not a modulus".into());
        }
        return QIdeal::principal(&field.elem(x, y)).map_err(|e| e.to_string());
    }
    if let Some(n) = s.strip_suffix('d') {
        let n = if n.is_empty() { 1 } else { ints(n)?[0] };
        if n <= 0 {
            return Err(format!("multiplier in {s:?} must be positive"));
        }
        return Ok(QIdeal::from_int(field, n).mul(&minimal_conductor(field).0));
    }
    let v = ints(s)?;
    match v[..] {
        [n] if n > 0 => Ok(QIdeal::from_int(field, n)),
        [a, b, sc] if sc > 0 => QIdeal::new(field, a, b, Ratio::from_integer(sc)).map_err(|e| e.to_string()),
        _ => Err(format!("cannot read modulus {s:?}; use n, nd, a,b,s or gen:x,y")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_agree() {
        let e = FieldE::new(-4).unwrap();
        let g = parse_modulus(e, "gen:2,2").unwrap();
        assert_eq!(g.norm_int(), 8);
        let (a, b, c) = g.hnf();
        assert_eq!(parse_modulus(e, &format!("{},{},{}", a / c, b / c, c)).unwrap(), g);
        assert_eq!(parse_modulus(e, "3").unwrap().norm_int(), 9);
        assert_eq!(parse_modulus(e, "d").unwrap(), g);
        assert_eq!(parse_modulus(e, "3d").unwrap().norm_int(), 72);
        assert!(parse_modulus(e, "3,1,1").is_err());
        assert!(parse_modulus(e, "x").is_err());
        assert!(parse_modulus(e, "gen:0,0").is_err());
    }
}
