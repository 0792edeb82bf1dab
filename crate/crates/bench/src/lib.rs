//! Fixtures shared by the benchmarks.

use grossen::chargroup::{enumerate_eta_for, OrderConstraint};
use grossen::{FieldE, Grossenchar, QIdeal};

/// Weight 2 character of Q(i) with modulus (2 + 2i); its form has level 32.
pub fn gaussian_psi() -> Grossenchar {
    let e = FieldE::new(-4).expect("fundamental");
    let m = QIdeal::principal(&e.elem(2, 2)).expect("nonzero");
    let etas = enumerate_eta_for(e, &m, OrderConstraint::Any, Some(1)).expect("modulus is integral");
    Grossenchar::build(&etas[0], 1, None).expect("eta is admissible")
}

/// Quadratic-modulus character of Q(sqrt -3315), class group C2^3.
pub fn big_class_group_psi() -> Grossenchar {
    let e = FieldE::new(-3315).expect("fundamental");
    let m = grossen::grossenchar::minimal_conductor(e).0;
    let etas = enumerate_eta_for(e, &m, OrderConstraint::Divides(2), Some(1)).expect("modulus is integral");
    Grossenchar::build_trivial_nebentypus(&etas[0], 1, None).expect("eta is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(gaussian_psi().level(), 32);
        assert_eq!(big_class_group_psi().class_group().orders, vec![2, 2, 2]);
    }
}
