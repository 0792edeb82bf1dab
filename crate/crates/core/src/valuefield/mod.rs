//! Value fields of Groessencharacters and rationality fields of their newforms.

mod algebra;
mod kummer;
mod ratfield;

pub use algebra::{AlgElem, Radical, ValueAlgebra};
pub use kummer::{
    check_q1, check_r1, cyclotomic_degree, is_nth_power, kummer_rank, mu_f, nth_root, value_field_degree,
    Q1Verdict, R1Verdict,
};
pub use ratfield::{cubic_disc, cubic_field_disc, dedekind, rationality_field, RationalityField};
