//! Exact arithmetic in imaginary quadratic fields: elements, ideals, prime
//! splitting, principality and class groups via reduced forms.

mod classgroup;
mod elem;
mod ideal;
mod roots;

pub use classgroup::{
    class_group_by_relations, class_group_exponent, class_number, compose, enumerate_discriminants,
    form_of_ideal, ideal_of_form, is_principal, reduced_forms, ClassGroup, Form, GeneratorChoice,
};
pub use elem::{FieldE, QuadElem, SplitType};
pub use ideal::{primes_above, primes_up_to_norm, QIdeal};
pub use roots::{is_cube_in_e, is_square_in_e};
