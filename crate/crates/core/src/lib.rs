//! Groessencharacters of imaginary quadratic fields, their value fields and the
//! rationality fields of the attached CM newforms.
//!
//! The crate is organised bottom-up: [`quadfield`] does exact arithmetic in
//! E = Q(sqrt(D)), [`resunits`] and [`chargroup`] handle the finite groups
//! (o/m)^x and their characters, [`grossenchar`] builds characters on ideals,
//! [`valuefield`] decides value fields and rationality fields, [`cmform`] produces
//! q-expansions, [`survey`] drives the classification sweeps and [`verify`]
//! runs the acceptance criteria.

pub mod arith;
pub mod chargroup;
pub mod cmform;
pub mod error;
pub mod grossenchar;
pub mod json;
pub mod quadfield;
pub mod resunits;
pub mod survey;
pub mod valuefield;
pub mod verify;

pub use chargroup::{Angle, DirichletChar, GroupChar};
pub use cmform::{CMForm, HeckeReport};
pub use error::{Error, Result};
pub use grossenchar::{Grossenchar, Nebentypus};
pub use quadfield::{ClassGroup, FieldE, QIdeal, QuadElem, SplitType};
pub use resunits::UnitsStructure;
pub use valuefield::{RationalityField, ValueAlgebra};
