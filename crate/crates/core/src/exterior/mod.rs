//! Alternating forms over a fixed coframe.

mod form;
pub mod hodge;
pub mod literal;

pub use form::{
    complement_sign, full_mask, indices_of, mask_of, subsets, wedge_sign, KForm, Mask, Vector, MAX_DIM,
};
pub use hodge::{form_inner, HodgeStar};
pub use literal::{format_form, parse_form};
