//! Special functions: gamma, Hurwitz zeta, Airy.

pub mod airy;
pub mod gamma;
pub mod zeta;

pub use airy::{airy, airy_real, airy_zero, rho, AiryKind, AiryMethod, AiryValue};
pub use gamma::{gamma, ln_gamma, recip_gamma};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_scaled};
