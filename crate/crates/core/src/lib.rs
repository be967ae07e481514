//! Hermitian self-dual codes over GF(q²) built from unitary matrices.

pub mod error;
pub mod field;
pub mod linalg;
pub mod unitary;
pub mod code;
pub mod construct;
pub mod mpcode;
pub mod search;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx};
pub use linalg::Matrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/unitary.md")]
    pub mod unitary {}
    #[doc = include_str!("../../../book/src/codes.md")]
    pub mod codes {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    pub mod constructions {}
    #[doc = include_str!("../../../book/src/bordered.md")]
    pub mod bordered {}
    #[doc = include_str!("../../../book/src/extension.md")]
    pub mod extension {}
    #[doc = include_str!("../../../book/src/matrix-product.md")]
    pub mod matrix_product {}
    #[doc = include_str!("../../../book/src/search.md")]
    pub mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
