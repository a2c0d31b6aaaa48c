pub mod error;
pub mod hierarchy;
pub mod ideal;
pub mod length;
pub mod nwqo;
pub mod ordinal;
pub mod par;
pub mod reflect;

pub use error::{Error, Result};
