//! Row reduction of skew polynomial matrices over finite fields, with
//! decoders for interleaved Gabidulin codes and Mahdavifar–Vardy subspace
//! codes built on top.

pub mod batch;
pub mod error;
pub mod ffield;
pub mod gabidulin;
pub mod mglssr;
pub mod mvinterp;
pub mod oracle;
pub mod rowreduce;
pub mod skewmat;
pub mod skewpoly;
pub mod wire;

pub use error::{Error, Result};
pub use batch::Execution;
pub use ffield::{FieldCtx, FieldDesc, FieldElem};
pub use gabidulin::{add_rank_error, DecodingFailure, GabCode};
pub use mglssr::{MgLssrInstance, MgLssrSolution};
pub use mvinterp::{MvEngine, MvInstance, MvSolution};
pub use skewmat::{Shift, SkewMatrix, SkewVec};
pub use skewpoly::{Degree, SkewPoly};
