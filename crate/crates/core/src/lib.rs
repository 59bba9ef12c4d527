pub mod chain;
pub mod conic;
pub mod error;
pub mod family;
pub mod geom;
pub mod incidence;
pub mod inversion;
pub mod report_json;
pub mod scene;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{GeneralizedCircle, Line, Point};
pub use inversion::Inversion;
