//! Brute-force reference computations and random instance generators for
//! testing `ivrand-core`. Nothing here is used by the library itself.

pub mod enumerate;
pub mod gen;
pub mod series;

pub use enumerate::{
    EndpointVertices,
    lower_by_endpoint_enumeration, precise_expectation_by_paths, upper_by_endpoint_enumeration,
    upper_by_endpoint_enumeration_capped, DEFAULT_DEPTH_CAP,
};
pub use series::series_limit_probe;
