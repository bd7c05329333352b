//! Newton–Puiseux expansion of plane curve branches.
//!
//! The crate computes truncated Puiseux parameterizations (T^r, p(T)) of
//! every branch of f(x, y) = 0 at a point, checks them by back-substitution,
//! and classifies triple points with a single triple tangent.
//!
//! ```
//! use std::sync::Arc;
//! use puiseux::{numeric::Ctx, poly::parse_poly_full, expansion::{branches_at_origin, ExpandOptions}};
//!
//! let ctx = Arc::new(Ctx::new(128));
//! let f = parse_poly_full("y^2 - x^3", &ctx).unwrap();
//! let set = branches_at_origin(&f.poly, f.exact.as_ref(), &ExpandOptions::default()).unwrap();
//! assert_eq!(set.branches.len(), 1);
//! assert_eq!(set.branches[0].r, 2);
//! ```

pub mod expansion;
pub mod numeric;
pub mod poly;
pub mod polygon;
pub mod roots;
pub mod svg;
pub mod triple;
