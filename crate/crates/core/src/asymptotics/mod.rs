//! Caloric polynomials and the late-time diagnostics of shrinking
//! n-loops: extinction-time and amplitude fits, the anisotropic square
//! rescaling and the largest-zero relation.

mod branches;
mod fits;
mod heat_poly;
mod rescale;

pub use branches::{extract_branches, Branch, TwoGraphs};
pub use fits::{
    best_profile_degree, check_eq7, estimate_extinction_time, fit_profile, least_squares_line,
    resolved_part, rightmost_loop_area, FitWindow, LineFit, ProfileFit, TimeEstimate,
    FEATURE_MARGIN, FIT_SNAPSHOTS,
};
pub use heat_poly::{
    hermite_eval, largest_hermite_zero, HeatPolynomial, MAX_EXACT_DEGREE,
};
pub use rescale::cs_rescale;
