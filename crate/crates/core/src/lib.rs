//! Exact verification engine for the mod-2 cohomology of SL_2(Z[sqrt(-2)][1/2]),
//! computed as an amalgam of two copies of SL_2(Z[sqrt(-2)]) over Gamma_0(sqrt(-2)).

pub mod abelian;
pub mod cellmap;
pub mod cohomology;
pub mod complex;
pub mod config;
pub mod f2;
pub mod groups;
pub mod hyperbolic;
pub mod mat2;
pub mod mv;
pub mod quad;
pub mod report;

pub mod smith;
pub mod spectral;
