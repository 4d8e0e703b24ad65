//! Numerical building blocks: grids, special functions, quadrature,
//! continuous-time Fourier and Hilbert transforms, and half-height widths.

pub mod fourier;
pub mod grid;
pub mod hilbert;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use fourier::{dft, dtft, idft, inverse_dtft, ComplexSpectrum};
pub use grid::{Grid, SampledWaveform};
pub use hilbert::hilbert;
pub use quadrature::{trapz, trapz_samples};
pub use roots::{bisect, find_half_height_width, HalfHeightWidth};
pub use special::{dawson, erf, erfc, upper_incomplete_gamma, SpecialFun, SpecialFunValue};
