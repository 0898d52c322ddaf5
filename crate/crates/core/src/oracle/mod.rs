//! Independent reference calculations used to validate the closed forms.
//!
//! Nothing here calls the Green's-function or bound-state code. The path sum
//! reads the two step reflection amplitudes, everything else starts from the
//! potential alone.

pub mod fd;
pub mod path_sum;
pub mod spectral;
pub mod transfer;

pub use fd::{fd_eigensolve, FdGrid, FdSolution, FdState};
pub use path_sum::{path_terms, truncated_path_sum, truncated_path_sum_complex, well_paths};
pub use spectral::{spectral_green_infinite_well, SpectralSumConfig};
pub use transfer::{transfer_matrix_green, transfer_matrix_scattering};
