//! Exact dense linear algebra over a prime field `F_ℓ`.

mod field;
mod forms;
mod jordan;
mod matrix;
mod subspace;

pub use field::{is_prime, Prime};
pub use forms::{invariant_forms, unique_invariant_form, BilinearForm, Parity};
pub use jordan::{jordan_block, jordan_matrix, jordan_type, JordanData};
pub use matrix::{dot, Matrix};
pub use subspace::Subspace;

/// Null space of `M` (convenience for `M.kernel()`).
pub fn kernel(m: &Matrix) -> Subspace {
    m.kernel()
}
