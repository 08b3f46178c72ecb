//! Partitions, symmetric functions in the power-sum and monomial bases, the
//! Macdonald scalar product at `t = q^m`, and Macdonald `P_λ`, `Q_λ` built
//! by Gram–Schmidt.

mod cache;
mod func;
mod macdonald;
mod partition;

pub use cache::{CacheFile, CacheStat, DiskCache};
pub use func::{complete_h, elementary_e, power_norm, scalar_product_qt, Basis, SymFun};
pub use macdonald::{b_lambda, macdonald_p, macdonald_q, one_row_g, Macdonald};
pub use partition::{partitions, Dominance, Partition};

use crate::arith::Ring;
use crate::detlib::{det_classical, SquareMatrix};

/// Schur function `s_λ = det(h_{λ_i - i + j})`.
pub fn schur_jacobi_trudi(lambda: &Partition) -> SymFun {
    let l = lambda.len();
    if l == 0 {
        return SymFun::one();
    }
    let parts = lambda.parts();
    let m = SquareMatrix::from_fn(l, |i, j| complete_h(parts[i] as i64 - i as i64 + j as i64));
    det_classical(&m)
}
