//! Line lattices on Fermat surfaces `x0^m + x1^m + x2^m + x3^m = 0` and their
//! integral certification through supersingular reduction.

pub mod cyclotomic;
pub mod exact_linalg;
pub mod fermat_combinatorics;
pub mod line_lattice;
pub mod field_tower;
pub mod numtheory;
pub mod certify;
pub mod char_p_divisors;
