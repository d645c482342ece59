//! Fixtures shared by the benchmarks.

use quiverepi::epibuild::{build_brick_hom, extend_add_arrows, glue_vertex};
use quiverepi::{AlgebraHom, ExactMatrix, Field, Quiver, Rationals, Representation};

pub fn kronecker() -> Quiver {
    Quiver::parse("vertices 1 2\narrow a 1 2\narrow b 1 2").unwrap()
}

/// Preprojective Kronecker module of dimension `(n, n + 1)`.
pub fn preprojective(n: usize) -> Representation<Rationals> {
    let mut a = ExactMatrix::zeros(Rationals, n + 1, n);
    let mut b = ExactMatrix::zeros(Rationals, n + 1, n);
    for i in 0..n {
        a.set(i, i, Rationals.one());
        b.set(i + 1, i, Rationals.one());
    }
    Representation::new(Rationals, kronecker(), vec![n, n + 1], vec![a, b]).unwrap()
}

pub fn brick_hom(n: usize) -> AlgebraHom<Rationals> {
    build_brick_hom(&preprojective(n), false).unwrap()
}

/// The one-letter extension of the `A2` brick to the Kronecker quiver.
pub fn extension_hom() -> AlgebraHom<Rationals> {
    let a2 = Quiver::parse("vertices 1 2\narrow a 1 2").unwrap();
    let m = Representation::new(
        Rationals,
        a2,
        vec![1, 1],
        vec![ExactMatrix::identity(Rationals, 1)],
    )
    .unwrap();
    extend_add_arrows(&m, &kronecker()).unwrap()
}

pub fn glued_hom() -> AlgebraHom<Rationals> {
    glue_vertex(&preprojective(1), "2").unwrap()
}
