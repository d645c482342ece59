//! Simultaneous diagonalization of a full family of orthogonal idempotents.
//!
//! Each idempotent `E_i` splits off the summand `Im E_i` of `k^n`. Choosing a
//! basis `A_i` of every column space and concatenating gives an invertible
//! `U = (A_1 … A_m)`; the block rows `B_i` of `U⁻¹` satisfy `B_i A_j = δ_ij I`
//! and `A_i B_i = E_i`, so `U⁻¹ E_i U` is the identity on the i-th block and
//! zero elsewhere.

use super::{ExactMatrix, Field, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentDecomposition<K: Field> {
    /// `U`, whose columns are the concatenated column-space bases.
    pub conjugator: ExactMatrix<K>,
    /// `U⁻¹`, whose block rows are the matching projections.
    pub inverse: ExactMatrix<K>,
    /// `rank(E_i)` for each idempotent, in input order.
    pub block_ranks: Vec<usize>,
}

impl<K: Field> IdempotentDecomposition<K> {
    /// Offset of block `i` in the diagonalized coordinates.
    pub fn offset(&self, i: usize) -> usize {
        self.block_ranks[..i].iter().sum()
    }

    /// `U⁻¹ · m · U`.
    pub fn conjugate(&self, m: &ExactMatrix<K>) -> Result<ExactMatrix<K>, LinalgError> {
        self.inverse.mul(m)?.mul(&self.conjugator)
    }
}

/// The 0/1 diagonal matrix with ones on `[offset, offset + rank)`.
pub(crate) fn block_projection<K: Field>(
    field: K,
    n: usize,
    offset: usize,
    rank: usize,
) -> ExactMatrix<K> {
    let mut d = ExactMatrix::zeros(field, n, n);
    for i in offset..offset + rank {
        d.set(i, i, field.one());
    }
    d
}

fn check_family<K: Field>(idems: &[ExactMatrix<K>]) -> Result<(K, usize), LinalgError> {
    let bad = |msg: String| Err(LinalgError::NotIdempotentFamily(msg));
    let Some(first) = idems.first() else {
        return bad("empty family".into());
    };
    let (field, n) = (first.field(), first.rows());
    for (i, e) in idems.iter().enumerate() {
        if e.shape() != (n, n) {
            return bad(format!(
                "idempotent {i} has shape {:?}, expected {n}x{n}",
                e.shape()
            ));
        }
    }
    for (i, e) in idems.iter().enumerate() {
        if e.mul(e)? != *e {
            return bad(format!("idempotent {i} does not square to itself"));
        }
    }
    for (i, a) in idems.iter().enumerate() {
        for (j, b) in idems.iter().enumerate() {
            if i != j && !a.mul(b)?.is_zero() {
                return bad(format!("idempotents {i} and {j} are not orthogonal"));
            }
        }
    }
    let mut sum = ExactMatrix::zeros(field, n, n);
    for e in idems {
        sum = sum.add(e)?;
    }
    if !sum.is_identity() {
        return bad("idempotents do not sum to the identity".into());
    }
    Ok((field, n))
}

/// Finds `U` with `U⁻¹ E_i U` equal to the i-th consecutive 0/1 diagonal block.
///
/// Rank-zero idempotents contribute empty column groups. The result is
/// re-verified by multiplication before it is returned.
pub fn idempotent_diagonalize<K: Field>(
    idems: &[ExactMatrix<K>],
) -> Result<IdempotentDecomposition<K>, LinalgError> {
    let (field, n) = check_family(idems)?;

    let mut columns = Vec::with_capacity(n);
    let mut block_ranks = Vec::with_capacity(idems.len());
    for e in idems {
        let basis = e.column_space_basis();
        block_ranks.push(basis.len());
        columns.extend(basis);
    }
    let conjugator = ExactMatrix::from_columns(field, n, &columns);
    let inverse = conjugator.inverse()?;
    let dec = IdempotentDecomposition {
        conjugator,
        inverse,
        block_ranks,
    };

    for (i, e) in idems.iter().enumerate() {
        let expected = block_projection(field, n, dec.offset(i), dec.block_ranks[i]);
        if dec.conjugate(e)? != expected {
            return Err(LinalgError::NotIdempotentFamily(format!(
                "conjugated idempotent {i} is not the expected block projection"
            )));
        }
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rationals;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> ExactMatrix<Rationals> {
        ExactMatrix::from_i64(Rationals, rows)
    }

    #[test]
    fn already_diagonal() {
        let dec =
            idempotent_diagonalize(&[q(&[&[1, 0], &[0, 0]]), q(&[&[0, 0], &[0, 1]])]).unwrap();
        assert!(dec.conjugator.is_identity());
        assert_eq!(dec.block_ranks, vec![1, 1]);
    }

    #[test]
    fn skew_pair() {
        let e1 = q(&[&[1, 1], &[0, 0]]);
        let e2 = q(&[&[0, -1], &[0, 1]]);
        let dec = idempotent_diagonalize(&[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(dec.conjugator, q(&[&[1, -1], &[0, 1]]));
        assert_eq!(dec.block_ranks, vec![1, 1]);
        // Independent check by direct multiplication.
        let u = &dec.conjugator;
        let u_inv = u.inverse().unwrap();
        assert_eq!(
            u_inv.mul(&e1).unwrap().mul(u).unwrap(),
            q(&[&[1, 0], &[0, 0]])
        );
        assert_eq!(
            u_inv.mul(&e2).unwrap().mul(u).unwrap(),
            q(&[&[0, 0], &[0, 1]])
        );
    }

    #[test]
    fn single_full_idempotent() {
        let dec = idempotent_diagonalize(&[ExactMatrix::identity(Rationals, 3)]).unwrap();
        assert!(dec.conjugator.is_identity());
        assert_eq!(dec.block_ranks, vec![3]);
    }

    #[test]
    fn zero_rank_member_is_an_empty_block() {
        let z = ExactMatrix::zeros(Rationals, 2, 2);
        let dec =
            idempotent_diagonalize(&[z.clone(), ExactMatrix::identity(Rationals, 2), z]).unwrap();
        assert_eq!(dec.block_ranks, vec![0, 2, 0]);
    }

    #[test]
    fn rejects_bad_families() {
        let e = q(&[&[1, 0], &[0, 0]]);
        let not_idem = q(&[&[2, 0], &[0, 0]]);
        for family in [
            vec![not_idem, q(&[&[0, 0], &[0, 1]])],
            vec![e.clone(), e.clone()],
            vec![e.clone()],
            vec![e, ExactMatrix::identity(Rationals, 3)],
            vec![],
        ] {
            assert!(matches!(
                idempotent_diagonalize(&family),
                Err(LinalgError::NotIdempotentFamily(_))
            ));
        }
    }

    proptest! {
        #[test]
        fn deterministic_and_exact(
            data in proptest::collection::vec(-2i64..=2, 16),
            cut1 in 0usize..=4,
            cut2 in 0usize..=4,
        ) {
            let f = Rationals;
            let u = ExactMatrix::new(f, 4, 4, data.iter().map(|&x| f.from_i64(x)).collect()).unwrap();
            prop_assume!(u.inverse().is_ok());
            let u_inv = u.inverse().unwrap();
            let (a, b) = (cut1.min(cut2), cut1.max(cut2));
            let family: Vec<_> = [(0, a), (a, b - a), (b, 4 - b)]
                .iter()
                .map(|&(o, r)| u.mul(&block_projection(f, 4, o, r)).unwrap().mul(&u_inv).unwrap())
                .collect();
            let dec = idempotent_diagonalize(&family).unwrap();
            prop_assert_eq!(&dec.block_ranks, &vec![a, b - a, 4 - b]);
            prop_assert_eq!(idempotent_diagonalize(&family).unwrap(), dec);
        }
    }
}
