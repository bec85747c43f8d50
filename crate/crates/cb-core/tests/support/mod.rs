//! Independent rank oracle for the integration tests: fraction-free Bareiss
//! elimination on big integers.  Shares no code with the library's
//! elimination, so an agreement between the two is evidence, not an echo.

use cb_core::{Matrix, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank of a rational matrix by Bareiss elimination over the integers.
///
/// Rows are cleared of denominators first (row scaling never changes rank).
/// Panics on prime-field input: the oracle certifies the rational side only.
pub fn bareiss_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row: Vec<&Scalar> = (0..m.cols()).map(|j| m.get(i, j)).collect();
            clear_denominators(&row)
        })
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &pivot * &a[r][c] - &a[r][col] * &a[rank][c];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[r][c] = num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn clear_denominators(row: &[&Scalar]) -> Vec<BigInt> {
    let rationals: Vec<_> = row
        .iter()
        .map(|s| match s {
            Scalar::Q(r) => r.clone(),
            Scalar::Fp { .. } => panic!("the oracle only handles rational matrices"),
        })
        .collect();
    let mut lcm = BigInt::from(1);
    for r in &rationals {
        let d = r.denom().abs();
        let g = num_integer_gcd(&lcm, &d);
        lcm = lcm / g * d;
    }
    rationals.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.is_zero() {
        BigInt::from(1)
    } else {
        a
    }
}
