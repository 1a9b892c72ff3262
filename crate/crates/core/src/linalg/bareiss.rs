//! Fraction-free rank over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Rank by fraction-free Bareiss elimination on integer rows. At each step
/// the pivot column is the remaining column with the most nonzero entries.
pub fn rank_integer(mut m: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    let nrows = m.len();
    let mut col_done = vec![false; ncols];
    let mut prev = BigInt::one();
    let mut r = 0;
    while r < nrows {
        let mut best: Option<(usize, usize)> = None;
        for c in (0..ncols).filter(|&c| !col_done[c]) {
            let support = (r..nrows).filter(|&i| !m[i][c].is_zero()).count();
            if support > 0 && best.map_or(true, |(_, s)| support > s) {
                best = Some((c, support));
            }
        }
        let Some((c, _)) = best else { break };
        col_done[c] = true;
        let pr = (r..nrows).find(|&i| !m[i][c].is_zero()).expect("support counted");
        m.swap(r, pr);
        let piv = m[r][c].clone();
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c].clone();
            for (j, x) in row.iter_mut().enumerate() {
                if col_done[j] && j != c {
                    continue;
                }
                let v = &piv * &*x - &f * &pivot_row[j];
                // exact by Sylvester's identity
                *x = v / &prev;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

pub fn rank_rational(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rank_integer(integer_rows(rows), ncols)
}
