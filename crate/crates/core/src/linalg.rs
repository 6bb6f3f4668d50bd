//! Incremental exact Gauss-Jordan elimination over the rationals.
//!
//! Systems arising from leading-form searches have few unknowns and many
//! equations (one per monomial), so rows are streamed in and reduced against
//! a fully reduced pivot set; only independent rows are stored.

use num_traits::{One, Zero};

use crate::poly::Coeff;

#[derive(Clone, Debug)]
pub struct Eliminator {
    k: usize,
    pivots: Vec<(usize, Vec<Coeff>)>,
    inconsistent: bool,
}

impl Eliminator {
    /// A system in `k` unknowns.
    pub fn new(k: usize) -> Self {
        Eliminator { k, pivots: Vec::new(), inconsistent: false }
    }

    pub fn unknowns(&self) -> usize {
        self.k
    }

    /// Add the equation `Σ row[j] x_j = rhs`.
    pub fn push(&mut self, row: &[Coeff], rhs: &Coeff) {
        assert_eq!(row.len(), self.k);
        if self.inconsistent {
            return;
        }
        let mut r: Vec<Coeff> = row.iter().cloned().chain(std::iter::once(rhs.clone())).collect();
        for (pc, prow) in &self.pivots {
            if !r[*pc].is_zero() {
                let f = r[*pc].clone();
                for (x, y) in r.iter_mut().zip(prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        match (0..self.k).find(|j| !r[*j].is_zero()) {
            None => {
                if !r[self.k].is_zero() {
                    self.inconsistent = true;
                }
            }
            Some(p) => {
                let inv = Coeff::one() / &r[p];
                for x in r.iter_mut() {
                    *x *= &inv;
                }
                for (_, prow) in self.pivots.iter_mut() {
                    if !prow[p].is_zero() {
                        let f = prow[p].clone();
                        for (x, y) in prow.iter_mut().zip(&r) {
                            if !y.is_zero() {
                                *x -= &f * y;
                            }
                        }
                    }
                }
                self.pivots.push((p, r));
            }
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A solution with every free unknown set to zero.
    pub fn solution(&self) -> Option<Vec<Coeff>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Coeff::zero(); self.k];
        for (p, row) in &self.pivots {
            x[*p] = row[self.k].clone();
        }
        Some(x)
    }
}

/// Inverse of a square matrix, if it is invertible.
pub fn invert(m: &[Vec<Coeff>]) -> Option<Vec<Vec<Coeff>>> {
    let n = m.len();
    let mut a: Vec<Vec<Coeff>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = Coeff::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by fraction-exact elimination.
pub fn determinant(m: &[Vec<Coeff>]) -> Coeff {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Coeff::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Coeff::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= &a[col][col];
        for i in (col + 1)..n {
            if !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qr};

    #[test]
    fn solves_overdetermined_consistent() {
        let mut e = Eliminator::new(2);
        e.push(&[q(1), q(1)], &q(3));
        e.push(&[q(1), q(-1)], &q(1));
        e.push(&[q(2), q(0)], &q(4));
        assert_eq!(e.solution(), Some(vec![q(2), q(1)]));
        e.push(&[q(0), q(1)], &q(5));
        assert_eq!(e.solution(), None);
    }

    #[test]
    fn free_unknowns_are_zero() {
        let mut e = Eliminator::new(3);
        e.push(&[q(0), q(2), q(2)], &q(4));
        assert_eq!(e.solution(), Some(vec![q(0), q(2), q(0)]));
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert_eq!(determinant(&m), q(1));
        assert!(invert(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
        assert_eq!(determinant(&[vec![qr(1, 2)]]), qr(1, 2));
    }
}
