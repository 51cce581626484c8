//! Removing split pieces from complexes and pruning generating sets.

use std::collections::HashMap;

use super::{CIPresentation, GradedMatrix};
use crate::error::{Error, Result};
use crate::groebner::IdealBasis;
use crate::linalg::Echelon;
use crate::polyring::{Monomial, Poly};

fn is_unit(p: &Poly) -> bool {
    !p.is_zero() && p.is_constant()
}

/// Removes every unit entry of a complex `d_1, d_2, ...` (with `d_i d_{i+1} = 0`)
/// by Gaussian elimination.
///
/// The pivot is the first unit entry in a column-major scan of the first
/// matrix that has one. Pivoting on `u = d_i[r][c]` replaces `d_i` by its
/// Schur complement with row `r` and column `c` removed, drops column `r` of
/// `d_{i-1}` and row `c` of `d_{i+1}`. Entries are reduced modulo `modulus`
/// throughout when it is given.
pub fn minimalize(complex: &[GradedMatrix], modulus: Option<&IdealBasis>) -> Result<Vec<GradedMatrix>> {
    let reduce = |m: &GradedMatrix| match modulus {
        Some(md) => m.reduce(md),
        None => m.clone(),
    };
    let mut d: Vec<GradedMatrix> = complex.iter().map(reduce).collect();
    for w in d.windows(2) {
        let prod = w[0].mul(&w[1])?;
        if !reduce(&prod).is_zero() {
            return Err(Error::Precondition("consecutive matrices do not compose to zero".into()));
        }
    }
    while let Some((i, r, c)) = find_unit(&d) {
        let m = &d[i];
        let fp = m.ring().field();
        let u_inv = fp.inv(m.entry(r, c).constant_term());
        let keep_rows: Vec<usize> = (0..m.nrows()).filter(|&x| x != r).collect();
        let keep_cols: Vec<usize> = (0..m.ncols()).filter(|&x| x != c).collect();
        let mut next = m.select(&keep_rows, &keep_cols);
        for (a, &rr) in keep_rows.iter().enumerate() {
            let left = m.entry(rr, c);
            if left.is_zero() {
                continue;
            }
            let left = left.scale(u_inv);
            for (b, &cc) in keep_cols.iter().enumerate() {
                let top = m.entry(r, cc);
                if top.is_zero() {
                    continue;
                }
                let v = next.entry(a, b).sub(&left.mul(top));
                next.set(a, b, v);
            }
        }
        d[i] = reduce(&next);
        if i > 0 {
            let prev = &d[i - 1];
            let cols: Vec<usize> = (0..prev.ncols()).filter(|&x| x != r).collect();
            d[i - 1] = prev.select_cols(&cols);
        }
        if i + 1 < d.len() {
            let nx = &d[i + 1];
            let rows: Vec<usize> = (0..nx.nrows()).filter(|&x| x != c).collect();
            d[i + 1] = nx.select_rows(&rows);
        }
    }
    Ok(d)
}

fn find_unit(d: &[GradedMatrix]) -> Option<(usize, usize, usize)> {
    d.iter().enumerate().find_map(|(i, m)| {
        (0..m.ncols()).find_map(|c| (0..m.nrows()).find(|&r| is_unit(m.entry(r, c))).map(|r| (i, r, c)))
    })
}

/// Coordinates of homogeneous vectors of one degree in the basis
/// `(row, standard monomial)`.
struct GradedPiece {
    index: HashMap<(usize, Monomial), usize>,
}

impl GradedPiece {
    fn new(row_twists: &[i64], degree: i64, ideal: &IdealBasis) -> Self {
        let mut index = HashMap::new();
        for (c, &t) in row_twists.iter().enumerate() {
            if degree < t {
                continue;
            }
            for m in ideal.standard_monomials((degree - t) as u32) {
                let k = index.len();
                index.insert((c, m), k);
            }
        }
        GradedPiece { index }
    }

    fn vector(&self, entries: &[Poly]) -> Vec<u32> {
        let mut v = vec![0; self.index.len()];
        for (c, p) in entries.iter().enumerate() {
            for &(m, k) in p.terms() {
                v[self.index[&(c, m)]] = k;
            }
        }
        v
    }
}

/// Indices of a minimal generating subset of the columns of `m`, as a
/// submodule of `A^rows`. Columns must be reduced modulo `f` and homogeneous.
/// Columns are scanned by degree, then by index; a column is kept iff it is
/// not in the span of the kept columns below it.
pub(crate) fn minimal_generators(m: &GradedMatrix, ci: &CIPresentation) -> Vec<usize> {
    let ideal = ci.ideal();
    let ring = m.ring();
    let fp = ring.field();
    let mut order: Vec<usize> = (0..m.ncols()).collect();
    order.sort_by_key(|&j| (m.col_twists()[j], j));
    let cols: Vec<Vec<Poly>> = (0..m.ncols()).map(|j| m.column(j).components().to_vec()).collect();
    let mut kept: Vec<usize> = Vec::new();
    let mut pos = 0;
    while pos < order.len() {
        let d = m.col_twists()[order[pos]];
        let piece = GradedPiece::new(m.row_twists(), d, ideal);
        let mut ech = Echelon::new(fp, piece.index.len());
        for &g in &kept {
            let e = m.col_twists()[g];
            for u in ideal.standard_monomials((d - e) as u32) {
                let shifted: Vec<Poly> = cols[g].iter().map(|p| ideal.reduce(&p.mul_term(&u, 1))).collect();
                ech.insert(&piece.vector(&shifted));
            }
        }
        while pos < order.len() && m.col_twists()[order[pos]] == d {
            let j = order[pos];
            if ech.insert(&piece.vector(&cols[j])) {
                kept.push(j);
            }
            pos += 1;
        }
    }
    kept.sort_unstable();
    kept
}
