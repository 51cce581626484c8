//! Dense linear algebra over a prime field.

use crate::polyring::PrimeField;

/// Row-major dense matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FpMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = FpMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix, fp: PrimeField) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = FpMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fp.add(out.get(i, j), fp.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix, fp: PrimeField) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| fp.add(a, b)).collect();
        FpMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32, fp: PrimeField) -> FpMatrix {
        let data = self.data.iter().map(|&a| fp.mul(a, c)).collect();
        FpMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, fp: PrimeField) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = fp.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = fp.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = fp.sub(m.get(i, j), fp.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, fp: PrimeField) -> usize {
        self.rref(fp).1.len()
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self, fp: PrimeField) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref(fp);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = fp.neg(r.get(i, f));
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[u32], fp: PrimeField) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(fp);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, fp: PrimeField) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref(fp);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Incrementally maintained echelon basis of a subspace of `F_p^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    fp: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(fp: PrimeField, dim: usize) -> Self {
        Echelon { fp, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &mut [u32]) {
        let fp = self.fp;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p];
            if f == 0 {
                continue;
            }
            for j in p..self.dim {
                if row[j] != 0 {
                    v[j] = fp.sub(v[j], fp.mul(f, row[j]));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns `true` when it was independent of the stored rows.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.fp.inv(w[p]);
        for x in w.iter_mut() {
            *x = self.fp.mul(*x, inv);
        }
        // keep rows reduced at the new pivot so `reduce` needs one pass
        for row in self.rows.iter_mut() {
            let f = row[p];
            if f != 0 {
                for j in 0..self.dim {
                    row[j] = self.fp.sub(row[j], self.fp.mul(f, w[j]));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn rank_kernel_solve() {
        let f = fp();
        let m = FpMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]], 3);
        assert_eq!(m.rank(f), 2);
        let k = m.kernel(f);
        assert_eq!(k.len(), 1);
        let kv = FpMatrix::from_rows(&[k[0].clone()], 3).transpose();
        assert!(m.mul(&kv, f).is_zero());
        let x = m.solve(&[3, 6, 1], f).unwrap();
        let xv = FpMatrix::from_rows(&[x], 3).transpose();
        assert_eq!(m.mul(&xv, f).transpose().row(0), &[3, 6, 1]);
        assert!(m.solve(&[1, 0, 0], f).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let f = fp();
        let m = FpMatrix::from_rows(&[vec![2, 1], vec![7, 5]], 2);
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(&inv, f), FpMatrix::identity(2));
        let s = FpMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert!(s.inverse(f).is_none());
    }

    #[test]
    fn echelon_insertion() {
        let mut e = Echelon::new(fp(), 3);
        assert!(e.insert(&[0, 1, 1]));
        assert!(e.insert(&[1, 1, 0]));
        assert!(!e.insert(&[1, 2, 1]));
        assert!(e.contains(&[2, 3, 1]));
        assert!(e.insert(&[0, 0, 5]));
        assert_eq!(e.rank(), 3);
    }
}
