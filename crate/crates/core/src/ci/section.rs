use super::OperatorFamily;
use crate::error::{Error, Result};
use crate::groebner::IdealBasis;
use crate::linalg::FpMatrix;
use crate::polyring::Poly;
use crate::resolution::{complexity_estimate, GradedMatrix, MinimalResolution};

/// Output of the kernel-complex construction for `xi = sum_j a_j t_j`.
///
/// For `n` in `[n0, hi]`, `xi_n : F_{n+2} -> F_n` is onto, `G_n = ker xi_n`
/// and `B_{n+2} = [K_n | V_n]` is the basis of `F_{n+2}` made of a basis of
/// `G_n` and preimages of the basis of `F_n`. For `n >= n0 + 1`,
/// `B_{n+1}^{-1} d_{n+2} B_{n+2} = [[delta_n, U_n], [0, d_n]]`.
#[derive(Clone, Debug)]
pub struct SectionData {
    pub xi: Vec<u32>,
    pub n0: usize,
    pub hi: usize,
    /// `rank G_n` for `n = n0..=hi`.
    pub kernel_ranks: Vec<usize>,
    /// Pivot columns of `xi_n mod m`, for `n = n0..=hi`.
    pub pivots: Vec<Vec<usize>>,
    /// `B_{n+2}` for `n = n0..=hi`.
    pub basis_changes: Vec<GradedMatrix>,
    /// `delta_n` for `n = n0+1..=hi`.
    pub deltas: Vec<GradedMatrix>,
    /// `U_n` for `n = n0+1..=hi`.
    pub blocks: Vec<GradedMatrix>,
    pub split_ok: bool,
    pub block_identity: bool,
    pub delta_is_complex: bool,
    pub delta_is_minimal: bool,
    /// Complexity of `L = coker delta_{n0+1}` from the ranks of `G`, when at
    /// least eight ranks are available.
    pub l_complexity: Option<usize>,
}

impl SectionData {
    pub fn kernel_rank(&self, n: usize) -> usize {
        self.kernel_ranks[n - self.n0]
    }

    pub fn delta(&self, n: usize) -> &GradedMatrix {
        &self.deltas[n - self.n0 - 1]
    }

    pub fn block(&self, n: usize) -> &GradedMatrix {
        &self.blocks[n - self.n0 - 1]
    }

    pub fn basis_change(&self, n: usize) -> &GradedMatrix {
        &self.basis_changes[n - self.n0]
    }

    pub fn checks_pass(&self) -> bool {
        self.split_ok && self.block_identity && self.delta_is_complex && self.delta_is_minimal
    }
}

struct Split {
    pivots: Vec<usize>,
    free: Vec<usize>,
    xi: GradedMatrix,
    b: GradedMatrix,
    b_inv: GradedMatrix,
    ok: bool,
}

fn mulr(a: &GradedMatrix, b: &GradedMatrix, ideal: &IdealBasis) -> Result<GradedMatrix> {
    Ok(a.mul(b)?.reduce(ideal))
}

/// `xi_P^{-1}` by the Neumann series around its constant part, which must be
/// invertible. Terminates when the non-constant part is nilpotent.
fn invert(xp: &GradedMatrix, ideal: &IdealBasis) -> Result<GradedMatrix> {
    let ring = xp.ring();
    let fp = ring.field();
    let c = xp.constant_part();
    let c_inv = c.inverse(fp).ok_or_else(|| Error::NotInvertible("constant part of xi_P".into()))?;
    let c_inv = GradedMatrix::from_fp(ring, &c_inv, xp.col_twists().to_vec(), xp.row_twists().to_vec());
    let nil = xp.sub(&GradedMatrix::from_fp(ring, &c, xp.row_twists().to_vec(), xp.col_twists().to_vec()))?;
    let step = mulr(&c_inv, &nil, ideal)?.map_entries(Poly::neg);
    let mut term = c_inv.clone();
    let mut acc = c_inv;
    for _ in 0..4096 {
        term = mulr(&step, &term, ideal)?;
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term)?;
    }
    Err(Error::NotInvertible("Neumann series did not terminate".into()))
}

fn split(res: &MinimalResolution, ops: &OperatorFamily, a: &[u32], n: usize) -> Result<Split> {
    let ci = res.ci();
    let ideal = ci.ideal();
    let ring = ci.ring();
    let fp = ring.field();
    let mut xi: Option<GradedMatrix> = None;
    for (j, &c) in a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let t = ops.operator(j, n + 2).map_entries(|p| p.scale(c));
        xi = Some(match xi {
            None => t,
            Some(x) => x.add(&t)?,
        });
    }
    let xi = xi.ok_or_else(|| Error::Precondition("xi must be nonzero".into()))?.reduce(ideal);
    let (rows, cols) = (xi.nrows(), xi.ncols());
    let (_, pivots) = xi.constant_part().rref(fp);
    if pivots.len() < rows {
        return Err(Error::Surjectivity(format!("F_{} -> F_{n} has rank {} < {rows} mod m", n + 2, pivots.len())));
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let all_rows: Vec<usize> = (0..rows).collect();
    let xp = xi.select(&all_rows, &pivots);
    let xp_inv = invert(&xp, ideal)?;
    let w = mulr(&xp_inv, &xi.select(&all_rows, &free), ideal)?;
    let tw = res.twists(n + 2);
    let (g, r) = (free.len(), rows);
    let mut col_twists: Vec<i64> = free.iter().map(|&q| tw[q]).collect();
    col_twists.extend(xi.row_twists().iter().copied());
    let mut b = GradedMatrix::zero(ring, tw.to_vec(), col_twists.clone());
    for (k, &q) in free.iter().enumerate() {
        b.set(q, k, ring.one());
        for (pi, &p) in pivots.iter().enumerate() {
            b.set(p, k, w.entry(pi, k).neg());
        }
    }
    for (pi, &p) in pivots.iter().enumerate() {
        for col in 0..r {
            b.set(p, g + col, xp_inv.entry(pi, col).clone());
        }
    }
    let mut b_inv = GradedMatrix::zero(ring, col_twists, tw.to_vec());
    for (k, &q) in free.iter().enumerate() {
        b_inv.set(k, q, ring.one());
    }
    for row in 0..r {
        for col in 0..cols {
            b_inv.set(g + row, col, xi.entry(row, col).clone());
        }
    }
    let id = GradedMatrix::identity(ring, b.col_twists().to_vec());
    let ok = mulr(&b_inv, &b, ideal)?.to_strings() == id.to_strings()
        && mulr(&xi, &b.select_cols(&(0..g).collect::<Vec<_>>()), ideal)?.is_zero();
    Ok(Split { pivots, free, xi, b, b_inv, ok })
}

/// Kernel-complex construction for `xi = sum_j a_j t_j` on `[lo, hi]`
/// (requires `hi + 2 <= length`). `n0` is the least `n >= lo` such that
/// `F_{m+2} (x) k -> F_m (x) k` is onto for all `m` in `[n, hi]`.
///
/// `xi` must be homogeneous (all `f_j` with `a_j != 0` of one degree) or `A`
/// must be Artinian, so that `xi_P` can be inverted by a finite series.
pub fn section_construction(res: &MinimalResolution, ops: &OperatorFamily, xi: &[u32], window: (usize, usize)) -> Result<SectionData> {
    let (lo, hi) = window;
    if xi.len() != ops.codim() {
        return Err(Error::Shape(format!("xi has {} coefficients for c = {}", xi.len(), ops.codim())));
    }
    if lo > hi || hi + 2 > res.length() || hi + 2 > ops.length() {
        return Err(Error::OutOfRange(format!("window [{lo}, {hi}] needs resolution length {}", hi + 2)));
    }
    let ci = res.ci();
    let degrees: Vec<u32> = xi
        .iter()
        .zip(ops.relations())
        .filter(|(a, _)| **a != 0)
        .map(|(_, g)| g.degree().unwrap_or(0))
        .collect();
    let homogeneous = degrees.windows(2).all(|w| w[0] == w[1]);
    if !homogeneous && ci.hilbert().dim != 0 {
        return Err(Error::Precondition("xi mixes degrees over a non-Artinian ring".into()));
    }
    let fp = ci.ring().field();
    let onto = |n: usize| -> Result<bool> {
        let mut acc = FpMatrix::zeros(res.betti()[n], res.betti()[n + 2]);
        for (j, &c) in xi.iter().enumerate() {
            acc = acc.add(&ops.operator(j, n + 2).constant_part().scale(c, fp), fp);
        }
        Ok(acc.rank(fp) == res.betti()[n])
    };
    let mut n0 = None;
    for n in (lo..=hi).rev() {
        if onto(n)? {
            n0 = Some(n);
        } else {
            break;
        }
    }
    let n0 = n0.ok_or_else(|| Error::Surjectivity(format!("F_{} -> F_{hi} is not onto mod m", hi + 2)))?;
    let splits = (n0..=hi).map(|n| split(res, ops, xi, n)).collect::<Result<Vec<_>>>()?;
    let ideal = ci.ideal();
    let mut deltas = Vec::new();
    let mut blocks = Vec::new();
    let mut block_identity = true;
    for n in n0 + 1..=hi {
        let (below, here) = (&splits[n - 1 - n0], &splits[n - n0]);
        let d = res.differential(n + 2);
        let x = mulr(&mulr(&below.b_inv, d, ideal)?, &here.b, ideal)?;
        let (gb, gh) = (below.free.len(), here.free.len());
        let top: Vec<usize> = (0..gb).collect();
        let bottom: Vec<usize> = (gb..x.nrows()).collect();
        let left: Vec<usize> = (0..gh).collect();
        let right: Vec<usize> = (gh..x.ncols()).collect();
        let delta = x.select(&top, &left);
        let u = x.select(&top, &right);
        let zero_ok = x.select(&bottom, &left).is_zero();
        let tail = x.select(&bottom, &right);
        let tail_ok = tail.to_strings() == res.differential(n).to_strings();
        let rebuilt = GradedMatrix::block(&delta, &u, &x.select(&bottom, &left), &tail)?;
        let lhs = mulr(d, &here.b, ideal)?;
        let rhs = mulr(&below.b, &rebuilt, ideal)?;
        let product_ok = lhs.to_strings() == rhs.to_strings();
        if !(zero_ok && tail_ok && product_ok) {
            log::warn!("block form fails at n = {n}");
            block_identity = false;
        }
        deltas.push(delta);
        blocks.push(u);
    }
    let mut delta_is_complex = true;
    for w in deltas.windows(2) {
        if !mulr(&w[0], &w[1], ideal)?.is_zero() {
            delta_is_complex = false;
        }
    }
    let delta_is_minimal = deltas.iter().all(|d| d.entries().all(|p| p.is_zero() || !p.is_constant()));
    let kernel_ranks: Vec<usize> = splits.iter().map(|s| s.free.len()).collect();
    let l_complexity = if kernel_ranks.len() >= 8 { Some(complexity_estimate(&kernel_ranks)?) } else { None };
    let split_ok = splits.iter().all(|s| s.ok && s.xi.nrows() + s.free.len() == s.b.nrows());
    Ok(SectionData {
        xi: xi.to_vec(),
        n0,
        hi,
        kernel_ranks,
        pivots: splits.iter().map(|s| s.pivots.clone()).collect(),
        basis_changes: splits.into_iter().map(|s| s.b).collect(),
        deltas,
        blocks,
        split_ok,
        block_identity,
        delta_is_complex,
        delta_is_minimal,
        l_complexity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::{filter_regular_search, resolution_operators, ExtAction, DEFAULT_ATTEMPTS};
    use crate::polyring::{Ring, DEFAULT_CHARACTERISTIC};
    use crate::resolution::{minimal_resolution, CIPresentation};

    fn setup(vars: &[&str], f: &[&str], pres: &[Vec<&str>], len: usize) -> (MinimalResolution, OperatorFamily) {
        let r = Ring::new(DEFAULT_CHARACTERISTIC, vars).unwrap();
        let ci = CIPresentation::new(&r, f.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap();
        let m = GradedMatrix::from_strings(&r, pres, None).unwrap();
        let res = minimal_resolution(&m, &ci, len).unwrap();
        let ops = resolution_operators(&res).unwrap();
        (res, ops)
    }

    #[test]
    fn complexity_one_has_zero_kernel() {
        let (res, ops) = setup(&["x"], &["x^2"], &[vec!["x"]], 8);
        let s = section_construction(&res, &ops, &[1], (0, 6)).unwrap();
        assert_eq!(s.n0, 0);
        assert!(s.kernel_ranks.iter().all(|&g| g == 0));
        assert!(s.checks_pass());
    }

    #[test]
    fn residue_field_kernel_complex() {
        let (res, ops) = setup(&["x", "y"], &["x^2", "y^2"], &[vec!["x", "y"]], 12);
        let ext = ExtAction::new(&ops);
        let xi = filter_regular_search(&ext, (0, 10), DEFAULT_ATTEMPTS, 0).unwrap();
        let s = section_construction(&res, &ops, &xi, (0, 10)).unwrap();
        assert_eq!(s.n0, 0);
        for n in 0..=10 {
            assert_eq!(s.kernel_rank(n), res.betti()[n + 2] - res.betti()[n]);
            assert_eq!(s.kernel_rank(n), 2);
        }
        assert!(s.checks_pass(), "{s:?}");
        assert_eq!(s.l_complexity, Some(1));
    }

    #[test]
    fn bad_window_is_rejected() {
        let (res, ops) = setup(&["x"], &["x^2"], &[vec!["x"]], 4);
        assert!(section_construction(&res, &ops, &[1], (0, 3)).is_err());
        assert!(matches!(section_construction(&res, &ops, &[0], (0, 2)), Err(Error::Surjectivity(_))));
    }
}
