//! Skew-symmetric matrices and Pfaffians.

use crate::algebra::{from_character_values, CharacterMap, Field, Multicomplex, Ring, Scalar};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Largest order accepted by the matching-expansion Pfaffian.
pub const MAX_BRUTE_ORDER: usize = 16;

/// Relative threshold below which a pivot counts as zero.
pub const PIVOT_TOL: f64 = 1e-12;

/// Skew-symmetric matrix stored as its strict upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T> {
    order: usize,
    upper: Vec<T>,
    zero: T,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> SkewMatrix<T> {
    /// The zero matrix; `zero` fixes the ring (e.g. the generator count).
    pub fn zeros(order: usize, zero: T) -> Self {
        let len = order * order.saturating_sub(1) / 2;
        SkewMatrix {
            order,
            upper: vec![zero.clone(); len],
            zero,
            labels: None,
        }
    }

    /// Builds from `f(i, j)` for `i < j`.
    pub fn from_fn(order: usize, zero: T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = SkewMatrix::zeros(order, zero);
        for i in 0..order {
            for j in i + 1..order {
                let k = m.idx(i, j);
                m.upper[k] = f(i, j);
            }
        }
        m
    }

    /// Builds from a dense matrix, reading only the strict upper triangle.
    pub fn from_dense(rows: &[Vec<T>], zero: T) -> Self {
        SkewMatrix::from_fn(rows.len(), zero, |i, j| rows[i][j].clone())
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.order);
        i * (2 * self.order - i - 1) / 2 + (j - i - 1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ring(&self) -> Ring {
        self.zero.ring()
    }

    pub fn zero(&self) -> &T {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.idx(i, j)].clone(),
            Greater => -self.upper[self.idx(j, i)].clone(),
            Equal => self.zero.clone(),
        }
    }

    /// Sets entry `(i, j)` and, implicitly, `(j, i)` to its negative.
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        assert_ne!(i, j, "diagonal of a skew matrix is zero");
        if i < j {
            let k = self.idx(i, j);
            self.upper[k] = x;
        } else {
            let k = self.idx(j, i);
            self.upper[k] = -x;
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    /// Nonzero strict-upper entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        (0..self.order)
            .flat_map(move |i| (i + 1..self.order).map(move |j| (i, j)))
            .zip(&self.upper)
            .filter(|(_, x)| !x.is_zero())
            .map(|((i, j), x)| (i, j, x))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, x| m.max(x.magnitude()))
    }

    pub fn map<U: Scalar>(&self, zero: U, f: impl Fn(&T) -> U) -> SkewMatrix<U> {
        SkewMatrix {
            order: self.order,
            upper: self.upper.iter().map(f).collect(),
            zero,
            labels: self.labels.clone(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Simultaneous swap of rows and columns `i` and `j`.
    pub fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let d = self.to_dense();
        let p = |x: usize| {
            if x == i {
                j
            } else if x == j {
                i
            } else {
                x
            }
        };
        *self = SkewMatrix {
            labels: self.labels.take(),
            ..SkewMatrix::from_fn(self.order, self.zero.clone(), |a, b| d[p(a)][p(b)].clone())
        };
        if let Some(l) = self.labels.as_mut() {
            l.swap(i, j);
        }
    }

    /// The principal submatrix on `k`, in increasing index order.
    pub fn submatrix(&self, k: &[usize]) -> SkewMatrix<T> {
        let mut k = k.to_vec();
        k.sort_unstable();
        k.dedup();
        let mut m = SkewMatrix::from_fn(k.len(), self.zero.clone(), |a, b| self.get(k[a], k[b]));
        if let Some(l) = &self.labels {
            m.labels = Some(k.iter().map(|&i| l[i].clone()).collect());
        }
        m
    }

    fn complement(&self, k: &[usize]) -> Vec<usize> {
        (0..self.order).filter(|i| !k.contains(i)).collect()
    }
}

/// Scalars with a Pfaffian evaluator.
pub trait PfaffianScalar: Scalar {
    fn pfaffian(a: &SkewMatrix<Self>) -> Result<Self>;

    /// Entry `(i, j)` is `Pf(A_{K + {i, j}})`.
    fn derived(a: &SkewMatrix<Self>, k: &[usize]) -> Result<SkewMatrix<Self>> {
        derived_direct(a, k)
    }
}

fn check_even(a_order: usize) -> Result<()> {
    if a_order % 2 == 1 {
        Err(Error::OddOrder(a_order))
    } else {
        Ok(())
    }
}

/// Skew tridiagonalization with partial pivoting.
fn parlett_reid<T: Field>(a: &SkewMatrix<T>) -> Result<T> {
    let n = a.order();
    check_even(n)?;
    let one = a.zero().one_like();
    if n == 0 {
        return Ok(one);
    }
    let mut m = a.to_dense();
    let tol = PIVOT_TOL * a.max_magnitude();
    let mut pf = one;
    for k in (0..n - 1).step_by(2) {
        let mut kp = k + 1;
        for i in k + 2..n {
            if m[i][k].abs() > m[kp][k].abs() {
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap(k + 1, kp);
            for row in m.iter_mut() {
                row.swap(k + 1, kp);
            }
            pf = -pf;
        }
        let piv = m[k][k + 1];
        if piv.abs() <= tol {
            return Ok(*a.zero());
        }
        pf = pf * piv;
        if k + 2 < n {
            let tau: Vec<T> = (k + 2..n).map(|j| m[k][j] / piv).collect();
            let col: Vec<T> = (k + 2..n).map(|i| m[i][k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[i][j] = m[i][j] + tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// Solves `p x = b` (columns of `b`) by Gaussian elimination with partial pivoting.
fn lu_solve<T: Field>(mut p: Vec<Vec<T>>, mut b: Vec<Vec<T>>) -> Option<Vec<Vec<T>>> {
    let n = p.len();
    let scale = p.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for c in 0..n {
        let r = (c..n).max_by(|&x, &y| p[x][c].abs().partial_cmp(&p[y][c].abs()).unwrap())?;
        if p[r][c].abs() <= PIVOT_TOL * scale {
            return None;
        }
        p.swap(c, r);
        b.swap(c, r);
        for i in c + 1..n {
            let f = p[i][c] / p[c][c];
            if f.abs() == 0.0 {
                continue;
            }
            for j in c..n {
                p[i][j] = p[i][j] - f * p[c][j];
            }
            for j in 0..b[i].len() {
                b[i][j] = b[i][j] - f * b[c][j];
            }
        }
    }
    for c in (0..n).rev() {
        for j in 0..b[c].len() {
            let mut acc = b[c][j];
            for k in c + 1..n {
                acc = acc - p[c][k] * b[k][j];
            }
            b[c][j] = acc / p[c][c];
        }
    }
    Some(b)
}

/// Derived matrix through the Schur complement of `A_K`, when `A_K` is
/// invertible: `Pf(A_{K+{i,j}}) = +-Pf(A_K) (a_ij + A[K,i]^T A_K^{-1} A[K,j])`.
fn derived_schur<T: Field + PfaffianScalar>(a: &SkewMatrix<T>, k: &[usize]) -> Result<SkewMatrix<T>> {
    let mut k = k.to_vec();
    k.sort_unstable();
    k.dedup();
    check_even(k.len())?;
    let kbar = a.complement(&k);
    if k.is_empty() {
        return Ok(a.submatrix(&kbar));
    }
    let ak = a.submatrix(&k);
    let pfk = parlett_reid(&ak)?;
    let scale = ak.max_magnitude().powi(k.len() as i32 / 2);
    let p: Vec<Vec<T>> = ak.to_dense();
    let b: Vec<Vec<T>> = k.iter().map(|&r| kbar.iter().map(|&c| a.get(r, c)).collect()).collect();
    let x = match (pfk.abs() > PIVOT_TOL * scale)
        .then(|| lu_solve(p, b.clone()))
        .flatten()
    {
        Some(x) => x,
        None => return derived_direct(a, &k),
    };
    let above = |v: usize| k.iter().filter(|&&x| x > v).count();
    let mut out = SkewMatrix::from_fn(kbar.len(), *a.zero(), |ii, jj| {
        let (i, j) = (kbar[ii], kbar[jj]);
        let mut s = a.get(i, j);
        for r in 0..k.len() {
            s = s + b[r][ii] * x[r][jj];
        }
        let v = pfk * s;
        if (above(i) + above(j)) % 2 == 0 {
            v
        } else {
            -v
        }
    });
    out.labels = a.labels.as_ref().map(|l| kbar.iter().map(|&i| l[i].clone()).collect());
    Ok(out)
}

fn derived_direct<T: PfaffianScalar>(a: &SkewMatrix<T>, k: &[usize]) -> Result<SkewMatrix<T>> {
    let mut k = k.to_vec();
    k.sort_unstable();
    k.dedup();
    check_even(k.len())?;
    let kbar = a.complement(&k);
    let mut out = SkewMatrix::zeros(kbar.len(), a.zero().clone());
    for ii in 0..kbar.len() {
        for jj in ii + 1..kbar.len() {
            let mut idx = k.clone();
            idx.push(kbar[ii]);
            idx.push(kbar[jj]);
            out.set(ii, jj, T::pfaffian(&a.submatrix(&idx))?);
        }
    }
    out.labels = a.labels.as_ref().map(|l| kbar.iter().map(|&i| l[i].clone()).collect());
    Ok(out)
}

impl PfaffianScalar for f64 {
    fn pfaffian(a: &SkewMatrix<f64>) -> Result<f64> {
        parlett_reid(a)
    }
    fn derived(a: &SkewMatrix<f64>, k: &[usize]) -> Result<SkewMatrix<f64>> {
        derived_schur(a, k)
    }
}

impl PfaffianScalar for Complex64 {
    fn pfaffian(a: &SkewMatrix<Complex64>) -> Result<Complex64> {
        parlett_reid(a)
    }
    fn derived(a: &SkewMatrix<Complex64>, k: &[usize]) -> Result<SkewMatrix<Complex64>> {
        derived_schur(a, k)
    }
}

/// Image of a multicomplex matrix under one character.
pub fn character_image(a: &SkewMatrix<Multicomplex>, h: &CharacterMap) -> SkewMatrix<Complex64> {
    a.map(Complex64::new(0.0, 0.0), |x| {
        h.apply(x).expect("generator count checked")
    })
}

fn n_generators(a: &SkewMatrix<Multicomplex>) -> usize {
    a.zero().n()
}

impl PfaffianScalar for Multicomplex {
    fn pfaffian(a: &SkewMatrix<Multicomplex>) -> Result<Multicomplex> {
        check_even(a.order())?;
        let n = n_generators(a);
        let values: Vec<Complex64> = CharacterMap::all(n)
            .par_iter()
            .map(|h| parlett_reid(&character_image(a, h)))
            .collect::<Result<_>>()?;
        from_character_values(n, &values)
    }

    fn derived(a: &SkewMatrix<Multicomplex>, k: &[usize]) -> Result<SkewMatrix<Multicomplex>> {
        let n = n_generators(a);
        let parts: Vec<SkewMatrix<Complex64>> = CharacterMap::all(n)
            .par_iter()
            .map(|h| derived_schur(&character_image(a, h), k))
            .collect::<Result<_>>()?;
        let order = parts[0].order();
        let mut out = SkewMatrix::zeros(order, a.zero().clone());
        for i in 0..order {
            for j in i + 1..order {
                let vals: Vec<Complex64> = parts.iter().map(|p| p.get(i, j)).collect();
                out.set(i, j, from_character_values(n, &vals)?);
            }
        }
        out.labels = parts[0].labels.clone();
        Ok(out)
    }
}

pub fn pfaffian<T: PfaffianScalar>(a: &SkewMatrix<T>) -> Result<T> {
    T::pfaffian(a)
}

/// Pfaffian as the signed sum over perfect matchings of the index set.
pub fn pfaffian_bruteforce<T: Scalar>(a: &SkewMatrix<T>) -> Result<T> {
    let n = a.order();
    check_even(n)?;
    if n > MAX_BRUTE_ORDER {
        return Err(Error::SizeGuard {
            what: "brute-force Pfaffian order",
            limit: MAX_BRUTE_ORDER,
            got: n,
        });
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(expand(a, &idx))
}

fn expand<T: Scalar>(a: &SkewMatrix<T>, idx: &[usize]) -> T {
    if idx.is_empty() {
        return a.zero().one_like();
    }
    let mut acc = a.zero().clone();
    let first = idx[0];
    for p in 1..idx.len() {
        let x = a.get(first, idx[p]);
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(q, _)| q + 1 != p)
            .map(|(_, &v)| v)
            .collect();
        let term = x * expand(a, &rest);
        acc = if p % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

pub fn submatrix<T: Scalar>(a: &SkewMatrix<T>, k: &[usize]) -> SkewMatrix<T> {
    a.submatrix(k)
}

pub fn derived_matrix<T: PfaffianScalar>(a: &SkewMatrix<T>, k: &[usize]) -> Result<SkewMatrix<T>> {
    T::derived(a, k)
}

/// Integrates out the index block `k`: returns `(Pf(A_K), A^{K-bar})`, with
/// `Pf(A) = Pf(A_K)^{-(n-p-1)} Pf(A^{K-bar})` for `|K| = 2p`, order `2n`.
pub fn reduce<T: PfaffianScalar>(a: &SkewMatrix<T>, k: &[usize]) -> Result<(T, SkewMatrix<T>)> {
    let ak = a.submatrix(k);
    check_even(ak.order())?;
    let pfk = T::pfaffian(&ak)?;
    let scale = ak.max_magnitude().powi(ak.order() as i32 / 2);
    if pfk.magnitude() < PIVOT_TOL * scale || pfk.is_zero() {
        return Err(Error::SingularPivot(pfk.magnitude()));
    }
    Ok((pfk, T::derived(a, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(order: usize, seed: u64) -> SkewMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SkewMatrix::from_fn(order, 0.0, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn two_by_two() {
        let m = SkewMatrix::from_fn(2, 0.0, |_, _| 3.5);
        assert_eq!(pfaffian(&m).unwrap(), 3.5);
        assert_eq!(pfaffian_bruteforce(&m).unwrap(), 3.5);
    }

    #[test]
    fn four_by_four_formula() {
        let a = random(4, 1);
        let expect = a.get(0, 1) * a.get(2, 3) - a.get(0, 2) * a.get(1, 3) + a.get(0, 3) * a.get(1, 2);
        assert!(close(pfaffian(&a).unwrap(), expect, 1e-12));
        assert!(close(pfaffian_bruteforce(&a).unwrap(), expect, 1e-12));
    }

    #[test]
    fn fast_matches_bruteforce() {
        for seed in 0..5 {
            let a = random(10, seed);
            assert!(close(pfaffian(&a).unwrap(), pfaffian_bruteforce(&a).unwrap(), 1e-10));
        }
    }

    #[test]
    fn odd_order_rejected() {
        assert_eq!(pfaffian(&random(3, 0)).unwrap_err(), Error::OddOrder(3));
    }

    #[test]
    fn submatrix_edge_cases() {
        let a = random(6, 2);
        assert_eq!(submatrix(&a, &[0, 1, 2, 3, 4, 5]), a);
        assert_eq!(pfaffian(&submatrix(&a, &[])).unwrap(), 1.0);
        assert_eq!(pfaffian(&submatrix(&a, &[4, 1])).unwrap(), a.get(1, 4));
    }

    #[test]
    fn derived_matrix_cases() {
        let a = random(8, 3);
        assert_eq!(derived_matrix(&a, &[]).unwrap(), a);
        assert_eq!(derived_matrix(&a, &(0..8).collect::<Vec<_>>()).unwrap().order(), 0);
        let k = [1, 4, 5, 6];
        let d = derived_matrix(&a, &k).unwrap();
        let kbar = [0, 2, 3, 7];
        for i in 0..4 {
            for j in i + 1..4 {
                let mut idx = k.to_vec();
                idx.extend([kbar[i], kbar[j]]);
                let direct = pfaffian_bruteforce(&a.submatrix(&idx)).unwrap();
                assert!(close(d.get(i, j), direct, 1e-10), "{i} {j}");
            }
        }
    }

    #[test]
    fn reduction_formula() {
        for (order, p) in [(4usize, 1usize), (8, 1), (10, 2)] {
            let a = random(order, order as u64);
            let k: Vec<usize> = (0..2 * p).map(|x| (3 * x + 1) % order).collect();
            let (pfk, d) = reduce(&a, &k).unwrap();
            let n = order / 2;
            let lhs = pfaffian(&a).unwrap();
            let rhs = pfk.powi(-((n - p - 1) as i32)) * pfaffian(&d).unwrap();
            assert!(close(lhs, rhs, 1e-8));
        }
    }

    #[test]
    fn singular_pivot_block() {
        let mut a = random(6, 9);
        a.set(0, 1, 0.0);
        assert!(matches!(reduce(&a, &[0, 1]), Err(Error::SingularPivot(_))));
    }

    #[test]
    fn swap_flips_sign() {
        let a = random(6, 4);
        let mut b = a.clone();
        b.swap(1, 4);
        assert!(close(pfaffian(&a).unwrap(), -pfaffian(&b).unwrap(), 1e-12));
    }

    #[test]
    fn multicomplex_of_reals_is_real() {
        let a = random(8, 5);
        let m = a.map(Multicomplex::zero(2), |&x| Multicomplex::real(2, x));
        let p = pfaffian(&m).unwrap();
        assert!(close(p.re(), pfaffian(&a).unwrap(), 1e-12));
        assert!(p.coeffs()[1..].iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn multicomplex_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = SkewMatrix::from_fn(6, Multicomplex::zero(2), |_, _| {
            Multicomplex::from_coeffs(2, (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
        });
        let fast = pfaffian(&m).unwrap();
        let slow = pfaffian_bruteforce(&m).unwrap();
        for (a, b) in fast.coeffs().iter().zip(slow.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
