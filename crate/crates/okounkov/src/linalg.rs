//! Exact rational vectors and matrices: Gaussian elimination, kernels,
//! signatures. Everything here is over arbitrary-precision rationals;
//! no floating point appears anywhere in the computational path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn qi(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(entries: &[i64]) -> Vec<Rat> {
    entries.iter().map(|&n| qi(n)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vadd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn vneg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn vzero(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Clear denominators and divide by the content, keeping the sign.
/// Rays are genuine half-lines, so no sign normalization happens here.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    ints.iter()
        .map(|n| Rat::from_integer(n / &gcd))
        .collect()
}

/// Lexicographic comparison of rational vectors; used to make ray
/// orderings deterministic.
pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.cmp(y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m[0].len();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solution of A x = b: a particular solution (free variables zero)
/// together with a basis of the kernel of A.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

/// Exact Gauss-Jordan solve. Returns `None` when the system is
/// inconsistent.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Result<Option<LinearSolution>> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but rhs has {} entries",
            a.len(),
            b.len()
        )));
    }
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let nrows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for j in col..=ncols {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..nrows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivot_col_of_row.push(col);
        r += 1;
    }
    // inconsistency: a zero row with nonzero rhs
    for i in r..nrows {
        if !m[i][ncols].is_zero() {
            return Ok(None);
        }
    }
    let mut particular = vzero(ncols);
    for (row, &col) in pivot_col_of_row.iter().enumerate() {
        particular[col] = m[row][ncols].clone();
    }
    let pivot_set: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut k = vzero(ncols);
        k[free] = Rat::one();
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            k[col] = -m[row][free].clone();
        }
        kernel.push(k);
    }
    Ok(Some(LinearSolution { particular, kernel }))
}

/// Basis of { x : row . x = 0 for every row }.
pub fn kernel_basis(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vzero(dim);
                e[i] = Rat::one();
                e
            })
            .collect();
    }
    let zero = vzero(rows.len());
    solve_linear(rows, &zero)
        .expect("dimensions agree")
        .expect("homogeneous system is consistent")
        .kernel
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut result = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(col, p);
            result = -result;
        }
        let pivot = a[col][col].clone();
        result *= &pivot;
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let f = &a[i][col] / &pivot;
                for j in col..n {
                    let sub = &f * &a[col][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
    }
    result
}

fn check_symmetric(g: &[Vec<Rat>]) -> Result<()> {
    let n = g.len();
    for row in g {
        if row.len() != n {
            return Err(Error::Dimension("matrix is not square".into()));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if g[i][j] != g[j][i] {
                return Err(Error::Input(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// All leading principal minors alternate in sign starting negative.
pub fn is_negative_definite(g: &[Vec<Rat>]) -> Result<bool> {
    check_symmetric(g)?;
    for k in 1..=g.len() {
        let sub: Vec<Vec<Rat>> = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = det(&sub);
        let want_positive = k % 2 == 0;
        if d.is_zero() || d.is_positive() != want_positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signature (positive, negative, zero) of a symmetric matrix, computed
/// by exact congruent diagonalization.
pub fn signature(g: &[Vec<Rat>]) -> Result<(usize, usize, usize)> {
    check_symmetric(g)?;
    let n = g.len();
    let mut m: Vec<Vec<Rat>> = g.to_vec();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    for i in 0..n {
        if m[i][i].is_zero() {
            // bring a nonzero entry to the diagonal congruently
            if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                // row/col i += row/col j; new diagonal = 2 m[i][j] + m[j][j]
                for k in 0..n {
                    let t = m[j][k].clone();
                    m[i][k] = &m[i][k] + &t;
                }
                for k in 0..n {
                    let t = m[k][j].clone();
                    m[k][i] = &m[k][i] + &t;
                }
            }
        }
        if m[i][i].is_zero() {
            zero += 1;
            continue;
        }
        if m[i][i].is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let pivot = m[i][i].clone();
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                let f = &m[i][j] / &pivot;
                for k in 0..n {
                    let sub = &f * &m[i][k];
                    m[j][k] = &m[j][k] - sub;
                }
                for k in 0..n {
                    let sub = &f * &m[k][i];
                    m[k][j] = &m[k][j] - sub;
                }
            }
        }
    }
    Ok((pos, neg, zero))
}
