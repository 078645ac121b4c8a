//! Exact rational linear programming. Only a phase-1 simplex is needed:
//! every question in this crate is a conic feasibility question. Bland's
//! rule guarantees termination; all pivots are exact.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{vzero, Rat};

/// Certificate for `target = sum c_i gens_i + sum t_j lin_j` with `c >= 0`
/// and `t` free.
#[derive(Clone, Debug)]
pub struct ConicCertificate {
    pub coeffs: Vec<Rat>,
    pub lin_coeffs: Vec<Rat>,
}

/// Phase-1 simplex over the rationals with Bland's rule.
/// Returns a certificate iff `target` lies in cone(gens) + span(lin).
pub fn conic_combination(
    gens: &[Vec<Rat>],
    lin: &[Vec<Rat>],
    target: &[Rat],
) -> Result<Option<ConicCertificate>> {
    let m = target.len();
    for g in gens.iter().chain(lin.iter()) {
        if g.len() != m {
            return Err(Error::Dimension(format!(
                "generator has length {} but ambient dimension is {m}",
                g.len()
            )));
        }
    }
    let ng = gens.len();
    let nl = lin.len();
    // columns: gens | lin+ | lin- | artificials
    let nreal = ng + 2 * nl;
    let n = nreal + m;
    let mut a = vec![vzero(n); m];
    let mut b: Vec<Rat> = target.to_vec();
    for i in 0..m {
        for (j, g) in gens.iter().enumerate() {
            a[i][j] = g[i].clone();
        }
        for (j, l) in lin.iter().enumerate() {
            a[i][ng + j] = l[i].clone();
            a[i][ng + nl + j] = -l[i].clone();
        }
    }
    for i in 0..m {
        if b[i] < Rat::zero() {
            b[i] = -b[i].clone();
            for j in 0..nreal {
                a[i][j] = -a[i][j].clone();
            }
        }
        a[i][nreal + i] = Rat::from_integer(1.into());
    }
    // reduced costs for min(sum of artificials); artificials are basic
    let mut basis: Vec<usize> = (nreal..n).collect();
    let mut reduced: Vec<Rat> = (0..n)
        .map(|j| {
            if j >= nreal {
                Rat::zero()
            } else {
                -(0..m).map(|i| a[i][j].clone()).sum::<Rat>()
            }
        })
        .collect();
    let mut objective: Rat = b.iter().cloned().sum();

    loop {
        // Bland: entering column = smallest index with negative reduced cost
        let Some(enter) = (0..n).find(|&j| reduced[j] < Rat::zero()) else {
            break;
        };
        // ratio test; ties broken by smallest basic variable index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if a[i][enter] > Rat::zero() {
                let ratio = &b[i] / &a[i][enter];
                let better = match &best {
                    None => true,
                    Some(r) => ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(row) = leave else {
            return Err(Error::Internal(
                "phase-1 simplex unbounded; tableau corrupt".into(),
            ));
        };
        // pivot
        let pivot = a[row][enter].clone();
        for j in 0..n {
            a[row][j] = &a[row][j] / &pivot;
        }
        b[row] = &b[row] / &pivot;
        for i in 0..m {
            if i != row && !a[i][enter].is_zero() {
                let f = a[i][enter].clone();
                for j in 0..n {
                    let sub = &f * &a[row][j];
                    a[i][j] = &a[i][j] - sub;
                }
                let sub = &f * &b[row];
                b[i] = &b[i] - sub;
            }
        }
        if !reduced[enter].is_zero() {
            let f = reduced[enter].clone();
            for j in 0..n {
                let sub = &f * &a[row][j];
                reduced[j] = &reduced[j] - sub;
            }
            let delta = &f * &b[row];
            objective = &objective + delta;
        }
        basis[row] = enter;
    }

    if !objective.is_zero() {
        return Ok(None);
    }
    let mut values = vzero(nreal);
    for (i, &var) in basis.iter().enumerate() {
        if var < nreal {
            values[var] = b[i].clone();
        }
    }
    let coeffs = values[..ng].to_vec();
    let lin_coeffs = (0..nl)
        .map(|j| &values[ng + j] - &values[ng + nl + j])
        .collect();
    Ok(Some(ConicCertificate { coeffs, lin_coeffs }))
}

/// Membership of `point` in cone(gens), with an explicit nonnegative
/// ray combination on success.
pub fn cone_membership(gens: &[Vec<Rat>], point: &[Rat]) -> Result<Option<Vec<Rat>>> {
    Ok(conic_combination(gens, &[], point)?.map(|c| c.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, qvec, vadd, vscale};

    fn reconstruct(gens: &[Vec<Rat>], coeffs: &[Rat]) -> Vec<Rat> {
        let mut acc = vzero(gens[0].len());
        for (g, c) in gens.iter().zip(coeffs) {
            acc = vadd(&acc, &vscale(c, g));
        }
        acc
    }

    #[test]
    fn first_quadrant_member() {
        let gens = vec![qvec(&[1, 0]), qvec(&[0, 1])];
        let c = cone_membership(&gens, &qvec(&[1, 1])).unwrap().unwrap();
        assert_eq!(c, qvec(&[1, 1]));
    }

    #[test]
    fn first_quadrant_non_member() {
        let gens = vec![qvec(&[1, 0]), qvec(&[0, 1])];
        assert!(cone_membership(&gens, &qvec(&[-1, 0])).unwrap().is_none());
    }

    #[test]
    fn certificate_reconstructs_point() {
        let gens = vec![qvec(&[2, 1, 0]), qvec(&[0, 1, 1]), qvec(&[1, 1, 1])];
        let p = qvec(&[3, 3, 2]);
        let c = cone_membership(&gens, &p).unwrap().unwrap();
        assert!(c.iter().all(|x| *x >= Rat::zero()));
        assert_eq!(reconstruct(&gens, &c), p);
    }

    #[test]
    fn lineality_allows_negative_direction() {
        let gens = vec![qvec(&[1, 0])];
        let lin = vec![qvec(&[0, 1])];
        let cert = conic_combination(&gens, &lin, &qvec(&[2, -5]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.coeffs, qvec(&[2]));
        assert_eq!(cert.lin_coeffs, qvec(&[-5]));
    }

    #[test]
    fn degenerate_gram_membership() {
        // cone spanned by opposite rays contains the whole line
        let gens = vec![qvec(&[1, 1]), qvec(&[-1, -1])];
        assert!(cone_membership(&gens, &qvec(&[-3, -3])).unwrap().is_some());
        assert!(cone_membership(&gens, &qvec(&[1, 0])).unwrap().is_none());
        let _ = dot(&gens[0], &gens[1]);
    }
}
