use std::fmt;

use crate::algebra::{IdempotentPair, ParaComplex};

/// Relative pivot threshold below which a component matrix counts as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Idempotent component of a para-complex system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Plus,
    Minus,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Plus => "e+",
            Component::Minus => "e-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("degenerate Lagrangian: the {component} component of M is singular")]
    DegenerateLagrangian { component: Component },
}

/// Gaussian elimination with scaled partial pivoting on one real system.
fn solve_real(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let d = b.len();
    let scale: Vec<f64> = m
        .iter()
        .map(|row| row.iter().fold(0.0f64, |acc, x| acc.max(x.abs())))
        .collect();
    let mut order: Vec<usize> = (0..d).collect();
    for col in 0..d {
        let mut best = None;
        let mut best_ratio = 0.0;
        for (r, &row) in order.iter().enumerate().skip(col) {
            if scale[row] == 0.0 {
                return None;
            }
            let ratio = m[row][col].abs() / scale[row];
            if ratio > best_ratio {
                best_ratio = ratio;
                best = Some(r);
            }
        }
        if best_ratio < PIVOT_TOLERANCE {
            return None;
        }
        order.swap(col, best?);
        let p = order[col];
        for &row in &order[col + 1..] {
            let f = m[row][col] / m[p][col];
            if f != 0.0 {
                for k in col..d {
                    m[row][k] -= f * m[p][k];
                }
                b[row] -= f * b[p];
            }
        }
    }
    let mut x = vec![0.0; d];
    for col in (0..d).rev() {
        let p = order[col];
        let s: f64 = (col + 1..d).map(|k| m[p][k] * x[k]).sum();
        x[col] = (b[p] - s) / m[p][col];
    }
    Some(x)
}

/// Solves `M x = b` over the para-complex numbers by splitting into the two
/// real idempotent-component systems.
pub fn solve_para_linear(m: &[Vec<ParaComplex>], b: &[ParaComplex]) -> Result<Vec<ParaComplex>, SolveError> {
    let d = b.len();
    assert!(m.len() == d && m.iter().all(|r| r.len() == d), "M must be square and match b");
    let split = |f: fn(IdempotentPair) -> f64| {
        (
            m.iter()
                .map(|row| row.iter().map(|x| f(x.to_idempotent())).collect())
                .collect::<Vec<Vec<f64>>>(),
            b.iter().map(|x| f(x.to_idempotent())).collect::<Vec<f64>>(),
        )
    };
    let (mu, bu) = split(|p| p.u);
    let (mv, bv) = split(|p| p.v);
    let u = solve_real(mu, bu).ok_or(SolveError::DegenerateLagrangian { component: Component::Plus })?;
    let v = solve_real(mv, bv).ok_or(SolveError::DegenerateLagrangian { component: Component::Minus })?;
    Ok(u
        .into_iter()
        .zip(v)
        .map(|(u, v)| ParaComplex::from_idempotent(IdempotentPair::new(u, v)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(a: f64, b: f64) -> ParaComplex {
        ParaComplex::new(a, b)
    }

    #[test]
    fn identity() {
        let id = vec![vec![ParaComplex::ONE, ParaComplex::ZERO], vec![ParaComplex::ZERO, ParaComplex::ONE]];
        let b = vec![pc(1.5, -2.0), pc(0.25, 3.0)];
        assert_eq!(solve_para_linear(&id, &b).unwrap(), b);
    }

    #[test]
    fn anti_diagonal_j() {
        let z = ParaComplex::ZERO;
        let m = vec![vec![z, ParaComplex::J], vec![ParaComplex::J, z]];
        let x = solve_para_linear(&m, &[ParaComplex::ONE, ParaComplex::J]).unwrap();
        assert_eq!(x, vec![ParaComplex::ONE, ParaComplex::J]);
    }

    #[test]
    fn singular_systems() {
        let z = ParaComplex::ZERO;
        assert!(solve_para_linear(&[vec![z, z], vec![z, z]], &[z, z]).is_err());
        // invertible in e⁻ only
        let m = vec![vec![ParaComplex::E_MINUS]];
        assert_eq!(
            solve_para_linear(&m, &[ParaComplex::ONE]),
            Err(SolveError::DegenerateLagrangian { component: Component::Plus })
        );
        // rank one after elimination
        let m = vec![vec![pc(1.0, 0.0), pc(2.0, 0.0)], vec![pc(2.0, 0.0), pc(4.0, 0.0)]];
        assert!(solve_para_linear(&m, &[ParaComplex::ONE, ParaComplex::ONE]).is_err());
    }
}
