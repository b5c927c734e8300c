use num_bigint::BigInt;

use super::{atkin_u, deplete, eisenstein_g, frobenius_psi, QExp};
use crate::error::{Error, Result};
use crate::exact::{is_prime, pow_rational, Rational};
use crate::linalg::{solve_columns, Solution};

/// An ordered Eisenstein basis of `Gamma_0(p)` or `Gamma_0(p l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EisensteinBasis {
    pub primes: Vec<u64>,
    pub weight: u32,
    pub labels: Vec<String>,
    pub forms: Vec<QExp>,
}

impl EisensteinBasis {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn level(&self) -> u64 {
        self.primes.iter().product()
    }
}

/// `f - p^{-k} psi^p f`, i.e. `f(q) - f(q^p)`.
fn minus_frobenius(f: &QExp, p: u64) -> QExp {
    let inv = pow_rational(&Rational::from_integer(BigInt::from(p)), -(f.weight as i64));
    f.sub(&frobenius_psi(f, p).scale(&inv))
}

/// Ordered Eisenstein basis for level `Gamma_0(p)` (one prime) or
/// `Gamma_0(p l)` (two primes, `U_p` acting through the first).
///
/// For `k > 2`:
/// - `{p}`: `[G^(p), G - p^-k psi^p G]`
/// - `{p, l}`: `[G^(p), G - p^-k psi^p G, G^(p)(l), G^(l) - p^-k psi^p G^(l)]`
///
/// For `k = 2` every element involving bare `G_2` is dropped:
/// - `{p}`: `[G_2^(p)]`
/// - `{p, l}`: `[G_2^(p), G_2^(p)(l), G_2^(l) - p^-2 psi^p G_2^(l)]`
pub fn eisenstein_basis(k: u32, primes: &[u64], q_order: usize) -> Result<EisensteinBasis> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k as i64));
    }
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::ConfigInvalid(format!("{p} is not prime")));
        }
    }
    let g = eisenstein_g(k, q_order)?;
    let (labels, forms): (Vec<&str>, Vec<QExp>) = match *primes {
        [p] => {
            let gp = deplete(&g, p);
            if k == 2 {
                (vec!["G^(p)"], vec![gp])
            } else {
                (
                    vec!["G^(p)", "G - p^-k psi^p G"],
                    vec![gp, minus_frobenius(&g, p).with_level(p)],
                )
            }
        }
        [p, l] => {
            if p == l {
                return Err(Error::DuplicatePrime(p));
            }
            let gp = deplete(&g, p);
            let gl = deplete(&g, l);
            let gpl = deplete(&gp, l);
            let mixed = minus_frobenius(&gl, p);
            if k == 2 {
                (
                    vec!["G^(p)", "G^(p)(l)", "G^(l) - p^-k psi^p G^(l)"],
                    vec![gp, gpl, mixed],
                )
            } else {
                (
                    vec![
                        "G^(p)",
                        "G - p^-k psi^p G",
                        "G^(p)(l)",
                        "G^(l) - p^-k psi^p G^(l)",
                    ],
                    vec![gp, minus_frobenius(&g, p), gpl, mixed],
                )
            }
        }
        _ => {
            return Err(Error::ConfigInvalid(format!(
                "Eisenstein bases need one or two primes, got {primes:?}"
            )))
        }
    };
    let level: u64 = primes.iter().product();
    Ok(EisensteinBasis {
        primes: primes.to_vec(),
        weight: k,
        labels: labels.into_iter().map(String::from).collect(),
        forms: forms
            .into_iter()
            .map(|f| f.with_level(level).with_quasi(false))
            .collect(),
    })
}

/// Matrix of `U_p` in the given basis: column `j` holds the coordinates of
/// `U_p(b_j)`. Solved exactly on q-coefficients `0..=floor(Q/p)`.
pub fn atkin_matrix(basis: &EisensteinBasis, p: u64) -> Result<Vec<Vec<Rational>>> {
    let n = basis.len();
    let columns: Vec<Vec<Rational>> = basis.forms.iter().map(|f| f.coeffs().to_vec()).collect();
    let mut matrix = vec![vec![Rational::from_integer(BigInt::from(0)); n]; n];
    for (j, b) in basis.forms.iter().enumerate() {
        let image = atkin_u(b, p);
        match solve_columns(&columns, image.coeffs()) {
            Solution::Unique(x) => {
                for (i, xi) in x.into_iter().enumerate() {
                    matrix[i][j] = xi;
                }
            }
            Solution::Underdetermined(_) => return Err(Error::DegenerateBasis(image.q_order())),
            Solution::Inconsistent => {
                return Err(Error::NotInSpan {
                    index: j,
                    q_order: image.q_order(),
                })
            }
        }
    }
    Ok(matrix)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// Coordinates in the basis (free variables set to zero if the basis is
    /// dependent at this truncation).
    Member(Vec<Rational>),
    NotMember(String),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Exact membership of `f` in the span of `basis` on q-coefficients up to the
/// common truncation. Forms of another weight are never members.
pub fn classical_membership(f: &QExp, basis: &[QExp]) -> Membership {
    if let Some(b) = basis.iter().find(|b| b.weight != f.weight) {
        return Membership::NotMember(format!(
            "weight mismatch: form has weight {}, basis element has weight {}",
            f.weight, b.weight
        ));
    }
    let columns: Vec<Vec<Rational>> = basis.iter().map(|b| b.coeffs().to_vec()).collect();
    match solve_columns(&columns, f.coeffs()) {
        Solution::Unique(x) | Solution::Underdetermined(x) => Membership::Member(x),
        Solution::Inconsistent => Membership::NotMember(format!(
            "not in the span of {} basis forms at the common q-order",
            basis.len()
        )),
    }
}
