//! Riemannian symmetric spaces G/K and their hermitizations G°/K°, with the
//! dimension identity dim_ℝ G/K = dim_ℂ G°/K°.
//!
//! Dimension formulas are standard: dim G/K = dim G − dim K, and for a
//! hermitian G°/K° the complex dimension is half the real one.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    /// One parameter n ≥ 1.
    N,
    /// Two parameters with 1 ≤ p ≤ q.
    OrderedPq,
    /// Two parameters p, q ≥ 1, unordered.
    Pq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Params {
    N(u64),
    Pq(u64, u64),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymmetricPair {
    pub index: u8,
    pub name: &'static str,
    pub g_family: &'static str,
    pub g_circ_family: &'static str,
    pub params: ParamKind,
    /// G/K is itself hermitian and G° = G × G.
    pub hermitian: bool,
    #[serde(skip)]
    pub dim_real: fn(Params) -> u64,
    #[serde(skip)]
    pub dim_cplx: fn(Params) -> u64,
    pub dim_real_formula: &'static str,
    pub dim_cplx_formula: &'static str,
}

fn n(p: Params) -> u64 {
    match p {
        Params::N(n) => n,
        Params::Pq(..) => unreachable!("validated before evaluation"),
    }
}

fn pq(p: Params) -> (u64, u64) {
    match p {
        Params::Pq(p, q) => (p, q),
        Params::N(_) => unreachable!("validated before evaluation"),
    }
}

pub fn catalog() -> Vec<SymmetricPair> {
    vec![
        SymmetricPair {
            index: 1,
            name: "gl-n-r",
            g_family: "GL(n,R)",
            g_circ_family: "Sp(2n,R)",
            params: ParamKind::N,
            hermitian: false,
            // positive symmetric n×n matrices; Siegel upper half-space
            dim_real: |p| n(p) * (n(p) + 1) / 2,
            dim_cplx: |p| n(p) * (n(p) + 1) / 2,
            dim_real_formula: "n(n+1)/2",
            dim_cplx_formula: "n(n+1)/2",
        },
        SymmetricPair {
            index: 2,
            name: "o-pq",
            g_family: "O(p,q)",
            g_circ_family: "U(p,q)",
            params: ParamKind::OrderedPq,
            hermitian: false,
            dim_real: |p| pq(p).0 * pq(p).1,
            dim_cplx: |p| pq(p).0 * pq(p).1,
            dim_real_formula: "pq",
            dim_cplx_formula: "pq",
        },
        SymmetricPair {
            index: 3,
            name: "sp-2n-r",
            g_family: "Sp(2n,R)",
            g_circ_family: "Sp(2n,R) x Sp(2n,R)",
            params: ParamKind::N,
            hermitian: true,
            dim_real: |p| n(p) * (n(p) + 1),
            dim_cplx: |p| 2 * (n(p) * (n(p) + 1) / 2),
            dim_real_formula: "n(n+1)",
            dim_cplx_formula: "2 * n(n+1)/2",
        },
        SymmetricPair {
            index: 4,
            name: "gl-n-c",
            g_family: "GL(n,C)",
            g_circ_family: "U(n,n)",
            params: ParamKind::N,
            hermitian: false,
            // 2n² − n²
            dim_real: |p| n(p) * n(p),
            dim_cplx: |p| n(p) * n(p),
            dim_real_formula: "n^2",
            dim_cplx_formula: "n^2",
        },
        SymmetricPair {
            index: 5,
            name: "so-n-c",
            g_family: "SO(n,C)",
            g_circ_family: "SO*(2n)",
            params: ParamKind::N,
            hermitian: false,
            // n(n−1) − n(n−1)/2; SO*(2n)/U(n) has complex dimension n(n−1)/2
            dim_real: |p| n(p) * (n(p) - 1) / 2,
            dim_cplx: |p| n(p) * (n(p) - 1) / 2,
            dim_real_formula: "n(n-1)/2",
            dim_cplx_formula: "n(n-1)/2",
        },
        SymmetricPair {
            index: 6,
            name: "sp-2n-c",
            g_family: "Sp(2n,C)",
            g_circ_family: "Sp(4n,R)",
            params: ParamKind::N,
            hermitian: false,
            // 2n(2n+1) − n(2n+1); Siegel space of genus 2n
            dim_real: |p| n(p) * (2 * n(p) + 1),
            dim_cplx: |p| 2 * n(p) * (2 * n(p) + 1) / 2,
            dim_real_formula: "n(2n+1)",
            dim_cplx_formula: "2n(2n+1)/2",
        },
        SymmetricPair {
            index: 7,
            name: "u-pq",
            g_family: "U(p,q)",
            g_circ_family: "U(p,q) x U(p,q)",
            params: ParamKind::OrderedPq,
            hermitian: true,
            dim_real: |p| 2 * pq(p).0 * pq(p).1,
            dim_cplx: |p| 2 * pq(p).0 * pq(p).1,
            dim_real_formula: "2pq",
            dim_cplx_formula: "2 * pq",
        },
        SymmetricPair {
            index: 8,
            name: "gl-n-h",
            g_family: "GL(n,H)",
            // SO*(2m)/U(m) has complex dimension m(m−1)/2, so m = 2n
            g_circ_family: "SO*(4n)",
            params: ParamKind::N,
            hermitian: false,
            // 4n² − n(2n+1)
            dim_real: |p| n(p) * (2 * n(p) - 1),
            dim_cplx: |p| 2 * n(p) * (2 * n(p) - 1) / 2,
            dim_real_formula: "n(2n-1)",
            dim_cplx_formula: "2n(2n-1)/2",
        },
        SymmetricPair {
            index: 9,
            name: "sp-pq",
            g_family: "Sp(p,q)",
            g_circ_family: "U(2p,2q)",
            params: ParamKind::OrderedPq,
            hermitian: false,
            dim_real: |p| 4 * pq(p).0 * pq(p).1,
            dim_cplx: |p| (2 * pq(p).0) * (2 * pq(p).1),
            dim_real_formula: "4pq",
            dim_cplx_formula: "(2p)(2q)",
        },
        SymmetricPair {
            index: 10,
            name: "so-star-2n",
            g_family: "SO*(2n)",
            g_circ_family: "SO*(2n) x SO*(2n)",
            params: ParamKind::N,
            hermitian: true,
            dim_real: |p| n(p) * (n(p) - 1),
            dim_cplx: |p| 2 * (n(p) * (n(p) - 1) / 2),
            dim_real_formula: "n(n-1)",
            dim_cplx_formula: "2 * n(n-1)/2",
        },
        SymmetricPair {
            index: 11,
            name: "so-2-n",
            g_family: "SO(2,n)",
            g_circ_family: "SO(2,n) x SO(2,n)",
            params: ParamKind::N,
            hermitian: true,
            dim_real: |p| 2 * n(p),
            dim_cplx: |p| 2 * n(p),
            dim_real_formula: "2n",
            dim_cplx_formula: "2 * n",
        },
        SymmetricPair {
            index: 12,
            name: "so-1p-so-1q",
            g_family: "SO(1,p) x SO(1,q)",
            g_circ_family: "SO(2,p+q)",
            params: ParamKind::Pq,
            hermitian: false,
            // two real hyperbolic spaces; Lie ball of dimension p+q
            dim_real: |p| pq(p).0 + pq(p).1,
            dim_cplx: |p| pq(p).0 + pq(p).1,
            dim_real_formula: "p+q",
            dim_cplx_formula: "p+q",
        },
    ]
}

/// Row 2 with an off-by-one complex dimension; negative control for [`dims_match`].
pub fn corrupted_fixture() -> SymmetricPair {
    SymmetricPair {
        name: "o-pq-corrupted",
        dim_cplx: |p| pq(p).0 * pq(p).1 + 1,
        dim_cplx_formula: "pq+1",
        ..catalog()[1]
    }
}

fn validate(pair: &SymmetricPair, params: Params) -> Result<()> {
    let ok = match (pair.params, params) {
        (ParamKind::N, Params::N(n)) => n >= 1,
        (ParamKind::OrderedPq, Params::Pq(p, q)) => p >= 1 && p <= q,
        (ParamKind::Pq, Params::Pq(p, q)) => p >= 1 && q >= 1,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "{params:?} is not valid for {} ({:?})",
            pair.g_family, pair.params
        )))
    }
}

pub fn dims(pair: &SymmetricPair, params: Params) -> Result<(u64, u64)> {
    validate(pair, params)?;
    Ok(((pair.dim_real)(params), (pair.dim_cplx)(params)))
}

pub fn dims_match(pair: &SymmetricPair, params: Params) -> Result<bool> {
    let (r, c) = dims(pair, params)?;
    Ok(r == c)
}

/// Every valid parameter choice with entries in 1..=max.
pub fn sweep(kind: ParamKind, max: u64) -> Vec<Params> {
    match kind {
        ParamKind::N => (1..=max).map(Params::N).collect(),
        ParamKind::OrderedPq => (1..=max)
            .flat_map(|p| (p..=max).map(move |q| Params::Pq(p, q)))
            .collect(),
        ParamKind::Pq => (1..=max)
            .flat_map(|p| (1..=max).map(move |q| Params::Pq(p, q)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_rows_all_match() {
        let rows = catalog();
        assert_eq!(rows.len(), 12);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.index as usize, i + 1);
            for p in sweep(row.params, 8) {
                assert!(dims_match(row, p).unwrap(), "{} {p:?}", row.g_family);
            }
        }
    }

    #[test]
    fn examples() {
        let rows = catalog();
        assert_eq!(dims(&rows[1], Params::Pq(2, 3)).unwrap(), (6, 6));
        assert_eq!(dims(&rows[0], Params::N(4)).unwrap(), (10, 10));
        assert_eq!(dims(&rows[11], Params::Pq(3, 2)).unwrap(), (5, 5));
        // hermitian row: twice the complex dimension of G/K itself
        assert_eq!(dims(&rows[2], Params::N(3)).unwrap(), (12, 12));
    }

    #[test]
    fn corrupted_and_invalid() {
        let bad = corrupted_fixture();
        assert!(!dims_match(&bad, Params::Pq(2, 3)).unwrap());
        let rows = catalog();
        assert!(dims_match(&rows[1], Params::Pq(3, 2)).is_err());
        assert!(dims_match(&rows[0], Params::Pq(1, 2)).is_err());
        assert!(dims_match(&rows[0], Params::N(0)).is_err());
    }
}
