//! Brute-force check of the block construction.
//!
//! Builds `H = R3 + a†a - κ (a R+ + a† R-)` on the full product space of `N`
//! two-level molecules and a Fock space truncated at `cutoff` photons, then
//! splits it by excitation number `c` (diagonal in the product basis) and by
//! cooperation number `r` (eigenspaces of `R²`). Only sectors with
//! `c + r <= cutoff` are reported; those are untouched by the truncation.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::HalfInt;

pub const MAX_MOLECULES: usize = 3;
pub const MAX_DIM: usize = 4096;

/// Eigenvalues of every complete `(r, c)` sector, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSpectrum {
    pub molecules: usize,
    pub cutoff: usize,
    /// Keyed by `(r, c)`; ascending, each block level repeated once per
    /// copy of the spin-`r` multiplet.
    pub sectors: BTreeMap<(HalfInt, HalfInt), Vec<f64>>,
}

impl DenseSpectrum {
    pub fn sector(&self, r: HalfInt, c: HalfInt) -> Option<&[f64]> {
        self.sectors.get(&(r, c)).map(Vec::as_slice)
    }
}

pub fn dense_oracle(molecules: usize, cutoff: usize, kappa: f64) -> Result<DenseSpectrum> {
    if molecules == 0 || molecules > MAX_MOLECULES {
        return Err(Error::param(
            "molecules",
            format!("dense oracle supports 1..={MAX_MOLECULES} molecules, got {molecules}"),
        ));
    }
    let spin_dim = 1usize << molecules;
    let fock = cutoff + 1;
    let dim = spin_dim * fock;
    if dim > MAX_DIM {
        return Err(Error::TooLarge { dim, limit: MAX_DIM });
    }

    // Spin operators; bit i set means molecule i is excited.
    let mut r3 = DMatrix::<f64>::zeros(spin_dim, spin_dim);
    let mut raise = DMatrix::<f64>::zeros(spin_dim, spin_dim);
    for s in 0..spin_dim {
        r3[(s, s)] = s.count_ones() as f64 - molecules as f64 / 2.0;
        for i in 0..molecules {
            if s & (1 << i) == 0 {
                raise[(s | (1 << i), s)] += 1.0;
            }
        }
    }
    let lower = raise.transpose();
    let r_squared = &r3 * &r3 + (&raise * &lower + &lower * &raise) * 0.5;

    let number = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(fock, |n, _| n as f64));
    let mut annihilate = DMatrix::<f64>::zeros(fock, fock);
    for n in 1..fock {
        annihilate[(n - 1, n)] = (n as f64).sqrt();
    }
    let create = annihilate.transpose();
    let spin_id = DMatrix::<f64>::identity(spin_dim, spin_dim);
    let fock_id = DMatrix::<f64>::identity(fock, fock);

    let hamiltonian = r3.kronecker(&fock_id) + spin_id.kronecker(&number)
        - (raise.kronecker(&annihilate) + lower.kronecker(&create)) * kappa;
    let r_squared_full = r_squared.kronecker(&fock_id);

    // Group product states by doubled excitation number 2(m + n).
    let mut by_c: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for s in 0..spin_dim {
        let m2 = 2 * s.count_ones() as i64 - molecules as i64;
        for n in 0..fock {
            by_c.entry(m2 + 2 * n as i64).or_default().push(s * fock + n);
        }
    }

    let mut sectors = BTreeMap::new();
    for (c2, states) in by_c {
        let k = states.len();
        let h_c = DMatrix::from_fn(k, k, |i, j| hamiltonian[(states[i], states[j])]);
        let r2_c = DMatrix::from_fn(k, k, |i, j| r_squared_full[(states[i], states[j])]);
        let casimir = SymmetricEigen::new(r2_c);

        let mut by_r: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (col, &value) in casimir.eigenvalues.iter().enumerate() {
            let r = 0.5 * ((1.0 + 4.0 * value.max(0.0)).sqrt() - 1.0);
            by_r.entry((2.0 * r).round() as i64).or_default().push(col);
        }
        for (r2, cols) in by_r {
            if (c2 + r2) / 2 > cutoff as i64 {
                continue;
            }
            let q = DMatrix::from_fn(k, cols.len(), |i, j| casimir.eigenvectors[(i, cols[j])]);
            let projected = q.transpose() * &h_c * &q;
            let projected = (&projected + projected.transpose()) * 0.5;
            let mut values: Vec<f64> = SymmetricEigen::new(projected).eigenvalues.iter().copied().collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sectors.insert((HalfInt::from_doubled(r2), HalfInt::from_doubled(c2)), values);
        }
    }

    Ok(DenseSpectrum {
        molecules,
        cutoff,
        sectors,
    })
}
