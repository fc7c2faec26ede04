//! Block structure of operators on `(C^d)^{⊗n}` that commute with all
//! permutations of the factors (n ≤ 3).
//!
//! Such operators decompose as `⊕_λ X_λ ⊗ 1_{m_λ}`. A [`Decomposition`]
//! stores, for every sector `λ`, one orthonormal basis per copy, chosen so
//! that an invariant operator acts identically on all copies.

use nalgebra::DMatrix;

use crate::linalg::{self, c, ComplexMatrix, ZERO};

#[derive(Clone, Debug)]
pub(crate) struct Sector {
    /// One `D × d_λ` isometry per copy of the sector.
    pub copies: Vec<ComplexMatrix>,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.copies[0].ncols()
    }

    pub fn mult(&self) -> usize {
        self.copies.len()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Decomposition {
    pub sectors: Vec<Sector>,
}

/// Operator permuting tensor factors: factor `k` of the output is factor
/// `order[k]` of the input.
fn perm_operator(d: usize, order: &[usize]) -> ComplexMatrix {
    let n = order.len();
    let total = d.pow(n as u32);
    let mut m = DMatrix::from_element(total, total, ZERO);
    let mut digits = vec![0; n];
    for i in 0..total {
        let mut x = i;
        for k in (0..n).rev() {
            digits[k] = x % d;
            x /= d;
        }
        let j = order.iter().fold(0, |acc, &k| acc * d + digits[k]);
        m[(j, i)] = c(1.0);
    }
    m
}

fn range(p: &ComplexMatrix) -> ComplexMatrix {
    linalg::support(p, 0.5).1
}

impl Decomposition {
    pub fn trivial(d: usize) -> Self {
        Decomposition { sectors: vec![Sector { copies: vec![linalg::identity(d)] }] }
    }

    /// Sectors of the permutation action of `S_n` on `(C^d)^{⊗n}`.
    pub fn symmetric(d: usize, n: usize) -> Self {
        let total = d.pow(n as u32);
        let id = linalg::identity(total);
        let mut sectors = Vec::new();
        let mut push = |copies: Vec<ComplexMatrix>| {
            if copies[0].ncols() > 0 {
                sectors.push(Sector { copies });
            }
        };
        match n {
            0 | 1 => return Self::trivial(total),
            2 => {
                let swap = perm_operator(d, &[1, 0]);
                push(vec![range(&((&id + &swap) * c(0.5)))]);
                push(vec![range(&((&id - &swap) * c(0.5)))]);
            }
            3 => {
                let perms: [([usize; 3], f64); 6] = [
                    ([0, 1, 2], 1.0),
                    ([1, 0, 2], -1.0),
                    ([0, 2, 1], -1.0),
                    ([2, 1, 0], -1.0),
                    ([1, 2, 0], 1.0),
                    ([2, 0, 1], 1.0),
                ];
                let mut sym = DMatrix::from_element(total, total, ZERO);
                let mut anti = sym.clone();
                for (p, sign) in &perms {
                    let t = perm_operator(d, p);
                    sym += &t * c(1.0 / 6.0);
                    anti += &t * c(sign / 6.0);
                }
                let mixed = &id - &sym - &anti;
                let t12 = perm_operator(d, &[1, 0, 2]);
                let t23 = perm_operator(d, &[0, 2, 1]);
                // First copy: the part of the mixed sector fixed by the
                // transposition (12). Its partner under the two-dimensional
                // irrep is (2/√3)(T23 + 1/2) applied to it.
                let e = range(&(&mixed * (&id + &t12) * c(0.5)));
                let f = (&t23 * &e + &e * c(0.5)) * c(2.0 / 3f64.sqrt());
                push(vec![range(&sym)]);
                push(vec![e, f]);
                push(vec![range(&anti)]);
            }
            _ => panic!("symmetric decomposition implemented for n ≤ 3"),
        }
        Decomposition { sectors }
    }

    /// Compressions `U_λ† X U_λ` to the first copy of each sector.
    pub fn reduce(&self, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
        self.sectors.iter().map(|s| s.copies[0].adjoint() * x * &s.copies[0]).collect()
    }

    /// `⊕_λ X_λ ⊗ 1` in the full space.
    #[cfg(test)]
    pub fn lift(&self, blocks: &[ComplexMatrix]) -> ComplexMatrix {
        let d = self.sectors[0].copies[0].nrows();
        let mut out = DMatrix::from_element(d, d, ZERO);
        for (s, x) in self.sectors.iter().zip(blocks) {
            for u in &s.copies {
                out += u * x * u.adjoint();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sector_dimensions() {
        let dec = Decomposition::symmetric(4, 3);
        let dims: Vec<(usize, usize)> = dec.sectors.iter().map(|s| (s.dim(), s.mult())).collect();
        assert_eq!(dims, vec![(20, 1), (20, 2), (4, 1)]);
        let dec = Decomposition::symmetric(2, 3);
        let dims: Vec<(usize, usize)> = dec.sectors.iter().map(|s| (s.dim(), s.mult())).collect();
        assert_eq!(dims, vec![(4, 1), (2, 2)]);
    }

    #[test]
    fn invariant_operators_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=3 {
            let rho = random_state(&[3], 3, &mut rng);
            let x = (0..n).fold(linalg::identity(1), |acc, _| linalg::kron(&acc, rho.matrix()));
            let dec = Decomposition::symmetric(3, n);
            let back = dec.lift(&dec.reduce(&x));
            assert!(linalg::max_abs(&(back - &x)) < 1e-12);
            // the second copy carries the same block
            for s in &dec.sectors {
                if s.mult() == 2 {
                    let b0 = s.copies[0].adjoint() * &x * &s.copies[0];
                    let b1 = s.copies[1].adjoint() * &x * &s.copies[1];
                    let cross = s.copies[0].adjoint() * &x * &s.copies[1];
                    assert!(linalg::max_abs(&(b0 - b1)) < 1e-12);
                    assert!(linalg::max_abs(&cross) < 1e-12);
                }
            }
        }
    }
}
