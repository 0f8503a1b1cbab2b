use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::algebra::lattice::LatticeSpec;
use crate::algebra::operator::{
    check_matrix_size, check_vector_size, site_mask, QuantumOperator, StateVector,
};
use crate::algebra::weights::{boltzmann_weights, l_matrix};
use crate::error::{Error, Result};

/// Auxiliary-space entries of the monodromy matrix
/// `T = [[A, B], [C, D]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    A,
    B,
    C,
    D,
}

impl Entry {
    /// `(row, column)` in auxiliary space, `0` = up.
    #[inline]
    pub fn aux_indices(self) -> (usize, usize) {
        match self {
            Entry::A => (0, 0),
            Entry::B => (0, 1),
            Entry::C => (1, 0),
            Entry::D => (1, 1),
        }
    }
}

/// Monodromy matrix `T(lambda) = L_M(lambda - mu_M) ... L_1(lambda - mu_1)`
/// applied without materializing operators.
///
/// Each column contributes one `(b, c)` pair; sweeping the columns over an
/// auxiliary-extended vector costs `O(M 2^M)`.
#[derive(Debug, Clone)]
pub struct Monodromy {
    sites: usize,
    columns: Vec<(Complex64, Complex64)>,
}

impl Monodromy {
    pub fn new(lambda: Complex64, spec: &LatticeSpec) -> Result<Self> {
        let gamma = spec.gamma();
        let columns = spec
            .mu()
            .iter()
            .enumerate()
            .map(|(k, &m)| {
                boltzmann_weights(lambda - m, gamma)
                    .map(|w| (w.b, w.c))
                    .map_err(|_| Error::ColumnPole {
                        column: k + 1,
                        at: lambda - m,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sites: spec.sites(),
            columns,
        })
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.sites
    }

    fn sweep(&self, mut aux: [Vec<Complex64>; 2], order: impl Iterator<Item = usize>) -> [Vec<Complex64>; 2] {
        let dim = 1usize << self.sites;
        for k in order {
            let (b, c) = self.columns[k - 1];
            let mask = site_mask(self.sites, k);
            let [up_aux, down_aux] = &mut aux;
            for i in (0..dim).filter(|i| i & mask == 0) {
                let j = i | mask;
                // (aux, spin): (0,down) and (1,up) mix, (0,up) and (1,down) pass
                let x = up_aux[j];
                let y = down_aux[i];
                up_aux[j] = b * x + c * y;
                down_aux[i] = c * x + b * y;
            }
        }
        aux
    }

    fn seed(&self, in_aux: usize, v: &StateVector) -> Result<[Vec<Complex64>; 2]> {
        if v.sites() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: v.sites(),
            });
        }
        let zeros = vec![Complex64::new(0.0, 0.0); v.dim()];
        Ok(if in_aux == 0 {
            [v.amplitudes().to_vec(), zeros]
        } else {
            [zeros, v.amplitudes().to_vec()]
        })
    }

    /// `T_{a,b} v` for both output auxiliary states `a`, input state `b`.
    pub fn apply_column(&self, in_aux: usize, v: &StateVector) -> Result<[StateVector; 2]> {
        let [up, down] = self.sweep(self.seed(in_aux, v)?, 1..=self.sites);
        Ok([
            StateVector::from_amplitudes(self.sites, up)?,
            StateVector::from_amplitudes(self.sites, down)?,
        ])
    }

    /// One entry applied to a vector.
    pub fn apply(&self, entry: Entry, v: &StateVector) -> Result<StateVector> {
        let (a, b) = entry.aux_indices();
        let [up, down] = self.apply_column(b, v)?;
        Ok(if a == 0 { up } else { down })
    }

    /// Transpose of one entry applied to a vector. Every `L` is symmetric,
    /// so the transposed monodromy is the product in reversed column order.
    pub fn apply_transposed(&self, entry: Entry, v: &StateVector) -> Result<StateVector> {
        let (a, b) = entry.aux_indices();
        let [up, down] = self.sweep(self.seed(a, v)?, (1..=self.sites).rev());
        StateVector::from_amplitudes(self.sites, if b == 0 { up } else { down })
    }

    /// Transfer matrix `A + D` applied to a vector.
    pub fn apply_transfer(&self, v: &StateVector) -> Result<StateVector> {
        let mut a = self.apply(Entry::A, v)?;
        let d = self.apply(Entry::D, v)?;
        a.add_assign_scaled(&d, Complex64::new(1.0, 0.0));
        Ok(a)
    }

    /// Dense matrix of one entry (`M <= 8`).
    pub fn operator(&self, entry: Entry) -> Result<QuantumOperator> {
        QuantumOperator::from_linear_map(self.sites, |v| self.apply(entry, v))
    }
}

/// The four auxiliary blocks of the monodromy matrix.
#[derive(Debug, Clone)]
pub struct MonodromyBlocks {
    pub a: QuantumOperator,
    pub b: QuantumOperator,
    pub c: QuantumOperator,
    pub d: QuantumOperator,
}

impl MonodromyBlocks {
    pub fn get(&self, row: usize, col: usize) -> &QuantumOperator {
        match (row, col) {
            (0, 0) => &self.a,
            (0, 1) => &self.b,
            (1, 0) => &self.c,
            _ => &self.d,
        }
    }
}

/// Dense `A, B, C, D` at `lambda`.
pub fn monodromy(lambda: Complex64, spec: &LatticeSpec) -> Result<MonodromyBlocks> {
    check_matrix_size(spec.sites())?;
    let t = Monodromy::new(lambda, spec)?;
    Ok(MonodromyBlocks {
        a: t.operator(Entry::A)?,
        b: t.operator(Entry::B)?,
        c: t.operator(Entry::C)?,
        d: t.operator(Entry::D)?,
    })
}

/// Dense transfer matrix `T(lambda) = A(lambda) + D(lambda)`.
pub fn transfer(lambda: Complex64, spec: &LatticeSpec) -> Result<QuantumOperator> {
    check_matrix_size(spec.sites())?;
    let t = Monodromy::new(lambda, spec)?;
    QuantumOperator::from_linear_map(spec.sites(), |v| t.apply_transfer(v))
}

/// `R_check(lambda) = P L(lambda + eta/2)`.
pub fn r_check(lambda: Complex64, spec: &LatticeSpec) -> Result<Matrix4<Complex64>> {
    let l = l_matrix(lambda + spec.gamma().eta() * 0.5, spec.gamma())?;
    let mut p = Matrix4::zeros();
    let one = Complex64::new(1.0, 0.0);
    p[(0, 0)] = one;
    p[(1, 2)] = one;
    p[(2, 1)] = one;
    p[(3, 3)] = one;
    Ok(p * l)
}

/// Relative max-norm residual of the intertwining relation
/// `R_check(lambda - mu) [T(lambda) (x) T(mu)] = [T(mu) (x) T(lambda)] R_check(lambda - mu)`.
///
/// The tensor products act on two auxiliary copies with the physical
/// operators multiplied in the order written.
pub fn rtt_residual(lambda: Complex64, mu: Complex64, spec: &LatticeSpec) -> Result<f64> {
    let tl = monodromy(lambda, spec)?;
    let tm = monodromy(mu, spec)?;
    let r = r_check(lambda - mu, spec)?;

    let pair = |first: &MonodromyBlocks, second: &MonodromyBlocks| -> Vec<Vec<QuantumOperator>> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| first.get(i >> 1, j >> 1).mul(second.get(i & 1, j & 1)))
                    .collect()
            })
            .collect()
    };
    let x = pair(&tl, &tm);
    let y = pair(&tm, &tl);

    let dim = 1usize << spec.sites();
    let zero = || QuantumOperator::from_matrix(spec.sites(), nalgebra::DMatrix::zeros(dim, dim));
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            let mut lhs = zero()?;
            let mut rhs = zero()?;
            for j in 0..4 {
                lhs = lhs.add(&scaled(&x[j][k], r[(i, j)]));
                rhs = rhs.add(&scaled(&y[i][j], r[(j, k)]));
            }
            residual = residual.max(lhs.sub(&rhs).max_abs());
            scale = scale.max(lhs.max_abs()).max(rhs.max_abs());
        }
    }
    Ok(if scale > 0.0 { residual / scale } else { residual })
}

fn scaled(op: &QuantumOperator, s: Complex64) -> QuantumOperator {
    QuantumOperator::from_matrix(op.sites(), op.matrix() * s).expect("same dimension")
}

/// `B(lambda_1) ... B(lambda_n) |up>` for any number of rapidities.
pub fn b_product(rapidities: &[Complex64], spec: &LatticeSpec) -> Result<StateVector> {
    check_vector_size(spec.sites())?;
    rapidities
        .iter()
        .try_fold(StateVector::all_up(spec.sites()), |v, &lam| {
            Monodromy::new(lam, spec)?.apply(Entry::B, &v)
        })
}

/// Column vector of the dual state `<up| C(lambda_1) ... C(lambda_n)`.
pub fn c_product_dual(rapidities: &[Complex64], spec: &LatticeSpec) -> Result<StateVector> {
    check_vector_size(spec.sites())?;
    rapidities
        .iter()
        .try_fold(StateVector::all_up(spec.sites()), |v, &lam| {
            Monodromy::new(lam, spec)?.apply_transposed(Entry::C, &v)
        })
}

/// Bethe state `|N> = B(lambda_1) ... B(lambda_N) |up>` with `N = M/2`.
pub fn bethe_state(roots: &[Complex64], spec: &LatticeSpec) -> Result<StateVector> {
    let n = spec.half()?;
    if roots.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: roots.len(),
        });
    }
    b_product(roots, spec)
}

/// Dual Bethe state `<N| = <up| C(lambda_1) ... C(lambda_N)` as a column.
pub fn dual_bethe_state(roots: &[Complex64], spec: &LatticeSpec) -> Result<StateVector> {
    let n = spec.half()?;
    if roots.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: roots.len(),
        });
    }
    c_product_dual(roots, spec)
}
