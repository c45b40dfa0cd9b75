//! Small dense complex matrices (at most 16×16 for operators, 256×256 for
//! density matrices) stored row-major.

use num_complex::Complex;

use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major complex entries.
    ///
    /// Panics if `data.len()` is not a perfect square.
    pub fn from_vec(data: Vec<Complex<T>>) -> Self {
        let dim = (data.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, data.len(), "matrix data must be square");
        Self { dim, data }
    }

    /// Builds a matrix from row-major real entries given as `f64`.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend(row.iter().map(|&x| Complex::new(T::lit(x), T::zero())));
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`; `self` occupies the high-order index bits.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let s = self.data[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = s * rhs.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Largest entry-wise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.data[i * self.dim + i]
        })
    }
}

/// Applies the `2^k × 2^k` operator `op` to the index bits `bits` of `amps`,
/// in place. `bits[0]` is the most significant bit of the operator's local
/// index, so a two-qubit operator with `bits = [a, b]` acts on `|x_a x_b⟩`.
///
/// The operator need not be unitary; this kernel also serves Kraus operators
/// and both sides of a density-matrix conjugation.
pub(crate) fn apply_local<T: Real>(amps: &mut [Complex<T>], bits: &[usize], op: &CMatrix<T>) {
    match bits.len() {
        1 => apply_fixed::<T, 2>(amps, bits, op),
        2 => apply_fixed::<T, 4>(amps, bits, op),
        3 => apply_fixed::<T, 8>(amps, bits, op),
        k => panic!("local operators act on 1 to 3 qubits, got {k}"),
    }
}

fn apply_fixed<T: Real, const L: usize>(amps: &mut [Complex<T>], bits: &[usize], op: &CMatrix<T>) {
    debug_assert_eq!(op.dim(), L);
    let k = bits.len();
    let mask = bits.iter().fold(0usize, |m, &b| m | (1 << b));
    let mut offsets = [0usize; L];
    for (l, off) in offsets.iter_mut().enumerate() {
        for (j, &b) in bits.iter().enumerate() {
            if (l >> (k - 1 - j)) & 1 == 1 {
                *off |= 1 << b;
            }
        }
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut m = [[zero; L]; L];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = op.get(r, c);
        }
    }

    let mut gathered = [zero; L];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for l in 0..L {
            gathered[l] = amps[base | offsets[l]];
        }
        for r in 0..L {
            let mut acc = zero;
            for c in 0..L {
                acc = acc + m[r][c] * gathered[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
}
