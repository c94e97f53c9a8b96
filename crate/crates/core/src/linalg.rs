//! Small fixed-size complex linear algebra shared by the qubit-level modules.

use nalgebra::{Complex, SMatrix, SVector};

pub type C64 = Complex<f64>;
pub type Vec2 = SVector<C64, 2>;
pub type Vec4 = SVector<C64, 4>;
pub type Vec8 = SVector<C64, 8>;
pub type Mat2 = SMatrix<C64, 2, 2>;
pub type Mat4 = SMatrix<C64, 4, 4>;
pub type Mat8 = SMatrix<C64, 8, 8>;

pub const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn outer<const N: usize>(a: &SVector<C64, N>, b: &SVector<C64, N>) -> SMatrix<C64, N, N> {
    a * b.adjoint()
}

pub fn trace<const N: usize>(m: &SMatrix<C64, N, N>) -> C64 {
    (0..N).map(|i| m[(i, i)]).sum()
}

pub fn kron<const A: usize, const B: usize, const AB: usize>(
    a: &SMatrix<C64, A, A>,
    b: &SMatrix<C64, B, B>,
) -> SMatrix<C64, AB, AB> {
    assert_eq!(A * B, AB);
    SMatrix::from_fn(|r, c| a[(r / B, c / B)] * b[(r % B, c % B)])
}

pub fn kron_vec<const A: usize, const B: usize, const AB: usize>(
    a: &SVector<C64, A>,
    b: &SVector<C64, B>,
) -> SVector<C64, AB> {
    assert_eq!(A * B, AB);
    SVector::from_fn(|r, _| a[r / B] * b[r % B])
}

/// `|<a|b>|` for unit vectors; equals 1 iff the states agree up to global phase.
pub fn phase_free_overlap<const N: usize>(a: &SVector<C64, N>, b: &SVector<C64, N>) -> f64 {
    a.dotc(b).norm()
}

/// Largest entry of `|A - B|`.
pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<C64, R, C>,
    b: &SMatrix<C64, R, C>,
) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<const N: usize>(m: &SMatrix<C64, N, N>) -> Vec<f64> {
    let h = (m + m.adjoint()) * re(0.5);
    let dynamic = nalgebra::DMatrix::from_iterator(N, N, h.iter().copied());
    let mut ev: Vec<f64> = dynamic.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn trace_distance<const N: usize>(a: &SMatrix<C64, N, N>, b: &SMatrix<C64, N, N>) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|e| e.abs()).sum::<f64>()
}

/// Traces out the trailing factor of dimension `B` from an `A*B` square matrix.
pub fn partial_trace_last<const A: usize, const B: usize, const AB: usize>(
    m: &SMatrix<C64, AB, AB>,
) -> SMatrix<C64, A, A> {
    assert_eq!(A * B, AB);
    SMatrix::from_fn(|r, c| (0..B).map(|k| m[(r * B + k, c * B + k)]).sum())
}

/// Traces out the leading factor of dimension `A` from an `A*B` square matrix.
pub fn partial_trace_first<const A: usize, const B: usize, const AB: usize>(
    m: &SMatrix<C64, AB, AB>,
) -> SMatrix<C64, B, B> {
    assert_eq!(A * B, AB);
    SMatrix::from_fn(|r, c| (0..A).map(|k| m[(k * B + r, k * B + c)]).sum())
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_paulis() {
        let zx: Mat4 = kron(&pauli_z(), &pauli_x());
        assert_eq!(zx[(0, 1)], re(1.0));
        assert_eq!(zx[(2, 3)], re(-1.0));
        assert_eq!(zx[(0, 0)], re(0.0));
    }

    #[test]
    fn partial_traces_of_product() {
        let a = Mat2::new(re(0.7), c(0.1, 0.2), c(0.1, -0.2), re(0.3));
        let b = Mat2::new(re(0.4), re(0.0), re(0.0), re(0.6));
        let ab: Mat4 = kron(&a, &b);
        let ta: Mat2 = partial_trace_last::<2, 2, 4>(&ab);
        let tb: Mat2 = partial_trace_first::<2, 2, 4>(&ab);
        assert!(max_abs_diff(&ta, &a) < 1e-15);
        assert!(max_abs_diff(&tb, &b) < 1e-15);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let h = Vec2::new(re(1.0), re(0.0));
        let v = Vec2::new(re(0.0), re(1.0));
        assert!((trace_distance(&outer(&h, &h), &outer(&v, &v)) - 1.0).abs() < 1e-12);
    }
}
