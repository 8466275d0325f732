use nalgebra::DMatrix;
use num_complex::Complex64;

/// Permanent of a square matrix by Ryser's formula, iterating column subsets
/// in Gray-code order so each step updates the row sums with one column.
pub fn permanent(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "permanent needs a square matrix");
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    assert!(n < 32, "permanent of a {n}x{n} matrix is out of reach");
    let mut row_sums = vec![Complex64::default(); n];
    let mut total = Complex64::default();
    let mut gray: u32 = 0;
    for k in 1u32..(1 << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn naive(m: &DMatrix<Complex64>) -> Complex64 {
        fn rec(m: &DMatrix<Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
            if row == m.nrows() {
                return Complex64::new(1.0, 0.0);
            }
            let mut acc = Complex64::default();
            for c in 0..m.ncols() {
                if !used[c] {
                    used[c] = true;
                    acc += m[(row, c)] * rec(m, row + 1, used);
                    used[c] = false;
                }
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.ncols()])
    }

    #[test]
    fn all_ones_is_factorial() {
        for n in 1..7 {
            let m = DMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            assert_abs_diff_eq!(permanent(&m).re, fact, epsilon = 1e-9);
        }
    }

    #[test]
    fn matches_expansion_over_permutations() {
        for n in 1..6 {
            let m = DMatrix::from_fn(n, n, |i, j| {
                Complex64::new((i as f64 * 0.7 + j as f64).sin(), (i * j) as f64 * 0.3 - 0.2)
            });
            let (a, b) = (permanent(&m), naive(&m));
            assert!((a - b).norm() < 1e-10, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(permanent(&DMatrix::zeros(0, 0)), Complex64::new(1.0, 0.0));
    }
}
