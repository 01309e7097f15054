//! Order-fixed reductions. Results never depend on the thread count.

use num_complex::Complex64;

const BLOCK: usize = 16;

pub(crate) fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= BLOCK {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub(crate) fn pairwise_sum_real(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_real(&xs[..mid]) + pairwise_sum_real(&xs[mid..])
}

/// Sums equal-length coefficient buffers pairwise, in index order.
pub(crate) fn pairwise_sum_buffers(mut bufs: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    if bufs.is_empty() {
        return Vec::new();
    }
    while bufs.len() > 1 {
        let mut next = Vec::with_capacity(bufs.len().div_ceil(2));
        let mut it = bufs.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                if b.len() > a.len() {
                    a.resize(b.len(), Complex64::new(0.0, 0.0));
                }
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        bufs = next;
    }
    bufs.pop().unwrap()
}

/// Splits `0..n` into a fixed number of contiguous chunks.
pub(crate) fn fixed_chunks(n: usize, chunks: usize) -> Vec<std::ops::Range<usize>> {
    let chunks = chunks.max(1).min(n.max(1));
    let size = n.div_ceil(chunks).max(1);
    (0..n).step_by(size).map(|s| s..(s + size).min(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<Complex64> = (0..1000).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        let s = pairwise_sum(&xs);
        assert_eq!(s, Complex64::new(499500.0, -499500.0));
    }

    #[test]
    fn chunks_cover_range() {
        let c = fixed_chunks(10, 3);
        assert_eq!(c, vec![0..4, 4..8, 8..10]);
        assert_eq!(fixed_chunks(0, 4).len(), 0);
    }

    #[test]
    fn buffers_of_unequal_length() {
        let b = vec![vec![Complex64::new(1.0, 0.0)], vec![Complex64::new(1.0, 0.0); 3]];
        assert_eq!(pairwise_sum_buffers(b).len(), 3);
    }
}
