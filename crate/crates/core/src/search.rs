//! One-dimensional maximization helpers used by the sphere scans.

use crate::scalar::Real;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)` over all points visited, including the end points,
/// so the result is never worse than the bracket it was given.
pub fn golden_max<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, tol: T) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, f(lo));
    let fb = f(hi);
    if fb > best.1 {
        best = (hi, fb);
    }
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Result of a periodic grid scan followed by local refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMax<T> {
    pub arg: T,
    pub value: T,
}

/// Maximize a periodic function over `[start, start + period)`.
///
/// `n` equispaced samples are taken, then the `refine` largest local maxima
/// of the grid are polished by golden-section search on their two adjacent
/// cells until the bracket is shorter than `tol`. Ties keep the lowest grid
/// index.
pub fn periodic_max<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    start: T,
    period: T,
    n: usize,
    refine: usize,
    tol: T,
) -> ScanMax<T> {
    assert!(n >= 3, "grid needs at least three points");
    let step = period / T::from_usize_lossy(n);
    let values: Vec<T> = (0..n)
        .map(|j| f(start + step * T::from_usize_lossy(j)))
        .collect();

    let mut best = ScanMax {
        arg: start,
        value: values[0],
    };
    for (j, &v) in values.iter().enumerate() {
        if v > best.value {
            best = ScanMax {
                arg: start + step * T::from_usize_lossy(j),
                value: v,
            };
        }
    }
    if refine == 0 {
        return best;
    }

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&j| {
            let prev = values[(j + n - 1) % n];
            let next = values[(j + 1) % n];
            values[j] >= prev && values[j] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| {
        values[j]
            .partial_cmp(&values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    peaks.truncate(refine);

    for j in peaks {
        let centre = start + step * T::from_usize_lossy(j);
        let (arg, value) = golden_max(&mut f, centre - step, centre + step, tol);
        if value > best.value {
            best = ScanMax { arg, value };
        }
    }
    best
}
