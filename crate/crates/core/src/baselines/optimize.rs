//! One-dimensional maximization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_MAX_ITER: usize = 200;

/// Golden-section search for the maximum of `f` on `[a, b]`, stopping once
/// the bracket is shorter than `tol`. The endpoints are compared too, so a
/// maximum sitting on the boundary is not lost.
pub(crate) fn golden_section_max(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(mid, f(mid)), (a, f(a)), (b, f(b))]
        .into_iter()
        .fold((x1, f1), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Evenly spaced nodes `lo + (hi − lo) j / (n − 1)`, with the last node
/// exactly `hi`.
pub(crate) fn grid_nodes(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |j| if j + 1 == n { hi } else { lo + step * j as f64 })
}

/// Grid maximization refined by golden-section search around the best
/// `candidates` local maxima of the grid.
pub(crate) fn grid_refined_max(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_n: usize,
    candidates: usize,
    tol: f64,
) -> (f64, f64) {
    let xs: Vec<f64> = grid_nodes(lo, hi, grid_n).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let n = xs.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&j| {
            let left = j == 0 || ys[j] >= ys[j - 1];
            let right = j + 1 == n || ys[j] >= ys[j + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&i, &j| ys[j].total_cmp(&ys[i]).then(i.cmp(&j)));
    peaks.truncate(candidates.max(1));

    let mut best = (xs[peaks[0]], ys[peaks[0]]);
    for &j in &peaks {
        let a = xs[j.saturating_sub(1)];
        let b = xs[(j + 1).min(n - 1)];
        let cand = golden_section_max(f, a, b, tol);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}
