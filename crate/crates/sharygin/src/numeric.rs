//! Small root-finding helpers shared by the checkers.

/// Real roots of `a·x² + b·x + c`, computed without cancellation. Degrades to
/// the linear case when `a` is negligible against `b`.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return vec![];
    }
    if a.abs() <= 1e-15 * scale {
        return if b != 0.0 { vec![-c / b] } else { vec![] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-14 * b * b {
            return vec![-b / (2.0 * a)];
        }
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] }
}

/// Bisection on a bracketing interval until it shrinks below `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans `f` on a uniform grid and refines every sign change by bisection.
/// `f` may decline to evaluate (returning `None`) outside its domain; such
/// cells are skipped.
pub fn scan_roots<F: FnMut(f64) -> Option<f64>>(mut f: F, lo: f64, hi: f64, n: usize, xtol: f64) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    let mut roots = vec![];
    let mut prev = f(lo).map(|v| (lo, v));
    for i in 1..=n {
        let x = lo + step * i as f64;
        let cur = f(x).map(|v| (x, v));
        if let (Some((x0, v0)), Some((x1, v1))) = (prev, cur) {
            if v0 == 0.0 {
                roots.push(x0);
            } else if (v0 > 0.0) != (v1 > 0.0) && v1 != 0.0 {
                let g = |t: f64| f(t).unwrap_or(f64::NAN);
                roots.push(bisect(g, x0, x1, xtol));
            }
        }
        prev = cur;
    }
    roots
}

/// Nelder–Mead simplex minimization in two variables.
pub fn nelder_mead2<F: FnMut([f64; 2]) -> f64>(mut f: F, start: [f64; 2], step: f64, ftol: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut s = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut v = [f(s[0]), f(s[1]), f(s[2])];
    for _ in 0..max_iter {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        s = [s[idx[0]], s[idx[1]], s[idx[2]]];
        v = [v[idx[0]], v[idx[1]], v[idx[2]]];
        if (v[2] - v[0]).abs() <= ftol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let along = |k: f64| [c[0] + k * (s[2][0] - c[0]), c[1] + k * (s[2][1] - c[1])];
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let xc = if fr < v[2] { along(-0.5) } else { along(0.5) };
            let fc = f(xc);
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[0][0] + s[i][0]) / 2.0, (s[0][1] + s[i][1]) / 2.0];
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap();
    (s[best], v[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_stable() {
        let r = quadratic_roots(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-20);
        assert_eq!(quadratic_roots(1.0, 0.0, -4.0), vec![-2.0, 2.0]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert_eq!(quadratic_roots(0.0, 2.0, -4.0), vec![2.0]);
    }

    #[test]
    fn scan_finds_all_roots() {
        let r = scan_roots(|x| Some((x - 1.0) * (x + 2.0) * (x - 3.5)), -10.0, 10.0, 1000, 1e-13);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-2.0, 1.0, 3.5]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, _) = nelder_mead2(|p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2), [-1.0, 1.0], 0.5, 1e-20, 5000);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5);
    }
}
