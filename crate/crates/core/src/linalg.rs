//! Small dense linear algebra on stack arrays: LU determinants, the
//! generalized cross product, and a double-double orientation fallback.

/// Largest ambient dimension handled anywhere in the crate.
pub const MAX_DIM: usize = 10;

pub type Vector = [f64; MAX_DIM];

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant of the `m × m` row-major matrix stored in `a` (destroyed).
pub fn det_in_place(a: &mut [f64], m: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..m {
        let mut piv = col;
        let mut best = a[col * m + col].abs();
        for r in col + 1..m {
            let v = a[r * m + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..m {
                a.swap(col * m + c, piv * m + c);
            }
            det = -det;
        }
        let d = a[col * m + col];
        det *= d;
        for r in col + 1..m {
            let f = a[r * m + col] / d;
            if f != 0.0 {
                for c in col + 1..m {
                    a[r * m + c] -= f * a[col * m + c];
                }
            }
        }
    }
    det
}

/// Vector orthogonal to the `n − 1` rows of `edges` (each of length `n`),
/// with Euclidean norm equal to the `(n−1)`-volume of the parallelotope they
/// span. Component `i` is the signed minor obtained by deleting column `i`.
pub fn generalized_cross(edges: &[Vector], n: usize) -> Vector {
    debug_assert!(edges.len() + 1 == n);
    let mut out = [0.0; MAX_DIM];
    if n == 1 {
        out[0] = 1.0;
        return out;
    }
    let m = n - 1;
    let mut buf = [0.0; MAX_DIM * MAX_DIM];
    for (i, o) in out.iter_mut().enumerate().take(n) {
        for (r, e) in edges.iter().enumerate() {
            let mut c2 = 0;
            for (c, v) in e.iter().enumerate().take(n) {
                if c != i {
                    buf[r * m + c2] = *v;
                    c2 += 1;
                }
            }
        }
        let d = det_in_place(&mut buf[..m * m], m);
        *o = if i % 2 == 0 { d } else { -d };
    }
    out
}

/// Unit vector orthogonal to the `n − 1` rows of `edges`, by modified
/// Gram–Schmidt followed by projecting out the coordinate axis with the
/// largest residual. The sign is arbitrary. Cheaper than
/// [`generalized_cross`] but carries no volume information.
pub fn unit_normal<const D: usize>(edges: &[[f64; D]], n: usize) -> [f64; D] {
    let mut q = [[0.0; D]; D];
    let mut m = 0;
    for e in edges {
        let mut v = *e;
        for _ in 0..2 {
            for b in &q[..m] {
                let c = dot(&v[..n], &b[..n]);
                for j in 0..n {
                    v[j] -= c * b[j];
                }
            }
        }
        let len = norm(&v[..n]);
        if len > 0.0 {
            for x in &mut v[..n] {
                *x /= len;
            }
            q[m] = v;
            m += 1;
        }
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for k in 0..n {
        let r = 1.0 - q[..m].iter().map(|b| b[k] * b[k]).sum::<f64>();
        if r > best.0 {
            best = (r, k);
        }
    }
    let mut out = [0.0; D];
    out[best.1] = 1.0;
    for _ in 0..2 {
        for b in &q[..m] {
            let c = dot(&out[..n], &b[..n]);
            for j in 0..n {
                out[j] -= c * b[j];
            }
        }
    }
    let len = norm(&out[..n]);
    out[..n].iter_mut().for_each(|x| *x /= len);
    out
}

// --- double-double arithmetic -------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_diff(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, -b);
        Dd { hi, lo }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd { hi: q1, lo: 0.0 }));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd { hi: q2, lo: 0.0 }));
        let q3 = r.hi / o.hi;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }.add(Dd { hi: q3, lo: 0.0 })
    }

    fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

/// Sign of `det[v_1 − x, …, v_n − x]` evaluated with double-double LU.
/// Returns `0.0` only when the elimination finds an exactly zero pivot.
pub fn orientation_dd(vertices: &[&[f64]], x: &[f64], n: usize) -> f64 {
    let mut a = [Dd::ZERO; MAX_DIM * MAX_DIM];
    for (r, v) in vertices.iter().enumerate() {
        for c in 0..n {
            a[r * n + c] = Dd::from_diff(v[c], x[c]);
        }
    }
    let mut sign = 1.0;
    let mut det = Dd { hi: 1.0, lo: 0.0 };
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs_hi();
        for r in col + 1..n {
            let v = a[r * n + col].abs_hi();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            sign = -sign;
        }
        let d = a[col * n + col];
        det = det.mul(d);
        for r in col + 1..n {
            let f = a[r * n + col].div(d);
            for c in col + 1..n {
                a[r * n + c] = a[r * n + c].sub(f.mul(a[col * n + c]));
            }
        }
    }
    if det.hi == 0.0 {
        0.0
    } else {
        sign * det.hi.signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        let mut o = [0.0; MAX_DIM];
        o[..xs.len()].copy_from_slice(xs);
        o
    }

    #[test]
    fn det_known() {
        let mut a = [2.0, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 2.0];
        assert!((det_in_place(&mut a, 3) - 6.0).abs() < 1e-14);
        let mut s = [0.0, 1.0, 1.0, 0.0];
        assert_eq!(det_in_place(&mut s, 2), -1.0);
    }

    #[test]
    fn cross_is_orthogonal_with_volume_norm() {
        let e = [v(&[1.0, 2.0, 0.5]), v(&[-1.0, 0.3, 2.0])];
        let c = generalized_cross(&e, 3);
        assert!(dot(&c[..3], &e[0][..3]).abs() < 1e-14);
        assert!(dot(&c[..3], &e[1][..3]).abs() < 1e-14);
        // |a × b|
        let x = [2.0 * 2.0 - 0.5 * 0.3, 0.5 * -1.0 - 1.0 * 2.0, 1.0 * 0.3 - 2.0 * -1.0];
        assert!((norm(&c[..3]) - norm(&x)).abs() < 1e-13);
    }

    #[test]
    fn unit_normal_agrees_with_cross_direction() {
        let e = [v(&[1.0, 2.0, 0.5, 0.0]), v(&[-1.0, 0.3, 2.0, 1.0]), v(&[0.2, 0.1, -0.4, 3.0])];
        let c = generalized_cross(&e, 4);
        let u = unit_normal(&e, 4);
        assert!((norm(&u[..4]) - 1.0).abs() < 1e-15);
        let cos = dot(&u[..4], &c[..4]) / norm(&c[..4]);
        assert!((cos.abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dd_orientation_resolves_tiny_offsets() {
        // plane z = 0 through three points, query just above by 1e-30
        let a = [0.1, 0.2, 0.0];
        let b = [1.0, 0.0, 0.0];
        let c = [0.0, 1.0, 0.0];
        let up = orientation_dd(&[&a, &b, &c], &[0.3, 0.3, 1e-30], 3);
        let down = orientation_dd(&[&a, &b, &c], &[0.3, 0.3, -1e-30], 3);
        assert!(up != 0.0 && down != 0.0);
        assert_eq!(up, -down);
    }
}
