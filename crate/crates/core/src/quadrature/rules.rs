//! Gauss–Legendre rules on intervals and triangles.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// Weighted nodes of a composite rule: each interval between consecutive
/// breakpoints is cut into `panels` equal pieces carrying an `order`-point rule.
pub fn composite_nodes(breaks: &[f64], panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(order);
    let mut out = Vec::with_capacity((breaks.len().saturating_sub(1)) * panels * order);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in gx.iter().zip(&gw) {
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
    }
    out
}

pub type Point = [f64; 2];

/// Clips a convex polygon to the half-plane `a·x + b·y <= c`.
fn clip(poly: &[Point], a: f64, b: f64, c: f64) -> Vec<Point> {
    let side = |p: &Point| a * p[0] + b * p[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(&p), side(&q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn area(poly: &[Point]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}

/// Splits every polygon along the line `a·x + b·y = c`.
pub fn split_all(polys: Vec<Vec<Point>>, a: f64, b: f64, c: f64) -> Vec<Vec<Point>> {
    let mut out = Vec::with_capacity(2 * polys.len());
    for poly in polys {
        for piece in [clip(&poly, a, b, c), clip(&poly, -a, -b, -c)] {
            if piece.len() >= 3 && area(&piece) > 1e-12 {
                out.push(piece);
            }
        }
    }
    out
}

/// Fan triangulation of convex polygons.
pub fn triangulate(polys: &[Vec<Point>]) -> Vec<[Point; 3]> {
    let mut tris = Vec::new();
    for poly in polys {
        for i in 1..poly.len() - 1 {
            let t = [poly[0], poly[i], poly[i + 1]];
            if area(&t) > 1e-14 {
                tris.push(t);
            }
        }
    }
    tris
}

/// Midpoint subdivision of each triangle into `4^levels` pieces.
pub fn subdivide(tris: Vec<[Point; 3]>, levels: u32) -> Vec<[Point; 3]> {
    let mid = |p: Point, q: Point| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    let mut cur = tris;
    for _ in 0..levels {
        let mut next = Vec::with_capacity(4 * cur.len());
        for [a, b, c] in cur {
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.push([a, ab, ca]);
            next.push([ab, b, bc]);
            next.push([ca, bc, c]);
            next.push([ab, bc, ca]);
        }
        cur = next;
    }
    cur
}

/// Collapsed (Duffy) tensor Gauss–Legendre rule on each triangle:
/// `(u, v) ∈ [0,1]² ↦ A + u·((B − A) + v·(C − B))`, Jacobian `u·|det|`.
pub fn triangle_nodes(tris: &[[Point; 3]], order: usize) -> Vec<(f64, f64, f64)> {
    let (gx, gw) = gauss_legendre(order);
    let unit: Vec<(f64, f64)> = gx
        .iter()
        .zip(&gw)
        .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let mut out = Vec::with_capacity(tris.len() * order * order);
    for [a, b, c] in tris {
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        for &(u, wu) in &unit {
            for &(v, wv) in &unit {
                let x = a[0] + u * (e1[0] + v * e2[0]);
                let y = a[1] + u * (e1[1] + v * e2[1]);
                out.push((x, y, wu * wv * u * det));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 32, 64] {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert_abs_diff_eq!(got, exact, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn composite_integrates_exponential() {
        let nodes = composite_nodes(&[0.0, 0.5, 2.0], 3, 10);
        let got: f64 = nodes.iter().map(|(x, w)| w * x.exp()).sum();
        assert_abs_diff_eq!(got, 2f64.exp() - 1.0, epsilon = 1e-13);
    }

    #[test]
    fn triangle_rule_on_split_square() {
        let square = vec![vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]];
        let cells = split_all(square, 1.0, -1.0, 0.3);
        let cells = split_all(cells, 0.0, 1.0, 0.2);
        assert_eq!(cells.len(), 4);
        let tris = subdivide(triangulate(&cells), 1);
        let nodes = triangle_nodes(&tris, 8);
        let area: f64 = nodes.iter().map(|n| n.2).sum();
        assert_abs_diff_eq!(area, 4.0, epsilon = 1e-13);
        let got: f64 = nodes.iter().map(|(x, y, w)| w * (x * y + 1.0).exp()).sum();
        // inner integral over y is 2e·sinh(x)/x
        let outer = composite_nodes(&[-1.0, 1.0], 4, 16);
        let exact: f64 = outer
            .iter()
            .map(|(x, w)| {
                w * std::f64::consts::E * if *x == 0.0 { 2.0 } else { 2.0 * x.sinh() / x }
            })
            .sum();
        assert_abs_diff_eq!(got, exact, epsilon = 1e-12);
    }
}
