//! Polynomial root finding.
//!
//! The primary solver is the Aberth-Ehrlich simultaneous iteration started
//! from Newton-polygon radii. An eigenvalue solver on the balanced companion
//! matrix (shifted Hessenberg QR) is kept as an independent fallback and for
//! cross-checking.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::DensePoly;
use crate::scalar::{lit, to_f64, tol, Scalar};

/// Accepted scaled residual `|p(x)| / sum |c_i| |x|^i` for a returned root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

const MAX_ABERTH_ITERATIONS: usize = 1000;
const POLISH_STEPS: usize = 4;

/// All complex roots of a real polynomial of degree at least 1.
///
/// Multiple roots come back as clusters of nearby values.
pub fn poly_roots<F: Scalar>(p: &DensePoly<F>) -> Result<Vec<Complex<F>>> {
    if p.degree() == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let coeffs: Vec<Complex<F>> = p.coeffs().iter().map(|&c| Complex::new(c, F::zero())).collect();
    match aberth_roots(&coeffs) {
        Ok(roots) => Ok(roots),
        Err(Error::NonConvergence { .. }) => {
            let mut roots = companion_roots(p)?;
            for root in roots.iter_mut() {
                *root = polish(&coeffs, *root);
            }
            let worst = max_scaled_residual(&coeffs, &roots);
            if worst <= tol(ROOT_RESIDUAL_TOL, 64.0) {
                Ok(roots)
            } else {
                Err(Error::NonConvergence { iterations: MAX_ABERTH_ITERATIONS, residual: to_f64(worst) })
            }
        }
        Err(e) => Err(e),
    }
}

/// Aberth-Ehrlich iteration for a polynomial with complex coefficients
/// (`coeffs[i]` multiplies `x^i`).
pub fn aberth_roots<F: Scalar>(coeffs: &[Complex<F>]) -> Result<Vec<Complex<F>>> {
    let mut top = coeffs.len();
    while top > 0 && coeffs[top - 1].is_zero() {
        top -= 1;
    }
    if top < 2 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let lowest = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![Complex::zero(); lowest];
    let reduced = &coeffs[lowest..top];
    let degree = reduced.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }
    if degree == 1 {
        roots.push(-reduced[0] / reduced[1]);
        return Ok(roots);
    }

    let moduli: Vec<F> = reduced.iter().map(|c| c.norm()).collect();
    let mut z = initial_guesses(&moduli);
    let mut done = vec![false; degree];
    let eps = F::epsilon();
    let bound_factor = lit::<F>(4.0 * degree as f64) * eps;

    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (value, newton) = newton_ratio(reduced, zi);
            let scale = abs_eval(&moduli, zi.norm());
            if value.norm() <= bound_factor * scale {
                done[i] = true;
                continue;
            }
            let repulsion =
                (0..degree).filter(|&j| j != i).fold(Complex::zero(), |acc: Complex<F>, j| acc + (zi - z[j]).inv());
            let step = newton / (Complex::new(F::one(), F::zero()) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] = zi - step;
            if step.norm() <= eps * z[i].norm() {
                done[i] = true;
            }
        }
    }

    for zi in z.iter_mut() {
        *zi = polish(reduced, *zi);
    }
    let worst = max_scaled_residual(reduced, &z);
    if !(worst <= tol(ROOT_RESIDUAL_TOL, 64.0)) {
        return Err(Error::NonConvergence { iterations, residual: to_f64(worst) });
    }
    roots.extend(z);
    Ok(roots)
}

/// Eigenvalues of the balanced companion matrix of a real polynomial.
pub fn companion_roots<F: Scalar>(p: &DensePoly<F>) -> Result<Vec<Complex<F>>> {
    let c = p.coeffs();
    let n = p.degree();
    if n == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let lead = c[n];
    // 1-based Hessenberg storage.
    let mut a = vec![vec![F::zero(); n + 1]; n + 1];
    for k in 1..=n {
        a[1][k] = -c[n - k] / lead;
    }
    for j in 2..=n {
        a[j][j - 1] = F::one();
    }
    balance(&mut a, n);
    hessenberg_qr(&mut a, n)
}

/// Largest `|p(x)| / sum |c_i| |x|^i` over the given points.
pub fn max_scaled_residual<F: Scalar>(coeffs: &[Complex<F>], roots: &[Complex<F>]) -> F {
    let moduli: Vec<F> = coeffs.iter().map(|c| c.norm()).collect();
    roots
        .iter()
        .map(|&x| {
            let scale = abs_eval(&moduli, x.norm());
            if scale > F::zero() {
                horner(coeffs, x).norm() / scale
            } else {
                F::zero()
            }
        })
        .fold(F::zero(), F::max)
}

/// Monic coefficients of `prod (x - root)`.
pub fn expand_roots<F: Scalar>(roots: &[Complex<F>]) -> Vec<Complex<F>> {
    let mut coeffs = vec![Complex::new(F::one(), F::zero())];
    for &root in roots {
        let mut next = vec![Complex::zero(); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1] + c;
            next[i] = next[i] - root * c;
        }
        coeffs = next;
    }
    coeffs
}

fn horner<F: Scalar>(coeffs: &[Complex<F>], x: Complex<F>) -> Complex<F> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * x + c)
}

fn abs_eval<F: Scalar>(moduli: &[F], r: F) -> F {
    moduli.iter().rev().fold(F::zero(), |acc, &m| acc * r + m)
}

/// Returns `(p(x), p(x)/p'(x))`. For `|x| > 1` the ratio is computed from
/// the reversed polynomial to avoid overflow.
fn newton_ratio<F: Scalar>(coeffs: &[Complex<F>], x: Complex<F>) -> (Complex<F>, Complex<F>) {
    let n = coeffs.len() - 1;
    if x.norm() <= F::one() {
        let mut p = coeffs[n];
        let mut dp = Complex::zero();
        for &c in coeffs[..n].iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, p / dp)
    } else {
        let y = x.inv();
        let mut q = coeffs[0];
        let mut dq = Complex::zero();
        for &c in coeffs[1..].iter() {
            dq = dq * y + q;
            q = q * y + c;
        }
        let nf = Complex::new(lit::<F>(n as f64), F::zero());
        let ratio = x / (nf - y * dq / q);
        (horner(coeffs, x), ratio)
    }
}

/// Newton steps, each kept only if it lowers the residual.
fn polish<F: Scalar>(coeffs: &[Complex<F>], mut x: Complex<F>) -> Complex<F> {
    let mut best = horner(coeffs, x).norm();
    for _ in 0..POLISH_STEPS {
        if best.is_zero() {
            break;
        }
        let (_, step) = newton_ratio(coeffs, x);
        let candidate = x - step;
        let value = horner(coeffs, candidate).norm();
        if value < best && candidate.re.is_finite() && candidate.im.is_finite() {
            x = candidate;
            best = value;
        } else {
            break;
        }
    }
    x
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(i, ln |c_i|)`.
fn initial_guesses<F: Scalar>(moduli: &[F]) -> Vec<Complex<F>> {
    let n = moduli.len() - 1;
    let points: Vec<(usize, F)> =
        moduli.iter().enumerate().filter(|(_, m)| **m > F::zero()).map(|(i, m)| (i, m.ln())).collect();
    let mut hull: Vec<(usize, F)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (i1, y1) = hull[hull.len() - 2];
            let (i2, y2) = hull[hull.len() - 1];
            let cross = (lit::<F>((i2 - i1) as f64)) * (pt.1 - y1) - (y2 - y1) * lit::<F>((pt.0 - i1) as f64);
            if cross >= F::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let two_pi = F::TAU();
    let offset = lit::<F>(0.7);
    let mut guesses = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (k, yk) = w[0];
        let (l, yl) = w[1];
        let count = l - k;
        let radius = ((yk - yl) / lit::<F>(count as f64)).exp();
        for j in 0..count {
            let angle = two_pi * lit::<F>(j as f64) / lit::<F>(count as f64)
                + two_pi * lit::<F>(k as f64) / lit::<F>(n as f64)
                + offset;
            guesses.push(Complex::from_polar(radius, angle));
        }
    }
    guesses
}

fn balance<F: Scalar>(a: &mut [Vec<F>], n: usize) {
    let radix = lit::<F>(2.0);
    let sqrdx = radix * radix;
    let mut last = false;
    while !last {
        last = true;
        for i in 1..=n {
            let mut r = F::zero();
            let mut c = F::zero();
            for j in 1..=n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if c != F::zero() && r != F::zero() {
                let mut g = r / radix;
                let mut f = F::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < lit::<F>(0.95) * s {
                    last = false;
                    let g = F::one() / f;
                    for j in 1..=n {
                        a[i][j] = a[i][j] * g;
                    }
                    for j in 1..=n {
                        a[j][i] = a[j][i] * f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix (1-based storage) by the
/// Francis double-shift QR iteration. Destroys `a`.
#[allow(clippy::many_single_char_names)]
fn hessenberg_qr<F: Scalar>(a: &mut [Vec<F>], n: usize) -> Result<Vec<Complex<F>>> {
    let zero = F::zero();
    let sign = |a: F, b: F| if b >= zero { a.abs() } else { -a.abs() };
    let mut wr = vec![zero; n + 1];
    let mut wi = vec![zero; n + 1];

    let mut anorm = zero;
    for i in 1..=n {
        for j in (i.saturating_sub(1)).max(1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = zero;
    let (mut p, mut q, mut r): (F, F, F);
    let (mut x, mut y, mut z, mut w): (F, F, F, F);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == zero {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = zero;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = zero;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = lit::<F>(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x = x + t;
                    if q >= zero {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != zero {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = zero;
                        wi[nn] = zero;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::NonConvergence { iterations: its, residual: f64::NAN });
                    }
                    if its == 10 || its == 20 {
                        t = t + x;
                        for i in 1..=nn {
                            a[i][i] = a[i][i] - x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = lit::<F>(0.75) * s;
                        y = x;
                        w = lit::<F>(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        let r0 = x - z;
                        let s0 = y - z;
                        p = (r0 * s0 - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r0 - s0;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = zero;
                        if i != m + 2 {
                            a[i][i - 3] = zero;
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = zero;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != zero {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != zero {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p = p + r * a[k + 2][j];
                                    a[k + 2][j] = a[k + 2][j] - p * z;
                                }
                                a[k + 1][j] = a[k + 1][j] - p * y;
                                a[k][j] = a[k][j] - p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p = p + z * a[i][k + 2];
                                    a[i][k + 2] = a[i][k + 2] - p * r;
                                }
                                a[i][k + 1] = a[i][k + 1] - p * q;
                                a[i][k] = a[i][k] - p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}
