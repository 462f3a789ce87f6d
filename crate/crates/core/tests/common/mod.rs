#![allow(dead_code)]

use hankel_recon::{GaussRat, TruncSeries, UniPoly};
use rand::Rng;

pub fn gint(re: i64, im: i64) -> GaussRat {
    GaussRat::gaussian(re, im)
}

/// Gaussian integer with both parts in `[-b, b]`.
pub fn random_gint<R: Rng>(rng: &mut R, b: i64) -> GaussRat {
    gint(rng.gen_range(-b..=b), rng.gen_range(-b..=b))
}

pub fn random_nonzero_gint<R: Rng>(rng: &mut R, b: i64) -> GaussRat {
    loop {
        let x = random_gint(rng, b);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Coprime `(P, Q)` with `deg P < deg Q = d`, `Q(0) = 1` and Gaussian
/// integer coefficients in `[-5, 5]`.
pub fn random_coprime_pair<R: Rng>(rng: &mut R, d: usize) -> (UniPoly<GaussRat>, UniPoly<GaussRat>) {
    loop {
        let mut q: Vec<GaussRat> = vec![GaussRat::from_int(1)];
        q.extend((1..d).map(|_| random_gint(rng, 5)));
        q.push(random_nonzero_gint(rng, 5));
        let dp = rng.gen_range(0..d);
        let mut p: Vec<GaussRat> = (0..dp).map(|_| random_gint(rng, 5)).collect();
        p.push(random_nonzero_gint(rng, 5));
        let (p, q) = (UniPoly::new("z", p), UniPoly::new("z", q));
        if p.gcd(&q).degree() == Some(0) {
            return (p, q);
        }
    }
}

/// First `n` Taylor coefficients of `p/q`, by the convolution recurrence.
pub fn taylor(p: &UniPoly<GaussRat>, q: &UniPoly<GaussRat>, n: usize) -> TruncSeries<GaussRat> {
    let q0 = q.coeff(0).inv().expect("q(0) != 0");
    let mut c: Vec<GaussRat> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = p.coeff(k);
        for i in 1..=k {
            acc = &acc - &(&q.coeff(i) * &c[k - i]);
        }
        c.push(&acc * &q0);
    }
    TruncSeries::new("z", c)
}

/// Determinant by Laplace expansion; only for small matrices.
pub fn cofactor_det(a: &[Vec<GaussRat>]) -> GaussRat {
    let n = a.len();
    if n == 0 {
        return GaussRat::from_int(1);
    }
    let mut acc = GaussRat::from_int(0);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GaussRat>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &a[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// `A(s, m)` by Gaussian elimination over the field, independent of the
/// fraction-free kernel. `s = -1` selects the bordered matrix; `m = -1`
/// gives 1.
pub fn gauss_det(c: &[GaussRat], s: i64, m: i64) -> GaussRat {
    if m < 0 {
        return GaussRat::from_int(1);
    }
    let m = m as usize;
    let entry = |k: i64| if k < 0 { GaussRat::from_int(1) } else { c[k as usize].clone() };
    let mut a: Vec<Vec<GaussRat>> =
        (0..=m).map(|i| (0..=m).map(|j| entry(s + (i + j) as i64)).collect()).collect();
    let mut det = GaussRat::from_int(1);
    for k in 0..=m {
        let Some(p) = (k..=m).find(|&i| !a[i][k].is_zero()) else {
            return GaussRat::from_int(0);
        };
        if p != k {
            a.swap(p, k);
            det = -&det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().expect("pivot");
        for i in k + 1..=m {
            let f = &a[i][k] * &inv;
            for j in k..=m {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}
