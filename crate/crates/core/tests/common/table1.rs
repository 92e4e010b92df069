//! Literal loop evaluation of the multiplication-count table, one summation index at a time.

#![allow(dead_code)]

pub fn log2(mut b: i128) -> i128 {
    let mut l = 0;
    while b > 1 {
        b /= 2;
        l += 1;
    }
    l
}

fn fft_cost(b: i128) -> i128 {
    2 * b * log2(b)
}

fn householder(u: i128) -> i128 {
    let mut s = 0;
    for i in 1..=u {
        s += (i - 1) * (1 + 2 * (u - i));
    }
    s
}

fn triangle(u: i128) -> i128 {
    let mut s = 0;
    for i in 0..u {
        s += u - i;
    }
    s
}

/// `(preprocessing, precoding)` for the row named `alg`.
pub fn counts(alg: &str, b: i128, u: i128, k: i128, t: i128, m: i128) -> (i128, i128) {
    let sparse_precoding = 4 * t * k * u + t * fft_cost(b);
    match alg {
        "WF" => (
            2 * u.pow(3) + 6 * b * u * u - 2 * u * (u + 1) + 1,
            4 * t * b * u,
        ),
        "MRT" => (0, 4 * t * b * u),
        "LocalWF" => (
            u * fft_cost(b) + 2 * u.pow(3) + 6 * k * u * u - 2 * u * (u + 1) + 1,
            4 * t * m * u + t * fft_cost(b),
        ),
        "QR" => {
            let mut nested = 0;
            for i in 0..b - k {
                let mut inner = 0;
                for j in 0..u {
                    inner += (b - i - j) * (u - j);
                }
                nested += (b - i) * inner;
            }
            (
                u * fft_cost(b)
                    + 4 * householder(u)
                    + 12 * nested
                    + 4 * u * u
                    + 4 * k * triangle(u),
                sparse_precoding,
            )
        }
        "GBS" => {
            let mut s = 0;
            for j in 0..u {
                s += (k - j) * (u - j);
            }
            (
                u * fft_cost(b) + 12 * s + 4 * u * u + 4 * householder(u) + 4 * k * triangle(u),
                sparse_precoding,
            )
        }
        "SBP" => {
            let mut s = 0;
            for kk in 1..=k {
                s += kk.pow(3) + 3 * u * kk * kk - (u + 1) * kk + 1;
            }
            (
                u * fft_cost(b) + 4 * k * b * (u + 2) + 2 * u * k * (k + 1) + 2 * s,
                sparse_precoding,
            )
        }
        "1S-SBP" => (
            u * fft_cost(b)
                + u * (4 * b * (u + 2) + 2 * k.pow(3) + 6 * u * k * k - 2 * (u + 1) * k + 1),
            sparse_precoding,
        ),
        other => panic!("no table row {other}"),
    }
}
