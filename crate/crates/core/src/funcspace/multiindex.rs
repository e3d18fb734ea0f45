//! Multi-indices `α ∈ N_0^N` and the small combinatorics built on them.

/// A multi-index.
pub type MultiIndex<const N: usize> = [usize; N];

pub fn order<const N: usize>(a: &MultiIndex<N>) -> usize {
    a.iter().sum()
}

/// All `α` with `|α| = k`, lexicographically descending in the first axis
/// (so `(k,0,..)` comes first).
pub fn of_degree<const N: usize>(k: usize) -> Vec<MultiIndex<N>> {
    let mut out = Vec::new();
    let mut cur = [0usize; N];
    fill(&mut cur, 0, k, &mut out);
    out
}

fn fill<const N: usize>(cur: &mut [usize; N], axis: usize, left: usize, out: &mut Vec<[usize; N]>) {
    if axis + 1 == N {
        cur[axis] = left;
        out.push(*cur);
        return;
    }
    for v in (0..=left).rev() {
        cur[axis] = v;
        fill(cur, axis + 1, left - v, out);
    }
}

/// All `α` with `|α| <= k`, by increasing order.
pub fn up_to<const N: usize>(k: usize) -> Vec<MultiIndex<N>> {
    (0..=k).flat_map(of_degree::<N>).collect()
}

/// Number of multi-indices with `|α| <= k`.
pub fn count_up_to(n: usize, k: usize) -> usize {
    // C(n + k, n)
    let mut c = 1usize;
    for i in 1..=n {
        c = c * (k + i) / i;
    }
    c
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `α!`.
pub fn alpha_factorial<const N: usize>(a: &MultiIndex<N>) -> f64 {
    a.iter().map(|&v| factorial(v)).product()
}

/// `x^α`.
pub fn power<const N: usize>(x: &[f64; N], a: &MultiIndex<N>) -> f64 {
    let mut v = 1.0;
    for i in 0..N {
        v *= x[i].powi(a[i] as i32);
    }
    v
}

/// `β <= α` componentwise.
pub fn le<const N: usize>(b: &MultiIndex<N>, a: &MultiIndex<N>) -> bool {
    (0..N).all(|i| b[i] <= a[i])
}

pub fn sub<const N: usize>(a: &MultiIndex<N>, b: &MultiIndex<N>) -> MultiIndex<N> {
    let mut c = *a;
    for i in 0..N {
        c[i] -= b[i];
    }
    c
}

pub fn add<const N: usize>(a: &MultiIndex<N>, b: &MultiIndex<N>) -> MultiIndex<N> {
    let mut c = *a;
    for i in 0..N {
        c[i] += b[i];
    }
    c
}

/// Unit multi-index `e_i`.
pub fn unit<const N: usize>(i: usize) -> MultiIndex<N> {
    let mut e = [0; N];
    e[i] = 1;
    e
}
