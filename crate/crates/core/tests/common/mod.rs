//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use coex_core::effects::{Effect, IntervalEffectAlgebra};
use coex_core::groups::{GroupElement, HermitianMatrix};
use num_complex::Complex64;
use rand::Rng;

/// `Σ_{X⊆Z⊆A} (−1)^{|Z∖X|} β(Z)` over integer vectors, with β indexed by bitmask.
pub fn mobius_int(table: &[Vec<i64>], x: u32, a: u32) -> Vec<i64> {
    assert_eq!(x & !a, 0);
    let mut acc = vec![0i64; table[0].len()];
    for z in 0..table.len() as u32 {
        if z & x == x && z & !a == 0 {
            let sign = if (z & !x).count_ones().is_multiple_of(2) { 1 } else { -1 };
            for (s, v) in acc.iter_mut().zip(&table[z as usize]) {
                *s += sign * v;
            }
        }
    }
    acc
}

/// Entry list of the integer vector behind an effect.
pub fn ints(e: &Effect) -> Vec<i64> {
    e.value().as_int().expect("integer effect").entries().to_vec()
}

pub fn int(alg: &IntervalEffectAlgebra, v: &[i64]) -> Effect {
    alg.make_effect(GroupElement::int(v)).expect("effect")
}

/// Row-major 2×2 complex matrices, written out by hand.
pub type M2 = [[Complex64; 2]; 2];

pub fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn m2_adjoint(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// A random element of SU(2): `[[α, −β̄], [β, ᾱ]]` with `|α|² + |β|² = 1`.
pub fn random_su2(rng: &mut impl Rng) -> M2 {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if n > 1e-3 {
            let a = Complex64::new(v[0] / n, v[1] / n);
            let b = Complex64::new(v[2] / n, v[3] / n);
            return [[a, -b.conj()], [b, a.conj()]];
        }
    }
}

/// `U · diag(d) · U†` as a Hermitian effect.
pub fn conjugated_diagonal(alg: &IntervalEffectAlgebra, u: &M2, d: [f64; 2]) -> Effect {
    let z = Complex64::new(0.0, 0.0);
    let diag = [[Complex64::new(d[0], 0.0), z], [z, Complex64::new(d[1], 0.0)]];
    let m = m2_mul(&m2_mul(u, &diag), &m2_adjoint(u));
    let entries = vec![m[0][0], m[0][1], m[1][0], m[1][1]];
    let h = HermitianMatrix::new(2, entries, 1e-12).expect("Hermitian");
    alg.make_effect(GroupElement::Hermitian(h)).expect("effect")
}
