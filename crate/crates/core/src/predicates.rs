//! The 4NAT, TwoPair and 2-NLin predicates, plus the exact arithmetization
//! of 4NAT over `Q(omega)`.

use crate::cyclo::CycloRational;
use crate::rational::{rat, Rational};
use crate::z3::Z3;

pub type QuadZ3 = [Z3; 4];

fn shifted(t: QuadZ3, shifts: QuadZ3) -> QuadZ3 {
    [
        t[0] + shifts[0],
        t[1] + shifts[1],
        t[2] + shifts[2],
        t[3] + shifts[3],
    ]
}

fn presence(t: &[Z3]) -> [bool; 3] {
    let mut seen = [false; 3];
    for v in t {
        seen[v.value() as usize] = true;
    }
    seen
}

/// True iff some element of Z3 is absent from `(t_i + k_i)`.
pub fn eval_4nat(t: QuadZ3, shifts: QuadZ3) -> bool {
    presence(&shifted(t, shifts)).iter().any(|p| !p)
}

/// 4NAT with zero shifts.
pub fn nat4(t: QuadZ3) -> bool {
    presence(&t).iter().any(|p| !p)
}

/// True iff the multiset of inputs is `{a, a, b, b}` with `a != b`.
pub fn eval_twopair(t: QuadZ3) -> bool {
    let mut counts = [0u8; 3];
    for v in t {
        counts[v.value() as usize] += 1;
    }
    let mut sorted = counts;
    sorted.sort_unstable();
    sorted == [0, 2, 2]
}

/// True iff `v1 - v2 != a (mod 3)`.
pub fn eval_2nlin(v1: Z3, v2: Z3, a: Z3) -> bool {
    v1 - v2 != a
}

/// Evaluates
/// `5/9 + 1/9 sum_{i != j} w^a_i conj(w)^a_j
///      - 1/9 sum_{i<j<k} w^(a_i+a_j+a_k) - 1/9 sum_{i<j<k} conj(w)^(a_i+a_j+a_k)`
/// in `Q(omega)`.
pub fn arithmetize_4nat_exact(t: QuadZ3) -> CycloRational {
    let ninth = rat(1, 9);
    let mut acc = CycloRational::from_rational(rat(5, 9));
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                acc += &CycloRational::omega_pow(t[i] - t[j]).scale(&ninth);
            }
        }
    }
    let minus_ninth = rat(-1, 9);
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                let s = t[i] + t[j] + t[k];
                acc += &CycloRational::omega_pow(s).scale(&minus_ninth);
                acc += &CycloRational::omega_pow(-s).scale(&minus_ninth);
            }
        }
    }
    acc
}

/// Real value of the arithmetization; the imaginary part is identically 0,
/// see [`arithmetize_4nat_exact`].
pub fn arithmetize_4nat(t: QuadZ3) -> Rational {
    arithmetize_4nat_exact(t).re()
}

/// All 81 tuples of `Z3^4` in index order.
pub fn all_quads() -> impl Iterator<Item = QuadZ3> {
    (0..81u8).map(|i| {
        [
            Z3::reduce((i / 27) as i64),
            Z3::reduce((i / 9) as i64),
            Z3::reduce((i / 3) as i64),
            Z3::reduce(i as i64),
        ]
    })
}
