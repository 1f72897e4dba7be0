//! Exact arithmetic in ℤ[√2, i] and dyadic scaling.

use gatesat::ring::{phase_factor, RingElem, ScaledMatrix, ScaledRing};

fn main() {
    let u = RingElem::new(1, 2, 0, -1);
    let v = RingElem::new(0, 1, 1, 1);
    println!("u = {u}");
    println!("v = {v}");
    println!("u + v = {}", u + v);
    println!("u * v = {}", u * v);
    println!("|u|² = {}", u.norm_sq());
    println!("u * v ≈ {:?}", (u * v).to_complex(0));

    // e^{iπ/4} squared is i.
    let w = phase_factor(1);
    let w2 = w.checked_mul(&w).unwrap();
    println!("e^(iπ/4) = ({})/2^{}", w.value(), w.scale());
    println!("e^(iπ/4)² = ({})/2^{}", w2.value(), w2.scale());

    // 4/8 and 1/2 are the same dyadic value.
    let a = ScaledRing::new(RingElem::from_int(4), 3);
    let b = ScaledRing::new(RingElem::ONE, 1);
    println!("4/2^3 == 1/2^1: {}", a == b);

    let h2 = ScaledMatrix::from_rows(
        vec![
            vec![RingElem::SQRT2, RingElem::SQRT2],
            vec![RingElem::SQRT2, -RingElem::SQRT2],
        ],
        1,
    )
    .unwrap();
    let hh = h2.checked_mul(&h2).unwrap();
    println!(
        "H·H = identity: {}",
        hh.same_value(&ScaledMatrix::identity(2))
    );
}
