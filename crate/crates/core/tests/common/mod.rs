#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tconv_core::trop::{int, is_generic, rat, Rat, WeightMatrix};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random entry p/q with |p| <= 10^6 and q in 1..=7.
pub fn random_rat(rng: &mut StdRng) -> Rat {
    rat(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=7))
}

/// A generic r x n matrix with random rational entries; redraws on ties.
pub fn random_generic(rng: &mut StdRng, r: usize, n: usize) -> WeightMatrix {
    loop {
        let rows: Vec<Vec<Rat>> = (0..r).map(|_| (0..n).map(|_| random_rat(rng)).collect()).collect();
        let v = WeightMatrix::new(rows).expect("well-formed");
        if is_generic(&v) {
            return v;
        }
    }
}

/// Small integer entries, so ties and non-generic matrices are common.
pub fn random_small(rng: &mut StdRng, r: usize, n: usize, bound: i64) -> WeightMatrix {
    let rows: Vec<Vec<Rat>> = (0..r)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect())
        .collect();
    WeightMatrix::new(rows).expect("well-formed")
}

pub fn example() -> WeightMatrix {
    WeightMatrix::from_ints(&[vec![0, 3, 4], vec![0, 5, 2], vec![0, 1, 1], vec![0, 4, -1]]).unwrap()
}
