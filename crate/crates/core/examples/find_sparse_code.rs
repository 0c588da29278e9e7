//! Searches for small fixed-weight codes whose full-length isolation
//! capacity reaches a target, then certifies the result with the
//! brute-force oracle and prints it in the `URSC 1` format.
//!
//! usage: find_sparse_code <n> <weight> <t> <capacity> [seed]
//!
//! Columns are drawn greedily: a candidate is kept when no slipped cyclic
//! shift of any other column covers more than `(weight - 1) / (capacity - 1)`
//! of its ones and vice versa, which makes `capacity - 1` competitors unable
//! to cover all `weight` ones.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ursc::codes::{certified_capacity, CodeHeader, CodeMatrix};
use ursc::{BitVector, Rational};

fn max_cover(a: &BitVector, b: &BitVector) -> usize {
    let slipped = b.slipped();
    (0..a.len() as i64)
        .map(|s| (a & &slipped.cyclic_shift(s)).weight())
        .max()
        .unwrap_or(0)
}

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let [n, weight, t, capacity] = args[..4] else {
        eprintln!("usage: find_sparse_code <n> <weight> <t> <capacity> [seed]");
        std::process::exit(2);
    };
    let seed = args.get(4).copied().unwrap_or(1) as u64;
    let allowed = (weight - 1) / (capacity - 1).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for attempt in 0..1000 {
        let mut cols: Vec<BitVector> = Vec::new();
        let mut tries = 0;
        while cols.len() < n && tries < 20_000 {
            tries += 1;
            let ones = sample(&mut rng, t, weight).into_vec();
            let cand = BitVector::from_ones(t, &ones).unwrap();
            let ok = cols
                .iter()
                .all(|c| max_cover(&cand, c) <= allowed && max_cover(c, &cand) <= allowed);
            if ok {
                cols.push(cand);
            }
        }
        if cols.len() < n {
            eprintln!("attempt {attempt}: stuck at {} columns", cols.len());
            continue;
        }
        let header = CodeHeader {
            c: Rational::from_integer(64),
            ..CodeHeader::manual(n, t)
        };
        let m = CodeMatrix::new(header, cols).unwrap();
        let got = certified_capacity(&m, u128::MAX);
        eprintln!("attempt {attempt}: certified capacity {got}");
        if got >= capacity {
            print!("{}", m.to_text());
            return;
        }
    }
    eprintln!("no code found");
    std::process::exit(1);
}
