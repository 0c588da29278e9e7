//! Finds the smallest `c` on a grid for which the Las Vegas construction
//! succeeds within a fixed iteration budget for most seeds.
//!
//! usage: calibrate [n] [max_iters] [seeds] [grid_step] [c_min]
//!
//! Defaults: n = 8, 20 iterations, 10 seeds, grid `c = c_min + 16 j` with
//! `c_min = 0`. Seed `s` starts its loop at `1000 * s` so the loops never
//! share samples. A grid point is abandoned once too many seeds have failed
//! for it to qualify. Prints one line per grid point and stops at the first
//! `c` where at least 90% of the seeds succeed.

use std::time::Instant;

use ursc::codes::{construct_ursc, ConstructionParams};
use ursc::Rational;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let arg = |i: usize, d: u64| args.get(i).copied().unwrap_or(d);
    let n = arg(0, 8) as usize;
    let max_iters = arg(1, 20) as usize;
    let seeds = arg(2, 10);
    let step = arg(3, 16) as i64;
    let c_min = arg(4, 0) as i64;
    let need = (seeds as usize * 9).div_ceil(10);

    println!("n={n} alpha=1 eps=1/2 max_iters={max_iters} seeds={seeds}");
    println!("c,t,successes,iterations,seconds");
    for j in 1..=64 {
        let c = Rational::from_integer(c_min + step * j);
        let start = Instant::now();
        let mut ok = 0;
        let mut iterations = Vec::new();
        let mut t = 0;
        for s in 0..seeds {
            let p = ConstructionParams::new(
                n,
                Rational::from_integer(1),
                Rational::new(1, 2),
                c,
                1000 * s,
            )
            .expect("valid parameters");
            t = p.t;
            match construct_ursc(&p, max_iters) {
                Ok(done) => {
                    ok += 1;
                    iterations.push(done.iterations.to_string());
                }
                Err(_) => iterations.push("-".into()),
            }
            if iterations.len() - ok > seeds as usize - need {
                break;
            }
        }
        println!(
            "{c},{t},{ok},{},{:.2}",
            iterations.join(" "),
            start.elapsed().as_secs_f64()
        );
        if ok >= need {
            println!("smallest c: {c}");
            return;
        }
    }
    println!("no c on the grid qualified");
}
