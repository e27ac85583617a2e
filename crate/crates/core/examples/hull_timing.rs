use std::time::Instant;

use sphere_facets::hull::convex_hull;
use sphere_facets::{sample_sphere, RngStream};

fn main() {
    let only: Option<usize> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    for (n, m) in [(2, 3200), (3, 3200), (4, 3200), (5, 1000), (6, 400)] {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let reps = if only.is_some() { 2 } else { 20 };
        let mut facets = 0;
        for s in 0..reps {
            let c = sample_sphere(&RngStream::new(s, 0), n, m).unwrap();
            facets += convex_hull(&c).unwrap().facets.len();
        }
        println!("n={n} N={m}: {:?} per hull, {} facets", t.elapsed() / reps as u32, facets / reps as usize);
    }
}
