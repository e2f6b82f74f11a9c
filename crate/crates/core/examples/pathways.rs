//! Liouville pathways of a two-level system with their signs.
use twapert::pathways::{enumerate_pathways, PathwayCache};

fn main() {
    for n in 0..=3 {
        println!("order {n}: {} pathways end in (0,0)", enumerate_pathways(2, n, (0, 0), None).len());
    }
    print!("{}", PathwayCache::new(2, 2).dump());
}
