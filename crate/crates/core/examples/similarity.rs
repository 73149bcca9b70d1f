//! Print the description-similarity matrix between two catalogs.
//!
//! Usage: cargo run --example similarity -- <source.catalog> <target.catalog>

use std::path::Path;

use migmap::catalog::load_catalog;
use migmap::simdoc::{csld, VectorSpace};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 3 {
        eprintln!("usage: similarity <source.catalog> <target.catalog>");
        std::process::exit(1);
    }
    let source = load_catalog(Path::new(&args[1])).expect("source catalog");
    let target = load_catalog(Path::new(&args[2])).expect("target catalog");
    let space = VectorSpace::build(source.descriptions().chain(target.descriptions()));

    print!("{:<28}", "");
    for t in target.entries() {
        print!("{:>14}", format!("{}/{}", t.name, t.arity()));
    }
    println!();
    for s in source.entries() {
        print!("{:<28}", format!("{}/{}", s.name, s.arity()));
        for t in target.entries() {
            let score = csld(&space, &[&s.description], &[&t.description]);
            print!("{score:>14.4}");
        }
        println!();
    }
}
