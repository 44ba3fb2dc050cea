//! Prints a synthetic instance as JSON.
//!
//! ```text
//! cargo run -p spm-core --example generate_instance -- <inliers> <outliers> <noise> <seed>
//! ```

use spm_core::bench::gen_synthetic;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() != 4 {
        eprintln!("usage: generate_instance <inliers> <outliers> <noise> <seed>");
        std::process::exit(1);
    }
    let inliers = args[0].parse().expect("inliers");
    let outliers = args[1].parse().expect("outliers");
    let noise = args[2].parse().expect("noise");
    let seed = args[3].parse().expect("seed");
    match gen_synthetic(inliers, outliers, noise, seed) {
        Ok(inst) => println!("{}", inst.to_json()),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
