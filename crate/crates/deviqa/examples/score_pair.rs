//! Score one (reference, distorted) pair with every built-in index.
//!
//! Pass two image paths (8-bit PNG or BMP, same dimensions) to score real
//! files; with no arguments a synthetic pair is generated.
//!
//! ```bash
//! cargo run -p deviqa --example score_pair [-- reference.png distorted.png]
//! ```

use deviqa::synth::{add_gaussian_noise, checkerboard};
use deviqa::{builtin_indices, load_image, score_pair, DecodedImage};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (reference, distorted) = match args.as_slice() {
        [r, d] => (
            load_image(std::path::Path::new(r)).expect("decode reference"),
            load_image(std::path::Path::new(d)).expect("decode distorted"),
        ),
        [] => {
            println!("no paths given; scoring a synthetic 128x128 pair (noise sigma 15)\n");
            let base = checkerboard(128, 128, 16, 64.0, 192.0).unwrap();
            let noisy = add_gaussian_noise(&base, 15.0, 3);
            (DecodedImage::Gray(base), DecodedImage::Gray(noisy))
        }
        _ => {
            eprintln!("usage: score_pair [reference distorted]");
            std::process::exit(2);
        }
    };

    println!("{:10} {:>14}  polarity", "index", "score");
    for spec in builtin_indices() {
        match score_pair(&reference, &distorted, &spec) {
            Ok(score) => println!("{:10} {:14.8}  {}", score.index_name, score.value, spec.polarity),
            Err(e) => println!("{:10} failed: {e}", spec.name),
        }
    }
}
