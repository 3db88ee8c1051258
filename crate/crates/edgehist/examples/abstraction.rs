//! Image abstraction: remove texture, keep object boundaries.
//!
//! ```text
//! cargo run --example abstraction [-- input.png output.png]
//! ```
//!
//! Without arguments a textured synthetic photo is generated and both
//! the input and the smoothed result are written to the current
//! directory.

use edgehist::pipeline::{smooth, smooth_color, PipelineConfig};
use edgehist::{load_image, save_image, Image, Picture};

fn synthetic_photo() -> Image {
    let (m, n) = (256, 256);
    let mut img = Image::filled(m, n, 0.0);
    for r in 0..m {
        for c in 0..n {
            // Two flat objects on a sky-like ramp, plus fine texture.
            let sky = 140.0 + 40.0 * (r as f64 / m as f64);
            let mut v = sky;
            if r > 150 && (40..130).contains(&c) {
                v = 70.0;
            }
            if (60..120).contains(&r) && (150..230).contains(&c) {
                v = 210.0;
            }
            v += 8.0 * ((r as f64 * 0.9).sin() * (c as f64 * 0.8).sin());
            img.set(r, c, v.clamp(0.0, 255.0));
        }
    }
    img
}

fn main() -> edgehist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = PipelineConfig {
        lambda: 15.0,
        sigma: 0.0,
        ..PipelineConfig::default()
    };

    let (input, output_path) = match args.as_slice() {
        [input, output] => (load_image(input)?, output.clone()),
        [] => {
            let img = synthetic_photo();
            save_image(&img.clone().into(), "abstraction_input.png")?;
            println!("wrote abstraction_input.png");
            (Picture::Gray(img), "abstraction_output.png".to_string())
        }
        _ => {
            eprintln!("usage: abstraction [input output]");
            std::process::exit(2);
        }
    };

    let result = match &input {
        Picture::Gray(img) => Picture::Gray(smooth(img, &cfg)?),
        Picture::Rgb(img) => Picture::Rgb(smooth_color(img, &cfg)?),
    };
    save_image(&result, &output_path)?;
    println!("wrote {output_path} (lambda = {}, {} outer iterations)", cfg.lambda, cfg.outer_iters);
    Ok(())
}
