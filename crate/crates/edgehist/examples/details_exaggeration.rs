//! Details exaggeration: split the image into a smooth base and a detail
//! residual, then amplify the residual.
//!
//! ```text
//! cargo run --example details_exaggeration [-- input.png output.png]
//! ```

use edgehist::pipeline::{exaggerate, exaggerate_color, PipelineConfig};
use edgehist::{load_image, save_image, Image, Picture};

fn synthetic_relief() -> Image {
    let (m, n) = (224, 224);
    let mut img = Image::filled(m, n, 0.0);
    for r in 0..m {
        for c in 0..n {
            let base = 120.0 + 50.0 * ((r as f64 / m as f64) - 0.5);
            // Faint embossing that exaggeration should bring out.
            let detail = 5.0 * ((r as f64 * 0.35).sin() + (c as f64 * 0.42).sin())
                + 3.0 * ((r + c) as f64 * 0.21).cos();
            img.set(r, c, (base + detail).clamp(0.0, 255.0));
        }
    }
    img
}

fn main() -> edgehist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = PipelineConfig {
        lambda: 25.0,
        sigma: 0.4,
        exaggeration: 2.0,
        ..PipelineConfig::default()
    };

    let (input, output_path) = match args.as_slice() {
        [input, output] => (load_image(input)?, output.clone()),
        [] => {
            let img = synthetic_relief();
            save_image(&img.clone().into(), "exaggeration_input.png")?;
            println!("wrote exaggeration_input.png");
            (Picture::Gray(img), "exaggeration_output.png".to_string())
        }
        _ => {
            eprintln!("usage: details_exaggeration [input output]");
            std::process::exit(2);
        }
    };

    let result = match &input {
        Picture::Gray(img) => Picture::Gray(exaggerate(img, &cfg)?),
        Picture::Rgb(img) => Picture::Rgb(exaggerate_color(img, &cfg)?),
    };
    save_image(&result, &output_path)?;
    println!(
        "wrote {output_path} (lambda = {}, sigma = {}, s = {})",
        cfg.lambda, cfg.sigma, cfg.exaggeration
    );
    Ok(())
}
