//! Scan-through removal: erase back-page interference from a scanned
//! document while pinning background pixels to their original values.
//!
//! ```text
//! cargo run --example scan_through_removal [-- input.png output.png]
//! ```

use edgehist::pipeline::{descan, descan_color, PipelineConfig};
use edgehist::{load_image, save_image, Image, Norm, Picture, SolverConfig};

/// A page with dark front-side text bars and fainter, soft-edged
/// interference showing through from the back side.
fn synthetic_page() -> Image {
    let (m, n) = (256, 256);
    let mut img = Image::filled(m, n, 250.0);
    // Back-page interference: mid-gray with soft one-pixel borders.
    for (top, left, h, w) in [(20usize, 30usize, 12usize, 150usize), (150, 60, 10, 120)] {
        for r in top..top + h {
            for c in left..left + w {
                let border = r == top || r == top + h - 1 || c == left || c == left + w - 1;
                img.set(r, c, if border { 215.0 } else { 180.0 });
            }
        }
    }
    // Front-page ink.
    for (top, left, h, w) in [
        (50usize, 20usize, 10usize, 200usize),
        (80, 20, 10, 160),
        (110, 20, 10, 180),
        (200, 40, 12, 170),
    ] {
        for r in top..top + h {
            for c in left..left + w {
                img.set(r, c, 25.0);
            }
        }
    }
    img
}

fn main() -> edgehist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = PipelineConfig {
        lambda: 70.0,
        sigma: 0.0,
        solver: SolverConfig {
            norm: Norm::L1,
            ..SolverConfig::default()
        },
        ..PipelineConfig::default()
    };

    let (input, output_path) = match args.as_slice() {
        [input, output] => (load_image(input)?, output.clone()),
        [] => {
            let img = synthetic_page();
            save_image(&img.clone().into(), "descan_input.png")?;
            println!("wrote descan_input.png");
            (Picture::Gray(img), "descan_output.png".to_string())
        }
        _ => {
            eprintln!("usage: scan_through_removal [input output]");
            std::process::exit(2);
        }
    };

    let (result, background) = match &input {
        Picture::Gray(img) => {
            let (out, bg) = descan(img, &cfg)?;
            (Picture::Gray(out), bg)
        }
        Picture::Rgb(img) => {
            let (out, bg) = descan_color(img, &cfg)?;
            (Picture::Rgb(out), bg)
        }
    };
    save_image(&result, &output_path)?;
    println!(
        "wrote {output_path} (lambda = {}, background level = {:.2} from a {}x{} window at ({}, {}))",
        cfg.lambda,
        background.alpha,
        background.window_size,
        background.window_size,
        background.window_row,
        background.window_col,
    );
    Ok(())
}
