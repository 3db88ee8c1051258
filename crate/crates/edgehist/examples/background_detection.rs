//! Multi-scale background detection on its own: prints the window the
//! detector settles on at each parameter setting.
//!
//! ```text
//! cargo run --example background_detection [-- input.png]
//! ```

use edgehist::{detect_background, load_image, BackgroundParams, Image, Picture};

fn synthetic_page() -> Image {
    let (m, n) = (200, 160);
    let mut img = Image::filled(m, n, 0.0);
    for r in 0..m {
        for c in 0..n {
            // Paper with slight vignetting and scattered print.
            let v = 246.0 + 6.0 * (1.0 - (r as f64 / m as f64));
            img.set(r, c, v.min(252.0));
        }
    }
    for (top, left, h, w) in [(30usize, 20usize, 14usize, 110usize), (90, 30, 12, 100)] {
        for r in top..top + h {
            for c in left..left + w {
                img.set(r, c, 30.0);
            }
        }
    }
    img
}

fn main() -> edgehist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let gray = match args.as_slice() {
        [input] => match load_image(input)? {
            Picture::Gray(img) => img,
            Picture::Rgb(img) => img.to_gray_mean(),
        },
        [] => synthetic_page(),
        _ => {
            eprintln!("usage: background_detection [input]");
            std::process::exit(2);
        }
    };

    for max_std in [1.0, 3.0, 10.0] {
        let result = detect_background(&gray, &BackgroundParams { max_std });
        println!(
            "max window std {max_std:>4}: level {:.3} from {}x{} window at ({}, {}), window std {:.4}",
            result.alpha,
            result.window_size,
            result.window_size,
            result.window_row,
            result.window_col,
            result.window_std,
        );
    }
    Ok(())
}
