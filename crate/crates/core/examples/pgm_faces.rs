//! Load a directory-per-subject PGM tree and split it per class.
//!
//! With no argument a tiny synthetic tree is written to a temporary directory.
//! Pass a directory to load real images: `cargo run --example pgm_faces -- <dir> 92 112`.

use std::path::PathBuf;

use kdda::dataset::{load_image_dir, split_per_class, PgmFormat, PgmImage, SplitSpec};

fn write_demo_tree(root: &std::path::Path) -> kdda::Result<()> {
    for subject in 1..=3u16 {
        let dir = root.join(format!("s{subject}"));
        std::fs::create_dir_all(&dir).map_err(|source| kdda::Error::Io {
            path: dir.clone(),
            source,
        })?;
        for shot in 0..4u16 {
            let pixels = (0..8 * 6).map(|p| (p * subject + shot * 7) % 256).collect();
            PgmImage::new(8, 6, 255, pixels)?
                .save(&dir.join(format!("{shot}.pgm")), PgmFormat::Raw)?;
        }
    }
    Ok(())
}

fn main() -> kdda::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (root, width, height) = match args.as_slice() {
        [dir, w, h] => (PathBuf::from(dir), w.parse().unwrap(), h.parse().unwrap()),
        _ => {
            let root = std::env::temp_dir().join("kdda-pgm-demo");
            write_demo_tree(&root)?;
            (root, 8, 6)
        }
    };

    let data = load_image_dir(&root, width, height)?;
    println!(
        "{} images, {} subjects, {} pixels each",
        data.len(),
        data.num_classes(),
        data.dim()
    );
    println!("per-class counts: {:?}", data.class_sizes());

    let (train, test) = split_per_class(&data, SplitSpec::new(2, 0, 0))?;
    println!("train: {:?}", train.names());
    println!("test:  {:?}", test.names());
    Ok(())
}
