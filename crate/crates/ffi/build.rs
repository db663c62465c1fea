use std::env;
use std::fs;
use std::path::Path;

// Regenerates include/micromaser.h from the exported items. The header is
// committed; the write is skipped when the content is unchanged so
// downstream builds stay incremental.
fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR not set");
    let header = Path::new(&crate_dir).join("include").join("micromaser.h");

    let bindings = cbindgen::generate(&crate_dir).expect("header generation failed");
    let mut text = Vec::new();
    bindings.write(&mut text);

    let current = fs::read(&header).unwrap_or_default();
    if current != text {
        fs::create_dir_all(header.parent().unwrap()).expect("cannot create include dir");
        fs::write(&header, &text).expect("cannot write header");
    }

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
