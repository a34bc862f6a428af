use std::env;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let out = PathBuf::from(env::var("OUT_DIR").unwrap()).join("skewtorsion.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("SKEWTORSION_H".into()),
        cpp_compat: true,
        enumeration: cbindgen::EnumConfig { rename_variants: cbindgen::RenameRule::ScreamingSnakeCase, ..Default::default() },
        ..Default::default()
    };
    let header = cbindgen::Builder::new().with_crate(&dir).with_config(config).generate().expect("cbindgen failed");
    header.write_to_file(&out);
    header.write_to_file(dir.join("include").join("skewtorsion.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
