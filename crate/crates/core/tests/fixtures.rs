//! The JSON files under `fixtures/` must match what the constructors produce.
//! Set `UPDATE_FIXTURES=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use plusone::cocycle::Cocycle;
use plusone::flatpencil::Pencil;
use plusone::io::{parse_json, FromJson};
use plusone::projstruct::ProjectiveStructure;
use plusone::scalar::GaussianRational as Q;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn fixture_files_are_current() {
    let all = plusone::fixtures::all().unwrap();
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        fs::create_dir_all(dir()).unwrap();
        for (name, body) in &all {
            fs::write(dir().join(name), body).unwrap();
        }
    }
    for (name, body) in &all {
        let on_disk = fs::read_to_string(dir().join(name)).unwrap_or_else(|_| panic!("missing fixture {name}"));
        assert_eq!(&on_disk, body, "{name} is stale; rerun with UPDATE_FIXTURES=1");
    }
}

#[test]
fn fixture_files_parse() {
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let v = parse_json(&fs::read_to_string(&path).unwrap()).unwrap();
        if name.starts_with("structure_") {
            ProjectiveStructure::<Q>::from_json(&v).unwrap();
        } else if name.contains("pencil") {
            Pencil::<Q>::from_json(&v).unwrap();
        } else {
            let phi = Cocycle::<Q>::from_json(&v).unwrap();
            assert!(phi.is_normal(), "{name}");
        }
    }
}
