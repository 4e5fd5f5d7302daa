//! The hidden bijection of the toy action must stay private to its module.

use std::path::Path;

use walkdir::WalkDir;

#[test]
fn secret_bijection_confined_to_action_module() {
    let workspace = Path::new(env!("CARGO_MANIFEST_DIR")).join("..");
    let mut offenders = Vec::new();
    for entry in WalkDir::new(&workspace).into_iter().filter_map(|e| e.ok()) {
        let path = entry.path();
        let in_src = path.components().any(|c| c.as_os_str() == "src");
        if !in_src || path.extension().is_none_or(|e| e != "rs") {
            continue;
        }
        if path.ends_with("core/src/action.rs") {
            continue;
        }
        let text = std::fs::read_to_string(path).unwrap();
        if text.contains("secret_bijection") {
            offenders.push(path.display().to_string());
        }
    }
    assert!(offenders.is_empty(), "{offenders:?}");
}

#[test]
fn bijection_field_is_not_public() {
    let action = include_str!("../src/action.rs");
    assert!(action.contains("secret_bijection"));
    assert!(!action.contains("pub secret_bijection"));
    assert!(!action.contains("pub(crate) secret_bijection"));
}
