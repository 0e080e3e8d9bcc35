use agkit_core::amalgamation::{decide_amalgamation, Diagram};
use agkit_core::builtins::Catalog;
use agkit_core::variety::variety;
use agkit_core::{builtin, dump_algebra, load_algebra};

/// Compares with `tests/golden/<name>`, rewriting it instead when
/// `AGKIT_UPDATE_GOLDEN` is set.
fn golden(name: &str, actual: &str) {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("AGKIT_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name}");
}

#[test]
fn three_element_kleene_stone_dump() {
    let a = builtin("3_klst").unwrap();
    let text = dump_algebra(&a);
    golden("3_klst.json", &text);
    assert_eq!(dump_algebra(&load_algebra(&text).unwrap()), text);
}

#[test]
fn gautama_obstruction_certificate() {
    let c = Catalog::default();
    let d = Diagram::all(&builtin("2").unwrap(), &builtin("3_dblst").unwrap(), &builtin("3_klst").unwrap())
        .unwrap()
        .remove(0);
    let r = decide_amalgamation(&c, &variety("G").unwrap(), &d).unwrap();
    let mut json = serde_json::to_string_pretty(&r).unwrap();
    json.push('\n');
    golden("g_obstruction.json", &json);
}
