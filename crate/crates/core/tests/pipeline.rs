use agkit_core::builtins::Catalog;
use agkit_core::pipeline::verify_all;
use agkit_core::report::Report;
use agkit_core::{Builtin, FiniteAlgebra};

/// 3_dblst with `a' = a`.
fn tampered() -> FiniteAlgebra {
    let mut spec = Builtin::ThreeDblst.algebra().to_spec();
    spec.quote[1] = 1;
    FiniteAlgebra::from_spec(spec).unwrap()
}

#[test]
fn full_run_is_clean() {
    let r = verify_all(&Catalog::default());
    assert!(r.all_ok(), "{:?}", r.summary.failed_ids);
    assert_eq!(r.schema, 1);
    assert!(r.records.len() > 150);
}

#[test]
fn tampering_a_builtin_is_caught() {
    let clean = verify_all(&Catalog::default());
    let dirty = verify_all(&Catalog::default().replace(Builtin::ThreeDblst, tampered()));
    let flipped: Vec<&str> = dirty.records.iter().filter(|r| !r.ok).map(|r| r.id.as_str()).collect();
    println!("flipped: {flipped:?}");
    assert!(flipped.len() >= 3, "{flipped:?}");
    assert!(flipped.iter().any(|id| id.starts_with("base/")), "{flipped:?}");
    assert!(flipped.iter().any(|id| id.starts_with("ap/")), "{flipped:?}");
    assert!(clean.records.iter().all(|r| r.ok));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| verify_all(&Catalog::default())).to_canonical_json();
    let b = verify_all(&Catalog::default()).to_canonical_json();
    assert_eq!(a, b);
    let c = verify_all(&Catalog::default()).to_canonical_json();
    assert_eq!(b, c);
}

#[test]
fn canonical_report_round_trips() {
    let r = verify_all(&Catalog::default());
    let text = r.to_canonical_json();
    let back = Report::from_json(&text).unwrap();
    assert_eq!(back.to_canonical_json(), text);
    let md = r.to_markdown();
    assert!(md.contains("AG [no AP]") && md.contains("BA [AP]"));
}
