use vgsst_core::generate::fig3;
use vgsst_core::oracle::{build_ilp, export_lp, DEFAULT_ILP_VERTEX_CAP};

const FIG3_LP: &str = include_str!("golden/fig3.lp");

#[test]
fn fig3_lp_matches_golden_file() {
    let model = build_ilp(&fig3(), DEFAULT_ILP_VERTEX_CAP).unwrap();
    let text = export_lp(&model);
    if std::env::var_os("VGSST_BLESS").is_some() {
        std::fs::write(
            concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/fig3.lp"),
            &text,
        )
        .unwrap();
        return;
    }
    assert_eq!(text, FIG3_LP);
}
