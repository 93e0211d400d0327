use ddu_milp::*;

fn one_row() -> MilpModel {
    let mut m = MilpModel::new("golden");
    let x = m
        .add_variable(VarSpec::continuous("x").bounds(0.0, 4.0))
        .unwrap();
    m.add_constraint([(x, 2.0)], Sense::Ge, 1.5, "cap").unwrap();
    m.add_objective(x, 3.0, "obj").unwrap();
    m
}

const GOLDEN_MPS: &str = "\
* columns: registry names
NAME          golden
ROWS
 N  COST
 G  R0000000
COLUMNS
    x             COST          3
    x             R0000000      2
RHS
    RHS           R0000000      1.5
BOUNDS
 UP BND           x             4
ENDATA
";

#[test]
fn single_row_mps_matches_golden() {
    assert_eq!(mps_string(&one_row()), GOLDEN_MPS);
}

#[test]
fn repeated_export_is_identical() {
    let m = one_row();
    let mut a = Vec::new();
    let mut b = Vec::new();
    export_mps(&m, &mut a).unwrap();
    export_mps(&m, &mut b).unwrap();
    assert_eq!(a, b);
    assert_eq!(lp_string(&m), lp_string(&m));
}

#[test]
fn binaries_are_bracketed_by_markers() {
    let mut m = MilpModel::new("ints");
    let x = m.add_variable(VarSpec::continuous("x")).unwrap();
    let w = m.add_variable(VarSpec::binary("w")).unwrap();
    m.add_constraint([(x, 1.0), (w, -5.0)], Sense::Le, 0.0, "gate")
        .unwrap();
    let s = mps_string(&m);
    let org = s.find("'INTORG'").expect("INTORG marker");
    let end = s.find("'INTEND'").expect("INTEND marker");
    let col = s.find("    w ").expect("binary column");
    assert!(org < col && col < end);
    let lp = lp_string(&m);
    assert!(lp.contains("Binaries\n w\n"));
    assert!(lp.contains("gate_0: + 1 x - 5 w <= 0"));
}

#[test]
fn colliding_truncated_names_fall_back_to_positional() {
    let mut m = MilpModel::new("long");
    m.add_variable(VarSpec::continuous("pipeline_flow_a"))
        .unwrap();
    m.add_variable(VarSpec::continuous("pipeline_flow_b"))
        .unwrap();
    let (names, naming) = export::mps_column_names(&m);
    assert_eq!(naming, export::ColumnNaming::Positional);
    assert_eq!(names, vec!["C0000000", "C0000001"]);
    let mut m = MilpModel::new("short");
    m.add_variable(VarSpec::continuous("pipeline_flow_a"))
        .unwrap();
    let (names, naming) = export::mps_column_names(&m);
    assert_eq!(naming, export::ColumnNaming::Truncated);
    assert_eq!(names, vec!["pipeline_flo"]);
}
