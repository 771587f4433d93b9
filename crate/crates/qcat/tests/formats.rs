use qcat::formats::{
    parse_graph, reference_table, table_from_csv, table_to_csv, table_to_json, REFERENCE_GRAPH,
};
use qcat_core::graph_code::{
    build_encoder, build_syndrome_decoder, five_qubit_decoder_phase, generate_syndrome_table,
};

#[test]
fn regenerated_table_serializes_to_the_bundled_csv() {
    let encoder = build_encoder(&parse_graph(REFERENCE_GRAPH).unwrap()).unwrap();
    let decoder = build_syndrome_decoder(&five_qubit_decoder_phase()).unwrap();
    let table = generate_syndrome_table(&encoder, &decoder).unwrap();
    assert_eq!(table, reference_table().unwrap());
    let csv = table_to_csv(table.rows()).unwrap();
    assert_eq!(table_from_csv(&csv).unwrap(), table.rows());
}

#[test]
fn json_rows_round_trip() {
    let rows = reference_table().unwrap().rows().to_vec();
    let json = table_to_json(&rows).unwrap();
    let back: Vec<qcat_core::graph_code::SyndromeRow> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn scenario_json_uses_stable_field_names() {
    let sc = qcat_core::channel::NoiseScenario::reference();
    let v: serde_json::Value = serde_json::to_value(&sc).unwrap();
    assert_eq!(v["erasures"][0]["block"], 0);
    assert_eq!(v["erasures"][0]["pos"], 1);
    assert_eq!(v["erasures"][0]["pauli"], "Z");
    assert_eq!(v["comp_errors"][0]["pauli"], "X");
    assert_eq!(v["seed"], 0);
    let back: qcat_core::channel::NoiseScenario = serde_json::from_value(v).unwrap();
    assert_eq!(back, sc);
}

#[test]
fn malformed_csv_is_rejected() {
    assert!(
        table_from_csv("syndrome,error_label,data_state_form,correction\n01,B1,x,S5\n").is_err()
    );
    assert!(table_from_csv(
        "syndrome,error_label,data_state_form,correction\n0110,Q1,c(0)|0> + c(1)|1>,S5\n"
    )
    .is_err());
}
