mod common;

#[test]
fn character_layer_up_to_50() {
    let bad: Vec<String> = (1..=50).flat_map(common::character_failures).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
