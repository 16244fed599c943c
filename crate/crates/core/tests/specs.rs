use hqcl::harness::builtin_cases;
use hqcl::{parse, ModelSpec};

#[test]
fn spec_files_match_the_built_in_models() {
    for case in builtin_cases() {
        let path = format!("{}/specs/{}.json", env!("CARGO_MANIFEST_DIR"), case.id);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.trim_end(),
            case.spec.to_json(),
            "{path} is out of date"
        );
        let model = ModelSpec::from_json(&text).unwrap().build().unwrap();
        assert!(model.validate().is_model(), "{}", case.id);
        for target in &case.targets {
            let p = model
                .probability_of(&parse(&target.formula).unwrap())
                .unwrap();
            assert!(
                (p - target.expected).abs() <= 1e-9,
                "{} {}",
                case.id,
                target.formula
            );
        }
    }
}
