#![no_main]
use libfuzzer_sys::fuzz_target;
use ppsl2::PiecewiseField;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = PiecewiseField::from_json_str(s) {
        let g = PiecewiseField::from_json_str(&f.to_json().to_string()).unwrap();
        assert_eq!(f, g);
    }
});
