#![no_main]
use libfuzzer_sys::fuzz_target;
use ppsl2::wavelets::BasisExpansion;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 4096 {
        return;
    }
    if let Ok(e) = BasisExpansion::from_json_str(s) {
        let back = BasisExpansion::from_json_str(&e.to_json().to_string()).unwrap();
        assert_eq!(e.terms, back.terms);
        assert_eq!(e.global, back.global);
    }
});
