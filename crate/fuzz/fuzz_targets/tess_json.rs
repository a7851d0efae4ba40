#![no_main]
use libfuzzer_sys::fuzz_target;
use ppsl2::halfplane::DecoratedTessellationTruncation;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = DecoratedTessellationTruncation::from_json_str(s) {
        let back = DecoratedTessellationTruncation::from_json_str(&t.to_json().to_string()).unwrap();
        assert_eq!(t, back);
    }
});
