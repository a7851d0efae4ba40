#![no_main]
use libfuzzer_sys::fuzz_target;
use ppsl2::ExtendedRational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<ExtendedRational>() {
        // the display form is canonical
        let y: ExtendedRational = x.to_string().parse().unwrap();
        assert_eq!(x, y);
        assert_eq!(x.to_string(), y.to_string());
    }
});
