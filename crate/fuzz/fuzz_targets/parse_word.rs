#![no_main]
use libfuzzer_sys::fuzz_target;
use ppsl2::modular::matrix_to_word;
use ppsl2::GroupWord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    if let Ok(w) = s.parse::<GroupWord>() {
        let a = w.to_matrix();
        let r = matrix_to_word(&a);
        assert_eq!(r.to_matrix(), a);
        let again: GroupWord = r.to_string().parse().unwrap();
        assert_eq!(again.to_matrix(), a);
    }
});
