#![no_main]
use libfuzzer_sys::fuzz_target;
use vtflip::BitWord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = s.parse::<BitWord>() {
        assert_eq!(w.to_string(), s);
        assert_eq!(w.len(), s.len());
    }
});
