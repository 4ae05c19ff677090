#![no_main]
use libfuzzer_sys::fuzz_target;
use vtflip::Codebook;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(cb) = Codebook::parse(s) else { return };
    // round trip through the canonical text form
    let again = Codebook::parse(&cb.to_text()).expect("canonical text parses");
    assert_eq!(again.words(), cb.words());
    if cb.len() <= 64 {
        let _ = cb.min_distance();
    }
});
