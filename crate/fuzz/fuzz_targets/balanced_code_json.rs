#![no_main]
use libfuzzer_sys::fuzz_target;
use vtflip::BalancedCode;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(code) = BalancedCode::from_json(s) {
        let back = BalancedCode::from_json(&code.to_json().to_string()).expect("own output loads");
        assert_eq!(back, code);
    }
});
