#![no_main]
use libfuzzer_sys::fuzz_target;
use vtflip::decode::{levenshtein_reinsert, vt_delete, vt_reinsert};
use vtflip::{BitWord, ResidueSystem};

// byte 0: modulus slack, byte 1: target, rest: bits
fuzz_target!(|data: &[u8]| {
    if data.len() < 3 || data.len() > 40 {
        return;
    }
    let Ok(y) = BitWord::from_bits(data[2..].iter().map(|b| b & 1 == 1).collect()) else { return };
    let m = (y.len() + 2) as u64 + u64::from(data[0] % 8);
    let Ok(rs) = ResidueSystem::new(m, u64::from(data[1]) % m) else { return };
    let slow = vt_reinsert(&y, rs, None);
    if let Ok(x) = &slow {
        assert!(x.in_class(rs));
        assert_eq!(x.len(), y.len() + 1);
    }
    assert_eq!(levenshtein_reinsert(&y, rs).ok(), slow.ok());
    if let Ok(x) = vt_delete(&y, rs, None) {
        assert!(x.in_class(rs));
    }
});
