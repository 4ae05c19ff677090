#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use vtflip::balance::{fixed_construct, ofmb_construct};
use vtflip::codebook::builtin_fixture;
use vtflip::{framed_decode, BitWord, DecodeContext, ResidueSystem};

fn contexts() -> &'static [DecodeContext; 2] {
    static CTX: OnceLock<[DecodeContext; 2]> = OnceLock::new();
    CTX.get_or_init(|| {
        let bch = builtin_fixture("bch_15_32_7").unwrap();
        let rs = ResidueSystem::new(16, 0).unwrap();
        [
            DecodeContext::new(ofmb_construct(&bch).unwrap()).unwrap(),
            DecodeContext::new(fixed_construct(&bch, rs).unwrap()).unwrap(),
        ]
    })
}

// first byte picks the context, the rest are bits (low bit of each byte)
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(y) = BitWord::from_bits(rest.iter().map(|b| b & 1 == 1).collect()) else { return };
    let ctx = &contexts()[(pick & 1) as usize];
    let out = framed_decode(&y, ctx);
    if let Some(w) = &out.word {
        assert!(ctx.code().entries.iter().any(|e| &e.balanced == w));
    }
});
