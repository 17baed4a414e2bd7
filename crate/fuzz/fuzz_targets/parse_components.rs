#![no_main]

use libfuzzer_sys::fuzz_target;
use tamewitt::formlang;

fuzz_target!(|data: &[u8]| {
    if let Some((ctx, text)) = tamewitt_fuzz::split(data) {
        let _ = formlang::parse_components(text, &ctx);
    }
});
