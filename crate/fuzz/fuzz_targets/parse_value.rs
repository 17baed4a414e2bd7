#![no_main]

use libfuzzer_sys::fuzz_target;
use tamewitt::formlang;

fuzz_target!(|data: &[u8]| {
    if let Some((&head, rest)) = data.split_first() {
        if let Some((ctx, _)) = tamewitt_fuzz::split(&[head]) {
            // Raw bytes, so invalid UTF-8 reaches the parser too.
            let _ = formlang::parse_bytes(rest, &ctx);
        }
    }
});
