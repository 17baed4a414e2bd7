#![no_main]

use libfuzzer_sys::fuzz_target;
use tamewitt::formlang;

fuzz_target!(|data: &[u8]| {
    if let Some((ctx, text)) = tamewitt_fuzz::split(data) {
        if let Ok(q) = formlang::parse_diag_form(text, &ctx) {
            assert_eq!(q.vars(), ctx.vars);
        }
    }
});
