#![no_main]

use libfuzzer_sys::fuzz_target;
use tamewitt::formlang;

fuzz_target!(|data: &[u8]| {
    if let Some((ctx, text)) = tamewitt_fuzz::split(data) {
        if let Ok(v) = formlang::parse_value(text, &ctx) {
            let shown = formlang::render(&v);
            let again = formlang::parse_value(&shown, &ctx).expect("rendering reparses");
            assert_eq!(formlang::render(&again), shown);
        }
    }
});
