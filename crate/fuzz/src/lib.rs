//! Shared input decoding for the fuzz targets.

use tamewitt::basefield::BaseField;
use tamewitt::formlang::ParseContext;

/// The first byte picks the field and the number of variables; the rest is
/// the text. Returns `None` for inputs that are too short or not UTF-8.
pub fn split(data: &[u8]) -> Option<(ParseContext, &str)> {
    let (&head, rest) = data.split_first()?;
    let field = match head & 3 {
        0 => BaseField::prime(3),
        1 => BaseField::prime(5),
        2 => BaseField::prime(7),
        _ => Ok(BaseField::reals()),
    }
    .ok()?;
    let ctx = ParseContext::new(field, usize::from(head >> 2) % 4).ok()?;
    Some((ctx, std::str::from_utf8(rest).ok()?))
}
