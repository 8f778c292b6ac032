//! Module expressions: `M(c^-1 d a) + M(e_2)^3 + B(b^-1 a; 2; 1)`.

use std::sync::Arc;

use crate::error::ExprError;
use crate::field::Field;
use crate::quiver::GentleQuiver;
use crate::rep::{Representation, Summand};
use crate::word::Word;

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

/// Parses a sum of string and band modules; the empty sum is written `0`.
pub fn parse_module<F: Field>(q: Arc<GentleQuiver>, field: F, text: &str) -> Result<Representation<F>, ExprError> {
    if text.trim() == "0" {
        return Ok(Representation::zero(q, field));
    }
    let mut parts = Vec::new();
    let mut offset = 0;
    for term in text.split('+') {
        let at = offset + (term.len() - term.trim_start().len());
        offset += term.len() + 1;
        let term = term.trim();
        if term.is_empty() {
            return Err(syntax(at, "empty term"));
        }
        let (body, power) = match term.rsplit_once('^') {
            Some((b, k)) if b.trim_end().ends_with(')') => {
                let k: usize = k.trim().parse().map_err(|_| syntax(at, format!("bad exponent `{k}`")))?;
                (b.trim_end(), k)
            }
            _ => (term, 1),
        };
        let (kind, inner) = body
            .split_once('(')
            .and_then(|(k, rest)| rest.strip_suffix(')').map(|r| (k.trim(), r)))
            .ok_or_else(|| syntax(at, "expected `M(...)` or `B(...)`"))?;
        let module = match kind {
            "M" => Representation::string_module(q.clone(), field.clone(), &Word::parse_string(&q, inner)?)?,
            "B" => {
                let fields: Vec<&str> = inner.split(';').map(str::trim).collect();
                let [w, lambda, d] = fields.as_slice() else {
                    return Err(syntax(at, "expected `B(<band>; <lambda>; <d>)`"));
                };
                let d: usize = d
                    .parse()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| syntax(at, format!("bad block size `{d}`")))?;
                let lambda = field.parse(lambda)?;
                Representation::band_module(q.clone(), field.clone(), &Word::parse(&q, w)?, lambda, d)?
            }
            other => return Err(syntax(at, format!("unknown module kind `{other}`"))),
        };
        parts.push(module.power(power));
    }
    Ok(Representation::direct_sum(&parts)?)
}

/// Renders a ledger, merging equal neighbours into powers.
pub fn render_ledger<F: Field>(q: &GentleQuiver, field: &F, ledger: &[Summand<F::Elem>]) -> String {
    if ledger.is_empty() {
        return "0".into();
    }
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < ledger.len() {
        let mut j = i + 1;
        while j < ledger.len() && ledger[j] == ledger[i] {
            j += 1;
        }
        let s = ledger[i].render(q, field);
        out.push(if j - i > 1 { format!("{}^{}", s, j - i) } else { s });
        i = j;
    }
    out.join(" + ")
}
