use crate::ncalg::{Generator, NcPoly, Word};

/// `(direction . d/d target) operand`.
///
/// Every occurrence of `target` in every word of `operand` is replaced, one at
/// a time, by `direction`; the results are summed. Linear in both polynomial
/// arguments and a derivation on products.
pub fn directional_derivative(direction: &NcPoly, target: &Generator, operand: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    if direction.is_zero() {
        return out;
    }
    for (w, c) in operand.terms() {
        let f = w.factors();
        for (i, g) in f.iter().enumerate() {
            if g != target {
                continue;
            }
            for (dw, dc) in direction.terms() {
                let mut factors = Vec::with_capacity(f.len() - 1 + dw.len());
                factors.extend_from_slice(&f[..i]);
                factors.extend_from_slice(dw.factors());
                factors.extend_from_slice(&f[i + 1..]);
                out.add_term(Word::new(factors), c * dc);
            }
        }
    }
    out
}

/// `d/d target`: removes one occurrence at a time.
pub fn scalar_derivative(target: &Generator, operand: &NcPoly) -> NcPoly {
    directional_derivative(&NcPoly::one(), target, operand)
}
