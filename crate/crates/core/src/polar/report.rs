use std::fmt::Write as _;

use super::{FactorKind, PolarFactor, PolarPrediction};
use crate::num::fmt_q;

fn char_set(f: &PolarFactor) -> String {
    let items: Vec<String> = f.char_exponents.iter().map(fmt_q).collect();
    format!("{{{}}}", items.join(","))
}

fn index_range(first: usize, last: usize) -> String {
    if last - first < 3 {
        let v: Vec<String> = (first..=last).map(|j| j.to_string()).collect();
        format!("{{{}}}", v.join(","))
    } else {
        format!("{{{first},...,{last}}}")
    }
}

/// Human-readable factorization, one bullet per run of identical factors.
pub(super) fn text(p: &PolarPrediction) -> String {
    let mut s = String::new();
    let w = |s: &mut String, line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    w(&mut s, format!("characteristic {}, k = {}", p.char, p.k));
    w(&mut s, format!("degree of the polar in y: {}", p.total_multiplicity()));
    for g in &p.groups {
        let l = g.index;
        let labels: Vec<String> = g.factors.iter().map(PolarFactor::label).collect();
        w(&mut s, String::new());
        w(&mut s, format!("Γ^({l}) = {}", if labels.is_empty() { "1".into() } else { labels.join(" · ") }));
        w(&mut s, format!("  Δ_{l}^({}) = {}", g.t, g.derivative));
        let mut i = 0;
        while i < g.factors.len() {
            let f = &g.factors[i];
            let mut j = i;
            while j + 1 < g.factors.len() && g.factors[j + 1].kind == f.kind && g.factors[j + 1].part == f.part {
                j += 1;
            }
            let name = if i == j { f.label() } else { format!("{}_j^({l})", f.kind) };
            let mut line = format!(
                "  • cont(f_{l},{name}) = {} and Char({name}) = {}",
                fmt_q(&f.contact_with_semiroot),
                if f.is_smooth() { "∅".to_string() } else { char_set(f) }
            );
            if f.is_smooth() {
                let _ = write!(line, ", that is, {name} is smooth");
            }
            let _ = write!(line, "; multiplicity {}", f.multiplicity);
            if i != j {
                let _ = write!(line, ", for j ∈ {}", index_range(g.factors[i].index, g.factors[j].index));
            }
            if f.kind == FactorKind::W && i == j {
                let _ = write!(line, " (w-factor)");
            }
            w(&mut s, line);
            i = j + 1;
        }
        if !g.factors.is_empty() {
            w(
                &mut s,
                format!("  • cont(f,v) = {} for any irreducible factor v of Γ^({l})", fmt_q(&p.char.exponent(l))),
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::predict;
    use crate::charclass::CharSequence;

    #[test]
    fn first_example_bullets() {
        let p = predict(&CharSequence::from_u64s(&[12, 16, 31]).unwrap(), 1).unwrap();
        let t = p.text_report();
        assert!(t.contains("• cont(f_1,z_1^(1)) = 3/2 and Char(z_1^(1)) = {3/2}; multiplicity 2"));
        assert!(t.contains("• cont(f_2,z_j^(2)) = 8/3 and Char(z_j^(2)) = {4/3}; multiplicity 3, for j ∈ {1,2,3}"));
        assert!(t.contains("• cont(f,v) = 4/3 for any irreducible factor v of Γ^(1)"));
    }

    #[test]
    fn smooth_factor_wording() {
        let p = predict(&CharSequence::from_u64s(&[10, 14, 15]).unwrap(), 2).unwrap();
        let t = p.text_report();
        assert!(t.contains("Char(z_1^(1)) = ∅, that is, z_1^(1) is smooth"));
        assert!(t.contains("Γ^(1) = z_1^(1) · z_2^(1) · w_1^(1)"));
    }
}
