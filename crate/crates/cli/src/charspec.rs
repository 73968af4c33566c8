//! Character syntax: Conrey labels `N.i` and generator values `N:g=zeta3`.

use serde::Serialize;
use symsq_core::dirichlet::DirichletCharacter;
use symsq_core::exact::{gcd_u64, Cyclotomic};

use crate::CliError;

/// Both spellings of a character, plus basic invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharEcho {
    pub label: String,
    pub generators: String,
    pub order: u32,
    pub conductor: u64,
    pub parity: i32,
}

pub fn echo(chi: &DirichletCharacter) -> CharEcho {
    CharEcho {
        label: chi.label(),
        generators: generator_form(chi),
        order: chi.order(),
        conductor: chi.conductor(),
        parity: chi.parity(),
    }
}

pub fn from_label(label: &str) -> Result<(DirichletCharacter, CharEcho), CliError> {
    let label = label.trim();
    let chi = if label == "1" { DirichletCharacter::trivial(1) } else { DirichletCharacter::from_label(label)? };
    let e = echo(&chi);
    Ok((chi, e))
}

/// Parses `N:g1=v1,g2=v2` with values `1`, `-1`, `i`, `zetaM` or `zetaM^j`.
pub fn from_gen(text: &str) -> Result<(DirichletCharacter, CharEcho), CliError> {
    let bad = |m: &str| CliError::Usage(format!("char_gen {:?}: {}", text, m));
    let (n, rest) = text.trim().split_once(':').ok_or_else(|| bad("expected N:g=value"))?;
    let n: u64 = n.trim().parse().map_err(|_| bad("bad modulus"))?;
    let mut values = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (g, v) = item.split_once('=').ok_or_else(|| bad("expected g=value"))?;
        let g: u64 = g.trim().parse().map_err(|_| bad("bad generator"))?;
        if gcd_u64(g, n) != 1 {
            return Err(bad("generator not coprime to the modulus"));
        }
        let (m, j) = parse_root(v.trim()).ok_or_else(|| bad("value must be 1, -1, i, zetaM or zetaM^j"))?;
        values.push((g, Cyclotomic::zeta_pow(m, j)));
    }
    let chi = DirichletCharacter::from_values(n, &values)?;
    let e = echo(&chi);
    Ok((chi, e))
}

fn parse_root(v: &str) -> Option<(u32, i64)> {
    match v {
        "1" => return Some((1, 0)),
        "-1" => return Some((2, 1)),
        "i" => return Some((4, 1)),
        "-i" => return Some((4, 3)),
        _ => {}
    }
    let body = v.strip_prefix("zeta")?;
    let (m, j) = match body.split_once('^') {
        Some((m, j)) => (m.parse().ok()?, j.parse().ok()?),
        None => (body.parse().ok()?, 1),
    };
    if m == 0 {
        return None;
    }
    Some((m, j))
}

fn root_text(e: u32, order: u32) -> String {
    if e == 0 {
        return String::from("1");
    }
    let g = gcd_u64(e as u64, order as u64) as u32;
    let (e, m) = (e / g, order / g);
    match (e, m) {
        (1, 2) => String::from("-1"),
        (1, _) => format!("zeta{}", m),
        _ => format!("zeta{}^{}", m, e),
    }
}

fn subgroup(gens: &[u64], n: u64) -> Vec<u64> {
    let mut seen = vec![false; n as usize];
    let mut stack = vec![1 % n];
    seen[(1 % n) as usize] = true;
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = x * g % n;
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    (0..n).filter(|&x| seen[x as usize]).collect()
}

/// A small generating set of `(Z/N)^x` with the character values on it.
pub fn generator_form(chi: &DirichletCharacter) -> String {
    let n = chi.modulus();
    if n <= 2 {
        return format!("{}:", n);
    }
    let units = (1..n).filter(|&a| gcd_u64(a, n) == 1).count();
    let mut gens: Vec<u64> = Vec::new();
    for a in 2..n {
        if gcd_u64(a, n) != 1 {
            continue;
        }
        let h = subgroup(&gens, n);
        if h.len() == units {
            break;
        }
        if !h.contains(&a) {
            gens.push(a);
        }
    }
    let mut i = 0;
    while i < gens.len() {
        let mut rest = gens.clone();
        rest.remove(i);
        if subgroup(&rest, n).len() == units {
            gens = rest;
        } else {
            i += 1;
        }
    }
    let parts: Vec<String> = gens
        .iter()
        .map(|&g| format!("{}={}", g, root_text(chi.exponent(g as i64).unwrap_or(0), chi.order())))
        .collect();
    format!("{}:{}", n, parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_and_generator_agree() {
        let (a, ea) = from_label("7.2").unwrap();
        let (b, eb) = from_gen("7:3=zeta3").unwrap();
        assert_eq!(a, b);
        assert_eq!(ea, eb);
        assert_eq!(ea.generators, "7:3=zeta3");
        assert_eq!(ea.parity, 1);
        let (c, _) = from_gen("7:3=zeta3^2").unwrap();
        assert_eq!(c, a.conj());
    }

    #[test]
    fn generator_round_trip() {
        for n in [5u64, 8, 12, 15, 21] {
            for i in 1..n {
                if gcd_u64(i, n) != 1 {
                    continue;
                }
                let chi = DirichletCharacter::new(n, i).unwrap();
                let (back, _) = from_gen(&generator_form(&chi)).unwrap();
                assert_eq!(back, chi, "{}", generator_form(&chi));
            }
        }
    }

    #[test]
    fn rejects_nonsense() {
        assert!(from_gen("7:3=zeta4").is_err());
        assert!(from_gen("7:7=1").is_err());
        assert!(from_gen("7-3").is_err());
        assert!(from_label("7.7").is_err());
    }
}
