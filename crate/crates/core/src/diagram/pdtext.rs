//! `X[a,b,c,d]` text form of PD codes.
//!
//! Output uses one token per crossing with 1-based labels, followed by one
//! `O` token per crossingless component. Input also accepts the nested
//! list form `[[a,b,c,d],...]` and a `PD[...]` wrapper.

use std::fmt;
use std::str::FromStr;

use super::{DiagramError, PdCode};

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens: Vec<String> = self
            .crossings()
            .iter()
            .map(|c| {
                let e = c.edges;
                format!("X[{},{},{},{}]", e[0] + 1, e[1] + 1, e[2] + 1, e[3] + 1)
            })
            .collect();
        tokens.extend((0..self.free_loops()).map(|_| "O".to_string()));
        write!(f, "{}", tokens.join(" "))
    }
}

impl FromStr for PdCode {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body.strip_prefix("PD").unwrap_or(body);
        let mut tuples: Vec<[u32; 4]> = Vec::new();
        let mut loops = 0u32;
        let mut current: Option<Vec<u32>> = None;
        let mut number = String::new();
        let bad = |msg: &str| DiagramError::InvalidPd(format!("{msg} in `{s}`"));

        for ch in body.chars() {
            if ch.is_ascii_digit() {
                number.push(ch);
                continue;
            }
            if !number.is_empty() {
                let v: u32 = number.parse().map_err(|_| bad("bad label"))?;
                number.clear();
                match current.as_mut() {
                    Some(cur) => cur.push(v),
                    None => return Err(bad("label outside brackets")),
                }
            }
            match ch {
                '[' => current = Some(Vec::new()),
                ']' => {
                    if let Some(cur) = current.take() {
                        if cur.is_empty() {
                            continue;
                        }
                        let t: [u32; 4] = cur.try_into().map_err(|_| bad("crossing without 4 labels"))?;
                        tuples.push(t);
                    }
                }
                'O' => loops += 1,
                'X' | ',' | ' ' | '\t' | '\n' => {}
                _ => return Err(bad("unexpected character")),
            }
        }
        if !number.is_empty() {
            return Err(bad("trailing label"));
        }
        if tuples.is_empty() && loops == 0 {
            // the empty code denotes the crossingless unknot
            loops = 1;
        }
        PdCode::from_pd_tuples(&tuples, loops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_trefoil() {
        let d: PdCode = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]".parse().unwrap();
        assert_eq!(d.crossing_count(), 3);
        let again: PdCode = d.to_string().parse().unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn nested_list_form() {
        let d: PdCode = "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]".parse().unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn loops_and_empty() {
        let d: PdCode = "O".parse().unwrap();
        assert_eq!(d, PdCode::unknot());
        assert_eq!(d.to_string(), "O");
        let e: PdCode = "".parse().unwrap();
        assert_eq!(e, PdCode::unknot());
        assert!("X[1,2,3]".parse::<PdCode>().is_err());
    }
}
