use std::fmt;
use std::str::FromStr;

use super::{Elem, FiniteRing, StalkError};

/// Textual description of a stalk.
///
/// * `zmod(n)`: integers mod `n`, elements `0`..`n-1`.
/// * `gf4`: the field with four elements `0`, `1`, `a`, `b` where
///   `a*a = b`, `a*b = 1`, `b*b = a` and `a + b = 1`.
/// * `table(E; A; M)`: `E` lists element names separated by spaces; `A` and
///   `M` are the addition and multiplication tables, rows separated by `/`,
///   entries by spaces, in the order of `E`. Example:
///   `table(0 1; 0 1 / 1 0; 0 0 / 0 1)` is the field with two elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    ZMod(u64),
    Gf4,
    Table { names: Vec<String>, add: Vec<Vec<String>>, mul: Vec<Vec<String>> },
}

impl RingSpec {
    pub fn build(&self) -> Result<FiniteRing, StalkError> {
        match self {
            RingSpec::ZMod(n) => {
                let n = *n;
                if n < 2 {
                    return Err(StalkError::ModulusTooSmall(n));
                }
                if n > 4096 {
                    return Err(StalkError::CarrierTooLarge(n as usize));
                }
                let names = (0..n).map(|i| i.to_string()).collect();
                let table = |op: fn(u64, u64) -> u64| -> Vec<Vec<Elem>> {
                    (0..n).map(|a| (0..n).map(|b| (op(a, b) % n) as Elem).collect()).collect()
                };
                FiniteRing::from_tables(self.to_string(), names, table(|a, b| a + b), table(|a, b| a * b))
            }
            RingSpec::Gf4 => {
                // Elements 0, 1, a, b with b = a + 1 and a*a = b.
                let names = ["0", "1", "a", "b"].iter().map(|s| s.to_string()).collect();
                let add = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
                let mul = vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 3, 1], vec![0, 3, 1, 2]];
                FiniteRing::from_tables(self.to_string(), names, add, mul)
            }
            RingSpec::Table { names, add, mul } => {
                let index = |s: &String| -> Result<Elem, StalkError> {
                    names
                        .iter()
                        .position(|n| n == s)
                        .map(|i| i as Elem)
                        .ok_or_else(|| StalkError::UnknownElement(s.clone()))
                };
                let convert = |t: &Vec<Vec<String>>| -> Result<Vec<Vec<Elem>>, StalkError> {
                    t.iter().map(|row| row.iter().map(index).collect()).collect()
                };
                FiniteRing::from_tables(self.to_string(), names.clone(), convert(add)?, convert(mul)?)
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "zmod({n})"),
            RingSpec::Gf4 => f.write_str("gf4"),
            RingSpec::Table { names, add, mul } => {
                let rows = |t: &Vec<Vec<String>>| t.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join(" / ");
                write!(f, "table({}; {}; {})", names.join(" "), rows(add), rows(mul))
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = StalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StalkError::BadSpec(s.trim().to_string());
        let t = s.trim();
        if t == "gf4" {
            return Ok(RingSpec::Gf4);
        }
        let call = |name: &str| t.strip_prefix(name).and_then(|r| r.trim_start().strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
        if let Some(arg) = call("zmod") {
            return arg.trim().parse().map(RingSpec::ZMod).map_err(|_| bad());
        }
        if let Some(arg) = call("table") {
            let parts: Vec<&str> = arg.split(';').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let names: Vec<String> = parts[0].split_whitespace().map(str::to_string).collect();
            let table = |p: &str| -> Vec<Vec<String>> {
                p.split('/').map(|row| row.split_whitespace().map(str::to_string).collect()).collect()
            };
            if names.is_empty() {
                return Err(bad());
            }
            return Ok(RingSpec::Table { names, add: table(parts[1]), mul: table(parts[2]) });
        }
        Err(bad())
    }
}
