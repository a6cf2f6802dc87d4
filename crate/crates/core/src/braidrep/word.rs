use std::fmt;
use std::str::FromStr;

use crate::diagrams::{crossing_at, CrossingSign, Diagram, DiagramSum};
use crate::error::{Error, Result};

/// One generator of the virtual braid group; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sigma { index: usize, sign: CrossingSign },
    Virtual { index: usize },
}

impl Letter {
    pub fn index(self) -> usize {
        match self {
            Letter::Sigma { index, .. } | Letter::Virtual { index } => index,
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::Sigma { index, sign } => Letter::Sigma {
                index,
                sign: sign.inverse(),
            },
            v => v,
        }
    }

    pub fn sigma(index: usize) -> Letter {
        Letter::Sigma {
            index,
            sign: CrossingSign::Positive,
        }
    }

    pub fn sigma_inv(index: usize) -> Letter {
        Letter::Sigma {
            index,
            sign: CrossingSign::Negative,
        }
    }

    pub fn virt(index: usize) -> Letter {
        Letter::Virtual { index }
    }

    /// The letter acting on single strands of an `n`-strand diagram.
    pub fn diagram(self, n: usize) -> DiagramSum {
        match self {
            Letter::Sigma { index, sign } => crossing_at(n, index - 1, sign),
            Letter::Virtual { index } => Diagram::transposition_at(n, index - 1).into(),
        }
    }

    /// The letter acting on `n` two-strand cables (`2n` strands).
    pub fn cable_diagram(self, n: usize) -> DiagramSum {
        let m = 2 * n;
        let first = 2 * (self.index() - 1);
        match self {
            Letter::Sigma { sign, .. } => {
                // Strand positions (0-based) of the four crossings, top to bottom.
                [first + 1, first, first + 2, first + 1]
                    .into_iter()
                    .map(|i| crossing_at(m, i, sign))
                    .reduce(|upper, lower| lower.compose(&upper).expect("same strand count"))
                    .expect("four crossings")
            }
            Letter::Virtual { .. } => {
                let mut perm: Vec<usize> = (0..m).collect();
                perm[first..first + 4].copy_from_slice(&[first + 2, first + 3, first, first + 1]);
                Diagram::permutation(&perm).into()
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sigma {
                index,
                sign: CrossingSign::Positive,
            } => write!(f, "s{index}"),
            Letter::Sigma {
                index,
                sign: CrossingSign::Negative,
            } => write!(f, "s{index}^-1"),
            Letter::Virtual { index } => write!(f, "v{index}"),
        }
    }
}

/// A freely reduced word in `VB_n`; the first letter is the topmost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::IndexOutOfRange { index: 0, strands });
        }
        for l in &letters {
            let i = l.index();
            if i == 0 || i >= strands {
                return Err(Error::IndexOutOfRange { index: i, strands });
            }
        }
        let mut reduced: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if reduced.last() == Some(&l.inverse()) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Ok(BraidWord {
            strands,
            letters: reduced,
        })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_classical(&self) -> bool {
        self.letters.iter().all(|l| matches!(l, Letter::Sigma { .. }))
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Sigma {
                    sign: CrossingSign::Positive,
                    ..
                } => 1,
                Letter::Sigma { .. } => -1,
                Letter::Virtual { .. } => 0,
            })
            .sum()
    }

    /// `self` on top of `other`.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::BoundaryMismatch(format!(
                "{} vs {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord::new(self.strands, letters)
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    fn stack(&self, f: impl Fn(Letter) -> DiagramSum, width: usize) -> DiagramSum {
        self.letters.iter().fold(DiagramSum::identity(width), |upper, &l| {
            f(l).compose(&upper).expect("letters share the strand count")
        })
    }

    /// The word as a diagram on single strands, crossings smoothed.
    pub fn diagram(&self) -> DiagramSum {
        self.stack(|l| l.diagram(self.strands), self.strands)
    }

    /// The word acting on two-strand cables.
    pub fn cable_diagram(&self) -> DiagramSum {
        self.stack(|l| l.cable_diagram(self.strands), 2 * self.strands)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Grammar: `n=<int>;` then whitespace-separated `s<k>`, `s<k>^-1`, `v<k>`.
    fn from_str(text: &str) -> Result<Self> {
        let syntax = |position: usize, message: &str| Error::Syntax {
            position,
            message: message.to_string(),
        };
        let start = text.len() - text.trim_start().len();
        let rest = &text[start..];
        let Some(body) = rest.strip_prefix("n=") else {
            return Err(syntax(start, "expected header `n=<int>;`"));
        };
        let Some(semi) = body.find(';') else {
            return Err(syntax(text.len(), "missing `;` after strand count"));
        };
        let count_text = body[..semi].trim();
        let strands: usize = count_text
            .parse()
            .map_err(|_| syntax(start + 2, "strand count must be a positive integer"))?;
        let mut offset = start + 2 + semi + 1;
        let mut letters = Vec::new();
        for token in text[offset..].split_whitespace() {
            let pos = offset + text[offset..].find(token).expect("token comes from this slice");
            offset = pos + token.len();
            let (kind, digits) = token.split_at(1);
            let (digits, inverse) = match digits.strip_suffix("^-1") {
                Some(d) => (d, true),
                None => (digits, false),
            };
            let index: usize = digits
                .parse()
                .map_err(|_| syntax(pos, &format!("bad generator `{token}`")))?;
            let letter = match (kind, inverse) {
                ("s", false) => Letter::sigma(index),
                ("s", true) => Letter::sigma_inv(index),
                ("v", false) => Letter::virt(index),
                ("v", true) => return Err(syntax(pos, "virtual generators have no inverse form")),
                _ => return Err(syntax(pos, &format!("bad generator `{token}`"))),
            };
            letters.push(letter);
        }
        BraidWord::new(strands, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_example() {
        let w: BraidWord = "n=3; s1 s2^-1 v1".parse().unwrap();
        assert_eq!(w.strands(), 3);
        assert_eq!(w.letters(), [Letter::sigma(1), Letter::sigma_inv(2), Letter::virt(1)]);
        assert_eq!(w.to_string(), "n=3; s1 s2^-1 v1");
    }

    #[test]
    fn free_reduction() {
        let w: BraidWord = "n=2; v1 v1".parse().unwrap();
        assert!(w.is_empty());
        let w: BraidWord = "n=3; s2 s1 s1^-1 s2^-1 v2".parse().unwrap();
        assert_eq!(w.letters(), [Letter::virt(2)]);
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            "n=2; s5".parse::<BraidWord>(),
            Err(Error::IndexOutOfRange { index: 5, strands: 2 })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match "n=3; s1 x2".parse::<BraidWord>() {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            "s1".parse::<BraidWord>(),
            Err(Error::Syntax { position: 0, .. })
        ));
    }

    #[test]
    fn cable_crossing_is_inverted_by_its_inverse() {
        let up = Letter::sigma(1).cable_diagram(2);
        let down = Letter::sigma_inv(1).cable_diagram(2);
        assert_eq!(up.compose(&down).unwrap(), DiagramSum::identity(4));
    }

    #[test]
    fn virtual_cable_crossing_swaps_cables() {
        let v = Letter::virt(1).cable_diagram(2);
        assert_eq!(v.compose(&v).unwrap(), DiagramSum::identity(4));
        assert_eq!(v.len(), 1);
    }
}
