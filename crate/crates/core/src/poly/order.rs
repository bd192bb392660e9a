use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Mono;

/// Monomial orders.  `Greater` means "larger" (leading) in every comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonOrder {
    Lex,
    DegRevLex,
    /// Degree reverse lexicographic on the first `k` variables, ties broken by
    /// degree reverse lexicographic on the rest.  Eliminates the first block.
    BlockElim(usize),
    /// Local order: lower total degree is larger, ties by reverse lexicographic.
    LocalNegDegRevLex,
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn deg(a: &[u32]) -> u32 {
    a.iter().sum()
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    deg(a).cmp(&deg(b)).then_with(|| revlex(a, b))
}

impl MonOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            MonOrder::Lex => a.as_slice().cmp(b.as_slice()),
            MonOrder::DegRevLex => degrevlex(a, b),
            MonOrder::BlockElim(k) => {
                let k = k.min(a.len());
                degrevlex(&a[..k], &b[..k]).then_with(|| degrevlex(&a[k..], &b[k..]))
            }
            MonOrder::LocalNegDegRevLex => deg(b).cmp(&deg(a)).then_with(|| revlex(a, b)),
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self, MonOrder::LocalNegDegRevLex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn orders_on_two_and_three_variables() {
        let x: Mono = smallvec![1, 0];
        let y2: Mono = smallvec![0, 2];
        let one: Mono = smallvec![0, 0];
        assert_eq!(MonOrder::Lex.cmp(&x, &y2), Ordering::Greater);
        assert_eq!(MonOrder::DegRevLex.cmp(&x, &y2), Ordering::Less);
        assert_eq!(MonOrder::LocalNegDegRevLex.cmp(&one, &x), Ordering::Greater);
        assert_eq!(MonOrder::LocalNegDegRevLex.cmp(&x, &y2), Ordering::Greater);

        // x*z^2 vs y^2*z under degrevlex: equal degree, smaller z-power wins.
        let a: Mono = smallvec![1, 0, 2];
        let b: Mono = smallvec![0, 2, 1];
        assert_eq!(MonOrder::DegRevLex.cmp(&a, &b), Ordering::Less);
        // Any monomial involving the first variable beats one that does not.
        let u: Mono = smallvec![1, 0, 0];
        let big: Mono = smallvec![0, 9, 9];
        assert_eq!(MonOrder::BlockElim(1).cmp(&u, &big), Ordering::Greater);
    }
}
