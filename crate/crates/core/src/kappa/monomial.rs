use std::fmt;

/// Normal-ordered monomial `p_1^{β_1} ⋯ p_d^{β_d} p_0^n`: every spatial
/// generator sits to the left of `p_0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    spatial: Vec<u32>,
    time: u32,
}

impl Monomial {
    pub fn new(spatial: Vec<u32>, time: u32) -> Self {
        Monomial { spatial, time }
    }

    pub fn one(d: usize) -> Self {
        Monomial { spatial: vec![0; d], time: 0 }
    }

    /// The generator `p_mu` (`mu = 0` is the time generator).
    pub fn generator(d: usize, mu: usize) -> Self {
        assert!(mu <= d, "generator index {mu} exceeds d = {d}");
        let mut m = Monomial::one(d);
        if mu == 0 {
            m.time = 1;
        } else {
            m.spatial[mu - 1] = 1;
        }
        m
    }

    pub fn d(&self) -> usize {
        self.spatial.len()
    }

    pub fn spatial(&self) -> &[u32] {
        &self.spatial
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    /// Exponent of `p_mu`.
    pub fn exponent(&self, mu: usize) -> u32 {
        if mu == 0 {
            self.time
        } else {
            self.spatial[mu - 1]
        }
    }

    pub fn spatial_degree(&self) -> u32 {
        self.spatial.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.time + self.spatial_degree()
    }

    pub fn is_one(&self) -> bool {
        self.time == 0 && self.spatial.iter().all(|&b| b == 0)
    }

    pub fn with_time(&self, time: u32) -> Self {
        Monomial { spatial: self.spatial.clone(), time }
    }

    pub fn with_exponent(&self, mu: usize, e: u32) -> Self {
        let mut m = self.clone();
        if mu == 0 {
            m.time = e;
        } else {
            m.spatial[mu - 1] = e;
        }
        m
    }

    /// Exponent-wise sum; this is the product of commuting variables.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            spatial: self.spatial.iter().zip(&other.spatial).map(|(a, b)| a + b).collect(),
            time: self.time + other.time,
        }
    }

    /// All monomials in `d` spatial variables of total degree at most `max_degree`,
    /// in increasing order.
    pub fn all_up_to(d: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; d + 1];
        fill(&mut out, &mut current, 0, max_degree);
        out.sort();
        out
    }
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, budget: u32) {
    if pos == current.len() {
        out.push(Monomial { spatial: current[1..].to_vec(), time: current[0] });
        return;
    }
    for e in 0..=budget {
        current[pos] = e;
        fill(out, current, pos + 1, budget - e);
    }
    current[pos] = 0;
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (j, &b) in self.spatial.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(format!("p{}", j + 1)),
                _ => parts.push(format!("p{}^{}", j + 1, b)),
            }
        }
        match self.time {
            0 => {}
            1 => parts.push("p0".to_string()),
            n => parts.push(format!("p0^{n}")),
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        // C(d+1+k, k) monomials of degree <= k in d+1 variables
        assert_eq!(Monomial::all_up_to(3, 4).len(), 70);
        assert_eq!(Monomial::all_up_to(1, 2).len(), 6);
        assert_eq!(Monomial::all_up_to(0, 3).len(), 4);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new(vec![1, 0], 1).to_string(), "p1 p0");
        assert_eq!(Monomial::new(vec![0, 2], 3).to_string(), "p2^2 p0^3");
        assert_eq!(Monomial::one(2).to_string(), "1");
    }
}
