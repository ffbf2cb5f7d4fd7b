//! Candidate sets, compositions, and the tabloid ballot space.
//!
//! A ballot of shape `(λ_1, …, λ_m)` assigns every candidate to one of `m`
//! rows so that row `i` holds exactly `λ_i` candidates; lower rows are
//! preferred. Ballots are enumerated in lexicographic order of the
//! row-index tuple `(b(C_1), …, b(C_n))` under the fixed candidate order,
//! which gives a deterministic dense indexing of the basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default refusal threshold for materializing a ballot space.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// An ordered set of distinct candidate names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl CandidateSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyCandidateName);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateCandidate(name.clone()));
            }
        }
        Ok(CandidateSet { names, index })
    }

    /// `A`, `B`, … `Z` for up to 26 candidates, `C1`, `C2`, … beyond that.
    pub fn with_default_names(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCandidateSet);
        }
        let names: Vec<String> = if n <= 26 {
            (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
        } else {
            (1..=n).map(|i| format!("C{i}")).collect()
        };
        CandidateSet::new(names)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }
}

/// The shape `(λ_1, …, λ_m)` of a partially ranked ballot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<usize>,
    n: usize,
    k: u128,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyComposition);
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::NonPositivePart);
        }
        if parts.len() > u8::MAX as usize {
            return Err(Error::TooManyParts(parts.len()));
        }
        let n: usize = parts.iter().sum();
        let k = multinomial(&parts).ok_or(Error::SizeOverflow)?;
        // rank/unrank scale k by per-row counts; keep headroom for that.
        if k > u128::MAX / (n as u128 + 1) {
            return Err(Error::SizeOverflow);
        }
        Ok(Composition { parts, n, k })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of rows `m = |λ|`.
    pub fn m(&self) -> usize {
        self.parts.len()
    }

    /// Number of candidates `n = Σ λ_i`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ballots `k = n! / Π λ_i!`.
    pub fn k(&self) -> u128 {
        self.k
    }
}

/// `n! / Π parts_i!`, or `None` on overflow.
fn multinomial(parts: &[usize]) -> Option<u128> {
    let mut total: u128 = 0;
    let mut result: u128 = 1;
    for &p in parts {
        for i in 1..=(p as u128) {
            total += 1;
            // result * total / i is exact: it equals a product of binomials.
            result = result.checked_mul(total)? / i;
        }
    }
    Some(result)
}

/// A tabloid: the map candidate index → row index (1-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ballot {
    assignment: Vec<u8>,
}

impl Ballot {
    /// Row of the candidate with index `i`, in `1..=m`.
    pub fn row_of(&self, i: usize) -> usize {
        self.assignment[i] as usize
    }

    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    /// Candidate indices grouped by row, best row first.
    pub fn row_sets(&self, m: usize) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); m];
        for (i, &r) in self.assignment.iter().enumerate() {
            rows[r as usize - 1].push(i);
        }
        rows
    }
}

/// A candidate set together with a compatible composition; the context in
/// which ballots and profiles live.
#[derive(Debug)]
pub struct BallotSpace {
    candidates: CandidateSet,
    shape: Composition,
    cap: u64,
}

impl PartialEq for BallotSpace {
    fn eq(&self, other: &Self) -> bool {
        self.candidates == other.candidates && self.shape == other.shape
    }
}
impl Eq for BallotSpace {}

impl BallotSpace {
    pub fn new(candidates: CandidateSet, shape: Composition) -> Result<Arc<Self>> {
        Self::with_cap(candidates, shape, DEFAULT_CAP)
    }

    pub fn with_cap(candidates: CandidateSet, shape: Composition, cap: u64) -> Result<Arc<Self>> {
        if candidates.n() != shape.n() {
            return Err(Error::CompositionMismatch {
                sum: shape.n(),
                expected: candidates.n(),
            });
        }
        Ok(Arc::new(BallotSpace {
            candidates,
            shape,
            cap,
        }))
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn shape(&self) -> &Composition {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.candidates.n()
    }

    pub fn m(&self) -> usize {
        self.shape.m()
    }

    pub fn k(&self) -> u128 {
        self.shape.k()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Errors unless the space is small enough to materialize.
    pub fn check_cap(&self) -> Result<()> {
        if self.k() > self.cap as u128 {
            return Err(Error::SizeCapExceeded {
                k: self.k(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self == other
    }

    /// Builds a ballot from named rows, validating shape and coverage.
    pub fn ballot_from_rows<S: AsRef<str>>(&self, rows: &[Vec<S>]) -> Result<Ballot> {
        if rows.len() != self.m() {
            return Err(Error::MalformedBallot);
        }
        let mut assignment = vec![0u8; self.n()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != self.shape.parts()[r] {
                return Err(Error::MalformedBallot);
            }
            for name in row {
                let i = self.candidates.index_of(name.as_ref())?;
                if assignment[i] != 0 {
                    return Err(Error::DuplicateCandidate(name.as_ref().to_string()));
                }
                assignment[i] = (r + 1) as u8;
            }
        }
        Ok(Ballot { assignment })
    }

    fn validate_ballot(&self, b: &Ballot) -> Result<()> {
        if b.assignment.len() != self.n() {
            return Err(Error::MalformedBallot);
        }
        let mut counts = vec![0usize; self.m()];
        for &r in &b.assignment {
            let r = r as usize;
            if r == 0 || r > self.m() {
                return Err(Error::MalformedBallot);
            }
            counts[r - 1] += 1;
        }
        if counts != self.shape.parts() {
            return Err(Error::MalformedBallot);
        }
        Ok(())
    }

    /// The evaluation map: the row in which ballot `b` places `candidate`.
    pub fn evaluate(&self, b: &Ballot, candidate: &str) -> Result<usize> {
        let i = self.candidates.index_of(candidate)?;
        self.validate_ballot(b)?;
        Ok(b.row_of(i))
    }

    /// All `k` ballots in lexicographic assignment order.
    pub fn enumerate_tabloids(&self) -> Result<Vec<Ballot>> {
        self.check_cap()?;
        let k = self.k() as usize;
        let mut out = Vec::with_capacity(k);
        // Lex-minimal assignment: rows filled in order.
        let mut current: Vec<u8> = Vec::with_capacity(self.n());
        for (r, &size) in self.shape.parts().iter().enumerate() {
            current.extend(std::iter::repeat((r + 1) as u8).take(size));
        }
        loop {
            out.push(Ballot {
                assignment: current.clone(),
            });
            if !next_multiset_permutation(&mut current) {
                break;
            }
        }
        debug_assert_eq!(out.len(), k);
        Ok(out)
    }

    /// Position of `b` in enumeration order.
    pub fn rank(&self, b: &Ballot) -> Result<u128> {
        self.validate_ballot(b)?;
        let mut counts: Vec<u128> = self.shape.parts().iter().map(|&p| p as u128).collect();
        let mut remaining = self.n() as u128;
        let mut completions = self.k();
        let mut rank: u128 = 0;
        for &r in &b.assignment {
            let r = r as usize;
            for s in 0..r - 1 {
                if counts[s] > 0 {
                    rank += completions * counts[s] / remaining;
                }
            }
            completions = completions * counts[r - 1] / remaining;
            counts[r - 1] -= 1;
            remaining -= 1;
        }
        Ok(rank)
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, index: u128) -> Result<Ballot> {
        if index >= self.k() {
            return Err(Error::IndexOutOfRange {
                index,
                k: self.k(),
            });
        }
        let mut counts: Vec<u128> = self.shape.parts().iter().map(|&p| p as u128).collect();
        let mut remaining = self.n() as u128;
        let mut completions = self.k();
        let mut index = index;
        let mut assignment = Vec::with_capacity(self.n());
        for _ in 0..self.n() {
            for r in 0..self.m() {
                if counts[r] == 0 {
                    continue;
                }
                let with_r = completions * counts[r] / remaining;
                if index < with_r {
                    assignment.push((r + 1) as u8);
                    completions = with_r;
                    counts[r] -= 1;
                    remaining -= 1;
                    break;
                }
                index -= with_r;
            }
        }
        Ok(Ballot { assignment })
    }

    /// The action `τ.b = b ∘ τ`: the returned ballot places `X` where `b`
    /// places `τ(X)`.
    pub fn permute_ballot(&self, tau: &crate::action::CandidatePermutation, b: &Ballot) -> Result<Ballot> {
        if tau.degree() != self.n() {
            return Err(Error::NotABijection(self.n()));
        }
        self.validate_ballot(b)?;
        let assignment = (0..self.n()).map(|x| b.assignment[tau.image(x)]).collect();
        Ok(Ballot { assignment })
    }

    /// Number of ballots placing a fixed candidate in row `j` (1-based).
    pub fn count_at_row(&self, j: usize) -> u128 {
        let mut parts: Vec<usize> = self.shape.parts().to_vec();
        parts[j - 1] -= 1;
        parts.retain(|&p| p > 0);
        if parts.is_empty() {
            return 1;
        }
        multinomial(&parts).expect("reduced multinomial fits if full one does")
    }

    /// `|C_λ(i, j)|`: ballots placing one fixed candidate in row `i` and a
    /// second in row `j`.
    pub fn count_pair(&self, i: usize, j: usize) -> u128 {
        let mut parts: Vec<usize> = self.shape.parts().to_vec();
        if i == j {
            if parts[i - 1] < 2 {
                return 0;
            }
            parts[i - 1] -= 2;
        } else {
            parts[i - 1] -= 1;
            parts[j - 1] -= 1;
        }
        parts.retain(|&p| p > 0);
        if parts.is_empty() {
            return 1;
        }
        multinomial(&parts).expect("reduced multinomial fits if full one does")
    }

    /// Renders a ballot as rows of names, each row sorted by candidate order.
    pub fn ballot_rows(&self, b: &Ballot) -> Vec<Vec<String>> {
        b.row_sets(self.m())
            .into_iter()
            .map(|row| row.into_iter().map(|i| self.candidates.name(i).to_string()).collect())
            .collect()
    }

    pub fn format_ballot(&self, b: &Ballot) -> String {
        let rows: Vec<String> = self
            .ballot_rows(b)
            .iter()
            .map(|row| row.join(" "))
            .collect();
        format!("[{}]", rows.join(" | "))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Advances `seq` to its next lexicographic permutation; `false` at the last.
fn next_multiset_permutation(seq: &mut [u8]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let pivot = i - 1;
    let mut j = seq.len() - 1;
    while seq[j] <= seq[pivot] {
        j -= 1;
    }
    seq.swap(pivot, j);
    seq[pivot + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::CandidatePermutation;

    fn space(names: &[&str], parts: &[usize]) -> Arc<BallotSpace> {
        BallotSpace::new(
            CandidateSet::new(names.to_vec()).unwrap(),
            Composition::new(parts.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_two_enumeration_matches_known_order() {
        let s = space(&["A", "B", "C", "D"], &[2, 2]);
        let ballots = s.enumerate_tabloids().unwrap();
        assert_eq!(ballots.len(), 6);
        let expected = [
            vec![vec!["A", "B"], vec!["C", "D"]],
            vec![vec!["A", "C"], vec!["B", "D"]],
            vec![vec!["A", "D"], vec!["B", "C"]],
            vec![vec!["B", "C"], vec!["A", "D"]],
            vec![vec!["B", "D"], vec!["A", "C"]],
            vec![vec!["C", "D"], vec!["A", "B"]],
        ];
        for (b, rows) in ballots.iter().zip(expected.iter()) {
            assert_eq!(*b, s.ballot_from_rows(rows).unwrap());
        }
    }

    #[test]
    fn single_candidate_space() {
        let s = space(&["A"], &[1]);
        let ballots = s.enumerate_tabloids().unwrap();
        assert_eq!(ballots.len(), 1);
        assert_eq!(s.evaluate(&ballots[0], "A").unwrap(), 1);
    }

    #[test]
    fn multinomial_count_for_six_candidates() {
        let s = space(&["A", "B", "C", "D", "E", "F"], &[2, 1, 3]);
        assert_eq!(s.k(), 60);
        assert_eq!(s.enumerate_tabloids().unwrap().len(), 60);
    }

    #[test]
    fn evaluation_map_on_partial_ballots() {
        let s = space(&["A", "B", "C", "D", "E", "F"], &[2, 1, 3]);
        let b1 = s
            .ballot_from_rows(&[vec!["B", "D"], vec!["A"], vec!["C", "E", "F"]])
            .unwrap();
        let b2 = s
            .ballot_from_rows(&[vec!["A", "B"], vec!["E"], vec!["C", "D", "F"]])
            .unwrap();
        assert_eq!(s.evaluate(&b1, "D").unwrap(), 1);
        assert_eq!(s.evaluate(&b2, "D").unwrap(), 3);
        assert_eq!(
            s.evaluate(&b1, "Z").unwrap_err(),
            Error::UnknownCandidate("Z".into())
        );
    }

    #[test]
    fn single_row_forces_row_one() {
        let s = space(&["A", "B", "C"], &[3]);
        for b in s.enumerate_tabloids().unwrap() {
            for name in ["A", "B", "C"] {
                assert_eq!(s.evaluate(&b, name).unwrap(), 1);
            }
        }
    }

    #[test]
    fn rank_unrank_round_trip() {
        let s = space(&["A", "B", "C", "D"], &[2, 2]);
        let ballots = s.enumerate_tabloids().unwrap();
        for (i, b) in ballots.iter().enumerate() {
            assert_eq!(s.rank(b).unwrap(), i as u128);
            assert_eq!(&s.unrank(i as u128).unwrap(), b);
        }
        assert!(matches!(
            s.unrank(6),
            Err(Error::IndexOutOfRange { index: 6, k: 6 })
        ));
    }

    #[test]
    fn unrank_zero_is_first_known_ballot() {
        let s = space(&["A", "B", "C", "D"], &[2, 2]);
        let b = s.unrank(0).unwrap();
        assert_eq!(
            b,
            s.ballot_from_rows(&[vec!["A", "B"], vec!["C", "D"]]).unwrap()
        );
    }

    #[test]
    fn transposition_action_on_two_two() {
        let s = space(&["A", "B", "C", "D"], &[2, 2]);
        let ballots = s.enumerate_tabloids().unwrap();
        let tau = CandidatePermutation::from_cycles(s.candidates(), "(A B)").unwrap();
        let image = |i: usize| {
            let b = s.permute_ballot(&tau, &ballots[i]).unwrap();
            s.rank(&b).unwrap() as usize
        };
        assert_eq!(image(0), 0);
        assert_eq!(image(1), 3);
        assert_eq!(image(2), 4);
        assert_eq!(image(5), 5);
    }

    #[test]
    fn identity_action_fixes_all_ballots() {
        let s = space(&["A", "B", "C"], &[1, 1, 1]);
        let id = CandidatePermutation::identity(3);
        for b in s.enumerate_tabloids().unwrap() {
            assert_eq!(s.permute_ballot(&id, &b).unwrap(), b);
        }
    }

    #[test]
    fn action_composes_contravariantly() {
        // σ.(τ.b) = (τ∘σ).b with τ∘σ applied right to left.
        let s = space(&["A", "B", "C", "D"], &[1, 1, 2]);
        let cs = s.candidates();
        let tau = CandidatePermutation::from_cycles(cs, "(A B C)").unwrap();
        let sigma = CandidatePermutation::from_cycles(cs, "(C D)").unwrap();
        let tau_sigma = tau.compose(&sigma).unwrap();
        for b in s.enumerate_tabloids().unwrap() {
            let lhs = s
                .permute_ballot(&sigma, &s.permute_ballot(&tau, &b).unwrap())
                .unwrap();
            let rhs = s.permute_ballot(&tau_sigma, &b).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluate_commutes_with_action() {
        let s = space(&["A", "B", "C"], &[1, 2]);
        let cs = s.candidates();
        for cycle in ["(A B)", "(B C)", "(A B C)"] {
            let tau = CandidatePermutation::from_cycles(cs, cycle).unwrap();
            for b in s.enumerate_tabloids().unwrap() {
                let tb = s.permute_ballot(&tau, &b).unwrap();
                for x in 0..3 {
                    assert_eq!(tb.row_of(x), b.row_of(tau.image(x)));
                }
            }
        }
    }

    #[test]
    fn cap_refusal_reports_required_size() {
        let cs = CandidateSet::with_default_names(10).unwrap();
        let shape = Composition::new(vec![1; 10]).unwrap();
        let s = BallotSpace::with_cap(cs, shape, 1000).unwrap();
        match s.enumerate_tabloids() {
            Err(Error::SizeCapExceeded { k, cap }) => {
                assert_eq!(k, 3_628_800);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(CandidateSet::new(vec!["A", "A"]).is_err());
        assert!(CandidateSet::new(vec![""]).is_err());
        assert!(Composition::new(vec![1, 0, 2]).is_err());
        assert!(Composition::new(vec![]).is_err());
        let cs = CandidateSet::new(vec!["A", "B"]).unwrap();
        assert!(BallotSpace::new(cs, Composition::new(vec![1, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn pair_counts_sum_to_k() {
        let s = space(&["A", "B", "C", "D", "E"], &[2, 1, 2]);
        let mut total = 0u128;
        for i in 1..=s.m() {
            for j in 1..=s.m() {
                total += s.count_pair(i, j);
            }
        }
        assert_eq!(total, s.k());
        // |C_λ(i,j)| = |C_λ(j,i)|
        for i in 1..=s.m() {
            for j in 1..=s.m() {
                assert_eq!(s.count_pair(i, j), s.count_pair(j, i));
            }
        }
    }
}
