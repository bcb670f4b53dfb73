//! Exhaustive PDS search over unions of blocks.
//!
//! In orbit-restricted mode the blocks are the power classes of the group:
//! when `Δ` is a perfect square a regular PDS is closed under every multiplier
//! coprime to the order of each of its elements, so it is a union of power
//! classes. Unrestricted mode uses the `{g, -g}` pairs instead, which only
//! assumes `D = -D`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::gcd;
use crate::group::{AbelianGroup, CharacterIndex, GroupElement, GroupError, HallSubgroup};
use crate::pds::{verify_pds, CandidateSet, PdsParams, CHARACTER_TOLERANCE};

/// Largest group order accepted by unrestricted search unless overridden.
pub const DEFAULT_BRUTE_BOUND: u64 = 33;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("orbit-restricted search needs a perfect-square Δ, target {0} has Δ = {1}")]
    DeltaNotSquare(PdsParams, i64),
    #[error("unrestricted search is limited to v <= {bound}, got v = {v}")]
    OverBound { v: u64, bound: u64 },
    #[error("target {target} does not match the group order {v}")]
    OrderMismatch { target: PdsParams, v: u64 },
    #[error("candidate is not a regular PDS")]
    NotRegularPds,
    #[error("complement of the subgroup is not a p-group")]
    ComplementNotPGroup,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    OrbitRestricted,
    Unrestricted,
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub group: AbelianGroup,
    pub target: PdsParams,
    pub mode: SearchMode,
    /// Maximum number of solutions to report; 0 reports all.
    pub limit: usize,
    pub brute_bound: u64,
}

impl SearchProblem {
    pub fn new(group: AbelianGroup, target: PdsParams, mode: SearchMode) -> Self {
        Self {
            group,
            target,
            mode,
            limit: 0,
            brute_bound: DEFAULT_BRUTE_BOUND,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub solutions: Vec<CandidateSet>,
    pub nodes_explored: u64,
    /// Whether the whole space was exhausted.
    pub complete: bool,
}

/// Blocks of element indices, ordered by smallest member.
fn pair_blocks(group: &AbelianGroup) -> Vec<Vec<usize>> {
    let v = group.order() as usize;
    (1..v)
        .filter_map(|i| {
            let j = group.neg_idx(i);
            match i.cmp(&j) {
                std::cmp::Ordering::Less => Some(vec![i, j]),
                std::cmp::Ordering::Equal => Some(vec![i]),
                std::cmp::Ordering::Greater => None,
            }
        })
        .collect()
}

fn class_blocks(group: &AbelianGroup) -> Vec<Vec<usize>> {
    group
        .power_class_partition()
        .iter()
        .map(|c| c.iter().map(|g| group.index_of(g)).collect())
        .collect()
}

/// Real class sums per character representative, with suffix bounds of the
/// reachable completion.
struct CharacterBounds {
    targets: [f64; 2],
    /// `sums[r][j]`: sum of character `r` over block `j`.
    sums: Vec<Vec<f64>>,
    /// `pos[r][j]` / `neg[r][j]`: sum of positive / negative block sums from `j` on.
    pos: Vec<Vec<f64>>,
    neg: Vec<Vec<f64>>,
}

impl CharacterBounds {
    fn new(group: &AbelianGroup, blocks: &[Vec<usize>], target: &PdsParams) -> Self {
        // Characters in one power class of the dual take Galois-conjugate
        // values on a power class; class sums are rational integers, so one
        // representative per class suffices.
        let reps: Vec<CharacterIndex> = group
            .power_class_partition()
            .into_iter()
            .map(|c| CharacterIndex::from(c.into_iter().next().expect("nonempty")))
            .collect();
        let elements: Vec<GroupElement> = group.elements().collect();
        let sums: Vec<Vec<f64>> = reps
            .iter()
            .map(|chi| {
                blocks
                    .iter()
                    .map(|b| {
                        let s: Complex64 =
                            group.character_sum(chi, b.iter().map(|&i| &elements[i]));
                        s.re
                    })
                    .collect()
            })
            .collect();
        let suffix = |pick: fn(f64) -> f64| -> Vec<Vec<f64>> {
            sums.iter()
                .map(|row| {
                    let mut acc = vec![0.0; row.len() + 1];
                    for j in (0..row.len()).rev() {
                        acc[j] = acc[j + 1] + pick(row[j]);
                    }
                    acc
                })
                .collect()
        };
        let pos = suffix(|x| x.max(0.0));
        let neg = suffix(|x| x.min(0.0));
        Self {
            targets: target.character_values(),
            sums,
            pos,
            neg,
        }
    }

    fn reachable(&self, partial: &[f64], start: usize) -> bool {
        partial.iter().enumerate().all(|(r, &s)| {
            let lo = s + self.neg[r][start] - CHARACTER_TOLERANCE;
            let hi = s + self.pos[r][start] + CHARACTER_TOLERANCE;
            self.targets.iter().any(|t| (lo..=hi).contains(t))
        })
    }
}

struct Searcher<'a> {
    group: &'a AbelianGroup,
    target: PdsParams,
    blocks: &'a [Vec<usize>],
    suffix_size: Vec<usize>,
    bounds: Option<&'a CharacterBounds>,
    limit: usize,
}

#[derive(Default)]
struct SubtreeOutcome {
    solutions: Vec<CandidateSet>,
    nodes: u64,
    truncated: bool,
}

impl Searcher<'_> {
    fn k(&self) -> usize {
        self.target.k as usize
    }

    fn extend_partial(&self, partial: &mut [f64], block: usize, sign: f64) {
        if let Some(b) = self.bounds {
            for (r, s) in partial.iter_mut().enumerate() {
                *s += sign * b.sums[r][block];
            }
        }
    }

    fn viable(&self, size: usize, partial: &[f64], start: usize) -> bool {
        if size + self.suffix_size[start] < self.k() && size != self.k() {
            return false;
        }
        self.bounds.is_none_or(|b| b.reachable(partial, start))
    }

    fn leaf(&self, chosen: &[usize], out: &mut SubtreeOutcome) {
        let members = chosen.iter().flat_map(|&j| self.blocks[j].iter().copied());
        let candidate = CandidateSet::from_indices(self.group.clone(), members);
        let report = verify_pds(&candidate);
        if report.is_pds && report.params == Some(self.target) {
            out.solutions.push(candidate);
        }
    }

    fn dfs(
        &self,
        chosen: &mut Vec<usize>,
        size: usize,
        partial: &mut [f64],
        start: usize,
        out: &mut SubtreeOutcome,
    ) {
        out.nodes += 1;
        if size == self.k() {
            self.leaf(chosen, out);
            if self.limit > 0 && out.solutions.len() >= self.limit {
                out.truncated = true;
            }
            return;
        }
        for j in start..self.blocks.len() {
            if out.truncated {
                return;
            }
            let next = size + self.blocks[j].len();
            if next > self.k() {
                continue;
            }
            self.extend_partial(partial, j, 1.0);
            if self.viable(next, partial, j + 1) {
                chosen.push(j);
                self.dfs(chosen, next, partial, j + 1, out);
                chosen.pop();
            }
            self.extend_partial(partial, j, -1.0);
        }
    }
}

/// Runs the search. Top-level branches (the first chosen block) are explored
/// in parallel and merged in block order.
pub fn search(problem: &SearchProblem) -> Result<SearchResult, SearchError> {
    let group = &problem.group;
    let target = problem.target;
    let v = group.order();
    if target.v != v {
        return Err(SearchError::OrderMismatch { target, v });
    }
    let blocks = match problem.mode {
        SearchMode::OrbitRestricted => {
            if !target.delta_is_square() {
                return Err(SearchError::DeltaNotSquare(target, target.delta()));
            }
            class_blocks(group)
        }
        SearchMode::Unrestricted => {
            if v > problem.brute_bound {
                return Err(SearchError::OverBound {
                    v,
                    bound: problem.brute_bound,
                });
            }
            pair_blocks(group)
        }
    };
    let bounds = (problem.mode == SearchMode::OrbitRestricted)
        .then(|| CharacterBounds::new(group, &blocks, &target));
    let mut suffix_size = vec![0; blocks.len() + 1];
    for j in (0..blocks.len()).rev() {
        suffix_size[j] = suffix_size[j + 1] + blocks[j].len();
    }
    let searcher = Searcher {
        group,
        target,
        blocks: &blocks,
        suffix_size,
        bounds: bounds.as_ref(),
        limit: problem.limit,
    };
    let n_chars = bounds.as_ref().map_or(0, |b| b.sums.len());

    let mut root = SubtreeOutcome {
        nodes: 1,
        ..Default::default()
    };
    let empty = vec![0.0; n_chars];
    if searcher.k() == 0 {
        searcher.leaf(&[], &mut root);
    }
    let subtrees: Vec<SubtreeOutcome> = if searcher.k() == 0 || !searcher.viable(0, &empty, 0) {
        Vec::new()
    } else {
        (0..blocks.len())
            .into_par_iter()
            .map(|j| {
                let mut out = SubtreeOutcome::default();
                let size = blocks[j].len();
                if size > searcher.k() {
                    return out;
                }
                let mut partial = empty.clone();
                searcher.extend_partial(&mut partial, j, 1.0);
                if searcher.viable(size, &partial, j + 1) {
                    searcher.dfs(&mut vec![j], size, &mut partial, j + 1, &mut out);
                }
                out
            })
            .collect()
    };

    let mut solutions = root.solutions;
    let mut nodes = root.nodes;
    let mut truncated = false;
    for s in subtrees {
        nodes += s.nodes;
        truncated |= s.truncated;
        solutions.extend(s.solutions);
    }
    if problem.limit > 0 && solutions.len() >= problem.limit {
        truncated |= solutions.len() > problem.limit;
        solutions.truncate(problem.limit);
    }
    Ok(SearchResult {
        solutions,
        nodes_explored: nodes,
        complete: !truncated,
    })
}

/// `{n + x·h : 1 <= x < p^r, gcd(x, p) = 1}` where `o(h) = p^r` and `h` lies in
/// the (single-prime) complement of `subgroup`.
pub fn mixed_orbit(
    group: &AbelianGroup,
    subgroup: &HallSubgroup,
    n: &GroupElement,
    h: &GroupElement,
) -> Result<BTreeSet<GroupElement>, SearchError> {
    group.check(n)?;
    group.check(h)?;
    let complement = subgroup.complement(group);
    if complement.primes.len() != 1 {
        return Err(SearchError::ComplementNotPGroup);
    }
    let p = *complement.primes.iter().next().expect("one prime");
    if !subgroup.contains(n) {
        return Err(GroupError::WrongSupport {
            element: n.to_string(),
            what: "the subgroup",
        }
        .into());
    }
    if !complement.contains(h) {
        return Err(GroupError::WrongSupport {
            element: h.to_string(),
            what: "the complement",
        }
        .into());
    }
    let order = group.element_order(h)?;
    if order == 1 {
        return Err(GroupError::IdentityElement.into());
    }
    Ok((1..order)
        .filter(|&x| gcd(x, p) == 1)
        .map(|x| group.add(n, &group.scale(x, h)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    Closed,
    /// `element ∈ D` but `multiplier · element ∉ D`.
    Broken {
        element: GroupElement,
        multiplier: u64,
    },
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed)
    }
}

/// Whether a regular PDS with square `Δ` is a union of power classes.
pub fn multiplier_closure_check(d: &CandidateSet) -> Result<Closure, SearchError> {
    let report = verify_pds(d);
    let params = match report.params {
        Some(p) if report.is_pds && report.is_regular => p,
        _ => return Err(SearchError::NotRegularPds),
    };
    if !params.delta_is_square() {
        return Err(SearchError::DeltaNotSquare(params, params.delta()));
    }
    let group = &d.group;
    for g in &d.members {
        let ord = group.element_order(g)?;
        for s in (1..ord).filter(|&s| gcd(s, ord) == 1) {
            if !d.contains(&group.scale(s, g)) {
                return Ok(Closure::Broken {
                    element: g.clone(),
                    multiplier: s,
                });
            }
        }
    }
    Ok(Closure::Closed)
}

/// A failure of mixed-orbit closure: `element = n + h ∈ D` but `missing ∉ D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedOrbitWitness {
    pub prime: u64,
    pub element: GroupElement,
    pub missing: GroupElement,
}

/// For every prime `p` of `v`, writes `G = N × H` with `H` the Sylow
/// `p`-subgroup and checks `mixed_orbit(n, h) ⊆ D` for every `n + h ∈ D`
/// with `h ≠ e`.
pub fn check_mixed_orbit_closure(d: &CandidateSet) -> Result<(), MixedOrbitWitness> {
    let group = &d.group;
    for p in group.primes() {
        let others: BTreeSet<u64> = group.primes().into_iter().filter(|&q| q != p).collect();
        let n_sub = group.hall_subgroup(&others).expect("primes of v");
        for g in &d.members {
            let (n, h) = n_sub.split(g);
            if h.is_zero() {
                continue;
            }
            let orbit = mixed_orbit(group, &n_sub, &n, &h).expect("valid decomposition");
            if let Some(missing) = orbit.into_iter().find(|x| !d.contains(x)) {
                return Err(MixedOrbitWitness {
                    prime: p,
                    element: g.clone(),
                    missing,
                });
            }
        }
    }
    Ok(())
}

/// `D ∩ N` as a subset of `N`, with `N` viewed as a group in its own right.
pub fn restrict_to_hall(d: &CandidateSet, subgroup: &HallSubgroup) -> CandidateSet {
    let factors: Vec<u64> = subgroup
        .coords
        .iter()
        .map(|&j| d.group.factors()[j])
        .collect();
    let group = AbelianGroup::from_cyclic_orders(&factors).expect("prime-power factors");
    let members = d
        .members
        .iter()
        .filter(|g| subgroup.contains(g))
        .map(|g| GroupElement::new(subgroup.coords.iter().map(|&j| g.coords[j]).collect()));
    CandidateSet::new(group, members).expect("projected coordinates are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::paley_pds;
    use crate::pds::paley_params;

    fn grp(s: &str) -> AbelianGroup {
        AbelianGroup::parse(s).unwrap()
    }

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    #[test]
    fn orbit_search_z3_squared() {
        let problem = SearchProblem::new(
            grp("Z3^2"),
            paley_params(9).unwrap(),
            SearchMode::OrbitRestricted,
        );
        let r = search(&problem).unwrap();
        assert!(r.complete);
        assert!(!r.solutions.is_empty());
        for s in &r.solutions {
            assert_eq!(verify_pds(s).params, Some(paley_params(9).unwrap()));
        }
        // independent count: of the C(4,2) = 6 unions of two classes, those
        // whose complement in G \ {e} is also a union form Paley sets
        let brute: Vec<_> = (0..4usize)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                let classes = class_blocks(&grp("Z3^2"));
                let idx = classes[a].iter().chain(&classes[b]).copied();
                verify_pds(&CandidateSet::from_indices(grp("Z3^2"), idx)).params
                    == Some(paley_params(9).unwrap())
            })
            .collect();
        assert_eq!(brute.len(), r.solutions.len());
    }

    #[test]
    fn brute_search_z13() {
        let problem = SearchProblem::new(
            grp("Z13"),
            paley_params(13).unwrap(),
            SearchMode::Unrestricted,
        );
        let r = search(&problem).unwrap();
        let sets: Vec<Vec<u64>> = r
            .solutions
            .iter()
            .map(|s| s.members.iter().map(|g| g.coords[0]).collect())
            .collect();
        assert_eq!(
            sets,
            vec![vec![1, 3, 4, 9, 10, 12], vec![2, 5, 6, 7, 8, 11]]
        );
        assert!(r.complete);
    }

    #[test]
    fn orbit_search_z5_squared() {
        let target = paley_params(25).unwrap();
        let r = search(&SearchProblem::new(
            grp("Z5^2"),
            target,
            SearchMode::OrbitRestricted,
        ))
        .unwrap();
        assert!(!r.solutions.is_empty());
        let field = paley_pds(25).unwrap();
        assert!(r.solutions.contains(&field));
    }

    #[test]
    fn search_errors() {
        let p13 = paley_params(13).unwrap();
        assert!(matches!(
            search(&SearchProblem::new(
                grp("Z13"),
                p13,
                SearchMode::OrbitRestricted
            )),
            Err(SearchError::DeltaNotSquare(_, 13))
        ));
        let p37 = paley_params(37).unwrap();
        assert!(matches!(
            search(&SearchProblem::new(
                grp("Z37"),
                p37,
                SearchMode::Unrestricted
            )),
            Err(SearchError::OverBound { v: 37, bound: 33 })
        ));
        assert!(matches!(
            search(&SearchProblem::new(
                grp("Z3^2"),
                p13,
                SearchMode::Unrestricted
            )),
            Err(SearchError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn limit_truncates_deterministically() {
        let target = paley_params(25).unwrap();
        let all = search(&SearchProblem::new(
            grp("Z5^2"),
            target,
            SearchMode::Unrestricted,
        ))
        .unwrap();
        assert!(all.solutions.len() > 1);
        let one = search(
            &SearchProblem::new(grp("Z5^2"), target, SearchMode::Unrestricted).with_limit(1),
        )
        .unwrap();
        assert_eq!(one.solutions, all.solutions[..1]);
        assert!(!one.complete);
        let again = search(
            &SearchProblem::new(grp("Z5^2"), target, SearchMode::Unrestricted).with_limit(1),
        )
        .unwrap();
        assert_eq!(one.nodes_explored, again.nodes_explored);
    }

    #[test]
    fn trivial_targets() {
        // the empty set is a degenerate (v, 0, 0, 0) PDS
        let target = PdsParams {
            v: 9,
            k: 0,
            lambda: 0,
            mu: 0,
        };
        let r = search(&SearchProblem::new(
            grp("Z3^2"),
            target,
            SearchMode::Unrestricted,
        ))
        .unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert!(r.solutions[0].is_empty());
        // subgroup minus identity: (9, 2, 1, 0), Δ = 1 + 8 = 9
        let target = PdsParams {
            v: 9,
            k: 2,
            lambda: 1,
            mu: 0,
        };
        let r = search(&SearchProblem::new(
            grp("Z3^2"),
            target,
            SearchMode::OrbitRestricted,
        ))
        .unwrap();
        assert_eq!(r.solutions.len(), 4);
    }

    #[test]
    fn mixed_orbit_examples() {
        let g = grp("Z5xZ9");
        assert_eq!(g.factors(), &[9, 5]);
        let n_sub = g.hall_subgroup(&[5].into()).unwrap();
        let orbit = mixed_orbit(&g, &n_sub, &el(&[0, 2]), &el(&[3, 0])).unwrap();
        assert_eq!(orbit, [el(&[3, 2]), el(&[6, 2])].into());
        let orbit = mixed_orbit(&g, &n_sub, &el(&[0, 2]), &el(&[1, 0])).unwrap();
        assert_eq!(orbit.len(), 6);

        let g = grp("Z3xZ5");
        let n_sub = g.hall_subgroup(&[3].into()).unwrap();
        let h = el(&[0, 2]);
        assert_eq!(
            mixed_orbit(&g, &n_sub, &g.identity(), &h).unwrap(),
            g.power_class(&h).unwrap()
        );
        assert!(matches!(
            mixed_orbit(&g, &n_sub, &g.identity(), &g.identity()),
            Err(SearchError::Group(GroupError::IdentityElement))
        ));
        assert!(matches!(
            mixed_orbit(&g, &n_sub, &el(&[0, 1]), &h),
            Err(SearchError::Group(GroupError::WrongSupport { .. }))
        ));
        assert!(matches!(
            mixed_orbit(&g, &n_sub, &el(&[1, 0]), &el(&[1, 1])),
            Err(SearchError::Group(GroupError::WrongSupport { .. }))
        ));
        let g3 = grp("Z3xZ5xZ7");
        let n3 = g3.hall_subgroup(&[3].into()).unwrap();
        assert_eq!(
            mixed_orbit(&g3, &n3, &g3.identity(), &el(&[0, 1, 0])),
            Err(SearchError::ComplementNotPGroup)
        );
    }

    #[test]
    fn closure_checks() {
        let f9 = paley_pds(9).unwrap();
        assert_eq!(multiplier_closure_check(&f9), Ok(Closure::Closed));

        let f13 = paley_pds(13).unwrap();
        assert!(matches!(
            multiplier_closure_check(&f13),
            Err(SearchError::DeltaNotSquare(_, 13))
        ));

        let junk = CandidateSet::new(
            grp("Z3^2"),
            [el(&[0, 1]), el(&[1, 0]), el(&[1, 1]), el(&[2, 1])],
        )
        .unwrap();
        assert!(!verify_pds(&junk).is_pds);
        assert_eq!(
            multiplier_closure_check(&junk),
            Err(SearchError::NotRegularPds)
        );

        assert_eq!(check_mixed_orbit_closure(&f9), Ok(()));
    }

    #[test]
    fn regular_pds_in_z4_squared_are_class_unions() {
        // (16, 6, 2, 2): Δ = 16, found without the class restriction
        let g = grp("Z4^2");
        let target = PdsParams {
            v: 16,
            k: 6,
            lambda: 2,
            mu: 2,
        };
        let r = search(&SearchProblem::new(g, target, SearchMode::Unrestricted)).unwrap();
        assert!(!r.solutions.is_empty());
        for s in &r.solutions {
            assert!(multiplier_closure_check(s).unwrap().is_closed());
        }
    }

    #[test]
    fn hall_restriction_projection() {
        let g = grp("Z3xZ5");
        let d = CandidateSet::new(g.clone(), [el(&[1, 0]), el(&[2, 0]), el(&[1, 1])]).unwrap();
        let n_sub = g.hall_subgroup(&[3].into()).unwrap();
        let r = restrict_to_hall(&d, &n_sub);
        assert_eq!(r.group.to_string(), "Z3");
        assert_eq!(r.members, [el(&[1]), el(&[2])].into());
    }

    #[test]
    fn deterministic_node_counts() {
        let target = paley_params(25).unwrap();
        let a = search(&SearchProblem::new(
            grp("Z5^2"),
            target,
            SearchMode::OrbitRestricted,
        ))
        .unwrap();
        let b = search(&SearchProblem::new(
            grp("Z5^2"),
            target,
            SearchMode::OrbitRestricted,
        ))
        .unwrap();
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.solutions, b.solutions);
    }
}
