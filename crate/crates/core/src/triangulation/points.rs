//! Lattice points of the dilated simplex and the S4 action on them.

/// A point `t = (t0, t1, t2, t3)` of the simplex dilated by `n`.
pub type Point = [u32; 4];

/// A permutation of the four vertices: `perm[v]` is the image of `v`.
pub type Perm = [usize; 4];

/// All points of `Δ³_n(Z)`, in lexicographic order.
pub fn simplex_points(n: u32) -> Vec<Point> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                out.push([a, b, c, n - a - b - c]);
            }
        }
    }
    out
}

/// Points of `Δ³_n(Z)` other than the four vertices: the index set of the
/// Ptolemy coordinates of one tetrahedron.
pub fn integral_points(n: u32) -> Vec<Point> {
    simplex_points(n)
        .into_iter()
        .filter(|t| !is_vertex(t))
        .collect()
}

pub fn is_vertex(t: &Point) -> bool {
    t.iter().filter(|&&x| x != 0).count() == 1
}

/// Number of non-vertex integral points, `C(n+3, 3) - 4`.
pub fn integral_point_count(n: u32) -> usize {
    let n = n as usize;
    (n + 3) * (n + 2) * (n + 1) / 6 - 4
}

pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Point with ones at the two given vertices: the edge `ij` at `n = 2`.
pub fn edge(i: usize, j: usize) -> Point {
    let mut t = [0; 4];
    t[i] += 1;
    t[j] += 1;
    t
}

/// `(σ·t)_{σ(v)} = t_v`.
pub fn act(sigma: &Perm, t: &Point) -> Point {
    let mut out = [0; 4];
    for v in 0..4 {
        out[sigma[v]] = t[v];
    }
    out
}

pub fn inverse(sigma: &Perm) -> Perm {
    let mut inv = [0; 4];
    for v in 0..4 {
        inv[sigma[v]] = v;
    }
    inv
}

pub fn is_permutation(sigma: &[usize]) -> bool {
    let mut seen = [false; 4];
    sigma.len() == 4
        && sigma.iter().all(|&v| {
            if v >= 4 || seen[v] {
                false
            } else {
                seen[v] = true;
                true
            }
        })
}

/// Determinant of the identity with its rows split into blocks of sizes
/// `t0..t3` and the blocks rearranged in the order `σ(0), .., σ(3)`:
/// `(-1)^{Σ_{p<q, σ(p)>σ(q)} t_{σ(p)} t_{σ(q)}}`.
pub fn sign_multiplier(sigma: &Perm, t: &Point) -> i8 {
    let mut parity = 0u64;
    for p in 0..4 {
        for q in p + 1..4 {
            if sigma[p] > sigma[q] {
                parity += (t[sigma[p]] as u64) * (t[sigma[q]] as u64);
            }
        }
    }
    if parity.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Renders `t` as the concatenated digits used in coordinate names, e.g. `0110`.
pub fn label(t: &Point) -> String {
    t.iter().map(|d| d.to_string()).collect()
}

/// All 24 permutations in lexicographic order.
pub fn all_permutations() -> Vec<Perm> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if is_permutation(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sign of the block-permuted identity computed as a permutation of
    /// row indices, without the closed formula.
    fn block_determinant(sigma: &Perm, t: &Point) -> i8 {
        let mut start = [0usize; 4];
        for v in 1..4 {
            start[v] = start[v - 1] + t[v - 1] as usize;
        }
        let mut rows = Vec::new();
        for p in 0..4 {
            let v = sigma[p];
            rows.extend(start[v]..start[v] + t[v] as usize);
        }
        let mut inversions = 0;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i] > rows[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(integral_points(2).len(), 6);
        assert_eq!(integral_points(3).len(), 16);
        assert_eq!(integral_points(4).len(), 31);
        for n in 2..8 {
            assert_eq!(integral_points(n).len(), integral_point_count(n));
        }
    }

    #[test]
    fn sign_examples() {
        let swap = [1, 0, 2, 3];
        assert_eq!(sign_multiplier(&[0, 1, 2, 3], &[1, 1, 0, 0]), 1);
        assert_eq!(sign_multiplier(&swap, &[1, 1, 0, 0]), -1);
        assert_eq!(sign_multiplier(&swap, &[1, 0, 1, 0]), 1);
    }

    #[test]
    fn sign_equals_block_determinant() {
        for n in 2..=4 {
            for sigma in all_permutations() {
                for t in simplex_points(n) {
                    assert_eq!(sign_multiplier(&sigma, &t), block_determinant(&sigma, &t));
                }
            }
        }
    }

    #[test]
    fn sign_is_inverse_coherent() {
        // the blocks of I_{σ,t} have sizes t_{σ(0)}, .., t_{σ(3)}, which is the
        // point σ⁻¹·t; undoing the rearrangement restores the identity
        for n in 2..=4 {
            for sigma in all_permutations() {
                let inv = inverse(&sigma);
                for t in integral_points(n) {
                    let s = sign_multiplier(&sigma, &t) * sign_multiplier(&inv, &act(&inv, &t));
                    assert_eq!(s, 1);
                }
            }
        }
    }

    #[test]
    fn edge_relations_are_sign_free_iff_order_preserved() {
        // c_{i'j'} = ±c_{ij} with i' = σ(i), j' = σ(j); the sign is + exactly
        // when i - j and i' - j' have the same sign.
        for sigma in all_permutations() {
            let inv = inverse(&sigma);
            for i in 0..4 {
                for j in i + 1..4 {
                    let t = edge(i, j);
                    let s = sign_multiplier(&inv, &t);
                    let preserved = sigma[i] < sigma[j];
                    assert_eq!(s == 1, preserved, "{sigma:?} {i}{j}");
                }
            }
        }
    }

    #[test]
    fn action_composes() {
        let s = [2, 0, 3, 1];
        let t = [0, 1, 2, 0];
        assert_eq!(act(&inverse(&s), &act(&s, &t)), t);
        assert_eq!(act(&s, &t), [1, 0, 0, 2]);
    }
}
