//! Sign bookkeeping for exterior products of basis vectors, encoded as
//! bitmasks of indices. All reorderings of wedge factors go through here.

/// Sign of `e_A ^ e_B` rewritten in ascending order, or `None` if A and B
/// share an index.
pub fn mul(a: u32, b: u32) -> Option<(bool, u32)> {
    if a & b != 0 {
        return None;
    }
    // count pairs i in A, j in B with i > j
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        bb &= bb - 1;
        swaps += (a >> j >> 1).count_ones();
    }
    Some((swaps % 2 == 1, a | b))
}

/// Removes `e_i` from the right end: e_A = sign * e_(A\i) ^ e_i.
pub fn right_remove(a: u32, i: usize) -> Option<(bool, u32)> {
    if a & (1 << i) == 0 {
        return None;
    }
    let after = (a >> i >> 1).count_ones();
    Some((after % 2 == 1, a & !(1 << i)))
}

/// Removes `e_i` from the left end: e_A = sign * e_i ^ e_(A\i).
pub fn left_remove(a: u32, i: usize) -> Option<(bool, u32)> {
    if a & (1 << i) == 0 {
        return None;
    }
    let before = (a & ((1u32 << i) - 1)).count_ones();
    Some((before % 2 == 1, a & !(1 << i)))
}

/// Sorts an index list into a mask; `None` on a repeated index.
pub fn from_indices(idx: &[usize]) -> Option<(bool, u32)> {
    let mut mask = 0u32;
    let mut neg = false;
    for &i in idx {
        let (s, m) = mul(mask, 1 << i)?;
        neg ^= s;
        mask = m;
    }
    Some((neg, mask))
}

pub fn indices(a: u32) -> Vec<usize> {
    (0..32).filter(|i| a & (1 << i) != 0).collect()
}

pub fn degree(a: u32) -> usize {
    a.count_ones() as usize
}
