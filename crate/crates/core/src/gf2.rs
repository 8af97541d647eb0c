//! Sparse column arithmetic over the two-element field.
//!
//! A column is a strictly increasing `Vec<usize>` of row indices holding a one; its pivot is the
//! largest row index.

/// `acc += other` over GF(2), as a symmetric difference of sorted index lists.
pub fn add_into(acc: &mut Vec<usize>, other: &[usize]) {
    if other.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() && j < other.len() {
        match acc[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(acc[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&acc[i..]);
    out.extend_from_slice(&other[j..]);
    *acc = out;
}

pub fn pivot(col: &[usize]) -> Option<usize> {
    col.last().copied()
}

/// Reduces the columns in place with the standard left-to-right algorithm and returns, for each
/// column, whether it survived as a nonzero column. `rows` bounds the row indices.
pub fn reduce_columns(columns: &mut [Vec<usize>], rows: usize) -> Vec<bool> {
    let mut owner: Vec<Option<usize>> = vec![None; rows];
    let mut nonzero = vec![false; columns.len()];
    for j in 0..columns.len() {
        while let Some(p) = pivot(&columns[j]) {
            match owner[p] {
                Some(k) => {
                    let (left, right) = columns.split_at_mut(j);
                    add_into(&mut right[0], &left[k]);
                }
                None => {
                    owner[p] = Some(j);
                    nonzero[j] = true;
                    break;
                }
            }
        }
    }
    nonzero
}
