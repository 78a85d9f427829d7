//! Goeritz matrix and the Gordon-Litherland signature formula.
//!
//! The faces of a connected diagram are checkerboard colored. With the
//! white faces as vertices, each crossing joining two white faces carries an
//! incidence `eta = -1` when its white corners are the ones swept by turning
//! the over-strand counterclockwise (corners 1 and 3), and `+1` otherwise.
//! A crossing is of type II when its black corners are the ones joined by
//! the oriented smoothing. Then `sigma = sign(G) - sum of eta over type II`.

use super::snf::IntMatrix;
use super::InvariantError;
use crate::diagram::{PdCode, Sign};

/// Which color class provides the matrix rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shading {
    /// The class containing corner 0 of crossing 0.
    First,
    Second,
}

/// Face index of every corner, and a 2-coloring of the faces.
fn colored_faces(d: &PdCode) -> (Vec<[usize; 4]>, Vec<u8>) {
    let faces = d.faces();
    let mut corner_face = vec![[usize::MAX; 4]; d.crossing_count()];
    for (f, corners) in faces.iter().enumerate() {
        for &(c, k) in corners {
            corner_face[c][k as usize] = f;
        }
    }
    // neighbouring corners of a crossing lie in faces of opposite colors
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for cf in &corner_face {
        for k in 0..4 {
            let (a, b) = (cf[k], cf[(k + 1) % 4]);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut color = vec![u8::MAX; faces.len()];
    let mut stack = vec![corner_face[0][0]];
    color[corner_face[0][0]] = 0;
    while let Some(f) = stack.pop() {
        for &g in &adj[f] {
            if color[g] == u8::MAX {
                color[g] = 1 - color[f];
                stack.push(g);
            } else {
                debug_assert_ne!(color[g], color[f], "faces are not 2-colorable");
            }
        }
    }
    (corner_face, color)
}

/// Goeritz matrix of the chosen color class and the Gordon-Litherland
/// correction, so that `signature = sign(G) - correction`.
pub fn goeritz_with(d: &PdCode, shading: Shading) -> Result<(IntMatrix, i64), InvariantError> {
    if d.crossing_count() == 0 && d.free_loops() <= 1 {
        return Ok((IntMatrix::zeros(0, 0), 0));
    }
    if d.free_loops() > 0 || !d.is_connected_graph() {
        return Err(InvariantError::DisconnectedDiagram);
    }
    let (corner_face, color) = colored_faces(d);
    let white = match shading {
        Shading::First => 0,
        Shading::Second => 1,
    };
    let mut index = vec![usize::MAX; color.len()];
    let mut n_white = 0;
    for (f, &c) in color.iter().enumerate() {
        if c == white {
            index[f] = n_white;
            n_white += 1;
        }
    }
    let mut full = IntMatrix::zeros(n_white, n_white);
    let mut correction = 0i64;
    for (cr, cf) in d.crossings().iter().zip(&corner_face) {
        let odd_white = color[cf[1]] == white;
        let eta: i64 = if odd_white { -1 } else { 1 };
        // corners joined by the oriented smoothing: 1,3 (positive), 0,2 (negative)
        let merged_odd = cr.sign == Sign::Positive;
        if merged_odd != odd_white {
            correction += eta;
        }
        let (a, b) = if odd_white { (cf[1], cf[3]) } else { (cf[0], cf[2]) };
        let (i, j) = (index[a], index[b]);
        if i != j {
            full[(i, j)] -= eta;
            full[(j, i)] -= eta;
            full[(i, i)] += eta;
            full[(j, j)] += eta;
        }
    }
    // drop the last white face
    let k = n_white - 1;
    let mut g = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = full[(i, j)];
        }
    }
    Ok((g, correction))
}

/// Goeritz matrix of the first color class.
pub fn goeritz(d: &PdCode) -> Result<(IntMatrix, i64), InvariantError> {
    goeritz_with(d, Shading::First)
}

/// Signature of a connected diagram via Gordon-Litherland.
pub fn signature(d: &PdCode) -> Result<i32, InvariantError> {
    let (g, correction) = goeritz(d)?;
    Ok(g.signature() - correction as i32)
}
