use crate::error::{Error, Result};
use crate::sbm::GroundTruth;
use crate::spectral::{largest_eigenpairs, tol, SymMatrix};

/// Rounds a binary relaxation iterate through its top eigenvector.
///
/// With `plus_size = Some(k)` the `k` largest coordinates (ties to the lower
/// index) form the `+1` side; both orientations of the eigenvector are tried
/// and the one with the larger `sigma^T Y sigma` wins. Otherwise signs are
/// taken coordinatewise. When the two sides have equal size, vertex 0 is put
/// on the `+1` side.
pub fn round_binary(y: &SymMatrix, plus_size: Option<usize>) -> Result<GroundTruth> {
    let n = y.n();
    if n == 0 {
        return Ok(GroundTruth::Binary { sigma: vec![] });
    }
    let sigma = if n == 1 {
        vec![1]
    } else {
        let e = largest_eigenpairs(y, 2)?;
        let (l2, l1) = (e.values[0], e.values[1]);
        let gap = l1 - l2;
        if gap <= tol::EIGEN_GAP * l1.abs().max(1.0) {
            return Err(Error::DegenerateSpectrum { gap });
        }
        let v = e.vector(1).unwrap();
        match plus_size {
            Some(k) => {
                let pos = top_k(v, k, 1.0);
                let neg = top_k(v, k, -1.0);
                let score = |s: &[i8]| {
                    let f: Vec<f64> = s.iter().map(|&x| x as f64).collect();
                    y.quad_form(&f)
                };
                if score(&neg) > score(&pos) {
                    neg
                } else {
                    pos
                }
            }
            None => v.iter().map(|&x| if x >= 0.0 { 1 } else { -1 }).collect(),
        }
    };
    Ok(GroundTruth::Binary {
        sigma: canonical_sign(sigma, plus_size),
    })
}

fn top_k(v: &[f64], k: usize, orient: f64) -> Vec<i8> {
    // entries equal up to rounding noise count as ties
    let unit = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) * 1e-10;
    let key: Vec<f64> = v
        .iter()
        .map(|&x| if unit > 0.0 { (orient * x / unit).round() } else { 0.0 })
        .collect();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| key[j].total_cmp(&key[i]).then(i.cmp(&j)));
    let mut s = vec![-1i8; v.len()];
    for &i in idx.iter().take(k) {
        s[i] = 1;
    }
    s
}

fn canonical_sign(mut sigma: Vec<i8>, plus_size: Option<usize>) -> Vec<i8> {
    let n = sigma.len();
    let symmetric = match plus_size {
        Some(k) => 2 * k == n,
        None => true,
    };
    if symmetric && sigma[0] == -1 {
        sigma.iter_mut().for_each(|s| *s = -*s);
    }
    sigma
}

/// Reads a partition off a general relaxation iterate: `Z_ii < 1/2` marks an
/// outlier and `Z_ij > 1/2` links two vertices. Linked components must be
/// cliques whose sizes match `sizes` as a multiset; clusters are numbered by
/// decreasing size, ties by smallest member.
pub fn round_general(z: &SymMatrix, sizes: &[usize]) -> Result<GroundTruth> {
    let n = z.n();
    let th = tol::CLUSTER_THRESHOLD;
    let inside: Vec<bool> = (0..n).map(|i| z.get(i, i) >= th).collect();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if !inside[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut head = 0;
        while head < members.len() {
            let i = members[head];
            head += 1;
            for j in 0..n {
                if j != i && z.get(i, j) > th {
                    if !inside[j] {
                        return Err(Error::InconsistentRelation);
                    }
                    if comp[j] == usize::MAX {
                        comp[j] = id;
                        members.push(j);
                    }
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    for c in &comps {
        for (x, &i) in c.iter().enumerate() {
            for &j in &c[x + 1..] {
                if z.get(i, j) <= th {
                    return Err(Error::InconsistentRelation);
                }
            }
        }
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut expected = sizes.to_vec();
    expected.sort_unstable_by(|a, b| b.cmp(a));
    let found: Vec<usize> = comps.iter().map(|c| c.len()).collect();
    if found != expected {
        return Err(Error::SizeMismatch { expected, found });
    }
    let mut labels = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &i in c {
            labels[i] = k + 1;
        }
    }
    Ok(GroundTruth::General {
        labels,
        sizes: expected,
    })
}
