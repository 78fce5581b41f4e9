use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Digraph, DigraphError};

/// Brute-force permutation search is bounded at `8! = 40320` relabelings.
pub const MAX_CANON_VERTICES: usize = 8;

/// Lexicographically minimal row-major adjacency bitstring over all vertex
/// relabelings, packed MSB-first into `ceil(n^2 / 8)` bytes. Two digraphs
/// share a key iff they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    n: usize,
    bytes: Vec<u8>,
}

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    fn from_code(n: usize, code: u64) -> Self {
        let len = (n * n).div_ceil(8);
        Self { n, bytes: code.to_be_bytes()[..len].to_vec() }
    }

    fn code(&self) -> u64 {
        let mut buf = [0u8; 8];
        buf[..self.bytes.len()].copy_from_slice(&self.bytes);
        u64::from_be_bytes(buf)
    }

    /// The canonically labelled representative encoded by this key.
    pub fn to_digraph(&self) -> Digraph {
        let n = self.n;
        let code = self.code();
        let mut out = vec![0u64; n];
        for (i, row) in out.iter_mut().enumerate() {
            for j in 0..n {
                if code >> (63 - (i * n + j)) & 1 == 1 {
                    *row |= 1u64 << j;
                }
            }
        }
        Digraph::from_out_masks_unchecked(n, out)
    }
}

/// `"<n>:<hex bytes>"`, e.g. `3:4c` for the directed triangle.
impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, hex) = s.split_once(':').ok_or("expected <n>:<hex>")?;
        let n: usize = n.parse().map_err(|_| format!("bad vertex count {n:?}"))?;
        if n == 0 || n > MAX_CANON_VERTICES {
            return Err(format!("vertex count {n} outside 1..={MAX_CANON_VERTICES}"));
        }
        let len = (n * n).div_ceil(8);
        if hex.len() != 2 * len || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("expected {} hex digits", 2 * len));
        }
        let bytes: Vec<u8> = (0..len).map(|i| u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).unwrap()).collect();
        let key = Self { n, bytes };
        let code = key.code();
        let tail_bits = if n * n < 64 { code << (n * n) } else { 0 };
        if tail_bits != 0 || (0..n).any(|i| code >> (63 - (i * n + i)) & 1 == 1) {
            return Err("bits outside the adjacency matrix or on the diagonal".into());
        }
        match key.to_digraph().canonical_key() {
            Ok(k) if k == key => Ok(key),
            _ => Err("not a canonical encoding".into()),
        }
    }
}

/// Row-major adjacency bits of `d` relabelled so that new vertex `i` is old
/// vertex `order[i]`, left-aligned in a `u64`.
fn adjacency_code(d: &Digraph, order: &[usize]) -> u64 {
    let n = order.len();
    let out = d.out_masks();
    let mut code = 0u64;
    for &oi in order {
        let row = out[oi];
        for &oj in order {
            code = (code << 1) | ((row >> oj) & 1);
        }
    }
    if n * n < 64 {
        code <<= 64 - n * n;
    }
    code
}

impl Digraph {
    /// Canonical isomorphism key by minimising over all `n!` relabelings.
    pub fn canonical_key(&self) -> Result<CanonicalKey, DigraphError> {
        let n = self.n();
        if n > MAX_CANON_VERTICES {
            return Err(DigraphError::TooLarge { what: "canonical key", n, max: MAX_CANON_VERTICES });
        }
        // Heap's algorithm over `order`.
        let mut order: Vec<usize> = (0..n).collect();
        let mut best = adjacency_code(self, &order);
        let mut c = vec![0usize; n];
        let mut i = 1;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    order.swap(0, i);
                } else {
                    order.swap(c[i], i);
                }
                best = best.min(adjacency_code(self, &order));
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(CanonicalKey::from_code(n, best))
    }
}
