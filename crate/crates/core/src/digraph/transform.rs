use super::{Digraph, DigraphError, MAX_VERTICES};

impl Digraph {
    /// Replaces arc `(tail, head)` by the path `tail -> w -> head` through a
    /// new vertex `w = n`.
    pub fn subdivide_arc(&self, tail: usize, head: usize) -> Result<Digraph, DigraphError> {
        if !self.has_arc(tail, head) {
            return Err(DigraphError::MissingArc(tail, head));
        }
        let n = self.n();
        if n + 1 > MAX_VERTICES {
            return Err(DigraphError::TooManyVertices(n + 1));
        }
        let mut out = self.out_masks().to_vec();
        out[tail] &= !(1u64 << head);
        out[tail] |= 1u64 << n;
        out.push(1u64 << head);
        Ok(Digraph::from_out_masks_unchecked(n + 1, out))
    }

    /// Moves the arcs `(s, p)` to `(s, q)` for every `s` in `sources`.
    ///
    /// Each source must have an arc to `p`, must not be `q` and must not
    /// already point at `q`. The result need not be strongly connected.
    pub fn retarget_in_arcs(&self, sources: &[usize], p: usize, q: usize) -> Result<Digraph, DigraphError> {
        let n = self.n();
        if p >= n || q >= n {
            return Err(DigraphError::OutOfRange { tail: p, head: q, n });
        }
        let violated = |s: usize, reason: &str| DigraphError::PreconditionViolated {
            source_vertex: s,
            reason: reason.to_string(),
        };
        if p == q {
            return Err(violated(p, "p and q must differ"));
        }
        let mut out = self.out_masks().to_vec();
        let mut seen = 0u64;
        for &s in sources {
            if s >= n {
                return Err(violated(s, "vertex out of range"));
            }
            if seen & (1u64 << s) != 0 {
                return Err(violated(s, "listed twice"));
            }
            seen |= 1u64 << s;
            if s == q {
                return Err(violated(s, "source equals q"));
            }
            if !self.has_arc(s, p) {
                return Err(violated(s, "no arc to p"));
            }
            if self.has_arc(s, q) {
                return Err(violated(s, "already has an arc to q"));
            }
            out[s] = (out[s] & !(1u64 << p)) | (1u64 << q);
        }
        Ok(Digraph::from_out_masks_unchecked(n, out))
    }
}
