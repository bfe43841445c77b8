//! How one deletion and one substitution move the first-order syndrome of
//! the differential sequence, split into per-error terms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::{self, BinSeq, ErrorOp};

/// What an error does to the affected pair of `ψ` symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorKind {
    #[serde(rename = "00->0")]
    Del00,
    #[serde(rename = "01->1")]
    Del01,
    #[serde(rename = "10->1")]
    Del10,
    #[serde(rename = "11->0")]
    Del11,
    #[serde(rename = "11->00")]
    Sub11,
    #[serde(rename = "01->10")]
    Sub01,
    #[serde(rename = "10->01")]
    Sub10,
    #[serde(rename = "00->11")]
    Sub00,
}

impl ErrorKind {
    fn deletion(a: u8, b: u8) -> Self {
        match (a, b) {
            (0, 0) => ErrorKind::Del00,
            (0, 1) => ErrorKind::Del01,
            (1, 0) => ErrorKind::Del10,
            _ => ErrorKind::Del11,
        }
    }

    fn substitution(a: u8, b: u8) -> Self {
        match (a, b) {
            (1, 1) => ErrorKind::Sub11,
            (0, 1) => ErrorKind::Sub01,
            (1, 0) => ErrorKind::Sub10,
            _ => ErrorKind::Sub00,
        }
    }

    /// Drop in `ψ` weight this kind causes.
    pub fn weight_drop(&self) -> i64 {
        match self {
            ErrorKind::Del11 | ErrorKind::Sub11 => 2,
            ErrorKind::Sub00 => -2,
            _ => 0,
        }
    }
}

/// Effect of one error on `ψ(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EffectClass {
    /// `wt(ψ(x)) - wt(ψ(x'))` where `x'` is the sequence after the error.
    pub delta_weight: i64,
    pub kind: ErrorKind,
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(())
}

/// Deleting `x_d` merges `ψ_d ψ_{d+1}` into their XOR.
pub fn classify_deletion_effect(x: &BinSeq, d: usize) -> Result<EffectClass> {
    check_index(d, x.len())?;
    let psi = seq::differential(x);
    let kind = ErrorKind::deletion(psi.get(d), psi.get(d + 1));
    Ok(EffectClass {
        delta_weight: kind.weight_drop(),
        kind,
    })
}

/// Flipping `x_e` complements `ψ_e ψ_{e+1}`.
pub fn classify_substitution_effect(x: &BinSeq, e: usize) -> Result<EffectClass> {
    check_index(e, x.len())?;
    let psi = seq::differential(x);
    let kind = ErrorKind::substitution(psi.get(e), psi.get(e + 1));
    Ok(EffectClass {
        delta_weight: kind.weight_drop(),
        kind,
    })
}

#[inline]
fn bit(s: &BinSeq, i: usize) -> i64 {
    s.get(i) as i64
}

/// `(η_e^x, η_e^y)`: the `VT^1(ψ)` change caused by each substitution, with
/// `η_e^x` measured from `x` and `η_e^y` towards `y`. A missing
/// substitution contributes 0.
pub fn eta_terms(
    x: &BinSeq,
    ex: Option<usize>,
    y: &BinSeq,
    ey: Option<usize>,
) -> Result<(i64, i64)> {
    seq::check_same_len(x, y)?;
    if let Some(e) = ex {
        check_index(e, x.len())?;
    }
    if let Some(e) = ey {
        check_index(e, y.len())?;
    }
    let (px, py) = (seq::differential(x), seq::differential(y));
    let eta_x = ex.map_or(0, |e| {
        let e64 = e as i64;
        e64 * (2 * bit(&px, e) - 1) + (e64 + 1) * (2 * bit(&px, e + 1) - 1)
    });
    let eta_y = ey.map_or(0, |e| {
        let e64 = e as i64;
        e64 * (1 - 2 * bit(&py, e)) + (e64 + 1) * (1 - 2 * bit(&py, e + 1))
    });
    Ok((eta_x, eta_y))
}

/// Term-by-term split of `Δψ = VT^1(ψ(x)) - VT^1(ψ(y))` for a confusable
/// quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBreakdown {
    pub eta_x: i64,
    pub eta_y: i64,
    /// `ζ_d^x` when `d_x > d_y`, `ξ_d^x` when `d_x < d_y`.
    pub boundary_x: i64,
    /// `ζ_d^y` when `d_x > d_y`, `ξ_d^y` when `d_x < d_y`.
    pub boundary_y: i64,
    /// Unsigned sum of `ψ(x(0, e_x))` over the window between the deletions.
    pub middle_sum: i64,
    /// +1 when `d_x < d_y`, -1 when `d_x > d_y`.
    pub middle_sign: i64,
    /// Sum of the terms above.
    pub total: i64,
    /// `VT^1(ψ(x)) - VT^1(ψ(y))` evaluated directly.
    pub direct: i64,
    pub deletion_kind_x: ErrorKind,
    pub deletion_kind_y: ErrorKind,
    pub substitution_kind_x: Option<ErrorKind>,
    pub substitution_kind_y: Option<ErrorKind>,
    /// `wt(ψ(x)) - wt(ψ(z))` for the common output `z`.
    pub n_x: i64,
    /// `wt(ψ(y)) - wt(ψ(z))`.
    pub n_y: i64,
}

impl DeltaBreakdown {
    pub fn identity_holds(&self) -> bool {
        self.total == self.direct
    }
}

fn vt1(s: &BinSeq) -> i64 {
    seq::vt_syndrome(s, 1) as i64
}

pub fn delta_psi_decomposition(
    x: &BinSeq,
    y: &BinSeq,
    dx: usize,
    ex: Option<usize>,
    dy: usize,
    ey: Option<usize>,
) -> Result<DeltaBreakdown> {
    seq::check_same_len(x, y)?;
    let zx = seq::apply_error(x, ErrorOp::new(Some(dx), ex))?;
    let zy = seq::apply_error(y, ErrorOp::new(Some(dy), ey))?;
    if dx == dy {
        return Err(Error::DegenerateOrder { index: dx });
    }
    if zx != zy {
        return Err(Error::NotConfusable);
    }
    let xs = seq::apply_error(x, ErrorOp::new(None, ex))?;
    let ys = seq::apply_error(y, ErrorOp::new(None, ey))?;
    let (big_x, big_y) = (seq::differential(&xs), seq::differential(&ys));
    let (eta_x, eta_y) = eta_terms(x, ex, y, ey)?;
    let (dxi, dyi) = (dx as i64, dy as i64);
    let xb = |i: usize| bit(&big_x, i);
    let yb = |i: usize| bit(&big_y, i);

    let (boundary_x, boundary_y, middle_sum, middle_sign) = if dx < dy {
        let bx = dxi * xb(dx) + (dxi + 1) * xb(dx + 1) - dxi * yb(dx);
        let by = (dyi + 1) * xb(dy + 1) - dyi * yb(dy) - (dyi + 1) * yb(dy + 1);
        let mid: i64 = (dx + 2..=dy).map(xb).sum();
        (bx, by, mid, 1)
    } else {
        let bx = dxi * xb(dx) + (dxi + 1) * xb(dx + 1) - (dxi + 1) * yb(dx + 1);
        let by = dyi * xb(dy) - dyi * yb(dy) - (dyi + 1) * yb(dy + 1);
        let mid: i64 = (dy + 1..dx).map(xb).sum();
        (bx, by, mid, -1)
    };

    let wt_z = seq::differential(&zx).weight() as i64;
    Ok(DeltaBreakdown {
        eta_x,
        eta_y,
        boundary_x,
        boundary_y,
        middle_sum,
        middle_sign,
        total: eta_x + eta_y + boundary_x + boundary_y + middle_sign * middle_sum,
        direct: vt1(&seq::differential(x)) - vt1(&seq::differential(y)),
        deletion_kind_x: ErrorKind::deletion(xb(dx) as u8, xb(dx + 1) as u8),
        deletion_kind_y: ErrorKind::deletion(yb(dy) as u8, yb(dy + 1) as u8),
        substitution_kind_x: ex
            .map(|e| classify_substitution_effect(x, e).map(|c| c.kind))
            .transpose()?,
        substitution_kind_y: ey
            .map(|e| classify_substitution_effect(y, e).map(|c| c.kind))
            .transpose()?,
        n_x: seq::differential(x).weight() as i64 - wt_z,
        n_y: seq::differential(y).weight() as i64 - wt_z,
    })
}

/// Cell of the deletion-boundary table for a given kind: the value of
/// `boundary_x` (`x_side`) or `boundary_y` at deletion index `d`.
pub fn deletion_cell(kind: ErrorKind, dx_first: bool, x_side: bool, d: usize) -> i64 {
    let d = d as i64;
    match (kind, x_side) {
        (ErrorKind::Del00, _) => 0,
        // 01 -> 1: ζ = (0, -1), ξ = (1, 0)
        (ErrorKind::Del01, true) => dx_first as i64,
        (ErrorKind::Del01, false) => -(!dx_first as i64),
        // 10 -> 1: ζ = (-1, 0), ξ = (0, 1)
        (ErrorKind::Del10, true) => -(!dx_first as i64),
        (ErrorKind::Del10, false) => dx_first as i64,
        (ErrorKind::Del11, true) => 2 * d + 1,
        (ErrorKind::Del11, false) => -2 * d - 1,
        _ => panic!("{kind:?} is not a deletion kind"),
    }
}

/// Cell of the substitution table: `η_e^x` (`x_side`) or `η_e^y` at
/// substitution index `e`.
pub fn substitution_cell(kind: ErrorKind, x_side: bool, e: usize) -> i64 {
    let e = e as i64;
    let v = match kind {
        ErrorKind::Sub11 => 2 * e + 1,
        ErrorKind::Sub01 => 1,
        ErrorKind::Sub10 => -1,
        ErrorKind::Sub00 => -2 * e - 1,
        _ => panic!("{kind:?} is not a substitution kind"),
    };
    if x_side {
        v
    } else {
        -v
    }
}

/// True iff every term of `b` sits in the table cell selected by its
/// classified kind.
pub fn cells_match(
    b: &DeltaBreakdown,
    dx: usize,
    ex: Option<usize>,
    dy: usize,
    ey: Option<usize>,
) -> bool {
    let dx_first = dx < dy;
    let eta_ok = |kind: Option<ErrorKind>, e: Option<usize>, x_side: bool, eta: i64| match (kind, e)
    {
        (Some(k), Some(e)) => substitution_cell(k, x_side, e) == eta,
        _ => eta == 0,
    };
    deletion_cell(b.deletion_kind_x, dx_first, true, dx) == b.boundary_x
        && deletion_cell(b.deletion_kind_y, dx_first, false, dy) == b.boundary_y
        && eta_ok(b.substitution_kind_x, ex, true, b.eta_x)
        && eta_ok(b.substitution_kind_y, ey, false, b.eta_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confusability;

    fn s(v: &str) -> BinSeq {
        v.parse().unwrap()
    }

    fn wt_psi(x: &BinSeq) -> i64 {
        seq::differential(x).weight() as i64
    }

    #[test]
    fn deletion_examples() {
        let c = classify_deletion_effect(&s("11"), 1).unwrap();
        assert_eq!((c.kind, c.delta_weight), (ErrorKind::Del10, 0));
        let c = classify_deletion_effect(&s("010"), 2).unwrap();
        assert_eq!((c.kind, c.delta_weight), (ErrorKind::Del11, 2));
        assert!(classify_deletion_effect(&s("010"), 4).is_err());
    }

    #[test]
    fn substitution_examples() {
        let c = classify_substitution_effect(&s("00"), 1).unwrap();
        assert_eq!((c.kind, c.delta_weight), (ErrorKind::Sub00, -2));
        for e in 1..=2 {
            let c = classify_substitution_effect(&s("01"), e).unwrap();
            assert!([-2, 0, 2].contains(&c.delta_weight));
        }
    }

    #[test]
    fn effect_weights_match_direct_difference() {
        for n in 1..=10 {
            for x in BinSeq::all(n) {
                for i in 1..=n {
                    let d = classify_deletion_effect(&x, i).unwrap();
                    assert_eq!(d.delta_weight, wt_psi(&x) - wt_psi(&x.deleted(i)));
                    let e = classify_substitution_effect(&x, i).unwrap();
                    assert_eq!(e.delta_weight, wt_psi(&x) - wt_psi(&x.flipped(i)));
                }
            }
        }
    }

    #[test]
    fn eta_matches_syndrome_difference() {
        for n in 1..=12 {
            for x in BinSeq::all(n).step_by(3) {
                for e in 1..=n {
                    let xe = x.flipped(e);
                    let (eta_x, eta_y) = eta_terms(&x, Some(e), &x, Some(e)).unwrap();
                    assert_eq!(
                        eta_x,
                        vt1(&seq::differential(&x)) - vt1(&seq::differential(&xe))
                    );
                    assert_eq!(
                        eta_y,
                        vt1(&seq::differential(&xe)) - vt1(&seq::differential(&x))
                    );
                    let kind = classify_substitution_effect(&x, e).unwrap().kind;
                    assert_eq!(substitution_cell(kind, true, e), eta_x);
                    assert_eq!(substitution_cell(kind, false, e), eta_y);
                }
            }
        }
    }

    #[test]
    fn decomposition_identity_exhaustive_small() {
        for n in 2..=8 {
            let all: Vec<BinSeq> = BinSeq::all(n).collect();
            for x in &all {
                for y in all.iter().filter(|y| *y != x) {
                    for (_, w) in confusability::witnesses(x, y).unwrap() {
                        if w.dx == w.dy {
                            continue;
                        }
                        let b = delta_psi_decomposition(x, y, w.dx, w.ex, w.dy, w.ey).unwrap();
                        assert!(b.identity_holds(), "{x} {y} {w:?} {b:?}");
                        assert!(
                            cells_match(&b, w.dx, w.ex, w.dy, w.ey),
                            "{x} {y} {w:?} {b:?}"
                        );
                        let nx = b.deletion_kind_x.weight_drop()
                            + b.substitution_kind_x.map_or(0, |k| k.weight_drop());
                        assert_eq!(b.n_x, nx);
                        assert!([-2, 0, 2, 4].contains(&b.n_x));
                    }
                }
            }
        }
    }

    #[test]
    fn decomposition_errors() {
        let x = s("0110");
        let y = s("1001");
        assert_eq!(
            delta_psi_decomposition(&x, &y, 2, None, 2, None),
            Err(Error::DegenerateOrder { index: 2 })
        );
        assert_eq!(
            delta_psi_decomposition(&s("0000"), &s("1111"), 1, None, 2, None),
            Err(Error::NotConfusable)
        );
        assert_eq!(
            delta_psi_decomposition(&x, &y, 1, Some(1), 2, None),
            Err(Error::DegenerateOp { index: 1 })
        );
    }

    #[test]
    fn table_cells() {
        assert_eq!(deletion_cell(ErrorKind::Del11, false, true, 5), 11);
        assert_eq!(deletion_cell(ErrorKind::Del11, true, false, 3), -7);
        assert_eq!(deletion_cell(ErrorKind::Del00, true, true, 3), 0);
        assert_eq!(deletion_cell(ErrorKind::Del01, false, false, 3), -1);
        assert_eq!(deletion_cell(ErrorKind::Del10, true, false, 3), 1);
        assert_eq!(substitution_cell(ErrorKind::Sub11, true, 4), 9);
        assert_eq!(substitution_cell(ErrorKind::Sub01, true, 4), 1);
        assert_eq!(substitution_cell(ErrorKind::Sub10, true, 4), -1);
    }
}
