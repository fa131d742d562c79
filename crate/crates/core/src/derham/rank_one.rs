use super::spec::DeRhamDims;
use crate::error::{Error, Result};
use crate::exactalg::{int, GradedMatrix, MultiPoly, TruncatedSeries};

/// De Rham cohomology of `k[x] e` with `∂ e = p e`: kernel and cokernel of
/// `a ↦ a' + a p`.
///
/// Domain: polynomials of degree `< K`; codomain: degree `< K + deg p`
/// (`< K - 1` when `p = 0`). The map shifts degree by exactly `deg p`
/// (or by `-1` when `p = 0`), so these dimensions are those of the full
/// polynomial module once `K > deg p + 2`; smaller `K` is raised to that.
pub fn derham_rank_one(p: &MultiPoly, precision: u32) -> Result<DeRhamDims> {
    let p = p.with_n_vars(1)?;
    let deg_p = p.degree();
    let k = precision.max(deg_p.map_or(0, |d| d) + 3) as usize;
    let cod = match deg_p {
        Some(d) => k + d as usize,
        None => k - 1,
    };
    let mut m = GradedMatrix::new((0..cod).collect::<Vec<_>>(), (0..k).collect::<Vec<_>>());
    for j in 0..k {
        let a = MultiPoly::monomial(1, vec![j as u32], int(1));
        let image = &a.partial(0)? + &(&a * &p);
        for (e, c) in image.terms() {
            m.add_to(e[0] as usize, j, c.clone());
        }
    }
    let rank = m.rank();
    Ok(DeRhamDims::new(vec![k - rank, cod - rank]))
}

/// `u = exp(-∫p)` at precision `K`, a unit with `u' + p u ≡ 0` modulo
/// degree `K - 1`: over the completion `k[[x]] e` is isomorphic to the
/// trivial connection.
pub fn completion_flattening(p: &MultiPoly, precision: u32) -> Result<TruncatedSeries> {
    let p = p.with_n_vars(1)?;
    if precision < 2 {
        return Err(Error::Domain(format!("precision {precision} < 2")));
    }
    let ps = TruncatedSeries::from_poly(&p, precision);
    let u = ps.integrate(0)?.neg().exp()?;
    let residual = u.partial(0)?.add(&ps.mul(&u)?)?;
    if !residual.is_zero() {
        return Err(Error::InternalConsistency(format!("u' + p u = {residual}")));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, Some(1)).unwrap()
    }

    #[test]
    fn rank_one_examples() {
        assert_eq!(derham_rank_one(&p("x^2"), 8).unwrap().dims, [0, 2]);
        assert_eq!(derham_rank_one(&p("0"), 8).unwrap().dims, [1, 0]);
        assert_eq!(derham_rank_one(&p("1"), 8).unwrap().dims, [0, 0]);
    }

    #[test]
    fn euler_characteristic_is_minus_degree() {
        for d in 0..=6u32 {
            let q = &MultiPoly::monomial(1, vec![d], int(1)) + &p("x + 2");
            let dims = derham_rank_one(&q, 4).unwrap();
            assert_eq!(dims.euler_characteristic, -(q.degree().unwrap() as i64));
        }
        assert_eq!(derham_rank_one(&p("0"), 4).unwrap().euler_characteristic, 1);
    }

    #[test]
    fn independent_of_precision() {
        for k in 1..12 {
            assert_eq!(derham_rank_one(&p("x^3 - x"), k).unwrap().dims, [0, 3]);
        }
    }

    #[test]
    fn flattening_units() {
        let u = completion_flattening(&p("x^2"), 7).unwrap();
        assert_eq!(u.to_poly(), p("1 - x^3/3 + x^6/18"));
        assert_eq!(completion_flattening(&p("0"), 5).unwrap().to_poly(), p("1"));
        let e = completion_flattening(&p("1"), 5).unwrap();
        assert_eq!(e.to_poly(), p("1 - x + x^2/2 - x^3/6 + x^4/24"));
        assert_eq!(e.coefficient(&[4]), rat(1, 24));
    }
}
