use super::spec::{DeRhamDims, ModuleSpec};
use crate::error::{Error, Result};

/// Product of one-variable factors: `k[x]` contributes `(1, 0)`, `k[x]_x`
/// contributes `(1, 1)` and the one-variable hull contributes `(0, 1)`.
fn kunneth(factors: &[[usize; 2]]) -> DeRhamDims {
    let mut dims = vec![1usize];
    for f in factors {
        let mut next = vec![0; dims.len() + 1];
        for (j, &d) in dims.iter().enumerate() {
            next[j] += d * f[0];
            next[j + 1] += d * f[1];
        }
        dims = next;
    }
    DeRhamDims::new(dims)
}

/// Closed-form de Rham dimensions for the polynomial ring, the injective
/// hull, monomial localizations and direct sums of these.
pub fn derham_closed_form(m: &ModuleSpec) -> Result<DeRhamDims> {
    m.validate()?;
    match m {
        ModuleSpec::PolynomialRing { vars } => Ok(kunneth(&vec![[1, 0]; *vars])),
        ModuleSpec::InjectiveHull { vars } => Ok(kunneth(&vec![[0, 1]; *vars])),
        ModuleSpec::MonomialLocalization { vars, support } => {
            let factors: Vec<[usize; 2]> = (0..*vars).map(|i| if support.contains(&i) { [1, 1] } else { [1, 0] }).collect();
            Ok(kunneth(&factors))
        }
        ModuleSpec::DirectSum { summands } => {
            let mut acc = DeRhamDims::zeros(m.vars());
            for s in summands {
                acc = acc.add(&derham_closed_form(s)?)?;
            }
            Ok(acc)
        }
        other => Err(Error::Unsupported(format!("no closed form for {other:?}"))),
    }
}

/// Quotient dimensions from the long exact sequence of
/// `0 -> S -> T -> Q -> 0`. `connecting_ranks[j]` is the rank of the
/// connecting map `H^j(Q) -> H^{j+1}(S)`, for `j = 0 .. n-1`.
pub fn les_splice(sub: &DeRhamDims, total: &DeRhamDims, connecting_ranks: &[usize]) -> Result<DeRhamDims> {
    let n = sub.n();
    if total.dims.len() != sub.dims.len() {
        return Err(Error::Dimension { expected: n, found: total.n() });
    }
    if connecting_ranks.len() != n {
        return Err(Error::Inconsistent(format!("expected {n} connecting ranks, got {}", connecting_ranks.len())));
    }
    let c = |j: isize| -> usize {
        if j < 0 || j as usize >= n {
            0
        } else {
            connecting_ranks[j as usize]
        }
    };
    let mut q = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let (s, t) = (sub.dims[j] as isize, total.dims[j] as isize);
        // image of H^j(S) -> H^j(T) is H^j(S) modulo the incoming connecting image
        let alpha = s - c(j as isize - 1) as isize;
        let beta = t - alpha;
        if alpha < 0 || beta < 0 {
            return Err(Error::Inconsistent(format!("no exact sequence fits degree {j}: sub {s}, total {t}, connecting ranks {connecting_ranks:?}")));
        }
        if j < n && c(j as isize) > sub.dims[j + 1] {
            return Err(Error::Inconsistent(format!("connecting rank {} exceeds dim H^{}(sub) = {}", c(j as isize), j + 1, sub.dims[j + 1])));
        }
        q.push((beta + c(j as isize) as isize) as usize);
    }
    Ok(DeRhamDims::new(q))
}
