use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::{Lazy, OnceCell};
use rayon::prelude::*;

use super::cache::DiskCache;
use super::func::{inv_z, power_norm, Basis, SymFun};
use super::partition::{partitions, Partition};
use crate::arith::{RationalFunction, Ring};
use crate::config::Limits;
use crate::error::{Error, Result};

/// Every `P_λ` of one weight, in power-sum coordinates.
struct Level {
    index: HashMap<Partition, usize>,
    p: Vec<SymFun>,
}

/// Builds Macdonald `P_λ(q, q^m)` by Gram–Schmidt and memoizes whole weight
/// levels in memory. With a [`DiskCache`] attached, each requested `P_λ` is
/// also persisted and later served from disk.
pub struct Macdonald {
    limits: Limits,
    disk: Option<DiskCache>,
    levels: Mutex<HashMap<(usize, usize), LevelCell>>,
    served: Mutex<HashMap<(Partition, usize), SymFun>>,
}

type LevelCell = Arc<OnceCell<Arc<Level>>>;

static DEFAULT_ENGINE: Lazy<Macdonald> = Lazy::new(|| Macdonald::new(Limits::default()));

impl Macdonald {
    pub fn new(limits: Limits) -> Self {
        Macdonald {
            limits,
            disk: None,
            levels: Mutex::default(),
            served: Mutex::default(),
        }
    }

    pub fn with_disk_cache(mut self, cache: DiskCache) -> Self {
        self.disk = Some(cache);
        self
    }

    /// Process-wide engine with default limits and no disk cache.
    pub fn global() -> &'static Macdonald {
        &DEFAULT_ENGINE
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn disk_cache(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    fn check(&self, lambda: &Partition, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::Input("m must be positive".into()));
        }
        let weight = lambda.weight();
        if weight > self.limits.degree_ceiling {
            return Err(Error::DegreeCeiling {
                weight,
                ceiling: self.limits.degree_ceiling,
            });
        }
        Ok(())
    }

    fn level(&self, weight: usize, m: usize) -> Arc<Level> {
        let cell = self.levels.lock().unwrap().entry((weight, m)).or_default().clone();
        cell.get_or_init(|| Arc::new(gram_schmidt(weight, m))).clone()
    }

    /// `P_λ(q, q^m)` in the power-sum basis.
    pub fn p(&self, lambda: &Partition, m: usize) -> Result<SymFun> {
        self.check(lambda, m)?;
        let key = (lambda.clone(), m);
        if let Some(f) = self.served.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let f = match &self.disk {
            Some(disk) => match disk.get(lambda, m)? {
                Some(f) => f,
                None => {
                    let f = self.read_level(lambda, m);
                    disk.put(lambda, m, &f)?;
                    f
                }
            },
            None => self.read_level(lambda, m),
        };
        self.served.lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    fn read_level(&self, lambda: &Partition, m: usize) -> SymFun {
        let level = self.level(lambda.weight(), m);
        level.p[level.index[lambda]].clone()
    }

    /// `Q_λ = b_λ P_λ`.
    pub fn q(&self, lambda: &Partition, m: usize) -> Result<SymFun> {
        Ok(self.p(lambda, m)?.scale_by(&b_lambda(lambda, m)))
    }

    /// Build the levels for several weights in parallel.
    pub fn warm(&self, weights: &[usize], m: usize) -> Result<()> {
        if let Some(&w) = weights.iter().find(|&&w| w > self.limits.degree_ceiling) {
            return Err(Error::DegreeCeiling {
                weight: w,
                ceiling: self.limits.degree_ceiling,
            });
        }
        weights.par_iter().for_each(|&w| {
            self.level(w, m);
        });
        Ok(())
    }
}

fn dot(a: &[RationalFunction], b: &[RationalFunction], norms: &[RationalFunction]) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for ((x, y), w) in a.iter().zip(b).zip(norms) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(&(x * y) * w);
        }
    }
    acc
}

/// Orthogonalize `m_λ` against every lower `P_μ`, visiting partitions in
/// increasing lexicographic order (a linear extension of dominance).
fn gram_schmidt(weight: usize, m: usize) -> Level {
    let parts = partitions(weight);
    let norms: Vec<RationalFunction> = parts.iter().map(|p| power_norm(p, m)).collect();
    let coords = |f: &SymFun| -> Vec<RationalFunction> {
        let f = f.to_basis(Basis::Power);
        parts.iter().map(|p| f.coeff(p)).collect()
    };
    let mut done: Vec<(Vec<RationalFunction>, RationalFunction)> = Vec::with_capacity(parts.len());
    for lam in &parts {
        let m_lam = coords(&SymFun::monomial(lam.clone()));
        let mut v = m_lam.clone();
        for (pm, norm) in &done {
            let c = &dot(&m_lam, pm, &norms) / norm;
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(pm) {
                *x = &*x - &(&c * y);
            }
        }
        let norm = dot(&v, &v, &norms);
        done.push((v, norm));
    }
    let p = done
        .into_iter()
        .map(|(v, _)| SymFun::from_terms(Basis::Power, parts.iter().cloned().zip(v)))
        .collect();
    let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Level { index, p }
}

/// `b_λ = Π_s (1 - q^{a(s)} t^{l(s)+1}) / (1 - q^{a(s)+1} t^{l(s)})` at
/// `t = q^m`.
pub fn b_lambda(lambda: &Partition, m: usize) -> RationalFunction {
    let one = RationalFunction::one();
    let mut acc = RationalFunction::one();
    for (_, a, l) in lambda.arms_legs() {
        let num = &one - &RationalFunction::q_pow((a + m * (l + 1)) as i64);
        let den = &one - &RationalFunction::q_pow((a + 1 + m * l) as i64);
        acc = &acc * &(&num / &den);
    }
    acc
}

/// Macdonald `P_λ(q, q^m)` from the process-wide engine.
pub fn macdonald_p(lambda: &Partition, m: usize) -> Result<SymFun> {
    Macdonald::global().p(lambda, m)
}

/// Macdonald `Q_λ(q, q^m)` from the process-wide engine.
pub fn macdonald_q(lambda: &Partition, m: usize) -> Result<SymFun> {
    Macdonald::global().q(lambda, m)
}

/// The one-row function `Q_(j)(q, q^m)` from its power-sum expansion
/// `Σ_{λ ⊢ j} z_λ^{-1} Π_i (1 - t^{λ_i}) / (1 - q^{λ_i}) p_λ`, with
/// `Q_0 = 1` and `Q_j = 0` for `j < 0`.
pub fn one_row_g(j: i64, m: usize) -> SymFun {
    if j < 0 {
        return SymFun::zero();
    }
    let one = RationalFunction::one();
    SymFun::from_terms(
        Basis::Power,
        partitions(j as usize).into_iter().map(|p| {
            let mut c = inv_z(&p);
            for &part in p.parts() {
                let num = &one - &RationalFunction::q_pow((m * part) as i64);
                let den = &one - &RationalFunction::q_pow(part as i64);
                c = &c * &(&num / &den);
            }
            (p, c)
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::func::{elementary_e, scalar_product_qt};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(macdonald_p(&p("1"), 3).unwrap(), SymFun::power_sum(p("1")));
        for m in 1..=3 {
            assert_eq!(macdonald_p(&p("1,1"), m).unwrap(), SymFun::monomial(p("1,1")));
        }
        assert_eq!(macdonald_q(&p("1,1"), 1).unwrap(), elementary_e(2));
        let q1 = macdonald_q(&p("1"), 2).unwrap();
        assert_eq!(q1, SymFun::power_sum(p("1")).scale_by(&rf("q + 1")));
    }

    #[test]
    fn b_lambda_examples() {
        assert_eq!(b_lambda(&p("1"), 3), rf("q^2 + q + 1"));
        assert_eq!(b_lambda(&p("3,2,1"), 1), RationalFunction::one());
        assert_eq!(b_lambda(&p("1,1"), 2), rf("(1 - q^4)*(1 - q^2)/((1 - q^3)*(1 - q))"));
    }

    #[test]
    fn one_row_conventions() {
        assert!(one_row_g(-2, 2).is_zero());
        assert_eq!(one_row_g(0, 2), SymFun::one());
        assert_eq!(one_row_g(1, 2), macdonald_q(&p("1"), 2).unwrap());
        assert_eq!(one_row_g(3, 2), macdonald_q(&p("3"), 2).unwrap());
    }

    #[test]
    fn orthogonality_at_weight_four() {
        let parts = partitions(4);
        for m in 1..=2 {
            for a in &parts {
                let pa = macdonald_p(a, m).unwrap();
                let pa_m = pa.to_basis(Basis::Monomial);
                assert_eq!(pa_m.coeff(a), RationalFunction::one());
                assert!(pa_m.coeffs().keys().all(|mu| mu.dominated_by(a)));
                for b in &parts {
                    let ip = scalar_product_qt(&pa, &macdonald_q(b, m).unwrap(), m).unwrap();
                    assert_eq!(ip.is_one(), a == b, "{a} {b} m={m}");
                    assert!(a == b || ip.is_zero());
                }
            }
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let engine = Macdonald::new(Limits {
            degree_ceiling: 3,
            ..Limits::default()
        });
        assert!(matches!(
            engine.p(&p("4"), 1),
            Err(Error::DegreeCeiling { weight: 4, ceiling: 3 })
        ));
    }

    #[test]
    fn disk_cache_holds_requested_partitions_only() {
        let dir = tempfile::tempdir().unwrap();
        let engine = Macdonald::new(Limits::default()).with_disk_cache(DiskCache::new(dir.path()));
        let q21 = engine.q(&p("2,1"), 2).unwrap();
        let stat = engine.disk_cache().unwrap().stat().unwrap();
        assert_eq!(stat.len(), 1);
        assert_eq!(stat[0].partitions, vec![p("2,1")]);
        let warm = Macdonald::new(Limits::default()).with_disk_cache(DiskCache::new(dir.path()));
        assert_eq!(warm.q(&p("2,1"), 2).unwrap(), q21);
    }
}
