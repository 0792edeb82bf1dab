//! Groessencharacters of weight l on ideals of E coprime to a modulus m.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chargroup::{quad_dirichlet_chars, Angle, DirichletChar, GroupChar};
use crate::error::{Error, Result};
use crate::quadfield::{is_principal, primes_above, primes_up_to_norm, ClassGroup, FieldE, QIdeal, QuadElem};
use crate::resunits::UnitsStructure;
use crate::valuefield::{self, AlgElem, Radical, RationalityField, ValueAlgebra};

/// The minimal conductor d_E of a character with eta^Z = chi_E, and the
/// level N_E = |Delta| N(d_E) of the associated forms.
pub fn minimal_conductor(field: FieldE) -> (QIdeal, i64) {
    let d = field.delta();
    let root = QIdeal::principal(&field.sqrt_delta()).expect("nonzero");
    let de = if d % 2 != 0 {
        root
    } else if d % 8 == 0 {
        root.mul(&QIdeal::from_int(field, 2))
    } else {
        root.mul(&primes_above(field, 2)[0])
    };
    let n = d.abs() * de.norm_int();
    (de, n)
}

/// Nebentypus chi_E eta^Z of the attached form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nebentypus {
    Trivial,
    Character(DirichletChar),
}

/// A Groessencharacter psi with psi(alpha o) = eta(alpha) alpha^l for alpha prime to m,
/// stored by its modulus character, class-group generators and root choices.
#[derive(Debug, Clone)]
pub struct Grossenchar {
    field: FieldE,
    modulus: QIdeal,
    modulus_primes: Vec<QIdeal>,
    ell: u32,
    eta: GroupChar,
    cg: Arc<ClassGroup>,
    roots: Vec<u32>,
    algebra: Arc<ValueAlgebra>,
    betas: Vec<AlgElem>,
    gamma_inv: Vec<AlgElem>,
}

impl Grossenchar {
    /// psi with modulus character `eta` and weight exponent `ell`; `roots` selects the
    /// embedding of each beta_i (default 0).
    pub fn build(eta: &GroupChar, ell: u32, roots: Option<&[u32]>) -> Result<Self> {
        let s = eta.structure();
        let cg = Arc::new(ClassGroup::new(s.field(), s.modulus())?);
        let psi = Self::build_with(eta, ell, roots, cg)?;
        psi.check_multiplicative(50)?;
        Ok(psi)
    }

    /// As [`Grossenchar::build`], additionally requiring eta^Z = chi_E and l odd, so
    /// that the attached form has trivial nebentypus.
    pub fn build_trivial_nebentypus(eta: &GroupChar, ell: u32, roots: Option<&[u32]>) -> Result<Self> {
        if ell % 2 == 0 {
            return Err(Error::EtaIncompatible(format!("weight exponent {ell} is even")));
        }
        if !eta.restricts_to_kronecker() {
            return Err(Error::EtaIncompatible("eta does not restrict to chi_E on Z".into()));
        }
        Self::build(eta, ell, roots)
    }

    /// Build using the given class-group generators (which must be prime to m).
    pub fn build_with(eta: &GroupChar, ell: u32, roots: Option<&[u32]>, cg: Arc<ClassGroup>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidArgument("weight exponent must be positive".into()));
        }
        let s = eta.structure();
        let field = s.field();
        let m = *s.modulus();
        if cg.field().delta() != field.delta() || !cg.gens.iter().all(|t| t.coprime_to(&m)) {
            return Err(Error::InvalidArgument("class-group generators must be prime to m".into()));
        }
        if s.torsion_meet.iter().any(|u| !u.pow(ell).is_one()) {
            return Err(Error::NoGrossencharacter);
        }
        let mu = field.mu_order() as i64;
        let u = field.mu_generator();
        if eta.eval(&u)? + Angle::new(ell as i64, mu) != Angle::zero() {
            return Err(Error::EtaIncompatible("eta(u) u^l != 1 for a root of unity u".into()));
        }
        let roots: Vec<u32> = match roots {
            Some(r) if r.len() == cg.rank() => r.iter().zip(&cg.orders).map(|(&x, &n)| x % n).collect(),
            Some(_) => return Err(Error::InvalidArgument("one root choice per generator".into())),
            None => vec![0; cg.rank()],
        };
        let r = eta.order() as u32;
        let base = ValueAlgebra::base(field, r)?;
        let mut radicals = Vec::with_capacity(cg.rank());
        for ((theta, &n), &sc) in cg.thetas.iter().zip(&cg.orders).zip(&roots) {
            let v = base.root_of_unity(&eta.eval(theta)?).expect("eta values are r-th roots");
            let gamma = base.mul(&v, &base.from_quad(&theta.pow(ell)));
            radicals.push(Radical { n, gamma, root_choice: sc });
        }
        let algebra = ValueAlgebra::new(field, r, radicals)?;
        let betas: Vec<AlgElem> = (0..cg.rank()).map(|i| algebra.beta(i)).collect();
        let gamma_inv = algebra
            .radicals()
            .iter()
            .map(|rad| {
                let g = base.inv(&rad.gamma).ok_or_else(|| Error::Inconsistent("radicand is a zero divisor".into()))?;
                Ok(algebra.lift(&g))
            })
            .collect::<Result<Vec<_>>>()?;
        let modulus_primes = m.factor().into_iter().map(|(p, _)| p).collect();
        Ok(Grossenchar {
            field,
            modulus: m,
            modulus_primes,
            ell,
            eta: eta.clone(),
            cg,
            roots,
            algebra,
            betas,
            gamma_inv,
        })
    }

    pub fn field(&self) -> FieldE {
        self.field
    }

    pub fn modulus(&self) -> &QIdeal {
        &self.modulus
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn eta(&self) -> &GroupChar {
        &self.eta
    }

    pub fn class_group(&self) -> &Arc<ClassGroup> {
        &self.cg
    }

    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    pub fn algebra(&self) -> &Arc<ValueAlgebra> {
        &self.algebra
    }

    /// Weight l + 1 of the attached form.
    pub fn weight(&self) -> u32 {
        self.ell + 1
    }

    /// Level |Delta| N(m) of the attached form.
    pub fn level(&self) -> i64 {
        self.field.delta().abs() * self.modulus.norm_int()
    }

    /// Whether a (possibly fractional) ideal has valuation 0 at every prime of m.
    pub fn is_coprime(&self, a: &QIdeal) -> bool {
        self.modulus_primes.iter().all(|p| a.valuation(p) == 0)
    }

    /// eta(alpha) alpha^l for alpha prime to m.
    pub fn eval_principal(&self, alpha: &QuadElem) -> Result<AlgElem> {
        let v = self
            .algebra
            .root_of_unity(&self.eta.eval(alpha)?)
            .expect("eta values are r-th roots");
        Ok(self.algebra.mul(&v, &self.algebra.from_quad(&alpha.pow(self.ell))))
    }

    /// psi(a); zero for ideals not prime to m.
    pub fn evaluate(&self, a: &QIdeal) -> AlgElem {
        if !self.is_coprime(a) {
            return self.algebra.zero();
        }
        let j = self.cg.class_dlog(a);
        let mut b = *a;
        for ((t, &n), &ji) in self.cg.gens.iter().zip(&self.cg.orders).zip(&j) {
            let k = (n - ji) % n;
            if k > 0 {
                b = b.mul(&t.pow(k));
            }
        }
        let alpha = is_principal(&b).expect("class representative is principal");
        let mut v = self.eval_principal(&alpha).expect("generator is prime to m");
        for (i, &ji) in j.iter().enumerate() {
            if ji > 0 {
                let f = self.algebra.mul(&self.algebra.pow(&self.betas[i], ji as u64), &self.gamma_inv[i]);
                v = self.algebra.mul(&v, &f);
            }
        }
        v
    }

    pub fn evaluate_complex(&self, a: &QIdeal) -> Complex64 {
        self.algebra.to_complex(&self.evaluate(a))
    }

    /// chi_E eta^Z, the nebentypus of the attached form.
    pub fn nebentypus(&self) -> Nebentypus {
        if self.eta.restricts_to_kronecker() {
            return Nebentypus::Trivial;
        }
        let chi = DirichletChar::kronecker(self.field.delta()).mul(&self.eta.restrict_to_z());
        Nebentypus::Character(chi.primitive())
    }

    /// Conductor of psi, that of its modulus character.
    pub fn conductor(&self) -> QIdeal {
        self.eta.conductor()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// [L_psi : E].
    pub fn value_field_degree(&self) -> Result<u64> {
        valuefield::value_field_degree(&self.algebra)
    }

    /// Rationality field of the attached form.
    pub fn rationality_field(&self) -> Result<RationalityField> {
        let mut norms = Vec::with_capacity(self.cg.rank());
        for t in &self.cg.gens {
            let n = t.norm_int();
            let v = self.evaluate(&QIdeal::from_int(self.field, n));
            let q = self
                .algebra
                .to_quad(&v)
                .filter(|q| q.is_rational())
                .ok_or_else(|| Error::Unsupported("psi(N t) is not rational".into()))?;
            norms.push(q.x);
        }
        valuefield::rationality_field(&self.algebra, &norms)
    }

    /// Whether exponent(Cl(E)) divides l [L_psi : E].
    pub fn exponent_divides_ell_d(&self) -> Result<bool> {
        let d = self.value_field_degree()?;
        Ok((self.ell as u64 * d) % self.cg.exponent as u64 == 0)
    }

    /// Check psi(ab) = psi(a) psi(b) on `trials` random pairs of prime-to-m ideals.
    pub fn check_multiplicative(&self, trials: usize) -> Result<()> {
        let primes: Vec<QIdeal> = primes_up_to_norm(self.field, 60)
            .into_iter()
            .filter(|p| self.is_coprime(p))
            .collect();
        if primes.is_empty() {
            return Ok(());
        }
        let seed = (self.field.delta().unsigned_abs() << 20) ^ self.modulus.norm_int() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| -> QIdeal {
            let k = rng.gen_range(1..=2);
            (0..k).fold(QIdeal::unit(self.field), |acc, _| acc.mul(&primes[rng.gen_range(0..primes.len())]))
        };
        for _ in 0..trials {
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let lhs = self.evaluate(&a.mul(&b));
            let rhs = self.algebra.mul(&self.evaluate(&a), &self.evaluate(&b));
            if lhs != rhs {
                return Err(Error::Inconsistent(format!("psi is not multiplicative at {a} * {b}")));
            }
        }
        Ok(())
    }

    /// psi tensor chi: a -> chi(N a) psi(a), made primitive.
    pub fn twist(&self, chi: &DirichletChar) -> Result<Grossenchar> {
        let q = chi.modulus();
        let big_m = self.modulus.mul(&QIdeal::from_int(self.field, q));
        let big = Arc::new(UnitsStructure::new(self.field, &big_m)?);
        let inflated = self.eta.inflate(big.clone())?;
        let values: Vec<Angle> = big
            .generators()
            .iter()
            .map(|g| {
                let n = crate::arith::rat_to_i64(&g.norm()).expect("integral generator");
                Ok(inflated.eval(g)? + chi.eval(n).ok_or(Error::NotAUnit)?)
            })
            .collect::<Result<_>>()?;
        let eta_big = GroupChar::from_generator_values(big, &values)?;
        let f = eta_big.conductor();
        let eta_new = eta_big.push_down(Arc::new(UnitsStructure::new(self.field, &f)?))?;
        let target = |a: &QIdeal| -> Complex64 {
            let n = crate::arith::rat_to_i64(&a.norm()).expect("integral ideal");
            chi.eval(n).expect("prime to the twist").to_complex() * self.evaluate_complex(a)
        };
        Self::build_matched(&eta_new, self.ell, &big_m, &target)
    }

    /// The character psi' of conductor m' | m agreeing with psi on ideals prime to m.
    pub fn extend_to_conductor(&self, m2: &QIdeal) -> Result<Grossenchar> {
        if *m2 == self.modulus {
            return Ok(self.clone());
        }
        if !m2.divides(&self.modulus) {
            return Err(Error::InvalidArgument("target modulus does not divide m".into()));
        }
        if !self.eta.factors_through(m2) {
            return Err(Error::NotExtendable);
        }
        let eta_new = self.eta.push_down(Arc::new(UnitsStructure::new(self.field, m2)?))?;
        let target = |a: &QIdeal| self.evaluate_complex(a);
        Self::build_matched(&eta_new, self.ell, &self.modulus, &target)
    }

    /// The primitive character inducing psi.
    pub fn primitive(&self) -> Result<Grossenchar> {
        self.extend_to_conductor(&self.conductor())
    }

    /// A quadratic twist of conductor d_E, searching Dirichlet characters supported
    /// on the primes dividing N(m). None if no such twist exists.
    pub fn minimal_twist(&self) -> Result<Option<(DirichletChar, Grossenchar)>> {
        let (de, _) = minimal_conductor(self.field);
        let support: Vec<i64> = crate::arith::factorize(self.modulus.norm_int()).iter().map(|f| f.0).collect();
        for chi in quad_dirichlet_chars(&support) {
            let tw = self.twist(&chi)?;
            if *tw.modulus() == de {
                return Ok(Some((chi, tw)));
            }
        }
        Ok(None)
    }

    /// Build a character with modulus character eta whose values on ideals prime to
    /// `avoid` embed as `target`, by choosing the roots beta_i to match.
    fn build_matched(
        eta: &GroupChar,
        ell: u32,
        avoid: &QIdeal,
        target: &dyn Fn(&QIdeal) -> Complex64,
    ) -> Result<Grossenchar> {
        let s = eta.structure();
        let field = s.field();
        let cg = Arc::new(ClassGroup::new(field, s.modulus())?);
        let psi0 = Self::build_with(eta, ell, None, cg.clone())?;
        let both = avoid.mul(s.modulus());
        let mut roots = Vec::with_capacity(cg.rank());
        for (i, t) in cg.gens.iter().enumerate() {
            let (q, alpha) = class_companion(&cg, t, &both)?;
            let want = psi0.algebra.to_complex(&psi0.eval_principal(&alpha)?) * target(&q);
            let rad = &psi0.algebra.radicals()[i];
            let base_beta = psi0.algebra.to_complex(&psi0.betas[i]);
            let n = rad.n as i64;
            let mut best = (f64::INFINITY, 0u32);
            for sc in 0..rad.n {
                let z = base_beta * Angle::new(sc as i64, n).to_complex();
                let err = (z - want).norm();
                if err < best.0 {
                    best = (err, sc);
                }
            }
            if best.0 > 1e-6 * (1.0 + want.norm()) {
                return Err(Error::Inconsistent("no root of gamma matches the target character".into()));
            }
            roots.push(best.1);
        }
        let psi = Self::build_with(eta, ell, Some(&roots), cg)?;
        for p in primes_up_to_norm(field, 40).iter().filter(|p| p.coprime_to(&both)) {
            let got = psi.evaluate_complex(p);
            let want = target(p);
            if (got - want).norm() > 1e-6 * (1.0 + want.norm()) {
                return Err(Error::Inconsistent(format!("matched character differs at {p}")));
            }
        }
        Ok(psi)
    }
}

/// A prime q in the class of t, prime to `avoid`, with t = alpha q.
fn class_companion(cg: &ClassGroup, t: &QIdeal, avoid: &QIdeal) -> Result<(QIdeal, QuadElem)> {
    let want = cg.class_dlog(t);
    let mut bound = 100;
    while bound <= 1 << 20 {
        for q in primes_up_to_norm(cg.field(), bound) {
            if q.coprime_to(avoid) && cg.class_dlog(&q) == want {
                let alpha = is_principal(&t.div(&q)).expect("same class");
                return Ok((q, alpha));
            }
        }
        bound *= 4;
    }
    Err(Error::Inconsistent("no prime representative found in the class".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{kronecker, primes_up_to};
    use crate::chargroup::{enumerate_eta_for, OrderConstraint};
    use crate::quadfield::QuadElem;
    use num_bigint::BigInt;

    fn minimal_psi(d: i64, ell: u32) -> Grossenchar {
        let e = FieldE::new(d).unwrap();
        let (de, _) = minimal_conductor(e);
        let etas = enumerate_eta_for(e, &de, OrderConstraint::Divides(2), Some(ell)).unwrap();
        Grossenchar::build_trivial_nebentypus(&etas[0], ell, None).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-8 * (1.0 + b.norm())
    }

    #[test]
    fn minimal_conductors() {
        let e = FieldE::new(-15).unwrap();
        let (de, n) = minimal_conductor(e);
        assert_eq!(n, 225);
        assert_eq!(de, QIdeal::principal(&e.sqrt_delta()).unwrap());
        let e = FieldE::new(-8).unwrap();
        let (de, n) = minimal_conductor(e);
        assert_eq!(n, 256);
        assert_eq!(de, QIdeal::principal(&e.sqrt_delta().scale(&crate::arith::rat(2))).unwrap());
        let e = FieldE::new(-20).unwrap();
        assert_eq!(minimal_conductor(e).1, 800);
    }

    #[test]
    fn minus_15_weight_one() {
        let psi = minimal_psi(-15, 1);
        assert_eq!(psi.level(), 225);
        assert_eq!(psi.weight(), 2);
        assert_eq!(psi.nebentypus(), Nebentypus::Trivial);
        assert!(psi.is_primitive());
        let alg = psi.algebra().clone();
        // psi(t) = beta
        let t = psi.class_group().gens[0];
        assert_eq!(psi.evaluate(&t), alg.beta(0));
        // psi(t) psi(conj t) = psi(N(t) o) = N(t)
        let tb = t.conj();
        let n = t.norm_int();
        assert_eq!(alg.mul(&psi.evaluate(&t), &psi.evaluate(&tb)), alg.from_int(n));
        // norm relation at rational primes
        for p in primes_up_to(60).into_iter().filter(|&p| -15 % p != 0) {
            let v = psi.evaluate(&QIdeal::from_int(psi.field(), p));
            assert_eq!(v, alg.from_int(kronecker(-15, p) as i64 * p), "p={p}");
        }
        assert_eq!(psi.value_field_degree().unwrap(), 2);
        assert_eq!(psi.rationality_field().unwrap().disc, BigInt::from(5));
        assert!(psi.exponent_divides_ell_d().unwrap());
        psi.check_multiplicative(200).unwrap();
        // alpha = 1 mod m gives alpha^l
        let e = psi.field();
        let alpha = QuadElem::from_ints(-15, 1, 0) + e.sqrt_delta() * e.elem(1, 1);
        let a = QIdeal::principal(&alpha).unwrap();
        assert_eq!(psi.evaluate(&a), alg.from_quad(&alpha));
        // not prime to m
        assert!(psi.evaluate(&QIdeal::from_int(e, 3)).is_zero());
    }

    #[test]
    fn fractional_ideals_and_embedding() {
        let psi = minimal_psi(-195, 1);
        let alg = psi.algebra().clone();
        let e = psi.field();
        let ps: Vec<QIdeal> = primes_up_to_norm(e, 40).into_iter().filter(|p| psi.is_coprime(p)).collect();
        for p in &ps {
            let v = psi.evaluate(p);
            let w = psi.evaluate(&p.inv());
            assert_eq!(alg.mul(&v, &w), alg.one());
            let z = psi.evaluate_complex(p);
            let expected = (p.norm_int() as f64).powf(psi.ell() as f64 / 2.0);
            assert!((z.norm() - expected).abs() < 1e-9 * expected);
        }
        for a in &ps {
            for b in &ps {
                let q = a.div(b);
                assert_eq!(alg.mul(&psi.evaluate(&q), &psi.evaluate(b)), psi.evaluate(a));
            }
        }
    }

    #[test]
    fn existence_condition() {
        let e = FieldE::new(-3).unwrap();
        let m = QIdeal::principal(&e.sqrt_delta()).unwrap();
        let s = Arc::new(UnitsStructure::new(e, &m).unwrap());
        let eta = GroupChar::trivial(s.clone());
        assert_eq!(Grossenchar::build(&eta, 1, None).unwrap_err(), Error::NoGrossencharacter);
        // an eta violating eta(u) u^l = 1
        let e = FieldE::new(-15).unwrap();
        let (de, _) = minimal_conductor(e);
        let s = Arc::new(UnitsStructure::new(e, &de).unwrap());
        let eta = GroupChar::trivial(s);
        assert!(matches!(Grossenchar::build(&eta, 1, None), Err(Error::EtaIncompatible(_))));
        assert!(matches!(
            Grossenchar::build_trivial_nebentypus(&eta, 2, None),
            Err(Error::EtaIncompatible(_))
        ));
    }

    #[test]
    fn minus_7_order_14() {
        let e = FieldE::new(-7).unwrap();
        let m = QIdeal::from_int(e, 7);
        let etas = enumerate_eta_for(e, &m, OrderConstraint::Equals(14), Some(1)).unwrap();
        assert_eq!(etas.len(), 6);
        let psi = Grossenchar::build_trivial_nebentypus(&etas[0], 1, None).unwrap();
        assert_eq!(psi.level(), 343);
        assert_eq!(psi.value_field_degree().unwrap(), 3);
        let k = psi.rationality_field().unwrap();
        assert_eq!(k.disc, BigInt::from(49));
        psi.check_multiplicative(100).unwrap();
    }

    #[test]
    fn twists() {
        let psi = minimal_psi(-15, 1);
        let e = psi.field();
        let same = psi.twist(&DirichletChar::trivial(1)).unwrap();
        assert_eq!(same.modulus(), psi.modulus());
        let coprime: Vec<QIdeal> = primes_up_to_norm(e, 80).into_iter().filter(|p| psi.is_coprime(p)).collect();
        for p in &coprime {
            assert!(close(same.evaluate_complex(p), psi.evaluate_complex(p)));
        }
        // twist by chi_{-7}: conductor 7 d_E, then back
        let chi = DirichletChar::kronecker(-7);
        let tw = psi.twist(&chi).unwrap();
        assert_eq!(*tw.modulus(), psi.modulus().mul(&QIdeal::from_int(e, 7)));
        assert_eq!(tw.value_field_degree().unwrap(), psi.value_field_degree().unwrap());
        for p in coprime.iter().filter(|p| p.norm_int() % 7 != 0) {
            let s = chi.eval_sign(p.norm_int()) as f64;
            assert!(close(tw.evaluate_complex(p), psi.evaluate_complex(p) * s));
        }
        let back = tw.twist(&chi).unwrap();
        assert_eq!(back.modulus(), psi.modulus());
        for p in &coprime {
            assert!(close(back.evaluate_complex(p), psi.evaluate_complex(p)));
        }
        let (found, min) = tw.minimal_twist().unwrap().unwrap();
        assert_eq!(min.modulus(), psi.modulus());
        assert!(found.same_as(&chi));
    }

    #[test]
    fn extension_round_trip() {
        let psi = minimal_psi(-15, 1);
        let e = psi.field();
        assert_eq!(psi.extend_to_conductor(psi.modulus()).unwrap().roots(), psi.roots());
        let p2 = primes_above(e, 2)[0];
        let big_m = psi.modulus().mul(&p2);
        let big = Arc::new(UnitsStructure::new(e, &big_m).unwrap());
        let eta_big = psi.eta().inflate(big).unwrap();
        let psi_big = Grossenchar::build(&eta_big, 1, None).unwrap();
        assert!(!psi_big.is_primitive());
        let ext = psi_big.extend_to_conductor(psi.modulus()).unwrap();
        assert_eq!(ext.eta(), psi.eta());
        for p in primes_up_to_norm(e, 80).iter().filter(|p| psi_big.is_coprime(p)) {
            assert!(close(ext.evaluate_complex(p), psi_big.evaluate_complex(p)));
        }
        // the value on the new prime: p2 = alpha q with q prime to big_m
        let (q, alpha) = class_companion(psi_big.class_group(), &p2, &big_m).unwrap();
        let want = ext.algebra().to_complex(&ext.eval_principal(&alpha).unwrap()) * psi_big.evaluate_complex(&q);
        assert!(close(ext.evaluate_complex(&p2), want));
        // a primitive character cannot be extended
        assert_eq!(psi.extend_to_conductor(&QIdeal::unit(e)).unwrap_err(), Error::NotExtendable);
        assert!(psi_big.primitive().unwrap().is_primitive());
    }

    #[test]
    fn alternate_generators_give_the_same_character() {
        use crate::quadfield::GeneratorChoice;
        let psi = minimal_psi(-195, 1);
        let e = psi.field();
        let cg2 = Arc::new(ClassGroup::with_choice(e, psi.modulus(), GeneratorChoice { skip: 2 }).unwrap());
        assert_ne!(cg2.gens, psi.class_group().gens);
        let eta = psi.eta().clone();
        // some root choice on the alternate generators reproduces psi
        let n = cg2.rank() as u32;
        let mut matched = false;
        for code in 0..(1u32 << n) {
            let roots: Vec<u32> = (0..n).map(|i| code >> i & 1).collect();
            let alt = Grossenchar::build_with(&eta, 1, Some(&roots), cg2.clone()).unwrap();
            if primes_up_to_norm(e, 60)
                .iter()
                .filter(|p| psi.is_coprime(p))
                .all(|p| close(alt.evaluate_complex(p), psi.evaluate_complex(p)))
            {
                matched = true;
            }
        }
        assert!(matched);
    }
}
