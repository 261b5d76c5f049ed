//! Class groups via reduced forms, and ray class groups assembled from the
//! exact sequence 1 → (O/𝔣)^×/im(O^×) → Cl_𝔣 → Cl → 1.

use std::collections::{BTreeSet, HashMap};

use crate::abelian::{AbelianGroup, EnumeratedGroup};
use crate::arith::{gcd, mod_inverse};

use super::{check_disc, ideals_of_norm, reduced_forms, QuadError, QuadForm, QuadIdeal, QuadInt, Ring};

/// The form class group of discriminant D, with a coordinate for every
/// reduced form.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
    table: EnumeratedGroup<QuadForm>,
}

impl ClassGroup {
    pub fn new(disc: i64) -> Result<Self, QuadError> {
        check_disc(disc)?;
        let forms = reduced_forms(disc);
        let table = EnumeratedGroup::build(QuadForm::identity(disc), forms.iter().copied(), |f, g| f.compose(g), Some(forms.len()));
        assert_eq!(table.len(), forms.len(), "composition did not close up on the reduced forms");
        Ok(ClassGroup { disc, forms, table })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// h(D).
    pub fn order(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn structure(&self) -> &[u64] {
        self.table.group.invariants()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    /// Reduced forms realising the invariant-factor generators.
    pub fn generator_forms(&self) -> &[QuadForm] {
        &self.table.generators
    }

    pub fn class_of_form(&self, f: &QuadForm) -> Vec<u64> {
        self.table.coords(&f.reduce()).expect("form of the right discriminant").to_vec()
    }

    /// The class of an ideal: the reduced norm form of its primitive part.
    pub fn class_of_ideal(&self, ideal: &QuadIdeal) -> Vec<u64> {
        self.class_of_form(&ideal.norm_form())
    }

    /// Enumerate all coordinate vectors of the group.
    pub fn all_classes(&self) -> Vec<Vec<u64>> {
        all_vectors(self.structure())
    }
}

pub(crate) fn all_vectors(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in moduli {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// (O/𝔮)^× for a prime power 𝔮 = 𝔭^e.
#[derive(Clone, Debug)]
struct LocalUnits {
    modulus: QuadIdeal,
    prime: QuadIdeal,
    table: EnumeratedGroup<QuadInt>,
}

/// (O/𝔣)^× as a product of its local components.
#[derive(Clone, Debug)]
struct ModUnits {
    ring: Ring,
    modulus: QuadIdeal,
    locals: Vec<LocalUnits>,
    invariants: Vec<u64>,
    /// Invariant-factor generators, CRT-lifted to residues mod 𝔣.
    generators: Vec<QuadInt>,
}

impl ModUnits {
    fn new(ring: Ring, modulus: QuadIdeal) -> Self {
        let factors = if modulus.is_unit() { vec![] } else { modulus.factor() };
        let mut locals = Vec::new();
        for &(p, e) in &factors {
            let q = p.pow(e);
            let cands: Vec<QuadInt> = q.residues().filter(|&r| !p.contains(r)).collect();
            let size = cands.len();
            let table = EnumeratedGroup::build(q.reduce(QuadInt::ONE), cands, |a, b| q.reduce(ring.mul(*a, *b)), Some(size));
            locals.push(LocalUnits { modulus: q, prime: p, table });
        }
        let mut invariants = Vec::new();
        let mut generators = Vec::new();
        for (i, local) in locals.iter().enumerate() {
            // idempotent: ≡ 1 mod 𝔮_i, ≡ 0 mod the other components
            let e = if locals.len() == 1 {
                QuadInt::ONE
            } else {
                modulus
                    .residues()
                    .find(|&r| {
                        local.modulus.contains(QuadInt::new(r.x - 1, r.y))
                            && locals.iter().enumerate().all(|(j, l)| j == i || l.modulus.contains(r))
                    })
                    .expect("CRT idempotent")
            };
            let one_minus_e = QuadInt::new(1 - e.x, -e.y);
            for (&n, g) in local.table.group.invariants().iter().zip(&local.table.generators) {
                let ge = ring.mul(*g, e);
                generators.push(modulus.reduce(QuadInt::new(ge.x + one_minus_e.x, ge.y + one_minus_e.y)));
                invariants.push(n);
            }
        }
        let units = ModUnits { ring, modulus, locals, invariants, generators };
        for (k, g) in units.generators.iter().enumerate() {
            debug_assert!(units.dlog(*g).iter().enumerate().all(|(j, &x)| x == i64::from(j == k)));
        }
        units
    }

    fn order(&self) -> u64 {
        self.locals.iter().map(|l| l.table.len() as u64).product()
    }

    fn is_unit(&self, alpha: QuadInt) -> bool {
        self.locals.iter().all(|l| !l.prime.contains(alpha))
    }

    fn dlog(&self, alpha: QuadInt) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.invariants.len());
        for l in &self.locals {
            let c = l.table.coords(&l.modulus.reduce(alpha)).expect("unit residue");
            out.extend(c.iter().map(|&x| x as i64));
        }
        out
    }

    fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        self.modulus.reduce(self.ring.mul(a, b))
    }

    /// n^{-1} mod 𝔣 for a rational integer n coprime to N(𝔣).
    fn inv_int(&self, n: u64) -> i64 {
        let nf = self.modulus.norm();
        if nf == 1 {
            return 0;
        }
        mod_inverse(n % nf, nf).expect("coprime to the modulus") as i64
    }
}

/// A generator of a principal ideal, with norm equal to the ideal norm.
pub(crate) fn principal_generator(ideal: &QuadIdeal) -> Option<QuadInt> {
    let disc = ideal.disc() as i128;
    let delta = disc.rem_euclid(2);
    let g = ideal.content() as i128;
    let f = ideal.norm_form();
    let (a, b) = (f.a as i128, f.b as i128);
    // need a·x² + b·xy + c·y² = 1; then (D y² + 4a) must be a square
    let ymax = ((4 * a) as f64 / (-disc) as f64).sqrt() as i128 + 1;
    for y in -ymax..=ymax {
        let t = disc * y * y + 4 * a;
        if t < 0 {
            continue;
        }
        let s = isqrt(t);
        if s * s != t {
            continue;
        }
        for root in [s, -s] {
            let num = -b * y + root;
            if num % (2 * a) == 0 {
                let x = num / (2 * a);
                let gx = g * (x * a + y * (b - delta) / 2);
                return Some(QuadInt::new(i64::try_from(gx).ok()?, i64::try_from(g * y).ok()?));
            }
        }
    }
    None
}

fn isqrt(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The ray class group Cl_𝔣 of an imaginary quadratic field, in Smith form,
/// with a discrete logarithm for ideals coprime to 𝔣.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    disc: i64,
    conductor: QuadIdeal,
    class: ClassGroup,
    units: ModUnits,
    /// class ↦ representative ideal with norm coprime to N(𝔣)
    reps: HashMap<Vec<u64>, QuadIdeal>,
    /// class ↦ dlog in (O/𝔣)^× of the residue attached to ∏ X_j^{c_j}
    offsets: HashMap<Vec<u64>, Vec<i64>>,
    group: AbelianGroup,
    generators: Vec<QuadIdeal>,
    /// for each prime 𝔭 | 𝔣, the image of the kernel of Cl_𝔣 → Cl_{𝔣/𝔭}
    kernels: Vec<(QuadIdeal, Vec<Vec<u64>>)>,
    /// discrete logs of τ(G_i), when 𝔣 is stable under conjugation
    conj_images: Option<Vec<Vec<u64>>>,
    unit_image: u64,
}

/// The ideal class group, as a ray class group of conductor (1).
pub fn class_group(disc: i64) -> Result<RayClassGroup, QuadError> {
    ray_class_group(disc, &QuadIdeal::unit(disc))
}

pub fn ray_class_group(disc: i64, conductor: &QuadIdeal) -> Result<RayClassGroup, QuadError> {
    check_disc(disc)?;
    if conductor.disc() != disc {
        return Err(QuadError::FieldMismatch(disc, conductor.disc()));
    }
    RayClassGroup::build(disc, *conductor)
}

impl RayClassGroup {
    fn build(disc: i64, conductor: QuadIdeal) -> Result<Self, QuadError> {
        let ring = Ring::new(disc);
        let class = ClassGroup::new(disc)?;
        let units = ModUnits::new(ring, conductor);
        let nf = conductor.norm();

        let h = class.order() as usize;
        let mut reps: HashMap<Vec<u64>, QuadIdeal> = HashMap::new();
        let mut a = 1u64;
        while reps.len() < h {
            if gcd(a, nf) == 1 {
                for b in 0..2 * a as i64 {
                    if let Ok(id) = QuadIdeal::new(disc, a, b) {
                        if id.b() == b {
                            reps.entry(class.class_of_ideal(&id)).or_insert(id);
                        }
                    }
                }
            }
            a += 1;
        }

        let mut rcg = RayClassGroup {
            disc,
            conductor,
            class,
            units,
            reps,
            offsets: HashMap::new(),
            group: AbelianGroup::trivial(),
            generators: vec![],
            kernels: vec![],
            conj_images: None,
            unit_image: 1,
        };

        // powers of the lifted class-group generators X_j = (e_j, 1)
        let structure = rcg.class.structure().to_vec();
        let r = structure.len();
        let s = rcg.units.invariants.len();
        let one = rcg.units.modulus.reduce(QuadInt::ONE);
        let zero_class = vec![0u64; r];
        let mut powers: Vec<Vec<(Vec<u64>, QuadInt)>> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for j in 0..r {
            let mut ej = zero_class.clone();
            ej[j] = 1;
            let x = (ej, one);
            let mut list = vec![(zero_class.clone(), one)];
            let mut cur = (zero_class.clone(), one);
            for _ in 0..structure[j] {
                cur = rcg.pair_mul(&cur, &x);
                list.push(cur.clone());
            }
            let (c_end, u_end) = list.pop().unwrap();
            debug_assert_eq!(c_end, zero_class);
            let mut row = vec![0i64; r + s];
            row[j] = structure[j] as i64;
            for (k, v) in rcg.units.dlog(u_end).into_iter().enumerate() {
                row[r + k] = -v;
            }
            relations.push(row);
            powers.push(list);
        }
        for c in rcg.class.all_classes() {
            let mut cur = (zero_class.clone(), one);
            for j in 0..r {
                cur = rcg.pair_mul(&cur, &powers[j][c[j] as usize]);
            }
            debug_assert_eq!(cur.0, c);
            let off = rcg.units.dlog(cur.1);
            rcg.offsets.insert(c, off);
        }
        for (k, &n) in rcg.units.invariants.iter().enumerate() {
            let mut row = vec![0i64; r + s];
            row[r + k] = n as i64;
            relations.push(row);
        }
        let (eps, eps_order) = ring.unit_generator();
        let mut row = vec![0i64; r];
        row.extend(rcg.units.dlog(eps));
        relations.push(row);
        // size of the unit image in (O/𝔣)^×
        let mut image = BTreeSet::new();
        let mut cur = one;
        for _ in 0..eps_order {
            image.insert(cur);
            cur = rcg.units.mul(cur, eps);
        }
        rcg.unit_image = image.len() as u64;

        rcg.group = if r + s == 0 { AbelianGroup::trivial() } else { AbelianGroup::from_relations(r + s, &relations) };

        rcg.find_generators();
        rcg.find_kernels();
        if conductor.conj() == conductor {
            let imgs = rcg.generators.iter().map(|g| rcg.dlog(&g.conj()).expect("conjugate is coprime")).collect();
            rcg.conj_images = Some(imgs);
        }
        Ok(rcg)
    }

    /// (c, u)·(c', u') in the cocycle description of Cl_𝔣.
    fn pair_mul(&self, x: &(Vec<u64>, QuadInt), y: &(Vec<u64>, QuadInt)) -> (Vec<u64>, QuadInt) {
        let structure = self.class.structure();
        let c3: Vec<u64> = x.0.iter().zip(&y.0).zip(structure).map(|((a, b), n)| (a + b) % n).collect();
        let (r1, r2, r3) = (&self.reps[&x.0], &self.reps[&y.0], &self.reps[&c3]);
        // R1·R2 = β·R3
        let prod = r1.mul(r2).mul(&r3.conj());
        let gamma = principal_generator(&prod).expect("product lies in the trivial class");
        let beta = self.units.modulus.reduce(gamma);
        let beta = self.units.mul(beta, QuadInt::new(self.units.inv_int(r3.norm()), 0));
        let u = self.units.mul(self.units.mul(x.1, y.1), beta);
        (c3, u)
    }

    fn find_generators(&mut self) {
        let k = self.group.invariants().len();
        let mut found: Vec<Option<QuadIdeal>> = vec![None; k];
        let mut n = 1u64;
        while found.iter().any(|f| f.is_none()) {
            for id in ideals_of_norm(self.disc, n) {
                if !self.is_coprime(&id) {
                    continue;
                }
                let v = self.dlog(&id).expect("coprime");
                let nz: Vec<usize> = (0..k).filter(|&i| v[i] != 0).collect();
                if nz.len() == 1 && v[nz[0]] == 1 && found[nz[0]].is_none() {
                    found[nz[0]] = Some(id);
                }
            }
            n += 1;
        }
        self.generators = found.into_iter().map(|f| f.unwrap()).collect();
    }

    fn find_kernels(&mut self) {
        if self.conductor.is_unit() {
            return;
        }
        let r = self.class.structure().len();
        let primes: Vec<QuadIdeal> = self.conductor.factor().into_iter().map(|(p, _)| p).collect();
        let quotients: Vec<QuadIdeal> = primes.iter().map(|p| self.conductor.div_prime(p)).collect();
        let mut sets: Vec<BTreeSet<Vec<u64>>> = vec![BTreeSet::new(); primes.len()];
        for alpha in self.conductor.residues() {
            if !self.units.is_unit(alpha) {
                continue;
            }
            let am1 = QuadInt::new(alpha.x - 1, alpha.y);
            let mut img = None;
            for (i, g) in quotients.iter().enumerate() {
                if g.contains(am1) {
                    let v = img.get_or_insert_with(|| {
                        let mut x = vec![0i64; r];
                        x.extend(self.units.dlog(alpha));
                        self.group.reduce(&x)
                    });
                    sets[i].insert(v.clone());
                }
            }
        }
        self.kernels = primes.into_iter().zip(sets).map(|(p, s)| (p, s.into_iter().collect())).collect();
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn conductor(&self) -> &QuadIdeal {
        &self.conductor
    }

    /// Cyclic orders (d_1, …, d_r) with d_{i+1} | d_i.
    pub fn structure(&self) -> &[u64] {
        self.group.invariants()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Ideals realising the Smith generators.
    pub fn generators(&self) -> &[QuadIdeal] {
        &self.generators
    }

    pub fn class_number(&self) -> u64 {
        self.class.order()
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.class
    }

    /// |(O/𝔣)^×|.
    pub fn residue_units_order(&self) -> u64 {
        self.units.order()
    }

    /// Size of the image of O^× in (O/𝔣)^×.
    pub fn unit_image_order(&self) -> u64 {
        self.unit_image
    }

    pub fn is_coprime(&self, ideal: &QuadIdeal) -> bool {
        self.units.locals.iter().all(|l| !l.prime.divides(ideal))
    }

    /// Exponent vector of the class of `ideal` with respect to the Smith generators.
    pub fn dlog(&self, ideal: &QuadIdeal) -> Result<Vec<u64>, QuadError> {
        if ideal.disc() != self.disc {
            return Err(QuadError::FieldMismatch(self.disc, ideal.disc()));
        }
        if !self.is_coprime(ideal) {
            return Err(QuadError::NotCoprime(ideal.to_string()));
        }
        let c = self.class.class_of_ideal(ideal);
        let rep = &self.reps[&c];
        let gamma = principal_generator(&ideal.mul(&rep.conj())).expect("ideal lies in the class of its representative");
        let u = self.units.mul(self.units.modulus.reduce(gamma), QuadInt::new(self.units.inv_int(rep.norm()), 0));
        let mut x: Vec<i64> = c.iter().map(|&v| v as i64).collect();
        let du = self.units.dlog(u);
        for (a, b) in du.iter().zip(&self.offsets[&c]) {
            x.push(a - b);
        }
        Ok(self.group.reduce(&x))
    }

    /// Primes dividing 𝔣 with the images of the kernels of Cl_𝔣 → Cl_{𝔣/𝔭}.
    pub fn kernels(&self) -> &[(QuadIdeal, Vec<Vec<u64>>)] {
        &self.kernels
    }

    /// Discrete logs of the conjugates of the generators, if 𝔣 = conj(𝔣).
    pub fn conjugate_images(&self) -> Option<&[Vec<u64>]> {
        self.conj_images.as_deref()
    }
}
