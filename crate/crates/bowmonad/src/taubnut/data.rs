//! Taub-NUT matrix data. The endomorphisms on the two short intervals
//! factor through the edge as `B₀ = B_ht B_th` and `B₁ = B_th B_ht`.

use super::monads::{fused_monad, pushdown_psi_monad, pushdown_xi_monad, TnBlocks};
use crate::caloron::data::{col, e_minus_t, e_plus, gencon_eta_surjective, gencon_injective, invertible_entry, relation_entry, row, zhe};
use crate::caloron::CaloronData;
use crate::monadcore::ChartPoint;
use crate::numkit::eigen::relative_min_singular;
use crate::numkit::linalg::{rank, ToleranceContext};
use crate::numkit::{Matrix, Scalar, C64};
use crate::report::ValidationReport;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Clone, Debug, PartialEq)]
pub struct TaubNutData<T> {
    pub k: usize,
    pub m: usize,
    pub a: Matrix<T>,
    pub bht: Matrix<T>,
    pub bth: Matrix<T>,
    pub c: Matrix<T>,
    pub d2row: Matrix<T>,
    pub aprime: Matrix<T>,
    pub bprime: Matrix<T>,
    pub cprime: Matrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaubNutDataM0<T> {
    pub k: usize,
    pub a: Matrix<T>,
    pub bht: Matrix<T>,
    pub bth: Matrix<T>,
    pub c: Matrix<T>,
    pub d: Matrix<T>,
}

impl<T: Scalar> TaubNutData<T> {
    pub fn b0(&self) -> Matrix<T> {
        &self.bht * &self.bth
    }
    pub fn b1(&self) -> Matrix<T> {
        &self.bth * &self.bht
    }

    /// The caloron-shaped tuple with `B₁` in the place of `B`. Its `M`,
    /// `Ñ`, `Y₊,₁` and `D` are exactly the Taub-NUT ones.
    pub fn caloron_shape(&self) -> CaloronData<T> {
        CaloronData {
            k: self.k,
            m: self.m,
            a: self.a.clone(),
            b: self.b1(),
            c: self.c.clone(),
            d2row: self.d2row.clone(),
            aprime: self.aprime.clone(),
            bprime: self.bprime.clone(),
            cprime: self.cprime.clone(),
        }
    }

    pub fn c1(&self) -> Matrix<T> {
        col(&self.c, 0)
    }
    pub fn c2(&self) -> Matrix<T> {
        col(&self.c, 1)
    }
    pub fn d1(&self) -> Matrix<T> {
        row(&self.aprime, self.m - 1)
    }
    pub fn d(&self) -> Matrix<T> {
        Matrix::vstack(&[&self.d1(), &self.d2row])
    }
    /// `M` with `Z₀,₁ = η − M`.
    pub fn mmat(&self) -> Matrix<T> {
        self.caloron_shape().mmat()
    }
    pub fn ntilde(&self) -> Matrix<T> {
        self.caloron_shape().ntilde()
    }

    /// `A B₀ − B₁ A + C D`.
    pub fn relation1(&self) -> Matrix<T> {
        let r = &(&self.a * &self.b0()) - &(&self.b1() * &self.a);
        &r + &(&self.c * &self.d())
    }

    /// `e₋ᵀ B′ A + Ж A′ − A′ B₀ − C′ D`.
    pub fn relation2(&self) -> Matrix<T> {
        let t1 = &(&e_minus_t::<T>(self.m) * &self.bprime) * &self.a;
        let t2 = &zhe::<T>(self.m) * &self.aprime;
        let t3 = &self.aprime * &self.b0();
        let t4 = &self.cprime * &self.d();
        &(&(&t1 + &t2) - &t3) - &t4
    }

    pub fn relation3(&self) -> Matrix<T> {
        &-&(&e_plus::<T>(self.m) * &self.aprime) + &row(&self.d(), 0)
    }

    pub fn check_shapes(&self) -> Result<(), String> {
        let (k, m) = (self.k, self.m);
        if m == 0 {
            return Err("m must be positive for taubnut data; use taubnut-m0".into());
        }
        check(&[
            ("A", &self.a, (k, k)),
            ("Bht", &self.bht, (k, k)),
            ("Bth", &self.bth, (k, k)),
            ("C", &self.c, (k, 2)),
            ("D2row", &self.d2row, (1, k)),
            ("Aprime", &self.aprime, (m, k)),
            ("Bprime", &self.bprime, (1, k)),
            ("Cprime", &self.cprime, (m, 2)),
        ])
    }

    fn scale(&self) -> f64 {
        [&self.a, &self.bht, &self.bth, &self.c, &self.d2row, &self.aprime, &self.bprime, &self.cprime]
            .iter()
            .map(|m| m.max_abs())
            .fold(1.0, f64::max)
    }

    pub fn validate(&self, ctx: &ToleranceContext) -> ValidationReport {
        let mut r = ValidationReport::new();
        if let Err(e) = self.check_shapes() {
            r.push("shapes", false, None, Some(json!(e)));
            return r;
        }
        let s = self.scale();
        relation_entry(&mut r, "relation1", &self.relation1(), s, ctx);
        relation_entry(&mut r, "relation2", &self.relation2(), s, ctx);
        relation_entry(&mut r, "relation3", &self.relation3(), s, ctx);
        charpoly_entry(&mut r, &self.bht, &self.bth, s, ctx);
        edge_gencons(&mut r, &self.a, &self.b0(), &self.bth, &self.c, &self.d(), ctx);
        let mm = self.mmat();
        let n = self.k + self.m;
        gencon_eta_surjective(&mut r, "gencon3", &self.caloron_shape().y_plus_1(), &-&mm, &Matrix::identity(n), ctx);
        invertible_entry(&mut r, "gencon4", &self.ntilde(), ctx);
        let blocks = TnBlocks::from_data(self);
        genericity_entries(&mut r, &blocks.to_c64(), &self.b0().to_c64(), Some(&mm.to_c64()), ctx);
        r
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> TaubNutData<U> {
        TaubNutData {
            k: self.k,
            m: self.m,
            a: f(&self.a),
            bht: f(&self.bht),
            bth: f(&self.bth),
            c: f(&self.c),
            d2row: f(&self.d2row),
            aprime: f(&self.aprime),
            bprime: f(&self.bprime),
            cprime: f(&self.cprime),
        }
    }

    pub fn to_c64(&self) -> TaubNutData<C64> {
        self.map(|m| m.to_c64())
    }
}

impl<T: Scalar> TaubNutDataM0<T> {
    pub fn b0(&self) -> Matrix<T> {
        &self.bht * &self.bth
    }
    pub fn b1(&self) -> Matrix<T> {
        &self.bth * &self.bht
    }
    pub fn c1(&self) -> Matrix<T> {
        col(&self.c, 0)
    }
    pub fn c2(&self) -> Matrix<T> {
        col(&self.c, 1)
    }
    pub fn d1(&self) -> Matrix<T> {
        row(&self.d, 0)
    }
    pub fn d2(&self) -> Matrix<T> {
        row(&self.d, 1)
    }

    /// The endomorphism on the long interval, `B₁ − C₁D₁A⁻¹`.
    pub fn b_mid(&self) -> Option<Matrix<T>> {
        let ainv = self.a.inverse()?;
        Some(&self.b1() - &(&(&self.c1() * &self.d1()) * &ainv))
    }

    /// `A B₀ − B₁ A + C D`.
    pub fn relation1(&self) -> Matrix<T> {
        let r = &(&self.a * &self.b0()) - &(&self.b1() * &self.a);
        &r + &(&self.c * &self.d)
    }

    pub fn check_shapes(&self) -> Result<(), String> {
        let k = self.k;
        check(&[
            ("A", &self.a, (k, k)),
            ("Bht", &self.bht, (k, k)),
            ("Bth", &self.bth, (k, k)),
            ("C", &self.c, (k, 2)),
            ("D", &self.d, (2, k)),
        ])
    }

    pub fn validate(&self, ctx: &ToleranceContext) -> ValidationReport {
        let mut r = ValidationReport::new();
        if let Err(e) = self.check_shapes() {
            r.push("shapes", false, None, Some(json!(e)));
            return r;
        }
        let s = [&self.a, &self.bht, &self.bth, &self.c, &self.d].iter().map(|m| m.max_abs()).fold(1.0, f64::max);
        relation_entry(&mut r, "relation1", &self.relation1(), s, ctx);
        charpoly_entry(&mut r, &self.bht, &self.bth, s, ctx);
        invertible_entry(&mut r, "a_invertible", &self.a, ctx);
        if !r.passed("a_invertible") {
            return r;
        }
        edge_gencons(&mut r, &self.a, &self.b0(), &self.bth, &self.c, &self.d, ctx);
        if let Some(blocks) = TnBlocks::from_data_m0(self) {
            let bmid = self.b_mid().unwrap().to_c64();
            genericity_entries(&mut r, &blocks.to_c64(), &self.b0().to_c64(), Some(&bmid), ctx);
        }
        r
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> TaubNutDataM0<U> {
        TaubNutDataM0 { k: self.k, a: f(&self.a), bht: f(&self.bht), bth: f(&self.bth), c: f(&self.c), d: f(&self.d) }
    }

    pub fn to_c64(&self) -> TaubNutDataM0<C64> {
        self.map(|m| m.to_c64())
    }
}

fn check<T: Scalar>(want: &[(&str, &Matrix<T>, (usize, usize))]) -> Result<(), String> {
    for (name, mat, shape) in want {
        if mat.shape() != *shape {
            return Err(format!("{name} has shape {:?}, expected {:?}", mat.shape(), shape));
        }
    }
    Ok(())
}

/// `det(η − B_ht B_th) = det(η − B_th B_ht)`, compared coefficientwise.
fn charpoly_entry<T: Scalar>(r: &mut ValidationReport, bht: &Matrix<T>, bth: &Matrix<T>, scale: f64, ctx: &ToleranceContext) {
    let p0 = (bht * bth).char_poly();
    let p1 = (bth * bht).char_poly();
    let diff = Matrix::row(p0.iter().zip(&p1).map(|(x, y)| x.clone() - y.clone()).collect());
    let k = bht.rows() as i32;
    relation_entry(r, "charpoly_b0_b1", &diff, scale.powi(k.max(1)), ctx);
}

/// When `B_th` is invertible the data is gauge-equivalent on the edge to
/// caloron data `(B_th⁻¹A, B₀, B_th⁻¹C, D)`; its two pointwise conditions
/// are recorded as `gencon1`, `gencon2`. Otherwise the entries are omitted
/// and only the sampled genericity checks apply.
fn edge_gencons<T: Scalar>(
    r: &mut ValidationReport,
    a: &Matrix<T>,
    b0: &Matrix<T>,
    bth: &Matrix<T>,
    c: &Matrix<T>,
    d: &Matrix<T>,
    ctx: &ToleranceContext,
) {
    let Some(inv) = bth.inverse() else { return };
    let at = &inv * a;
    let ct = &inv * c;
    gencon_injective(r, "gencon1", &at, b0, d, ctx);
    crate::caloron::data::gencon_surjective(r, "gencon2", &at, b0, &ct, ctx);
}

const SAMPLE_SEED: u64 = 0x7a_0b;
const SAMPLES: usize = 100;

fn random_c(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

fn injective_at(m: &Matrix<C64>, ctx: &ToleranceContext) -> bool {
    m.cols() == 0 || matches!(rank(m, ctx), Ok(x) if x == m.cols())
}

fn surjective_at(m: &Matrix<C64>, ctx: &ToleranceContext) -> bool {
    m.rows() == 0 || matches!(rank(m, ctx), Ok(x) if x == m.rows())
}

/// Sampled pointwise checks:
/// * `monad_maps`: the fused monad has α injective and β surjective at
///   random points of X₀ and at points on every candidate jumping line;
/// * `gen1` / `gen2`: the ξ- and ψ-pushdown monads are exact on the ends
///   away from `ξ = 0` (resp. `ψ = 0`). The certificate records the
///   relative smallest singular value of β as the coordinate tends to 0.
fn genericity_entries(r: &mut ValidationReport, blocks: &TnBlocks<C64>, b0: &Matrix<C64>, mid: Option<&Matrix<C64>>, ctx: &ToleranceContext) {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let fused = fused_monad(blocks);
    let mut etas: Vec<C64> = crate::numkit::eigen::eigenvalues(b0);
    if let Some(mm) = mid {
        etas.extend(crate::numkit::eigen::eigenvalues(mm));
    }
    let mut pts: Vec<ChartPoint<C64>> = (0..SAMPLES).map(|_| ChartPoint::xi_psi(random_c(&mut rng, 2.0), random_c(&mut rng, 2.0))).collect();
    for e in &etas {
        let xi = random_c(&mut rng, 2.0) + C64::new(0.1, 0.0);
        pts.push(ChartPoint::xi_psi(xi, e / xi));
    }
    let mut bad = Vec::new();
    for p in &pts {
        let ev = fused.evaluate(p).expect("chart");
        if !(injective_at(&ev.alpha, ctx) && surjective_at(&ev.beta, ctx)) {
            bad.push(json!([[p.xi().re, p.xi().im], [p.eta().re, p.eta().im]]));
        }
    }
    r.push("monad_maps", bad.is_empty(), None, Some(json!({ "points": pts.len(), "failures": bad })));

    for (name, pm) in [("gen1", pushdown_xi_monad(blocks)), ("gen2", pushdown_psi_monad(blocks))] {
        let mut fails = 0usize;
        for _ in 0..SAMPLES {
            let coord = random_c(&mut rng, 2.0);
            if coord.norm() < 1e-3 {
                continue;
            }
            let eta = random_c(&mut rng, 2.0);
            let ev = pm.evaluate(&ChartPoint::xi_eta(coord, eta)).expect("chart");
            if !(injective_at(&ev.alpha, ctx) && surjective_at(&ev.beta, ctx)) {
                fails += 1;
            }
        }
        let eta = random_c(&mut rng, 2.0);
        let trend: Vec<f64> = (1..=6)
            .map(|j| {
                let ev = pm.evaluate(&ChartPoint::xi_eta(C64::new(10f64.powi(-j), 0.0), eta)).expect("chart");
                relative_min_singular(&ev.beta.transpose())
            })
            .collect();
        r.push(name, fails == 0, None, Some(json!({ "samples": SAMPLES, "failures": fails, "min_sv_trend": trend })));
    }
}
